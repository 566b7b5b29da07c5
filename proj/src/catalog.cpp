#include "mrd/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mrd {

Presemifield CatalogEntry::presemifield() const { return make_presemifield(name, basis, source.empty() ? "catalog" : source); }

namespace {

bool blank(const std::string& s) { return s.find_first_not_of(" \t") == std::string::npos; }

bool digit_row(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

std::vector<CatalogEntry> parse_catalog(const std::string& text, const std::string& origin) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::vector<CatalogEntry> out;
  auto fail = [&](const std::string& msg, int at) -> void {
    throw CatalogError(origin + " line " + std::to_string(at) + ": " + msg, at);
  };
  // per-entry parse state
  enum class Want { name, shape, body } want = Want::name;
  std::vector<std::string> rows;
  auto finish = [&]() {
    if (out.empty() || want == Want::name) return;
    CatalogEntry& e = out.back();
    if (want == Want::shape) fail("entry '" + e.name + "' has no 'q n' line", lineno);
    if (!rows.empty()) fail("entry '" + e.name + "' ends inside a matrix", lineno);
    if (static_cast<int>(e.basis.size()) != e.n)
      fail("entry '" + e.name + "' has " + std::to_string(e.basis.size()) + " matrices, expected " + std::to_string(e.n),
           e.line);
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (blank(line)) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "name") {
      finish();
      CatalogEntry e;
      if (!(ls >> e.name)) fail("missing entry name", lineno);
      e.line = lineno;
      out.push_back(std::move(e));
      want = Want::shape;
      rows.clear();
      continue;
    }
    if (out.empty()) fail("expected 'name'", lineno);
    CatalogEntry& e = out.back();
    if (word == "source") {
      std::getline(ls >> std::ws, e.source);
      continue;
    }
    if (word == "meta") {
      std::string kv;
      while (ls >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) fail("metadata must be key=value, got '" + kv + "'", lineno);
        e.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      continue;
    }
    if (want == Want::shape) {
      std::istringstream ss(line);
      std::string extra;
      if (!(ss >> e.q >> e.n) || (ss >> extra)) fail("expected 'q n' for entry '" + e.name + "'", lineno);
      if (e.q != 2 && e.q != 3) fail("unsupported q=" + std::to_string(e.q), lineno);
      if (e.n < 1 || e.n > 8) fail("unsupported n=" + std::to_string(e.n), lineno);
      want = Want::body;
      continue;
    }
    if (!digit_row(line)) fail("unexpected line '" + line + "'", lineno);
    if (static_cast<int>(line.size()) != e.n)
      fail("matrix row '" + line + "' should have " + std::to_string(e.n) + " digits", lineno);
    for (char c : line)
      if (c - '0' >= e.q) fail(std::string("digit '") + c + "' is not in F_" + std::to_string(e.q), lineno);
    rows.push_back(line);
    if (static_cast<int>(rows.size()) == e.n) {
      if (static_cast<int>(e.basis.size()) == e.n) fail("entry '" + e.name + "' has too many matrices", lineno);
      e.basis.push_back(matrix_from_lines(e.q, rows));
      rows.clear();
    }
  }
  ++lineno;
  finish();

  std::set<std::string> names;
  std::map<std::string, std::string> spans;
  for (const auto& e : out) {
    if (!names.insert(e.name).second) fail("duplicate entry name '" + e.name + "'", e.line);
    const AdditiveCode c = AdditiveCode::from_basis(e.basis);
    if (c.dim() != e.n) fail("entry '" + e.name + "': basis matrices are linearly dependent", e.line);
    CodewordEnumerator it(c);
    while (it.next()) {
      if (packed_rank(e.q, e.n, e.n, it.current()) == e.n) continue;
      std::string m = to_text(c.matrix(it.current()));
      std::replace(m.begin(), m.end(), '\n', ' ');
      fail("entry '" + e.name + "' is not a semifield spread set: singular element " + m, e.line);
    }
    const auto [pos, fresh] = spans.emplace(c.canonical_bytes(), e.name);
    if (!fresh) fail("entry '" + e.name + "' spans the same space as '" + pos->second + "'", e.line);
  }
  return out;
}

std::vector<CatalogEntry> load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog " + path, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str(), path);
}

std::string format_catalog(const std::vector<CatalogEntry>& entries, const std::string& comment) {
  std::ostringstream os;
  if (!comment.empty()) {
    std::istringstream cs(comment);
    std::string l;
    while (std::getline(cs, l)) os << "# " << l << '\n';
  }
  for (const auto& e : entries) {
    os << "\nname " << e.name << '\n';
    if (!e.source.empty()) os << "source " << e.source << '\n';
    os << e.q << ' ' << e.n << '\n';
    if (!e.meta.empty()) {
      os << "meta";
      for (const auto& [k, v] : e.meta) os << ' ' << k << '=' << v;
      os << '\n';
    }
    for (std::size_t i = 0; i < e.basis.size(); ++i) {
      if (i) os << '\n';
      os << to_text(e.basis[i]);
    }
  }
  return os.str();
}

std::vector<Presemifield> presemifields(const std::vector<CatalogEntry>& entries) {
  std::vector<Presemifield> out;
  for (const auto& e : entries) out.push_back(e.presemifield());
  return out;
}

std::string catalog_dir() {
  if (const char* env = std::getenv("MRD_CATALOG_DIR"); env && *env) return env;
  return std::string(MRD_DATA_DIR) + "/catalog";
}

std::string bundled_catalog_path(int q, int n) { return catalog_dir() + "/order" + std::to_string(ipow(q, n)) + ".txt"; }

namespace {

std::optional<std::size_t> find_isotopic(const std::vector<AdditiveCode>& codes, const std::vector<std::string>& keys,
                                         const AdditiveCode& c) {
  FingerprintOptions fo;
  fo.isotopy_only = true;
  const std::string key = fingerprint(c, fo).key();
  EquivalenceOptions eo;
  eo.allow_transpose = false;
  for (std::size_t j = 0; j < codes.size(); ++j)
    if (keys[j] == key && are_equivalent(codes[j], c, eo)) return j;
  return std::nullopt;
}

}  // namespace

std::vector<CatalogEntry> build_catalog(int q, int n, const ExtensionOptions& opt) {
  ExtensionOptions io = opt;
  io.allow_transpose = false;
  const auto iso = classify_invertible_subspaces(q, n, n, io);
  FingerprintOptions fo;
  fo.isotopy_only = true;
  std::vector<std::string> keys;
  for (const auto& c : iso) keys.push_back(fingerprint(c, fo).key());
  const std::string order = std::to_string(ipow(q, n));
  const auto field = find_isotopic(iso, keys, field_spread_set(q, n).spread_set);
  if (!field) throw std::logic_error("field spread set missing from the search result");

  std::vector<CatalogEntry> out(iso.size());
  std::vector<std::size_t> tr(iso.size()), du(iso.size());
  int counter = 0;
  for (std::size_t i = 0; i < iso.size(); ++i) {
    auto& e = out[i];
    e.q = q;
    e.n = n;
    e.basis = iso[i].basis();
    e.source = "search";
    if (i == *field) {
      e.name = "F" + order;
      e.meta["family"] = "field";
    } else {
      std::ostringstream nm;
      nm << 'O' << order << '-' << std::setw(2) << std::setfill('0') << ++counter;
      e.name = nm.str();
    }
    const Presemifield s = make_presemifield(e.name, e.basis, "search");
    const auto t = find_isotopic(iso, keys, semifield_transpose(s).spread_set);
    const auto d = find_isotopic(iso, keys, semifield_dual(s).spread_set);
    if (!t || !d) throw std::logic_error("isotopy classes are not closed under transpose and dual");
    tr[i] = *t;
    du[i] = *d;
    e.meta["left_idealiser"] = std::to_string(left_idealiser(iso[i]).order);
    e.meta["right_idealiser"] = std::to_string(right_idealiser(iso[i]).order);
  }
  // Knuth orbits: components under transpose and dual
  std::vector<int> orbit(iso.size(), -1);
  int orbits = 0;
  for (std::size_t i = 0; i < iso.size(); ++i) {
    if (orbit[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    orbit[i] = orbits;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (std::size_t y : {tr[x], du[x]})
        if (orbit[y] < 0) {
          orbit[y] = orbits;
          stack.push_back(y);
        }
    }
    ++orbits;
  }
  for (std::size_t i = 0; i < iso.size(); ++i) {
    std::ostringstream k;
    k << 'K' << std::setw(2) << std::setfill('0') << orbit[i] + 1;
    out[i].meta["knuth"] = k.str();
    out[i].meta["transpose"] = out[tr[i]].name;
    out[i].meta["dual"] = out[du[i]].name;
  }
  return out;
}

std::vector<FamilyAttribution> verify_catalog_against_families(const std::vector<CatalogEntry>& entries) {
  std::vector<FamilyAttribution> out;
  std::map<std::string, const CatalogEntry*> by_name;
  for (const auto& e : entries) by_name[e.name] = &e;
  EquivalenceOptions iso;
  iso.allow_transpose = false;
  for (const auto& e : entries) {
    const Presemifield s = e.presemifield();
    for (const auto& [key, value] : e.meta) {
      FamilyAttribution a{e.name, key + "=" + value, false, ""};
      if (key == "family") {
        if (value == "field") {
          const bool eq = are_equivalent(field_spread_set(e.q, e.n).spread_set, s.spread_set).has_value();
          const auto order = left_idealiser(s.spread_set).order;
          a.verified = eq && order == ipow(e.q, e.n);
          a.detail = std::string(eq ? "equivalent" : "not equivalent") + " to the field spread set, left idealiser order " +
                     std::to_string(order);
        } else {
          a.detail = "no check available for this family";
        }
      } else if (key == "left_idealiser" || key == "right_idealiser") {
        const auto order =
            key == "left_idealiser" ? left_idealiser(s.spread_set).order : right_idealiser(s.spread_set).order;
        a.verified = std::to_string(order) == value;
        a.detail = "computed order " + std::to_string(order);
      } else if (key == "transpose" || key == "dual") {
        const auto it = by_name.find(value);
        if (it == by_name.end()) {
          a.detail = "no entry named " + value;
        } else {
          const Presemifield img = key == "transpose" ? semifield_transpose(s) : semifield_dual(s);
          a.verified = are_equivalent(it->second->presemifield().spread_set, img.spread_set, iso).has_value();
          a.detail = a.verified ? "isotopic" : "not isotopic";
        }
      } else {
        continue;
      }
      out.push_back(std::move(a));
    }
  }
  return out;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

nlohmann::json fingerprint_json(const Fingerprint& fp) {
  nlohmann::json j;
  j["key"] = fp.key();
  j["ranks"] = fp.ranks.counts;
  j["left_idealiser_dim"] = fp.left_idealiser_dim;
  j["right_idealiser_dim"] = fp.right_idealiser_dim;
  j["types"] = fp.types;
  j["aut_order"] = fp.aut_order ? nlohmann::json(*fp.aut_order) : nlohmann::json(nullptr);
  j["subcodes"] = fp.subcodes;
  j["isotopy_only"] = fp.isotopy_only;
  return j;
}

Fingerprint fingerprint_from_json(const nlohmann::json& j) {
  Fingerprint fp;
  fp.ranks.counts = j.at("ranks").get<std::vector<std::uint64_t>>();
  fp.left_idealiser_dim = j.at("left_idealiser_dim").get<int>();
  fp.right_idealiser_dim = j.at("right_idealiser_dim").get<int>();
  fp.types = j.at("types").get<std::vector<std::uint64_t>>();
  if (!j.at("aut_order").is_null()) fp.aut_order = j.at("aut_order").get<std::uint64_t>();
  fp.subcodes = j.at("subcodes").get<std::vector<std::string>>();
  fp.isotopy_only = j.at("isotopy_only").get<bool>();
  if (fp.key() != j.at("key").get<std::string>()) throw ReportError("report fingerprint does not match its key");
  return fp;
}

nlohmann::json stats_json(const SearchStats& s) {
  return {{"nodes", s.nodes}, {"orbit_candidates", s.orbit_candidates}, {"seconds", s.seconds}};
}

std::string envelope(const std::string& format, const nlohmann::json& payload) {
  nlohmann::json j;
  j["format"] = format;
  j["version"] = kReportVersion;
  j["payload"] = payload;
  j["checksum"] = hex64(fnv1a(payload.dump()));
  return j.dump(2) + "\n";
}

}  // namespace

std::string report_to_json(const Classification& c) {
  nlohmann::json p;
  p["params"] = {{"q", c.params.q}, {"m", c.params.m}, {"n", c.params.n}, {"d", c.params.d}};
  p["complete"] = c.complete;
  p["note"] = c.note;
  p["extending_seeds"] = c.extending_seeds;
  p["stats"] = stats_json(c.stats);
  p["classes"] = nlohmann::json::array();
  for (const auto& r : c.classes) {
    nlohmann::json k;
    k["code"] = to_code_file(r.representative);
    k["provenance"] = r.provenance;
    k["mrd"] = r.mrd;
    k["d"] = r.d;
    k["contained_seeds"] = r.contained_seeds;
    k["fingerprint"] = fingerprint_json(r.fp);
    p["classes"].push_back(k);
  }
  return envelope("mrd-classification-report", p);
}

Classification report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("report is corrupt or truncated: ") + e.what());
  }
  try {
    if (j.at("format") != "mrd-classification-report") throw ReportError("not a classification report");
    if (j.at("version").get<int>() != kReportVersion)
      throw ReportError("report version " + j.at("version").dump() + " is not supported (expected " +
                        std::to_string(kReportVersion) + ")");
    const auto& p = j.at("payload");
    if (hex64(fnv1a(p.dump())) != j.at("checksum").get<std::string>()) throw ReportError("report checksum mismatch");
    Classification c;
    const auto& pr = p.at("params");
    c.params = {pr.at("q").get<int>(), pr.at("m").get<int>(), pr.at("n").get<int>(), pr.at("d").get<int>()};
    c.complete = p.at("complete").get<bool>();
    c.note = p.at("note").get<std::string>();
    c.extending_seeds = p.at("extending_seeds").get<std::vector<std::string>>();
    const auto& st = p.at("stats");
    c.stats.nodes = st.at("nodes").get<std::uint64_t>();
    c.stats.orbit_candidates = st.at("orbit_candidates").get<std::uint64_t>();
    c.stats.seconds = st.at("seconds").get<double>();
    for (const auto& k : p.at("classes")) {
      ClassRecord r;
      r.representative = parse_code_file(k.at("code").get<std::string>());
      r.provenance = k.at("provenance").get<std::string>();
      r.mrd = k.at("mrd").get<bool>();
      r.d = k.at("d").get<int>();
      r.contained_seeds = k.at("contained_seeds").get<std::vector<std::string>>();
      r.fp = fingerprint_from_json(k.at("fingerprint"));
      c.classes.push_back(std::move(r));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ReportError(std::string("report is malformed: ") + e.what());
  }
}

void save_report(const Classification& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ReportError("cannot write report " + path);
  out << report_to_json(c);
}

Classification load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ReportError("cannot open report " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return report_from_json(ss.str());
}

std::string census_to_json(const Census& c) {
  nlohmann::json p;
  p["params"] = {{"q", c.params.q}, {"m", c.params.m}, {"n", c.params.n}, {"d", c.params.d}};
  p["seeds"] = c.seed_names;
  p["rows"] = nlohmann::json::array();
  for (const auto& r : c.rows) {
    nlohmann::json row;
    row["dim"] = r.dim;
    row["classes"] = r.complete ? nlohmann::json(r.classes) : nlohmann::json(nullptr);
    row["complete"] = r.complete;
    row["containing"] = nlohmann::json::array();
    for (const auto& x : r.containing) row["containing"].push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
    p["rows"].push_back(row);
  }
  p["stats"] = stats_json(c.stats);
  return envelope("mrd-census", p);
}

}  // namespace mrd
