#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrd/catalog.hpp"
#include "mrd/classifier.hpp"
#include "mrd/constructions.hpp"
#include "mrd/equivalence.hpp"
#include "mrd/spread.hpp"

using namespace mrd;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitBudget = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string format = "table";
  int threads = 1;
  double time_limit = 0;
  std::string catalog;
  bool timing = false;
  bool schema = false;
  std::uint64_t seed = 1;
};

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path.empty() || path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

Budget budget_of(const Config& cfg) { return cfg.time_limit > 0 ? Budget::seconds(cfg.time_limit) : Budget{}; }

ExtensionOptions extension_options(const Config& cfg) {
  ExtensionOptions o;
  o.threads = cfg.threads;
  o.budget = budget_of(cfg);
  o.progress = [](int dim, std::size_t k) { std::cerr << "dimension " << dim << ": " << k << " classes\n"; };
  return o;
}

std::string catalog_path_for(const Config& cfg, int q, int n) {
  if (cfg.catalog.empty()) return bundled_catalog_path(q, n);
  if (std::filesystem::is_directory(cfg.catalog)) {
    std::uint64_t order = 1;
    for (int i = 0; i < n; ++i) order *= static_cast<std::uint64_t>(q);
    return cfg.catalog + "/order" + std::to_string(order) + ".txt";
  }
  return cfg.catalog;
}

std::vector<CatalogEntry> catalog_for(const Config& cfg, int q, int n) {
  const auto entries = load_catalog(catalog_path_for(cfg, q, n));
  for (const auto& e : entries)
    if (e.q != q || e.n != n) throw std::runtime_error("catalog entry " + e.name + " has the wrong order");
  return entries;
}

std::string distribution_text(const RankDistribution& r) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 1; i < r.counts.size(); ++i) {
    if (!r.counts[i]) continue;
    os << (first ? "" : ",") << i << ':' << r.counts[i];
    first = false;
  }
  return os.str();
}

json distribution_json(const RankDistribution& r) {
  json j = json::object();
  for (std::size_t i = 1; i < r.counts.size(); ++i)
    if (r.counts[i]) j[std::to_string(i)] = r.counts[i];
  return j;
}

void print_rows(const Config& cfg, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  if (cfg.format == "tsv") {
    for (std::size_t i = 0; i < header.size(); ++i) std::cout << (i ? "\t" : "") << header[i];
    std::cout << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "\t" : "") << r[i];
      std::cout << '\n';
    }
    return;
  }
  std::vector<std::size_t> w(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) w[i] = header[i].size();
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], r[i].size());
  auto line = [&](const std::vector<std::string>& r) {
    std::cout << '|';
    for (std::size_t i = 0; i < w.size(); ++i)
      std::cout << ' ' << std::left << std::setw(static_cast<int>(w[i])) << (i < r.size() ? r[i] : "") << " |";
    std::cout << '\n';
  };
  auto rule = [&]() {
    std::cout << '+';
    for (auto x : w) std::cout << std::string(x + 2, '-') << '+';
    std::cout << '\n';
  };
  rule();
  line(header);
  rule();
  for (const auto& r : rows) line(r);
  rule();
}

// ---------------------------------------------------------------- construct

struct ConstructArgs {
  std::string family;
  int q = 0, n = 0, k = 0;
  long s = 1;
  std::uint32_t eta = 0;
  long h = 0;
  bool have_eta = false;
  std::string entry;
};

int run_construct(const Config& cfg, const ConstructArgs& a) {
  if (a.family.empty()) throw UsageError("construct needs --family");
  if (a.family != "catalog" && (a.q == 0 || a.n == 0)) throw UsageError("construct needs --q and --n");
  AdditiveCode c;
  if (a.family == "dg") {
    c = delsarte_gabidulin(a.q, a.n, a.k, a.s);
  } else if (a.family == "tg") {
    const FieldCtx f(a.q, 1, a.n);
    Gf eta = f.element(a.eta);
    if (!a.have_eta) {
      const auto ok = admissible_tg_eta(f, a.k);
      for (Gf e : ok)
        if (e != f.zero()) {
          eta = e;
          break;
        }
    }
    c = twisted_gabidulin(a.q, a.n, a.k, a.s, eta, a.h);
  } else if (a.family == "tz") {
    const FieldCtx f(a.q, 1, a.n);
    const Gf eta = a.have_eta ? f.element(a.eta) : first_nonsquare_norm_element(f);
    c = trombetti_zhou(a.q, a.n, a.k, a.s, eta);
  } else if (a.family == "field") {
    c = field_spread_set(a.q, a.n).spread_set;
  } else if (a.family == "catalog") {
    if (a.entry.empty()) throw UsageError("--family catalog needs --entry");
    std::vector<CatalogEntry> entries;
    if (!cfg.catalog.empty() && !std::filesystem::is_directory(cfg.catalog)) entries = load_catalog(cfg.catalog);
    else if (a.q && a.n) entries = catalog_for(cfg, a.q, a.n);
    else throw UsageError("--family catalog needs --catalog FILE or --q and --n");
    const auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.name == a.entry; });
    if (it == entries.end()) throw std::runtime_error("no catalog entry named " + a.entry);
    c = it->presemifield().spread_set;
  } else {
    throw UsageError("unknown family '" + a.family + "' (dg, tg, tz, field, catalog)");
  }
  if (cfg.format == "json") {
    json j{{"q", c.q()}, {"m", c.rows()}, {"n", c.cols()}, {"dim", c.dim()}, {"code", to_code_file(c)}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << to_code_file(c);
  }
  return kExitOk;
}

// ------------------------------------------------------------------- verify

int run_verify(const Config& cfg, const std::string& path, int expect_d, bool allow_quasi) {
  AdditiveCode c;
  try {
    c = parse_code_file(read_input(path));
  } catch (const std::runtime_error& e) {
    std::cerr << "verify: " << e.what() << '\n';
    return kExitFail;
  }
  const int small = std::min(c.rows(), c.cols()), big = std::max(c.rows(), c.cols());
  if (c.dim() == 0) {
    std::cerr << "verify: the code is zero\n";
    return kExitFail;
  }
  const int d = minimum_distance(c);
  const auto mrd = is_mrd(c);
  const bool quasi = is_quasi_mrd(c);
  // distance an MRD code of this size would have
  int required = expect_d;
  if (required == 0) required = c.dim() % big == 0 ? small - c.dim() / big + 1 : d + 1;
  bool ok = mrd.mrd || (allow_quasi && quasi);
  if (expect_d) ok = ok && d == expect_d;
  std::optional<MatrixGF> offending;
  if (!ok) {
    CodewordEnumerator it(c);
    while (it.next())
      if (packed_rank(c.q(), c.rows(), c.cols(), it.current()) < required) {
        offending = c.matrix(it.current());
        break;
      }
  }
  if (cfg.format == "json") {
    json j{{"q", c.q()},   {"m", c.rows()},       {"n", c.cols()},   {"dim", c.dim()},
           {"d", d},       {"mrd", mrd.mrd},      {"quasi_mrd", quasi}, {"ok", ok}};
    if (offending) j["offending_codeword"] = to_text(*offending);
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "q=" << c.q() << " m=" << c.rows() << " n=" << c.cols() << " dim=" << c.dim() << " d=" << d
              << " mrd=" << (mrd.mrd ? "yes" : "no") << " quasi-mrd=" << (quasi ? "yes" : "no") << '\n';
    if (offending) std::cout << "codeword of rank " << rank(*offending) << " < " << required << ":\n" << to_text(*offending);
  }
  return ok ? kExitOk : kExitFail;
}

// --------------------------------------------------------------- invariants

int run_invariants(const Config& cfg, const std::string& path, bool with_aut) {
  const AdditiveCode c = parse_code_file(read_input(path));
  const auto rd = rank_distribution(c);
  const int d = c.dim() ? minimum_distance(c) : 0;
  const auto li = left_idealiser(c), ri = right_idealiser(c);
  FingerprintOptions fo;
  fo.with_aut_order = with_aut;
  const auto fp = fingerprint(c, fo);
  std::optional<std::size_t> subcodes;
  if (c.rows() == c.cols() && c.dim() >= c.rows()) subcodes = extract_semifield_subcodes(c, budget_of(cfg)).size();
  if (cfg.format == "json") {
    json j{{"q", c.q()},
           {"m", c.rows()},
           {"n", c.cols()},
           {"dim", c.dim()},
           {"d", d},
           {"mrd", is_mrd(c).mrd},
           {"rank_distribution", distribution_json(rd)},
           {"left_idealiser_order", li.order},
           {"right_idealiser_order", ri.order},
           {"fingerprint", fp.key()}};
    j["aut_order"] = fp.aut_order ? json(*fp.aut_order) : json(nullptr);
    j["semifield_subcodes"] = subcodes ? json(*subcodes) : json(nullptr);
    std::cout << j.dump(2) << '\n';
    return kExitOk;
  }
  std::vector<std::vector<std::string>> rows{
      {"shape", std::to_string(c.rows()) + "x" + std::to_string(c.cols()) + " over F_" + std::to_string(c.q())},
      {"dimension", std::to_string(c.dim())},
      {"minimum distance", std::to_string(d)},
      {"MRD", is_mrd(c).mrd ? "yes" : "no"},
      {"rank distribution", distribution_text(rd)},
      {"idealisers [left,right]", "[" + std::to_string(li.order) + "," + std::to_string(ri.order) + "]"},
      {"automorphism group order", fp.aut_order ? std::to_string(*fp.aut_order) : "-"},
      {"semifield subcodes", subcodes ? std::to_string(*subcodes) : "-"},
      {"fingerprint", fp.key()}};
  print_rows(cfg, {"invariant", "value"}, rows);
  return kExitOk;
}

// -------------------------------------------------------------------- equiv

int run_equiv(const Config& cfg, const std::string& p1, const std::string& p2, bool no_transpose) {
  const AdditiveCode c1 = parse_code_file(read_input(p1));
  const AdditiveCode c2 = parse_code_file(read_input(p2));
  EquivalenceOptions eo;
  eo.allow_transpose = !no_transpose;
  eo.budget = budget_of(cfg);
  const auto w = are_equivalent(c1, c2, eo);
  if (cfg.format == "json") {
    json j{{"equivalent", w.has_value()}};
    if (w) j["witness"] = {{"a", to_text(w->a)}, {"b", to_text(w->b)}, {"rho", w->rho}, {"transposed", w->transposed}};
    std::cout << j.dump(2) << '\n';
  } else if (w) {
    std::cout << "equivalent: C1 = A " << (w->transposed ? "C2^T" : "C2") << " B\nA =\n"
              << to_text(w->a) << "B =\n"
              << to_text(w->b);
  } else {
    std::cout << "not equivalent\n";
  }
  return w ? kExitOk : kExitFail;
}

// ------------------------------------------------------- extract-semifields

int run_extract(const Config& cfg, const std::string& path) {
  const AdditiveCode c = parse_code_file(read_input(path));
  const auto subs = extract_semifield_subcodes(c, budget_of(cfg));
  std::vector<CatalogEntry> entries;
  const std::string cat = catalog_path_for(cfg, c.q(), c.rows());
  if (std::filesystem::exists(cat)) entries = load_catalog(cat);
  const auto seeds = presemifields(entries);
  std::vector<std::vector<std::string>> rows;
  json arr = json::array();
  for (const auto& s : subs) {
    std::string eq = "-", iso = "-";
    if (!seeds.empty()) {
      const auto a = contained_seed_names(s.spread_set, seeds, true);
      const auto b = contained_seed_names(s.spread_set, seeds, false);
      if (!a.empty()) eq = a.front();
      if (!b.empty()) iso = b.front();
    }
    rows.push_back({s.name, eq, iso});
    arr.push_back({{"name", s.name}, {"equivalent_to", eq}, {"isotopic_to", iso}, {"code", to_code_file(s.spread_set)}});
  }
  if (cfg.format == "json") {
    std::cout << json{{"count", subs.size()}, {"subcodes", arr}}.dump(2) << '\n';
  } else {
    print_rows(cfg, {"subcode", "equivalent catalog entry", "isotopic catalog entry"}, rows);
    if (cfg.format == "table")
      for (const auto& s : subs) std::cout << "\n# " << s.name << '\n' << to_code_file(s.spread_set);
  }
  return kExitOk;
}

// ----------------------------------------------------------------- classify

void print_classification(const Config& cfg, Classification c) {
  if (!cfg.timing) c.stats.seconds = 0;
  if (cfg.format == "json") {
    std::cout << report_to_json(c);
    return;
  }
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < c.classes.size(); ++i) {
    const auto& r = c.classes[i];
    std::string seeds;
    for (const auto& s : r.contained_seeds) seeds += (seeds.empty() ? "" : ",") + s;
    const std::uint64_t q = static_cast<std::uint64_t>(c.params.q);
    auto order = [&](int dim) {
      std::uint64_t v = 1;
      for (int k = 0; k < dim; ++k) v *= q;
      return std::to_string(v);
    };
    rows.push_back({std::to_string(i + 1), std::to_string(r.representative.dim()), std::to_string(r.d),
                    r.mrd ? "yes" : "no", "[" + order(r.fp.left_idealiser_dim) + "," + order(r.fp.right_idealiser_dim) + "]",
                    r.fp.aut_order ? std::to_string(*r.fp.aut_order) : "-", seeds.empty() ? "-" : seeds});
  }
  if (cfg.format == "table")
    std::cout << "q=" << c.params.q << " m=" << c.params.m << " n=" << c.params.n << " d=" << c.params.d << ": "
              << c.classes.size() << " classes (" << (c.complete ? "complete" : "partial") << ")\n";
  print_rows(cfg, {"class", "dim", "d", "MRD", "[#I_l,#I_r]", "#Aut", "semifield subcodes"}, rows);
  if (cfg.format == "table") {
    if (!c.note.empty()) std::cout << c.note << '\n';
    if (!c.extending_seeds.empty()) {
      std::cout << "seeds with extensions:";
      for (const auto& s : c.extending_seeds) std::cout << ' ' << s;
      std::cout << '\n';
    }
    if (cfg.timing) std::cout << "nodes " << c.stats.nodes << ", " << c.stats.seconds << " s\n";
  }
}

struct ClassifyArgs {
  int q = 0, m = 0, n = 0, d = 0;
  bool isotopy_only = false;
  std::string resume, checkpoint;
  bool allow_large = false;
  std::string emit;  // "catalog" writes a catalog instead of a report
};

int run_classify(const Config& cfg, const ClassifyArgs& a) {
  if (!a.q || !a.m || !a.n || !a.d) throw UsageError("classify needs --q, --m, --n and --d");
  ExtensionOptions opt = extension_options(cfg);
  if (!a.resume.empty()) {
    opt.checkpoint_path = a.resume;
    opt.resume = true;
  } else if (!a.checkpoint.empty()) {
    opt.checkpoint_path = a.checkpoint;
  }
  const int small = std::min(a.m, a.n);
  if (a.m == a.n && a.d == a.n) {
    if (a.emit == "catalog") {
      const auto entries = build_catalog(a.q, a.n, opt);
      std::cout << format_catalog(entries, "Semifield spread sets of order " + std::to_string(a.q) + "^" +
                                               std::to_string(a.n) + ", one per isotopy class.\nGenerated by: mrdtool classify --q " +
                                               std::to_string(a.q) + " --m " + std::to_string(a.n) + " --n " +
                                               std::to_string(a.n) + " --d " + std::to_string(a.n) + " --emit catalog");
      return kExitOk;
    }
    const auto sc = classify_semifields(a.q, a.n, opt, a.allow_large);
    if (!a.isotopy_only) {
      print_classification(cfg, sc.equivalence);
      return kExitOk;
    }
    Classification iso;
    iso.params = sc.equivalence.params;
    iso.note = "isotopy classes (no transposition)";
    for (const auto& c : sc.isotopy_classes) iso.classes.push_back(make_class_record(c, "tensor"));
    print_classification(cfg, iso);
    return kExitOk;
  }
  if (a.m == a.n && a.d == a.n - 1) {
    if (a.isotopy_only) throw UsageError("--isotopy-only is supported for d = n and for census");
    const auto seeds = presemifields(catalog_for(cfg, a.q, a.n));
    print_classification(cfg, classify_dminus1(a.q, a.n, seeds, opt));
    return kExitOk;
  }
  if (a.m != a.n && a.d == small) {
    print_classification(cfg, classify_rectangular(a.q, a.m, a.n, opt));
    return kExitOk;
  }
  throw UsageError("supported parameters: d = m = n, d = n - 1 with m = n, or d = min(m, n) with m != n");
}

// ------------------------------------------------------------------- census

int run_census(const Config& cfg, int q, int n, int d, const std::string& checkpoint) {
  if (!q || !n || !d) throw UsageError("census needs --q, --n and --d");
  auto opt = extension_options(cfg);
  if (!checkpoint.empty()) {
    opt.checkpoint_path = checkpoint;
    opt.resume = true;
  }
  const auto entries = catalog_for(cfg, q, n);
  Census c = quasi_mrd_census(q, n, d, presemifields(entries), opt);
  if (!cfg.timing) c.stats.seconds = 0;
  if (cfg.format == "json") {
    std::cout << census_to_json(c);
  } else {
    // seeds with identical columns share one column
    auto cell = [](const std::optional<std::size_t>& x) { return x ? std::to_string(*x) : std::string("-"); };
    std::map<std::vector<std::string>, std::vector<std::string>> groups;
    std::vector<std::vector<std::string>> order;
    for (std::size_t i = 0; i < c.seed_names.size(); ++i) {
      std::vector<std::string> col;
      for (const auto& r : c.rows) col.push_back(r.complete ? cell(r.containing[i]) : "?");
      auto& g = groups[col];
      if (g.empty()) order.push_back(col);
      g.push_back(c.seed_names[i]);
    }
    std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) {
      // columns with longer runs of extensions first
      auto depth = [](const std::vector<std::string>& col) {
        int k = 0;
        for (const auto& v : col)
          if (v != "-" && v != "0") ++k;
        return k;
      };
      if (depth(x) != depth(y)) return depth(x) > depth(y);
      return x < y;
    });
    std::vector<std::string> header{"Dim", "#"};
    for (const auto& col : order) {
      std::string names;
      for (const auto& s : groups[col]) names += (names.empty() ? "" : ",") + s;
      header.push_back("C(" + names + ")");
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t r = 0; r < c.rows.size(); ++r) {
      std::vector<std::string> row{std::to_string(c.rows[r].dim),
                                   c.rows[r].complete ? std::to_string(c.rows[r].classes) : "?"};
      for (const auto& col : order) row.push_back(col[r]);
      rows.push_back(row);
    }
    print_rows(cfg, header, rows);
  }
  return c.rows.back().complete ? kExitOk : kExitBudget;
}

// ------------------------------------------------------------ catalog-check

int run_catalog_check(const Config& cfg, int q, int n) {
  std::string path;
  if (!cfg.catalog.empty() && !std::filesystem::is_directory(cfg.catalog)) path = cfg.catalog;
  else if (q && n) path = catalog_path_for(cfg, q, n);
  else throw UsageError("catalog-check needs --catalog FILE or --q and --n");
  std::vector<CatalogEntry> entries;
  try {
    entries = load_catalog(path);
  } catch (const CatalogError& e) {
    std::cerr << "catalog-check: " << e.what() << '\n';
    return kExitFail;
  }
  std::vector<AdditiveCode> codes;
  for (const auto& e : entries) codes.push_back(e.presemifield().spread_set);
  ClassifyOptions co;
  co.threads = cfg.threads;
  const auto eq = classify_up_to_equivalence(codes, co);
  co.isotopy_only = true;
  const auto iso = classify_up_to_equivalence(codes, co);
  const auto table = verify_catalog_against_families(entries);
  bool all_ok = iso.classes.size() == entries.size();
  std::vector<std::vector<std::string>> rows;
  json arr = json::array();
  for (const auto& a : table) {
    const bool checkable = a.detail != "no check available for this family";
    if (checkable && !a.verified) all_ok = false;
    rows.push_back({a.entry, a.claim, checkable ? (a.verified ? "ok" : "MISMATCH") : "unchecked", a.detail});
    arr.push_back({{"entry", a.entry}, {"claim", a.claim}, {"verified", a.verified}, {"detail", a.detail}});
  }
  if (cfg.format == "json") {
    std::cout << json{{"catalog", std::filesystem::path(path).filename().string()},
                      {"entries", entries.size()},
                      {"isotopy_classes", iso.classes.size()},
                      {"equivalence_classes", eq.classes.size()},
                      {"attributions", arr},
                      {"ok", all_ok}}
                     .dump(2)
              << '\n';
  } else {
    if (cfg.format == "table")
      std::cout << std::filesystem::path(path).filename().string() << ": " << entries.size() << " entries, "
                << iso.classes.size() << " isotopy classes, " << eq.classes.size() << " equivalence classes\n";
    print_rows(cfg, {"entry", "claim", "status", "detail"}, rows);
  }
  return all_ok ? kExitOk : kExitFail;
}

// ------------------------------------------------------------------- schema

json schema_of(const CLI::App* sub, const json& output) {
  json opts = json::array();
  for (const CLI::Option* o : sub->get_options()) {
    if (o->get_name() == "--help" || o->get_name() == "--schema") continue;
    opts.push_back({{"name", o->get_name()},
                    {"type", o->get_type_name().empty() ? "FLAG" : o->get_type_name()},
                    {"description", o->get_description()}});
  }
  return {{"command", sub->get_name()}, {"description", sub->get_description()}, {"options", opts}, {"output", output},
          {"exit_codes", {{"0", "success"}, {"1", "verification failure"}, {"2", "budget exhausted"}, {"64", "usage error"}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-metric code toolkit: constructions, verification, equivalence and classification"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json", "tsv"}));
  app.add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--time-limit", cfg.time_limit, "Time budget in seconds (0 = none)")->check(CLI::NonNegativeNumber);
  app.add_option("--catalog,--seed-catalog", cfg.catalog, "Catalog file or directory (default: bundled data)");
  app.add_flag("--timing", cfg.timing, "Include wall-clock statistics in the output");
  app.add_option("--seed", cfg.seed, "Seed for randomized utilities");

  std::map<std::string, json> outputs;
  auto add_sub = [&](const std::string& name, const std::string& desc, json output) {
    CLI::App* s = app.add_subcommand(name, desc);
    s->add_flag("--schema", cfg.schema, "Print a machine-readable description of this command and exit");
    outputs[name] = std::move(output);
    return s;
  };

  ConstructArgs ca;
  auto* construct = add_sub("construct", "Build a code from a known family and print it as a code file",
                            {{"table", "code file"}, {"json", "{q, m, n, dim, code}"}});
  construct->add_option("--family", ca.family, "dg, tg, tz, field or catalog");
  construct->add_option("--q", ca.q, "Field size (2 or 3)");
  construct->add_option("--n", ca.n, "Extension degree / matrix size");
  construct->add_option("--k", ca.k, "Number of Frobenius layers (d = n - k + 1)");
  construct->add_option("--s", ca.s, "Frobenius stride, coprime to n");
  construct->add_option("--eta", ca.eta, "Field element index (digits of the polynomial basis in base q)")
      ->each([&](const std::string&) { ca.have_eta = true; });
  construct->add_option("--twist", ca.h, "Twist exponent h for tg");
  construct->add_option("--entry", ca.entry, "Catalog entry name for --family catalog");

  std::string vpath = "-";
  int expect_d = 0;
  bool allow_quasi = false;
  auto* verify = add_sub("verify", "Check the minimum distance of a code file (stdin by default)",
                         {{"table", "summary line plus an offending codeword on failure"},
                          {"json", "{q, m, n, dim, d, mrd, quasi_mrd, ok, offending_codeword?}"}});
  verify->add_option("file", vpath, "Code file, - for stdin");
  verify->add_option("--d", expect_d, "Required minimum distance");
  verify->add_flag("--allow-quasi", allow_quasi, "Accept quasi-MRD codes");

  std::string ipath = "-";
  bool with_aut = true;
  auto* invariants = add_sub("invariants", "Rank distribution, idealisers, automorphism group order, fingerprint",
                             {{"json", "{rank_distribution, left_idealiser_order, right_idealiser_order, aut_order, ...}"}});
  invariants->add_option("file", ipath, "Code file, - for stdin");
  invariants->add_flag("!--no-aut", with_aut, "Skip the automorphism group");

  std::string e1, e2;
  bool no_transpose = false;
  auto* equiv = add_sub("equiv", "Decide equivalence of two codes and print a witness",
                        {{"json", "{equivalent, witness?: {a, b, rho, transposed}}"}});
  equiv->add_option("first", e1, "Code file C1");
  equiv->add_option("second", e2, "Code file C2");
  equiv->add_flag("--no-transpose", no_transpose, "Only X -> A X B");

  std::string xpath = "-";
  auto* extract = add_sub("extract-semifields", "List the semifield spread sets contained in a square code",
                          {{"json", "{count, subcodes: [{name, equivalent_to, isotopic_to, code}]}"}});
  extract->add_option("file", xpath, "Code file, - for stdin");

  ClassifyArgs cla;
  auto* classify = add_sub("classify", "Classify MRD codes up to equivalence",
                           {{"json", "versioned classification report"}, {"table", "one row per class"}});
  classify->add_option("--q", cla.q, "Field size");
  classify->add_option("--m", cla.m, "Rows");
  classify->add_option("--n", cla.n, "Columns");
  classify->add_option("--d", cla.d, "Minimum distance");
  classify->add_flag("--isotopy-only", cla.isotopy_only, "Exclude transposition (semifields)");
  classify->add_option("--resume", cla.resume, "Resume from (and keep writing) this checkpoint");
  classify->add_option("--checkpoint", cla.checkpoint, "Write a checkpoint here");
  classify->add_flag("--allow-large", cla.allow_large, "Allow from-scratch semifield search beyond order 32");
  classify->add_option("--emit", cla.emit, "'catalog' prints isotopy representatives as a catalog (d = m = n)")
      ->check(CLI::IsMember({"report", "catalog"}));

  int cq = 0, cn = 0, cd = 0;
  std::string cckpt;
  auto* census = add_sub("census", "Count codes of distance d containing each catalog spread set, per dimension",
                         {{"tsv", "Dim, #, then one column per group of seeds with identical counts"},
                          {"json", "versioned census report"}});
  census->add_option("--q", cq, "Field size");
  census->add_option("--n", cn, "Matrix size");
  census->add_option("--d", cd, "Minimum distance");
  census->add_option("--resume", cckpt, "Checkpoint file (resumed when present)");

  int kq = 0, kn = 0;
  auto* catcheck = add_sub("catalog-check", "Validate a catalog and re-check its metadata",
                           {{"json", "{entries, isotopy_classes, equivalence_classes, attributions, ok}"}});
  catcheck->add_option("--q", kq, "Field size (bundled catalog)");
  catcheck->add_option("--n", kn, "Degree (bundled catalog)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (cfg.schema) {
    std::cout << schema_of(sub, outputs[sub->get_name()]).dump(2) << '\n';
    return kExitOk;
  }
  try {
    const std::string name = sub->get_name();
    if (name == "construct") return run_construct(cfg, ca);
    if (name == "verify") return run_verify(cfg, vpath, expect_d, allow_quasi);
    if (name == "invariants") return run_invariants(cfg, ipath, with_aut);
    if (name == "equiv") {
      if (e1.empty() || e2.empty()) throw UsageError("equiv needs two code files");
      return run_equiv(cfg, e1, e2, no_transpose);
    }
    if (name == "extract-semifields") return run_extract(cfg, xpath);
    if (name == "classify") return run_classify(cfg, cla);
    if (name == "census") return run_census(cfg, cq, cn, cd, cckpt);
    if (name == "catalog-check") return run_catalog_check(cfg, kq, kn);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun with --help for details\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
