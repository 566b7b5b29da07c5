#include "mrd/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

#include "mrd/spread.hpp"

namespace mrd {

namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint64_t count_rank_exactly(int q, int m, int n, int r) {
  std::uint64_t c = gaussian_binomial(m, r, q);
  for (int i = 0; i < r; ++i) c *= ipow(q, n) - ipow(q, i);
  return c;
}

// Every nonzero vector on the free coordinates whose lowest nonzero digit is 1.
template <class F>
void for_each_line(int q, std::uint64_t free_mask, F&& f) {
  FreeVectorOdometer odo(q, free_mask);
  while (odo.next()) {
    const PackedVec v = odo.current();
    if (v.digit(v.leading()) == 1) f(v);
  }
}

// Runs f(i) for i in [0, count) on `threads` workers, rethrowing the first error.
template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&]() {
      try {
        for (std::size_t i = next++; i < count; i = next++) f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!err) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) parent[b] = a;
    else parent[a] = b;
  }
};

std::vector<Automorphism> orbit_generators(const AdditiveCode& c, const Budget& budget) {
  auto g = automorphism_group(c, budget);
  if (g.generators.size() <= 32) return g.generators;
  std::mt19937_64 rng(0x0b17);
  std::vector<Automorphism> out;
  for (int i = 0; i < 32; ++i) out.push_back(g.generators[rng() % g.generators.size()]);
  return out;
}

// Lines of the frontier up to Aut(C); returns the smallest member of each orbit.
std::vector<PackedVec> orbit_representatives(const SearchNode& node, const Budget& budget) {
  const auto& fr = node.frontier;
  if (fr.empty()) return {};
  const AdditiveCode& c = node.code;
  const int q = c.q(), m = c.rows(), n = c.cols();
  UnionFind uf(fr.size());
  for (const auto& g : orbit_generators(c, budget)) {
    const PackedVec a = g.a.bits(), b = g.b.bits();
    for (std::size_t i = 0; i < fr.size(); ++i) {
      budget.tick();
      const PackedVec img = packed_mul(q, m, n, n, packed_mul(q, m, m, n, a, fr[i]), b);
      const PackedVec key = normalize_leading(q, c.space().reduce(img));
      const auto it = std::lower_bound(fr.begin(), fr.end(), key);
      if (it == fr.end() || *it != key) throw std::logic_error("automorphism does not preserve the frontier");
      uf.unite(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(it - fr.begin()));
    }
  }
  std::vector<PackedVec> reps;
  for (std::size_t i = 0; i < fr.size(); ++i)
    if (uf.find(static_cast<std::uint32_t>(i)) == i) reps.push_back(fr[i]);
  return reps;
}

}  // namespace

std::vector<PackedVec> low_rank_matrices(int q, int m, int n, int d) {
  std::vector<PackedVec> out;
  for (int r = 1; r < d && r <= std::min(m, n); ++r) {
    // X = B Y with B an echelon basis of the column space and Y of rank r
    std::vector<PackedVec> ys;
    FreeVectorOdometer odo(q, low_mask(r * n));
    do {
      if (packed_rank(q, r, n, odo.current()) == r) ys.push_back(odo.current());
    } while (odo.next());
    enumerate_subspaces(q, m, r, [&](const Subspace& u) {
      const auto& cols = u.basis();
      for (const PackedVec y : ys) {
        PackedVec x;
        for (int k = 0; k < r; ++k) {
          const PackedVec yrow = mask_vec(shr(y, k * n), low_mask(n));
          for (int i = 0; i < m; ++i) {
            const int bk = cols[k].digit(i);
            if (bk) x = add(q, x, scale(q, shl(yrow, i * n), bk));
          }
        }
        out.push_back(x);
      }
      return true;
    });
  }
  return out;
}

SearchNode SearchNode::root(const AdditiveCode& c, int d, int target_dim) {
  SearchNode node;
  node.code = c;
  node.d = d;
  node.target_dim = target_dim;
  node.stamp = c.canonical_bytes();
  const int q = c.q(), m = c.rows(), n = c.cols();
  const std::uint64_t free_mask = c.space().free_mask() & low_mask(m * n);
  std::uint64_t low = 0;
  for (int r = 1; r < d; ++r) low += count_rank_exactly(q, m, n, r);
  const std::uint64_t lines = (ipow(q, m * n - c.dim()) - 1) / (q - 1);
  if (lines * c.size() <= 4 * low) {
    // test every coset directly
    const auto words = codewords(c);
    for_each_line(q, free_mask, [&](PackedVec v) {
      for (const auto& w : words)
        if (packed_rank(q, m, n, add(q, v, w.bits())) < d) return;
      node.frontier.push_back(v);
    });
  } else {
    std::unordered_set<PackedVec, PackedVecHash> bad;
    for (const PackedVec x : low_rank_matrices(q, m, n, d)) {
      const PackedVec r = c.space().reduce(x);
      if (r.is_zero()) throw std::invalid_argument("code has minimum distance below d");
      bad.insert(normalize_leading(q, r));
    }
    for_each_line(q, free_mask, [&](PackedVec v) {
      if (!bad.count(v)) node.frontier.push_back(v);
    });
  }
  std::sort(node.frontier.begin(), node.frontier.end());
  return node;
}

SearchNode SearchNode::child(PackedVec x) const {
  const int q = code.q();
  SearchNode out;
  Subspace s = code.space();
  s.insert(x);
  out.code = AdditiveCode(q, code.rows(), code.cols(), std::move(s));
  out.d = d;
  out.target_dim = target_dim;
  out.stamp = out.code.canonical_bytes();
  auto in_frontier = [&](PackedVec v) {
    const PackedVec k = normalize_leading(q, v);
    return std::binary_search(frontier.begin(), frontier.end(), k);
  };
  for (const PackedVec v : frontier) {
    bool ok = true;
    for (int lam = 1; lam < q && ok; ++lam) ok = in_frontier(axpy(q, v, lam, x));
    if (!ok) continue;
    const PackedVec r = out.code.space().reduce(v);
    if (!r.is_zero()) out.frontier.push_back(normalize_leading(q, r));
  }
  std::sort(out.frontier.begin(), out.frontier.end());
  out.frontier.erase(std::unique(out.frontier.begin(), out.frontier.end()), out.frontier.end());
  return out;
}

bool SearchNode::can_reach_target() const {
  const int t = target_dim - code.dim();
  if (t <= 0) return true;
  const int q = code.q();
  return frontier.size() >= (ipow(q, t) - 1) / (q - 1);
}

namespace {

std::string hex(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

nlohmann::json checkpoint_header(const std::vector<AdditiveCode>& seeds, int d, int target_dim,
                                 const ExtensionOptions& opt, bool prune) {
  nlohmann::json h;
  h["format"] = "mrd-extension-checkpoint";
  h["version"] = 1;
  h["q"] = seeds[0].q();
  h["m"] = seeds[0].rows();
  h["n"] = seeds[0].cols();
  h["d"] = d;
  h["target_dim"] = target_dim;
  h["allow_transpose"] = opt.allow_transpose;
  h["prune"] = prune;
  nlohmann::json s = nlohmann::json::array();
  for (const auto& c : seeds) s.push_back(hex(c.canonical_bytes()));
  h["seeds"] = s;
  return h;
}

void write_checkpoint(const std::string& path, const nlohmann::json& header, const std::vector<ExtensionLevel>& levels) {
  nlohmann::json j = header;
  j["levels"] = nlohmann::json::array();
  for (const auto& lv : levels) {
    nlohmann::json l;
    l["dim"] = lv.dim;
    l["codes"] = nlohmann::json::array();
    for (const auto& c : lv.classes) l["codes"].push_back(to_code_file(c));
    j["levels"].push_back(l);
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write checkpoint " + path);
    out << j.dump(1) << '\n';
  }
  std::rename(tmp.c_str(), path.c_str());
}

std::optional<std::vector<ExtensionLevel>> read_checkpoint(const std::string& path, const nlohmann::json& header) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("checkpoint " + path + " is corrupt: " + e.what());
  }
  for (const auto& [key, value] : header.items())
    if (!j.contains(key) || j[key] != value)
      throw std::runtime_error("checkpoint " + path + " was written for different parameters (" + key + ")");
  std::vector<ExtensionLevel> levels;
  for (const auto& l : j.at("levels")) {
    ExtensionLevel lv;
    lv.dim = l.at("dim").get<int>();
    for (const auto& c : l.at("codes")) lv.classes.push_back(parse_code_file(c.get<std::string>()));
    levels.push_back(std::move(lv));
  }
  return levels;
}

std::vector<SearchNode> make_roots(const std::vector<AdditiveCode>& codes, int d, int target_dim, int threads) {
  std::vector<SearchNode> nodes(codes.size());
  parallel_for(codes.size(), threads, [&](std::size_t i) { nodes[i] = SearchNode::root(codes[i], d, target_dim); });
  return nodes;
}

}  // namespace

ExtensionResult extend_codes(const std::vector<AdditiveCode>& seeds_in, int d, int target_dim,
                             const ExtensionOptions& opt, bool prune_to_target) {
  if (seeds_in.empty()) throw std::invalid_argument("extension needs at least one seed");
  for (const auto& s : seeds_in)
    if (s.q() != seeds_in[0].q() || s.rows() != seeds_in[0].rows() || s.cols() != seeds_in[0].cols() ||
        s.dim() != seeds_in[0].dim())
      throw std::invalid_argument("seeds must share field, shape and dimension");
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<AdditiveCode> seeds = seeds_in;
  std::sort(seeds.begin(), seeds.end(),
            [](const AdditiveCode& a, const AdditiveCode& b) { return a.canonical_bytes() < b.canonical_bytes(); });
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  for (const auto& s : seeds)
    if (minimum_distance(s) < d) throw std::invalid_argument("seed has minimum distance below d");

  const nlohmann::json header = checkpoint_header(seeds, d, target_dim, opt, prune_to_target);
  ExtensionResult res;
  if (opt.resume && !opt.checkpoint_path.empty())
    if (auto levels = read_checkpoint(opt.checkpoint_path, header)) res.levels = std::move(*levels);
  if (res.levels.empty()) res.levels.push_back({seeds[0].dim(), seeds});

  std::vector<SearchNode> nodes = make_roots(res.levels.back().classes, d, target_dim, opt.threads);
  if (prune_to_target)
    std::erase_if(nodes, [](const SearchNode& nd) { return !nd.can_reach_target(); });
  ClassifyOptions co;
  co.isotopy_only = !opt.allow_transpose;
  co.threads = opt.threads;
  co.budget = opt.budget;

  try {
    while (res.levels.back().dim < target_dim && !res.levels.back().classes.empty()) {
      opt.budget.check();
      std::vector<std::vector<PackedVec>> reps(nodes.size());
      parallel_for(nodes.size(), opt.threads, [&](std::size_t i) {
        reps[i] = orbit_representatives(nodes[i], opt.budget);
      });
      std::vector<std::pair<std::size_t, PackedVec>> origin;
      std::vector<AdditiveCode> children;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        res.stats.orbit_candidates += nodes[i].frontier.size();
        for (const PackedVec x : reps[i]) {
          Subspace s = nodes[i].code.space();
          s.insert(x);
          children.emplace_back(nodes[i].code.q(), nodes[i].code.rows(), nodes[i].code.cols(), std::move(s));
          origin.emplace_back(i, x);
        }
      }
      res.stats.nodes += children.size();
      const auto report = classify_up_to_equivalence(children, co);
      std::vector<SearchNode> next(report.classes.size());
      parallel_for(report.classes.size(), opt.threads, [&](std::size_t k) {
        const auto& [pi, x] = origin[report.classes[k].representative_index];
        next[k] = nodes[pi].child(x);
      });
      if (prune_to_target)
        std::erase_if(next, [](const SearchNode& nd) { return !nd.can_reach_target(); });
      std::sort(next.begin(), next.end(), [](const SearchNode& a, const SearchNode& b) { return a.stamp < b.stamp; });
      ExtensionLevel lv;
      lv.dim = res.levels.back().dim + 1;
      for (const auto& nd : next) lv.classes.push_back(nd.code);
      res.levels.push_back(std::move(lv));
      nodes = std::move(next);
      if (!opt.checkpoint_path.empty()) write_checkpoint(opt.checkpoint_path, header, res.levels);
      if (opt.progress) opt.progress(res.levels.back().dim, res.levels.back().classes.size());
    }
  } catch (const BudgetExceeded&) {
    res.complete = false;
  }
  res.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<AdditiveCode> extend_code(const AdditiveCode& c, int d, int target_dim, const ExtensionOptions& opt) {
  if (target_dim < c.dim()) throw std::invalid_argument("target dimension below the code dimension");
  const auto res = extend_codes({c}, d, target_dim, opt, true);
  if (!res.complete) throw BudgetExceeded("extension: time budget exhausted");
  if (res.levels.back().dim != target_dim) return {};
  return res.levels.back().classes;
}

namespace {

using Poly = std::vector<int>;  // coefficients, constant term first

bool has_root(int q, const Poly& f) {
  for (int x = 0; x < q; ++x) {
    int v = 0;
    for (std::size_t i = f.size(); i-- > 0;) v = (v * x + f[i]) % q;
    if (v == 0) return true;
  }
  return false;
}

bool divides(int q, const Poly& g, Poly f) {
  // g monic
  const int dg = static_cast<int>(g.size()) - 1;
  for (int k = static_cast<int>(f.size()) - 1; k >= dg; --k) {
    const int c = f[k];
    if (!c) continue;
    for (int i = 0; i <= dg; ++i) f[k - dg + i] = ((f[k - dg + i] - c * g[i]) % q + q) % q;
  }
  for (int i = 0; i < dg; ++i)
    if (f[i]) return false;
  return true;
}

std::vector<Poly> monic_without_roots(int q, int deg) {
  std::vector<Poly> out;
  const std::uint64_t count = ipow(q, deg);
  for (std::uint64_t v = 0; v < count; ++v) {
    Poly f(deg + 1, 0);
    std::uint64_t x = v;
    for (int i = 0; i < deg; ++i) {
      f[i] = static_cast<int>(x % q);
      x /= q;
    }
    f[deg] = 1;
    if (!has_root(q, f)) out.push_back(f);
  }
  return out;
}

// Rational canonical forms (block companion matrices of invariant factors
// f_1 | f_2 | ...) of n x n matrices with no eigenvalue in F_q.
std::vector<MatrixGF> eigenvalue_free_conjugacy_classes(int q, int n) {
  std::vector<MatrixGF> out;
  std::vector<Poly> chain;
  std::function<void(int, Poly)> rec = [&](int remaining, Poly prev) {
    if (remaining == 0) {
      PackedVec bits;
      int off = 0;
      for (const auto& f : chain) {
        const int k = static_cast<int>(f.size()) - 1;
        for (int i = 1; i < k; ++i) bits.set_digit((off + i) * n + off + i - 1, 1);
        for (int i = 0; i < k; ++i) bits.set_digit((off + i) * n + off + k - 1, (q - f[i]) % q);
        off += k;
      }
      out.emplace_back(q, n, n, bits);
      return;
    }
    const int min_deg = prev.empty() ? 2 : static_cast<int>(prev.size()) - 1;
    for (int deg = min_deg; deg <= remaining; ++deg) {
      for (const auto& f : monic_without_roots(q, deg)) {
        if (!prev.empty() && !divides(q, prev, f)) continue;
        // the last factor takes everything that is left
        if (deg != remaining && remaining - deg < deg) continue;
        chain.push_back(f);
        rec(remaining - deg, f);
        chain.pop_back();
      }
    }
  };
  rec(n, {});
  return out;
}

}  // namespace

AdditiveCode tensorize(const AdditiveCode& c) {
  const int q = c.q(), m = c.rows(), n = c.cols();
  if (m > n) throw std::invalid_argument("tensorize expects rows <= cols");
  if (c.dim() != n || minimum_distance(c) != m)
    throw std::invalid_argument("tensorize expects an MRD code of dimension n with d = m");
  const auto e = c.basis();
  std::vector<MatrixGF> ts;
  for (int k = 0; k < m; ++k) {
    PackedVec bits;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) bits.set_digit(j * n + i, e[i].at(k, j));
    ts.emplace_back(q, n, n, bits);
  }
  return AdditiveCode::from_basis(ts);
}

AdditiveCode detensorize(const AdditiveCode& s, int m) {
  const int q = s.q(), n = s.rows();
  if (s.cols() != n || s.dim() != m || m > n)
    throw std::invalid_argument("detensorize expects an m-dimensional subspace of square matrices");
  const auto t = s.basis();
  std::vector<MatrixGF> es;
  for (int i = 0; i < n; ++i) {
    PackedVec bits;
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < n; ++j) bits.set_digit(k * n + j, t[k].at(j, i));
    es.emplace_back(q, m, n, bits);
  }
  AdditiveCode c = AdditiveCode::from_basis(es);
  if (c.dim() != n) throw std::invalid_argument("subspace has a singular nonzero member");
  return c;
}

std::vector<AdditiveCode> classify_invertible_subspaces(int q, int n, int m, const ExtensionOptions& opt) {
  if (m < 1 || m > n) throw std::invalid_argument("need 1 <= m <= n");
  const MatrixGF id = MatrixGF::identity(q, n);
  if (m == 1) return {AdditiveCode::from_basis({id})};
  std::vector<AdditiveCode> pencils;
  for (const auto& x : eigenvalue_free_conjugacy_classes(q, n)) pencils.push_back(AdditiveCode::from_basis({id, x}));
  ClassifyOptions co;
  co.isotopy_only = !opt.allow_transpose;
  co.threads = opt.threads;
  co.budget = opt.budget;
  std::vector<AdditiveCode> seeds;
  for (const auto& cls : classify_up_to_equivalence(pencils, co).classes) seeds.push_back(cls.representative);
  if (m == 2) {
    std::sort(seeds.begin(), seeds.end(),
              [](const AdditiveCode& a, const AdditiveCode& b) { return a.canonical_bytes() < b.canonical_bytes(); });
    return seeds;
  }
  const auto res = extend_codes(seeds, n, m, opt, true);
  if (!res.complete) throw BudgetExceeded("invertible subspace search: time budget exhausted");
  if (res.levels.back().dim != m) return {};
  return res.levels.back().classes;
}

std::vector<AdditiveCode> jump_extensions(const AdditiveCode& seed, int d, int target_dim, const Budget& budget,
                                          SearchStats* stats) {
  const int q = seed.q(), m = seed.rows(), n = seed.cols();
  const SearchNode node = SearchNode::root(seed, d, target_dim);
  if (target_dim == seed.dim()) return {seed};
  const auto group = automorphism_group(seed, budget);
  const bool use_group = group.complete;
  auto stamp = [&](const AdditiveCode& c) {
    std::string best = c.canonical_bytes();
    if (!use_group) return best;
    const auto basis = c.space().basis();
    for (const auto& g : group.generators) {
      std::vector<PackedVec> img;
      for (const auto& x : basis)
        img.push_back(packed_mul(q, m, n, n, packed_mul(q, m, m, n, g.a.bits(), x), g.b.bits()));
      std::string b = AdditiveCode(q, m, n, Subspace::span(q, m * n, img)).canonical_bytes();
      if (b < best) best = std::move(b);
    }
    return best;
  };
  std::map<std::string, AdditiveCode> found;
  for (const PackedVec r : orbit_representatives(node, budget)) {
    budget.check();
    const SearchNode ch = node.child(r);
    if (stats) ++stats->nodes;
    if (!ch.can_reach_target()) continue;
    const int t = target_dim - ch.code.dim();
    std::vector<AdditiveCode> codes;
    if (t == 0) {
      codes.push_back(ch.code);
    } else {
      std::vector<PackedVec> allowed;
      for (const PackedVec v : ch.frontier)
        for (int lam = 1; lam < q; ++lam) allowed.push_back(scale(q, v, lam));
      if (stats) stats->orbit_candidates += ch.frontier.size();
      for (const auto& w : subspaces_within(q, m * n, t, allowed, budget)) {
        Subspace sp = ch.code.space();
        for (const auto& v : w.basis()) sp.insert(v);
        codes.emplace_back(q, m, n, std::move(sp));
      }
    }
    for (auto& c : codes) {
      std::string key = stamp(c);
      found.emplace(std::move(key), std::move(c));
    }
  }
  std::vector<AdditiveCode> out;
  for (auto& [k, c] : found) out.push_back(std::move(c));
  return out;
}

ClassRecord make_class_record(const AdditiveCode& c, std::string provenance, bool with_aut_order) {
  ClassRecord r;
  r.representative = c;
  FingerprintOptions fo;
  fo.with_aut_order = with_aut_order;
  r.fp = fingerprint(c, fo);
  const auto check = is_mrd(c);
  r.mrd = check.mrd;
  r.d = check.d;
  r.provenance = std::move(provenance);
  return r;
}

std::vector<std::string> contained_seed_names(const AdditiveCode& c, const std::vector<Presemifield>& seeds,
                                              bool allow_transpose) {
  std::vector<std::string> names;
  if (c.rows() != c.cols()) return names;
  FingerprintOptions fo;
  fo.isotopy_only = !allow_transpose;
  std::vector<std::string> seed_keys;
  for (const auto& s : seeds) seed_keys.push_back(fingerprint(s.spread_set, fo).key());
  EquivalenceOptions eo;
  eo.allow_transpose = allow_transpose;
  for (const auto& sub : extract_semifield_subcodes(c)) {
    const std::string key = fingerprint(sub.spread_set, fo).key();
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (seed_keys[i] != key || !are_equivalent(seeds[i].spread_set, sub.spread_set, eo)) continue;
      names.push_back(seeds[i].name);
      break;
    }
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

std::optional<std::size_t> known_semifield_class_count(int q, int n) {
  static const std::map<std::pair<int, int>, std::size_t> known{
      {{2, 2}, 1}, {{2, 3}, 1}, {{3, 2}, 1}, {{3, 3}, 2}, {{2, 4}, 3}, {{2, 5}, 4}, {{3, 4}, 19}};
  const auto it = known.find({q, n});
  if (it == known.end()) return std::nullopt;
  return it->second;
}

namespace {

std::size_t distinct_classes(const std::vector<Presemifield>& seeds, int threads) {
  std::vector<AdditiveCode> codes;
  for (const auto& s : seeds) codes.push_back(s.spread_set);
  ClassifyOptions co;
  co.threads = threads;
  return classify_up_to_equivalence(codes, co).classes.size();
}

void check_seeds(int q, int n, const std::vector<Presemifield>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("no seed spread sets given");
  for (const auto& s : seeds)
    if (s.q != q || s.n != n) throw std::invalid_argument("seed " + s.name + " has the wrong order");
}

}  // namespace

Classification classify_dminus1(int q, int n, const std::vector<Presemifield>& seeds, const ExtensionOptions& opt) {
  check_seeds(q, n, seeds);
  const auto t0 = std::chrono::steady_clock::now();
  Classification out;
  out.params = {q, n, n, n - 1};
  std::vector<std::vector<AdditiveCode>> found(seeds.size());
  std::vector<SearchStats> stats(seeds.size());
  // per-seed results are checkpointed as they finish
  nlohmann::json ckpt;
  ckpt["format"] = "mrd-dminus1-checkpoint";
  ckpt["version"] = 1;
  ckpt["q"] = q;
  ckpt["n"] = n;
  ckpt["seeds"] = nlohmann::json::object();
  std::vector<bool> done(seeds.size(), false);
  if (opt.resume && !opt.checkpoint_path.empty()) {
    std::ifstream in(opt.checkpoint_path);
    if (in) {
      nlohmann::json old;
      try {
        in >> old;
      } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("checkpoint " + opt.checkpoint_path + " is corrupt: " + e.what());
      }
      if (old.value("format", "") != "mrd-dminus1-checkpoint" || old.value("q", 0) != q || old.value("n", 0) != n)
        throw std::runtime_error("checkpoint " + opt.checkpoint_path + " was written for different parameters");
      ckpt["seeds"] = old.at("seeds");
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const std::string key = hex(seeds[i].spread_set.canonical_bytes());
        if (!ckpt["seeds"].contains(key)) continue;
        for (const auto& c : ckpt["seeds"][key]) found[i].push_back(parse_code_file(c.get<std::string>()));
        done[i] = true;
      }
    }
  }
  std::mutex ckpt_mutex;
  parallel_for(seeds.size(), opt.threads, [&](std::size_t i) {
    if (done[i]) return;
    found[i] = jump_extensions(seeds[i].spread_set, n - 1, 2 * n, opt.budget, &stats[i]);
    if (opt.checkpoint_path.empty()) return;
    std::lock_guard<std::mutex> lock(ckpt_mutex);
    nlohmann::json codes = nlohmann::json::array();
    for (const auto& c : found[i]) codes.push_back(to_code_file(c));
    ckpt["seeds"][hex(seeds[i].spread_set.canonical_bytes())] = codes;
    const std::string tmp = opt.checkpoint_path + ".tmp";
    {
      std::ofstream out(tmp);
      out << ckpt.dump(1) << '\n';
    }
    std::rename(tmp.c_str(), opt.checkpoint_path.c_str());
  });
  std::vector<AdditiveCode> all;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out.stats.nodes += stats[i].nodes;
    out.stats.orbit_candidates += stats[i].orbit_candidates;
    if (!found[i].empty()) out.extending_seeds.push_back(seeds[i].name);
    all.insert(all.end(), found[i].begin(), found[i].end());
  }
  ClassifyOptions co;
  co.threads = opt.threads;
  co.budget = opt.budget;
  const auto report = classify_up_to_equivalence(all, co);
  std::vector<ClassRecord> records(report.classes.size());
  parallel_for(report.classes.size(), opt.threads, [&](std::size_t k) {
    records[k] = make_class_record(report.classes[k].representative, "extension");
    records[k].contained_seeds = contained_seed_names(report.classes[k].representative, seeds, true);
  });
  out.classes = std::move(records);
  const auto known = known_semifield_class_count(q, n);
  const bool catalog_complete = known && distinct_classes(seeds, opt.threads) >= *known;
  if (!catalog_complete) {
    out.complete = false;
    out.note = "seed catalog does not cover every semifield class; only codes containing a seed are listed";
  } else if (q == 2) {
    out.note = "complete: every binary MRD code with d = n - 1 contains a semifield spread set";
  } else if (q == 3 && n == 4) {
    out.note = "complete: every such code in M_4(F_3) contains a semifield spread set";
  } else {
    out.complete = false;
    out.note = "codes containing a semifield spread set";
  }
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Census quasi_mrd_census(int q, int n, int d, const std::vector<Presemifield>& seeds, const ExtensionOptions& opt_in) {
  check_seeds(q, n, seeds);
  if (d < 1 || d > n) throw std::invalid_argument("need 1 <= d <= n");
  ExtensionOptions opt = opt_in;
  opt.allow_transpose = false;
  Census out;
  out.params = {q, n, n, d};
  for (const auto& s : seeds) out.seed_names.push_back(s.name);
  std::vector<AdditiveCode> codes;
  for (const auto& s : seeds) codes.push_back(s.spread_set);
  const int top = n * (n - d + 1);
  const ExtensionResult res = extend_codes(codes, d, top, opt, false);
  std::vector<std::optional<std::size_t>> prev(seeds.size(), std::size_t{1});
  for (const auto& lv : res.levels) {
    CensusRow row;
    row.dim = lv.dim;
    row.classes = lv.classes.size();
    row.containing.assign(seeds.size(), std::nullopt);
    std::vector<std::vector<std::string>> names(lv.classes.size());
    parallel_for(lv.classes.size(), opt.threads,
                 [&](std::size_t k) { names[k] = contained_seed_names(lv.classes[k], seeds, false); });
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (!prev[i] || *prev[i] == 0) continue;
      std::size_t cnt = 0;
      for (const auto& nm : names)
        if (std::find(nm.begin(), nm.end(), seeds[i].name) != nm.end()) ++cnt;
      row.containing[i] = cnt;
    }
    prev = row.containing;
    out.rows.push_back(std::move(row));
  }
  if (!res.complete) {
    CensusRow pending;
    pending.dim = out.rows.back().dim + 1;
    pending.complete = false;
    out.rows.push_back(std::move(pending));
  }
  out.stats = res.stats;
  return out;
}

Classification classify_rectangular(int q, int m, int n, const ExtensionOptions& opt) {
  if (m > n) {
    Classification c = classify_rectangular(q, n, m, opt);
    c.params = {q, m, n, n};
    for (auto& r : c.classes) r = make_class_record(transpose(r.representative), r.provenance);
    return c;
  }
  if (m == n) return classify_semifields(q, n, opt, true).equivalence;
  const auto t0 = std::chrono::steady_clock::now();
  ExtensionOptions to = opt;
  to.allow_transpose = false;
  const auto spaces = classify_invertible_subspaces(q, n, m, to);
  Classification out;
  out.params = {q, m, n, m};
  out.classes.resize(spaces.size());
  parallel_for(spaces.size(), opt.threads,
               [&](std::size_t k) { out.classes[k] = make_class_record(detensorize(spaces[k], m), "tensor"); });
  out.note = "complete: exhaustive search over invertible subspaces";
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

SemifieldClassification classify_semifields(int q, int n, const ExtensionOptions& opt, bool allow_large) {
  if (!allow_large && ipow(q, n) > 32)
    throw std::invalid_argument("from-scratch semifield classification is limited to q^n <= 32");
  const auto t0 = std::chrono::steady_clock::now();
  ExtensionOptions to = opt;
  to.allow_transpose = false;
  SemifieldClassification out;
  out.isotopy_classes = classify_invertible_subspaces(q, n, n, to);
  ClassifyOptions co;
  co.threads = opt.threads;
  co.budget = opt.budget;
  const auto report = classify_up_to_equivalence(out.isotopy_classes, co);
  out.equivalence.params = {q, n, n, n};
  out.equivalence.classes.resize(report.classes.size());
  parallel_for(report.classes.size(), opt.threads, [&](std::size_t k) {
    out.equivalence.classes[k] = make_class_record(report.classes[k].representative, "tensor");
  });
  out.equivalence.note = "complete: exhaustive search over invertible subspaces";
  out.equivalence.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace mrd
