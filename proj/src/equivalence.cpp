#include "mrd/equivalence.hpp"

#include <algorithm>
#include <array>
#include <exception>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mrd {

namespace {

std::uint64_t ipow64(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  h *= 0xBF58476D1CE4E5B9ull;
  return h ^ (h >> 31);
}

PackedVec mul(int q, int m, int k, int n, PackedVec a, PackedVec b) { return packed_mul(q, m, k, n, a, b); }

MatrixGF inverse_or_throw(const MatrixGF& m) {
  auto inv = inverse(m);
  if (!inv) throw std::logic_error("expected an invertible matrix");
  return *inv;
}

// Codewords of c, scaled so the leading entry is 1 (one per F_q^* orbit), that
// are invertible.
std::vector<PackedVec> invertible_representatives(const AdditiveCode& c) {
  std::vector<PackedVec> out;
  if (c.rows() != c.cols()) return out;
  const int n = c.rows(), q = c.q();
  CodewordEnumerator it(c);
  while (it.next()) {
    const PackedVec x = it.current();
    if (normalize_leading(q, x) != x) continue;
    if (packed_rank(q, n, n, x) == n) out.push_back(x);
  }
  return out;
}

std::optional<PackedVec> first_invertible(const AdditiveCode& c) {
  if (c.rows() != c.cols()) return std::nullopt;
  const int n = c.rows(), q = c.q();
  CodewordEnumerator it(c);
  while (it.next()) {
    const PackedVec x = it.current();
    if (normalize_leading(q, x) == x && packed_rank(q, n, n, x) == n) return x;
  }
  return std::nullopt;
}

// C Y^{-1} as a code (contains the identity when Y is in C).
AdditiveCode right_divide(const AdditiveCode& c, PackedVec y_inverse) {
  const int n = c.rows(), q = c.q();
  Subspace s(q, n * n);
  for (const auto& b : c.space().basis()) s.insert(mul(q, n, n, n, b, y_inverse));
  return AdditiveCode(q, n, n, std::move(s));
}

// Smallest key among the charpolys mu^n p((x - lambda) / mu) of mu Z + lambda I.
std::uint32_t orbit_key(int q, int n, const std::array<int, 9>& c) {
  std::uint32_t best = ~0u;
  for (int mu = 1; mu < q; ++mu) {
    const int a = mu;  // 1/mu for q in {2, 3}
    int mun = 1;
    for (int i = 0; i < n; ++i) mun = mun * mu % q;
    for (int lambda = 0; lambda < q; ++lambda) {
      const int b = (q - lambda * a % q) % q;
      std::array<int, 9> r{};
      for (int i = n; i >= 0; --i) {
        // r = r * (a x + b) + c_i
        for (int d = n; d >= 1; --d) r[d] = (r[d] * b + r[d - 1] * a) % q;
        r[0] = (r[0] * b + c[i]) % q;
      }
      std::uint32_t key = 0;
      for (int d = n - 1; d >= 0; --d) key = key * q + static_cast<std::uint32_t>(r[d] * mun % q);
      best = std::min(best, key);
    }
  }
  return best;
}

// Equations (over the n*n entries of A) expressing A g = h A.
void add_commutation_equations(Subspace& eq, int q, int n, PackedVec g, PackedVec h) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      PackedVec row;
      for (int t = 0; t < n; ++t) {
        const int gc = g.digit(t * n + j);
        if (gc) row.set_digit(i * n + t, (row.digit(i * n + t) + gc) % q);
        const int hc = h.digit(i * n + t);
        if (hc) row.set_digit(t * n + j, (row.digit(t * n + j) + q - hc) % q);
      }
      if (!row.is_zero()) eq.insert(row);
    }
  }
}

// Linear equations on B (n x n) expressing M B in C1 for all M in `ms`
// (m x n matrices), using parity checks of C1.
Subspace equations_for_right_factor(const AdditiveCode& c1, const std::vector<PackedVec>& ms) {
  const int q = c1.q(), m = c1.rows(), n = c1.cols();
  const Subspace checks = c1.space().orthogonal();
  Subspace eq(q, n * n);
  for (const auto& mm : ms) {
    const PackedVec mt = packed_transpose(m, n, mm);  // n x m
    for (const auto& h : checks.basis()) {
      eq.insert(mul(q, n, m, n, mt, h));  // (M^T H)_{tc} is the coefficient of B_{tc}
      if (eq.dim() == n * n) return eq;
    }
  }
  return eq;
}

struct ConjugacySearch {
  int q, n;
  const AdditiveCode& d;
  const AdditiveCode& e;
  const Budget& budget;
  std::vector<std::vector<PackedVec>> buckets;  // elements of e by charpoly key
  std::vector<PackedVec> gs;                    // elements of d to branch on
  std::vector<PackedVec> d_basis;
  std::uint64_t visited = 0;
  bool stop = false;

  ConjugacySearch(const AdditiveCode& d_, const AdditiveCode& e_, const Budget& b)
      : q(d_.q()), n(d_.rows()), d(d_), e(e_), budget(b) {}

  // Returns false if the charpoly multisets of d and e differ.
  bool prepare() {
    const std::size_t keys = static_cast<std::size_t>(ipow64(q, n));
    buckets.assign(keys, {});
    std::vector<std::uint32_t> dcount(keys, 0);
    {
      CodewordEnumerator it(e);
      do buckets[charpoly_key(q, n, it.current())].push_back(it.current());
      while (it.next());
    }
    std::vector<std::pair<std::uint64_t, PackedVec>> ranked;
    {
      CodewordEnumerator it(d);
      do {
        const auto key = charpoly_key(q, n, it.current());
        ++dcount[key];
        ranked.emplace_back(key, it.current());
      } while (it.next());
    }
    for (std::size_t k = 0; k < keys; ++k)
      if (dcount[k] != buckets[k].size()) return false;
    // prefer elements with few candidate images
    std::stable_sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
      return buckets[a.first].size() < buckets[b.first].size();
    });
    const PackedVec id = MatrixGF::identity(q, n).bits();
    Subspace spanned(q, n * n);
    spanned.insert(id);
    for (const auto& [key, g] : ranked) {
      if (spanned.contains(g)) continue;
      spanned.insert(g);
      gs.push_back(g);
    }
    d_basis = d.space().basis();
    return true;
  }

  void enumerate(const Subspace& eq, const std::function<bool(const MatrixGF&)>& f) {
    const Subspace sol = Subspace::nullspace(q, n * n, eq.basis());
    sol.for_each_element([&](PackedVec a) {
      if (stop) return;
      budget.tick();
      if (a.is_zero() || packed_rank(q, n, n, a) != n) return;
      const MatrixGF am(q, n, n, a);
      const PackedVec ai = inverse_or_throw(am).bits();
      for (const auto& g : d_basis)
        if (!e.contains(mul(q, n, n, n, mul(q, n, n, n, a, g), ai))) return;
      ++visited;
      if (!f(am)) stop = true;
    });
  }

  void search(std::size_t level, const Subspace& eq, const std::function<bool(const MatrixGF&)>& f) {
    if (stop) return;
    budget.tick();
    const int free_dim = n * n - eq.dim();
    if (free_dim == 0) return;
    if (level == gs.size() || ipow64(q, free_dim) <= 729) {
      enumerate(eq, f);
      return;
    }
    const PackedVec g = gs[level];
    for (const PackedVec h : buckets[charpoly_key(q, n, g)]) {
      Subspace next = eq;
      add_commutation_equations(next, q, n, g, h);
      search(level + 1, next, f);
      if (stop) return;
    }
  }
};

// Searches for invertible A (m x m) and B (n x n) with A C2 B = C1 by running
// over GL(m) and solving for B.  Requires m <= n.
std::optional<EquivalenceWitness> equivalence_by_gl_enumeration(const AdditiveCode& c1, const AdditiveCode& c2,
                                                                const Budget& budget) {
  const int q = c1.q(), m = c1.rows(), n = c1.cols();
  std::optional<EquivalenceWitness> found;
  const auto basis2 = c2.space().basis();
  for_each_invertible(q, m, [&](const MatrixGF& a) {
    budget.tick();
    std::vector<PackedVec> ms;
    for (const auto& x : basis2) ms.push_back(mul(q, m, m, n, a.bits(), x));
    const Subspace eq = equations_for_right_factor(c1, ms);
    if (eq.dim() == n * n) return true;
    const Subspace sol = Subspace::nullspace(q, n * n, eq.basis());
    bool stop = false;
    sol.for_each_element([&](PackedVec b) {
      if (stop) return;
      budget.tick();
      if (packed_rank(q, n, n, b) != n) return;
      found = EquivalenceWitness{a, MatrixGF(q, n, n, b), 0, false};
      stop = true;
    });
    return !found.has_value();
  });
  return found;
}

std::optional<EquivalenceWitness> equivalence_by_invertibles(const AdditiveCode& c1, const AdditiveCode& c2,
                                                             PackedVec y, const Budget& budget) {
  const int q = c1.q(), n = c1.rows();
  const MatrixGF ym(q, n, n, y);
  const PackedVec yi = inverse_or_throw(ym).bits();
  const AdditiveCode d1 = right_divide(c1, yi);
  const std::uint64_t type1 = detail::conjugacy_type(c1, MatrixGF(q, n, n, yi));
  for (const PackedVec x : invertible_representatives(c2)) {
    budget.check();
    const MatrixGF xi = inverse_or_throw(MatrixGF(q, n, n, x));
    if (detail::conjugacy_type(c2, xi) != type1) continue;
    const AdditiveCode d2 = right_divide(c2, xi.bits());
    std::optional<MatrixGF> a;
    detail::conjugations(d2, d1, [&](const MatrixGF& sol) {
      a = sol;
      return false;
    }, budget);
    if (a) {
      // A C2 X^{-1} A^{-1} = C1 Y^{-1}  =>  C1 = A C2 (X^{-1} A^{-1} Y)
      const MatrixGF b = xi * inverse_or_throw(*a) * ym;
      return EquivalenceWitness{*a, b, 0, false};
    }
  }
  return std::nullopt;
}

}  // namespace

std::uint64_t gl_order(int n, int q) {
  std::uint64_t r = 1;
  const std::uint64_t qn = ipow64(q, n);
  for (int i = 0; i < n; ++i) r *= qn - ipow64(q, i);
  return r;
}

void for_each_invertible(int q, int n, const std::function<bool(const MatrixGF&)>& f) {
  if (ipow64(q, n * n) > (std::uint64_t{1} << 24)) throw std::invalid_argument("GL enumeration too large");
  // build row by row, each row outside the span of the previous ones
  std::vector<PackedVec> rows(n);
  const std::uint64_t row_count = ipow64(q, n);
  std::vector<PackedVec> all_rows;
  for (std::uint64_t v = 0; v < row_count; ++v) {
    PackedVec r;
    std::uint64_t x = v;
    for (int j = 0; j < n; ++j) {
      r.set_digit(j, static_cast<int>(x % q));
      x /= q;
    }
    all_rows.push_back(r);
  }
  bool stop = false;
  std::function<void(int, const Subspace&)> rec = [&](int i, const Subspace& span) {
    if (stop) return;
    if (i == n) {
      PackedVec bits;
      for (int r = 0; r < n; ++r) bits = vor(bits, shl(rows[r], r * n));
      if (!f(MatrixGF(q, n, n, bits))) stop = true;
      return;
    }
    for (const auto& r : all_rows) {
      if (span.contains(r)) continue;
      rows[i] = r;
      Subspace next = span;
      next.insert(r);
      rec(i + 1, next);
      if (stop) return;
    }
  };
  rec(0, Subspace(q, n));
}

AdditiveCode apply_witness(const AdditiveCode& c2, const EquivalenceWitness& w) {
  if (w.rho != 0) throw std::invalid_argument("field automorphisms are trivial over a prime field");
  return transform(w.transposed ? transpose(c2) : c2, w.a, w.b);
}

Idealiser left_idealiser(const AdditiveCode& c) {
  const int q = c.q(), m = c.rows(), n = c.cols();
  if (m * m > kMaxCoords) throw std::invalid_argument("idealiser too large");
  const Subspace checks = c.space().orthogonal();
  Subspace eq(q, m * m);
  for (const auto& x : c.space().basis()) {
    const PackedVec xt = packed_transpose(m, n, x);
    for (const auto& h : checks.basis()) eq.insert(mul(q, m, n, m, h, xt));  // (H X^T)_{rt}
  }
  const Subspace sol = Subspace::nullspace(q, m * m, eq.basis());
  Idealiser out;
  out.dim = sol.dim();
  out.order = ipow64(q, out.dim);
  for (const auto& b : sol.basis()) out.basis.emplace_back(q, m, m, b);
  return out;
}

Idealiser right_idealiser(const AdditiveCode& c) {
  const int q = c.q(), m = c.rows(), n = c.cols();
  if (n * n > kMaxCoords) throw std::invalid_argument("idealiser too large");
  const Subspace checks = c.space().orthogonal();
  Subspace eq(q, n * n);
  for (const auto& x : c.space().basis()) {
    const PackedVec xt = packed_transpose(m, n, x);
    for (const auto& h : checks.basis()) eq.insert(mul(q, n, m, n, xt, h));  // (X^T H)_{tc}
  }
  const Subspace sol = Subspace::nullspace(q, n * n, eq.basis());
  Idealiser out;
  out.dim = sol.dim();
  out.order = ipow64(q, out.dim);
  for (const auto& b : sol.basis()) out.basis.emplace_back(q, n, n, b);
  return out;
}

namespace detail {

std::uint64_t conjugations(const AdditiveCode& d, const AdditiveCode& e,
                           const std::function<bool(const MatrixGF&)>& f, const Budget& budget) {
  if (d.rows() != d.cols() || !(d.rows() == e.rows() && d.cols() == e.cols()) || d.dim() != e.dim()) return 0;
  ConjugacySearch s(d, e, budget);
  if (!s.prepare()) return 0;
  s.search(0, Subspace(d.q(), d.rows() * d.rows()), f);
  return s.visited;
}

std::uint64_t conjugacy_type(const AdditiveCode& c, const MatrixGF& y_inverse) {
  const int q = c.q(), n = c.rows();
  const AdditiveCode dd = right_divide(c, y_inverse.bits());
  // Charpolys of mu Z + lambda I follow from that of Z, so one element per
  // such orbit suffices; each orbit is keyed by its smallest charpoly.
  Subspace with_id(q, n * n);
  with_id.insert(MatrixGF::identity(q, n).bits());
  std::vector<PackedVec> comp;
  for (const auto& b : dd.space().basis())
    if (with_id.insert(b)) comp.push_back(b);
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(ipow64(q, n)), 0);
  std::vector<int> digits(comp.size(), 0);
  PackedVec cur;
  std::array<int, 9> cp{};
  while (true) {
    std::size_t i = 0;
    for (; i < comp.size(); ++i) {
      cur = add(q, cur, comp[i]);
      if (++digits[i] < q) break;
      digits[i] = 0;
    }
    if (i == comp.size()) break;
    int lead = 0;
    for (std::size_t j = comp.size(); j-- > 0;)
      if (digits[j]) {
        lead = digits[j];
        break;
      }
    if (lead != 1) continue;
    charpoly_coeffs(q, n, cur, cp);
    ++counts[orbit_key(q, n, cp)];
  }
  std::uint64_t h = 0x1234567ull;
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k]) h = mix(mix(h, k), counts[k]);
  return h;
}

}  // namespace detail

std::optional<EquivalenceWitness> are_equivalent(const AdditiveCode& c1_in, const AdditiveCode& c2_in,
                                                 const EquivalenceOptions& opt) {
  if (c1_in.q() != c2_in.q() || c1_in.dim() != c2_in.dim()) return std::nullopt;
  AdditiveCode c2 = c2_in;
  bool pre_transposed = false;
  if (c1_in.rows() != c2.rows() || c1_in.cols() != c2.cols()) {
    if (c1_in.rows() != c2.cols() || c1_in.cols() != c2.rows() || !opt.allow_transpose) return std::nullopt;
    c2 = transpose(c2);
    pre_transposed = true;
  }
  if (rank_distribution(c1_in) != rank_distribution(c2)) return std::nullopt;
  // Work with rows <= cols; undo at the end.
  const bool swap_sides = c1_in.rows() > c1_in.cols();
  const AdditiveCode c1 = swap_sides ? transpose(c1_in) : c1_in;
  if (swap_sides) c2 = transpose(c2);
  const bool square = c1.rows() == c1.cols();

  auto finish = [&](EquivalenceWitness w, bool branch_transposed) {
    // c1 = A c2' B with c2' = c2 or c2^T (in the possibly swapped frame)
    if (swap_sides) w = EquivalenceWitness{transpose(w.b), transpose(w.a), 0, branch_transposed};
    else w.transposed = branch_transposed;
    if (pre_transposed) w.transposed = !w.transposed;
    if (!(apply_witness(c2_in, w) == c1_in)) throw std::logic_error("equivalence witness failed verification");
    return w;
  };

  std::vector<bool> branches{false};
  if (square && opt.allow_transpose) branches.push_back(true);
  const auto y = first_invertible(c1);
  for (bool t : branches) {
    const AdditiveCode c2b = t ? transpose(c2) : c2;
    std::optional<EquivalenceWitness> w;
    if (y) {
      w = equivalence_by_invertibles(c1, c2b, *y, opt.budget);
    } else {
      w = equivalence_by_gl_enumeration(c1, c2b, opt.budget);
    }
    if (w) return finish(*w, t);
  }
  return std::nullopt;
}

AutomorphismGroup automorphism_group(const AdditiveCode& c_in, const Budget& budget) {
  const bool swap_sides = c_in.rows() > c_in.cols();
  const AdditiveCode c = swap_sides ? transpose(c_in) : c_in;
  const int q = c.q(), m = c.rows(), n = c.cols();
  AutomorphismGroup g;
  std::mt19937_64 rng(0x5eed);
  auto emit = [&](const MatrixGF& a, const MatrixGF& b) {
    if (swap_sides) g.generators.push_back({transpose(b), transpose(a)});
    else g.generators.push_back({a, b});
  };
  const auto y = first_invertible(c);
  if (!y) {
    // no invertible codeword: run over GL(m) and count invertible B
    std::vector<std::pair<MatrixGF, MatrixGF>> all;
    const auto basis = c.space().basis();
    for_each_invertible(q, m, [&](const MatrixGF& a) {
      budget.tick();
      std::vector<PackedVec> ms;
      for (const auto& x : basis) ms.push_back(mul(q, m, m, n, a.bits(), x));
      const Subspace eq = equations_for_right_factor(c, ms);
      if (eq.dim() == n * n) return true;
      Subspace::nullspace(q, n * n, eq.basis()).for_each_element([&](PackedVec b) {
        budget.tick();
        if (packed_rank(q, n, n, b) != n) return;
        ++g.order;
        if (all.size() < 100000) all.emplace_back(a, MatrixGF(q, n, n, b));
      });
      return true;
    });
    g.complete = all.size() == g.order;
    for (const auto& [a, b] : all) emit(a, b);
    return g;
  }
  const MatrixGF ym(q, n, n, *y);
  const MatrixGF yi = inverse_or_throw(ym);
  const AdditiveCode dy = right_divide(c, yi.bits());
  std::vector<MatrixGF> normaliser;
  detail::conjugations(dy, dy, [&](const MatrixGF& a) {
    normaliser.push_back(a);
    return true;
  }, budget);
  const std::uint64_t type_y = detail::conjugacy_type(c, yi);
  // (A_X, X^{-1} A_X^{-1} Y) for one A_X per admissible X
  std::vector<std::pair<MatrixGF, MatrixGF>> coset_reps;
  for (const PackedVec x : invertible_representatives(c)) {
    budget.check();
    const MatrixGF xi = inverse_or_throw(MatrixGF(q, n, n, x));
    if (detail::conjugacy_type(c, xi) != type_y) continue;
    std::optional<MatrixGF> a;
    detail::conjugations(right_divide(c, xi.bits()), dy, [&](const MatrixGF& s) {
      a = s;
      return false;
    }, budget);
    if (a) coset_reps.emplace_back(*a, xi * inverse_or_throw(*a) * ym);
  }
  // every scalar multiple of X gives the same coset count
  g.order = coset_reps.size() * static_cast<std::uint64_t>(q - 1) * normaliser.size();
  // Elements (N A_X, X^{-1} A_X^{-1} N^{-1} Y) with X also running over scalars.
  const std::uint64_t listed_limit = 30000;
  if (g.order <= listed_limit) {
    for (const auto& [ax, bx] : coset_reps)
      for (int s = 1; s < q; ++s)
        for (const auto& nn : normaliser) {
          const MatrixGF a = nn * ax;
          // B = X^{-1} A_X^{-1} N^{-1} Y with X scaled by s: scale B by s^{-1} = s
          const MatrixGF b = scale(bx * yi * inverse_or_throw(nn) * ym, s);
          emit(a, b);
        }
    g.complete = true;
  } else {
    for (int i = 0; i < 16; ++i) {
      const auto& [ax, bx] = coset_reps[rng() % coset_reps.size()];
      const auto& nn = normaliser[rng() % normaliser.size()];
      const int s = 1 + static_cast<int>(rng() % (q - 1));
      emit(nn * ax, scale(bx * yi * inverse_or_throw(nn) * ym, s));
    }
    for (const auto& [ax, bx] : coset_reps) {
      if (g.generators.size() > 64) break;
      emit(ax, bx);
    }
  }
  return g;
}

std::string Fingerprint::key() const {
  std::ostringstream os;
  os << "r";
  for (auto x : ranks.counts) os << ':' << x;
  os << "|i" << left_idealiser_dim << ',' << right_idealiser_dim;
  std::uint64_t h = 0;
  for (auto t : types) h = mix(h, t);
  os << "|t" << types.size() << ':' << std::hex << h << std::dec;
  if (aut_order) os << "|a" << *aut_order;
  if (!subcodes.empty()) {
    os << "|s";
    for (const auto& s : subcodes) os << '[' << s << ']';
  }
  return os.str();
}

Fingerprint fingerprint(const AdditiveCode& c, const FingerprintOptions& opt) {
  Fingerprint fp;
  fp.isotopy_only = opt.isotopy_only;
  fp.ranks = rank_distribution(c);
  const int l = left_idealiser(c).dim, r = right_idealiser(c).dim;
  if (c.rows() == c.cols() && !opt.isotopy_only) {
    fp.left_idealiser_dim = std::min(l, r);
    fp.right_idealiser_dim = std::max(l, r);
  } else if (c.rows() > c.cols()) {
    // compare rectangular codes in the rows <= cols frame
    fp.left_idealiser_dim = r;
    fp.right_idealiser_dim = l;
  } else {
    fp.left_idealiser_dim = l;
    fp.right_idealiser_dim = r;
  }
  if (opt.with_types && c.rows() == c.cols()) {
    const int n = c.rows(), q = c.q();
    for (const PackedVec y : invertible_representatives(c))
      fp.types.push_back(detail::conjugacy_type(c, inverse_or_throw(MatrixGF(q, n, n, y))));
    std::sort(fp.types.begin(), fp.types.end());
  }
  if (opt.with_aut_order) fp.aut_order = automorphism_group(c).order;
  return fp;
}

ClassificationReport classify_up_to_equivalence(const std::vector<AdditiveCode>& codes, const ClassifyOptions& opt) {
  ClassificationReport rep;
  rep.input_count = codes.size();
  FingerprintOptions fo = opt.fingerprint;
  fo.isotopy_only = opt.isotopy_only;
  std::vector<Fingerprint> fps(codes.size());
  std::vector<std::string> keys(codes.size()), bytes(codes.size());
  const int threads = std::max(1, opt.threads);
  {
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mutex;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&, t]() {
        try {
          for (std::size_t i = t; i < codes.size(); i += threads) {
            fps[i] = fingerprint(codes[i], fo);
            keys[i] = fps[i].key();
            bytes[i] = codes[i].canonical_bytes();
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }
  std::vector<std::size_t> order(codes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (keys[a] != keys[b]) return keys[a] < keys[b];
    if (bytes[a] != bytes[b]) return bytes[a] < bytes[b];
    return a < b;
  });
  EquivalenceOptions eo;
  eo.allow_transpose = !opt.isotopy_only;
  eo.budget = opt.budget;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t end = start;
    while (end < order.size() && keys[order[end]] == keys[order[start]]) ++end;
    std::vector<ClassEntry> bucket;
    for (std::size_t p = start; p < end; ++p) {
      const std::size_t i = order[p];
      bool placed = false;
      for (auto& cls : bucket) {
        if (bytes[cls.representative_index] == bytes[i] ||
            are_equivalent(cls.representative, codes[i], eo).has_value()) {
          cls.members.push_back(i);
          placed = true;
          break;
        }
      }
      if (!placed) bucket.push_back(ClassEntry{codes[i], i, {i}, fps[i]});
    }
    for (auto& cls : bucket) {
      std::sort(cls.members.begin(), cls.members.end());
      rep.classes.push_back(std::move(cls));
    }
    start = end;
  }
  return rep;
}

}  // namespace mrd
