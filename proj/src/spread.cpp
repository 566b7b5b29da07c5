#include "mrd/spread.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

namespace mrd {

KernelSpaceFamily kernel_space_family(const AdditiveCode& c) {
  const int q = c.q(), m = c.rows(), n = c.cols();
  if (m > n) throw std::invalid_argument("kernel_space_family expects rows <= cols");
  KernelSpaceFamily fam;
  fam.d = minimum_distance(c);
  std::map<std::vector<PackedVec>, std::vector<PackedVec>> groups;
  std::map<std::vector<PackedVec>, Subspace> kernels;
  CodewordEnumerator it(c);
  while (it.next()) {
    const PackedVec x = it.current();
    if (packed_rank(q, m, n, x) != fam.d) continue;
    Subspace u = left_kernel(MatrixGF(q, m, n, x));
    auto key = u.basis();
    groups[key].push_back(x);
    kernels.emplace(std::move(key), std::move(u));
  }
  std::uint64_t pn = 1;
  for (int i = 0; i < n; ++i) pn *= static_cast<std::uint64_t>(q);
  for (auto& [key, words] : groups) {
    Subspace s = Subspace::span(q, m * n, words);
    AdditiveCode cu(q, m, n, std::move(s));
    if (cu.dim() != n || words.size() != pn - 1)
      throw std::runtime_error("minimum-rank words do not split into kernel subspaces of dimension n");
    fam.spaces.push_back({kernels.at(key), std::move(cu)});
  }
  if (fam.spaces.size() != gaussian_binomial(m, fam.d, q))
    throw std::runtime_error("kernel family size differs from the Gaussian binomial");
  return fam;
}

PartialSpread partial_spread_from_family(const AdditiveCode& c, const KernelSpaceFamily& fam) {
  PartialSpread ps;
  ps.p = c.p();
  ps.ambient = c.dim();
  ps.t = c.cols();
  for (const auto& ks : fam.spaces) {
    Subspace member(c.p(), c.dim());
    for (const auto& b : ks.c_u.space().basis()) {
      const auto coords = c.space().coordinates(b);
      PackedVec v;
      for (std::size_t i = 0; i < coords.size(); ++i) v.set_digit(static_cast<int>(i), coords[i]);
      member.insert(v);
    }
    ps.members.push_back(std::move(member));
  }
  return ps;
}

PartialSpread partial_spread_of(const AdditiveCode& c) { return partial_spread_from_family(c, kernel_space_family(c)); }

std::vector<Subspace> subspaces_within(int p, int n_ambient, int t, const std::vector<PackedVec>& allowed,
                                       const Budget& budget, std::size_t limit) {
  std::unordered_set<PackedVec, PackedVecHash> ok(allowed.begin(), allowed.end());
  std::vector<PackedVec> cands;
  for (const auto& v : allowed)
    if (!v.is_zero() && normalize_leading(p, v) == v) cands.push_back(v);
  std::sort(cands.begin(), cands.end(), [](const PackedVec& a, const PackedVec& b) {
    if (a.leading() != b.leading()) return a.leading() > b.leading();
    return a < b;
  });
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::vector<Subspace> found;
  std::vector<PackedVec> chosen;
  bool stop = false;
  // Echelon bases are built from the highest pivot down; each new vector has
  // a smaller pivot and vanishes on the pivots already chosen.
  std::function<void(int, std::uint64_t, const std::vector<PackedVec>&)> rec =
      [&](int min_pivot, std::uint64_t pivots, const std::vector<PackedVec>& elems) {
        if (stop) return;
        if (static_cast<int>(chosen.size()) == t) {
          found.push_back(Subspace::span(p, n_ambient, chosen));
          if (limit && found.size() >= limit) stop = true;
          return;
        }
        for (const auto& v : cands) {
          if (v.leading() >= min_pivot) continue;
          if (v.leading() < t - 1 - static_cast<int>(chosen.size())) break;
          if ((v.support() & pivots) != 0) continue;
          budget.tick();
          bool good = true;
          std::vector<PackedVec> next = elems;
          next.reserve(elems.size() * p);
          for (int lam = 1; lam < p && good; ++lam) {
            const PackedVec lv = scale(p, v, lam);
            for (const auto& s : elems) {
              const PackedVec w = add(p, s, lv);
              if (!ok.count(w)) {
                good = false;
                break;
              }
              next.push_back(w);
            }
          }
          if (!good) continue;
          chosen.push_back(v);
          rec(v.leading(), pivots | (std::uint64_t{1} << v.leading()), next);
          chosen.pop_back();
          if (stop) return;
        }
      };
  rec(n_ambient, 0, {PackedVec{}});
  return found;
}

MaximalityResult is_maximal_partial_spread(const PartialSpread& d, const Budget& budget) {
  const int p = d.p, n = d.ambient;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::uint64_t>(p);
  if (total > (std::uint64_t{1} << 24)) throw std::invalid_argument("partial spread ambient space too large");
  std::unordered_set<PackedVec, PackedVecHash> covered;
  for (const auto& m : d.members) m.for_each_element([&](PackedVec v) { covered.insert(v); });
  std::vector<PackedVec> uncovered;
  Subspace::full(p, n).for_each_element([&](PackedVec v) {
    if (!v.is_zero() && !covered.count(v)) uncovered.push_back(v);
  });
  const auto subs = subspaces_within(p, n, d.t, uncovered, budget, 1);
  if (subs.empty()) return {true, std::nullopt};
  return {false, subs.front()};
}

std::vector<Presemifield> extract_semifield_subcodes(const AdditiveCode& c, const Budget& budget) {
  const int q = c.q(), n = c.rows();
  if (c.rows() != c.cols()) throw std::invalid_argument("semifield subcodes need square matrices");
  std::vector<PackedVec> allowed;
  CodewordEnumerator it(c);
  while (it.next()) {
    if (packed_rank(q, n, n, it.current()) != n) continue;
    const auto coords = c.space().coordinates(it.current());
    PackedVec v;
    for (std::size_t i = 0; i < coords.size(); ++i) v.set_digit(static_cast<int>(i), coords[i]);
    allowed.push_back(v);
  }
  std::vector<Presemifield> out;
  for (const auto& s : subspaces_within(c.p(), c.dim(), n, allowed, budget)) {
    std::vector<MatrixGF> mats;
    for (const auto& b : s.basis()) {
      std::vector<int> coeffs(c.dim());
      for (int i = 0; i < c.dim(); ++i) coeffs[i] = b.digit(i);
      mats.push_back(c.matrix(c.space().combine(coeffs)));
    }
    const AdditiveCode sub = AdditiveCode::from_basis(mats);
    out.push_back(make_presemifield("", sub.basis(), "subcode"));
  }
  std::sort(out.begin(), out.end(), [](const Presemifield& a, const Presemifield& b) {
    return a.spread_set.canonical_bytes() < b.spread_set.canonical_bytes();
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].name = "sub" + std::to_string(i);
  return out;
}

std::pair<Presemifield, Presemifield> decompose_as_two_presemifields(const AdditiveCode& c) {
  if (c.q() != 2) throw std::invalid_argument("decomposition into two presemifields needs q = 2");
  if (c.rows() != c.cols()) throw std::invalid_argument("decomposition needs square matrices");
  const int n = c.rows();
  const auto mrd = is_mrd(c);
  if (!mrd.mrd || mrd.d != n - 1) throw std::invalid_argument("decomposition needs an MRD code with d = n - 1");
  auto subs = extract_semifield_subcodes(c);
  if (subs.size() != 2)
    throw DecompositionFailure("expected exactly two semifield subcodes, found " + std::to_string(subs.size()),
                           to_code_file(c));
  const Subspace& a = subs[0].spread_set.space();
  const Subspace& b = subs[1].spread_set.space();
  if (a.sum(b).dim() != 2 * n || a.intersect(b).dim() != 0)
    throw DecompositionFailure("semifield subcodes do not decompose the code", to_code_file(c));
  return {subs[0], subs[1]};
}

}  // namespace mrd
