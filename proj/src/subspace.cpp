#include "mrd/subspace.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mrd {

std::uint64_t gaussian_binomial(int n, int k, int q) {
  if (k < 0 || k > n) return 0;
  std::uint64_t num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    std::uint64_t a = 1, b = 1;
    for (int j = 0; j < n - i; ++j) a *= q;
    for (int j = 0; j < i + 1; ++j) b *= q;
    num *= (a - 1);
    den *= (b - 1);
    const std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  return num / den;
}

Subspace::Subspace(int p, int ambient) : p_(p), ambient_(ambient) {
  check_prime(p);
  if (ambient < 0 || ambient > kMaxCoords) throw std::invalid_argument("ambient dimension out of range");
}

Subspace Subspace::span(int p, int ambient, std::span<const PackedVec> vectors) {
  Subspace s(p, ambient);
  for (const auto& v : vectors) s.insert(v);
  return s;
}

Subspace Subspace::full(int p, int ambient) {
  Subspace s(p, ambient);
  for (int i = 0; i < ambient; ++i) {
    PackedVec e;
    e.set_digit(i, 1);
    s.basis_.push_back(e);
    s.pivots_.push_back(i);
  }
  return s;
}

Subspace Subspace::nullspace(int p, int ambient, std::span<const PackedVec> rows) {
  const Subspace r = span(p, ambient, rows);
  Subspace out(p, ambient);
  std::uint64_t free = r.free_mask();
  while (free) {
    const int f = std::countr_zero(free);
    free &= free - 1;
    PackedVec x;
    x.set_digit(f, 1);
    for (std::size_t i = 0; i < r.basis_.size(); ++i) {
      const int c = r.basis_[i].digit(f);
      if (c) x.set_digit(r.pivots_[i], (p - c) % p);
    }
    out.basis_.push_back(x);
  }
  // re-reduce into canonical form
  return span(p, ambient, out.basis_);
}

std::uint64_t Subspace::free_mask() const {
  std::uint64_t m = low_mask(ambient_);
  for (int pv : pivots_) m &= ~(std::uint64_t{1} << pv);
  return m;
}

PackedVec Subspace::reduce(PackedVec v) const {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const int c = v.digit(pivots_[i]);
    if (c) v = axpy(p_, v, p_ - c, basis_[i]);
  }
  return v;
}

std::vector<int> Subspace::coordinates(PackedVec v) const {
  std::vector<int> c(basis_.size());
  for (std::size_t i = 0; i < basis_.size(); ++i) c[i] = v.digit(pivots_[i]);
  if (!(combine(c) == v)) throw std::invalid_argument("vector is not in the subspace");
  return c;
}

PackedVec Subspace::combine(std::span<const int> coeffs) const {
  PackedVec v;
  for (std::size_t i = 0; i < basis_.size() && i < coeffs.size(); ++i) v = axpy(p_, v, coeffs[i], basis_[i]);
  return v;
}

bool Subspace::insert(PackedVec v) {
  if ((v.support() & ~low_mask(ambient_)) != 0) throw std::invalid_argument("vector outside ambient space");
  v = reduce(v);
  if (v.is_zero()) return false;
  v = normalize_leading(p_, v);
  const int pl = v.leading();
  for (auto& b : basis_) {
    const int c = b.digit(pl);
    if (c) b = axpy(p_, b, p_ - c, v);
  }
  auto it = std::lower_bound(pivots_.begin(), pivots_.end(), pl);
  const auto pos = it - pivots_.begin();
  pivots_.insert(it, pl);
  basis_.insert(basis_.begin() + pos, v);
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  Subspace s = *this;
  for (const auto& v : other.basis_) s.insert(v);
  return s;
}

Subspace Subspace::intersect(const Subspace& other) const {
  Subspace perp = orthogonal().sum(other.orthogonal());
  return perp.orthogonal();
}

void Subspace::for_each_element(const std::function<void(PackedVec)>& f) const {
  const int k = dim();
  std::vector<int> d(k, 0);
  PackedVec cur;
  f(cur);
  while (true) {
    int i = 0;
    while (i < k) {
      cur = add(p_, cur, basis_[i]);
      if (++d[i] < p_) break;
      d[i] = 0;
      ++i;
    }
    if (i == k) return;
    f(cur);
  }
}

std::vector<PackedVec> Subspace::elements() const {
  std::vector<PackedVec> out;
  std::uint64_t total = 1;
  for (int i = 0; i < dim(); ++i) total *= p_;
  out.reserve(total);
  for_each_element([&](PackedVec v) { out.push_back(v); });
  return out;
}

std::string Subspace::to_string() const {
  std::ostringstream os;
  for (const auto& b : basis_) {
    for (int i = 0; i < ambient_; ++i) os << b.digit(i);
    os << '\n';
  }
  return os.str();
}

void enumerate_subspaces(int p, int ambient, int k, const std::function<bool(const Subspace&)>& f) {
  if (k < 0 || k > ambient) return;
  std::vector<int> piv(k);
  for (int i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    // free entries: basis vector i may be nonzero at j > piv[i], j not a pivot
    std::vector<std::pair<int, int>> slots;
    std::uint64_t pivmask = 0;
    for (int c : piv) pivmask |= std::uint64_t{1} << c;
    for (int i = 0; i < k; ++i)
      for (int j = piv[i] + 1; j < ambient; ++j)
        if (!((pivmask >> j) & 1u)) slots.emplace_back(i, j);
    std::vector<PackedVec> basis(k);
    for (int i = 0; i < k; ++i) basis[i].set_digit(piv[i], 1);
    std::vector<int> d(slots.size(), 0);
    while (true) {
      Subspace s = Subspace::span(p, ambient, basis);
      if (!f(s)) return;
      std::size_t i = 0;
      while (i < slots.size()) {
        auto [r, c] = slots[i];
        d[i] = (d[i] + 1) % p;
        basis[r].set_digit(c, d[i]);
        if (d[i] != 0) break;
        ++i;
      }
      if (i == slots.size()) break;
    }
    // next combination
    int i = k - 1;
    while (i >= 0 && piv[i] == ambient - k + i) --i;
    if (i < 0) return;
    ++piv[i];
    for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

FreeVectorOdometer::FreeVectorOdometer(int p, std::uint64_t free_mask) : p_(p) {
  while (free_mask) {
    coords_.push_back(std::countr_zero(free_mask));
    free_mask &= free_mask - 1;
    count_ *= static_cast<std::uint64_t>(p);
  }
  digits_.assign(coords_.size(), 0);
}

bool FreeVectorOdometer::next() {
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    PackedVec e;
    e.set_digit(coords_[i], 1);
    cur_ = add(p_, cur_, e);
    if (++digits_[i] < p_) return true;
    digits_[i] = 0;
  }
  return false;
}

}  // namespace mrd
