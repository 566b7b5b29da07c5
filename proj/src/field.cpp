#include "mrd/field.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace mrd {

namespace {

const std::map<std::pair<int, int>, std::vector<int>>& conway_table() {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 1}, {1, 1}},
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
      {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
      {{2, 9}, {1, 0, 0, 0, 1, 0, 0, 0, 0, 1}},
      {{2, 10}, {1, 1, 1, 1, 0, 1, 1, 0, 0, 0, 1}},
      {{2, 11}, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
      {{2, 12}, {1, 1, 0, 1, 0, 1, 1, 1, 0, 0, 0, 0, 1}},
      {{3, 1}, {1, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{3, 5}, {1, 2, 0, 0, 0, 1}},
      {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
      {{3, 7}, {1, 0, 2, 0, 0, 0, 0, 1}},
      {{3, 8}, {2, 2, 2, 0, 1, 2, 0, 0, 1}},
  };
  return table;
}

std::uint32_t ipow(std::uint32_t b, int k) {
  std::uint32_t r = 1;
  while (k-- > 0) r *= b;
  return r;
}

// polynomial helpers over F_p, lowest degree first
using Poly = std::vector<int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lead_inv = (m.back() == 1) ? 1 : 2;  // p in {2,3}: inverse of 1 is 1, of 2 is 2
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int shift = static_cast<int>(a.size()) - 1 - dm;
    const int c = (a.back() * lead_inv) % p;
    for (int i = 0; i <= dm; ++i) a[shift + i] = ((a[shift + i] - c * m[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

Poly poly_mul_mod(const Poly& a, const Poly& b, const Poly& m, int p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), m, p);
}

Poly poly_gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

std::vector<int> conway_polynomial(int p, int degree) {
  const auto& t = conway_table();
  auto it = t.find({p, degree});
  if (it == t.end())
    throw std::invalid_argument("no Conway polynomial bundled for p=" + std::to_string(p) +
                                " degree " + std::to_string(degree));
  return it->second;
}

bool is_irreducible(int p, std::span<const int> f_in) {
  Poly f(f_in.begin(), f_in.end());
  trim(f);
  const int d = static_cast<int>(f.size()) - 1;
  if (d <= 0) return false;
  if (d == 1) return true;
  // Ben-Or: gcd(x^{p^i} - x, f) == 1 for i = 1..d/2
  Poly xp = {0, 1};
  for (int i = 1; i <= d / 2; ++i) {
    Poly r = {1};
    Poly base = xp;
    for (int k = p; k > 0; --k) r = poly_mul_mod(r, base, f, p);
    xp = r;
    Poly g = xp;
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = ((g[1] - 1) % p + p) % p;
    Poly h = poly_gcd(f, g, p);
    if (h.size() > 1) return false;
  }
  return true;
}

FieldCtx::FieldCtx(int p, int e, int n) : p_(p), e_(e), n_(n) {
  if (p != 2 && p != 3) throw std::invalid_argument("field characteristic must be 2 or 3");
  if (e < 1 || n < 1) throw std::invalid_argument("field degrees must be positive");
  q_ = static_cast<int>(ipow(p, e));
  const int deg = e * n;
  modulus_ = conway_polynomial(p, deg);
  size_ = ipow(p, deg);
  exp_.assign(size_ - 1, 0);
  log_.assign(size_, 0);
  // multiply-by-x in digit form, starting at 1
  std::vector<int> cur(deg, 0);
  cur[0] = 1;
  auto encode = [&](const std::vector<int>& d) {
    std::uint32_t v = 0;
    for (int i = deg - 1; i >= 0; --i) v = v * p + d[i];
    return v;
  };
  for (std::uint32_t i = 0; i + 1 < size_; ++i) {
    const std::uint32_t v = encode(cur);
    if (i > 0 && v == 1) throw std::logic_error("Conway polynomial is not primitive");
    exp_[i] = v;
    log_[v] = i;
    // cur *= x mod modulus
    const int top = cur[deg - 1];
    for (int k = deg - 1; k > 0; --k) cur[k] = cur[k - 1];
    cur[0] = 0;
    for (int k = 0; k < deg; ++k) cur[k] = ((cur[k] - top * modulus_[k]) % p + p) % p;
  }
}

Gf FieldCtx::add(Gf a, Gf b) const {
  if (p_ == 2) return {a.v ^ b.v};
  std::uint32_t r = 0, mult = 1;
  std::uint32_t x = a.v, y = b.v;
  while (x | y) {
    r += ((x % 3 + y % 3) % 3) * mult;
    x /= 3;
    y /= 3;
    mult *= 3;
  }
  return {r};
}

Gf FieldCtx::neg(Gf a) const {
  if (p_ == 2) return a;
  std::uint32_t r = 0, mult = 1, x = a.v;
  while (x) {
    r += ((3 - x % 3) % 3) * mult;
    x /= 3;
    mult *= 3;
  }
  return {r};
}

Gf FieldCtx::sub(Gf a, Gf b) const { return add(a, neg(b)); }

std::uint32_t FieldCtx::log(Gf a) const {
  if (a.v == 0) throw std::domain_error("log of zero");
  return log_[a.v];
}

Gf FieldCtx::mul(Gf a, Gf b) const {
  if (a.v == 0 || b.v == 0) return {0};
  return {exp_[(static_cast<std::uint64_t>(log_[a.v]) + log_[b.v]) % (size_ - 1)]};
}

Gf FieldCtx::inv(Gf a) const {
  if (a.v == 0) throw std::domain_error("inverse of zero");
  return {exp_[(size_ - 1 - log_[a.v]) % (size_ - 1)]};
}

Gf FieldCtx::pow(Gf a, std::uint64_t k) const {
  if (k == 0) return one();
  if (a.v == 0) return zero();
  return {exp_[(static_cast<unsigned __int128>(log_[a.v]) * k) % (size_ - 1)]};
}

Gf FieldCtx::frobenius(Gf a, long s) const {
  long r = s % n_;
  if (r < 0) r += n_;
  std::uint64_t k = 1;
  for (long i = 0; i < r; ++i) k *= static_cast<std::uint64_t>(q_);
  return pow(a, k);
}

Gf FieldCtx::norm(Gf a) const {
  const std::uint64_t k = (static_cast<std::uint64_t>(size_) - 1) / (q_ - 1);
  return pow(a, k);
}

Gf FieldCtx::norm_to_prime(Gf a) const {
  const std::uint64_t k = (static_cast<std::uint64_t>(size_) - 1) / (p_ - 1);
  return pow(a, k);
}

int FieldCtx::trace_to_prime(Gf a) const {
  Gf t = zero();
  Gf x = a;
  for (int i = 0; i < degree(); ++i) {
    t = add(t, x);
    x = pow(x, static_cast<std::uint64_t>(p_));
  }
  return prime_value(t);
}

std::vector<int> FieldCtx::digits(Gf a) const {
  std::vector<int> d(degree(), 0);
  std::uint32_t x = a.v;
  for (int i = 0; i < degree(); ++i) {
    d[i] = static_cast<int>(x % p_);
    x /= p_;
  }
  return d;
}

Gf FieldCtx::from_digits(std::span<const int> d) const {
  if (static_cast<int>(d.size()) > degree()) throw std::invalid_argument("too many digits");
  std::uint32_t v = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * p_ + ((d[i] % p_) + p_) % p_;
  return {v};
}

int FieldCtx::prime_value(Gf a) const {
  if (a.v >= static_cast<std::uint32_t>(p_)) throw std::domain_error("element is not in the prime field");
  return static_cast<int>(a.v);
}

bool FieldCtx::in_subfield(Gf a, int sub_degree) const {
  if (degree() % sub_degree != 0) return false;
  return pow(a, ipow(p_, sub_degree)) == a;
}

std::vector<Gf> FieldCtx::elements() const {
  std::vector<Gf> r(size_);
  for (std::uint32_t i = 0; i < size_; ++i) r[i] = {i};
  return r;
}

std::vector<Gf> FieldCtx::nonzero_elements() const {
  std::vector<Gf> r;
  r.reserve(size_ - 1);
  for (std::uint32_t i = 1; i < size_; ++i) r.push_back({i});
  return r;
}

}  // namespace mrd
