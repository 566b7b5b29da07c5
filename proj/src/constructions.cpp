#include "mrd/constructions.hpp"

#include <numeric>
#include <stdexcept>

namespace mrd {

LinearizedPoly::LinearizedPoly(const FieldCtx& f, std::vector<Gf> coeffs, long stride)
    : f_(&f), coeffs_(std::move(coeffs)), stride_(stride) {
  if (std::gcd(stride, static_cast<long>(f.n())) != 1) throw std::invalid_argument("stride must be coprime to n");
}

LinearizedPoly LinearizedPoly::monomial(const FieldCtx& f, Gf c, long j) {
  std::vector<Gf> coeffs(static_cast<std::size_t>(j % f.n()) + 1, f.zero());
  coeffs.back() = c;
  return LinearizedPoly(f, std::move(coeffs), 1);
}

bool LinearizedPoly::is_zero() const {
  for (Gf c : coeffs_)
    if (c != f_->zero()) return false;
  return true;
}

Gf LinearizedPoly::operator()(Gf x) const {
  Gf y = f_->zero();
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    if (coeffs_[i] != f_->zero())
      y = f_->add(y, f_->mul(coeffs_[i], f_->frobenius(x, stride_ * static_cast<long>(i))));
  return y;
}

AdditiveMap as_map(const LinearizedPoly& p) {
  return [p](Gf x) { return p(x); };
}

MatrixGF map_matrix(const FieldCtx& f, const AdditiveMap& g) {
  if (f.e() != 1) throw std::invalid_argument("matrix representation requires a prime base field");
  const int n = f.n();
  PackedVec bits;
  const auto basis = polynomial_basis(f);
  for (int j = 0; j < n; ++j) {
    const auto d = f.digits(g(basis[j]));
    for (int i = 0; i < n; ++i) bits.set_digit(i * n + j, d[i]);
  }
  return MatrixGF(f.p(), n, n, bits);
}

Presemifield make_presemifield(std::string name, std::vector<MatrixGF> basis, std::string provenance) {
  if (basis.empty()) throw std::invalid_argument("presemifield needs a nonempty basis");
  const int q = basis[0].q(), n = basis[0].rows();
  if (basis[0].cols() != n || static_cast<int>(basis.size()) != n)
    throw std::invalid_argument("a presemifield of dimension n needs n square n x n matrices");
  AdditiveCode c = AdditiveCode::from_basis(basis);
  if (c.dim() != n) throw std::invalid_argument("presemifield basis is linearly dependent");
  CodewordEnumerator it(c);
  while (it.next())
    if (packed_rank(q, n, n, it.current()) != n) throw std::invalid_argument("presemifield has zero divisors");
  return Presemifield{std::move(name), q, n, std::move(basis), std::move(c), std::move(provenance)};
}

Presemifield field_spread_set(int q, int n) {
  const FieldCtx f(q, 1, n);
  std::vector<MatrixGF> basis;
  for (Gf b : polynomial_basis(f)) basis.push_back(map_matrix(f, [&](Gf x) { return f.mul(b, x); }));
  return make_presemifield("F" + std::to_string(f.size()), std::move(basis), "field");
}

Presemifield presemifield_from_multiplication(int q, int n, const std::vector<std::vector<PackedVec>>& products,
                                              std::string name) {
  if (static_cast<int>(products.size()) != n) throw std::invalid_argument("multiplication table must be n x n");
  std::vector<MatrixGF> basis;
  for (int j = 0; j < n; ++j) {
    PackedVec bits;
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(products[i].size()) != n) throw std::invalid_argument("multiplication table must be n x n");
      for (int r = 0; r < n; ++r) bits.set_digit(r * n + i, products[i][j].digit(r));
    }
    basis.emplace_back(q, n, n, bits);
  }
  return make_presemifield(std::move(name), std::move(basis), "table");
}

Presemifield semifield_dual(const Presemifield& s) {
  const int n = s.n;
  std::vector<MatrixGF> basis;
  for (int k = 0; k < n; ++k) {
    PackedVec bits;
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < n; ++i) bits.set_digit(r * n + i, s.basis[i].at(r, k));
    basis.emplace_back(s.q, n, n, bits);
  }
  return make_presemifield(s.name + "^d", std::move(basis), s.provenance);
}

Presemifield semifield_transpose(const Presemifield& s) {
  std::vector<MatrixGF> basis;
  for (const auto& b : s.basis) basis.push_back(transpose(b));
  return make_presemifield(s.name + "^t", std::move(basis), s.provenance);
}

NormCheck check_norm_condition(const FieldCtx& f, int k, const AdditiveMap& phi1, const AdditiveMap& phi2) {
  const Gf sign = ((f.n() * k) % 2 == 0) ? f.one() : f.neg(f.one());
  for (Gf a : f.nonzero_elements()) {
    if (f.norm(phi1(a)) == f.mul(sign, f.norm(phi2(a)))) return {false, a};
  }
  return {true, std::nullopt};
}

AdditiveCode h_k_code(const FieldCtx& f, int k, long s, const AdditiveMap& phi1, const AdditiveMap& phi2) {
  const int n = f.n();
  if (k < 1 || k > n - 1) throw std::invalid_argument("k must satisfy 1 <= k <= n-1");
  if (std::gcd(s, static_cast<long>(n)) != 1) throw std::invalid_argument("stride must be coprime to n");
  const auto basis = polynomial_basis(f);
  std::vector<MatrixGF> gens;
  for (Gf b : basis) {
    const Gf c1 = phi1(b), c2 = phi2(b);
    gens.push_back(map_matrix(f, [&](Gf x) {
      return f.add(f.mul(c1, x), f.mul(c2, f.frobenius(x, s * k)));
    }));
  }
  for (int i = 1; i < k; ++i)
    for (Gf b : basis) gens.push_back(map_matrix(f, [&](Gf x) { return f.mul(b, f.frobenius(x, s * i)); }));
  AdditiveCode c = AdditiveCode::from_basis(gens);
  if (c.dim() != n * k) throw std::invalid_argument("a -> (phi1(a), phi2(a)) is not injective");
  return c;
}

AdditiveCode delsarte_gabidulin(int q, int n, int k, long s) {
  const FieldCtx f(q, 1, n);
  return h_k_code(f, k, s, [](Gf a) { return a; }, [&](Gf) { return f.zero(); });
}

AdditiveCode twisted_gabidulin(int q, int n, int k, long s, Gf eta, long h) {
  const FieldCtx f(q, 1, n);
  if (eta.v >= f.size()) throw std::invalid_argument("eta is not an element of the field");
  AdditiveMap phi1 = [](Gf a) { return a; };
  AdditiveMap phi2 = [&](Gf a) { return f.mul(eta, f.frobenius(a, h)); };
  if (!check_norm_condition(f, k, phi1, phi2).ok) throw std::invalid_argument("twisted Gabidulin norm condition violated");
  return h_k_code(f, k, s, phi1, phi2);
}

std::pair<Gf, Gf> subfield_split(const FieldCtx& f, Gf a) {
  if (f.n() % 2) throw std::invalid_argument("subfield split needs even n");
  const long half = f.n() / 2;
  const Gf w = f.primitive();
  const Gf wbar = f.frobenius(w, half);
  const Gf abar = f.frobenius(a, half);
  const Gf a1 = f.mul(f.sub(a, abar), f.inv(f.sub(w, wbar)));
  const Gf a0 = f.sub(a, f.mul(a1, w));
  return {a0, a1};
}

namespace {

bool is_square_in_prime_field(int q, int v) {
  for (int x = 1; x < q; ++x)
    if (x * x % q == v) return true;
  return false;
}

}  // namespace

Gf first_nonsquare_norm_element(const FieldCtx& f) {
  if (f.q() % 2 == 0) throw std::invalid_argument("F_q has no nonsquares for even q");
  for (Gf a : f.nonzero_elements())
    if (!is_square_in_prime_field(f.q(), f.prime_value(f.norm(a)))) return a;
  throw std::logic_error("no element of nonsquare norm");
}

std::vector<Gf> admissible_tg_eta(const FieldCtx& f, int k) {
  const Gf sign = ((f.n() * k) % 2 == 0) ? f.one() : f.neg(f.one());
  std::vector<Gf> out;
  for (Gf a : f.elements())
    if (f.norm_to_prime(a) != sign) out.push_back(a);
  return out;
}

AdditiveCode trombetti_zhou(int q, int n, int k, long s, Gf eta) {
  if (q % 2 == 0) throw std::invalid_argument("Trombetti-Zhou codes need odd q");
  if (n % 2) throw std::invalid_argument("Trombetti-Zhou codes need even n");
  const FieldCtx f(q, 1, n);
  if (eta.v == 0 || eta.v >= f.size() || is_square_in_prime_field(q, f.prime_value(f.norm(eta))))
    throw std::invalid_argument("eta must have nonsquare norm");
  AdditiveMap phi1 = [&](Gf a) { return subfield_split(f, a).first; };
  AdditiveMap phi2 = [&](Gf a) { return f.mul(eta, subfield_split(f, a).second); };
  if (!check_norm_condition(f, k, phi1, phi2).ok) throw std::invalid_argument("Trombetti-Zhou norm condition violated");
  return h_k_code(f, k, s, phi1, phi2);
}

}  // namespace mrd
