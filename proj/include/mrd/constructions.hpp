#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mrd/code.hpp"
#include "mrd/field.hpp"
#include "mrd/matrix.hpp"

namespace mrd {

// x -> sum_i c_i x^{q^{s*i}} on F_{q^n}.
class LinearizedPoly {
 public:
  LinearizedPoly(const FieldCtx& f, std::vector<Gf> coeffs, long stride = 1);

  static LinearizedPoly identity(const FieldCtx& f) { return LinearizedPoly(f, {f.one()}); }
  static LinearizedPoly zero(const FieldCtx& f) { return LinearizedPoly(f, {}); }
  // x -> c x^{q^j}
  static LinearizedPoly monomial(const FieldCtx& f, Gf c, long j);

  const FieldCtx& field() const { return *f_; }
  const std::vector<Gf>& coeffs() const { return coeffs_; }
  long stride() const { return stride_; }
  bool is_zero() const;
  Gf operator()(Gf x) const;

 private:
  const FieldCtx* f_;
  std::vector<Gf> coeffs_;
  long stride_;
};

// An F_p-additive map on F_{q^n}.
using AdditiveMap = std::function<Gf(Gf)>;
AdditiveMap as_map(const LinearizedPoly& p);

// Matrix of an F_q-linear map on F_{q^n} in the polynomial basis (column j is
// the image of x^j).  Requires a prime base field.
MatrixGF map_matrix(const FieldCtx& f, const AdditiveMap& g);

struct Presemifield {
  std::string name;
  int q = 2;
  int n = 0;
  // basis[j] is right multiplication by the j-th basis vector: column i of
  // basis[j] is e_i o e_j.
  std::vector<MatrixGF> basis;
  AdditiveCode spread_set;
  std::string provenance;
};

// Builds a presemifield from an ordered basis of its spread set; throws
// std::invalid_argument unless every nonzero element is invertible.
Presemifield make_presemifield(std::string name, std::vector<MatrixGF> basis, std::string provenance = {});

// C(F_{q^n}) = {x -> a x}, with basis the multiplications by x^j.
Presemifield field_spread_set(int q, int n);

// products[i][j] = e_i o e_j as a vector of F_q^n.
Presemifield presemifield_from_multiplication(int q, int n, const std::vector<std::vector<PackedVec>>& products,
                                              std::string name = "table");

// x o' y = y o x
Presemifield semifield_dual(const Presemifield& s);
// {R^T : R in C(S)}
Presemifield semifield_transpose(const Presemifield& s);

struct NormCheck {
  bool ok = true;
  std::optional<Gf> witness;  // some a != 0 violating the condition
};

// N(phi1(a)) != (-1)^{nk} N(phi2(a)) for every nonzero a.
NormCheck check_norm_condition(const FieldCtx& f, int k, const AdditiveMap& phi1, const AdditiveMap& phi2);

// {x -> phi1(a) x + sum_{i=1}^{k-1} f_i x^{q^{s i}} + phi2(a) x^{q^{s k}}}.
// Dimension n*k when a -> (phi1(a), phi2(a)) is injective; otherwise throws.
AdditiveCode h_k_code(const FieldCtx& f, int k, long s, const AdditiveMap& phi1, const AdditiveMap& phi2);

AdditiveCode delsarte_gabidulin(int q, int n, int k, long s = 1);
// phi1(a) = a, phi2(a) = eta a^{p^h}; throws if the norm condition fails.
AdditiveCode twisted_gabidulin(int q, int n, int k, long s, Gf eta, long h);
// phi1(a) = a0, phi2(a) = eta a1 with a = a0 + a1 w, a0, a1 in the index-2
// subfield and w the primitive element.  Requires q odd, n even and N(eta) a
// nonsquare of F_q.
AdditiveCode trombetti_zhou(int q, int n, int k, long s, Gf eta);

// Splits a = a0 + a1 w over the subfield of degree n/2.
std::pair<Gf, Gf> subfield_split(const FieldCtx& f, Gf a);

// Smallest-index eta with N(eta) a nonsquare in F_q (q odd).
Gf first_nonsquare_norm_element(const FieldCtx& f);
// Every eta allowed for twisted Gabidulin codes with parameter k.
std::vector<Gf> admissible_tg_eta(const FieldCtx& f, int k);

}  // namespace mrd
