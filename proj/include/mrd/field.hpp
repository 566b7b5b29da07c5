#pragma once

// Arithmetic in F_{q^n}, q = p^e, realised as F_p[x]/(c(x)) with c the Conway
// polynomial of degree e*n.  Elements are stored as the base-p integer of their
// coefficient vector in the polynomial basis 1, x, ..., x^{en-1}, which makes
// element order (and therefore every emitted matrix) reproducible.

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace mrd {

struct Gf {
  std::uint32_t v = 0;
  friend constexpr bool operator==(Gf, Gf) = default;
  friend constexpr auto operator<=>(Gf, Gf) = default;
};

// Coefficients (lowest degree first, leading 1 included) of the Conway
// polynomial of degree `degree` over F_p.  Throws for unsupported pairs.
std::vector<int> conway_polynomial(int p, int degree);

class FieldCtx {
 public:
  // The field F_{q^n} with q = p^e.
  FieldCtx(int p, int e, int n);

  int p() const { return p_; }
  int e() const { return e_; }
  int n() const { return n_; }
  int q() const { return q_; }
  int degree() const { return e_ * n_; }
  std::uint32_t size() const { return size_; }
  const std::vector<int>& modulus() const { return modulus_; }

  Gf zero() const { return {0}; }
  Gf one() const { return {1}; }
  Gf primitive() const { return exp(1); }
  Gf element(std::uint32_t index) const { return {index}; }
  // Prime-field scalar c in F_p embedded as a constant polynomial.
  Gf scalar(int c) const { return {static_cast<std::uint32_t>(((c % p_) + p_) % p_)}; }

  Gf add(Gf a, Gf b) const;
  Gf sub(Gf a, Gf b) const;
  Gf neg(Gf a) const;
  Gf mul(Gf a, Gf b) const;
  Gf inv(Gf a) const;
  Gf pow(Gf a, std::uint64_t k) const;
  Gf exp(std::uint64_t k) const { return {exp_[k % (size_ - 1)]}; }
  std::uint32_t log(Gf a) const;

  // a^{q^s}; negative s allowed (taken mod n).
  Gf frobenius(Gf a, long s) const;
  // Relative norm F_{q^n} -> F_q, a^{(q^n-1)/(q-1)}.
  Gf norm(Gf a) const;
  // Absolute norm F_{q^n} -> F_p.
  Gf norm_to_prime(Gf a) const;
  // Absolute trace to F_p, returned as a digit in [0, p).
  int trace_to_prime(Gf a) const;

  std::vector<int> digits(Gf a) const;
  Gf from_digits(std::span<const int> d) const;
  // Digit value of an element of the prime subfield; throws otherwise.
  int prime_value(Gf a) const;
  bool in_subfield(Gf a, int sub_degree) const;  // sub_degree over F_p

  std::vector<Gf> elements() const;
  std::vector<Gf> nonzero_elements() const;

  friend bool operator==(const FieldCtx& a, const FieldCtx& b) {
    return a.p_ == b.p_ && a.e_ == b.e_ && a.n_ == b.n_;
  }

 private:
  int p_, e_, n_, q_;
  std::uint32_t size_;
  std::vector<int> modulus_;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
};

// True iff the monic polynomial f (lowest degree first) is irreducible over F_p.
bool is_irreducible(int p, std::span<const int> f);

}  // namespace mrd
