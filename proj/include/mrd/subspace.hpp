#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mrd/packed.hpp"

namespace mrd {

// Number of k-dimensional subspaces of F_q^n.
std::uint64_t gaussian_binomial(int n, int k, int q);

// A subspace of F_p^N held as a reduced row-echelon basis.  The pivot of a
// basis vector is its lowest nonzero coordinate; pivots strictly increase,
// every basis vector is 1 at its own pivot and 0 at the others.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int p, int ambient);  // zero subspace

  static Subspace span(int p, int ambient, std::span<const PackedVec> vectors);
  static Subspace full(int p, int ambient);
  // Solutions x of <r, x> = 0 for every r in `rows`.
  static Subspace nullspace(int p, int ambient, std::span<const PackedVec> rows);

  int p() const { return p_; }
  int ambient() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<PackedVec>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }
  std::uint64_t free_mask() const;  // coordinates that are not pivots

  // Canonical representative of v + this (zero at every pivot).
  PackedVec reduce(PackedVec v) const;
  bool contains(PackedVec v) const { return reduce(v).is_zero(); }
  // Coordinates of a member in terms of the basis (digit i multiplies basis i).
  std::vector<int> coordinates(PackedVec v) const;
  PackedVec combine(std::span<const int> coeffs) const;

  // Inserts v; returns false if v was already contained.
  bool insert(PackedVec v);
  Subspace sum(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;
  Subspace orthogonal() const { return nullspace(p_, ambient_, basis_); }

  // All p^dim members, zero first, in odometer order over the basis.
  std::vector<PackedVec> elements() const;
  void for_each_element(const std::function<void(PackedVec)>& f) const;

  std::string to_string() const;

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.p_ == b.p_ && a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }
  friend bool operator<(const Subspace& a, const Subspace& b) {
    if (a.basis_.size() != b.basis_.size()) return a.basis_.size() < b.basis_.size();
    return a.basis_ < b.basis_;
  }

 private:
  int p_ = 2;
  int ambient_ = 0;
  std::vector<PackedVec> basis_;
  std::vector<int> pivots_;
};

// Calls f once for every k-dimensional subspace of F_p^N, each presented in
// reduced row-echelon form.  Stops early when f returns false.
void enumerate_subspaces(int p, int ambient, int k, const std::function<bool(const Subspace&)>& f);

// Odometer over all vectors supported on `free_mask`, starting from zero.
// Each call to next() updates the current vector by one coordinate addition
// sequence; returns false once every vector has been produced.
class FreeVectorOdometer {
 public:
  FreeVectorOdometer(int p, std::uint64_t free_mask);
  PackedVec current() const { return cur_; }
  bool next();
  std::uint64_t count() const { return count_; }

 private:
  int p_;
  std::vector<int> coords_;
  std::vector<int> digits_;
  PackedVec cur_{};
  std::uint64_t count_ = 1;
};

}  // namespace mrd
