#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mrd/matrix.hpp"
#include "mrd/subspace.hpp"

namespace mrd {

// An additive (F_p-linear) code of m x n matrices over F_q.  The basis is the
// reduced row-echelon basis of the row-major flattened matrices, so equal
// codes have identical bases.  Only prime q is supported, where additive and
// F_q-linear coincide.
class AdditiveCode {
 public:
  AdditiveCode() = default;
  AdditiveCode(int q, int rows, int cols, Subspace space);

  static AdditiveCode from_basis(const std::vector<MatrixGF>& matrices);
  static AdditiveCode zero(int q, int rows, int cols);
  static AdditiveCode full(int q, int rows, int cols);

  int q() const { return q_; }
  int p() const { return q_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return space_.dim(); }
  std::uint64_t size() const;
  const Subspace& space() const { return space_; }
  std::vector<MatrixGF> basis() const;
  MatrixGF matrix(PackedVec bits) const { return MatrixGF(q_, rows_, cols_, bits); }
  bool contains(const MatrixGF& x) const;
  bool contains(PackedVec bits) const { return space_.contains(bits); }

  // Byte string of the canonical basis; a total order on codes.
  std::string canonical_bytes() const;

  friend bool operator==(const AdditiveCode& a, const AdditiveCode& b) {
    return a.q_ == b.q_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.space_ == b.space_;
  }

 private:
  int q_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  Subspace space_;
};

// Produces every codeword exactly once, zero first, in odometer order over the
// canonical basis (one basis addition per step for q = 2).
class CodewordEnumerator {
 public:
  explicit CodewordEnumerator(const AdditiveCode& c);
  PackedVec current() const { return cur_; }
  bool next();

 private:
  int p_;
  std::vector<PackedVec> basis_;
  std::vector<int> digits_;
  PackedVec cur_{};
};

std::vector<MatrixGF> codewords(const AdditiveCode& c);

struct RankDistribution {
  std::vector<std::uint64_t> counts;  // counts[r] = codewords of rank exactly r
  std::uint64_t at(int r) const { return r < static_cast<int>(counts.size()) ? counts[r] : 0; }
  std::uint64_t total() const;
  friend bool operator==(const RankDistribution&, const RankDistribution&) = default;
};

RankDistribution rank_distribution(const AdditiveCode& c);

// Minimum rank over nonzero codewords.  Throws for the zero code.
int minimum_distance(const AdditiveCode& c);
// Minimum distance via enumeration of all codewords, regardless of size.
int minimum_distance_by_enumeration(const AdditiveCode& c);
// Minimum distance via kernel subspaces: a nonzero word of rank <= m - t
// exists iff some t-dimensional U has a nonzero codeword vanishing on it.
int minimum_distance_by_kernels(const AdditiveCode& c);

struct MrdCheck {
  bool mrd = false;
  int d = 0;
};
MrdCheck is_mrd(const AdditiveCode& c);
bool is_quasi_mrd(const AdditiveCode& c);

// Orthogonal complement under <X, Y> = sum_ij X_ij Y_ij.
AdditiveCode delsarte_dual(const AdditiveCode& c);
AdditiveCode transpose(const AdditiveCode& c);
// {A X B : X in C}
AdditiveCode transform(const AdditiveCode& c, const MatrixGF& a, const MatrixGF& b);

// U_A = {(x, xA)} inside F_q^{m+n} for every codeword A.
std::vector<Subspace> lift(const AdditiveCode& c);
Subspace lift_matrix(const MatrixGF& a);

// Code file: header "q m n k", then k matrices separated by blank lines.
std::string to_code_file(const AdditiveCode& c);
AdditiveCode parse_code_file(const std::string& text);
// Reads all matrices listed in a code file without forming the span, so a
// verifier can report the exact input rows.
struct CodeFileContents {
  int q = 2, rows = 0, cols = 0, k = 0;
  std::vector<MatrixGF> matrices;
};
CodeFileContents read_code_file(const std::string& text);

}  // namespace mrd
