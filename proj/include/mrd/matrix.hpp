#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mrd/field.hpp"
#include "mrd/packed.hpp"
#include "mrd/subspace.hpp"

namespace mrd {

// An m x n matrix over a prime field F_q (q in {2, 3}), stored row-major in a
// single bit-sliced vector: entry (i, j) is coordinate i*n + j.  Immutable.
class MatrixGF {
 public:
  MatrixGF() = default;
  MatrixGF(int q, int rows, int cols, PackedVec bits = {});

  static MatrixGF zero(int q, int rows, int cols) { return MatrixGF(q, rows, cols); }
  static MatrixGF identity(int q, int n);
  static MatrixGF from_digits(int q, int rows, int cols, std::span<const int> row_major);

  int q() const { return q_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  PackedVec bits() const { return bits_; }
  int at(int i, int j) const { return bits_.digit(i * cols_ + j); }
  // Row i as a vector on coordinates 0..cols-1.
  PackedVec row(int i) const { return mask_vec(shr(bits_, i * cols_), low_mask(cols_)); }
  MatrixGF with_entry(int i, int j, int value) const;
  bool is_zero() const { return bits_.is_zero(); }

  friend bool operator==(const MatrixGF& a, const MatrixGF& b) {
    return a.q_ == b.q_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.bits_ == b.bits_;
  }

 private:
  int q_ = 2;
  int rows_ = 0;
  int cols_ = 0;
  PackedVec bits_{};
};

// Rank of the m x n matrix whose row-major entries are packed in `bits`.
int packed_rank(int q, int rows, int cols, PackedVec bits);
// Row-major packed product of (m x k) and (k x n).
PackedVec packed_mul(int q, int m, int k, int n, PackedVec a, PackedVec b);
PackedVec packed_transpose(int rows, int cols, PackedVec bits);

int rank(const MatrixGF& m);
MatrixGF transpose(const MatrixGF& m);
MatrixGF operator+(const MatrixGF& a, const MatrixGF& b);
MatrixGF operator-(const MatrixGF& a, const MatrixGF& b);
MatrixGF operator*(const MatrixGF& a, const MatrixGF& b);
MatrixGF scale(const MatrixGF& a, int c);
PackedVec apply(const MatrixGF& m, PackedVec column);  // M v for a column vector v

struct RrefResult {
  MatrixGF matrix;
  std::vector<int> pivots;  // pivot column of each nonzero row
};
RrefResult rref(const MatrixGF& m);

// Right kernel {v : M v = 0} inside F_q^cols.
Subspace kernel(const MatrixGF& m);
// Left kernel {w : w M = 0} inside F_q^rows.
Subspace left_kernel(const MatrixGF& m);
// Row space inside F_q^cols.
Subspace row_space(const MatrixGF& m);

std::optional<MatrixGF> inverse(const MatrixGF& m);
bool is_invertible(const MatrixGF& m);

// Characteristic polynomial det(xI - M) of a square matrix, coefficients
// lowest degree first, monic of degree n.
std::vector<int> charpoly(const MatrixGF& m);
// Same, for the n x n matrix packed in `bits` (entries 0..n of `out`).
void charpoly_coeffs(int q, int n, PackedVec bits, std::array<int, 9>& out);
// Compact key for the characteristic polynomial (base-q digits of the
// non-leading coefficients).
std::uint32_t charpoly_key(int q, int n, PackedVec bits);

// Matrix of the F_q-linear map x -> sum_i c_i x^{q^{s*i}} on F_{q^n} in the
// F_q-basis `basis` (columns are images of basis vectors).  Requires e = 1.
MatrixGF linear_map_to_matrix(const FieldCtx& f, std::span<const Gf> coeffs, long stride,
                              std::span<const Gf> basis);
// Coordinates of x in the given F_q-basis of F_{q^n}.
std::vector<int> coordinates_in_basis(const FieldCtx& f, Gf x, std::span<const Gf> basis);
std::vector<Gf> polynomial_basis(const FieldCtx& f);

// Text format: one row per line, one digit per entry.
std::string to_text(const MatrixGF& m);
// Parses `rows` consecutive lines; throws std::runtime_error on malformed input.
MatrixGF matrix_from_lines(int q, std::span<const std::string> lines);

std::ostream& operator<<(std::ostream& os, const MatrixGF& m);

}  // namespace mrd
