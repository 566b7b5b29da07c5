#include "mrd/matrix.hpp"

#include <array>
#include <bit>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace mrd {

namespace {

int inv_mod(int a, int p) {
  // p in {2, 3}: every unit is its own inverse
  (void)p;
  return a;
}

using Dense = std::array<std::array<int, 8>, 8>;

Dense to_dense(const MatrixGF& m) {
  Dense d{};
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d[i][j] = m.at(i, j);
  return d;
}

}  // namespace

MatrixGF::MatrixGF(int q, int rows, int cols, PackedVec bits) : q_(q), rows_(rows), cols_(cols), bits_(bits) {
  check_prime(q);
  if (rows < 1 || cols < 1 || rows * cols > kMaxCoords)
    throw std::invalid_argument("matrix shape out of range");
  if ((bits.support() & ~low_mask(rows * cols)) != 0) throw std::invalid_argument("matrix bits outside shape");
  if (q == 2 && bits.hi != 0) throw std::invalid_argument("F_2 matrix with ternary digits");
  if ((bits.lo & bits.hi) != 0) throw std::invalid_argument("malformed ternary digits");
}

MatrixGF MatrixGF::identity(int q, int n) {
  PackedVec b;
  for (int i = 0; i < n; ++i) b.set_digit(i * n + i, 1);
  return MatrixGF(q, n, n, b);
}

MatrixGF MatrixGF::from_digits(int q, int rows, int cols, std::span<const int> row_major) {
  if (static_cast<int>(row_major.size()) != rows * cols) throw std::invalid_argument("digit count mismatch");
  PackedVec b;
  for (int i = 0; i < rows * cols; ++i) b.set_digit(i, ((row_major[i] % q) + q) % q);
  return MatrixGF(q, rows, cols, b);
}

MatrixGF MatrixGF::with_entry(int i, int j, int value) const {
  PackedVec b = bits_;
  b.set_digit(i * cols_ + j, ((value % q_) + q_) % q_);
  return MatrixGF(q_, rows_, cols_, b);
}

int packed_rank(int q, int rows, int cols, PackedVec bits) {
  const std::uint64_t mask = low_mask(cols);
  std::uint64_t have = 0;
  int r = 0;
  if (q == 2) {
    std::array<std::uint64_t, 64> piv;
    for (int i = 0; i < rows; ++i) {
      std::uint64_t v = (bits.lo >> (i * cols)) & mask;
      while (v) {
        const int c = std::countr_zero(v);
        if (!((have >> c) & 1u)) {
          piv[c] = v;
          have |= std::uint64_t{1} << c;
          ++r;
          break;
        }
        v ^= piv[c];
      }
    }
    return r;
  }
  std::array<PackedVec, 64> piv;
  for (int i = 0; i < rows; ++i) {
    PackedVec v = mask_vec(shr(bits, i * cols), mask);
    while (!v.is_zero()) {
      const int c = v.leading();
      if (!((have >> c) & 1u)) {
        piv[c] = normalize_leading(3, v);
        have |= std::uint64_t{1} << c;
        ++r;
        break;
      }
      v = (v.digit(c) == 1) ? sub(3, v, piv[c]) : add(3, v, piv[c]);
    }
  }
  return r;
}

PackedVec packed_mul(int q, int m, int k, int n, PackedVec a, PackedVec b) {
  const std::uint64_t mask = low_mask(n);
  std::array<PackedVec, 64> brow;
  for (int j = 0; j < k; ++j) brow[j] = mask_vec(shr(b, j * n), mask);
  PackedVec out;
  for (int i = 0; i < m; ++i) {
    PackedVec acc;
    const PackedVec arow = shr(a, i * k);
    for (int j = 0; j < k; ++j) {
      const int d = arow.digit(j);
      if (d == 1) acc = add(q, acc, brow[j]);
      else if (d == 2) acc = sub(q, acc, brow[j]);
    }
    out = vor(out, shl(acc, i * n));
  }
  return out;
}

PackedVec packed_transpose(int rows, int cols, PackedVec bits) {
  PackedVec out;
  std::uint64_t s = bits.support();
  while (s) {
    const int idx = std::countr_zero(s);
    s &= s - 1;
    const int i = idx / cols, j = idx % cols;
    out.set_digit(j * rows + i, bits.digit(idx));
  }
  return out;
}

int rank(const MatrixGF& m) { return packed_rank(m.q(), m.rows(), m.cols(), m.bits()); }

MatrixGF transpose(const MatrixGF& m) {
  return MatrixGF(m.q(), m.cols(), m.rows(), packed_transpose(m.rows(), m.cols(), m.bits()));
}

MatrixGF operator+(const MatrixGF& a, const MatrixGF& b) {
  if (a.q() != b.q() || a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
  return MatrixGF(a.q(), a.rows(), a.cols(), add(a.q(), a.bits(), b.bits()));
}

MatrixGF operator-(const MatrixGF& a, const MatrixGF& b) {
  if (a.q() != b.q() || a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("shape mismatch");
  return MatrixGF(a.q(), a.rows(), a.cols(), sub(a.q(), a.bits(), b.bits()));
}

MatrixGF operator*(const MatrixGF& a, const MatrixGF& b) {
  if (a.q() != b.q() || a.cols() != b.rows()) throw std::invalid_argument("shape mismatch in product");
  return MatrixGF(a.q(), a.rows(), b.cols(), packed_mul(a.q(), a.rows(), a.cols(), b.cols(), a.bits(), b.bits()));
}

MatrixGF scale(const MatrixGF& a, int c) {
  return MatrixGF(a.q(), a.rows(), a.cols(), mrd::scale(a.q(), a.bits(), ((c % a.q()) + a.q()) % a.q()));
}

PackedVec apply(const MatrixGF& m, PackedVec column) {
  PackedVec out;
  for (int i = 0; i < m.rows(); ++i) out.set_digit(i, dot(m.q(), m.row(i), column));
  return out;
}

RrefResult rref(const MatrixGF& m) {
  std::vector<PackedVec> rows;
  for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  const Subspace s = Subspace::span(m.q(), m.cols(), rows);
  PackedVec bits;
  for (int i = 0; i < s.dim(); ++i) bits = vor(bits, shl(s.basis()[i], i * m.cols()));
  return {MatrixGF(m.q(), m.rows(), m.cols(), bits), s.pivots()};
}

Subspace kernel(const MatrixGF& m) {
  std::vector<PackedVec> rows;
  for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return Subspace::nullspace(m.q(), m.cols(), rows);
}

Subspace left_kernel(const MatrixGF& m) { return kernel(transpose(m)); }

Subspace row_space(const MatrixGF& m) {
  std::vector<PackedVec> rows;
  for (int i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  return Subspace::span(m.q(), m.cols(), rows);
}

std::optional<MatrixGF> inverse(const MatrixGF& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const int n = m.rows(), p = m.q();
  if (n > 8) throw std::invalid_argument("inverse limited to n <= 8");
  Dense a = to_dense(m);
  Dense b{};
  for (int i = 0; i < n; ++i) b[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a[r][c]) {
        piv = r;
        break;
      }
    if (piv < 0) return std::nullopt;
    std::swap(a[piv], a[c]);
    std::swap(b[piv], b[c]);
    const int t = inv_mod(a[c][c], p);
    for (int j = 0; j < n; ++j) {
      a[c][j] = a[c][j] * t % p;
      b[c][j] = b[c][j] * t % p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const int f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] = ((a[r][j] - f * a[c][j]) % p + p) % p;
        b[r][j] = ((b[r][j] - f * b[c][j]) % p + p) % p;
      }
    }
  }
  PackedVec bits;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bits.set_digit(i * n + j, b[i][j]);
  return MatrixGF(p, n, n, bits);
}

bool is_invertible(const MatrixGF& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

void charpoly_coeffs(int p, int n, PackedVec bits, std::array<int, 9>& out) {
  Dense h{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h[i][j] = bits.digit(i * n + j);
  auto md = [p](int x) { return ((x % p) + p) % p; };
  for (int j = 0; j + 2 < n; ++j) {
    int i = j + 1;
    while (i < n && h[i][j] == 0) ++i;
    if (i == n) continue;
    if (i != j + 1) {
      std::swap(h[i], h[j + 1]);
      for (int r = 0; r < n; ++r) std::swap(h[r][i], h[r][j + 1]);
    }
    const int t = inv_mod(h[j + 1][j], p);
    for (int r = j + 2; r < n; ++r) {
      const int u = md(h[r][j] * t);
      if (u == 0) continue;
      for (int c = 0; c < n; ++c) h[r][c] = md(h[r][c] - u * h[j + 1][c]);
      for (int c = 0; c < n; ++c) h[c][j + 1] = md(h[c][j + 1] + u * h[c][r]);
    }
  }
  // p_k = (x - h_kk) p_{k-1} - sum_i (prod subdiag) h_{k-i,k} p_{k-i-1}   (1-indexed)
  std::array<std::array<int, 9>, 9> pk{};
  pk[0][0] = 1;
  for (int k = 1; k <= n; ++k) {
    auto& cur = pk[k];
    const auto& prev = pk[k - 1];
    for (int d = 0; d < k; ++d) {
      cur[d + 1] += prev[d];
      cur[d] -= h[k - 1][k - 1] * prev[d];
    }
    int t = 1;
    for (int i = 1; i < k; ++i) {
      t = md(t * h[k - i][k - i - 1]);
      if (t == 0) break;
      const int coef = md(t * h[k - i - 1][k - 1]);
      if (coef == 0) continue;
      const auto& pp = pk[k - i - 1];
      for (int d = 0; d <= k - i - 1; ++d) cur[d] -= coef * pp[d];
    }
    for (int d = 0; d <= k; ++d) cur[d] = md(cur[d]);
  }
  out = pk[n];
}

std::vector<int> charpoly(const MatrixGF& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("charpoly of non-square matrix");
  const int n = m.rows();
  if (n > 8) throw std::invalid_argument("charpoly limited to n <= 8");
  std::array<int, 9> c{};
  charpoly_coeffs(m.q(), n, m.bits(), c);
  return std::vector<int>(c.begin(), c.begin() + n + 1);
}

std::uint32_t charpoly_key(int q, int n, PackedVec bits) {
  std::array<int, 9> c{};
  charpoly_coeffs(q, n, bits, c);
  std::uint32_t key = 0;
  for (int i = n - 1; i >= 0; --i) key = key * static_cast<std::uint32_t>(q) + static_cast<std::uint32_t>(c[i]);
  return key;
}

std::vector<Gf> polynomial_basis(const FieldCtx& f) {
  std::vector<Gf> b;
  Gf x = f.one();
  for (int i = 0; i < f.n(); ++i) {
    b.push_back(x);
    x = f.mul(x, f.primitive());
  }
  return b;
}

std::vector<int> coordinates_in_basis(const FieldCtx& f, Gf x, std::span<const Gf> basis) {
  if (f.e() != 1) throw std::invalid_argument("matrix representation requires a prime base field");
  const int n = f.n();
  if (static_cast<int>(basis.size()) != n) throw std::invalid_argument("basis has wrong length");
  // B has the basis digit vectors as columns; solve B c = digits(x)
  std::vector<int> digits_flat;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) digits_flat.push_back(f.digits(basis[j])[i]);
  const auto binv = inverse(MatrixGF::from_digits(f.p(), n, n, digits_flat));
  if (!binv) throw std::invalid_argument("basis is not linearly independent");
  PackedVec v;
  const auto d = f.digits(x);
  for (int i = 0; i < n; ++i) v.set_digit(i, d[i]);
  const PackedVec c = apply(*binv, v);
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = c.digit(i);
  return out;
}

MatrixGF linear_map_to_matrix(const FieldCtx& f, std::span<const Gf> coeffs, long stride,
                              std::span<const Gf> basis) {
  if (f.e() != 1) throw std::invalid_argument("matrix representation requires a prime base field");
  const int n = f.n();
  if (static_cast<int>(coeffs.size()) > n) throw std::invalid_argument("too many linearized coefficients");
  std::vector<int> digits_flat;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) digits_flat.push_back(f.digits(basis[j])[i]);
  const auto binv = inverse(MatrixGF::from_digits(f.p(), n, n, digits_flat));
  if (!binv) throw std::invalid_argument("basis is not linearly independent");
  PackedVec bits;
  for (int j = 0; j < n; ++j) {
    Gf y = f.zero();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      if (coeffs[i] == f.zero()) continue;
      y = f.add(y, f.mul(coeffs[i], f.frobenius(basis[j], stride * static_cast<long>(i))));
    }
    PackedVec v;
    const auto d = f.digits(y);
    for (int i = 0; i < n; ++i) v.set_digit(i, d[i]);
    const PackedVec c = apply(*binv, v);
    for (int i = 0; i < n; ++i) bits.set_digit(i * n + j, c.digit(i));
  }
  return MatrixGF(f.p(), n, n, bits);
}

std::string to_text(const MatrixGF& m) {
  std::string s;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) s.push_back(static_cast<char>('0' + m.at(i, j)));
    s.push_back('\n');
  }
  return s;
}

MatrixGF matrix_from_lines(int q, std::span<const std::string> lines) {
  if (lines.empty()) throw std::runtime_error("empty matrix");
  const int rows = static_cast<int>(lines.size());
  const int cols = static_cast<int>(lines[0].size());
  std::vector<int> digits;
  for (const auto& l : lines) {
    if (static_cast<int>(l.size()) != cols) throw std::runtime_error("ragged matrix row '" + l + "'");
    for (char c : l) {
      const int d = c - '0';
      if (d < 0 || d >= q) throw std::runtime_error(std::string("invalid digit '") + c + "' for q=" + std::to_string(q));
      digits.push_back(d);
    }
  }
  return MatrixGF::from_digits(q, rows, cols, digits);
}

std::ostream& operator<<(std::ostream& os, const MatrixGF& m) { return os << to_text(m); }

}  // namespace mrd
