#include "mrd/code.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mrd {

AdditiveCode::AdditiveCode(int q, int rows, int cols, Subspace space)
    : q_(q), rows_(rows), cols_(cols), space_(std::move(space)) {
  check_prime(q);
  if (space_.p() != q || space_.ambient() != rows * cols) throw std::invalid_argument("code space does not match shape");
}

AdditiveCode AdditiveCode::from_basis(const std::vector<MatrixGF>& matrices) {
  if (matrices.empty()) throw std::invalid_argument("cannot build a code from an empty basis");
  const int q = matrices[0].q(), m = matrices[0].rows(), n = matrices[0].cols();
  Subspace s(q, m * n);
  for (const auto& x : matrices) {
    if (x.q() != q || x.rows() != m || x.cols() != n) throw std::invalid_argument("basis matrices differ in shape or field");
    s.insert(x.bits());
  }
  return AdditiveCode(q, m, n, std::move(s));
}

AdditiveCode AdditiveCode::zero(int q, int rows, int cols) { return AdditiveCode(q, rows, cols, Subspace(q, rows * cols)); }

AdditiveCode AdditiveCode::full(int q, int rows, int cols) {
  return AdditiveCode(q, rows, cols, Subspace::full(q, rows * cols));
}

std::uint64_t AdditiveCode::size() const {
  std::uint64_t s = 1;
  for (int i = 0; i < dim(); ++i) s *= static_cast<std::uint64_t>(q_);
  return s;
}

std::vector<MatrixGF> AdditiveCode::basis() const {
  std::vector<MatrixGF> out;
  for (const auto& b : space_.basis()) out.emplace_back(q_, rows_, cols_, b);
  return out;
}

bool AdditiveCode::contains(const MatrixGF& x) const {
  return x.q() == q_ && x.rows() == rows_ && x.cols() == cols_ && space_.contains(x.bits());
}

std::string AdditiveCode::canonical_bytes() const {
  std::string s;
  s.reserve(4 + 16 * space_.basis().size());
  s.push_back(static_cast<char>(q_));
  s.push_back(static_cast<char>(rows_));
  s.push_back(static_cast<char>(cols_));
  s.push_back(static_cast<char>(dim()));
  for (const auto& b : space_.basis()) {
    for (int i = 7; i >= 0; --i) s.push_back(static_cast<char>((b.lo >> (8 * i)) & 0xFF));
    for (int i = 7; i >= 0; --i) s.push_back(static_cast<char>((b.hi >> (8 * i)) & 0xFF));
  }
  return s;
}

CodewordEnumerator::CodewordEnumerator(const AdditiveCode& c)
    : p_(c.p()), basis_(c.space().basis()), digits_(basis_.size(), 0) {}

bool CodewordEnumerator::next() {
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    cur_ = add(p_, cur_, basis_[i]);
    if (++digits_[i] < p_) return true;
    digits_[i] = 0;
  }
  return false;
}

std::vector<MatrixGF> codewords(const AdditiveCode& c) {
  std::vector<MatrixGF> out;
  CodewordEnumerator it(c);
  do {
    out.push_back(c.matrix(it.current()));
  } while (it.next());
  return out;
}

std::uint64_t RankDistribution::total() const {
  std::uint64_t t = 0;
  for (auto x : counts) t += x;
  return t;
}

RankDistribution rank_distribution(const AdditiveCode& c) {
  RankDistribution rd;
  rd.counts.assign(std::min(c.rows(), c.cols()) + 1, 0);
  CodewordEnumerator it(c);
  do {
    ++rd.counts[packed_rank(c.q(), c.rows(), c.cols(), it.current())];
  } while (it.next());
  return rd;
}

int minimum_distance_by_enumeration(const AdditiveCode& c) {
  if (c.dim() == 0) throw std::invalid_argument("minimum distance of the zero code");
  int best = std::min(c.rows(), c.cols());
  CodewordEnumerator it(c);
  while (it.next()) {
    best = std::min(best, packed_rank(c.q(), c.rows(), c.cols(), it.current()));
    if (best == 1) break;
  }
  return best;
}

namespace {

// Is there a nonzero codeword X with U X = 0 (U given by row vectors in F_q^m)?
bool has_word_killed_by(const AdditiveCode& c, const Subspace& u) {
  const int m = c.rows(), n = c.cols(), q = c.q();
  const auto& basis = c.space().basis();
  const int k = static_cast<int>(basis.size());
  // equation (u, j): sum_i coeff_i (u X_i)_j = 0
  Subspace eqs(q, k);
  for (const auto& uvec : u.basis()) {
    for (int j = 0; j < n; ++j) {
      PackedVec row;
      for (int i = 0; i < k; ++i) {
        int s = 0;
        for (int r = 0; r < m; ++r) {
          const int ur = uvec.digit(r);
          if (ur) s += ur * basis[i].digit(r * n + j);
        }
        row.set_digit(i, s % q);
      }
      eqs.insert(row);
      if (eqs.dim() == k) return false;
    }
  }
  return eqs.dim() < k;
}

}  // namespace

int minimum_distance_by_kernels(const AdditiveCode& c) {
  if (c.dim() == 0) throw std::invalid_argument("minimum distance of the zero code");
  if (c.rows() > c.cols()) return minimum_distance_by_kernels(transpose(c));
  const int m = c.rows();
  int tmax = 0;
  for (int t = 1; t < m; ++t) {
    bool found = false;
    enumerate_subspaces(c.q(), m, t, [&](const Subspace& u) {
      if (has_word_killed_by(c, u)) {
        found = true;
        return false;
      }
      return true;
    });
    if (!found) break;
    tmax = t;
  }
  return m - tmax;
}

int minimum_distance(const AdditiveCode& c) {
  if (c.dim() == 0) throw std::invalid_argument("minimum distance of the zero code");
  if (c.size() <= (std::uint64_t{1} << 16)) return minimum_distance_by_enumeration(c);
  return minimum_distance_by_kernels(c);
}

MrdCheck is_mrd(const AdditiveCode& c) {
  const int m = std::min(c.rows(), c.cols()), n = std::max(c.rows(), c.cols());
  const int d = minimum_distance(c);
  // |C| = q^{n(m-d+1)} with q prime
  return {c.dim() == n * (m - d + 1), d};
}

bool is_quasi_mrd(const AdditiveCode& c) {
  const int m = std::min(c.rows(), c.cols()), n = std::max(c.rows(), c.cols());
  const int d = minimum_distance(c);
  return n * (m - d) < c.dim() && c.dim() < n * (m - d + 1);
}

AdditiveCode delsarte_dual(const AdditiveCode& c) {
  return AdditiveCode(c.q(), c.rows(), c.cols(), c.space().orthogonal());
}

AdditiveCode transpose(const AdditiveCode& c) {
  Subspace s(c.q(), c.rows() * c.cols());
  for (const auto& b : c.space().basis()) s.insert(packed_transpose(c.rows(), c.cols(), b));
  return AdditiveCode(c.q(), c.cols(), c.rows(), std::move(s));
}

AdditiveCode transform(const AdditiveCode& c, const MatrixGF& a, const MatrixGF& b) {
  if (a.rows() != c.rows() || a.cols() != c.rows() || b.rows() != c.cols() || b.cols() != c.cols())
    throw std::invalid_argument("transform shape mismatch");
  const int q = c.q(), m = c.rows(), n = c.cols();
  Subspace s(q, m * n);
  for (const auto& x : c.space().basis())
    s.insert(packed_mul(q, m, n, n, packed_mul(q, m, m, n, a.bits(), x), b.bits()));
  return AdditiveCode(q, m, n, std::move(s));
}

Subspace lift_matrix(const MatrixGF& a) {
  const int m = a.rows(), n = a.cols();
  std::vector<PackedVec> rows;
  for (int i = 0; i < m; ++i) {
    PackedVec v = shl(a.row(i), m);
    v.set_digit(i, 1);
    rows.push_back(v);
  }
  return Subspace::span(a.q(), m + n, rows);
}

std::vector<Subspace> lift(const AdditiveCode& c) {
  std::vector<Subspace> out;
  CodewordEnumerator it(c);
  do {
    out.push_back(lift_matrix(c.matrix(it.current())));
  } while (it.next());
  return out;
}

std::string to_code_file(const AdditiveCode& c) {
  std::ostringstream os;
  os << c.q() << ' ' << c.rows() << ' ' << c.cols() << ' ' << c.dim() << '\n';
  bool first = true;
  for (const auto& b : c.basis()) {
    if (!first) os << '\n';
    first = false;
    os << to_text(b);
  }
  return os.str();
}

CodeFileContents read_code_file(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("code file line " + std::to_string(lineno) + ": " + msg);
  };
  CodeFileContents out;
  bool have_header = false;
  std::vector<std::string> block;
  auto flush = [&]() {
    if (block.empty()) return;
    if (static_cast<int>(block.size()) != out.rows) fail("matrix has " + std::to_string(block.size()) + " rows, expected " + std::to_string(out.rows));
    try {
      MatrixGF x = matrix_from_lines(out.q, block);
      if (x.cols() != out.cols) fail("matrix has wrong column count");
      out.matrices.push_back(x);
    } catch (const std::runtime_error& e) {
      fail(e.what());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    block.clear();
  };
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (!have_header) {
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      std::istringstream hs(line);
      if (!(hs >> out.q >> out.rows >> out.cols >> out.k)) fail("expected header 'q m n k'");
      if (out.q != 2 && out.q != 3) fail("unsupported q");
      if (out.rows < 1 || out.cols < 1 || out.rows * out.cols > kMaxCoords || out.k < 0) fail("bad shape in header");
      have_header = true;
      continue;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    block.push_back(line);
    if (static_cast<int>(block.size()) == out.rows) flush();
  }
  ++lineno;
  flush();
  if (!have_header) fail("missing header");
  if (static_cast<int>(out.matrices.size()) != out.k)
    fail("header announces " + std::to_string(out.k) + " matrices, found " + std::to_string(out.matrices.size()));
  return out;
}

AdditiveCode parse_code_file(const std::string& text) {
  const auto contents = read_code_file(text);
  if (contents.matrices.empty()) return AdditiveCode::zero(contents.q, contents.rows, contents.cols);
  AdditiveCode c = AdditiveCode::from_basis(contents.matrices);
  if (c.dim() != contents.k) throw std::runtime_error("code file matrices are linearly dependent");
  return c;
}

}  // namespace mrd
