#include "wiretap/matcalc.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wiretap {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix is not square (" +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
}

}  // namespace

Matrix symmetrize(const Matrix& m) {
  require_square(m, "symmetrize");
  return 0.5 * (m + m.transpose());
}

SymMat::SymMat(const Matrix& m) : m_(symmetrize(m)) {
  if (!m_.allFinite()) throw std::invalid_argument("SymMat: non-finite entry");
}

SymMat SymMat::identity(Index n) { return SymMat(Matrix::Identity(n, n)); }

SymMat SymMat::zero(Index n) { return SymMat(Matrix::Zero(n, n)); }

Vector vech(const Matrix& s) {
  require_square(s, "vech");
  const Index m = s.rows();
  Vector v(vech_size(m));
  Index k = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = j; i < m; ++i) v(k++) = s(i, j);
  return v;
}

Matrix unvech(const Vector& v) {
  const auto m = static_cast<Index>(std::llround((std::sqrt(8.0 * double(v.size()) + 1.0) - 1.0) / 2.0));
  if (vech_size(m) != v.size())
    throw std::invalid_argument("unvech: length " + std::to_string(v.size()) + " is not triangular");
  Matrix s(m, m);
  Index k = 0;
  for (Index j = 0; j < m; ++j)
    for (Index i = j; i < m; ++i) {
      s(i, j) = v(k);
      s(j, i) = v(k);
      ++k;
    }
  return s;
}

Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

Matrix unvec(const Vector& v, Index rows, Index cols) {
  if (rows * cols != v.size()) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const Matrix>(v.data(), rows, cols);
}

DuplicationMatrix::DuplicationMatrix(Index m) : m_(m), d_(Matrix::Zero(m * m, vech_size(m))) {
  if (m < 1) throw std::invalid_argument("duplication_matrix: m must be >= 1");
  for (Index j = 0; j < m; ++j)
    for (Index i = j; i < m; ++i) {
      const Index col = vech_index(i, j, m);
      d_(j * m + i, col) = 1.0;
      d_(i * m + j, col) = 1.0;
    }
}

ReducedDuplicationMatrix::ReducedDuplicationMatrix(Index n1, Index n2)
    : n1_(n1), n2_(n2), d_(Matrix::Zero((n1 + n2) * (n1 + n2), n1 * n2)) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("reduced_duplication_matrix: n1, n2 must be >= 1");
  const Index n = n1 + n2;
  // Column c * n2 + r carries K21(r, c) = K(n1 + r, c) = K(c, n1 + r).
  for (Index c = 0; c < n1; ++c)
    for (Index r = 0; r < n2; ++r) {
      const Index col = c * n2 + r;
      d_(c * n + (n1 + r), col) = 1.0;
      d_((n1 + r) * n + c, col) = 1.0;
    }
}

DuplicationMatrix duplication_matrix(Index m) { return DuplicationMatrix(m); }

ReducedDuplicationMatrix reduced_duplication_matrix(Index n1, Index n2) {
  return ReducedDuplicationMatrix(n1, n2);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace wiretap
