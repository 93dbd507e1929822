#pragma once

// Matrix-calculus primitives: half-vectorization, duplication matrices and
// Kronecker products. Ordering convention for vech is column-wise over the
// lower triangle including the diagonal:
//   vech([[a, .], [b, c]]) = [a, b, c]
// Every Hessian index map in the solver depends on this ordering.

#include <Eigen/Dense>

#include <cstddef>

namespace wiretap {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Returns (M + M^T) / 2. Throws std::invalid_argument for non-square input.
Matrix symmetrize(const Matrix& m);

/// Dense real symmetric matrix. Symmetric by construction (averaged with its
/// transpose) and finite.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(const Matrix& m);

  static SymMat identity(Index n);
  static SymMat zero(Index n);

  const Matrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

/// Number of free entries of an m x m symmetric matrix.
constexpr Index vech_size(Index m) { return m * (m + 1) / 2; }

/// Position of entry (i, j), i >= j, inside vech of an m x m matrix.
constexpr Index vech_index(Index i, Index j, Index m) {
  return j * m - j * (j - 1) / 2 + (i - j);
}

Vector vech(const Matrix& s);
inline Vector vech(const SymMat& s) { return vech(s.matrix()); }

/// Inverse of vech; the dimension is inferred from the vector length.
Matrix unvech(const Vector& v);

/// Column-major vectorization.
Vector vec(const Matrix& a);
Matrix unvec(const Vector& v, Index rows, Index cols);

/// D_m with D_m * vech(S) = vec(S) for every symmetric S. Shape m^2 x m(m+1)/2.
class DuplicationMatrix {
 public:
  explicit DuplicationMatrix(Index m);

  Index dim() const { return m_; }
  const Matrix& matrix() const { return d_; }

 private:
  Index m_;
  Matrix d_;
};

/// Maps vec(dK21) (n2 x n1 block) to vec of the symmetric n x n matrix with
/// zero diagonal blocks and off-diagonal blocks dK21, dK21^T (n = n1 + n2).
/// These are the columns of D_n that belong to the K21 block.
class ReducedDuplicationMatrix {
 public:
  ReducedDuplicationMatrix(Index n1, Index n2);

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  const Matrix& matrix() const { return d_; }

 private:
  Index n1_;
  Index n2_;
  Matrix d_;
};

DuplicationMatrix duplication_matrix(Index m);
ReducedDuplicationMatrix reduced_duplication_matrix(Index n1, Index n2);

Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace wiretap
