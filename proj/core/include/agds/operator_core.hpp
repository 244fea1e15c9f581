#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <string>
#include <vector>

#include "agds/errors.hpp"

namespace agds {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Symmetric positive definite inner-product matrix, stored either as a
/// diagonal weight vector or as a dense matrix.
class Gram {
 public:
  Gram() = default;
  static Gram identity(Index n);
  static Gram diagonal(Vec weights);
  static Gram dense(Mat matrix);

  Index dim() const;
  bool is_diagonal() const { return diagonal_; }
  /// False for a dense matrix whose Cholesky factorization failed.
  bool factorized() const { return diagonal_ || llt_ != nullptr; }
  const Vec& weights() const;
  Mat to_dense() const;
  SpMat to_sparse() const;

  Vec apply(const Vec& x) const;
  Vec solve(const Vec& x) const;
  /// Returns G^{-1} M for a sparse right-hand side, pruning exact zeros.
  SpMat solve(const SpMat& m) const;
  double inner(const Vec& x, const Vec& y) const;
  double norm(const Vec& x) const;

 private:
  bool diagonal_ = true;
  Vec weights_;
  Mat dense_;
  std::shared_ptr<const Eigen::LLT<Mat>> llt_;
};

/// Block-diagonal Gram of a direct sum.
Gram block_diagonal(const std::vector<Gram>& blocks);

/// Finite-dimensional real Hilbert space in coordinates.
struct Space {
  Index dim = 0;
  Gram gram;
  std::string label;
};
using SpacePtr = std::shared_ptr<const Space>;

struct SpectrumBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Extremal eigenvalues of an SPD Gram (exact for small dimension, power
/// iteration otherwise).
SpectrumBounds gram_spectrum(const Gram& g);

/// Validating constructor. Throws ValidationError when the Gram is not
/// symmetric positive definite or its size differs from dim.
SpacePtr make_space(Index dim, Gram gram, std::string label = {});
SpacePtr euclidean_space(Index dim, std::string label = {});

/// Orthogonal direct sum X_0 + X_1 + ... with block-diagonal Gram.
SpacePtr direct_sum(const std::vector<SpacePtr>& parts, std::string label = {});

/// Linear map between two coordinate spaces.
class LinOp {
 public:
  LinOp() = default;
  LinOp(SpMat coeffs, SpacePtr dom, SpacePtr codom);

  const SpMat& coeffs() const { return coeffs_; }
  const SpacePtr& dom() const { return dom_; }
  const SpacePtr& codom() const { return codom_; }
  Index rows() const { return coeffs_.rows(); }
  Index cols() const { return coeffs_.cols(); }

  Vec apply(const Vec& x) const { return coeffs_ * x; }
  Vec operator()(const Vec& x) const { return apply(x); }

  /// Same coefficients on different (dimensionally compatible) spaces.
  LinOp rebind(SpacePtr dom, SpacePtr codom) const;

 private:
  SpMat coeffs_;
  SpacePtr dom_;
  SpacePtr codom_;
};

LinOp compose(const LinOp& outer, const LinOp& inner);
LinOp operator*(double a, const LinOp& t);
LinOp operator+(const LinOp& a, const LinOp& b);
LinOp operator-(const LinOp& a, const LinOp& b);
LinOp identity_op(const SpacePtr& x);
LinOp zero_op(const SpacePtr& dom, const SpacePtr& codom);

/// Hilbert adjoint T* = G_dom^{-1} T^T G_codom.
LinOp gram_adjoint(const LinOp& t);

/// Largest |<Tx|y> - <x|T*y>| / (|x||y|) over the given number of random
/// pairs (deterministic seed).
double adjoint_defect(const LinOp& t, const LinOp& t_star, int pairs, unsigned seed);

/// Domain of a closed operator with its graph inner product.
struct GraphSpace {
  SpacePtr base;
  LinOp generator;
  SpacePtr space;
};

GraphSpace graph_space(const LinOp& c0);

/// Riesz representatives of the adjoint of S : X_1 -> Y.
struct Diamond {
  LinOp x0_rep;   ///< Y -> X_0, G_X0^{-1} S^T G_Y
  LinOp x1_rep;   ///< Y -> X_1, G_X1^{-1} S^T G_Y
  LinOp s;       ///< the operator itself
  /// Pairing <S x|y>_Y for x in X_1.
  double pair(const Vec& y, const Vec& x) const;
};

/// Adjoint of S : X_1 -> Y where X_1 is the graph space inside X_0.
Diamond diamond(const LinOp& s, const GraphSpace& x1);

/// Entrywise difference max|a-b| relative to the largest entry of a or b.
double max_rel_diff(const SpMat& a, const SpMat& b);
double max_abs(const SpMat& a);

/// Kronecker product of sparse matrices.
SpMat kron(const SpMat& a, const SpMat& b);
SpMat sparse_identity(Index n);
SpMat sparse_diag(const Vec& d);
SpMat vstack(const std::vector<SpMat>& blocks);
SpMat hstack(const std::vector<SpMat>& blocks);
SpMat block_diag(const std::vector<SpMat>& blocks);

}  // namespace agds
