#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "agds/operator_core.hpp"

namespace agds {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using CSpMat = Eigen::SparseMatrix<Complex>;

/// A point z of the open ball B(r, r), r = 1/(2 rho0). Its reciprocal
/// s = 1/z satisfies Re s > rho0.
struct FrequencySample {
  Complex z;
  double rho0 = 1.0;
  Complex s() const { return 1.0 / z; }
};

/// Validating constructors; throw ValidationError outside the ball.
FrequencySample frequency_sample(Complex z, double rho0);
FrequencySample laplace_sample(Complex s, double rho0);

/// Material law M(z), analytic on a ball around r = 1/(2 rho0).
///
/// Impedance families (mohsen, senior, eddy_fractional) are specified by a
/// scalar boundary impedance Z(z); their law value is the boundary block
/// kappa(z) = z / Z(z).
class MaterialLaw {
 public:
  enum class Kind { affine, mohsen, senior, eddy_fractional, burque_kappa, sampled, block_diagonal };

  static MaterialLaw affine(SpMat m0, SpMat m1);
  static MaterialLaw mohsen(double mu, double tau, double eps, double sigma, Index dim = 1);
  static MaterialLaw senior(double mu, double eps, double sigma, Index dim = 1);
  static MaterialLaw eddy_fractional(double mu, double sigma, Index dim = 1);
  static MaterialLaw burque_kappa(double k, double gamma, Index dim = 1);
  static MaterialLaw sampled(std::function<CMat(Complex)> m, Index dim);
  static MaterialLaw block_diagonal(std::vector<MaterialLaw> parts);

  Kind kind() const { return kind_; }
  Index dim() const { return dim_; }
  bool is_affine() const { return affine_; }
  bool is_scalar() const;
  /// M_0, M_1 of an affine law (or a block diagonal of affine laws).
  const SpMat& m0() const;
  const SpMat& m1() const;
  const std::vector<MaterialLaw>& parts() const { return parts_; }
  /// Family parameters in declaration order.
  const std::vector<double>& params() const { return params_; }

  /// Scalar law value m(z) (scalar families only).
  Complex scalar_value(Complex z) const;
  /// Boundary impedance Z(z) (impedance families only).
  Complex impedance(Complex z) const;
  CMat dense_value(Complex z) const;

 private:
  Kind kind_ = Kind::affine;
  Index dim_ = 0;
  bool affine_ = false;
  SpMat m0_, m1_;
  std::vector<double> params_;
  std::vector<MaterialLaw> parts_;
  std::shared_ptr<std::function<CMat(Complex)>> sampled_;
};

/// M(z) as a sparse complex matrix. Throws BranchCutError when a fractional
/// power is evaluated on its cut.
CSpMat eval(const MaterialLaw& law, const FrequencySample& z);
CSpMat eval_at(const MaterialLaw& law, Complex z);

/// Principal square root; throws BranchCutError on the negative real axis.
Complex principal_sqrt(Complex w);

struct PosdefOptions {
  int boundary_samples = 256;
  int interior_samples = 256;
};

struct PosdefReport {
  double c_est = 0.0;   ///< min over samples of lambda_min(Re z^{-1} M(z))
  Complex z_min{};      ///< sample attaining the minimum
  int samples = 0;
  bool positive() const { return c_est > 0.0; }
};

/// Deterministic sample set of the ball: nested van der Corput angles on the
/// boundary circle (z = 0 excluded) and a Halton sequence in the interior.
std::vector<Complex> ball_samples(double rho0, const PosdefOptions& opts);

PosdefReport posdef_check(const MaterialLaw& law, double rho0, const PosdefOptions& opts = {});

/// Smallest eigenvalue of Re(z^{-1} M(z)) at one point.
double posdef_at(const MaterialLaw& law, Complex z);

struct AffineReport {
  double c0 = 0.0;   ///< smallest positive eigenvalue of M_0 on its range
  double c1 = 0.0;   ///< smallest eigenvalue of Re M_1 compressed to ker M_0
  bool sufficient = false;
  Index kernel_dim = 0;
};

/// Sufficient positivity condition for z^{-1} M_0 + M_1. Throws
/// ValidationError when M_0 is not self-adjoint.
AffineReport affine_sufficient(const SpMat& m0, const SpMat& m1);

/// max |1 - (k/2)(s + k/4 + g)^{-1} - (s - k/4 + g)/(s + k/4 + g)| over
/// samples s = 1/z of the ball with rho0 = 1 + k.
double burque_kappa_identity(double k, double gamma, int samples);

/// Cauchy-Riemann defect of M at z with step h, relative to |M(z)|.
double analyticity_defect(const MaterialLaw& law, Complex z, double h = 1e-5);

}  // namespace agds
