#pragma once

#include "agds/calculus.hpp"
#include "agds/evo_solver.hpp"
#include "agds/graddiv.hpp"
#include "agds/material_law.hpp"
#include "agds/tensor_ops.hpp"

namespace agds::models {

/// Guyer-Krumhansl heat conduction parameters.
struct GKParams {
  double mu1 = 2.0;      ///< coefficient of the Laplacian
  double mu2 = 1.0;      ///< coefficient of grad div
  double kappa = 1.0;    ///< thermal conductivity
  double tau0 = 1.0;     ///< relaxation time
  double rho_c = 1.0;    ///< density times heat capacity
  bool symmetric_tensor = false;
};

/// Coefficients of the constitutive tensor alpha0 sym0 + alpha1 P + alpha2 skew.
struct GKCoefficients {
  double lambda = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
};

/// Throws ValidationError unless mu1 > 0 and mu1 + mu2 > 0 (all alphas positive).
GKCoefficients gk_coefficients(double mu1, double mu2);

/// Pointwise 9x9 constitutive matrix kappa^{-1} (alpha0 sym0 + alpha1 P + alpha2 skew).
Mat gk_pointwise(const GKCoefficients& c, double kappa = 1.0);

/// Constitutive tensor lifted to tensor fields of the given operators.
LinOp gk_tensor(const GKCoefficients& c, const FieldOps& ops, double kappa = 1.0);

/// Coefficients (m1, m2) with div C grad = kappa^{-1}(m1 laplacian + m2 grad div);
/// the symmetric variant drops the skew part.
std::pair<double, double> gk_effective(const GKCoefficients& c, bool symmetric);

/// Relative residual of div C grad - kappa^{-1}(mu1 laplacian + mu2 grad div).
double gk_tensor_check(const GKParams& p, const FieldOps& ops);

struct GKSystem {
  GKParams params;
  GKCoefficients coeffs;
  FieldOps ops;
  GradDivSystem sys;
  BlockSkewOp a;
  MaterialLaw law;
  LinOp c_tensor;
};

/// State (heat flux, temperature, tensor). On bounded grids the flux vanishes
/// on the boundary nodes.
GKSystem gk_assemble(const GKParams& p, const Grid& grid);

struct GKRecovery {
  double residual = 0.0;          ///< max over steps of |r_n| / scale
  double constitutive = 0.0;      ///< |C^{-1} u3 - grad u1| relative
  double scale = 0.0;
};

/// Residual of tau0 k^{-1} d_t u1 + k^{-1} u1 - k^{-1}(m1 lap + m2 grad div) u1
/// + grad u2 = f1 with the implicit Euler difference (periodic grids only).
GKRecovery gk_recover(const Trajectory& u, const GKSystem& s, const Forcing& forcing);

}  // namespace agds::models
