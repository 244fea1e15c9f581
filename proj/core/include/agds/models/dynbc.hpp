#pragma once

#include <optional>

#include "agds/boundary.hpp"
#include "agds/calculus.hpp"
#include "agds/evo_solver.hpp"

namespace agds::models {

/// Coefficients of the wave system with dynamic boundary condition. The
/// blocks are (p, v, eta1, eta2) with M_0 = diag(m00, mu11, mu22, mu33) and
/// M_1 = diag(n00, nu11, nu22, nu33).
struct DynBCParams {
  double m00 = 1.0, n00 = 1.0;
  double mu11 = 1.0, nu11 = 1.0;
  double mu22 = 0.0, nu22 = 1.0;
  double mu33 = 1.0, nu33 = 1.0;
  bool boundary_coupling = true;   ///< false removes the eta blocks
};

struct DynBCSystem {
  DynBCParams params;
  Grid grid;
  FieldOps ops;
  BoundaryTrace trace;
  SurfaceGradient surface;
  GradDivSystem sys;     ///< components (grad, gamma, surface grad o gamma)
  BlockSkewOp a;
  MaterialLaw law;
  SpMat normal_trace;    ///< discrete n . v from the Green identity, vector -> L2(boundary)
  LinOp surface_grad_adj;///< adjoint of the surface gradient
  Index size_p = 0, size_v = 0, size_eta1 = 0, size_eta2 = 0;
};

/// Assembly on a 2D bounded grid with the boundary polyline.
DynBCSystem dynbc_assemble(const DynBCParams& p, const Grid& grid);

/// Forcing acting on the pressure block only.
Forcing dynbc_pressure_forcing(const DynBCSystem& s, std::function<double(double, double, double)> f);

struct DynBCResiduals {
  double boundary_condition = 0.0;   ///< max_t |n.v + eta1 + surface_grad^* eta2|_{L2(boundary)}
  std::optional<double> reduced = {};///< reduced boundary heat equation residual
  double eta1_identity = 0.0;        ///< |eta1 + gamma p - h1| (mu22 = 0, nu22 = 1 only)
};

DynBCResiduals dynbc_residuals(const Trajectory& u, const DynBCSystem& s, const Forcing& forcing);

}  // namespace agds::models
