#pragma once

#include <optional>

#include "agds/boundary.hpp"
#include "agds/boundary_data.hpp"
#include "agds/calculus.hpp"
#include "agds/evo_solver.hpp"

namespace agds::models {

/// Boundary material kappa(z) of an impedance condition.
struct BoundaryLawSpec {
  enum class Kind { affine, mohsen, senior, eddy_fractional, burque_kappa };
  Kind kind = Kind::affine;
  /// affine: (a0, a1) with kappa = a0 + z a1; mohsen: (mu, tau, eps, sigma);
  /// senior: (mu, eps, sigma); eddy_fractional: (mu, sigma); burque_kappa: (k, gamma).
  std::vector<double> params{0.0, 1.0};

  MaterialLaw make(Index dim) const;
};

enum class LeontovichVariant { classical, boundary_data };

struct LeontovichParams {
  double mu = 1.0;
  double eps = 1.0;
  BoundaryLawSpec boundary;
  LeontovichVariant variant = LeontovichVariant::classical;
};

struct LeontovichSystem {
  LeontovichParams params;
  Grid grid;
  FieldOps ops;
  std::optional<TangentialTraces> traces;    ///< classical variant
  std::optional<BoundaryDataSpace> bd;       ///< boundary data variant
  GradDivSystem sys;                         ///< components (-curl, boundary map)
  BlockSkewOp a;
  MaterialLaw law;
  Index size_h = 0, size_e = 0, size_eta = 0;
};

/// Classical variant: bounded box, boundary map = tangential projection.
/// Boundary data variant: slab grid, boundary map = graph projection onto
/// the boundary data space of the curl.
LeontovichSystem leontovich_assemble(const LeontovichParams& p, const Grid& grid);

/// Forcing acting on the magnetic block only.
Forcing leontovich_magnetic_forcing(const LeontovichSystem& s,
                                    std::function<std::array<double, 3>(double, double, double, double)> f);

struct LeontovichResiduals {
  /// classical: max_t |eta - gamma_tau E| on face-interior nodes;
  /// boundary data: max_t |iota^* E - bullet eta|.
  double boundary_condition = 0.0;
  double scale = 0.0;   ///< max_t of the compared terms
};

LeontovichResiduals leontovich_residuals(const Trajectory& u, const LeontovichSystem& s);

/// Per-frequency residual of pi_tau E - Z (n x h1 + H x n) on face-interior
/// nodes relative to |pi_tau E| (classical variant).
struct ImpedanceReductionReport {
  std::vector<double> residual;
  double max_residual = 0.0;
};

ImpedanceReductionReport leontovich_impedance_reduction(const FrequencySolution& sol,
                                                        const LeontovichSystem& s);

}  // namespace agds::models
