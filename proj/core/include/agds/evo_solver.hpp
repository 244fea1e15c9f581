#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/SparseLU>

#include "agds/graddiv.hpp"
#include "agds/material_law.hpp"

namespace agds {

/// Uniform time grid t_n = t_start + n tau, n = 0..steps, with the
/// exponential weight exp(-2 rho t).
struct WeightedTimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double tau = 0.1;
  double rho = 1.0;

  Index steps() const;
  double t(Index n) const { return t_start + static_cast<double>(n) * tau; }
};

/// Validating constructor: tau must divide the window, rho must be positive.
WeightedTimeGrid make_time_grid(double t_start, double t_end, double tau, double rho);

/// Named blocks of a state vector (used for reporting and CSV export).
struct BlockLayout {
  std::vector<std::string> labels;
  std::vector<Index> offsets;
  std::vector<Index> sizes;
};

BlockLayout layout_of(const BlockSkewOp& a);

struct Trajectory {
  WeightedTimeGrid grid;
  std::vector<Vec> values;   ///< one state per grid time
  SpacePtr space;            ///< Gram for norms (Euclidean when null)
  BlockLayout layout;
};

using Forcing = std::function<Vec(double)>;

/// (d/dt M_0 + M_1 + A) U = F in the weighted space; A skew on H.
struct EvoProblem {
  LinOp a;
  MaterialLaw law;
  Forcing forcing;
  WeightedTimeGrid grid;
  BlockLayout layout;
  std::optional<double> posdef_estimate;  ///< advisory, recorded before solving
};

EvoProblem make_problem(const BlockSkewOp& a, MaterialLaw law, Forcing forcing,
                        WeightedTimeGrid grid);
EvoProblem make_problem(const LinOp& a, MaterialLaw law, Forcing forcing, WeightedTimeGrid grid);

/// Implicit Euler with zero history, caching one sparse LU factorization of
/// the step operator M_0/tau + M_1 + A per step size.
class ImplicitEuler {
 public:
  explicit ImplicitEuler(const EvoProblem& p);
  Trajectory solve(const WeightedTimeGrid& grid);
  /// Condition estimate of the last factorized step operator.
  double condition_estimate() const { return cond_; }

 private:
  using Lu = Eigen::SparseLU<SpMat>;
  const Lu& factor(double tau);

  const EvoProblem& p_;
  std::map<double, std::shared_ptr<Lu>> cache_;
  double cond_ = 0.0;
};

Trajectory solve_time(const EvoProblem& p);

/// Weighted spectra on the DFT frequency grid s_j = rho + i omega_j,
/// j = 0..n/2 (the remaining frequencies are complex conjugates).
struct FrequencySolution {
  std::vector<Complex> s;
  std::vector<CVec> u_hat;
  std::vector<CVec> f_hat;
  Index n_freq = 0;
};

/// Requires n_freq > steps and a forcing vanishing on the padded part of the
/// window. The law must satisfy M(conj z) = conj M(z).
FrequencySolution solve_freq_spectrum(const EvoProblem& p, Index n_freq);
Trajectory solve_freq(const EvoProblem& p, Index n_freq);

/// (int exp(-2 rho t) |U(t)|_H^2 dt)^{1/2} by the trapezoid rule.
double weighted_norm(const Trajectory& u);

Trajectory difference(const Trajectory& a, const Trajectory& b);

enum class Solver { time, frequency };

struct CausalityReport {
  double pre_support_max = 0.0;  ///< max |U(t)| over t < t0 - tau
  double overall_max = 0.0;
  double ratio = 0.0;
};

CausalityReport causality_of(const Trajectory& u, double t0);
CausalityReport causality_check(const EvoProblem& p, double t0, Solver solver, Index n_freq = 0);

/// CSV with a header row "t,<block>_<i>,..." and %.17g values.
void write_csv(const Trajectory& u, std::ostream& os);

}  // namespace agds
