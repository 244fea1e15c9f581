#include "agds/evo_solver.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace agds {

Index WeightedTimeGrid::steps() const {
  return static_cast<Index>(std::llround((t_end - t_start) / tau));
}

WeightedTimeGrid make_time_grid(double t_start, double t_end, double tau, double rho) {
  if (!(t_end > t_start)) throw ValidationError("time grid: t_end must exceed t_start");
  if (!(tau > 0.0)) throw ValidationError("time grid: tau must be positive");
  if (!(rho > 0.0)) throw ValidationError("time grid: rho must be positive");
  const double window = t_end - t_start;
  const double steps = std::round(window / tau);
  if (steps < 1.0 || std::abs(steps * tau - window) > 1e-9 * std::max(1.0, window)) {
    std::ostringstream os;
    os << "time grid: tau = " << tau << " does not divide the window [" << t_start << ", "
       << t_end << "]";
    throw ValidationError(os.str());
  }
  return WeightedTimeGrid{t_start, t_end, tau, rho};
}

BlockLayout layout_of(const BlockSkewOp& a) { return BlockLayout{a.labels, a.offsets, a.sizes}; }

EvoProblem make_problem(const LinOp& a, MaterialLaw law, Forcing forcing, WeightedTimeGrid grid) {
  if (a.rows() != a.cols()) throw ValidationError("evolution operator must be square");
  if (law.dim() != a.rows()) {
    std::ostringstream os;
    os << "material law dimension " << law.dim() << " does not match state dimension " << a.rows();
    throw ValidationError(os.str());
  }
  if (!forcing) throw ValidationError("evolution problem needs a forcing");
  EvoProblem p;
  p.a = a;
  p.law = std::move(law);
  p.forcing = std::move(forcing);
  p.grid = grid;
  return p;
}

EvoProblem make_problem(const BlockSkewOp& a, MaterialLaw law, Forcing forcing,
                        WeightedTimeGrid grid) {
  EvoProblem p = make_problem(a.a, std::move(law), std::move(forcing), grid);
  p.layout = layout_of(a);
  return p;
}

ImplicitEuler::ImplicitEuler(const EvoProblem& p) : p_(p) {
  if (!p_.law.is_affine()) throw ValidationError("solve_time requires an affine material law");
}

const ImplicitEuler::Lu& ImplicitEuler::factor(double tau) {
  auto it = cache_.find(tau);
  if (it != cache_.end()) return *it->second;
  SpMat s = (1.0 / tau) * p_.law.m0() + p_.law.m1() + p_.a.coeffs();
  s.makeCompressed();
  auto lu = std::make_shared<Lu>();
  lu->analyzePattern(s);
  lu->factorize(s);
  if (lu->info() != Eigen::Success) {
    std::ostringstream os;
    os << "step operator is singular for tau = " << tau << ": " << lu->lastErrorMessage();
    throw SingularOperatorError(os.str(), std::numeric_limits<double>::infinity());
  }
  double norm1 = 0.0;
  for (Index k = 0; k < s.outerSize(); ++k) {
    double col = 0.0;
    for (SpMat::InnerIterator c(s, k); c; ++c) col += std::abs(c.value());
    norm1 = std::max(norm1, col);
  }
  Vec x = Vec::Constant(s.cols(), 1.0 / static_cast<double>(s.cols()));
  double inv = 0.0;
  for (int k = 0; k < 8; ++k) {
    Vec y = lu->solve(x);
    double ratio = y.lpNorm<1>() / x.lpNorm<1>();
    inv = std::max(inv, ratio);
    if (!std::isfinite(ratio) || y.lpNorm<1>() == 0.0) break;
    x = y / y.lpNorm<1>();
  }
  cond_ = norm1 * inv;
  if (!std::isfinite(cond_) || cond_ > 1e15) {
    std::ostringstream os;
    os << "step operator is numerically singular for tau = " << tau
       << " (condition estimate " << cond_ << ")";
    throw SingularOperatorError(os.str(), cond_);
  }
  cache_.emplace(tau, lu);
  return *lu;
}

Trajectory ImplicitEuler::solve(const WeightedTimeGrid& grid) {
  const Lu& lu = factor(grid.tau);
  const Index steps = grid.steps();
  const SpMat m0_tau = (1.0 / grid.tau) * p_.law.m0();
  Trajectory out;
  out.grid = grid;
  out.space = p_.a.dom();
  out.layout = p_.layout;
  out.values.reserve(static_cast<std::size_t>(steps + 1));
  Vec prev = Vec::Zero(p_.a.rows());
  for (Index n = 0; n <= steps; ++n) {
    Vec f = p_.forcing(grid.t(n));
    if (f.size() != prev.size()) throw ValidationError("forcing returned a vector of the wrong size");
    Vec rhs = f + m0_tau * prev;
    Vec u = lu.solve(rhs);
    out.values.push_back(u);
    prev = std::move(u);
  }
  return out;
}

Trajectory solve_time(const EvoProblem& p) {
  ImplicitEuler stepper(p);
  return stepper.solve(p.grid);
}

FrequencySolution solve_freq_spectrum(const EvoProblem& p, Index n_freq) {
  const WeightedTimeGrid& g = p.grid;
  const Index steps = g.steps();
  if (n_freq <= steps) {
    std::ostringstream os;
    os << "solve_freq: n_freq = " << n_freq << " does not cover the " << steps + 1
       << " samples of the time window";
    throw ValidationError(os.str());
  }
  if ((n_freq & (n_freq - 1)) != 0) {
    std::ostringstream os;
    os << "solve_freq: n_freq = " << n_freq << " is not a power of two";
    throw ValidationError(os.str());
  }
  const Index dim = p.a.rows();
  const double pi = std::acos(-1.0);

  // weighted forcing samples, one column per state component
  CMat samples = CMat::Zero(n_freq, dim);
  for (Index k = 0; k < n_freq; ++k) {
    const double t = g.t(k);
    Vec f = p.forcing(t);
    if (f.size() != dim) throw ValidationError("forcing returned a vector of the wrong size");
    if (k > steps && f.cwiseAbs().maxCoeff() > 0.0) {
      std::ostringstream os;
      os << "forcing not supported in window: nonzero at t = " << t << " beyond t_end = " << g.t_end;
      throw ValidationError(os.str());
    }
    samples.row(k) = (std::exp(-g.rho * (t - g.t_start)) * f).cast<Complex>().transpose();
  }

  Eigen::FFT<double> fft;
  CMat spectra(n_freq, dim);
  std::vector<Complex> in(static_cast<std::size_t>(n_freq)), out;
  for (Index c = 0; c < dim; ++c) {
    for (Index k = 0; k < n_freq; ++k) in[static_cast<std::size_t>(k)] = samples(k, c);
    fft.fwd(out, in);
    for (Index k = 0; k < n_freq; ++k) spectra(k, c) = out[static_cast<std::size_t>(k)];
  }

  FrequencySolution sol;
  sol.n_freq = n_freq;
  const CSpMat a = p.a.coeffs().cast<Complex>();
  for (Index j = 0; j <= n_freq / 2; ++j) {
    const double omega = 2.0 * pi * static_cast<double>(j) / (static_cast<double>(n_freq) * g.tau);
    const Complex s(g.rho, omega);
    CSpMat k = s * eval_at(p.law, 1.0 / s) + a;
    k.makeCompressed();
    Eigen::SparseLU<CSpMat> lu;
    lu.analyzePattern(k);
    lu.factorize(k);
    if (lu.info() != Eigen::Success) {
      std::ostringstream os;
      os << "frequency operator singular at s = " << s;
      throw SingularOperatorError(os.str(), std::numeric_limits<double>::infinity());
    }
    CVec f = spectra.row(j).transpose();
    sol.s.push_back(s);
    sol.f_hat.push_back(f);
    sol.u_hat.push_back(lu.solve(f));
  }
  return sol;
}

Trajectory solve_freq(const EvoProblem& p, Index n_freq) {
  FrequencySolution sol = solve_freq_spectrum(p, n_freq);
  const WeightedTimeGrid& g = p.grid;
  const Index dim = p.a.rows();
  const Index half = static_cast<Index>(sol.u_hat.size());
  Eigen::FFT<double> fft;
  std::vector<Complex> spec(static_cast<std::size_t>(n_freq)), time;
  Mat values(n_freq, dim);
  for (Index c = 0; c < dim; ++c) {
    for (Index j = 0; j < half; ++j) spec[static_cast<std::size_t>(j)] = sol.u_hat[j][c];
    for (Index j = half; j < n_freq; ++j) {
      spec[static_cast<std::size_t>(j)] = std::conj(sol.u_hat[n_freq - j][c]);
    }
    fft.inv(time, spec);
    for (Index k = 0; k < n_freq; ++k) values(k, c) = time[static_cast<std::size_t>(k)].real();
  }
  Trajectory out;
  out.grid = g;
  out.space = p.a.dom();
  out.layout = p.layout;
  for (Index n = 0; n <= g.steps(); ++n) {
    out.values.push_back(std::exp(g.rho * (g.t(n) - g.t_start)) * values.row(n).transpose());
  }
  return out;
}

namespace {

double state_norm(const Trajectory& u, const Vec& x) {
  return u.space ? u.space->gram.norm(x) : x.norm();
}

}  // namespace

double weighted_norm(const Trajectory& u) {
  const Index steps = static_cast<Index>(u.values.size()) - 1;
  double sum = 0.0;
  for (Index n = 0; n <= steps; ++n) {
    const double t = u.grid.t(n);
    const double w = (n == 0 || n == steps) ? 0.5 * u.grid.tau : u.grid.tau;
    const double v = state_norm(u, u.values[static_cast<std::size_t>(n)]);
    sum += w * std::exp(-2.0 * u.grid.rho * t) * v * v;
  }
  return std::sqrt(sum);
}

Trajectory difference(const Trajectory& a, const Trajectory& b) {
  if (a.values.size() != b.values.size()) throw ValidationError("difference: trajectories on different grids");
  Trajectory d = a;
  for (std::size_t n = 0; n < a.values.size(); ++n) d.values[n] = a.values[n] - b.values[n];
  return d;
}

CausalityReport causality_of(const Trajectory& u, double t0) {
  CausalityReport r;
  for (std::size_t n = 0; n < u.values.size(); ++n) {
    const double t = u.grid.t(static_cast<Index>(n));
    const double v = state_norm(u, u.values[n]);
    r.overall_max = std::max(r.overall_max, v);
    if (t < t0 - u.grid.tau - 1e-12 * std::max(1.0, std::abs(t0))) {
      r.pre_support_max = std::max(r.pre_support_max, v);
    }
  }
  r.ratio = r.overall_max > 0.0 ? r.pre_support_max / r.overall_max : 0.0;
  return r;
}

CausalityReport causality_check(const EvoProblem& p, double t0, Solver solver, Index n_freq) {
  Trajectory u = solver == Solver::time ? solve_time(p) : solve_freq(p, n_freq);
  return causality_of(u, t0);
}

void write_csv(const Trajectory& u, std::ostream& os) {
  const Index dim = u.values.empty() ? 0 : u.values.front().size();
  os << "t";
  if (!u.layout.labels.empty()) {
    for (std::size_t b = 0; b < u.layout.labels.size(); ++b) {
      for (Index i = 0; i < u.layout.sizes[b]; ++i) os << ',' << u.layout.labels[b] << '_' << i;
    }
  } else {
    for (Index i = 0; i < dim; ++i) os << ",u_" << i;
  }
  os << '\n';
  char buf[40];
  for (std::size_t n = 0; n < u.values.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%.17g", u.grid.t(static_cast<Index>(n)));
    os << buf;
    for (Index i = 0; i < dim; ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", u.values[n][i]);
      os << ',' << buf;
    }
    os << '\n';
  }
}

}  // namespace agds
