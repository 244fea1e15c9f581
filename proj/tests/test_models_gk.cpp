#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "agds/errors.hpp"
#include "agds/models/gk.hpp"

namespace agds::models {
namespace {

void expect_coefficients(double mu1, double mu2, double a0, double a1, double a2, double lambda) {
  GKCoefficients c = gk_coefficients(mu1, mu2);
  EXPECT_NEAR(c.lambda, lambda, 1e-15);
  EXPECT_NEAR(c.alpha0, a0, 1e-15);
  EXPECT_NEAR(c.alpha1, a1, 1e-15);
  EXPECT_NEAR(c.alpha2, a2, 1e-15);
  EXPECT_NEAR((a0 + a2) / 2.0, mu1, 1e-15);
  EXPECT_NEAR((a0 + 2.0 * a1 - 3.0 * a2) / 6.0, mu2, 1e-15);
}

TEST(GKCoefficients, ReferenceValues) {
  expect_coefficients(2.0, 1.0, 1.5, 6.0, 2.5, -6.0);
  expect_coefficients(2.0, -1.0, 0.75, 1.5, 3.25, -9.0);
  expect_coefficients(1.0, 0.0, 0.75, 1.5, 1.25, -3.0);
}

TEST(GKCoefficients, RandomValidParameters) {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> m1(1e-3, 10.0), frac(-0.999, 5.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double mu1 = m1(rng), mu2 = frac(rng) * mu1;
    GKCoefficients c = gk_coefficients(mu1, mu2);
    ASSERT_GT(c.alpha0, 0.0);
    ASSERT_GT(c.alpha1, 0.0);
    ASSERT_GT(c.alpha2, 0.0);
    auto [e1, e2] = gk_effective(c, false);
    worst = std::max({worst, std::abs(e1 - mu1) / std::max(1.0, mu1), std::abs(e2 - mu2) / std::max(1.0, std::abs(mu2))});
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(GKCoefficients, InvalidRange) {
  EXPECT_THROW(gk_coefficients(0.0, 1.0), ValidationError);
  EXPECT_THROW(gk_coefficients(1.0, -1.0), ValidationError);
  EXPECT_THROW(gk_coefficients(-1.0, 3.0), ValidationError);
}

TEST(GKTensor, IdentityOnPeriodicGrid) {
  FieldOps ops = periodic_ops(Grid::periodic(3, 6));
  GKParams p;
  EXPECT_LE(gk_tensor_check(p, ops), 1e-12);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> m1(0.1, 5.0), frac(-0.9, 3.0), kap(0.2, 4.0);
  for (int i = 0; i < 20; ++i) {
    p.mu1 = m1(rng);
    p.mu2 = frac(rng) * p.mu1;
    p.kappa = kap(rng);
    EXPECT_LE(gk_tensor_check(p, ops), 1e-12) << p.mu1 << " " << p.mu2;
  }
}

TEST(GKTensor, EqualCoefficientsGivePureLaplacian) {
  GKCoefficients c{0.0, 1.7, 1.7, 1.7};
  auto [m1, m2] = gk_effective(c, false);
  EXPECT_DOUBLE_EQ(m1, 1.7);
  EXPECT_DOUBLE_EQ(m2, 0.0);
  EXPECT_LE((gk_pointwise(c) - 1.7 * Mat::Identity(9, 9)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(GKTensor, SmallestEigenvalueIsSmallestAlpha) {
  for (auto [mu1, mu2] : std::initializer_list<std::pair<double, double>>{{2.0, 1.0}, {2.0, -1.0}, {1.0, 0.0}}) {
    GKCoefficients c = gk_coefficients(mu1, mu2);
    Eigen::SelfAdjointEigenSolver<Mat> es(gk_pointwise(c));
    EXPECT_NEAR(es.eigenvalues().minCoeff(), std::min({c.alpha0, c.alpha1, c.alpha2}), 1e-13);
  }
}

TEST(GKAssemble, SkewAndWellPosed) {
  GKSystem s = gk_assemble({}, Grid::bounded(3, 6));
  EXPECT_LE(skew_defect(s.a, 100, 1), 1e-12);
  AffineReport r = affine_sufficient(s.law.m0(), s.law.m1());
  EXPECT_TRUE(r.sufficient);
  EXPECT_EQ(s.a.labels, (std::vector<std::string>{"heat_flux", "temperature", "stress"}));
}

TEST(GKAssemble, InvalidParameters) {
  GKParams p;
  p.kappa = 0.0;
  EXPECT_THROW(gk_assemble(p, Grid::periodic(3, 4)), ValidationError);
  EXPECT_THROW(gk_assemble({}, Grid::periodic(2, 4)), ValidationError);
}

TEST(GKAssemble, HeatSourceDrivesTemperatureBlock) {
  Grid g = Grid::bounded(3, 6);
  GKSystem s = gk_assemble({}, g);
  const Index n = g.nodes(), dim = s.a.h->dim;
  Forcing f = [n, dim, g](double t) {
    Vec out = Vec::Zero(dim);
    for (Index v = 0; v < n; ++v) {
      auto x = g.position(v);
      out[3 * n + v] = (t < 1.0 ? 1.0 : 0.0) * std::exp(-20.0 * ((x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5)));
    }
    return out;
  };
  Trajectory u = solve_time(make_problem(s.a, s.law, f, make_time_grid(0.0, 2.0, 0.05, 1.0)));
  const Vec& last = u.values.back();
  EXPECT_GT(last.segment(3 * n, n).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_GT(last.segment(0, 3 * n).cwiseAbs().maxCoeff(), 1e-6);
  // heat flux vanishes on the boundary nodes
  for (Index v = 0; v < n; ++v)
    if (g.on_boundary(v))
      for (int c = 0; c < 3; ++c) EXPECT_EQ(last[c * n + v], 0.0);
}

// Manufactured periodic solution q = g(t) Q(x), theta = g(t) T(x).
struct GKManufactured {
  GKSystem sys;
  Forcing forcing;
  std::function<Vec(double)> exact;   // (q, theta)
};

GKManufactured gk_manufactured(Index n, const GKParams& p) {
  GKManufactured m{gk_assemble(p, Grid::periodic(3, n)), {}, {}};
  const Grid g = m.sys.ops.grid;
  const Index nodes = g.nodes(), dim = m.sys.a.h->dim;
  const double k = 2.0 * M_PI;
  auto gt = [](double t) { return t > 0.0 ? t * t * std::exp(-t) : 0.0; };
  auto dgt = [](double t) { return t > 0.0 ? (2.0 * t - t * t) * std::exp(-t) : 0.0; };
  // Q = (sin kx cos ky, cos kz, sin kz + cos kx), T = cos kx sin ky
  Mat q(nodes, 3), lap_q(nodes, 3), grad_div_q(nodes, 3), grad_t(nodes, 3);
  Vec th(nodes), div_q(nodes);
  for (Index v = 0; v < nodes; ++v) {
    auto x = g.position(v);
    const double sx = std::sin(k * x[0]), cx = std::cos(k * x[0]);
    const double sy = std::sin(k * x[1]), cy = std::cos(k * x[1]);
    const double sz = std::sin(k * x[2]), cz = std::cos(k * x[2]);
    q.row(v) << sx * cy, cz, sz + cx;
    lap_q.row(v) << -2.0 * k * k * sx * cy, -k * k * cz, -k * k * (sz + cx);
    div_q[v] = k * cx * cy + k * cz;
    grad_div_q.row(v) << -k * k * sx * cy, -k * k * cx * sy, -k * k * sz;
    th[v] = cx * sy;
    grad_t.row(v) << -k * sx * sy, k * cx * cy, 0.0;
  }
  const double kap = p.kappa;
  const std::pair<double, double> eff = gk_effective(m.sys.coeffs, p.symmetric_tensor);
  Mat visc = (eff.first * lap_q + eff.second * grad_div_q) / kap;
  m.forcing = [=](double t) {
    Vec out = Vec::Zero(dim);
    for (int c = 0; c < 3; ++c) {
      out.segment(c * nodes, nodes) = (p.tau0 / kap * dgt(t) + gt(t) / kap) * q.col(c) - gt(t) * visc.col(c) +
                                      gt(t) * grad_t.col(c);
    }
    out.segment(3 * nodes, nodes) = p.rho_c * dgt(t) * th + gt(t) * div_q;
    return out;
  };
  m.exact = [=](double t) {
    Vec out(4 * nodes);
    for (int c = 0; c < 3; ++c) out.segment(c * nodes, nodes) = gt(t) * q.col(c);
    out.segment(3 * nodes, nodes) = gt(t) * th;
    return out;
  };
  return m;
}

struct GKRun {
  double error = 0.0;
  GKRecovery recovery;
};

GKRun gk_run(Index n, double tau, const GKParams& p) {
  GKManufactured m = gk_manufactured(n, p);
  Trajectory u = solve_time(make_problem(m.sys.a, m.sys.law, m.forcing, make_time_grid(0.0, 2.0, tau, 1.0)));
  const Index nodes = m.sys.ops.grid.nodes();
  double err = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    Vec ex = m.exact(u.grid.t(static_cast<Index>(k)));
    err = std::max(err, (u.values[k].head(4 * nodes) - ex).cwiseAbs().maxCoeff());
    scale = std::max(scale, ex.cwiseAbs().maxCoeff());
  }
  return {err / scale, gk_recover(u, m.sys, m.forcing)};
}

TEST(GKRecover, ZeroSolution) {
  GKSystem s = gk_assemble({}, Grid::periodic(3, 4));
  const Index dim = s.a.h->dim;
  Forcing zero = [dim](double) { return Vec::Zero(dim); };
  Trajectory u = solve_time(make_problem(s.a, s.law, zero, make_time_grid(0.0, 1.0, 0.1, 1.0)));
  GKRecovery r = gk_recover(u, s, zero);
  EXPECT_EQ(r.residual, 0.0);
  EXPECT_EQ(r.constitutive, 0.0);
}

TEST(GKRecover, ManufacturedSolutionConverges) {
  GKParams p;
  GKRun coarse = gk_run(6, 0.1, p);
  GKRun fine = gk_run(12, 0.025, p);
  // tau quartered and h halved: O(tau + h^2) error drops by about four
  EXPECT_LT(fine.error, coarse.error / 3.0) << coarse.error << " -> " << fine.error;
  for (const GKRun* r : {&coarse, &fine}) {
    EXPECT_LE(r->recovery.residual, 1e-10);
    EXPECT_LE(r->recovery.constitutive, 1e-10);
  }
}

TEST(GKRecover, SymmetricTensorVariant) {
  GKParams p;
  p.symmetric_tensor = true;
  GKRun coarse = gk_run(6, 0.1, p);
  GKRun fine = gk_run(12, 0.025, p);
  EXPECT_LE(coarse.recovery.residual, 1e-10);
  EXPECT_LE(coarse.recovery.constitutive, 1e-10);
  EXPECT_LT(fine.error, coarse.error / 3.0);
}

TEST(GKRecover, RequiresPeriodicGrid) {
  GKSystem s = gk_assemble({}, Grid::bounded(3, 4));
  Trajectory u;
  EXPECT_THROW(gk_recover(u, s, [](double) { return Vec(); }), ValidationError);
}

}  // namespace
}  // namespace agds::models
