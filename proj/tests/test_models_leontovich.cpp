#include <gtest/gtest.h>

#include <cmath>

#include "agds/errors.hpp"
#include "agds/models/leontovich.hpp"
#include "support.hpp"

namespace agds::models {
namespace {

double bump(double t) { return (t <= 0.0 || t >= 1.0) ? 0.0 : std::pow(std::sin(M_PI * t), 4); }

std::array<double, 3> source(double t, double x, double y, double z) {
  const double b = bump(t);
  return {b * std::sin(M_PI * y), b * std::cos(M_PI * z) * x, b * (1.0 + x * y)};
}

EvoProblem problem(const LeontovichSystem& s, double t1, double tau) {
  return make_problem(s.a, s.law, leontovich_magnetic_forcing(s, source), make_time_grid(0.0, t1, tau, 1.0));
}

TEST(Leontovich, BothVariantsAreSkew) {
  LeontovichSystem c = leontovich_assemble({}, Grid::bounded(3, 5));
  EXPECT_LE(skew_defect(c.a, 100, 2), 1e-12);
  EXPECT_EQ(c.a.labels, (std::vector<std::string>{"H", "E", "eta"}));
  LeontovichParams p;
  p.variant = LeontovichVariant::boundary_data;
  LeontovichSystem b = leontovich_assemble(p, Grid::slab(5, 4));
  EXPECT_LE(skew_defect(b.a, 100, 2), 1e-12);
  EXPECT_EQ(b.size_eta, b.bd->dim());
}

TEST(Leontovich, ClassicalResidualDecreases) {
  double prev = std::numeric_limits<double>::infinity();
  for (Index n : {5, 7, 9}) {
    LeontovichSystem s = leontovich_assemble({}, Grid::bounded(3, n));
    LeontovichResiduals r = leontovich_residuals(solve_time(problem(s, 1.5, 0.02)), s);
    EXPECT_LT(r.boundary_condition, prev) << "n = " << n;
    EXPECT_LT(r.boundary_condition, 0.5 * r.scale) << "n = " << n;
    prev = r.boundary_condition;
  }
}

TEST(Leontovich, ImpedanceReductionAtLowFrequency) {
  std::vector<double> r0, r1;
  for (Index n : {5, 7}) {
    LeontovichSystem s = leontovich_assemble({}, Grid::bounded(3, n));
    FrequencySolution sol = solve_freq_spectrum(problem(s, 2.0, 0.04), 64);
    ImpedanceReductionReport rep = leontovich_impedance_reduction(sol, s);
    ASSERT_EQ(rep.residual.size(), sol.s.size());
    r0.push_back(rep.residual[0]);
    r1.push_back(rep.residual[1]);
  }
  EXPECT_LT(r0[1], 0.7 * r0[0]) << r0[0] << " -> " << r0[1];
  EXPECT_LT(r1[1], 0.7 * r1[0]) << r1[0] << " -> " << r1[1];
  EXPECT_LT(r0[1], 0.1);
}

TEST(Leontovich, ImpedanceReductionNeedsClassicalVariant) {
  LeontovichParams p;
  p.variant = LeontovichVariant::boundary_data;
  LeontovichSystem s = leontovich_assemble(p, Grid::slab(5, 4));
  EXPECT_THROW(leontovich_impedance_reduction(FrequencySolution{}, s), ValidationError);
}

TEST(Leontovich, FlatBurqueLawMatchesAffine) {
  const Grid g = Grid::bounded(3, 5);
  LeontovichSystem affine = leontovich_assemble({}, g);
  LeontovichParams p;
  p.boundary.kind = BoundaryLawSpec::Kind::burque_kappa;
  p.boundary.params = {0.0, 0.3};
  LeontovichSystem burque = leontovich_assemble(p, g);
  Trajectory ua = solve_freq(problem(affine, 2.0, 0.05), 64);
  Trajectory ub = solve_freq(problem(burque, 2.0, 0.05), 64);
  EXPECT_LE(weighted_norm(difference(ua, ub)), 1e-12 * weighted_norm(ua));
}

TEST(Leontovich, BoundarySourceScalesLinearly) {
  LeontovichSystem s = leontovich_assemble({}, Grid::bounded(3, 5));
  const Index dim = s.a.h->dim, off = s.size_h + s.size_e;
  std::mt19937 rng(4);
  const Vec h1 = testing::random_vec(s.size_eta, rng);
  auto forcing = [&](double scale) {
    return Forcing([=](double t) {
      Vec f = Vec::Zero(dim);
      f.segment(off, h1.size()) = scale * bump(t) * h1;
      return f;
    });
  };
  WeightedTimeGrid grid = make_time_grid(0.0, 1.5, 0.05, 1.0);
  Trajectory u1 = solve_time(make_problem(s.a, s.law, forcing(1.0), grid));
  Trajectory u3 = solve_time(make_problem(s.a, s.law, forcing(3.0), grid));
  for (auto& x : u1.values) x *= 3.0;
  EXPECT_GT(weighted_norm(u3), 0.0);
  EXPECT_LE(weighted_norm(difference(u1, u3)), 1e-12 * weighted_norm(u3));
}

TEST(Leontovich, BoundaryDataResidualFormula) {
  LeontovichParams p;
  p.variant = LeontovichVariant::boundary_data;
  LeontovichSystem s = leontovich_assemble(p, Grid::slab(5, 4));
  const BoundaryDataSpace& bd = *s.bd;
  std::mt19937 rng(6);
  const Index dim = s.a.h->dim, off_e = s.size_h, off_eta = s.size_h + s.size_e;
  Trajectory u;
  u.grid = make_time_grid(0.0, 0.2, 0.1, 1.0);
  Vec delta = testing::random_vec(s.size_eta, rng);
  double expected = 0.0;
  for (Index k = 0; k <= u.grid.steps(); ++k) {
    Vec eta = testing::random_vec(s.size_eta, rng);
    Vec x = testing::random_vec(dim, rng);
    // E = iota(bullet eta) gives iota^* E = bullet eta exactly; the offset shows up unchanged
    Vec shifted = bd.bullet * eta + static_cast<double>(k) * delta;
    x.segment(off_e, s.size_e) = bd.iota.apply(shifted);
    x.segment(off_eta, s.size_eta) = eta;
    expected = std::max(expected, static_cast<double>(k) * delta.norm());
    u.values.push_back(x);
  }
  LeontovichResiduals r = leontovich_residuals(u, s);
  EXPECT_NEAR(r.boundary_condition, expected, 1e-10 * expected);
}

TEST(Leontovich, BoundaryLawValidation) {
  BoundaryLawSpec spec;
  spec.params = {1.0};
  EXPECT_THROW(spec.make(4), ValidationError);
  spec.kind = BoundaryLawSpec::Kind::mohsen;
  spec.params = {0.0, 0.0, 1.0, 1.0};
  EXPECT_THROW(spec.make(4), ValidationError);
  spec.kind = BoundaryLawSpec::Kind::eddy_fractional;
  spec.params = {1.0, 2.0};
  EXPECT_EQ(spec.make(4).dim(), 4);
  LeontovichParams p;
  p.mu = 0.0;
  EXPECT_THROW(leontovich_assemble(p, Grid::bounded(3, 4)), ValidationError);
  EXPECT_THROW(leontovich_assemble({}, Grid::slab(5, 4)), ValidationError);
  EXPECT_THROW(leontovich_assemble({}, Grid::bounded(2, 4)), ValidationError);
}

}  // namespace
}  // namespace agds::models
