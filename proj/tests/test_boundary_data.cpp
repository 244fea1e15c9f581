#include <gtest/gtest.h>

#include <cmath>

#include "agds/boundary_data.hpp"
#include "agds/calculus.hpp"
#include "agds/errors.hpp"
#include "support.hpp"

namespace agds {
namespace {

BoundaryDataSpace curl_bd(const Grid& g) {
  FieldOps ops = field_ops(g);
  return bd_space(ops.curl, curl_interior_subspace(g), FormalSymmetry::self_adjoint);
}

BoundaryDataSpace derivative_bd(Index n) {
  Grid g = Grid::bounded(1, n);
  FieldOps ops = field_ops(g);
  LinOp k(ops.partial[0], ops.scalar, ops.scalar);
  return bd_space(k, scalar_interior_subspace(g), FormalSymmetry::skew_adjoint);
}

TEST(BoundaryData, PeriodicGridHasNoBoundaryData) {
  Grid g = Grid::periodic(3, 4);
  FieldOps ops = periodic_ops(g);
  BoundaryDataSpace bd = bd_space(ops.curl, Mat::Identity(3 * g.nodes(), 3 * g.nodes()),
                                  FormalSymmetry::self_adjoint);
  EXPECT_EQ(bd.dim(), 0);
}

TEST(BoundaryData, DerivativeInstanceIsTwoDimensional) {
  for (Index n : {9, 17, 33}) {
    BoundaryDataSpace bd = derivative_bd(n);
    BoundaryDataReport r = bd_report(bd);
    EXPECT_EQ(r.dim, 2);
    EXPECT_LE(r.orthonormality, 1e-12);
    EXPECT_LE(r.complement, 1e-12);
    EXPECT_LE(r.bullet_skew, 1e-12);   // symmetric for a skew K
  }
}

TEST(BoundaryData, DerivativeBulletSquareConvergesToIdentity) {
  double prev = std::numeric_limits<double>::infinity();
  for (Index n : {9, 17, 33, 65}) {
    double sq = bd_report(derivative_bd(n)).bullet_square;
    EXPECT_LT(sq, 0.3 * prev) << "n = " << n;
    prev = sq;
  }
  EXPECT_LE(prev, 2e-3);
}

TEST(BoundaryData, CurlInstanceStructure) {
  BoundaryDataSpace bd = curl_bd(Grid::slab(5, 4));
  BoundaryDataReport r = bd_report(bd);
  EXPECT_EQ(r.dim, 64);   // two tangential components on 2 x 16 boundary nodes
  EXPECT_LE(r.orthonormality, 1e-12);
  EXPECT_LE(r.complement, 1e-12);
  EXPECT_LE(r.bullet_skew, 1e-10);
  EXPECT_TRUE(std::isfinite(r.bullet_square));
  EXPECT_LE(bd.formal_symmetry_defect, 1e-12);
}

TEST(BoundaryData, EmbeddingAndProjectionAreConsistent) {
  BoundaryDataSpace bd = curl_bd(Grid::slab(5, 4));
  Mat pi = Mat(bd.iota_star.coeffs()) * Mat(bd.iota.coeffs());
  EXPECT_LE((pi - Mat::Identity(bd.dim(), bd.dim())).cwiseAbs().maxCoeff(), 1e-12);
  Mat v0_image = Mat(bd.iota_star.coeffs()) * bd.v0;
  EXPECT_LE(v0_image.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BoundaryData, RejectsOperatorWithoutFormalSymmetry) {
  std::mt19937 rng(4);
  Mat k = testing::random_mat(6, 6, rng);
  auto x = euclidean_space(6);
  std::vector<bool> keep{false, true, true, true, true, false};
  EXPECT_THROW(bd_space(LinOp(testing::sparse(k), x, x), coordinate_subspace(keep), FormalSymmetry::self_adjoint),
               WitnessError);
}

struct Fields {
  Vec e, h;
};

Fields smooth_fields(const Grid& g) {
  const Index n = g.nodes();
  Fields f{Vec(3 * n), Vec(3 * n)};
  for (Index v = 0; v < n; ++v) {
    auto p = g.position(v);
    const double x = p[0], y = p[1], z = p[2];
    f.e[v] = std::cos(2 * M_PI * y) * (1 + x);
    f.e[n + v] = std::sin(2 * M_PI * z) * x * x + 1;
    f.e[2 * n + v] = std::cos(2 * M_PI * (y + z));
    f.h[v] = x;
    f.h[n + v] = std::cos(2 * M_PI * z) * (2 - x);
    f.h[2 * n + v] = std::sin(2 * M_PI * y) + x * x;
  }
  return f;
}

TEST(BoundaryIdentification, ConstantFields) {
  Grid g = Grid::slab(5, 4);
  BoundaryDataSpace bd = curl_bd(g);
  const Index n = g.nodes();
  Vec e = Vec::Zero(3 * n), h = Vec::Zero(3 * n);
  e.segment(n, n).setOnes();
  h.segment(2 * n, n).setOnes();
  BoundaryPairingReport r = bd_identification_check(bd, g, e, h);
  // (n x e_y) . e_z = n_x integrates to zero over the two opposite faces
  EXPECT_NEAR(r.surface_pairing, 0.0, 1e-14);
  EXPECT_NEAR(r.bullet_pairing, 0.0, 1e-13);
  EXPECT_NEAR(r.green_pairing, r.surface_pairing, 1e-13);
}

TEST(BoundaryIdentification, EqualFieldsPairToZero) {
  Grid g = Grid::slab(5, 4);
  BoundaryDataSpace bd = curl_bd(g);
  Fields f = smooth_fields(g);
  BoundaryPairingReport r = bd_identification_check(bd, g, f.e, f.e);
  EXPECT_NEAR(r.surface_pairing, 0.0, 1e-14);
  EXPECT_NEAR(r.bullet_pairing, 0.0, 1e-13);
}

TEST(BoundaryIdentification, DiscrepancyDecreasesUnderRefinement) {
  double prev = std::numeric_limits<double>::infinity();
  for (Index nx : {5, 9}) {
    Grid g = Grid::slab(nx, 4);
    BoundaryDataSpace bd = curl_bd(g);
    Fields f = smooth_fields(g);
    BoundaryPairingReport r = bd_identification_check(bd, g, f.e, f.h);
    EXPECT_LE(r.green_discrepancy, 1e-13);
    EXPECT_LT(r.discrepancy, 0.5 * prev);
    prev = r.discrepancy;
  }
}

}  // namespace
}  // namespace agds
