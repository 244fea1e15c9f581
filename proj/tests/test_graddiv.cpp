#include <gtest/gtest.h>

#include <algorithm>
#include <Eigen/Eigenvalues>

#include "agds/errors.hpp"
#include "agds/models/dynbc.hpp"
#include "agds/models/gk.hpp"
#include "agds/models/leontovich.hpp"
#include "support.hpp"

namespace agds {
namespace {

double row_adjoint_gap(const GradDivSystem& sys) {
  return max_rel_diff(row_adjoint(sys).coeffs(), gram_adjoint(sys.stacked).coeffs());
}

TEST(Stack, SingleGradientIsItsOwnAdjointRow) {
  DirichletPair d = dirichlet_pair(Grid::bounded(1, 12));
  GradDivSystem sys = stack(d.grad, {});
  EXPECT_EQ(sys.components.size(), 1u);
  EXPECT_LE(max_rel_diff(row_adjoint(sys).coeffs(), gram_adjoint(d.grad).coeffs()), 1e-15);
  EXPECT_LE(max_rel_diff(row_adjoint(sys).coeffs(), (-1.0 * d.div).coeffs()), 1e-15);
}

TEST(Stack, PeriodicPartialsGiveNegativeDivergence) {
  Grid g = Grid::periodic(2, 6);
  FieldOps ops = periodic_ops(g);
  LinOp d1(ops.partial[0], ops.scalar, ops.scalar);
  LinOp d2(ops.partial[1], ops.scalar, ops.scalar);
  GradDivSystem sys = stack(d1, {d2});
  SpMat neg_div = -1.0 * hstack({ops.partial[0], ops.partial[1]});
  EXPECT_LE(max_rel_diff(row_adjoint(sys).coeffs(), neg_div), 1e-14);
  EXPECT_LE(max_rel_diff(row_adjoint(sys).coeffs(), (-1.0 * ops.div).coeffs()), 1e-14);
}

TEST(Stack, RejectsMismatchedComponents) {
  DirichletPair a = dirichlet_pair(Grid::bounded(1, 5));
  DirichletPair b = dirichlet_pair(Grid::bounded(1, 6));
  EXPECT_THROW(stack(a.grad, {b.grad}), ValidationError);
}

TEST(RowAdjoint, MatchesStackedAdjointForAllModels) {
  models::GKSystem gk = models::gk_assemble({}, Grid::bounded(3, 5));
  EXPECT_LE(row_adjoint_gap(gk.sys), 1e-12);
  models::DynBCSystem dyn = models::dynbc_assemble({}, Grid::bounded(2, 9));
  EXPECT_LE(row_adjoint_gap(dyn.sys), 1e-12);
  models::LeontovichSystem leo = models::leontovich_assemble({}, Grid::bounded(3, 5));
  EXPECT_LE(row_adjoint_gap(leo.sys), 1e-12);
  models::LeontovichParams bdp;
  bdp.variant = models::LeontovichVariant::boundary_data;
  models::LeontovichSystem leo_bd = models::leontovich_assemble(bdp, Grid::slab(5, 4));
  EXPECT_LE(row_adjoint_gap(leo_bd.sys), 1e-12);
}

TEST(BlockSkew, ZeroOperator) {
  auto x = euclidean_space(4);
  auto y = euclidean_space(3);
  BlockSkewOp a = block_skew(stack(zero_op(x, y), {}));
  EXPECT_EQ(max_abs(a.a.coeffs()), 0.0);
}

TEST(BlockSkew, OneDimensionalWavePair) {
  DirichletPair d = dirichlet_pair(Grid::bounded(1, 16));
  BlockSkewOp a = block_skew(stack(d.grad, {}));
  EXPECT_LE(skew_defect(a, 100, 1), 1e-12);
  // Lower-left block is the gradient, upper-right block the divergence.
  Mat dense(a.a.coeffs());
  const Index n = d.nodes->dim, m = d.edges->dim;
  EXPECT_LE((dense.block(n, 0, m, n) - Mat(d.grad.coeffs())).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((dense.block(0, n, n, m) - Mat(d.div.coeffs())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BlockSkew, ModelSystemsAreSkew) {
  models::GKSystem gk = models::gk_assemble({}, Grid::periodic(3, 6));
  EXPECT_LE(skew_defect(gk.a, 100, 2), 1e-12);
  models::DynBCSystem dyn = models::dynbc_assemble({}, Grid::bounded(2, 9));
  EXPECT_LE(skew_defect(dyn.a, 100, 3), 1e-12);
  models::LeontovichSystem leo = models::leontovich_assemble({}, Grid::bounded(3, 5));
  EXPECT_LE(skew_defect(leo.a, 100, 4), 1e-12);
}

TEST(BlockSkew, PermutingComponentsConjugatesOperator) {
  models::DynBCSystem dyn = models::dynbc_assemble({}, Grid::bounded(2, 5));
  const auto& c = dyn.sys.components;
  GradDivSystem perm = stack_ordered({c[2], c[0], c[1]}, 0);
  BlockSkewOp b = block_skew(perm);
  const auto& o = dyn.a.offsets;
  const auto& s = dyn.a.sizes;
  // new block order: X0, component 2, component 0, component 1
  std::vector<Index> order;
  for (int blk : {0, 3, 1, 2})
    for (Index i = 0; i < s[static_cast<std::size_t>(blk)]; ++i) order.push_back(o[static_cast<std::size_t>(blk)] + i);
  Eigen::PermutationMatrix<Eigen::Dynamic> p(static_cast<Index>(order.size()));
  for (std::size_t i = 0; i < order.size(); ++i) p.indices()[static_cast<Index>(i)] = static_cast<int>(order[i]);
  Mat a(dyn.a.a.coeffs());
  Mat conj = p.transpose() * a * p;
  EXPECT_LE((conj - Mat(b.a.coeffs())).cwiseAbs().maxCoeff(), 1e-12 * a.cwiseAbs().maxCoeff());

  auto sorted_spectrum = [](const Mat& m) {
    Eigen::EigenSolver<Mat> es(m, false);
    std::vector<double> im;
    for (Index i = 0; i < m.rows(); ++i) im.push_back(es.eigenvalues()[i].imag());
    std::sort(im.begin(), im.end());
    return im;
  };
  auto s1 = sorted_spectrum(a), s2 = sorted_spectrum(Mat(b.a.coeffs()));
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < s1.size(); ++i) EXPECT_NEAR(s1[i], s2[i], 1e-10 * scale);
}

TEST(RestrictionCheck, EqualityCase) {
  DirichletPair d = dirichlet_pair(Grid::bounded(1, 10));
  GradDivSystem sys = stack(d.grad, {zero_op(d.nodes, euclidean_space(2))});
  RestrictionReport r = restriction_check(sys, d.grad, identity_op(d.nodes));
  EXPECT_EQ(r.containment_violation, 0.0);
  EXPECT_LE(r.adjoint_violation, 1e-13);
}

// Embedding of the coordinate subspace flagged true.
LinOp coordinate_embedding(const std::vector<bool>& keep, const SpacePtr& x0) {
  Mat e = coordinate_subspace(keep);
  Vec w(e.cols());
  const Vec wx = x0->gram.to_dense().diagonal();
  for (Index j = 0; j < e.cols(); ++j) {
    Index i;
    e.col(j).maxCoeff(&i);
    w[j] = wx[i];
  }
  return LinOp(testing::sparse(e), make_space(e.cols(), Gram::diagonal(w)), x0);
}

TEST(RestrictionCheck, DynamicBoundarySystemActsAsNegativeDivergence) {
  Grid g = Grid::bounded(2, 9);
  models::DynBCSystem dyn = models::dynbc_assemble({}, g);
  std::vector<bool> keep(static_cast<std::size_t>(g.nodes()));
  for (Index v = 0; v < g.nodes(); ++v) keep[static_cast<std::size_t>(v)] = !g.on_boundary(v);
  LinOp emb = coordinate_embedding(keep, dyn.sys.x0);
  LinOp interior(SpMat(dyn.sys.components[0].coeffs() * emb.coeffs()), emb.dom(), dyn.sys.components[0].codom());
  RestrictionReport r = restriction_check(dyn.sys, interior, emb);
  EXPECT_EQ(r.containment_violation, 0.0);
  EXPECT_LE(r.adjoint_violation, 1e-12);
}

TEST(RestrictionCheck, LeontovichVariantsReduceToNegativeCurl) {
  for (bool bd : {false, true}) {
    models::LeontovichParams p;
    Grid g = bd ? Grid::slab(5, 4) : Grid::bounded(3, 5);
    if (bd) p.variant = models::LeontovichVariant::boundary_data;
    models::LeontovichSystem leo = models::leontovich_assemble(p, g);
    Mat v0 = curl_interior_subspace(g);
    LinOp emb(testing::sparse(v0), make_space(v0.cols(), Gram::dense(v0.transpose() * leo.sys.x0->gram.to_dense() * v0)),
              leo.sys.x0);
    LinOp interior(SpMat(leo.sys.components[0].coeffs() * emb.coeffs()), emb.dom(), leo.sys.components[0].codom());
    RestrictionReport r = restriction_check(leo.sys, interior, emb, 1e-10);
    EXPECT_LE(r.containment_violation, 1e-10) << (bd ? "bd" : "classical");
    EXPECT_LE(r.adjoint_violation, 1e-12) << (bd ? "bd" : "classical");
  }
}

TEST(RestrictionCheck, NonRestrictionRaisesWitness) {
  DirichletPair d = dirichlet_pair(Grid::bounded(1, 10));
  GradDivSystem sys = stack(d.grad, {});
  LinOp wrong = 2.0 * d.grad;
  try {
    restriction_check(sys, wrong, identity_op(d.nodes));
    FAIL() << "no witness";
  } catch (const WitnessError& e) {
    EXPECT_GT(e.violation, 0.0);
    EXPECT_GE(e.index, 0);
  }
}

}  // namespace
}  // namespace agds
