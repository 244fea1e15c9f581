#include "agds/graddiv.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace agds {

GradDivSystem stack_ordered(const std::vector<LinOp>& components, std::size_t generator,
                            std::vector<std::string> labels) {
  if (components.empty()) throw ValidationError("stack: no components");
  if (generator >= components.size()) throw ValidationError("stack: generator index out of range");
  const SpacePtr& x0 = components[generator].dom();
  for (const auto& c : components) {
    if (c.cols() != x0->dim) throw ValidationError("stack: components act on different spaces");
  }
  GradDivSystem sys;
  sys.x0 = x0;
  sys.generator = generator;
  sys.x1 = graph_space(components[generator]);
  std::vector<SpacePtr> codoms;
  std::vector<SpMat> blocks;
  Index off = 0;
  for (const auto& c : components) {
    sys.components.push_back(c.rebind(x0, c.codom()));
    codoms.push_back(c.codom());
    blocks.push_back(c.coeffs());
    sys.offsets.push_back(off);
    off += c.rows();
  }
  if (labels.size() != components.size()) {
    labels.clear();
    for (std::size_t k = 0; k < components.size(); ++k) labels.push_back("y" + std::to_string(k));
  }
  sys.labels = std::move(labels);
  sys.y = direct_sum(codoms, "Y");
  sys.stacked = LinOp(vstack(blocks), x0, sys.y);
  return sys;
}

GradDivSystem stack(const LinOp& c0, const std::vector<LinOp>& bounded) {
  std::vector<LinOp> comps{c0};
  comps.insert(comps.end(), bounded.begin(), bounded.end());
  return stack_ordered(comps, 0);
}

LinOp row_adjoint(const GradDivSystem& sys) {
  std::vector<SpMat> blocks;
  for (const auto& c : sys.components) blocks.push_back(gram_adjoint(c).coeffs());
  return LinOp(hstack(blocks), sys.y, sys.x0);
}

BlockSkewOp block_skew(const GradDivSystem& sys) {
  const SpMat& c = sys.stacked.coeffs();
  SpMat c_star = row_adjoint(sys).coeffs();
  const Index n0 = sys.x0->dim;
  const Index ny = sys.y->dim;
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(c.nonZeros() + c_star.nonZeros()));
  for (Index k = 0; k < c.outerSize(); ++k) {
    for (SpMat::InnerIterator it(c, k); it; ++it) trips.emplace_back(n0 + it.row(), it.col(), it.value());
  }
  for (Index k = 0; k < c_star.outerSize(); ++k) {
    for (SpMat::InnerIterator it(c_star, k); it; ++it) trips.emplace_back(it.row(), n0 + it.col(), -it.value());
  }
  SpMat a(n0 + ny, n0 + ny);
  a.setFromTriplets(trips.begin(), trips.end());

  BlockSkewOp out;
  out.h = direct_sum({sys.x0, sys.y}, "H");
  out.a = LinOp(a, out.h, out.h);
  out.offsets.push_back(0);
  out.sizes.push_back(n0);
  out.labels.push_back(sys.x0->label.empty() ? "x0" : sys.x0->label);
  for (std::size_t k = 0; k < sys.components.size(); ++k) {
    out.offsets.push_back(n0 + sys.offsets[k]);
    out.sizes.push_back(sys.components[k].rows());
    out.labels.push_back(sys.labels[k]);
  }
  return out;
}

double skew_defect(const BlockSkewOp& a, int pairs, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  const Gram& g = a.h->gram;
  const Index n = a.h->dim;
  double worst = 0.0;
  for (int k = 0; k < pairs; ++k) {
    Vec u(n), v(n);
    for (Index i = 0; i < n; ++i) u[i] = dist(rng);
    for (Index i = 0; i < n; ++i) v[i] = dist(rng);
    double s = g.inner(a.a.apply(u), v) + g.inner(u, a.a.apply(v));
    double scale = g.norm(u) * g.norm(v);
    worst = std::max(worst, std::abs(s) / std::max(scale, 1e-300));
  }
  return worst;
}

RestrictionReport restriction_check(const GradDivSystem& sys, const LinOp& interior,
                                    const LinOp& embedding, double tol) {
  if (embedding.rows() != sys.x0->dim) throw ValidationError("restriction_check: embedding codomain mismatch");
  if (interior.cols() != embedding.cols()) throw ValidationError("restriction_check: interior domain mismatch");
  if (interior.rows() != sys.components.front().rows()) {
    throw ValidationError("restriction_check: interior codomain mismatch");
  }
  RestrictionReport rep;
  const SpMat& e = embedding.coeffs();
  double scale = std::max(max_abs(interior.coeffs()), 1e-300);
  for (std::size_t k = 0; k < sys.components.size(); ++k) {
    SpMat ce = sys.components[k].coeffs() * e;
    SpMat diff = (k == 0) ? SpMat(ce - interior.coeffs()) : ce;
    double worst = 0.0;
    Index witness = -1;
    for (Index j = 0; j < diff.outerSize(); ++j) {
      for (SpMat::InnerIterator it(diff, j); it; ++it) {
        if (std::abs(it.value()) > worst) {
          worst = std::abs(it.value());
          witness = it.col();
        }
      }
    }
    worst /= scale;
    rep.containment_violation = std::max(rep.containment_violation, worst);
    if (worst > tol) {
      std::ostringstream os;
      os << "restriction_check: component " << k << " ("
         << sys.labels[k] << ") violates containment by " << worst
         << " on basis vector " << witness << " of the embedded subspace";
      throw WitnessError(os.str(), worst, static_cast<long>(witness));
    }
  }

  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  LinOp c_star = row_adjoint(sys);
  const Gram& gx = sys.x0->gram;
  const Gram& gv = embedding.dom()->gram;
  LinOp interior_star = gram_adjoint(interior);
  for (int trial = 0; trial < 32; ++trial) {
    Vec y(sys.y->dim), x(embedding.cols());
    for (Index i = 0; i < y.size(); ++i) y[i] = dist(rng);
    for (Index i = 0; i < x.size(); ++i) x[i] = dist(rng);
    Vec y1 = y.segment(0, interior.rows());
    double lhs = gx.inner(c_star.apply(y), embedding.apply(x));
    double rhs = gv.inner(interior_star.apply(y1), x);
    double norm = sys.y->gram.norm(y) * gx.norm(embedding.apply(x));
    rep.adjoint_violation = std::max(rep.adjoint_violation,
                                     std::abs(lhs - rhs) / std::max(norm, 1e-300));
  }
  return rep;
}

}  // namespace agds
