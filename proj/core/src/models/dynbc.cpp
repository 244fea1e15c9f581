#include "agds/models/dynbc.hpp"

#include <cmath>

namespace agds::models {

DynBCSystem dynbc_assemble(const DynBCParams& p, const Grid& grid) {
  if (grid.dim != 2 || !grid.all_bounded()) throw ValidationError("dynbc_assemble requires a bounded 2D grid");
  for (double v : {p.m00, p.mu11, p.mu22, p.mu33, p.n00, p.nu11, p.nu22, p.nu33}) {
    if (!(v >= 0.0)) throw ValidationError("dynamic boundary coefficients must be non-negative");
  }
  DynBCSystem s;
  s.params = p;
  s.grid = grid;
  s.ops = field_ops(grid);
  s.trace = boundary_trace(grid);
  s.surface = surface_gradient(s.trace);
  const FieldOps& ops = s.ops;
  const Index n = grid.nodes();
  const Index m = s.trace.boundary.size();

  auto pressure = std::make_shared<Space>(*ops.scalar);
  pressure->label = "p";
  SpacePtr x0 = pressure;
  LinOp grad = ops.grad.rebind(x0, ops.vector);
  LinOp gamma = s.trace.gamma.rebind(x0, s.trace.l2_boundary);
  LinOp sgrad = compose(s.surface.grad, gamma);
  s.surface_grad_adj = gram_adjoint(s.surface.grad);

  s.size_p = n;
  s.size_v = 2 * n;
  if (p.boundary_coupling) {
    s.sys = stack_ordered({grad, gamma, sgrad}, 2, {"v", "eta1", "eta2"});
    s.size_eta1 = m;
    s.size_eta2 = m;
  } else {
    s.sys = stack_ordered({grad}, 0, {"v"});
  }
  s.a = block_skew(s.sys);

  std::vector<SpMat> m0{sparse_diag(Vec::Constant(n, p.m00)), sparse_diag(Vec::Constant(2 * n, p.mu11))};
  std::vector<SpMat> m1{sparse_diag(Vec::Constant(n, p.n00)), sparse_diag(Vec::Constant(2 * n, p.nu11))};
  if (p.boundary_coupling) {
    m0.push_back(sparse_diag(Vec::Constant(m, p.mu22)));
    m0.push_back(sparse_diag(Vec::Constant(m, p.mu33)));
    m1.push_back(sparse_diag(Vec::Constant(m, p.nu22)));
    m1.push_back(sparse_diag(Vec::Constant(m, p.nu33)));
  }
  s.law = MaterialLaw::affine(block_diag(m0), block_diag(m1));

  // <N v | gamma psi>_boundary = <div v | psi> + <v | grad psi>
  SpMat green = ops.grad.coeffs().transpose() * ops.vector->gram.to_sparse() +
                ops.scalar->gram.to_sparse() * ops.div.coeffs();
  const Vec& wb = s.trace.l2_boundary->gram.weights();
  s.normal_trace = (sparse_diag(wb.cwiseInverse()) * s.trace.gamma.coeffs() * green).pruned(1e-13, 1.0);
  return s;
}

Forcing dynbc_pressure_forcing(const DynBCSystem& s, std::function<double(double, double, double)> f) {
  const Grid g = s.grid;
  const Index total = s.a.h->dim;
  return [g, total, f](double t) {
    Vec out = Vec::Zero(total);
    for (Index v = 0; v < g.nodes(); ++v) {
      auto x = g.position(v);
      out[v] = f(t, x[0], x[1]);
    }
    return out;
  };
}

DynBCResiduals dynbc_residuals(const Trajectory& u, const DynBCSystem& s, const Forcing& forcing) {
  DynBCResiduals r;
  if (!s.params.boundary_coupling) return r;
  const DynBCParams& p = s.params;
  const Index np = s.size_p, nv = s.size_v, m = s.size_eta1;
  const Index ov = np, o1 = np + nv, o2 = np + nv + m;
  const Gram& gb = s.trace.l2_boundary->gram;
  const SpMat& gamma = s.trace.gamma.coeffs();
  const SpMat& sg = s.surface.grad.coeffs();
  const SpMat& sg_adj = s.surface_grad_adj.coeffs();
  const SpMat& nt = s.normal_trace;
  const SpMat& grad = s.ops.grad.coeffs();

  const bool reducible = p.mu22 == 0.0 && p.nu22 == 1.0 && p.mu11 > 0.0 && p.mu33 > 0.0 &&
                         std::abs(p.nu33 * p.mu11 - p.nu11 * p.mu33) <= 1e-14 * std::max(1.0, p.nu33 * p.mu11);
  const double alpha = p.mu11 > 0.0 ? p.mu33 / p.mu11 : 0.0;
  const double tau = u.grid.tau;

  double worst_bc = 0.0, worst_red = 0.0, worst_eta = 0.0;
  Vec prev_gp = Vec::Zero(m), prev_h1 = Vec::Zero(m);
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const Vec& x = u.values[k];
    const Vec f = forcing(u.grid.t(static_cast<Index>(k)));
    Vec pr = x.segment(0, np);
    Vec v = x.segment(ov, nv);
    Vec e1 = x.segment(o1, m);
    Vec e2 = x.segment(o2, m);
    Vec bc = nt * v + e1 + sg_adj * e2;
    worst_bc = std::max(worst_bc, gb.norm(bc));

    Vec g = f.segment(ov, nv), h1 = f.segment(o1, m), h2 = f.segment(o2, m);
    Vec gp = gamma * pr;
    if (p.mu22 == 0.0 && p.nu22 == 1.0) worst_eta = std::max(worst_eta, gb.norm(e1 + gp - h1));
    if (reducible) {
      Vec lt_gp = p.mu11 * (gp - prev_gp) / tau + p.nu11 * gp;
      Vec lt_h1 = p.mu11 * (h1 - prev_h1) / tau + p.nu11 * h1;
      Vec red = lt_gp + nt * (grad * pr) + (1.0 / alpha) * (sg_adj * (sg * gp)) - lt_h1 - nt * g -
                (1.0 / alpha) * (sg_adj * h2);
      worst_red = std::max(worst_red, gb.norm(red));
    }
    prev_gp = gp;
    prev_h1 = h1;
  }
  r.boundary_condition = worst_bc;
  r.eta1_identity = worst_eta;
  if (reducible) r.reduced = worst_red;
  return r;
}

}  // namespace agds::models
