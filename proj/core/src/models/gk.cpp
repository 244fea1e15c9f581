#include "agds/models/gk.hpp"

#include <cmath>
#include <sstream>

namespace agds::models {

GKCoefficients gk_coefficients(double mu1, double mu2) {
  if (!(mu1 > 0.0) || !(mu1 + mu2 > 0.0)) {
    std::ostringstream os;
    os << "GK parameters need mu1 > 0 and mu1 + mu2 > 0, got mu1 = " << mu1 << ", mu2 = " << mu2;
    throw ValidationError(os.str());
  }
  GKCoefficients c;
  c.lambda = mu2 >= 0.0 ? -3.0 * mu1 : 3.0 * (mu2 - mu1);
  c.alpha1 = 3.0 * (mu2 - c.lambda / 6.0);
  c.alpha0 = 1.5 * (mu1 + c.lambda / 6.0);
  c.alpha2 = 0.5 * (mu1 - c.lambda / 2.0);
  return c;
}

Mat gk_pointwise(const GKCoefficients& c, double kappa) {
  Mat p = pointwise_trace_proj(3);
  Mat sym0 = pointwise_sym(3) - p;
  return (c.alpha0 * sym0 + c.alpha1 * p + c.alpha2 * pointwise_skew(3)) / kappa;
}

LinOp gk_tensor(const GKCoefficients& c, const FieldOps& ops, double kappa) {
  if (ops.grid.dim != 3) throw ValidationError("gk_tensor requires a 3D grid");
  return LinOp(lift_pointwise(gk_pointwise(c, kappa), ops.grid.nodes()), ops.tensor, ops.tensor);
}

std::pair<double, double> gk_effective(const GKCoefficients& c, bool symmetric) {
  const double a2 = symmetric ? 0.0 : c.alpha2;
  return {(c.alpha0 + a2) / 2.0, (c.alpha0 + 2.0 * c.alpha1 - 3.0 * a2) / 6.0};
}

double gk_tensor_check(const GKParams& p, const FieldOps& ops) {
  GKCoefficients c = gk_coefficients(p.mu1, p.mu2);
  LinOp ct = gk_tensor(c, ops, p.kappa);
  SpMat lhs = compose(ops.tensor_div, compose(ct, ops.tensor_grad)).coeffs();
  SpMat rhs = (1.0 / p.kappa) * (p.mu1 * ops.vector_laplacian.coeffs() + p.mu2 * ops.grad_div.coeffs());
  return max_rel_diff(lhs, rhs);
}

GKSystem gk_assemble(const GKParams& p, const Grid& grid) {
  if (grid.dim != 3) throw ValidationError("gk_assemble requires a 3D grid");
  if (!(p.kappa > 0.0) || !(p.tau0 > 0.0) || !(p.rho_c > 0.0)) {
    throw ValidationError("GK parameters kappa, tau0 and rho_c must be positive");
  }
  GKSystem s;
  s.params = p;
  s.coeffs = gk_coefficients(p.mu1, p.mu2);
  s.ops = field_ops(grid);
  const FieldOps& ops = s.ops;
  const Index n = grid.nodes();

  auto flux = std::make_shared<Space>(*ops.vector);
  flux->label = "heat_flux";
  SpacePtr x0 = flux;
  SpMat interior = grid.all_periodic() ? sparse_identity(3 * n) : interior_projection(grid, 3);

  LinOp div0(SpMat(ops.div.coeffs() * interior), x0, ops.scalar);
  SpMat g = ops.tensor_grad.coeffs() * interior;
  if (p.symmetric_tensor) g = lift_pointwise(pointwise_sym(3), n) * g;
  LinOp grad0(SpMat(-g), x0, ops.tensor);

  s.sys = stack_ordered({div0, grad0}, 1, {"temperature", "stress"});
  s.a = block_skew(s.sys);
  s.c_tensor = gk_tensor(s.coeffs, ops, p.kappa);

  Mat cinv = gk_pointwise(s.coeffs, p.kappa).inverse();
  SpMat m0 = block_diag({sparse_diag(Vec::Constant(3 * n, p.tau0 / p.kappa)),
                         sparse_diag(Vec::Constant(n, p.rho_c)), SpMat(9 * n, 9 * n)});
  SpMat m1 = block_diag({sparse_diag(Vec::Constant(3 * n, 1.0 / p.kappa)), SpMat(n, n),
                         lift_pointwise(cinv, n)});
  s.law = MaterialLaw::affine(m0, m1);
  return s;
}

GKRecovery gk_recover(const Trajectory& u, const GKSystem& s, const Forcing& forcing) {
  if (!s.ops.grid.all_periodic()) throw ValidationError("gk_recover requires a periodic grid");
  const GKParams& p = s.params;
  const FieldOps& ops = s.ops;
  const Index n = ops.grid.nodes();
  auto [m1, m2] = gk_effective(s.coeffs, p.symmetric_tensor);
  const SpMat visc = (1.0 / p.kappa) * (m1 * ops.vector_laplacian.coeffs() + m2 * ops.grad_div.coeffs());
  const Gram& gv = ops.vector->gram;
  const Gram& gt = ops.tensor->gram;
  const Mat cinv = gk_pointwise(s.coeffs, p.kappa).inverse();
  const SpMat cinv_f = lift_pointwise(cinv, n);
  SpMat sym_grad = ops.tensor_grad.coeffs();
  if (p.symmetric_tensor) sym_grad = lift_pointwise(pointwise_sym(3), n) * sym_grad;

  GKRecovery rep;
  double worst = 0.0, worst_c = 0.0, scale_c = 0.0;
  Vec prev = Vec::Zero(3 * n);
  const double tau = u.grid.tau;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const Vec& x = u.values[k];
    Vec u1 = x.segment(0, 3 * n);
    Vec u2 = x.segment(3 * n, n);
    Vec u3 = x.segment(4 * n, 9 * n);
    Vec f1 = forcing(u.grid.t(static_cast<Index>(k))).segment(0, 3 * n);
    Vec dt = (p.tau0 / p.kappa) * (u1 - prev) / tau;
    Vec lower = u1 / p.kappa;
    Vec v = visc * u1;
    Vec gr = ops.grad.coeffs() * u2;
    Vec r = dt + lower - v + gr - f1;
    worst = std::max(worst, gv.norm(r));
    rep.scale = std::max({rep.scale, gv.norm(dt), gv.norm(lower), gv.norm(v), gv.norm(gr), gv.norm(f1)});
    Vec gu = sym_grad * u1;
    worst_c = std::max(worst_c, gt.norm(cinv_f * u3 - gu));
    scale_c = std::max(scale_c, gt.norm(gu));
    prev = u1;
  }
  rep.residual = rep.scale > 0.0 ? worst / rep.scale : 0.0;
  rep.constitutive = scale_c > 0.0 ? worst_c / scale_c : 0.0;
  return rep;
}

}  // namespace agds::models
