#include "agds/models/leontovich.hpp"

#include <cmath>

namespace agds::models {

MaterialLaw BoundaryLawSpec::make(Index dim) const {
  auto need = [&](std::size_t k) {
    if (params.size() != k) throw ValidationError("boundary law: wrong number of parameters");
  };
  switch (kind) {
    case Kind::affine:
      need(2);
      return MaterialLaw::affine(sparse_diag(Vec::Constant(dim, params[0])),
                                 sparse_diag(Vec::Constant(dim, params[1])));
    case Kind::mohsen:
      need(4);
      return MaterialLaw::mohsen(params[0], params[1], params[2], params[3], dim);
    case Kind::senior:
      need(3);
      return MaterialLaw::senior(params[0], params[1], params[2], dim);
    case Kind::eddy_fractional:
      need(2);
      return MaterialLaw::eddy_fractional(params[0], params[1], dim);
    case Kind::burque_kappa:
      need(2);
      return MaterialLaw::burque_kappa(params[0], params[1], dim);
  }
  throw ValidationError("unknown boundary law kind");
}

LeontovichSystem leontovich_assemble(const LeontovichParams& p, const Grid& grid) {
  if (grid.dim != 3) throw ValidationError("leontovich_assemble requires a 3D grid");
  if (!(p.mu > 0.0) || !(p.eps > 0.0)) throw ValidationError("mu and eps must be positive");
  LeontovichSystem s;
  s.params = p;
  s.grid = grid;
  s.ops = field_ops(grid);
  const FieldOps& ops = s.ops;

  auto magnetic = std::make_shared<Space>(*ops.vector);
  magnetic->label = "H";
  SpacePtr x0 = magnetic;
  LinOp neg_curl = (-1.0 * ops.curl).rebind(x0, ops.vector);

  LinOp boundary_map;
  if (p.variant == LeontovichVariant::classical) {
    if (!grid.all_bounded()) throw ValidationError("classical Leontovich variant requires a bounded box");
    s.traces = tangential_traces(grid);
    boundary_map = s.traces->pi_tau.rebind(x0, s.traces->l2_tau);
  } else {
    s.bd = bd_space(ops.curl, curl_interior_subspace(grid), FormalSymmetry::self_adjoint);
    boundary_map = s.bd->iota_star.rebind(x0, s.bd->space);
  }
  s.sys = stack_ordered({neg_curl, boundary_map}, 0, {"E", "eta"});
  s.a = block_skew(s.sys);
  s.size_h = ops.vector->dim;
  s.size_e = ops.vector->dim;
  s.size_eta = boundary_map.rows();

  const Index nv = ops.vector->dim;
  MaterialLaw mag = MaterialLaw::affine(sparse_diag(Vec::Constant(nv, p.mu)), SpMat(nv, nv));
  MaterialLaw ele = MaterialLaw::affine(sparse_diag(Vec::Constant(nv, p.eps)), SpMat(nv, nv));
  s.law = MaterialLaw::block_diagonal({mag, ele, p.boundary.make(s.size_eta)});
  return s;
}

Forcing leontovich_magnetic_forcing(const LeontovichSystem& s,
                                    std::function<std::array<double, 3>(double, double, double, double)> f) {
  const Grid g = s.grid;
  const Index total = s.a.h->dim;
  return [g, total, f](double t) {
    Vec out = Vec::Zero(total);
    const Index n = g.nodes();
    for (Index v = 0; v < n; ++v) {
      auto x = g.position(v);
      auto h = f(t, x[0], x[1], x[2]);
      for (int c = 0; c < 3; ++c) out[c * n + v] = h[static_cast<std::size_t>(c)];
    }
    return out;
  };
}

LeontovichResiduals leontovich_residuals(const Trajectory& u, const LeontovichSystem& s) {
  LeontovichResiduals r;
  const Index oe = s.size_h, oeta = s.size_h + s.size_e;
  if (s.traces) {
    const TangentialTraces& tt = *s.traces;
    const SpMat& sel = tt.face_interior_selector;
    Vec w = sel * tt.l2_tau->gram.weights();
    auto norm = [&](const Vec& x) { return std::sqrt(x.dot(w.cwiseProduct(x))); };
    for (const Vec& x : u.values) {
      Vec e = x.segment(oe, s.size_e);
      Vec eta = x.segment(oeta, s.size_eta);
      Vec gte = sel * (tt.gamma_tau.coeffs() * e);
      Vec se = sel * eta;
      r.boundary_condition = std::max(r.boundary_condition, norm(se - gte));
      r.scale = std::max({r.scale, norm(se), norm(gte)});
    }
  } else {
    const BoundaryDataSpace& bd = *s.bd;
    for (const Vec& x : u.values) {
      Vec e = x.segment(oe, s.size_e);
      Vec eta = x.segment(oeta, s.size_eta);
      Vec ie = bd.iota_star.apply(e);
      Vec be = bd.bullet * eta;
      r.boundary_condition = std::max(r.boundary_condition, (ie - be).norm());
      r.scale = std::max({r.scale, ie.norm(), be.norm()});
    }
  }
  return r;
}

ImpedanceReductionReport leontovich_impedance_reduction(const FrequencySolution& sol,
                                                        const LeontovichSystem& s) {
  if (!s.traces) throw ValidationError("impedance reduction requires the classical variant");
  const TangentialTraces& tt = *s.traces;
  const CSpMat sel = tt.face_interior_selector.cast<Complex>();
  const CSpMat pi = tt.pi_tau.coeffs().cast<Complex>();
  const CSpMat nx = tt.n_cross.coeffs().cast<Complex>();
  const Vec w = tt.face_interior_selector * tt.l2_tau->gram.weights();
  auto norm = [&](const CVec& x) {
    double acc = 0.0;
    for (Index i = 0; i < x.size(); ++i) acc += w[i] * std::norm(x[i]);
    return std::sqrt(acc);
  };
  const MaterialLaw& kappa = s.law.parts().at(2);
  const Index oe = s.size_h, oeta = s.size_h + s.size_e;
  ImpedanceReductionReport rep;
  for (std::size_t j = 0; j < sol.s.size(); ++j) {
    const Complex z = 1.0 / sol.s[j];
    const Complex k = CSpMat(eval_at(kappa, z)).coeff(0, 0);
    const Complex zimp = z / k;
    const CVec& uh = sol.u_hat[j];
    const CVec& fh = sol.f_hat[j];
    CVec hh = uh.segment(0, s.size_h);
    CVec eh = uh.segment(oe, s.size_e);
    CVec h1 = fh.segment(oeta, s.size_eta);
    CVec lhs = sel * (pi * eh);
    CVec rhs = zimp * (sel * (nx * h1 - nx * (pi * hh)));
    double scale = norm(lhs);
    double res = scale > 0.0 ? norm(lhs - rhs) / scale : norm(lhs - rhs);
    rep.residual.push_back(res);
    rep.max_residual = std::max(rep.max_residual, res);
  }
  return rep;
}

}  // namespace agds::models
