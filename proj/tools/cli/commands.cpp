#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "agds/boundary_data.hpp"
#include "agds/tensor_ops.hpp"

namespace agds::cli {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void CheckList::push(Json entry, bool ok) {
  entry["passed"] = ok;
  passed_ = passed_ && ok;
  list_.push_back(std::move(entry));
}

void CheckList::at_most(const std::string& name, double value, double tol) {
  const double bound = tol * scale_;
  push(Json{{"name", name}, {"value", value}, {"tolerance", bound}}, std::isfinite(value) && value <= bound);
}

void CheckList::positive(const std::string& name, double value) {
  push(Json{{"name", name}, {"value", value}, {"requirement", "> 0"}}, value > 0.0);
}

void CheckList::equal(const std::string& name, long long value, long long expected) {
  push(Json{{"name", name}, {"value", value}, {"expected", expected}}, value == expected);
}

void CheckList::within(const std::string& name, double value, double lo, double hi) {
  push(Json{{"name", name}, {"value", value}, {"range", Json::array({lo, hi})}},
       std::isfinite(value) && value >= lo && value <= hi);
}

namespace {

std::filesystem::path artifact(const RunContext& ctx, const std::string& suffix) {
  return ctx.out_dir / (ctx.scenario.name + "_" + suffix + ".csv");
}

Json grid_json(const Grid& g) {
  Json n = Json::array();
  for (int k = 0; k < g.dim; ++k) n.push_back(g.n[static_cast<std::size_t>(k)]);
  Json topo = Json::array();
  for (int k = 0; k < g.dim; ++k) topo.push_back(g.is_bounded(k) ? "bounded" : "periodic");
  return Json{{"dim", g.dim}, {"nodes", n}, {"topology", topo}, {"length", g.length}};
}

Json coefficients_json(const models::GKCoefficients& c) {
  return Json{{"lambda", c.lambda}, {"alpha0", c.alpha0}, {"alpha1", c.alpha1}, {"alpha2", c.alpha2}};
}

double sbp_defect(const Grid& g) {
  DirichletPair d = dirichlet_pair(g);
  Mat gd(d.grad.coeffs()), dv(d.div.coeffs());
  Mat pairing = d.edges->gram.to_dense() * gd + (d.nodes->gram.to_dense() * dv).transpose();
  return pairing.cwiseAbs().maxCoeff();
}

void check_identities(const RunContext& ctx, CheckList& checks, Json& out) {
  const GridSpec& gs = ctx.scenario.grid;
  const Grid g = (gs.kind == "periodic" && gs.dim == 3) ? gs.build() : Grid::periodic(3, 6);
  FieldOps ops = periodic_ops(g);
  TensorIdentityReport r = tensor_identity_check(ops);
  out["tensor_grid"] = grid_json(g);
  checks.at_most("div_trace_proj_grad", r.trace_identity, 1e-12);
  checks.at_most("div_skew_grad", r.skew_identity, 1e-12);
  checks.at_most("div_sym0_grad", r.sym0_identity, 1e-12);
  checks.at_most("curl_curl", r.curl_curl_identity, 1e-12);
  checks.at_most("projector_partition", r.partition, 1e-12);
  checks.at_most("sbp_1d_16", sbp_defect(Grid::bounded(1, 16)), 1e-14);
  checks.at_most("sbp_2d_8x8", sbp_defect(Grid::bounded(2, 8)), 1e-14);
  if (ctx.scenario.model == Model::gk) {
    const models::GKParams& p = ctx.scenario.gk;
    out["coefficients"] = coefficients_json(models::gk_coefficients(p.mu1, p.mu2));
    checks.at_most("gk_tensor_identity", models::gk_tensor_check(p, ops), 1e-12);
  }
}

void check_adjoint(const RunContext& ctx, CheckList& checks, Json& out) {
  Assembled sys = assemble(ctx.scenario);
  out["state_dim"] = sys.a.h->dim;
  out["blocks"] = sys.a.labels;
  if (sys.sys) {
    const double d = max_rel_diff(row_adjoint(*sys.sys).coeffs(), gram_adjoint(sys.sys->stacked).coeffs());
    checks.at_most("row_adjoint", d, 1e-12);
  }
  if (sys.gk) out["coefficients"] = coefficients_json(sys.gk->coeffs);
  checks.at_most("skew", skew_defect(sys.a, 100, ctx.scenario.seed), 1e-12);
}

void check_bd(const RunContext& ctx, CheckList& checks, Json& out) {
  {
    const Grid g = Grid::bounded(1, 17);
    FieldOps ops = field_ops(g);
    BoundaryDataSpace bd = bd_space(LinOp(ops.partial[0], ops.scalar, ops.scalar), scalar_interior_subspace(g),
                                    FormalSymmetry::skew_adjoint);
    BoundaryDataReport r = bd_report(bd);
    out["derivative"] = Json{{"nodes", 17}, {"dim", r.dim}, {"bullet_square", r.bullet_square}};
    checks.equal("bd_derivative_dim", r.dim, 2);
    checks.at_most("bd_derivative_orthonormality", r.orthonormality, 1e-12);
  }
  const GridSpec& gs = ctx.scenario.grid;
  const bool usable = gs.dim == 3 && gs.kind != "periodic";
  const Grid g = usable ? gs.build() : Grid::slab(5, 5);
  FieldOps ops = field_ops(g);
  BoundaryDataSpace bd = bd_space(ops.curl, curl_interior_subspace(g), FormalSymmetry::self_adjoint);
  BoundaryDataReport r = bd_report(bd);
  out["curl"] = Json{{"grid", grid_json(g)},
                     {"dim", r.dim},
                     {"formal_symmetry_defect", bd.formal_symmetry_defect},
                     {"invariance", r.invariance}};
  checks.at_most("bd_curl_orthonormality", r.orthonormality, 1e-12);
  checks.at_most("bd_curl_complement", r.complement, 1e-12);
  checks.at_most("bd_curl_bullet_skew", r.bullet_skew, 1e-10);
  checks.at_most("bd_curl_bullet_square", r.bullet_square, 1e-8);
}

Json law_json(const MaterialLaw& law) {
  static const char* names[] = {"affine", "mohsen", "senior", "eddy_fractional", "burque_kappa", "sampled",
                                "block_diagonal"};
  Json j{{"kind", names[static_cast<int>(law.kind())]}, {"dim", law.dim()}, {"affine", law.is_affine()}};
  if (law.kind() == MaterialLaw::Kind::block_diagonal) {
    Json parts = Json::array();
    for (const auto& p : law.parts()) parts.push_back(law_json(p));
    j["parts"] = parts;
  } else if (!law.params().empty()) {
    j["params"] = law.params();
  }
  return j;
}

PosdefReport posdef_of(const RunContext& ctx, const MaterialLaw& law, double rho0) {
  PosdefOptions o;
  o.boundary_samples = ctx.scenario.wellposed.boundary_samples;
  o.interior_samples = ctx.scenario.wellposed.interior_samples;
  return posdef_check(law, rho0, o);
}

Trajectory solve(const Scenario& s, const EvoProblem& p, double tau) {
  if (s.solver == "time") return solve_time(p);
  return solve_freq(p, frequency_count(s, tau));
}

void write_block_norms(const Trajectory& u, const BlockLayout& layout, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << "t";
  for (const auto& l : layout.labels) os << "," << l;
  os << "\n";
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    os << fmt(u.grid.t(static_cast<Index>(k)));
    for (std::size_t b = 0; b < layout.labels.size(); ++b) {
      Vec seg = u.values[k].segment(layout.offsets[b], layout.sizes[b]);
      os << "," << fmt(seg.norm());
    }
    os << "\n";
  }
}

Json model_residuals(const Scenario& s, const Assembled& sys, const EvoProblem& p, const Trajectory& u,
                     CheckList& checks, bool assert_residuals) {
  Json r = Json::object();
  if (sys.gk) {
    r["coefficients"] = coefficients_json(sys.gk->coeffs);
    if (sys.gk->ops.grid.all_periodic()) {
      models::GKRecovery rec = models::gk_recover(u, *sys.gk, p.forcing);
      r["flux_equation"] = rec.residual;
      r["constitutive"] = rec.constitutive;
      if (assert_residuals) {
        checks.at_most("gk_flux_equation", rec.residual, 1e-10);
        checks.at_most("gk_constitutive", rec.constitutive, 1e-10);
      }
    }
  }
  if (sys.dynbc && sys.dynbc->params.boundary_coupling) {
    models::DynBCResiduals d = models::dynbc_residuals(u, *sys.dynbc, p.forcing);
    r["boundary_condition"] = d.boundary_condition;
    r["reduced_boundary_equation"] = d.reduced ? Json(*d.reduced) : Json(nullptr);
    r["eta1_identity"] = d.eta1_identity;
    if (assert_residuals && sys.dynbc->params.mu22 == 0.0 && sys.dynbc->params.nu22 == 1.0) {
      checks.at_most("dynbc_eta1_identity", d.eta1_identity, 1e-12);
    }
  }
  if (sys.leontovich) {
    models::LeontovichResiduals l = models::leontovich_residuals(u, *sys.leontovich);
    r["boundary_condition"] = l.boundary_condition;
    r["boundary_scale"] = l.scale;
    if (s.solver == "freq" && sys.leontovich->traces) {
      FrequencySolution sol = solve_freq_spectrum(p, frequency_count(s, s.tau));
      models::ImpedanceReductionReport ir = models::leontovich_impedance_reduction(sol, *sys.leontovich);
      r["impedance_reduction"] = Json{{"max", ir.max_residual}, {"per_frequency", ir.residual}};
    }
  }
  return r;
}

bool exact_scalar_case(const Scenario& s) {
  return s.model == Model::custom && s.custom.dim == 1 && s.custom.skew.empty() && s.law.kind == "affine" &&
         s.forcing.kind == "step" && s.forcing.t_on == s.t_start && s.law.m0[0] > 0.0;
}

double exact_scalar(const Scenario& s, double t) {
  const double m0 = s.law.m0[0], m1 = s.law.m1[0];
  const double a = s.forcing.amplitude * (s.forcing.vector.empty() ? 1.0 : s.forcing.vector[0]);
  const double dt = t - s.t_start;
  if (m1 == 0.0) return a * dt / m0;
  return a / m1 * (1.0 - std::exp(-m1 * dt / m0));
}

}  // namespace

CommandResult run_check(const RunContext& ctx, const std::string& target, CheckList& checks) {
  CommandResult res;
  const bool all = target == "all";
  if (all || target == "identities") check_identities(ctx, checks, res.results["identities"]);
  if (all || target == "adjoint") check_adjoint(ctx, checks, res.results["adjoint"]);
  if (all || target == "bd") check_bd(ctx, checks, res.results["bd"]);
  return res;
}

CommandResult run_wellposed(const RunContext& ctx, CheckList& checks) {
  CommandResult res;
  const Scenario& s = ctx.scenario;
  Assembled sys = assemble(s);
  const double rho0 = s.wellposed.rho0.value_or(s.rho);
  PosdefReport pd = posdef_of(ctx, sys.law, rho0);
  res.results["law"] = law_json(sys.law);
  res.results["rho0"] = rho0;
  res.results["posdef"] = Json{{"c_est", pd.c_est},
                               {"z_min", Json::array({pd.z_min.real(), pd.z_min.imag()})},
                               {"samples", pd.samples}};
  checks.positive("posdef_c_est", pd.c_est);
  if (sys.law.is_affine()) {
    AffineReport ar = affine_sufficient(sys.law.m0(), sys.law.m1());
    res.results["affine"] = Json{{"c0", ar.c0}, {"c1", ar.c1}, {"kernel_dim", ar.kernel_dim}, {"sufficient", ar.sufficient}};
  }
  if (sys.gk) res.results["coefficients"] = coefficients_json(sys.gk->coeffs);
  return res;
}

CommandResult run_solve(const RunContext& ctx, CheckList& checks) {
  CommandResult res;
  const Scenario& s = ctx.scenario;
  auto wants = [&](const char* c) { return std::find(s.checks.begin(), s.checks.end(), c) != s.checks.end(); };
  Assembled sys = assemble(s);
  EvoProblem p = problem_for(s, sys, s.tau);
  Trajectory u = solve(s, p, s.tau);

  Trajectory f = u;
  for (std::size_t k = 0; k < f.values.size(); ++k) f.values[k] = p.forcing(u.grid.t(static_cast<Index>(k)));
  const double un = weighted_norm(u), fn = weighted_norm(f);
  res.results["solver"] = s.solver;
  if (s.solver == "freq") res.results["n_freq"] = frequency_count(s, s.tau);
  res.results["steps"] = u.grid.steps();
  res.results["state_dim"] = sys.a.h->dim;
  res.results["weighted_norm"] = Json{{"solution", un}, {"forcing", fn}};

  if (wants("skew")) checks.at_most("skew", skew_defect(sys.a, 100, s.seed), 1e-12);
  if (wants("posdef") || wants("apriori")) {
    PosdefReport pd = posdef_of(ctx, sys.law, s.rho);
    res.results["posdef_c_est"] = pd.c_est;
    if (wants("posdef")) checks.positive("posdef_c_est", pd.c_est);
    if (wants("apriori") && pd.c_est > 0.0) {
      // |U| <= |F| / c, relative slack for the trapezoid weights
      checks.at_most("apriori_ratio", un * pd.c_est / std::max(fn, 1e-300), 1.01);
    }
  }
  if (wants("causality")) {
    CausalityReport c = causality_of(u, s.forcing.t_on);
    res.results["causality"] = Json{{"pre_support_max", c.pre_support_max}, {"overall_max", c.overall_max}};
    if (s.solver == "time") checks.at_most("causality", c.ratio, 1e-13);
  }
  res.results["residuals"] = model_residuals(s, sys, p, u, checks, wants("residuals"));

  BlockLayout layout = layout_of(sys.a);
  for (const auto& o : s.outputs) {
    if (o == "trajectory") {
      auto path = artifact(ctx, "trajectory");
      std::ofstream os(path);
      if (!os) throw ValidationError("cannot write " + path.string());
      Trajectory named = u;
      named.layout = layout;
      write_csv(named, os);
      res.artifacts.push_back(path.filename().string());
    } else if (o == "block_norms") {
      auto path = artifact(ctx, "block_norms");
      write_block_norms(u, layout, path);
      res.artifacts.push_back(path.filename().string());
    }
  }
  return res;
}

CommandResult run_converge(const RunContext& ctx, CheckList& checks) {
  CommandResult res;
  const Scenario& s = ctx.scenario;
  std::vector<double> taus = s.converge.taus;
  if (taus.empty()) taus = {s.tau, s.tau / 2.0, s.tau / 4.0};
  const bool exact = exact_scalar_case(s);
  if (taus.size() < (exact ? 2u : 3u)) {
    throw ValidationError(exact ? "converge needs at least two step sizes"
                                : "converge without an exact solution needs at least three step sizes");
  }
  Assembled sys = assemble(s);
  std::vector<Trajectory> runs;
  for (double tau : taus) runs.push_back(solve(s, problem_for(s, sys, tau), tau));

  std::vector<double> errors;
  if (exact) {
    for (const Trajectory& u : runs) {
      double e = 0.0;
      for (std::size_t k = 0; k < u.values.size(); ++k) {
        e = std::max(e, std::abs(u.values[k][0] - exact_scalar(s, u.grid.t(static_cast<Index>(k)))));
      }
      errors.push_back(e);
    }
  } else {
    // successive differences on the coarse grid times
    for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
      const double ratio = taus[i] / taus[i + 1];
      const Index r = static_cast<Index>(std::llround(ratio));
      if (r < 2 || std::abs(ratio - static_cast<double>(r)) > 1e-9) {
        throw ValidationError("converge: consecutive step sizes must have an integer ratio of at least 2");
      }
      double e = 0.0;
      for (std::size_t k = 0; k < runs[i].values.size(); ++k) {
        const Vec& fine = runs[i + 1].values[k * static_cast<std::size_t>(r)];
        e = std::max(e, (runs[i].values[k] - fine).cwiseAbs().maxCoeff());
      }
      errors.push_back(e);
    }
  }
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    orders.push_back(std::log(errors[i] / errors[i + 1]) / std::log(taus[i] / taus[i + 1]));
  }
  res.results["method"] = exact ? "exact" : "successive_differences";
  res.results["taus"] = taus;
  res.results["errors"] = errors;
  res.results["orders"] = orders;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    checks.within("order_" + std::to_string(i), orders[i], s.converge.order_min, s.converge.order_max);
  }
  auto path = artifact(ctx, "converge");
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path.string());
  os << "tau,error,order\n";
  for (std::size_t i = 0; i < errors.size(); ++i) {
    os << fmt(taus[i]) << "," << fmt(errors[i]) << "," << (i == 0 ? std::string() : fmt(orders[i - 1])) << "\n";
  }
  res.artifacts.push_back(path.filename().string());
  return res;
}

}  // namespace agds::cli
