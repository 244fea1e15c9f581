#include "scenario.hpp"

#include <cmath>
#include <set>

namespace agds::cli {

namespace {

// Typed access to one JSON object; every key must be consumed or is reported.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "must be an object");
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ValidationError(where(key) + " " + what);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const Json& at(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number()) fail(key, "must be a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) fail(key, "must be an integer");
    return v.get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_boolean()) fail(key, "must be a boolean");
    return v.get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_string()) fail(key, "must be a string");
    std::string s = v.get<std::string>();
    if (!allowed.empty() && !allowed.count(s)) fail(key, "has unsupported value \"" + s + "\"");
    return s;
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) {
    if (!has(key)) return fallback;
    const Json& v = j_.at(key);
    if (!v.is_array()) fail(key, "must be an array of numbers");
    std::vector<double> out;
    for (const Json& x : v) {
      if (!x.is_number()) fail(key, "must be an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<std::string> words(const std::string& key, const std::set<std::string>& allowed) {
    if (!has(key)) return {};
    const Json& v = j_.at(key);
    if (!v.is_array()) fail(key, "must be an array of strings");
    std::vector<std::string> out;
    for (const Json& x : v) {
      if (!x.is_string()) fail(key, "must be an array of strings");
      std::string s = x.get<std::string>();
      if (!allowed.count(s)) fail(key, "has unsupported entry \"" + s + "\"");
      out.push_back(s);
    }
    return out;
  }

  std::string child(const std::string& key) const { return where(key); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) fail(it.key(), "is not a recognized key");
    }
  }

 private:
  std::string where(const std::string& key) const {
    std::string p = path_.empty() ? "config" : path_;
    return key.empty() ? p : p + "." + key;
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

GridSpec parse_grid(Fields& top) {
  GridSpec g;
  if (!top.has("grid")) return g;
  Fields f(top.at("grid"), top.child("grid"));
  g.kind = f.text("kind", g.kind, {"periodic", "bounded", "slab"});
  g.dim = static_cast<int>(f.integer("dim", g.kind == "slab" ? 3 : g.dim));
  g.nodes = f.integer("nodes", g.nodes);
  g.tangential_nodes = f.integer("tangential_nodes", g.tangential_nodes);
  g.length = f.number("length", g.length);
  f.finish();
  if (g.dim < 1 || g.dim > 3) f.fail("dim", "must be 1, 2 or 3");
  if (g.kind == "slab" && g.dim != 3) f.fail("dim", "must be 3 for a slab");
  if (!(g.length > 0.0)) f.fail("length", "must be positive");
  return g;
}

LawSpec parse_law(Fields& top) {
  LawSpec l;
  Fields f(top.at("law"), top.child("law"));
  l.kind = f.text("kind", l.kind, {"affine", "mohsen", "senior", "eddy_fractional", "burque_kappa"});
  if (l.kind == "affine") {
    l.m0 = f.numbers("m0", l.m0);
    l.m1 = f.numbers("m1", l.m1);
  } else {
    l.params = f.numbers("params", {});
  }
  f.finish();
  return l;
}

}  // namespace

Grid GridSpec::build() const {
  if (kind == "periodic") return Grid::periodic(dim, nodes, length);
  if (kind == "bounded") return Grid::bounded(dim, nodes, length);
  return Grid::slab(nodes, tangential_nodes, length);
}

const char* model_name(Model m) {
  switch (m) {
    case Model::gk: return "gk";
    case Model::dynbc: return "dynbc";
    case Model::leontovich: return "leontovich";
    case Model::custom: return "custom";
  }
  return "?";
}

Scenario parse_scenario(const Json& j) {
  Scenario s;
  Fields top(j, "");
  s.schema_version = static_cast<int>(top.integer("schema_version", 0));
  if (s.schema_version != 1) top.fail("schema_version", "must be 1");
  const std::string model = top.text("model", "", {"gk", "dynbc", "leontovich", "custom"});
  if (model.empty()) top.fail("model", "is required");
  s.model = model == "gk" ? Model::gk : model == "dynbc" ? Model::dynbc : model == "leontovich" ? Model::leontovich : Model::custom;
  s.name = top.text("name", model, {});
  s.seed = static_cast<unsigned>(top.integer("seed", 1));
  s.grid = parse_grid(top);

  if (top.has("params")) {
    Fields p(top.at("params"), top.child("params"));
    switch (s.model) {
      case Model::gk:
        s.gk.mu1 = p.number("mu1", s.gk.mu1);
        s.gk.mu2 = p.number("mu2", s.gk.mu2);
        s.gk.kappa = p.number("kappa", s.gk.kappa);
        s.gk.tau0 = p.number("tau0", s.gk.tau0);
        s.gk.rho_c = p.number("rho_c", s.gk.rho_c);
        s.gk.symmetric_tensor = p.boolean("symmetric_tensor", false);
        break;
      case Model::dynbc: {
        auto& d = s.dynbc;
        d.m00 = p.number("m00", d.m00);
        d.n00 = p.number("n00", d.n00);
        d.mu11 = p.number("mu11", d.mu11);
        d.nu11 = p.number("nu11", d.nu11);
        d.mu22 = p.number("mu22", d.mu22);
        d.nu22 = p.number("nu22", d.nu22);
        d.mu33 = p.number("mu33", d.mu33);
        d.nu33 = p.number("nu33", d.nu33);
        d.boundary_coupling = p.boolean("boundary_coupling", true);
        break;
      }
      case Model::leontovich: {
        auto& l = s.leontovich;
        l.mu = p.number("mu", l.mu);
        l.eps = p.number("eps", l.eps);
        std::string v = p.text("variant", "classical", {"classical", "boundary_data"});
        l.variant = v == "classical" ? models::LeontovichVariant::classical : models::LeontovichVariant::boundary_data;
        break;
      }
      case Model::custom: {
        long long dim = p.integer("dim", 1);
        if (dim < 1) p.fail("dim", "must be positive");
        s.custom.dim = dim;
        if (p.has("skew")) {
          const Json& arr = p.at("skew");
          if (!arr.is_array()) p.fail("skew", "must be an array of [i, j, value] entries");
          for (const Json& e : arr) {
            if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
                !e[2].is_number()) {
              p.fail("skew", "entries must be [i, j, value]");
            }
            long long i = e[0].get<long long>(), k = e[1].get<long long>();
            if (i < 0 || k < 0 || i >= dim || k >= dim || i == k) p.fail("skew", "index out of range or diagonal");
            s.custom.skew.push_back({static_cast<double>(i), static_cast<double>(k), e[2].get<double>()});
          }
        }
        break;
      }
    }
    p.finish();
  }

  if (top.has("law")) {
    if (s.model == Model::gk || s.model == Model::dynbc) top.fail("law", "is fixed by the model parameters");
    s.law = parse_law(top);
    s.has_law = true;
  }
  if (s.model == Model::leontovich) {
    using K = models::BoundaryLawSpec::Kind;
    models::BoundaryLawSpec& b = s.leontovich.boundary;
    if (s.has_law) {
      const std::string& k = s.law.kind;
      b.kind = k == "affine" ? K::affine : k == "mohsen" ? K::mohsen : k == "senior" ? K::senior
             : k == "eddy_fractional" ? K::eddy_fractional : K::burque_kappa;
      if (k == "affine") {
        if (s.law.m0.size() != 1 || s.law.m1.size() != 1) {
          throw ValidationError("config.law: boundary law m0 and m1 must have one entry each");
        }
        b.params = {s.law.m0[0], s.law.m1[0]};
      } else {
        b.params = s.law.params;
      }
    }
  }

  if (top.has("time")) {
    Fields t(top.at("time"), top.child("time"));
    s.t_start = t.number("t_start", s.t_start);
    s.t_end = t.number("t_end", s.t_end);
    s.tau = t.number("tau", s.tau);
    s.rho = t.number("rho", s.rho);
    t.finish();
  }
  s.solver = top.text("solver", "time", {"time", "freq"});
  s.n_freq = top.integer("n_freq", 0);
  if (s.n_freq < 0) top.fail("n_freq", "must be non-negative");

  if (top.has("forcing")) {
    Fields f(top.at("forcing"), top.child("forcing"));
    s.forcing.kind = f.text("kind", s.forcing.kind, {"zero", "step", "bump"});
    s.forcing.amplitude = f.number("amplitude", s.forcing.amplitude);
    s.forcing.t_on = f.number("t_on", s.forcing.t_on);
    s.forcing.t_off = f.number("t_off", s.forcing.t_off);
    s.forcing.vector = f.numbers("vector", {});
    f.finish();
    if (s.forcing.kind == "bump" && !(s.forcing.t_off > s.forcing.t_on)) f.fail("t_off", "must exceed t_on");
    if (!s.forcing.vector.empty() && s.model != Model::custom) f.fail("vector", "is only used by the custom model");
  }

  s.checks = top.words("checks", {"skew", "posdef", "apriori", "causality", "residuals"});
  s.outputs = top.words("outputs", {"trajectory", "block_norms"});

  if (top.has("converge")) {
    Fields c(top.at("converge"), top.child("converge"));
    s.converge.taus = c.numbers("taus", {});
    s.converge.order_min = c.number("order_min", s.converge.order_min);
    s.converge.order_max = c.number("order_max", s.converge.order_max);
    c.finish();
    for (double t : s.converge.taus) {
      if (!(t > 0.0)) c.fail("taus", "entries must be positive");
    }
  }
  if (top.has("wellposed")) {
    Fields w(top.at("wellposed"), top.child("wellposed"));
    if (w.has("rho0")) s.wellposed.rho0 = w.number("rho0", 1.0);
    s.wellposed.boundary_samples = static_cast<int>(w.integer("boundary_samples", s.wellposed.boundary_samples));
    s.wellposed.interior_samples = static_cast<int>(w.integer("interior_samples", s.wellposed.interior_samples));
    w.finish();
    if (s.wellposed.rho0 && !(*s.wellposed.rho0 > 0.0)) w.fail("rho0", "must be positive");
    if (s.wellposed.boundary_samples < 1 || s.wellposed.interior_samples < 0) {
      w.fail("boundary_samples", "sample counts must be positive");
    }
  }
  top.finish();

  // delegated checks: the library constructors reject invalid values
  make_time_grid(s.t_start, s.t_end, s.tau, s.rho);
  return s;
}

namespace {

double envelope(const ForcingSpec& f, double t) {
  if (f.kind == "zero") return 0.0;
  if (f.kind == "step") return t >= f.t_on ? f.amplitude : 0.0;
  if (t <= f.t_on || t >= f.t_off) return 0.0;
  return f.amplitude * std::pow(std::sin(M_PI * (t - f.t_on) / (f.t_off - f.t_on)), 4);
}

MaterialLaw custom_law(const LawSpec& l, Index dim) {
  if (l.kind == "affine") {
    auto diag = [dim](const std::vector<double>& v, const char* what) {
      if (v.size() == 1) return Vec(Vec::Constant(dim, v[0]));
      if (static_cast<Index>(v.size()) != dim) {
        throw ValidationError(std::string("config.law.") + what + " needs 1 or dim entries");
      }
      return Vec(Eigen::Map<const Vec>(v.data(), dim));
    };
    return MaterialLaw::affine(sparse_diag(diag(l.m0, "m0")), sparse_diag(diag(l.m1, "m1")));
  }
  models::BoundaryLawSpec b;
  using K = models::BoundaryLawSpec::Kind;
  b.kind = l.kind == "mohsen" ? K::mohsen : l.kind == "senior" ? K::senior
         : l.kind == "eddy_fractional" ? K::eddy_fractional : K::burque_kappa;
  b.params = l.params;
  return b.make(dim);
}

}  // namespace

Assembled assemble(const Scenario& s) {
  Assembled out;
  const ForcingSpec fs = s.forcing;
  switch (s.model) {
    case Model::gk: {
      const Grid g = s.grid.build();
      out.gk = models::gk_assemble(s.gk, g);
      out.a = out.gk->a;
      out.law = out.gk->law;
      out.sys = out.gk->sys;
      const Index n = g.nodes(), dim = out.a.h->dim;
      const double c = 0.5 * g.length;
      Vec profile(n);
      for (Index v = 0; v < n; ++v) {
        auto x = g.position(v);
        double r2 = 0.0;
        for (int k = 0; k < 3; ++k) r2 += (x[k] - c) * (x[k] - c);
        profile[v] = std::exp(-20.0 * r2 / (g.length * g.length));
      }
      out.forcing = [fs, profile, n, dim](double t) {
        Vec f = Vec::Zero(dim);
        f.segment(3 * n, n) = envelope(fs, t) * profile;
        return f;
      };
      break;
    }
    case Model::dynbc: {
      out.dynbc = models::dynbc_assemble(s.dynbc, s.grid.build());
      out.a = out.dynbc->a;
      out.law = out.dynbc->law;
      out.sys = out.dynbc->sys;
      const double len = out.dynbc->grid.length;
      out.forcing = models::dynbc_pressure_forcing(*out.dynbc, [fs, len](double t, double x, double y) {
        return envelope(fs, t) * (std::cos(M_PI * x / len) * std::cos(M_PI * y / len) + x / len);
      });
      break;
    }
    case Model::leontovich: {
      out.leontovich = models::leontovich_assemble(s.leontovich, s.grid.build());
      out.a = out.leontovich->a;
      out.law = out.leontovich->law;
      out.sys = out.leontovich->sys;
      const double len = out.leontovich->grid.length;
      out.forcing = models::leontovich_magnetic_forcing(
          *out.leontovich, [fs, len](double t, double x, double y, double z) {
            const double b = envelope(fs, t);
            x /= len;
            y /= len;
            z /= len;
            return std::array<double, 3>{b * std::sin(M_PI * y), b * std::cos(M_PI * z) * x, b * (1.0 + x * y)};
          });
      break;
    }
    case Model::custom: {
      const Index d = s.custom.dim;
      SpacePtr h = euclidean_space(d, "u");
      std::vector<Triplet> t;
      for (const auto& e : s.custom.skew) {
        const Index i = static_cast<Index>(e[0]), k = static_cast<Index>(e[1]);
        t.emplace_back(i, k, e[2]);
        t.emplace_back(k, i, -e[2]);
      }
      SpMat a(d, d);
      a.setFromTriplets(t.begin(), t.end());
      out.a.a = LinOp(a, h, h);
      out.a.h = h;
      out.a.offsets = {0};
      out.a.sizes = {d};
      out.a.labels = {"u"};
      out.law = custom_law(s.law, d);
      Vec dir = Vec::Ones(d);
      if (!fs.vector.empty()) {
        if (static_cast<Index>(fs.vector.size()) != d) {
          throw ValidationError("config.forcing.vector needs dim entries");
        }
        dir = Eigen::Map<const Vec>(fs.vector.data(), d);
      }
      out.forcing = [fs, dir](double t) { return Vec(envelope(fs, t) * dir); };
      break;
    }
  }
  if (out.law.dim() != out.a.h->dim) throw ValidationError("law dimension does not match the state space");
  return out;
}

EvoProblem problem_for(const Scenario& s, const Assembled& sys, double tau) {
  return make_problem(sys.a, sys.law, sys.forcing, make_time_grid(s.t_start, s.t_end, tau, s.rho));
}

Index frequency_count(const Scenario& s, double tau) {
  if (s.n_freq > 0) return s.n_freq;
  const Index steps = make_time_grid(s.t_start, s.t_end, tau, s.rho).steps();
  Index n = 1;
  while (n <= 2 * steps) n *= 2;
  return n;
}

}  // namespace agds::cli
