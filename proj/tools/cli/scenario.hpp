#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "agds/evo_solver.hpp"
#include "agds/models/dynbc.hpp"
#include "agds/models/gk.hpp"
#include "agds/models/leontovich.hpp"

namespace agds::cli {

using Json = nlohmann::ordered_json;

enum class Model { gk, dynbc, leontovich, custom };

struct GridSpec {
  std::string kind = "periodic";   // periodic | bounded | slab
  int dim = 3;
  Index nodes = 6;
  Index tangential_nodes = 4;      // slab only
  double length = 1.0;

  Grid build() const;
};

/// Scalar law block: affine with diagonal coefficients or a named family.
struct LawSpec {
  std::string kind = "affine";
  std::vector<double> m0{1.0};
  std::vector<double> m1{0.0};
  std::vector<double> params;
};

struct CustomParams {
  Index dim = 1;
  /// Entries (i, j, v) of the skew operator: A_ij = v, A_ji = -v.
  std::vector<std::array<double, 3>> skew;
};

struct ForcingSpec {
  std::string kind = "bump";   // zero | step | bump
  double amplitude = 1.0;
  double t_on = 0.0;
  double t_off = 1.0;
  std::vector<double> vector;  // custom model only
};

struct ConvergeSpec {
  std::vector<double> taus;
  double order_min = 0.8;
  double order_max = 1.2;
};

struct WellposedSpec {
  std::optional<double> rho0;
  int boundary_samples = 256;
  int interior_samples = 256;
};

struct Scenario {
  int schema_version = 1;
  Model model = Model::custom;
  std::string name = "scenario";
  GridSpec grid;
  models::GKParams gk;
  models::DynBCParams dynbc;
  models::LeontovichParams leontovich;
  CustomParams custom;
  LawSpec law;
  bool has_law = false;
  double t_start = 0.0, t_end = 1.0, tau = 0.01, rho = 1.0;
  std::string solver = "time";   // time | freq
  Index n_freq = 0;               // 0: smallest power of two above the step count
  ForcingSpec forcing;
  std::vector<std::string> checks;
  std::vector<std::string> outputs;
  ConvergeSpec converge;
  WellposedSpec wellposed;
  unsigned seed = 1;
};

/// Throws ValidationError on unknown keys, wrong types or invalid values.
Scenario parse_scenario(const Json& j);

const char* model_name(Model m);

/// Assembled system of a scenario, uniform across models.
struct Assembled {
  BlockSkewOp a;
  MaterialLaw law;
  Forcing forcing;
  std::optional<GradDivSystem> sys;   // absent for the custom model
  std::optional<models::GKSystem> gk;
  std::optional<models::DynBCSystem> dynbc;
  std::optional<models::LeontovichSystem> leontovich;
};

Assembled assemble(const Scenario& s);

/// Same scenario with a different step size.
EvoProblem problem_for(const Scenario& s, const Assembled& sys, double tau);

/// Power of two strictly above the number of steps unless configured.
Index frequency_count(const Scenario& s, double tau);

}  // namespace agds::cli
