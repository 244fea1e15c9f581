// agds: batch front-end running checks, well-posedness reports, solves and
// convergence studies from a JSON scenario.
//
// Exit codes: 0 all requested checks passed, 1 a check failed, 2 the config
// could not be parsed, 3 the scenario is invalid. Every run writes report.json.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using agds::cli::Json;

enum Exit { ok = 0, check_failed = 1, parse_failed = 2, invalid = 3 };

struct Options {
  std::string config;
  std::string out = ".";
  double tolerance_scale = 1.0;
  std::optional<long long> seed;
  std::string command;
  std::string target = "all";
};

void write_report(const Options& o, const Json& report) {
  std::filesystem::path dir(o.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream os(dir / "report.json");
  if (os) os << report.dump(2) << "\n";
  if (!os) std::cerr << "agds: cannot write " << (dir / "report.json").string() << "\n";
}

Json header(const Options& o) {
  Json j;
  j["command"] = o.command;
  if (o.command == "check") j["target"] = o.target;
  j["config"] = std::filesystem::path(o.config).filename().string();
  j["tolerance_scale"] = o.tolerance_scale;
  return j;
}

int fail(const Options& o, Exit code, const std::string& status, Json error) {
  Json report = header(o);
  report["status"] = status;
  report["exit_code"] = static_cast<int>(code);
  report["error"] = std::move(error);
  write_report(o, report);
  std::cerr << "agds: " << report["error"]["message"].get<std::string>() << "\n";
  return code;
}

// 1-based line and column of a byte offset.
std::pair<std::size_t, std::size_t> position(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

int run(const Options& o) {
  std::ifstream in(o.config, std::ios::binary);
  if (!in) return fail(o, invalid, "validation_error", Json{{"message", "cannot read config " + o.config}});
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // the reported byte is one past the offending character
    auto [line, col] = position(text, e.byte > 0 ? e.byte - 1 : 0);
    return fail(o, parse_failed, "parse_error",
                Json{{"message", e.what()}, {"byte", e.byte}, {"line", line}, {"column", col}});
  }

  agds::cli::RunContext ctx;
  ctx.out_dir = o.out;
  ctx.tolerance_scale = o.tolerance_scale;
  try {
    if (!(o.tolerance_scale > 0.0)) throw agds::ValidationError("--tolerance-scale must be positive");
    ctx.scenario = agds::cli::parse_scenario(j);
    if (o.seed) {
      if (*o.seed < 0) throw agds::ValidationError("--seed must be non-negative");
      ctx.scenario.seed = static_cast<unsigned>(*o.seed);
    }
  } catch (const agds::Error& e) {
    return fail(o, invalid, "validation_error", Json{{"message", e.what()}});
  } catch (const nlohmann::json::exception& e) {
    return fail(o, invalid, "validation_error", Json{{"message", e.what()}});
  }

  std::filesystem::create_directories(ctx.out_dir);
  agds::cli::CheckList checks(o.tolerance_scale);
  agds::cli::CommandResult res;
  try {
    if (o.command == "check") res = agds::cli::run_check(ctx, o.target, checks);
    else if (o.command == "wellposed") res = agds::cli::run_wellposed(ctx, checks);
    else if (o.command == "solve") res = agds::cli::run_solve(ctx, checks);
    else res = agds::cli::run_converge(ctx, checks);
  } catch (const agds::WitnessError& e) {
    return fail(o, check_failed, "check_failed",
                Json{{"message", e.what()}, {"violation", e.violation}, {"index", e.index}});
  } catch (const agds::SingularOperatorError& e) {
    return fail(o, invalid, "validation_error",
                Json{{"message", e.what()}, {"condition_estimate", e.condition_estimate}});
  } catch (const agds::Error& e) {
    return fail(o, invalid, "validation_error", Json{{"message", e.what()}});
  }

  Json report = header(o);
  const bool passed = checks.passed();
  report["status"] = passed ? "ok" : "check_failed";
  report["exit_code"] = passed ? 0 : 1;
  report["scenario"] = ctx.scenario.name;
  report["model"] = agds::cli::model_name(ctx.scenario.model);
  report["seed"] = ctx.scenario.seed;
  report["checks"] = checks.json();
  report["results"] = res.results;
  report["artifacts"] = res.artifacts;
  write_report(o, report);
  for (const auto& c : checks.json()) {
    std::cout << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << " "
              << c["value"].dump() << "\n";
  }
  return passed ? ok : check_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks and solvers for evolutionary grad-div systems"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "Scenario JSON file")->required();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--tolerance-scale", o.tolerance_scale, "Multiplier applied to every tolerance")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Overrides the scenario seed");
  app.fallthrough();

  auto* check = app.add_subcommand("check", "Operator, tensor and boundary-data identity suite");
  check->add_option("target", o.target, "identities | adjoint | bd | all")
      ->check(CLI::IsMember({"identities", "adjoint", "bd", "all"}))
      ->capture_default_str();
  app.add_subcommand("wellposed", "Positive-definiteness report of the material law");
  app.add_subcommand("solve", "Solve the scenario and write trajectories");
  app.add_subcommand("converge", "Errors and observed orders over step sizes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return parse_failed;
  }
  o.command = app.get_subcommands().front()->get_name();
  return run(o);
}
