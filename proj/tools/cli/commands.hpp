#pragma once

#include <filesystem>
#include <string>

#include "scenario.hpp"

namespace agds::cli {

/// Pass/fail bookkeeping shared by all subcommands. Tolerances are multiplied
/// by the scale given on the command line.
class CheckList {
 public:
  explicit CheckList(double tolerance_scale) : scale_(tolerance_scale) {}

  /// value <= tol * scale
  void at_most(const std::string& name, double value, double tol);
  /// value > 0
  void positive(const std::string& name, double value);
  void equal(const std::string& name, long long value, long long expected);
  void within(const std::string& name, double value, double lo, double hi);

  bool passed() const { return passed_; }
  const Json& json() const { return list_; }

 private:
  void push(Json entry, bool ok);
  double scale_;
  bool passed_ = true;
  Json list_ = Json::array();
};

struct RunContext {
  Scenario scenario;
  std::filesystem::path out_dir;
  double tolerance_scale = 1.0;
};

struct CommandResult {
  Json results = Json::object();
  Json artifacts = Json::array();
};

CommandResult run_check(const RunContext& ctx, const std::string& target, CheckList& checks);
CommandResult run_wellposed(const RunContext& ctx, CheckList& checks);
CommandResult run_solve(const RunContext& ctx, CheckList& checks);
CommandResult run_converge(const RunContext& ctx, CheckList& checks);

/// %.17g formatting used for every number written to CSV.
std::string fmt(double x);

}  // namespace agds::cli
