#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/scenario.hpp"
#include "opdyn/verify.hpp"

namespace opdyn {

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUndetermined = 2;

/// A scenario file path or a preset name (exactly one).
struct ScenarioSource {
  std::string path;
  std::string preset;
  bool strict = false;
};

Scenario resolve_scenario(const ScenarioSource& source);

/// Comma-separated opinions: numbers, or labels on discrete spectra.
OpinionVector parse_opinions(const OpinionSpectrum& s, const std::string& text);
/// Comma-separated 1-based agent numbers.
AgentSet parse_agents(const std::string& text, int n);

struct SimulateArgs {
  ScenarioSource source;
  std::optional<UpdateRule> rule;
  int steps = 10'000;
  double tol = 1e-9;
  TieRule tie = TieRule::KeepCurrentElseLowest;
  std::string b0;   ///< overrides the scenario's initial opinions
  std::string out;  ///< writes <out>.csv and <out>.json when set
};

struct InfluenceArgs {
  ScenarioSource source;
  std::string group;  ///< restrict to these agents (renormalized)
};

struct EquilibriaArgs {
  ScenarioSource source;
  std::string mu;
  std::string partition;  ///< "1,2,3;4;5,6"
  std::string targets;    ///< one opinion per group
};

struct VerifyArgs {
  TrialConfig config;
  std::string out;
};

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err);
int cmd_classify(const ScenarioSource& source, std::ostream& out, std::ostream& err);
int cmd_influence(const InfluenceArgs& args, std::ostream& out, std::ostream& err);
int cmd_equilibria(const EquilibriaArgs& args, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace opdyn
