#include "opdyn/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <ostream>
#include <sstream>

#include "opdyn/analysis.hpp"
#include "opdyn/equilibria.hpp"
#include "opdyn/error.hpp"
#include "opdyn/spectral.hpp"

namespace opdyn {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string{} : item.substr(b, e - b + 1));
  }
  return out;
}

Opinion parse_opinion(const OpinionSpectrum& s, const std::string& token) {
  if (s.is_discrete()) {
    const int k = s.index_of(token);
    if (k < 0) throw InputError("unknown label '" + token + "'");
    return k;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty()) throw InputError("'" + token + "' is not a number");
  if (!s.contains(x)) throw InputError("opinion " + token + " lies outside the spectrum");
  return x;
}

void write_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

template <class F>
int guarded(std::ostream& out, std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InvalidScenario& e) {
    json violations = json::array();
    for (const auto& v : e.report().violations) {
      json entry{{"kind", std::string(to_string(v.kind))}, {"message", v.message}};
      if (v.row >= 0) entry["row"] = v.row + 1;
      if (v.col >= 0) entry["col"] = v.col + 1;
      violations.push_back(std::move(entry));
    }
    write_json(out, {{"schema_version", kSchemaVersion}, {"error", "invalid scenario"}, {"violations", violations}});
    err << "error: " << e.what();
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

json fixed_point_set_to_json(const OpinionSpectrum& s, const FixedPointSet& set) {
  switch (set.shape()) {
    case FixedPointSet::Shape::Empty: return {{"shape", "empty"}};
    case FixedPointSet::Shape::Finite: return {{"shape", "finite"}, {"values", opinions_to_json(s, set.values())}};
    case FixedPointSet::Shape::Interval: {
      json j{{"shape", "interval"}};
      // JSON has no infinities; unbounded ends are null
      j["lo"] = std::isfinite(set.lo()) ? json(set.lo()) : json(nullptr);
      j["hi"] = std::isfinite(set.hi()) ? json(set.hi()) : json(nullptr);
      return j;
    }
  }
  return nullptr;
}

std::string influence_regime(const SignedMultigraph& g) {
  const AgentSet everyone = all_agents(g.size());
  if (!is_sslss(g)) return "out_of_theory";
  if (!is_strongly_connected(g, everyone)) return "not_strongly_connected";
  if (period(g, everyone) != 1) return "periodic";
  if (reverse_opposition_bipartition(g)) return "reverse_opposition_bipartite";
  if (!opposition_bipartition(g)) return "neither_bipartite";
  return "opposition_bipartite_aperiodic";
}

// Candidate opposing pairs (x, y) with x != y for the graph's single
// deviation function: every such label pair, or the interval endpoints.
std::vector<std::pair<Opinion, Opinion>> opposing_pairs(const SignedMultigraph& g) {
  const DeviationSpec* spec = nullptr;
  for (int i = 0; i < g.size(); ++i) {
    const DeviationSpec* d = agent_deviation(g, i);
    if (d == nullptr) continue;
    if (spec != nullptr && !(*spec == *d)) return {};
    spec = d;
  }
  const OpinionSpectrum& s = g.spectrum();
  std::vector<std::pair<Opinion, Opinion>> out;
  if (s.is_discrete()) {
    for (int x = 0; x < s.size(); ++x) {
      for (int y = x + 1; y < s.size(); ++y) {
        if (spec == nullptr || are_opposing_viewpoints(*spec, x, y)) out.emplace_back(x, y);
      }
    }
    return out;
  }
  const std::vector<double> candidates = s.is_bounded() ? std::vector<double>{s.hi(), s.lo()} : std::vector<double>{1.0};
  for (double x : candidates) {
    if (spec == nullptr) {
      out.emplace_back(x, x);
      break;
    }
    const double y = spec->apply(x);
    if (y != x && are_opposing_viewpoints(*spec, x, y)) {
      out.emplace_back(x, y);
      break;
    }
  }
  return out;
}

}  // namespace

Scenario resolve_scenario(const ScenarioSource& source) {
  if (source.path.empty() == source.preset.empty()) throw InputError("give either a scenario file or --preset");
  if (!source.preset.empty()) return load_preset(source.preset);
  return load_scenario(source.path, LoadOptions{source.strict});
}

OpinionVector parse_opinions(const OpinionSpectrum& s, const std::string& text) {
  OpinionVector b;
  for (const auto& token : split(text, ',')) b.push_back(parse_opinion(s, token));
  return b;
}

AgentSet parse_agents(const std::string& text, int n) {
  AgentSet out;
  for (const auto& token : split(text, ',')) {
    int a = 0;
    try {
      a = std::stoi(token);
    } catch (const std::exception&) {
      throw InputError("'" + token + "' is not an agent number");
    }
    if (a < 1 || a > n) throw InputError("agent " + token + " does not exist");
    out.push_back(a - 1);
  }
  return out;
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Scenario sc = resolve_scenario(args.source);
    const SignedMultigraph& g = sc.graph;
    const OpinionVector b0 = args.b0.empty() ? sc.initial : parse_opinions(g.spectrum(), args.b0);
    if (b0.empty()) throw InputError("scenario has no initial_opinions; pass --b0");

    SimulationOptions opt;
    opt.rule = args.rule.value_or(natural_rule(g));
    opt.t_max = args.steps;
    opt.tol = args.tol;
    opt.tie = args.tie;
    const Simulation sim = simulate(g, b0, opt);

    json report = limit_report_to_json(g.spectrum(), sim.report);
    report["rule"] = std::string(to_string(opt.rule));
    report["steps_run"] = sim.trajectory.steps.size() - 1;
    if (!args.out.empty()) {
      std::ofstream csv(args.out + ".csv");
      std::ofstream js(args.out + ".json");
      if (!csv || !js) throw InputError("cannot write output files with prefix " + args.out);
      csv << trajectory_csv(g.spectrum(), sim.trajectory);
      js << report.dump(2) << '\n';
    }
    write_json(out, report);
    return sim.report.undetermined() ? kExitUndetermined : kExitOk;
  });
}

int cmd_classify(const ScenarioSource& source, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Scenario sc = resolve_scenario(source);
    write_json(out, classification_to_json(classify(sc.graph)));
    return kExitOk;
  });
}

int cmd_influence(const InfluenceArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Scenario sc = resolve_scenario(args.source);
    AgentSet agents = all_agents(sc.graph.size());
    if (!args.group.empty()) agents = parse_agents(args.group, sc.graph.size());
    const SignedMultigraph g = args.group.empty() ? sc.graph : sc.graph.induced(agents, true);

    json result{{"schema_version", kSchemaVersion}, {"agents", agents_to_json(agents)}};
    result["regime"] = influence_regime(g);
    try {
      const InfluenceReport report = influence_report(g);
      OpinionVector b0(agents.size(), 1.0);
      if (!sc.initial.empty()) {
        for (std::size_t k = 0; k < agents.size(); ++k) b0[k] = sc.initial[static_cast<std::size_t>(agents[k])];
      }
      result["s"] = report.s;
      result["g_signs"] = report.g_signs;
      result["example_prediction"] = {{"b0", opinions_to_json(g.spectrum(), b0)},
                                      {"a", report.long_run_value(b0)},
                                      {"limit", opinions_to_json(g.spectrum(), report.predicted_limit(b0))}};
    } catch (const RegimeError& e) {
      result["error"] = e.what();
      write_json(out, result);
      err << "error: " << e.what() << '\n';
      return kExitError;
    }
    write_json(out, result);
    return kExitOk;
  });
}

int cmd_equilibria(const EquilibriaArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const Scenario sc = resolve_scenario(args.source);
    const SignedMultigraph& g = sc.graph;
    const OpinionSpectrum& s = g.spectrum();
    const UpdateRule rule = natural_rule(g);
    json result{{"schema_version", kSchemaVersion}, {"rule", std::string(to_string(rule))}};

    bool characterized = false;
    try {
      const ConsensusCharacterization c = consensus_fixed_points(g, rule);
      result["characterization"] = {{"available", true},
                                    {"strong_out_agents", agents_to_json(c.strong_out_agents)},
                                    {"threshold", c.threshold},
                                    {"admissible_consensus", fixed_point_set_to_json(s, c.admissible)},
                                    {"persistent_disagreement", c.persistent_disagreement}};
      characterized = true;
    } catch (const Unavailable& e) {
      result["characterization"] = {{"available", false}, {"reason", e.what()}};
    }

    json constructed = json::array();
    const auto opp = opposition_bipartition(g);
    const auto rev = reverse_opposition_bipartition(g);
    const auto pairs = characterized ? opposing_pairs(g) : std::vector<std::pair<Opinion, Opinion>>{};
    for (const auto& [x, y] : pairs) {
      if (opp) {
        try {
          const OpinionVector p = build_polarization(g, *opp, x, y);
          constructed.push_back({{"kind", "polarization"},
                                 {"certificate", certificate_to_json(*opp)},
                                 {"opinions", opinions_to_json(s, p)}});
        } catch (const InputError&) {
        }
      }
      if (rev) {
        try {
          const auto [p, q] = build_oscillation_pair(g, *rev, x, y);
          constructed.push_back({{"kind", "oscillation_pair"},
                                 {"certificate", certificate_to_json(*rev)},
                                 {"p", opinions_to_json(s, p)},
                                 {"p_bar", opinions_to_json(s, q)}});
        } catch (const InputError&) {
        }
      }
    }
    if (!args.partition.empty()) {
      std::vector<AgentSet> partition;
      for (const auto& group : split(args.partition, ';')) partition.push_back(parse_agents(group, g.size()));
      const OpinionVector targets = parse_opinions(s, args.targets);
      const OpinionVector p = build_multipolarization(g, partition, targets);
      json groups = json::array();
      for (const auto& group : partition) groups.push_back(agents_to_json(group));
      constructed.push_back({{"kind", "multipolarization"}, {"groups", groups}, {"opinions", opinions_to_json(s, p)}});
    }
    result["constructed"] = std::move(constructed);

    if (s.is_discrete()) {
      try {
        json fixed = json::array();
        for (const auto& b : brute_force_fixed_points(g)) fixed.push_back(opinions_to_json(s, b));
        result["fixed_points"] = std::move(fixed);
      } catch (const BoundExceeded& e) {
        result["fixed_points_error"] = e.what();
      }
    }

    if (!args.mu.empty()) {
      const Opinion mu = parse_opinion(s, args.mu);
      json wisdom{{"mu", opinion_to_json(s, mu)}};
      try {
        wisdom["verdict"] = std::string(to_string(wisdom_verdict(g, mu, rule)));
      } catch (const Unavailable& e) {
        wisdom["verdict"] = "unavailable";
        wisdom["reason"] = e.what();
      }
      result["wisdom"] = std::move(wisdom);
    }
    write_json(out, result);
    return kExitOk;
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(out, err, [&] {
    const AgreementReport report = run_trials(args.config);
    const json full = report_to_json(args.config, report);
    if (args.out.empty()) {
      write_json(out, full);
    } else {
      std::ofstream file(args.out);
      if (!file) throw InputError("cannot write " + args.out);
      file << full.dump(2) << '\n';
      json summary = full;
      summary.erase("counterexamples");
      summary["counterexample_count"] = report.counterexamples.size();
      write_json(out, summary);
    }
    return kExitOk;
  });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Opinion dynamics on signed networks with follow/deviate relations"};
  app.require_subcommand(1);

  auto add_source = [](CLI::App* cmd, ScenarioSource& src) {
    cmd->add_option("scenario", src.path, "Scenario JSON file");
    cmd->add_option("--preset", src.preset, "Built-in scenario name");
    cmd->add_flag("--strict", src.strict, "Require row sums within 1e-12 (no renormalization)");
  };

  SimulateArgs sim;
  std::string sim_rule;
  std::string tie = "keep";
  auto* simulate_cmd = app.add_subcommand("simulate", "Iterate the update rule and report the limit behavior");
  add_source(simulate_cmd, sim.source);
  simulate_cmd->add_option("--rule", sim_rule, "continuous or discrete (default: from spectrum)")
      ->check(CLI::IsMember({"continuous", "discrete"}));
  simulate_cmd->add_option("--steps", sim.steps, "Maximum number of steps")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--tol", sim.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--b0", sim.b0, "Initial opinions, comma separated");
  simulate_cmd->add_option("--tie", tie, "Discrete tie rule: keep or lowest")->check(CLI::IsMember({"keep", "lowest"}));
  simulate_cmd->add_option("--out", sim.out, "Write <out>.csv and <out>.json");

  ScenarioSource classify_src;
  auto* classify_cmd = app.add_subcommand("classify", "Closed groups, bipartition certificates and verdicts");
  add_source(classify_cmd, classify_src);

  InfluenceArgs infl;
  auto* influence_cmd = app.add_subcommand("influence", "Influence vector and long-run polarization values");
  add_source(influence_cmd, infl.source);
  influence_cmd->add_option("--group", infl.group, "Restrict to these agents, e.g. 1,2,3");

  EquilibriaArgs eq;
  auto* equilibria_cmd = app.add_subcommand("equilibria", "Consensus values, constructed equilibria, wisdom");
  add_source(equilibria_cmd, eq.source);
  equilibria_cmd->add_option("--mu", eq.mu, "True value for the wisdom verdict");
  auto* partition_opt =
      equilibria_cmd->add_option("--partition", eq.partition, "Groups for a multipolarization, e.g. \"1,2,3;4;5,6\"");
  auto* targets_opt = equilibria_cmd->add_option("--targets", eq.targets, "One opinion per group, e.g. L,M,R");
  partition_opt->needs(targets_opt);
  targets_opt->needs(partition_opt);

  VerifyArgs ver;
  std::string ver_rule = "continuous";
  auto* verify_cmd = app.add_subcommand("verify", "Randomized agreement checks between theory and simulation");
  verify_cmd->add_option("--trials", ver.config.trials, "Number of random graphs")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--n-max", ver.config.n_max, "Largest number of agents")->check(CLI::Range(2, 64));
  verify_cmd->add_option("--seed", ver.config.seed, "Random seed");
  verify_cmd->add_option("--density", ver.config.density, "Edge probability")->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--sign-prob", ver.config.sign_prob, "Deviate probability")->check(CLI::Range(0.0, 1.0));
  verify_cmd->add_option("--rule", ver_rule, "continuous or discrete")
      ->check(CLI::IsMember({"continuous", "discrete"}));
  verify_cmd->add_option("--b0-samples", ver.config.b0_samples, "Initial vectors per graph")
      ->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--threads", ver.config.threads, "Worker threads (0 = all cores)");
  verify_cmd->add_option("--only-trial", ver.config.only_trial, "Replay a single trial index");
  verify_cmd->add_option("--out", ver.out, "Write the full report here");

  auto* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (simulate_cmd->parsed()) {
    if (!sim_rule.empty()) sim.rule = sim_rule == "discrete" ? UpdateRule::Discrete : UpdateRule::Continuous;
    sim.tie = tie == "lowest" ? TieRule::LowestIndex : TieRule::KeepCurrentElseLowest;
    return cmd_simulate(sim, out, err);
  }
  if (classify_cmd->parsed()) return cmd_classify(classify_src, out, err);
  if (influence_cmd->parsed()) return cmd_influence(infl, out, err);
  if (equilibria_cmd->parsed()) return cmd_equilibria(eq, out, err);
  if (verify_cmd->parsed()) {
    ver.config.rule = ver_rule == "discrete" ? UpdateRule::Discrete : UpdateRule::Continuous;
    if (ver.config.n_max < ver.config.n_min) ver.config.n_min = ver.config.n_max;
    return cmd_verify(ver, out, err);
  }
  if (presets_cmd->parsed()) {
    for (const auto& name : preset_names()) out << name << '\n';
    return kExitOk;
  }
  return kExitError;
}

}  // namespace opdyn
