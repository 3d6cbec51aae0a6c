#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "opdyn/error.hpp"
#include "opdyn/scenario.hpp"
#include "test_util.hpp"

namespace opdyn {
namespace {

json two_agent_doc() {
  return json::parse(R"({
    "n": 2,
    "spectrum": {"type": "interval", "lo": -1, "hi": 1},
    "weights": [[0.5, 0.5], [0.25, 0.75]],
    "relations": [["F", "D"], ["F", "F"]],
    "deviations": {"D": {"kind": "soft"}},
    "initial_opinions": [1, -1]
  })");
}

TEST(Presets, AllLoadAndValidate) {
  const auto names = preset_names();
  EXPECT_EQ(names, (std::vector<std::string>{"complex_society", "example_bip", "example_general", "example_multiple",
                                             "example_opp", "probinv2", "probinv3"}));
  for (const auto& name : names) {
    const auto sc = load_preset(name);
    EXPECT_TRUE(validate(sc.graph).ok()) << name;
    EXPECT_EQ(static_cast<int>(sc.initial.size()), sc.graph.size()) << name;
    EXPECT_EQ(sc.name, name);
  }
  EXPECT_THROW(load_preset("nope"), InputError);
}

TEST(Presets, RoundTripThroughJson) {
  for (const auto& name : preset_names()) {
    const auto sc = load_preset(name);
    const json j = scenario_to_json(sc);
    const auto back = scenario_from_json(j, {.strict = true});
    EXPECT_EQ(back.graph.weights(), sc.graph.weights()) << name;
    EXPECT_EQ(back.graph.relations(), sc.graph.relations()) << name;
    EXPECT_EQ(back.graph.deviations(), sc.graph.deviations()) << name;
    EXPECT_EQ(back.graph.spectrum(), sc.graph.spectrum()) << name;
    EXPECT_EQ(back.initial, sc.initial) << name;
    EXPECT_EQ(scenario_to_json(back), j) << name;
  }
}

TEST(Presets, StatedConstants) {
  const auto p2 = load_preset("probinv2");
  EXPECT_NEAR(p2.graph.weight(0, 0), 2.0 / 3, 1e-15);
  EXPECT_NEAR(p2.graph.weight(0, 1), 1.0 / 3, 1e-15);
  EXPECT_EQ(p2.initial, (OpinionVector{1, -1}));
  const auto p3 = load_preset("probinv3");
  EXPECT_EQ(p3.graph.deviation(0, 1)->kind(), DeviationKind::Hard);
  EXPECT_TRUE(p3.graph.deviation(0, 1)->midpoint_to_upper());

  const auto cs = load_preset("complex_society").graph;
  EXPECT_EQ(cs.deviation(0, 3)->kind(), DeviationKind::Constant);
  EXPECT_EQ(cs.deviation(0, 3)->target(), 1.0);
  EXPECT_EQ(cs.deviation(2, 0)->target(), -1.0);
  EXPECT_EQ(cs.deviation(3, 0)->kind(), DeviationKind::Affine);
  EXPECT_EQ(cs.deviation(3, 0)->a(), 0.5);
  EXPECT_EQ(cs.deviation(5, 0)->kind(), DeviationKind::Soft);
  EXPECT_EQ(cs.deviation(5, 3)->kind(), DeviationKind::SignedPower);
  EXPECT_EQ(cs.deviation(5, 3)->p(), 0.5);
  EXPECT_EQ(load_preset("complex_society").initial, OpinionVector(6, 0.25));

  const auto eg = load_preset("example_general").graph;
  EXPECT_NEAR(eg.weight(11, 2), 0.6, 1e-15);
  EXPECT_TRUE(eg.deviates(11, 2));
  EXPECT_NEAR(eg.weight(11, 8), 0.4, 1e-15);
  EXPECT_FALSE(eg.deviates(11, 8));
  EXPECT_TRUE(eg.deviates(9, 10));
  EXPECT_FALSE(eg.deviates(7, 8));

  const auto multi = load_preset("example_multiple");
  EXPECT_EQ(multi.graph.spectrum().labels(), (std::vector<std::string>{"L", "M", "R"}));
  EXPECT_EQ(multi.initial, (OpinionVector{0, 0, 0, 1, 2, 2}));
  const auto bip = load_preset("example_bip");
  EXPECT_EQ(bip.graph.spectrum().size(), 5);
  EXPECT_EQ(bip.initial, (OpinionVector{1, 1, 3, 3}));
}

TEST(ScenarioJson, RenormalizesNearlyStochasticRows) {
  auto doc = two_agent_doc();
  doc["weights"][0] = {0.5, 0.5 + 5e-10};
  const auto sc = scenario_from_json(doc);
  EXPECT_NEAR(sc.graph.weights().row(0).sum(), 1.0, 1e-15);
  EXPECT_THROW(scenario_from_json(doc, {.strict = true}), InvalidScenario);
}

TEST(ScenarioJson, InvalidGraphsCarryTheReport) {
  auto doc = two_agent_doc();
  doc["weights"][1] = {0.5, 0.4};
  try {
    scenario_from_json(doc);
    FAIL() << "expected InvalidScenario";
  } catch (const InvalidScenario& e) {
    EXPECT_TRUE(e.report().has(Violation::Kind::RowSum));
  }
  doc = two_agent_doc();
  doc["relations"][0][1] = "X";
  EXPECT_THROW(scenario_from_json(doc), InvalidScenario);
  doc = two_agent_doc();
  doc["deviations"]["D"] = {{"kind", "identity"}};
  EXPECT_THROW(scenario_from_json(doc), InvalidScenario);
}

TEST(ScenarioJson, MalformedDocuments) {
  EXPECT_THROW(scenario_from_json(json::array()), InputError);
  auto doc = two_agent_doc();
  doc.erase("weights");
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["weights"][0] = {0.5};
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["weights"][0][0] = "half";
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["spectrum"]["type"] = "circle";
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["deviations"]["D"] = {{"kind", "affine"}, {"a", 0.5}};
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["initial_opinions"] = {1, 5};
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["initial_opinions"] = {1};
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["schema_version"] = 2;
  EXPECT_THROW(scenario_from_json(doc), InputError);
  doc = two_agent_doc();
  doc["relations"][0][1] = "";
  EXPECT_THROW(scenario_from_json(doc), InputError);
}

TEST(ScenarioJson, DiscreteLabelsAndTables) {
  const json doc = json::parse(R"({
    "n": 2,
    "spectrum": {"type": "discrete", "labels": ["no", "maybe", "yes"]},
    "weights": [[0.5, 0.5], [0.5, 0.5]],
    "relations": [["F", "T"], ["F", "F"]],
    "deviations": {"T": {"kind": "table", "map": {"no": "yes", "maybe": "no", "yes": "no"}}},
    "initial_opinions": ["yes", "maybe"]
  })");
  const auto sc = scenario_from_json(doc);
  EXPECT_EQ(sc.initial, (OpinionVector{2, 1}));
  EXPECT_EQ(sc.graph.deviation(0, 1)->map(), (std::vector<int>{2, 0, 0}));
  const json out = scenario_to_json(sc);
  EXPECT_EQ(out["initial_opinions"], json({"yes", "maybe"}));
  EXPECT_EQ(scenario_from_json(out).graph.deviation(0, 1)->map(), (std::vector<int>{2, 0, 0}));

  json bad = doc;
  bad["initial_opinions"] = {"yes", "perhaps"};
  EXPECT_THROW(scenario_from_json(bad), InputError);
  bad = doc;
  bad["deviations"]["T"]["map"] = {{"no", "yes"}};
  EXPECT_THROW(scenario_from_json(bad), InputError);
}

TEST(ScenarioFiles, SaveAndLoad) {
  const auto dir = std::filesystem::temp_directory_path() / "opdyn_scenario_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "s.json";
  save_scenario(path, load_preset("complex_society"));
  const auto back = load_scenario(path);
  EXPECT_EQ(back.graph.weights(), load_preset("complex_society").graph.weights());
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_THROW(load_scenario(dir / "broken.json"), InputError);
  EXPECT_THROW(load_scenario(dir / "missing.json"), InputError);
  std::filesystem::remove_all(dir);
}

TEST(Reports, TrajectoryCsv) {
  Trajectory t;
  t.steps = {{1, -1}, {1, -1.0 / 3}};
  const std::string csv = trajectory_csv(test::unit_interval(), t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,b_1,b_2");
  EXPECT_NE(csv.find("\n1,1,"), std::string::npos);
  const auto labels = OpinionSpectrum::discrete({"L", "R"});
  t.steps = {{0, 1}};
  EXPECT_EQ(trajectory_csv(labels, t), "t,b_1,b_2\n0,L,R\n");
}

TEST(Reports, LimitReportJson) {
  const auto sim = simulate(test::probinv2(), {1, -1});
  const json j = limit_report_to_json(test::unit_interval(), sim.report);
  EXPECT_EQ(j["status"], "converged");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_TRUE(j.contains("t_star"));
  EXPECT_EQ(j["limit"].size(), 2u);
  EXPECT_EQ(j["tolerances"]["tol"], 1e-9);
}

TEST(Reports, ClassificationJsonUsesOneBasedAgents) {
  const json j = classification_to_json(classify(load_preset("example_general").graph));
  EXPECT_EQ(j["rest"], json({12}));
  EXPECT_EQ(j["groups"][0]["members"], json({1, 2, 3}));
  EXPECT_EQ(j["groups"][0]["verdict"], "polarizes");
  EXPECT_EQ(j["groups"][0]["certificate"]["side1"], json({1}));
  EXPECT_EQ(j["groups"][1]["verdict"], "diverges");
  EXPECT_EQ(j["groups"][2]["verdict"], "neutral_consensus");
  EXPECT_EQ(j["overall_converges"], false);
  EXPECT_EQ(agents_from_json(json({1, 3}), 3), (AgentSet{0, 2}));
  EXPECT_THROW(agents_from_json(json({4}), 3), InputError);
}

}  // namespace
}  // namespace opdyn
