#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bearform/cli.hpp"
#include "bearform/error.hpp"
#include "bearform/report.hpp"
#include "bearform/scenario.hpp"

using namespace bearform;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kSource{BEARFORM_SOURCE_DIR};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("bearform_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json bundled_json(const std::string& name) { return json::parse(scenario_to_json(*find_bundled(name)).dump()); }

// Expects scenario_from_json to fail naming exactly `path`.
void expect_field_error(const json& doc, const std::string& path) {
  try {
    scenario_from_json(doc);
    FAIL() << "expected a ParseError at " << path;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.field_path(), path) << e.what();
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& doc) {
  const auto p = dir / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

}  // namespace

TEST(ScenarioFile, BundledRoundTrip) {
  for (const auto& b : bundled_scenarios()) {
    const auto text = scenario_to_json(b.scenario).dump();
    EXPECT_EQ(scenario_from_json(json::parse(text)), b.scenario) << b.name;
  }
}

TEST(ScenarioFile, CheckedInFilesMatchBundled) {
  for (const auto& b : bundled_scenarios()) {
    EXPECT_EQ(load_scenario(kSource / "scenarios" / (b.name + ".json")), b.scenario) << b.name;
  }
}

TEST(ScenarioFile, BundledInitialConditions) {
  const auto s = *find_bundled("scenario1");
  const auto traj = make_trajectory(s.trajectory);
  for (const auto& a : s.agents) {
    const Vector3 p(a.p[0], a.p[1], a.p[2]);
    const Vector3 expected = traj->evaluate(a.id, 0.0).p + (a.id > 1 ? Vector3(0.5, -0.5, 0.3) : Vector3::Zero());
    EXPECT_LT((p - expected).norm(), 1e-15);
  }
  EXPECT_EQ(s.neighbors, (std::vector<std::vector<int>>{{}, {1}, {2}, {2, 3}}));
  EXPECT_EQ(find_bundled("scenario2")->neighbors, (std::vector<std::vector<int>>{{}, {1}, {2}, {3}}));
  EXPECT_FALSE(find_bundled("nope").has_value());
}

TEST(ScenarioFile, MalformedFieldsNamePath) {
  auto doc = bundled_json("scenario1");
  doc["agents"][1]["gains"]["kd"] = "three";
  expect_field_error(doc, "agents[1].gains.kd");

  doc = bundled_json("scenario1");
  doc["agents"][2]["initial"]["p"] = json::array({1.0, 2.0});
  expect_field_error(doc, "agents[2].initial.p");

  doc = bundled_json("scenario1");
  doc["sim"]["noise"]["bearing_sigam"] = 0.1;
  expect_field_error(doc, "sim.noise.bearing_sigam");

  doc = bundled_json("scenario1");
  doc["sim"].erase("duration");
  expect_field_error(doc, "sim.duration");

  doc = bundled_json("scenario1");
  doc["sim"]["physics_dt"] = 0.003;
  expect_field_error(doc, "sim.physics_dt");

  doc = bundled_json("scenario1");
  doc["graph"]["neighbors"][3][1] = 2.5;
  expect_field_error(doc, "graph.neighbors[3][1]");

  doc = bundled_json("scenario1");
  doc["trajectory"]["kind"] = "spiral";
  expect_field_error(doc, "trajectory.kind");

  doc = bundled_json("experiment_circle");
  doc["trajectory"]["params"]["A_min"] = -1.0;
  expect_field_error(doc, "trajectory.params.A_min");

  doc = bundled_json("scenario1");
  doc["collision"]["eps_outer"] = 0.2;
  expect_field_error(doc, "collision.eps_outer");

  doc = bundled_json("scenario1");
  doc["agents"][1]["id"] = 7;
  expect_field_error(doc, "agents[1].id");

  doc = bundled_json("scenario1");
  doc["meta"]["seed"] = -3;
  expect_field_error(doc, "meta.seed");

  expect_field_error(json::array(), "<root>");
}

TEST(ScenarioFile, InvalidJsonAndMissingFile) {
  const auto dir = scratch("badjson");
  std::ofstream(dir / "broken.json") << "{ \"meta\": ";
  EXPECT_THROW(load_scenario(dir / "broken.json"), ParseError);
  EXPECT_THROW(load_scenario(dir / "absent.json"), ParseError);
}

TEST(ScenarioFile, Translated) {
  const auto base = *find_bundled("scenario1");
  const auto moved = translated(base, {10.0, -7.0, 3.0});
  EXPECT_EQ(moved.agents[2].p[0], base.agents[2].p[0] + 10.0);
  const auto a = make_trajectory(base.trajectory);
  const auto b = make_trajectory(moved.trajectory);
  EXPECT_EQ(b->evaluate(3, 2.0).p, a->evaluate(3, 2.0).p + Vector3(10, -7, 3));
}

TEST(ScenarioFile, TableTrajectoryRelativeToFile) {
  const auto dir = scratch("table");
  {
    std::ofstream out(dir / "path.csv");
    out << "t,p1x,p1y,p1z,p2x,p2y,p2z\n";
    for (int k = 0; k <= 400; ++k) {
      const double t = 0.05 * k;
      out << t << ",0," << 0.1 * t << ",-1," << std::cos(0.3 * t) << "," << 0.1 * t + std::sin(0.3 * t) << ",-1\n";
    }
  }
  auto doc = bundled_json("two_agent_headon");
  doc["trajectory"] = {{"kind", "table"}, {"params", {{"path", "path.csv"}}}};
  doc["agents"][0]["initial"]["p"] = {0.0, 0.0, -1.0};
  doc["agents"][1]["initial"]["p"] = {1.0, 0.0, -1.0};
  doc["sim"]["duration"] = 15.0;
  const auto file = write_json(dir, "table.json", doc);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(file.string(), out, err), kExitOk) << out.str() << err.str();
  EXPECT_EQ(cmd_run(file.string(), RunOverrides{.out_dir = dir}, out, err), kExitOk) << err.str();
}

TEST(Check, BundledScenarioOneClean) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check((kSource / "scenarios" / "scenario1.json").string(), out, err), kExitOk);
  EXPECT_EQ(out.str().find("[WARN]"), std::string::npos) << out.str();
  EXPECT_EQ(out.str().find("[FAIL]"), std::string::npos);
}

TEST(Check, ExperimentWarnsOnGains) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check((kSource / "scenarios" / "experiment_circle.json").string(), out, err), kExitOk);
  EXPECT_NE(out.str().find("[WARN] kp_bound"), std::string::npos) << out.str();
  const auto outcome = check_scenario(*find_bundled("experiment_circle"));
  EXPECT_EQ(outcome.gain_warnings.size(), 2u);
}

TEST(Check, FollowerWithoutNeighborFails) {
  const auto dir = scratch("check");
  auto doc = bundled_json("scenario1");
  doc["graph"]["neighbors"][1] = json::array();
  const auto file = write_json(dir, "orphan.json", doc);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(file.string(), out, err), kExitValidation);
  EXPECT_NE(out.str().find("[FAIL] follower_has_neighbor"), std::string::npos) << out.str();
}

TEST(Check, StaticCollinearFormationNotExcited) {
  const auto dir = scratch("static");
  auto doc = bundled_json("two_agent_headon");
  doc["trajectory"]["params"]["omega"] = 0.0;
  doc["trajectory"]["params"]["turn_rate"] = 0.0;
  doc["agents"][1]["initial"]["p"] = {2.0, 0.0, -0.98};
  const auto file = write_json(dir, "static.json", doc);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check(file.string(), out, err), kExitValidation);
  EXPECT_NE(out.str().find("[FAIL] bearing_pe"), std::string::npos) << out.str();
}

TEST(Check, ParseErrorExitCode) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_check("/nonexistent/scenario.json", out, err), kExitValidation);
  EXPECT_NE(err.str().find("error"), std::string::npos);
}

TEST(RunCommand, WritesCsvAndSummary) {
  const auto dir = scratch("run");
  std::ostringstream out, err;
  RunOverrides o;
  o.out_dir = dir;
  o.duration = 4.0;
  o.seed = 9;
  ASSERT_EQ(cmd_run("scenario1", o, out, err), kExitOk) << err.str();
  const auto csv = slurp(dir / "scenario1.csv");
  const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  EXPECT_NEAR(static_cast<double>(rows), 400.0, 1.0);
  EXPECT_FALSE(fs::exists(dir / "scenario1.csv.tmp"));

  const auto summary = json::parse(slurp(dir / "scenario1_summary.json"));
  EXPECT_EQ(summary["generator"]["rng"], "philox4x32-10");
  EXPECT_EQ(summary["generator"]["seed"], 9);
  EXPECT_EQ(summary["scenario"]["sim"]["duration"], 4.0);
  EXPECT_EQ(summary["metrics"]["followers"].size(), 3u);
  EXPECT_TRUE(summary["metrics"]["bpe"]["all_pe"].get<bool>());
  EXPECT_TRUE(summary["metrics"]["gain_warnings"].empty());
}

TEST(RunCommand, ByteIdenticalReruns) {
  const auto a = scratch("rerun_a"), b = scratch("rerun_b");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run("experiment_circle", RunOverrides{.duration = 10.0, .out_dir = a}, out, err), kExitOk);
  ASSERT_EQ(cmd_run("experiment_circle", RunOverrides{.duration = 10.0, .out_dir = b}, out, err), kExitOk);
  EXPECT_EQ(slurp(a / "experiment_circle.csv"), slurp(b / "experiment_circle.csv"));
  EXPECT_EQ(slurp(a / "experiment_circle_summary.json"), slurp(b / "experiment_circle_summary.json"));
}

TEST(RunCommand, ScenarioOneFinalErrorsBelowThreshold) {
  const auto dir = scratch("s1");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run((kSource / "scenarios" / "scenario1.json").string(), RunOverrides{.out_dir = dir}, out, err),
            kExitOk);
  const auto summary = json::parse(slurp(dir / "scenario1_summary.json"));
  for (const auto& f : summary["metrics"]["followers"]) {
    EXPECT_LT(f["final_position_error"].get<double>(), 0.05) << f.dump();
  }
}

TEST(RunCommand, RefusesFailedChecksUnlessForced) {
  const auto dir = scratch("force");
  auto doc = bundled_json("two_agent_headon");
  doc["trajectory"]["params"]["omega"] = 0.0;
  doc["trajectory"]["params"]["turn_rate"] = 0.0;
  doc["agents"][1]["initial"]["p"] = {2.0, 0.0, -0.98};
  doc["sim"]["duration"] = 2.0;
  const auto file = write_json(dir, "static.json", doc);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(file.string(), RunOverrides{.out_dir = dir}, out, err), kExitValidation);
  EXPECT_FALSE(fs::exists(dir / "two_agent_headon.csv"));
  EXPECT_EQ(cmd_run(file.string(), RunOverrides{.out_dir = dir, .force = true}, out, err), kExitOk) << err.str();
  EXPECT_TRUE(fs::exists(dir / "two_agent_headon.csv"));
}

TEST(RunCommand, AbortReportsTickAndAgent) {
  const auto dir = scratch("abort");
  auto doc = bundled_json("two_agent_headon");
  doc["agents"][1]["gains"]["ko"] = 0.0;
  const auto file = write_json(dir, "nobarrier.json", doc);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(file.string(), RunOverrides{.out_dir = dir}, out, err), kExitSimulation);
  EXPECT_NE(err.str().find("(agent 2)"), std::string::npos) << err.str();
  EXPECT_NE(err.str().find("SafetyViolated"), std::string::npos) << err.str();
  EXPECT_FALSE(fs::exists(dir / "two_agent_headon.csv"));
}

TEST(ListScenarios, NamesBundled) {
  std::ostringstream out;
  EXPECT_EQ(cmd_list_scenarios(out), kExitOk);
  const auto text = out.str();
  EXPECT_NE(text.find("scenario1"), std::string::npos);
  EXPECT_NE(text.find("experiment_circle"), std::string::npos);
  EXPECT_NE(text.find("two_agent_headon"), std::string::npos);
  EXPECT_GE(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(Csv, HeaderMatchesGolden) {
  const auto s = *find_bundled("scenario1");
  const auto header = csv_header(4, SensingGraph(s.neighbors).edges());
  std::string line;
  for (std::size_t k = 0; k < header.size(); ++k) line += (k ? "," : "") + header[k];
  EXPECT_EQ(line + "\n", slurp(kSource / "tests" / "golden" / "scenario1_header.csv"));
  EXPECT_EQ(header.size(), 1u + 4 * 25 + 3 * 3 + 4 * 2);
}

TEST(Csv, HeaderDependsOnlyOnShape) {
  const auto a = csv_header(4, SensingGraph::chain(4).edges());
  const auto b = csv_header(4, SensingGraph::chain(4).edges());
  EXPECT_EQ(a, b);
  EXPECT_NE(a, csv_header(4, SensingGraph({{}, {1}, {2}, {2, 3}}).edges()));
  EXPECT_EQ(a.back(), "e4_3_minus_uc_dot_g");
}

TEST(Csv, SeventeenDigitsRoundTrip) {
  auto s = *find_bundled("scenario2");
  s.sim.duration = 0.5;
  const auto rec = run(to_sim_config(s));
  const auto text = to_csv(rec);
  std::istringstream in(text);
  std::string header, row;
  std::getline(in, header);
  for (int k = 0; k < 10; ++k) std::getline(in, row);
  // Ninth tick: t, then agent 1 px.. pz.
  std::istringstream cells(row);
  std::string cell;
  std::getline(cells, cell, ',');
  EXPECT_EQ(std::stod(cell), rec.ticks[9].t);
  for (int c = 0; c < 3; ++c) {
    std::getline(cells, cell, ',');
    EXPECT_EQ(std::stod(cell), rec.ticks[9].agents[0].p[c]);
  }
}
