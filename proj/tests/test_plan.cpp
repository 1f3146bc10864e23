#include <doctest.h>

#include <cstdio>
#include <random>
#include <sstream>

#include "isnr/error.hpp"
#include "isnr/formulation.hpp"
#include "isnr/plan.hpp"
#include "support.hpp"

using namespace isnr;

namespace {

RestorationPlan path_plan() {
  const PowerNetwork net = parse_network(R"({"buses": [1, 2, 3], "branches": [[1, 2], [2, 3]]})");
  IsnrConfig cfg;
  cfg.horizon_steps = 4;
  cfg.beta = 150;
  cfg.gamma = 0.7;
  cfg.quality_threshold = 200;
  return plan_from_starts(net, TopologyData::of(net), cfg, {{BusId{1}, 1}, {BusId{2}, 2}, {BusId{3}, 3}},
                          {{BranchKey::of(BusId{1}, BusId{2}), 2}, {BranchKey::of(BusId{2}, BusId{3}), 3}},
                          2);
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream cs(line);
    std::string cell;
    while (std::getline(cs, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("plan_report") {

TEST_CASE("trajectory values") {
  const RestorationPlan plan = path_plan();
  REQUIRE(plan.trajectory.size() == 4);
  CHECK(plan.trajectory[0].importance == doctest::Approx(0.5));
  CHECK(plan.trajectory[1].distance == 1.0);
  CHECK(plan.trajectory[2].distance == 4.0);
  CHECK(plan.trajectory[2].energized_buses == 3);
  CHECK(plan.trajectory[2].quality == doctest::Approx(150 * 2.0 + 0.7 * 4));
  CHECK_FALSE(plan.trajectory[0].qualified);
  CHECK(plan.trajectory[1].qualified);
  CHECK(plan.total_importance() == doctest::Approx(2.0));
  CHECK(plan.unqualified_steps() == 1);
}

TEST_CASE("tables") {
  const std::string expected =
      "bus,start_minute,importance_degree\n"
      "1, 5, 0.500\n"
      "2, 10, 1.000\n"
      "3, 15, 0.500\n"
      "\n"
      "branch,start_minute\n"
      "1-2, 10\n"
      "2-3, 15\n";
  CHECK(render_tables(path_plan()) == expected);

  RestorationPlan empty;
  empty.step_minutes = 5;
  CHECK(render_tables(empty) == "bus,start_minute,importance_degree\n\nbranch,start_minute\n");
  CHECK(render_summary(empty).find("none within 0 minutes") != std::string::npos);

  const std::string summary = render_summary(path_plan());
  CHECK(summary.find("first qualified minute: 10 (step 2)") != std::string::npos);
  CHECK(summary.find("skeleton buses: 3") != std::string::npos);
  CHECK(summary.find("skeleton branches: 2") != std::string::npos);
  CHECK(summary.find("total importance degree: 2.000") != std::string::npos);
}

TEST_CASE("CSV trajectory satisfies the quality identity") {
  const TestCase tc = new_england_39();
  const auto topo = TopologyData::of(tc.network);
  IsnrConfig cfg;
  const RestorationPlan plan = plan_from_starts(tc.network, topo, cfg, tc.schedule.critical_buses(),
                                                tc.schedule.critical_branches(), std::nullopt);
  const auto rows = csv_rows(export_plan(plan, PlanFormat::Csv));
  REQUIRE(rows.size() == 15);
  CHECK(rows[0] == std::vector<std::string>{"step", "minute", "importance_term", "distance_term",
                                            "quality_index", "qualified"});
  double prev = -1.0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    REQUIRE(rows[r].size() == 6);
    CHECK(std::stoi(rows[r][1]) == 5 * std::stoi(rows[r][0]));
    const double imp = std::stod(rows[r][2]), dist = std::stod(rows[r][3]), q = std::stod(rows[r][4]);
    CHECK(q == doctest::Approx(150 * imp + 0.7 * dist).epsilon(1e-12));
    CHECK(q >= prev);
    prev = q;
  }
}

TEST_CASE("JSON export round-trips losslessly") {
  RestorationPlan plan = path_plan();
  plan.trajectory[1].solver_distance = 1.0000000001;
  plan.trajectory[1].solver_quality = 1.0 / 3.0;
  CHECK(import_plan(export_plan(plan, PlanFormat::Json)) == plan);

  RestorationPlan never = path_plan();
  never.first_qualified_step.reset();
  for (auto& p : never.trajectory) p.qualified = false;
  CHECK(import_plan(export_plan(never, PlanFormat::Json)) == never);

  std::mt19937 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const PowerNetwork net = testing::random_network(rng, 3 + trial % 6, trial % 3);
    const BlackStartSchedule s = testing::random_schedule(rng, net, 2 + trial % 4, 1.0);
    IsnrConfig cfg;
    cfg.horizon_steps = s.horizon_steps();
    std::uniform_real_distribution<double> w(0, 3);
    cfg.beta = w(rng);
    cfg.gamma = w(rng);
    const RestorationPlan p = plan_from_starts(net, TopologyData::of(net), cfg, s.critical_buses(),
                                               s.critical_branches(), std::nullopt);
    CHECK(import_plan(export_plan(p, PlanFormat::Json)) == p);
  }
}

TEST_CASE("malformed plan files") {
  CHECK_THROWS_AS(import_plan("{"), InputError);
  CHECK_THROWS_AS(import_plan(R"({"step_minutes": 5})"), InputError);
  std::string text = export_plan(path_plan(), PlanFormat::Json);
  text.replace(text.find("\"horizon_steps\": 4"), 18, "\"horizon_steps\": 5");
  CHECK_THROWS_WITH_AS(import_plan(text), doctest::Contains("horizon"), InputError);
}

TEST_CASE("comparison") {
  const RestorationPlan a = path_plan();
  SUBCASE("a plan against itself") {
    const PlanComparison cmp = compare_plans(a, a);
    CHECK(cmp.quality_a == cmp.quality_b);
    CHECK(cmp.steps == std::vector<int>{1, 2, 3, 4});
    const auto rows = csv_rows(comparison_csv(cmp));
    REQUIRE(rows.size() == 5);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      CHECK(rows[r][2] == rows[r][3]);
      CHECK(rows[r][4] == rows[r][5]);
      CHECK(rows[r][6] == rows[r][7]);
    }
    const std::string summary = comparison_summary(cmp, "isnr", "baseline");
    CHECK(summary.find("isnr,10,3,2,2.000") != std::string::npos);
    CHECK(summary.find("baseline,10,3,2,2.000") != std::string::npos);
  }
  SUBCASE("mismatched horizon or step length") {
    RestorationPlan b = a;
    b.horizon_steps = 5;
    b.trajectory.push_back(b.trajectory.back());
    CHECK_THROWS_WITH_AS(compare_plans(a, b), doctest::Contains("horizon"), InputError);
    RestorationPlan c = a;
    c.step_minutes = 10;
    CHECK_THROWS_WITH_AS(compare_plans(a, c), doctest::Contains("step"), InputError);
  }
}

}  // TEST_SUITE
