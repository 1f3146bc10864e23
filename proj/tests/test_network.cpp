#include <doctest.h>

#include <random>

#include "isnr/error.hpp"
#include "isnr/network.hpp"
#include "support.hpp"

using namespace isnr;

namespace {

std::vector<Branch> pairs(std::initializer_list<std::pair<int, int>> list) {
  std::vector<Branch> out;
  for (auto [a, b] : list) out.push_back({BusId{a}, BusId{b}});
  return out;
}

std::vector<BusId> ids(std::initializer_list<int> list) {
  std::vector<BusId> out;
  for (int b : list) out.push_back(BusId{b});
  return out;
}

}  // namespace

TEST_SUITE("network_model") {

TEST_CASE("smallest connected network has symmetric incidence") {
  const PowerNetwork net = parse_network(R"({"buses": [1, 2], "branches": [[1, 2]]})");
  CHECK(net.bus_count() == 2);
  CHECK(net.branch_count() == 1);
  REQUIRE(net.incident_branches(net.index_of(BusId{1})).size() == 1);
  REQUIRE(net.incident_branches(net.index_of(BusId{2})).size() == 1);
  CHECK(net.incident_branches(0)[0] == 0);
  CHECK(net.incident_branches(1)[0] == 0);
}

TEST_CASE("parse preserves file order") {
  const PowerNetwork net = parse_network(R"({"buses": [7, 3, 5], "branches": [[5, 3], [7, 5]]})");
  CHECK(net.buses()[0] == BusId{7});
  CHECK(net.buses()[2] == BusId{5});
  CHECK(net.branches()[0] == Branch{BusId{5}, BusId{3}});
  CHECK(net.branches()[0].key() == BranchKey{BusId{3}, BusId{5}});
}

TEST_CASE("case file errors") {
  SUBCASE("syntax error reports line and column") {
    try {
      parse_network("{\"buses\": [1, 2],\n \"branches\": [[1, 2]}");
      FAIL("expected an error");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 2") != std::string::npos);
      CHECK(msg.find("column") != std::string::npos);
    }
  }
  SUBCASE("duplicate bus") {
    CHECK_THROWS_WITH_AS(PowerNetwork::build(ids({1, 2, 1}), pairs({{1, 2}})),
                         doctest::Contains("duplicate bus id 1"), InputError);
  }
  SUBCASE("dangling endpoint") {
    CHECK_THROWS_WITH_AS(PowerNetwork::build(ids({1, 2}), pairs({{1, 2}, {2, 3}})),
                         doctest::Contains("unknown bus 3"), InputError);
  }
  SUBCASE("self-loop") {
    CHECK_THROWS_WITH_AS(PowerNetwork::build(ids({1, 2}), pairs({{1, 2}, {2, 2}})),
                         doctest::Contains("self-loop"), InputError);
  }
  SUBCASE("parallel branch in either orientation") {
    CHECK_THROWS_WITH_AS(PowerNetwork::build(ids({1, 2}), pairs({{1, 2}, {2, 1}})),
                         doctest::Contains("duplicate branch 1-2"), InputError);
  }
  SUBCASE("disconnected graph") {
    CHECK_THROWS_WITH_AS(PowerNetwork::build(ids({1, 2, 3, 4}), pairs({{1, 2}, {3, 4}})),
                         doctest::Contains("disconnected"), InputError);
  }
  SUBCASE("missing field") {
    CHECK_THROWS_WITH_AS(parse_network(R"({"buses": [1]})"), doctest::Contains("branches"),
                         InputError);
  }
  SUBCASE("no buses") { CHECK_THROWS_AS(parse_network(R"({"buses": [], "branches": []})"), InputError); }
}

TEST_CASE("39-bus fixture") {
  const TestCase tc = new_england_39();
  CHECK(tc.network.bus_count() == 39);
  // Edge count read off the one-line diagram, transformers included.
  CHECK(tc.network.branch_count() == 46);
  CHECK(tc.schedule.critical_buses().size() == 31);
  CHECK(tc.schedule.critical_branches().size() == 30);
  CHECK_FALSE(tc.schedule.is_critical(BusId{9}));
  CHECK_FALSE(tc.schedule.is_critical(BranchKey::of(BusId{9}, BusId{39})));
  CHECK(tc.schedule.step_of(BusId{30}) == 3);
  CHECK(tc.schedule.step_of(BranchKey::of(BusId{20}, BusId{34})) == 13);
  CHECK(tc.schedule.step_minutes() == 5);
  CHECK(tc.schedule.horizon_steps() == 14);

  SUBCASE("every skeleton branch exists in the topology") {
    const auto skeleton = new_england_39_skeleton_branches();
    CHECK(skeleton.size() == 31);
    for (BranchKey k : skeleton) CHECK(tc.network.contains(k));
  }
  SUBCASE("critical schedule obeys the energization rules") {
    CHECK(validate_schedule(tc.schedule, tc.network).empty());
  }
}

TEST_CASE("schedule parsing") {
  const PowerNetwork net = parse_network(R"({"buses": [1, 2, 3], "branches": [[1, 2], [2, 3]]})");

  SUBCASE("minutes convert to steps") {
    const auto s = parse_schedule(R"({"step_minutes": 5, "horizon_steps": 4,
        "critical_buses": [{"bus": 1, "minute": 5}, {"bus": 2, "minute": 10}],
        "critical_branches": [{"from": 2, "to": 1, "minute": 10}]})",
                                  net);
    CHECK(s.step_of(BusId{1}) == 1);
    CHECK(s.step_of(BusId{2}) == 2);
    CHECK(s.step_of(BranchKey::of(BusId{1}, BusId{2})) == 2);
    CHECK_FALSE(s.energized(BusId{2}, 1));
    CHECK(s.energized(BusId{2}, 2));
    CHECK(s.energized(BusId{2}, 4));
    CHECK(s.latest_step() == 2);
  }
  SUBCASE("empty critical sets") {
    const auto s = parse_schedule(
        R"({"step_minutes": 5, "horizon_steps": 3, "critical_buses": [], "critical_branches": []})", net);
    CHECK(s.critical_buses().empty());
    CHECK(s.critical_branches().empty());
  }
  SUBCASE("minute not a multiple of the step") {
    CHECK_THROWS_WITH_AS(parse_schedule(R"({"step_minutes": 5, "horizon_steps": 4,
        "critical_buses": [{"bus": 1, "minute": 17}], "critical_branches": []})",
                                        net),
                         doctest::Contains("not a multiple"), InputError);
  }
  SUBCASE("unknown bus") {
    CHECK_THROWS_WITH_AS(parse_schedule(R"({"step_minutes": 5, "horizon_steps": 4,
        "critical_buses": [{"bus": 9, "minute": 5}], "critical_branches": []})",
                                        net),
                         doctest::Contains("unknown bus 9"), InputError);
  }
  SUBCASE("unknown branch") {
    CHECK_THROWS_WITH_AS(parse_schedule(R"({"step_minutes": 5, "horizon_steps": 4,
        "critical_buses": [], "critical_branches": [{"from": 1, "to": 3, "minute": 5}]})",
                                        net),
                         doctest::Contains("unknown branch 1-3"), InputError);
  }
  SUBCASE("step beyond horizon") {
    CHECK_THROWS_WITH_AS(parse_schedule(R"({"step_minutes": 5, "horizon_steps": 2,
        "critical_buses": [{"bus": 1, "minute": 15}], "critical_branches": []})",
                                        net),
                         doctest::Contains("beyond horizon"), InputError);
  }
  SUBCASE("blackout step zero is not schedulable") {
    CHECK_THROWS_AS(parse_schedule(R"({"step_minutes": 5, "horizon_steps": 2,
        "critical_buses": [{"bus": 1, "minute": 0}], "critical_branches": []})",
                                   net),
                    InputError);
  }
  SUBCASE("horizon override must cover the schedule") {
    const auto s = parse_schedule(R"({"step_minutes": 5, "horizon_steps": 4,
        "critical_buses": [{"bus": 1, "minute": 15}], "critical_branches": []})",
                                  net);
    CHECK(s.with_horizon(net, 3).horizon_steps() == 3);
    CHECK_THROWS_AS(s.with_horizon(net, 2), InputError);
  }
}

TEST_CASE("validate_schedule") {
  const PowerNetwork net = parse_network(R"({"buses": [1, 2, 3], "branches": [[1, 2], [2, 3]]})");
  const BranchKey b12 = BranchKey::of(BusId{1}, BusId{2});

  SUBCASE("branch with both terminals at its own step has no live terminal before it") {
    const auto s = BlackStartSchedule::build(net, 5, 4, {{BusId{1}, 1}, {BusId{2}, 1}}, {{b12, 1}});
    const auto v = validate_schedule(s, net);
    REQUIRE(v.size() == 1);
    CHECK(v[0].equation == "(11)");
    CHECK(v[0].element == "branch 1-2");
  }
  SUBCASE("branch before its terminal bus") {
    const auto s = BlackStartSchedule::build(net, 5, 8, {{BusId{1}, 1}, {BusId{2}, 6}}, {{b12, 5}});
    const auto v = validate_schedule(s, net);
    REQUIRE(v.size() == 1);
    CHECK(v[0].equation == "(10)");
  }
  SUBCASE("valid path energization") {
    const auto s = BlackStartSchedule::build(net, 5, 4, {{BusId{1}, 1}, {BusId{2}, 2}}, {{b12, 2}});
    CHECK(validate_schedule(s, net).empty());
  }
}

TEST_CASE("random valid schedules validate cleanly") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const PowerNetwork net = testing::random_network(rng, 3 + trial % 8, trial % 4);
    const BlackStartSchedule s = testing::random_schedule(rng, net, 2 + trial % 5, 0.6);
    CHECK(validate_schedule(s, net).empty());
  }
}

TEST_CASE("critical trajectories are step functions with one transition") {
  const TestCase tc = new_england_39();
  for (const auto& [bus, step] : tc.schedule.critical_buses()) {
    int transitions = 0;
    for (int t = 1; t <= tc.schedule.horizon_steps(); ++t) {
      const bool now = tc.schedule.energized(bus, t);
      const bool before = tc.schedule.energized(bus, t - 1);
      CHECK(now >= before);
      transitions += now != before;
    }
    CHECK(transitions == 1);
    CHECK_FALSE(tc.schedule.energized(bus, 0));
  }
}

TEST_CASE("parse and serialize round-trip") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const PowerNetwork net = testing::random_network(rng, 2 + trial % 9, trial % 5);
    const PowerNetwork again = parse_network(serialize_network(net));
    CHECK(again == net);
    const BlackStartSchedule s = testing::random_schedule(rng, net, 1 + trial % 6, 0.5);
    CHECK(parse_schedule(serialize_schedule(s), net) == s);
  }
  const TestCase tc = new_england_39();
  CHECK(parse_network(serialize_network(tc.network)) == tc.network);
  CHECK(parse_schedule(serialize_schedule(tc.schedule), tc.network) == tc.schedule);

  const auto skeleton = new_england_39_skeleton_branches();
  CHECK(parse_branch_list(serialize_branch_list(skeleton), tc.network) == skeleton);
}

}  // TEST_SUITE
