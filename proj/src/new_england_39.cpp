#include <algorithm>
#include <array>

#include "isnr/network.hpp"

namespace isnr {

namespace {

// 46 branches of the New England 39-bus system (transformers included).
constexpr std::array<std::array<int, 2>, 46> kBranches{{
    {1, 2},   {1, 39},  {2, 3},   {2, 25},  {2, 30},  {3, 4},   {3, 18},  {4, 5},
    {4, 14},  {5, 6},   {5, 8},   {6, 7},   {6, 11},  {6, 31},  {7, 8},   {8, 9},
    {9, 39},  {10, 11}, {10, 13}, {10, 32}, {11, 12}, {12, 13}, {13, 14}, {14, 15},
    {15, 16}, {16, 17}, {16, 19}, {16, 21}, {16, 24}, {17, 18}, {17, 27}, {19, 20},
    {19, 33}, {20, 34}, {21, 22}, {22, 23}, {22, 35}, {23, 24}, {23, 36}, {25, 26},
    {25, 37}, {26, 27}, {26, 28}, {26, 29}, {28, 29}, {29, 38},
}};

// Critical buses from the black-start stage: {bus, minute}.
constexpr std::array<std::array<int, 2>, 31> kCriticalBuses{{
    {1, 25},  {2, 20},  {3, 25},  {4, 30},  {5, 35},  {6, 40},  {10, 45}, {13, 40},
    {14, 35}, {16, 40}, {17, 35}, {18, 30}, {19, 45}, {20, 60}, {21, 45}, {22, 50},
    {23, 50}, {24, 45}, {25, 25}, {26, 30}, {29, 35}, {30, 15}, {31, 45}, {32, 50},
    {33, 50}, {34, 65}, {35, 55}, {36, 55}, {37, 30}, {38, 40}, {39, 30},
}};

// Critical branches: {from, to, minute}.
constexpr std::array<std::array<int, 3>, 30> kCriticalBranches{{
    {1, 2, 25},   {1, 39, 30},  {2, 3, 25},   {2, 25, 25},  {2, 30, 20},  {3, 4, 30},
    {3, 18, 30},  {4, 5, 35},   {4, 14, 35},  {5, 6, 40},   {6, 31, 45},  {10, 13, 45},
    {10, 32, 50}, {13, 14, 40}, {16, 17, 40}, {16, 19, 45}, {16, 21, 45}, {16, 24, 45},
    {17, 18, 35}, {19, 20, 60}, {19, 33, 50}, {20, 34, 65}, {21, 22, 50}, {22, 35, 55},
    {23, 24, 50}, {23, 36, 55}, {25, 26, 30}, {25, 37, 30}, {26, 29, 35}, {29, 38, 40},
}};

constexpr int kStepMinutes = 5;
constexpr int kHorizonSteps = 14;

}  // namespace

TestCase new_england_39() {
  std::vector<BusId> buses;
  for (int b = 1; b <= 39; ++b) buses.push_back(BusId{b});
  std::vector<Branch> branches;
  for (const auto& [f, t] : kBranches) branches.push_back({BusId{f}, BusId{t}});
  PowerNetwork net = PowerNetwork::build(std::move(buses), std::move(branches));

  std::map<BusId, int> bus_steps;
  for (const auto& [bus, minute] : kCriticalBuses) bus_steps[BusId{bus}] = minute / kStepMinutes;
  std::map<BranchKey, int> branch_steps;
  for (const auto& [f, t, minute] : kCriticalBranches)
    branch_steps[BranchKey::of(BusId{f}, BusId{t})] = minute / kStepMinutes;

  BlackStartSchedule sched = BlackStartSchedule::build(net, kStepMinutes, kHorizonSteps,
                                                       std::move(bus_steps), std::move(branch_steps));
  return {std::move(net), std::move(sched)};
}

std::vector<BranchKey> new_england_39_skeleton_branches() {
  std::vector<BranchKey> out;
  for (const auto& [f, t, _] : kCriticalBranches) out.push_back(BranchKey::of(BusId{f}, BusId{t}));
  out.push_back(BranchKey::of(BusId{9}, BusId{39}));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace isnr
