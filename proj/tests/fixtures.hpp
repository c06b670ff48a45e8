// In-memory versions of the bundled soccer example, shared by tests.
#ifndef MIXEDTRAILS_TESTS_FIXTURES_HPP
#define MIXEDTRAILS_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "mixedtrails/core.hpp"

namespace fixtures {

inline constexpr int kP1 = 0, kP2 = 1, kP3 = 2, kP4 = 3, kGoal = 4;

struct Soccer {
  mixedtrails::TransitionDataset dataset;
  std::vector<int> halftime;  // 0 = first half, 1 = second half
};

inline Soccer make_soccer() {
  using mixedtrails::StateIndex;
  std::vector<std::pair<std::pair<int, int>, int>> spec = {
      {{kP1, kP3}, 0}, {{kP2, kP4}, 0}, {{kP3, kGoal}, 0}, {{kP4, kGoal}, 0}};
  std::vector<std::pair<std::pair<int, int>, int>> second = {
      {{kP1, kP2}, 1}, {{kP2, kP1}, 1}};
  std::vector<mixedtrails::Transition> transitions;
  std::vector<int> halftime;
  auto add = [&](int src, int dst, int half, int copies) {
    for (int c = 0; c < copies; ++c) {
      transitions.push_back({static_cast<StateIndex>(src), static_cast<StateIndex>(dst), -1, -1});
      halftime.push_back(half);
    }
  };
  add(kP1, kP3, 0, 20);
  add(kP2, kP4, 0, 20);
  add(kP3, kGoal, 0, 20);
  add(kP4, kGoal, 0, 20);
  add(kP1, kP2, 1, 20);
  add(kP2, kP1, 1, 20);
  add(kP3, kP1, 1, 10);
  add(kP3, kP4, 1, 10);
  add(kP4, kP2, 1, 10);
  add(kP4, kP3, 1, 10);
  mixedtrails::StateSpace space({"p1", "p2", "p3", "p4", "goal"});
  return {mixedtrails::TransitionDataset(std::move(space), std::move(transitions)),
          std::move(halftime)};
}

inline mixedtrails::BeliefMatrix soccer_uniform() {
  mixedtrails::BeliefMatrix phi("uniform", 5);
  for (int i = kP1; i <= kP4; ++i)
    for (int j = kP1; j <= kGoal; ++j)
      if (i != j) phi.add_weight(i, j, 1.0);
  phi.normalize();
  return phi;
}

inline mixedtrails::BeliefMatrix soccer_offense() {
  mixedtrails::BeliefMatrix phi("offense", 5);
  phi.add_weight(kP1, kP3, 3.0);
  phi.add_weight(kP1, kP4, 1.0);
  phi.add_weight(kP2, kP3, 1.0);
  phi.add_weight(kP2, kP4, 3.0);
  phi.add_weight(kP3, kGoal, 1.0);
  phi.add_weight(kP4, kGoal, 1.0);
  phi.normalize();
  return phi;
}

inline mixedtrails::BeliefMatrix soccer_defense() {
  mixedtrails::BeliefMatrix phi("defense", 5);
  phi.add_weight(kP1, kP2, 1.0);
  phi.add_weight(kP2, kP1, 1.0);
  phi.add_weight(kP3, kP1, 1.0);
  phi.add_weight(kP3, kP4, 3.0);
  phi.add_weight(kP4, kP2, 1.0);
  phi.add_weight(kP4, kP3, 3.0);
  phi.normalize();
  return phi;
}

inline mixedtrails::GroupAssignmentProbabilities halftime_gamma(const Soccer& soccer) {
  std::vector<double> gamma;
  gamma.reserve(soccer.halftime.size() * 2);
  for (int h : soccer.halftime) {
    gamma.push_back(h == 0 ? 1.0 : 0.0);
    gamma.push_back(h == 1 ? 1.0 : 0.0);
  }
  return {{"1st", "2nd"}, std::move(gamma)};
}

}  // namespace fixtures

#endif
