#pragma once

#include <vector>

#include "honeygame/model.hpp"

namespace honeygame::testing {

struct TypeSpec {
  double cost;
  double delay;
  int count = 1;
};

inline Population make_population(const std::vector<TypeSpec>& specs) {
  std::vector<UavType> types;
  int index = 1;
  for (const auto& s : specs) {
    UavType t;
    t.index = index++;
    t.marginal_cost = s.cost;
    t.delay = s.delay;
    t.count = s.count;
    types.push_back(t);
  }
  return Population(std::move(types));
}

/// Two types, C = (0.5, 0.25), T = 1, budget 10, deployment cost 1.
inline Population worked_population() { return make_population({{0.5, 1.0}, {0.25, 1.0}}); }

inline GcsParams worked_params() {
  GcsParams p;
  p.budget = 10.0;
  p.deploy_cost = 1.0;
  p.t_max = 2.0;
  return p;
}

}  // namespace honeygame::testing
