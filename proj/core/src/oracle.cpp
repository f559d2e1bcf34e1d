#include "honeygame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace honeygame::oracle {

namespace {

constexpr double kTol = kFeasibilityTolerance;

std::vector<UavType> guarded_participants(const Population& pop, const GcsParams& params,
                                          const GridSpec& grid) {
  params.validate();
  grid.validate();
  if (grid.s_max > params.s_max + kTol) {
    throw std::invalid_argument("oracle: grid extends beyond s_max");
  }
  auto parts = participating_set(pop, params.t_max);
  if (parts.size() > kMaxParticipants) {
    throw std::invalid_argument("oracle: at most 3 participating types are supported");
  }
  return parts;
}

double objective(std::span<const UavType> parts, std::span<const ContractItem> items,
                 const GcsParams& params) {
  double u = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    u += gcs_utility_term(parts[k], items[k], params.t_max, params);
  }
  return u;
}

bool budget_feasible(std::span<const UavType> parts, std::span<const ContractItem> items,
                     const GcsParams& params) {
  double paid = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) paid += parts[k].count * items[k].reward;
  return paid <= params.budget + kTol;
}

bool ir_ic_hold(std::span<const UavType> parts, std::span<const ContractItem> items,
                const GcsParams& params) {
  for (std::size_t j = 0; j < parts.size(); ++j) {
    const double own = uav_utility(parts[j], items[j], params.t_max, params);
    if (own < -kTol) return false;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (k != j && own < uav_utility(parts[j], items[k], params.t_max, params) - kTol) {
        return false;
      }
    }
  }
  return true;
}

/// Visits every index tuple of length n over [0, points), optionally
/// restricted to non-decreasing tuples.
void enumerate(std::size_t n, std::size_t points, bool nondecreasing,
               const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> idx(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == n) {
      visit(idx);
      return;
    }
    const std::size_t start = nondecreasing && depth > 0 ? idx[depth - 1] : 0;
    for (std::size_t k = start; k < points; ++k) {
      idx[depth] = k;
      rec(depth + 1);
    }
  };
  rec(0);
}

}  // namespace

void GridSpec::validate() const {
  if (!(s_step > 0.0) || !(s_max > 0.0)) {
    throw std::invalid_argument("GridSpec: s_step and s_max must be > 0");
  }
  const double ratio = s_max / s_step;
  if (std::abs(ratio - std::round(ratio)) > 1e-9) {
    throw std::invalid_argument("GridSpec: s_max must be an integer multiple of s_step");
  }
}

std::size_t GridSpec::points() const {
  return static_cast<std::size_t>(std::llround(s_max / s_step)) + 1;
}

double GridSpec::value(std::size_t k) const {
  return std::min(s_max, static_cast<double>(k) * s_step);
}

GridSpec default_grid(std::size_t participants, double s_max) {
  return {participants <= 2 ? 1.0 : 5.0, s_max};
}

OracleResult grid_search_complete(const Population& pop, const GcsParams& params,
                                  const GridSpec& grid) {
  const auto parts = guarded_participants(pop, params, grid);
  OracleResult best;
  best.menu = ContractMenu::zeros(pop, params.t_max);
  std::vector<ContractItem> items(parts.size());
  bool found = false;
  enumerate(parts.size(), grid.points(), false, [&](const std::vector<std::size_t>& idx) {
    ++best.evaluated;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const double s = grid.value(idx[k]);
      items[k] = {s, parts[k].marginal_cost * s + params.deploy_cost};
    }
    if (!budget_feasible(parts, items, params)) return;
    ++best.feasible;
    const double u = objective(parts, items, params);
    if (!found || u > best.objective) {
      found = true;
      best.objective = u;
      best.menu = menu_from_items(pop, params.t_max, parts, items);
    }
  });
  if (!found) best.objective = 0.0;
  return best;
}

OracleResult grid_search_partial(const Population& pop, const GcsParams& params,
                                 const GridSpec& grid) {
  const auto parts = guarded_participants(pop, params, grid);
  OracleResult best;
  best.menu = ContractMenu::zeros(pop, params.t_max);
  std::vector<ContractItem> items(parts.size());
  bool found = false;
  enumerate(parts.size(), grid.points(), true, [&](const std::vector<std::size_t>& idx) {
    ++best.evaluated;
    // Minimal rewards for this size profile (binding downward constraints).
    double reward = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const double s = grid.value(idx[k]);
      reward = k == 0 ? parts[0].marginal_cost * s + params.deploy_cost
                      : reward + parts[k].marginal_cost * (s - items[k - 1].vdd_size);
      items[k] = {s, reward};
    }
    if (!budget_feasible(parts, items, params) || !ir_ic_hold(parts, items, params)) return;
    ++best.feasible;
    const double u = objective(parts, items, params);
    if (!found || u > best.objective) {
      found = true;
      best.objective = u;
      best.menu = menu_from_items(pop, params.t_max, parts, items);
    }
  });
  if (!found) best.objective = 0.0;
  return best;
}

double grid_slack(const ContractMenu& menu, const Population& pop, const GcsParams& params,
                  double s_step) {
  double slack = 0.0;
  for (const auto& t : participating_set(pop, menu.t_max)) {
    const double s = menu.at(t.index).vdd_size;
    slack += params.satisfaction * t.count / t.delay * s_step / (1.0 + std::max(s - s_step, 0.0));
  }
  return slack;
}

Instance random_instance(const InstanceSpec& spec, RandomStream& rng) {
  if (spec.min_types < 1 || spec.max_types < spec.min_types) {
    throw std::invalid_argument("InstanceSpec: need 1 <= min_types <= max_types");
  }
  const std::size_t n =
      spec.min_types + static_cast<std::size_t>(rng.below(spec.max_types - spec.min_types + 1));
  Instance inst;
  std::vector<UavType> types;
  for (std::size_t k = 0; k < n; ++k) {
    UavType t;
    t.index = static_cast<int>(k) + 1;
    t.marginal_cost = rng.uniform(spec.cost_min, spec.cost_max);
    t.delay = rng.uniform(spec.delay_min, spec.delay_max);
    t.count = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.max_count)));
    types.push_back(t);
  }
  inst.pop = Population(std::move(types)).canonicalized();
  inst.params.t_max = 2.0 * spec.delay_max;

  const auto parts = participating_set(inst.pop, inst.params.t_max);
  double deploy = 0.0;
  for (const auto& t : parts) deploy += t.count * inst.params.deploy_cost;

  // Spend of both closed forms at water level X, ignoring bunching.
  const double varpi = inst.params.satisfaction;
  const double s_max = inst.params.s_max;
  double tail = 0.0;
  double complete_spend = 0.0;
  double partial_spend = 0.0;
  double partial_saturation = 0.0;
  for (std::size_t k = parts.size(); k-- > 0;) {
    const auto& t = parts[k];
    const double gap = k + 1 < parts.size() ? t.marginal_cost - parts[k + 1].marginal_cost : 0.0;
    const double a = t.count * t.marginal_cost + gap * tail;
    tail += t.count;
    const double s_c = std::clamp(varpi / (t.delay * t.marginal_cost) - 1.0, 0.0, s_max);
    const double s_p = std::clamp(varpi * t.count / (a * t.delay) - 1.0, 0.0, s_max);
    complete_spend += t.count * t.marginal_cost * s_c;
    partial_spend += a * s_p;
    partial_saturation += a * s_max;
  }
  const double headroom = spec.exhaustion_optimal ? std::min(complete_spend, partial_spend)
                                                  : partial_saturation;
  inst.params.budget = deploy + std::max(headroom, 1e-6) * rng.uniform(0.02, 1.0);
  return inst;
}

}  // namespace honeygame::oracle
