#include "honeygame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace honeygame::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fill_level(double level, double weight, double s_max) {
  if (!(level > 0.0)) return 0.0;
  if (std::isinf(weight)) return s_max;
  return std::clamp(level * weight - 1.0, 0.0, s_max);
}

double deployment_total(std::span<const UavType> parts, const GcsParams& params) {
  double n = 0.0;
  for (const auto& t : parts) n += t.count;
  return params.deploy_cost * n;
}

double inverse_load(std::span<const UavType> parts) {
  double sum = 0.0;
  for (const auto& t : parts) sum += t.count / t.delay;
  return sum;
}

void note(Diagnostics* diag, std::string text) {
  if (diag) diag->notes.push_back(std::move(text));
}

void record_budget(Diagnostics* diag, double spent, const GcsParams& params, double scalar) {
  if (!diag) return;
  diag->scalar = scalar;
  diag->budget_exhausted = std::abs(spent - params.budget) <= 1e-9 * params.budget;
  if (!diag->budget_exhausted && spent < params.budget) {
    diag->notes.push_back("budget not exhausted: every participating size is saturated");
  }
}

double spend(std::span<const UavType> parts, std::span<const ContractItem> items) {
  double s = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) s += parts[k].count * items[k].reward;
  return s;
}

bool monotone(std::span<const double> sizes) {
  for (std::size_t k = 1; k < sizes.size(); ++k) {
    if (sizes[k] < sizes[k - 1]) return false;
  }
  return true;
}

struct Block {
  Bunch range;
  double value = 0.0;
};

/// Maximizes sum_l ( a_l ln(1 + S) - lambda A_l S ) over [0, s_max].
double bunch_optimum(std::span<const UavType> parts, std::span<const double> vcost,
                     const Bunch& b, double lambda, const GcsParams& params,
                     const SolverConfig& cfg) {
  double log_weight = 0.0;
  double linear_weight = 0.0;
  for (std::size_t l = b.first; l <= b.last; ++l) {
    log_weight += params.satisfaction * parts[l].count / parts[l].delay;
    linear_weight += vcost[l];
  }
  if (std::isinf(lambda)) return 0.0;
  auto objective = [&](double s) {
    return log_weight * std::log1p(s) - lambda * linear_weight * s;
  };
  double lo = 0.0;
  double hi = params.s_max;
  for (int it = 0; it < cfg.max_iron_iters && hi - lo > cfg.iron_tolerance; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (objective(m1) < objective(m2)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void SolverConfig::validate() const {
  if (!(iron_tolerance > 0.0)) throw std::invalid_argument("SolverConfig: iron_tolerance must be > 0");
  if (max_iron_iters < 1) throw std::invalid_argument("SolverConfig: max_iron_iters must be >= 1");
}

double solve_water_level(std::span<const double> weights, std::span<const double> prices,
                         double s_max, double target, bool* exhausted) {
  const std::size_t n = weights.size();
  auto spend_at = [&](double level) {
    double total = 0.0;
    for (std::size_t b = 0; b < n; ++b) total += prices[b] * fill_level(level, weights[b], s_max);
    return total;
  };

  std::vector<double> points;
  for (std::size_t b = 0; b < n; ++b) {
    if (std::isinf(weights[b]) || !(weights[b] > 0.0)) continue;
    points.push_back(1.0 / weights[b]);
    points.push_back((1.0 + s_max) / weights[b]);
  }
  std::sort(points.begin(), points.end());
  if (exhausted) *exhausted = true;
  if (points.empty()) {
    if (exhausted) *exhausted = target <= 0.0;
    return 1.0;
  }
  if (target <= 0.0) return points.front();

  double lo = 0.0;
  for (double hi : points) {
    if (spend_at(hi) < target) {
      lo = hi;
      continue;
    }
    // Spend is affine on [lo, hi]: solve over the types filling there.
    const double mid = 0.5 * (lo + hi);
    double slope = 0.0;
    double offset = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      if (std::isinf(weights[b]) || !(weights[b] > 0.0)) {
        offset += prices[b] * fill_level(mid, weights[b], s_max);
        continue;
      }
      const double raw = mid * weights[b] - 1.0;
      if (raw <= 0.0) continue;
      if (raw >= s_max) {
        offset += prices[b] * s_max;
      } else {
        slope += prices[b] * weights[b];
        offset -= prices[b];
      }
    }
    if (slope <= 0.0) return hi;
    return std::clamp((target - offset) / slope, lo, hi);
  }
  if (exhausted) *exhausted = false;
  return points.back();
}

ContractMenu solve_complete(const Population& pop, const GcsParams& params,
                            const SolverConfig& cfg, Diagnostics* diag) {
  params.validate();
  cfg.validate();
  const auto parts = participating_set(pop, params.t_max);
  if (parts.empty()) {
    note(diag, "no participating types: all-zero menu");
    return ContractMenu::zeros(pop, params.t_max);
  }
  const double target = params.budget - deployment_total(parts, params);
  if (target < 0.0) {
    note(diag, "budget below total deployment cost: all-zero menu");
    return ContractMenu::zeros(pop, params.t_max);
  }

  std::vector<double> weights;
  std::vector<double> prices;
  for (const auto& t : parts) {
    weights.push_back(t.marginal_cost > 0.0 ? 1.0 / (t.delay * t.marginal_cost) : kInf);
    prices.push_back(t.count * t.marginal_cost);
  }

  double level = 0.0;
  if (cfg.budget_mode == BudgetMode::kExact) {
    level = solve_water_level(weights, prices, params.s_max, target);
  } else {
    double cost_mass = 0.0;
    for (double p : prices) cost_mass += p;
    level = (target + cost_mass) / inverse_load(parts);
  }

  std::vector<ContractItem> items;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const double s = fill_level(level, weights[k], params.s_max);
    items.push_back({s, parts[k].marginal_cost * s + params.deploy_cost});
  }
  record_budget(diag, spend(parts, items), params, level);
  return menu_from_items(pop, params.t_max, parts, items);
}

std::vector<double> optimal_rewards(std::span<const double> sizes,
                                    std::span<const UavType> participants,
                                    const GcsParams& params) {
  if (sizes.size() != participants.size()) {
    throw std::invalid_argument("optimal_rewards: size/participant count mismatch");
  }
  std::vector<double> rewards(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (sizes[k] < 0.0 || sizes[k] > params.s_max + kFeasibilityTolerance) {
      throw std::invalid_argument("optimal_rewards: size outside [0, s_max]");
    }
    if (k == 0) {
      rewards[k] = participants[k].marginal_cost * sizes[k] + params.deploy_cost;
      continue;
    }
    if (sizes[k] < sizes[k - 1] - kFeasibilityTolerance) {
      throw std::invalid_argument("optimal_rewards: sizes must be non-decreasing; iron first");
    }
    rewards[k] = rewards[k - 1] + participants[k].marginal_cost * (sizes[k] - sizes[k - 1]);
  }
  return rewards;
}

std::vector<double> virtual_costs(std::span<const UavType> participants) {
  const std::size_t n = participants.size();
  std::vector<double> out(n);
  double tail = 0.0;  // sum of counts strictly after rank k
  for (std::size_t k = n; k-- > 0;) {
    const double gap = k + 1 < n ? participants[k].marginal_cost - participants[k + 1].marginal_cost
                                 : 0.0;
    out[k] = participants[k].count * participants[k].marginal_cost + gap * tail;
    tail += participants[k].count;
  }
  return out;
}

RelaxedSolution solve_partial_relaxed(const Population& pop, const GcsParams& params,
                                      const SolverConfig& cfg) {
  params.validate();
  cfg.validate();
  const auto parts = participating_set(pop, params.t_max);
  RelaxedSolution sol;
  const std::size_t n = parts.size();
  sol.virtual_costs = virtual_costs(parts);
  sol.cost_gaps.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    sol.cost_gaps[k] = parts[k].marginal_cost - parts[k + 1].marginal_cost;
  }
  sol.sizes.assign(n, 0.0);
  sol.lambda = kInf;
  if (n == 0) return sol;

  const double target = params.budget - deployment_total(parts, params);
  if (target < 0.0) return sol;

  std::vector<double> weights(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = sol.virtual_costs[k];
    weights[k] = a > 0.0 ? parts[k].count / (a * parts[k].delay) : kInf;
  }
  if (cfg.budget_mode == BudgetMode::kExact) {
    sol.scalar = solve_water_level(weights, sol.virtual_costs, params.s_max, target);
  } else {
    double mass = 0.0;
    for (double a : sol.virtual_costs) mass += a;
    sol.scalar = (target + mass) / inverse_load(parts);
  }
  sol.lambda = sol.scalar > 0.0 ? params.satisfaction / sol.scalar : kInf;
  for (std::size_t k = 0; k < n; ++k) sol.sizes[k] = fill_level(sol.scalar, weights[k], params.s_max);
  return sol;
}

IronResult iron(std::span<const double> sizes, const RelaxedSolution& sol,
                std::span<const UavType> participants, const GcsParams& params,
                const SolverConfig& cfg, std::span<const Bunch> initial) {
  IronResult out;
  const std::size_t n = sizes.size();
  std::vector<Bunch> seed(initial.begin(), initial.end());
  if (seed.empty()) {
    for (std::size_t k = 0; k < n; ++k) seed.push_back({k, k});
  }

  std::vector<Block> stack;
  for (const auto& b : seed) {
    Block blk{b, sizes[b.first]};
    if (b.last > b.first) {
      blk.value = bunch_optimum(participants, sol.virtual_costs, b, sol.lambda, params, cfg);
    }
    stack.push_back(blk);
    while (stack.size() >= 2 &&
           stack[stack.size() - 2].value > stack.back().value + cfg.iron_tolerance) {
      const Bunch merged{stack[stack.size() - 2].range.first, stack.back().range.last};
      stack.pop_back();
      stack.back().range = merged;
      stack.back().value =
          bunch_optimum(participants, sol.virtual_costs, merged, sol.lambda, params, cfg);
      ++out.merges;
    }
  }

  out.sizes.assign(n, 0.0);
  for (const auto& blk : stack) {
    out.bunches.push_back(blk.range);
    for (std::size_t k = blk.range.first; k <= blk.range.last; ++k) out.sizes[k] = blk.value;
  }
  return out;
}

ContractMenu solve_partial(const Population& pop, const GcsParams& params,
                           const SolverConfig& cfg, Diagnostics* diag) {
  const auto parts = participating_set(pop, params.t_max);
  if (parts.empty()) {
    note(diag, "no participating types: all-zero menu");
    return ContractMenu::zeros(pop, params.t_max);
  }
  if (params.budget < deployment_total(parts, params)) {
    note(diag, "budget below total deployment cost: all-zero menu");
    return ContractMenu::zeros(pop, params.t_max);
  }

  RelaxedSolution sol = solve_partial_relaxed(pop, params, cfg);
  const std::size_t n = parts.size();
  std::vector<double> sizes = sol.sizes;
  std::vector<Bunch> bunches;

  if (cfg.budget_mode == BudgetMode::kClosedForm) {
    sizes = iron(sizes, sol, parts, params, cfg).sizes;
  } else {
    const double target = params.budget - deployment_total(parts, params);
    for (std::size_t pass = 0; pass <= n; ++pass) {
      auto ironed = iron(sizes, sol, parts, params, cfg, bunches);
      bunches = std::move(ironed.bunches);

      // Re-solve the water level with each bunch acting as one size variable.
      std::vector<double> weights;
      std::vector<double> prices;
      for (const auto& b : bunches) {
        double load = 0.0;
        double price = 0.0;
        for (std::size_t k = b.first; k <= b.last; ++k) {
          load += parts[k].count / parts[k].delay;
          price += sol.virtual_costs[k];
        }
        prices.push_back(price);
        weights.push_back(price > 0.0 ? load / price : kInf);
      }
      sol.scalar = solve_water_level(weights, prices, params.s_max, target);
      sol.lambda = sol.scalar > 0.0 ? params.satisfaction / sol.scalar : kInf;
      for (std::size_t b = 0; b < bunches.size(); ++b) {
        const double s = fill_level(sol.scalar, weights[b], params.s_max);
        for (std::size_t k = bunches[b].first; k <= bunches[b].last; ++k) sizes[k] = s;
      }
      if (monotone(sizes)) break;
    }
  }

  const auto rewards = optimal_rewards(sizes, parts, params);
  std::vector<ContractItem> items;
  for (std::size_t k = 0; k < n; ++k) items.push_back({sizes[k], rewards[k]});
  record_budget(diag, spend(parts, items), params, sol.scalar);
  return menu_from_items(pop, params.t_max, parts, items);
}

ContractMenu linear_contract(const Population& pop, const GcsParams& params) {
  params.validate();
  const auto parts = participating_set(pop, params.t_max);
  if (parts.empty()) return ContractMenu::zeros(pop, params.t_max);

  const double unit_price = parts.front().marginal_cost;
  std::vector<ContractItem> items;
  double paid = 0.0;
  for (const auto& t : parts) {
    const double s = t.marginal_cost < unit_price ? params.s_max : 0.0;
    items.push_back({s, unit_price * s});
    paid += t.count * unit_price * s;
  }
  if (paid > params.budget) {
    const double scale = params.budget / paid;
    for (auto& item : items) {
      item.vdd_size *= scale;
      item.reward = unit_price * item.vdd_size;
    }
  }
  return menu_from_items(pop, params.t_max, parts, items);
}

ContractMenu uniform_contract(const Population& pop, const GcsParams& params,
                              const SolverConfig& cfg) {
  const auto parts = participating_set(pop, params.t_max);
  if (parts.empty()) return ContractMenu::zeros(pop, params.t_max);
  const ContractMenu partial = solve_partial(pop, params, cfg);
  const ContractItem first = partial.at(parts.front().index);
  std::vector<ContractItem> items(parts.size(), first);
  return menu_from_items(pop, params.t_max, parts, items);
}

}  // namespace honeygame::solver
