#pragma once

// Closed-form contract design.
//
// solve_complete: the GCS knows every UAV's type, so only IR binds and each
// participating type is paid exactly its cost.
//
// solve_partial: the GCS knows the type distribution only. Rewards follow the
// information-rent recursion, sizes come from a virtual-cost water-filling
// and decreasing runs are bunched (ironed) until the size sequence is
// monotone.
//
// Both solvers share one scalar "water level" X. A participating type at rank
// k (descending cost) gets S_k = clamp(X * w_k - 1, 0, S_max) where w_k is a
// per-type weight: 1 / (T_k C_k) with complete information, N_k / (A_k T_k)
// with virtual costs A_k otherwise. In budget-exact mode X is solved so that
// the payments exhaust the budget; in closed-form mode the unclamped formula
// is applied once.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "honeygame/model.hpp"

namespace honeygame::solver {

enum class BudgetMode { kExact, kClosedForm };

struct SolverConfig {
  BudgetMode budget_mode = BudgetMode::kExact;
  double iron_tolerance = 1e-9;
  int max_iron_iters = 200;

  void validate() const;
};

/// Relaxed (monotonicity-free) partial-information optimum; per-type vectors
/// follow participating-set order.
struct RelaxedSolution {
  std::vector<double> sizes;
  double lambda = 0.0;  // budget multiplier, satisfaction / scalar
  double scalar = 0.0;  // water level X
  std::vector<double> virtual_costs;
  std::vector<double> cost_gaps;  // C_k - C_{k+1}; 0 for the last rank
};

/// A run of consecutive ranks sharing one size.
struct Bunch {
  std::size_t first = 0;
  std::size_t last = 0;  // inclusive
};

struct IronResult {
  std::vector<double> sizes;
  std::vector<Bunch> bunches;
  int merges = 0;
};

/// Notes produced while solving, e.g. why a menu came out all-zero.
struct Diagnostics {
  std::vector<std::string> notes;
  double scalar = 0.0;
  bool budget_exhausted = false;
};

ContractMenu solve_complete(const Population& pop, const GcsParams& params,
                            const SolverConfig& cfg = {}, Diagnostics* diag = nullptr);

/// Minimal feasible rewards for a monotone size sequence given in
/// participating-set order. Throws std::invalid_argument on non-monotone input.
std::vector<double> optimal_rewards(std::span<const double> sizes,
                                    std::span<const UavType> participants,
                                    const GcsParams& params);

/// Virtual cost of each rank: N_k C_k + (C_k - C_{k+1}) * sum_{l>k} N_l.
std::vector<double> virtual_costs(std::span<const UavType> participants);

RelaxedSolution solve_partial_relaxed(const Population& pop, const GcsParams& params,
                                      const SolverConfig& cfg = {});

/// Pool-adjacent-violators over clamped sizes. Each pooled run takes the
/// common size maximizing sum_l satisfaction * N_l / T_l * ln(1 + S) -
/// lambda * A_l * S on [0, S_max], found by ternary search. `initial` seeds
/// the partition (empty means singletons).
IronResult iron(std::span<const double> sizes, const RelaxedSolution& sol,
                std::span<const UavType> participants, const GcsParams& params,
                const SolverConfig& cfg, std::span<const Bunch> initial = {});

ContractMenu solve_partial(const Population& pop, const GcsParams& params,
                           const SolverConfig& cfg = {}, Diagnostics* diag = nullptr);

/// Reward proportional to size at the highest participating cost; each type
/// picks its best corner and sizes are scaled down to fit the budget.
ContractMenu linear_contract(const Population& pop, const GcsParams& params);

/// The partial-information item of the highest-cost type offered to everyone.
ContractMenu uniform_contract(const Population& pop, const GcsParams& params,
                              const SolverConfig& cfg = {});

/// Solves sum_b A_b * clamp(X * w_b - 1, 0, s_max) = target for X >= 0 over
/// a piecewise-linear, non-decreasing left side. Returns the smallest X
/// reaching the target, or the saturation point when the target is out of
/// reach (then `exhausted` is false).
double solve_water_level(std::span<const double> weights, std::span<const double> prices,
                         double s_max, double target, bool* exhausted = nullptr);

}  // namespace honeygame::solver
