#pragma once

// Exhaustive grid search over VDD sizes, used as ground truth for the
// closed-form solvers on small instances (at most three participating types).

#include <cstddef>

#include "honeygame/model.hpp"
#include "honeygame/rng.hpp"

namespace honeygame::oracle {

inline constexpr std::size_t kMaxParticipants = 3;

struct GridSpec {
  double s_step = 1.0;  // bytes
  double s_max = 300.0;

  /// Throws unless s_max / s_step is an integer within 1e-9.
  void validate() const;
  std::size_t points() const;
  double value(std::size_t k) const;
};

/// 1 byte for up to two participants, 5 bytes for three.
GridSpec default_grid(std::size_t participants, double s_max);

struct OracleResult {
  ContractMenu menu;
  double objective = 0.0;  // gcs_utility of menu
  std::size_t evaluated = 0;
  std::size_t feasible = 0;
};

/// Every size tuple on the grid with cost-covering rewards R = C S + C_0;
/// keeps the best budget-feasible one. All-zero menu when none is feasible.
OracleResult grid_search_complete(const Population& pop, const GcsParams& params,
                                  const GridSpec& grid);

/// Every non-decreasing size tuple with minimal information-rent rewards;
/// keeps the best menu passing direct IR, pairwise IC and the budget.
OracleResult grid_search_partial(const Population& pop, const GcsParams& params,
                                 const GridSpec& grid);

/// Upper bound on the GCS utility lost by rounding each participating size
/// of `menu` down to the grid: sum of satisfaction * N / T * step / (1 + S - step).
double grid_slack(const ContractMenu& menu, const Population& pop, const GcsParams& params,
                  double s_step);

struct InstanceSpec {
  std::size_t min_types = 2;
  std::size_t max_types = 3;
  double cost_min = 0.05;
  double cost_max = 1.0;
  double delay_min = 0.5;
  double delay_max = 1.5;
  int max_count = 3;
  /// Keep the budget low enough that the marginal satisfaction of money stays
  /// at least 1 (water level X <= satisfaction), where spending the whole
  /// budget is optimal. Otherwise draw it anywhere up to the saturation spend.
  bool exhaustion_optimal = true;
};

struct Instance {
  Population pop;
  GcsParams params;
};

/// Random population with distinct costs, every type participating, and a
/// budget strictly above the total deployment cost.
Instance random_instance(const InstanceSpec& spec, RandomStream& rng);

}  // namespace honeygame::oracle
