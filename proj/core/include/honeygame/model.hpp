#pragma once

// Domain types of the honeypot game between a ground control station (GCS)
// and typed UAVs, plus the utility functions and the feasibility / fairness
// predicates shared by every solver.

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace honeygame {

/// Absolute slack used when comparing IR / IC / budget constraints.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// One UAV type: marginal VDD cost C_j, delivery delay T_j and head count N_j.
struct UavType {
  int index = 0;
  double marginal_cost = 0.0;  // utility units per byte
  std::optional<std::pair<double, double>> cost_split;  // (creation+transmission, privacy)
  double delay = 1.0;  // seconds
  int count = 1;

  /// Throws std::invalid_argument when an invariant does not hold.
  void validate() const;
};

class Population {
 public:
  Population() = default;
  explicit Population(std::vector<UavType> types);

  const std::vector<UavType>& types() const noexcept { return types_; }
  int total_count() const noexcept { return total_count_; }
  std::size_t size() const noexcept { return types_.size(); }
  bool empty() const noexcept { return types_.empty(); }

  const UavType& by_index(int index) const;

  /// Merges identical (C, T) types and orders them by descending marginal
  /// cost, smaller delay first on cost ties.
  Population canonicalized() const;
  bool is_canonical() const;

 private:
  std::vector<UavType> types_;
  int total_count_ = 0;
};

struct ContractItem {
  double vdd_size = 0.0;  // bytes
  double reward = 0.0;

  friend bool operator==(const ContractItem&, const ContractItem&) = default;
};

/// The GCS offer: a delivery deadline plus one (S, R) item per type index.
struct ContractMenu {
  double t_max = 0.0;
  std::map<int, ContractItem> items;

  const ContractItem& at(int type_index) const;
  static ContractMenu zeros(const Population& pop, double t_max);
};

struct GcsParams {
  double satisfaction = 6.0;       // varpi
  double deploy_cost = 1.0;        // C_0
  double budget = 460.0;           // Omega
  double s_max = 300.0;            // bytes
  double r_max = 480.0;            // reward cap of the learning GCS
  double vdd_requirement = 800.0;  // D_G, bytes
  double t_max = 2.0;              // seconds, deadline offered with every menu

  void validate() const;
};

/// Result of auditing a menu. Per-type entries follow participating-set order.
struct FeasibilityReport {
  std::vector<int> participants;  // type indices, participating-set order
  std::vector<bool> ir_ok;
  std::vector<std::vector<bool>> ic_ok;  // [own][other]; diagonal is true
  bool budget_ok = true;
  bool monotone_ok = true;  // joint monotonicity of S and R
  bool type1_ir_ok = true;
  bool adjacent_ok = true;  // C_j dS <= dR <= C_{j-1} dS
  bool nonparticipants_zero = true;
  double worst_violation = 0.0;  // most negative slack, 0 when nothing is violated

  bool all_ir() const;
  bool all_ic() const;
  /// IR and IC by direct pairwise enumeration.
  bool direct_ok() const { return all_ir() && all_ic(); }
  /// The monotonicity / type-1 IR / adjacent-sandwich characterization.
  bool structural_ok() const {
    return monotone_ok && type1_ir_ok && adjacent_ok && nonparticipants_zero;
  }
  bool feasible() const { return direct_ok() && structural_ok() && budget_ok; }
};

struct FairnessReport {
  bool participation = true;
  bool reward = true;
  bool fair() const { return participation && reward; }
};

/// Types able to deliver within t_max, in descending marginal cost order.
/// Position k in the result is the type's rank k+1 in the closed-form solvers.
std::vector<UavType> participating_set(const Population& pop, double t_max);

double uav_utility(const UavType& t, const ContractItem& item, double t_max,
                   const GcsParams& params);

/// GCS satisfaction minus payments, summed over all types.
double gcs_utility(const ContractMenu& menu, const Population& pop,
                   const GcsParams& params);

/// Contribution of a single type to gcs_utility.
double gcs_utility_term(const UavType& t, const ContractItem& item, double t_max,
                        const GcsParams& params);

/// GCS utility plus the utilities of participating UAVs (weighted by count).
double social_surplus(const ContractMenu& menu, const Population& pop,
                      const GcsParams& params);

/// The reward-free closed form of the social surplus; algebraically equal to
/// social_surplus().
double social_surplus_closed_form(const ContractMenu& menu, const Population& pop,
                                  const GcsParams& params);

FeasibilityReport check_feasibility(const ContractMenu& menu, const Population& pop,
                                    const GcsParams& params);

FairnessReport check_fairness(const ContractMenu& menu, const Population& pop,
                              const GcsParams& params);

/// zeta = (sum of participating S_j) / D_G.
double defensive_effectiveness(const ContractMenu& menu, const Population& pop,
                               const GcsParams& params);

/// Builds a menu from one item per participant (participating-set order).
/// Types merged during canonicalization share their representative's item;
/// everyone else gets (0, 0).
ContractMenu menu_from_items(const Population& pop, double t_max,
                             std::span<const UavType> participants,
                             std::span<const ContractItem> items);

/// Total reward paid to participating types, counting every UAV.
double total_payment(const ContractMenu& menu, const Population& pop);

}  // namespace honeygame
