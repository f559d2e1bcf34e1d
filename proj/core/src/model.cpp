#include "honeygame/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace honeygame {

namespace {

bool participates(const UavType& t, double t_max) { return t.delay <= t_max; }

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void UavType::validate() const {
  require(index > 0, "UavType: index must be positive");
  require(std::isfinite(marginal_cost) && marginal_cost >= 0.0,
          "UavType: marginal_cost must be finite and >= 0");
  require(std::isfinite(delay) && delay > 0.0, "UavType: delay must be finite and > 0");
  require(count > 0, "UavType: count must be positive");
  if (cost_split) {
    const double sum = cost_split->first + cost_split->second;
    require(std::abs(sum - marginal_cost) <= 1e-12 * std::max(1.0, marginal_cost),
            "UavType: cost_split must sum to marginal_cost");
  }
}

Population::Population(std::vector<UavType> types) : types_(std::move(types)) {
  for (const auto& t : types_) {
    t.validate();
    total_count_ += t.count;
  }
  for (std::size_t a = 0; a < types_.size(); ++a) {
    for (std::size_t b = a + 1; b < types_.size(); ++b) {
      require(types_[a].index != types_[b].index, "Population: duplicate type index");
    }
  }
}

const UavType& Population::by_index(int index) const {
  for (const auto& t : types_) {
    if (t.index == index) return t;
  }
  throw std::out_of_range("Population: no type with index " + std::to_string(index));
}

Population Population::canonicalized() const {
  std::vector<UavType> merged;
  for (const auto& t : types_) {
    auto same = std::find_if(merged.begin(), merged.end(), [&](const UavType& m) {
      return m.marginal_cost == t.marginal_cost && m.delay == t.delay;
    });
    if (same == merged.end()) {
      merged.push_back(t);
    } else {
      same->count += t.count;
      same->index = std::min(same->index, t.index);
    }
  }
  std::stable_sort(merged.begin(), merged.end(), [](const UavType& a, const UavType& b) {
    if (a.marginal_cost != b.marginal_cost) return a.marginal_cost > b.marginal_cost;
    return a.delay < b.delay;
  });
  return Population(std::move(merged));
}

bool Population::is_canonical() const {
  for (std::size_t k = 1; k < types_.size(); ++k) {
    const auto& prev = types_[k - 1];
    const auto& cur = types_[k];
    if (prev.marginal_cost < cur.marginal_cost) return false;
    if (prev.marginal_cost == cur.marginal_cost && prev.delay >= cur.delay) return false;
  }
  return true;
}

const ContractItem& ContractMenu::at(int type_index) const {
  auto it = items.find(type_index);
  if (it == items.end()) {
    throw std::out_of_range("ContractMenu: no item for type " + std::to_string(type_index));
  }
  return it->second;
}

ContractMenu ContractMenu::zeros(const Population& pop, double t_max) {
  ContractMenu menu;
  menu.t_max = t_max;
  for (const auto& t : pop.types()) menu.items[t.index] = ContractItem{};
  return menu;
}

void GcsParams::validate() const {
  auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(finite_pos(satisfaction), "GcsParams: satisfaction must be > 0");
  require(std::isfinite(deploy_cost) && deploy_cost >= 0.0, "GcsParams: deploy_cost must be >= 0");
  require(finite_pos(budget), "GcsParams: budget must be > 0");
  require(finite_pos(s_max), "GcsParams: s_max must be > 0");
  require(finite_pos(r_max), "GcsParams: r_max must be > 0");
  require(finite_pos(vdd_requirement), "GcsParams: vdd_requirement must be > 0");
  require(finite_pos(t_max), "GcsParams: t_max must be > 0");
}

bool FeasibilityReport::all_ir() const {
  return std::all_of(ir_ok.begin(), ir_ok.end(), [](bool b) { return b; });
}

bool FeasibilityReport::all_ic() const {
  for (const auto& row : ic_ok) {
    if (!std::all_of(row.begin(), row.end(), [](bool b) { return b; })) return false;
  }
  return true;
}

std::vector<UavType> participating_set(const Population& pop, double t_max) {
  const Population canon = pop.is_canonical() ? pop : pop.canonicalized();
  std::vector<UavType> out;
  for (const auto& t : canon.types()) {
    if (participates(t, t_max)) out.push_back(t);
  }
  return out;
}

double uav_utility(const UavType& t, const ContractItem& item, double t_max,
                   const GcsParams& params) {
  const double cost = t.marginal_cost * item.vdd_size + params.deploy_cost;
  return participates(t, t_max) ? item.reward - cost : -cost;
}

double gcs_utility_term(const UavType& t, const ContractItem& item, double t_max,
                        const GcsParams& params) {
  if (!participates(t, t_max)) return 0.0;
  const double n = static_cast<double>(t.count);
  return params.satisfaction * (n / t.delay) * std::log1p(item.vdd_size) - n * item.reward;
}

double gcs_utility(const ContractMenu& menu, const Population& pop, const GcsParams& params) {
  double total = 0.0;
  for (const auto& t : pop.types()) {
    total += gcs_utility_term(t, menu.at(t.index), menu.t_max, params);
  }
  return total;
}

double social_surplus(const ContractMenu& menu, const Population& pop, const GcsParams& params) {
  double total = gcs_utility(menu, pop, params);
  for (const auto& t : pop.types()) {
    if (!participates(t, menu.t_max)) continue;
    total += t.count * uav_utility(t, menu.at(t.index), menu.t_max, params);
  }
  return total;
}

double social_surplus_closed_form(const ContractMenu& menu, const Population& pop,
                                  const GcsParams& params) {
  double total = 0.0;
  for (const auto& t : pop.types()) {
    if (!participates(t, menu.t_max)) continue;
    const auto& item = menu.at(t.index);
    const double n = static_cast<double>(t.count);
    total += params.satisfaction * (n / t.delay) * std::log1p(item.vdd_size) -
             n * (t.marginal_cost * item.vdd_size + params.deploy_cost);
  }
  return total;
}

double total_payment(const ContractMenu& menu, const Population& pop) {
  double paid = 0.0;
  for (const auto& t : pop.types()) {
    if (participates(t, menu.t_max)) paid += t.count * menu.at(t.index).reward;
  }
  return paid;
}

FeasibilityReport check_feasibility(const ContractMenu& menu, const Population& pop,
                                    const GcsParams& params) {
  constexpr double tol = kFeasibilityTolerance;
  FeasibilityReport rep;
  double worst = 0.0;
  auto slack = [&](double s) {
    worst = std::min(worst, s);
    return s >= -tol;
  };

  const auto parts = participating_set(pop, menu.t_max);
  const std::size_t n = parts.size();
  std::vector<ContractItem> items;
  items.reserve(n);
  for (const auto& t : parts) {
    rep.participants.push_back(t.index);
    items.push_back(menu.at(t.index));
  }

  // Direct enumeration.
  rep.ir_ok.assign(n, true);
  rep.ic_ok.assign(n, std::vector<bool>(n, true));
  for (std::size_t j = 0; j < n; ++j) {
    const double own = uav_utility(parts[j], items[j], menu.t_max, params);
    rep.ir_ok[j] = slack(own);
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      rep.ic_ok[j][k] = slack(own - uav_utility(parts[j], items[k], menu.t_max, params));
    }
  }

  rep.budget_ok = slack(params.budget - total_payment(menu, pop));

  // Structural characterization.
  if (n > 0) {
    rep.monotone_ok = slack(items[0].vdd_size) && slack(items[0].reward);
    rep.type1_ir_ok = slack(items[0].reward - parts[0].marginal_cost * items[0].vdd_size -
                            params.deploy_cost);
  }
  for (std::size_t j = 1; j < n; ++j) {
    const double ds = items[j].vdd_size - items[j - 1].vdd_size;
    const double dr = items[j].reward - items[j - 1].reward;
    const bool mono = slack(ds) && slack(dr);
    rep.monotone_ok = rep.monotone_ok && mono;
    const bool lower = slack(dr - parts[j].marginal_cost * ds);
    const bool upper = slack(parts[j - 1].marginal_cost * ds - dr);
    rep.adjacent_ok = rep.adjacent_ok && lower && upper;
  }
  for (const auto& t : pop.types()) {
    if (participates(t, menu.t_max)) continue;
    const auto& item = menu.at(t.index);
    const bool zero = slack(-std::abs(item.vdd_size)) && slack(-std::abs(item.reward));
    rep.nonparticipants_zero = rep.nonparticipants_zero && zero;
  }

  rep.worst_violation = worst;
  return rep;
}

FairnessReport check_fairness(const ContractMenu& menu, const Population& pop,
                              const GcsParams& params) {
  constexpr double tol = kFeasibilityTolerance;
  FairnessReport rep;
  const auto parts = participating_set(pop, menu.t_max);

  for (const auto& t : parts) {
    const double own = uav_utility(t, menu.at(t.index), menu.t_max, params);
    if (own < -tol) rep.participation = false;
    for (const auto& [idx, item] : menu.items) {
      if (own < uav_utility(t, item, menu.t_max, params) - tol) rep.participation = false;
    }
  }

  for (const auto& a : parts) {
    const auto& ia = menu.at(a.index);
    for (const auto& b : parts) {
      const auto& ib = menu.at(b.index);
      if (ia.vdd_size < ib.vdd_size - tol && ia.reward > ib.reward + tol) rep.reward = false;
      if (std::abs(ia.vdd_size - ib.vdd_size) <= tol && std::abs(ia.reward - ib.reward) > tol) {
        rep.reward = false;
      }
    }
  }
  for (const auto& t : pop.types()) {
    if (!participates(t, menu.t_max) && menu.at(t.index).reward > tol) rep.reward = false;
  }
  return rep;
}

ContractMenu menu_from_items(const Population& pop, double t_max,
                             std::span<const UavType> participants,
                             std::span<const ContractItem> items) {
  require(participants.size() == items.size(), "menu_from_items: one item per participant");
  ContractMenu menu = ContractMenu::zeros(pop, t_max);
  for (const auto& t : pop.types()) {
    if (!participates(t, t_max)) continue;
    for (std::size_t k = 0; k < participants.size(); ++k) {
      if (participants[k].marginal_cost == t.marginal_cost && participants[k].delay == t.delay) {
        menu.items[t.index] = items[k];
        break;
      }
    }
  }
  return menu;
}

double defensive_effectiveness(const ContractMenu& menu, const Population& pop,
                               const GcsParams& params) {
  double contributed = 0.0;
  for (const auto& t : pop.types()) {
    if (participates(t, menu.t_max)) contributed += menu.at(t.index).vdd_size;
  }
  return contributed / params.vdd_requirement;
}

}  // namespace honeygame
