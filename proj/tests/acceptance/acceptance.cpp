// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "honeygame/channel.hpp"
#include "honeygame/experiments.hpp"
#include "honeygame/learn.hpp"
#include "honeygame/model.hpp"
#include "honeygame/oracle.hpp"
#include "honeygame/rng.hpp"
#include "honeygame/scenario.hpp"
#include "honeygame/solver.hpp"

using namespace honeygame;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double rel_tol(double scale) { return 1e-9 * std::max(1.0, std::abs(scale)); }

std::vector<double> participant_utilities(const ContractMenu& m, const Population& pop,
                                          const GcsParams& params) {
  std::vector<double> u;
  for (const auto& t : participating_set(pop, params.t_max)) {
    u.push_back(uav_utility(t, m.at(t.index), m.t_max, params));
  }
  return u;
}

Population reference_population() { return build_population(Scenario{}); }

Outcome oracle_equivalence() {
  Outcome out;
  RandomStream rng(1, "acceptance/oracle");
  const auto t0 = Clock::now();
  int checked = 0;
  double worst_gap = std::numeric_limits<double>::infinity();
  for (const auto [types, count] : {std::pair<std::size_t, int>{2, 200}, {3, 50}}) {
    oracle::InstanceSpec spec;
    spec.min_types = spec.max_types = types;
    for (int k = 0; k < count; ++k) {
      const auto inst = oracle::random_instance(spec, rng);
      const auto grid = oracle::default_grid(types, inst.params.s_max);
      const auto complete = solver::solve_complete(inst.pop, inst.params);
      const auto partial = solver::solve_partial(inst.pop, inst.params);
      const double bc = oracle::grid_search_complete(inst.pop, inst.params, grid).objective;
      const double bp = oracle::grid_search_partial(inst.pop, inst.params, grid).objective;
      const double oc = gcs_utility(complete, inst.pop, inst.params);
      const double op = gcs_utility(partial, inst.pop, inst.params);
      const double sc = oracle::grid_slack(complete, inst.pop, inst.params, grid.s_step);
      const double sp = oracle::grid_slack(partial, inst.pop, inst.params, grid.s_step);
      worst_gap = std::min({worst_gap, oc - (bc - sc), op - (bp - sp)});
      if (oc < bc - sc - rel_tol(bc) || op < bp - sp - rel_tol(bp)) out.pass = false;
      ++checked;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 300.0) out.pass = false;
  out.detail = std::to_string(checked) + " instances, min margin " + harness::format_number(worst_gap) +
               ", " + harness::format_number(secs) + " s";
  return out;
}

/// Feasibility suite plus the information-rent ordering on the same menus.
std::pair<Outcome, Outcome> feasibility_and_rent_order() {
  Outcome feas;
  Outcome order;
  RandomStream rng(2, "acceptance/feasibility");
  int budget_checked = 0;
  double worst_budget = 0.0;
  double worst_order = 0.0;
  for (int k = 0; k < 10000; ++k) {
    oracle::InstanceSpec spec;
    spec.min_types = 1;
    spec.max_types = 10;
    spec.exhaustion_optimal = false;
    const auto inst = oracle::random_instance(spec, rng);
    const auto menu = solver::solve_partial(inst.pop, inst.params);
    const auto rep = check_feasibility(menu, inst.pop, inst.params);
    if (!rep.feasible() || !rep.structural_ok()) feas.pass = false;

    const auto parts = participating_set(inst.pop, inst.params.t_max);
    const bool saturated = std::all_of(parts.begin(), parts.end(), [&](const UavType& t) {
      return menu.at(t.index).vdd_size == inst.params.s_max;
    });
    if (!saturated) {
      const double rel = std::abs(total_payment(menu, inst.pop) - inst.params.budget) /
                         inst.params.budget;
      worst_budget = std::max(worst_budget, rel);
      if (rel > 1e-9) feas.pass = false;
      ++budget_checked;
    }

    const auto u = participant_utilities(menu, inst.pop, inst.params);
    if (!u.empty()) {
      worst_order = std::max(worst_order, std::abs(u.front()));
      if (std::abs(u.front()) > rel_tol(inst.params.budget)) order.pass = false;
    }
    for (std::size_t j = 1; j < u.size(); ++j) {
      worst_order = std::max(worst_order, u[j - 1] - u[j]);
      if (u[j] < u[j - 1] - rel_tol(u[j - 1])) order.pass = false;
    }
  }
  feas.detail = "10000 populations, budget equality checked on " + std::to_string(budget_checked) +
                ", worst relative gap " + harness::format_number(worst_budget);
  order.detail = "10000 menus, worst violation " + harness::format_number(worst_order);
  return {feas, order};
}

Outcome truthful_selection() {
  Outcome out;
  const auto t0 = Clock::now();
  const Scenario s;
  const auto pop = reference_population();
  const auto menu = solver::solve_partial(pop, s.gcs, s.solver);
  const auto parts = participating_set(pop, s.gcs.t_max);
  int strict = 0;
  for (const auto& t : parts) {
    const double own = uav_utility(t, menu.at(t.index), menu.t_max, s.gcs);
    double best = own;
    bool unique = true;
    for (const auto& other : parts) {
      if (other.index == t.index) continue;
      const double u = uav_utility(t, menu.at(other.index), menu.t_max, s.gcs);
      best = std::max(best, u);
      if (u >= own - rel_tol(own)) unique = false;
    }
    if (own < -rel_tol(own) || own < best - rel_tol(best)) out.pass = false;
    strict += unique;
  }
  const double secs = seconds_since(t0);
  if (secs >= 1.0) out.pass = false;
  out.detail = std::to_string(parts.size()) + "x" + std::to_string(parts.size()) + " matrix, " +
               std::to_string(strict) + " rows with a unique maximum (binding adjacent IC ties the next-lower item)";
  return out;
}

Outcome complete_zero_rent() {
  Outcome out;
  RandomStream rng(4, "acceptance/zero-rent");
  double worst = 0.0;
  auto check = [&](const Population& pop, const GcsParams& params) {
    const auto menu = solver::solve_complete(pop, params);
    for (double u : participant_utilities(menu, pop, params)) {
      worst = std::max(worst, std::abs(u));
      if (std::abs(u) > 1e-9) out.pass = false;
    }
    const double g = gcs_utility(menu, pop, params);
    const double ss = social_surplus(menu, pop, params);
    worst = std::max(worst, std::abs(g - ss));
    if (std::abs(g - ss) > 1e-9 * std::max(1.0, std::abs(g))) out.pass = false;
  };
  check(reference_population(), GcsParams{});
  for (int k = 0; k < 1000; ++k) {
    oracle::InstanceSpec spec;
    spec.max_types = 10;
    spec.exhaustion_optimal = false;
    const auto inst = oracle::random_instance(spec, rng);
    check(inst.pop, inst.params);
  }
  out.detail = "reference + 1000 random populations, worst deviation " + harness::format_number(worst);
  return out;
}

Outcome monotone_shapes() {
  Outcome out;
  const Scenario s;
  const auto pop = reference_population();
  const auto menu = solver::solve_partial(pop, s.gcs, s.solver);
  auto parts = participating_set(pop, s.gcs.t_max);
  std::sort(parts.begin(), parts.end(),
            [](const UavType& a, const UavType& b) { return a.marginal_cost < b.marginal_cost; });
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const auto& lo = menu.at(parts[k - 1].index);
    const auto& hi = menu.at(parts[k].index);
    if (hi.vdd_size > lo.vdd_size || hi.reward > lo.reward) out.pass = false;
  }
  out.detail = std::to_string(parts.size()) + " types, S from " +
               harness::format_number(menu.at(parts.front().index).vdd_size) + " to " +
               harness::format_number(menu.at(parts.back().index).vdd_size);
  return out;
}

Outcome scheme_ranking() {
  Outcome out;
  int instances = 0;
  auto rank = [&](const Population& pop, const GcsParams& params) {
    const double uc = gcs_utility(solver::solve_complete(pop, params), pop, params);
    const double up = gcs_utility(solver::solve_partial(pop, params), pop, params);
    const double uu = gcs_utility(solver::uniform_contract(pop, params), pop, params);
    if (uc < up - rel_tol(uc) || up < uu - rel_tol(up)) out.pass = false;
    ++instances;
  };
  rank(reference_population(), GcsParams{});
  RandomStream rng(6, "acceptance/ranking");
  for (int k = 0; k < 1000; ++k) {
    oracle::InstanceSpec spec;
    spec.max_types = 10;
    const auto inst = oracle::random_instance(spec, rng);
    rank(inst.pop, inst.params);
  }

  const Scenario s;
  const auto points = harness::zeta_sweep(s);
  auto zeta = [&](int n, const std::string& tag, harness::Scheme sc) {
    for (const auto& p : points) {
      if (p.uav_count == n && p.budget_tag == tag && p.scheme == sc) return p.zeta;
    }
    throw std::logic_error("missing fig7 point");
  };
  using harness::Scheme;
  for (int n : harness::kFig7Counts) {
    for (const char* tag : {"omega1", "omega2"}) {
      const double zp = zeta(n, tag, Scheme::kPartial);
      if (zp < zeta(n, tag, Scheme::kLinear) - 1e-12 || zp < zeta(n, tag, Scheme::kUniform) - 1e-12) {
        out.pass = false;
      }
    }
    for (Scheme sc : harness::kAllSchemes) {
      if (zeta(n, "omega1", sc) < zeta(n, "omega2", sc) - 1e-12) out.pass = false;
    }
  }
  out.detail = std::to_string(instances) + " utility rankings, " + std::to_string(points.size()) +
               " fig7 points";
  return out;
}

double stdev_tail(const std::vector<double>& v, std::size_t n) {
  const auto first = v.end() - static_cast<std::ptrdiff_t>(n);
  const double mean = std::accumulate(first, v.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (auto it = first; it != v.end(); ++it) ss += (*it - mean) * (*it - mean);
  return std::sqrt(ss / static_cast<double>(n));
}

double mean_tail(const std::vector<double>& v, std::size_t n) {
  return std::accumulate(v.end() - static_cast<std::ptrdiff_t>(n), v.end(), 0.0) /
         static_cast<double>(n);
}

Outcome phc_convergence() {
  Outcome out;
  const auto t0 = Clock::now();
  const Scenario s;
  PopulationSpec spec = s.population;
  spec.types.clear();
  spec.type_count = 1;
  RandomStream pop_rng(s.seed, "population");
  const auto pop = generate_population(spec, s.gcs, s.channel, pop_rng);

  learn::LearnConfig hot = s.learner;
  hot.episodes = 2000;
  learn::LearnConfig cold = hot;
  cold.hotboot_runs = 0;
  const std::size_t tail = static_cast<std::size_t>(hot.episodes) / 10;
  const double s_band = 0.02 * s.gcs.s_max;
  const double r_band = 0.02 * s.gcs.r_max;

  const int seeds = 30;
  int stable = 0;
  int faster = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    const auto h = learn::run_dynamic_game(pop, s.gcs, hot, static_cast<std::uint64_t>(seed));
    const auto c = learn::run_dynamic_game(pop, s.gcs, cold, static_cast<std::uint64_t>(seed));
    auto series = [](const learn::GameResult& r, double learn::EpisodeRecord::*field) {
      std::vector<double> v;
      for (const auto& rec : r.logs.front().records) v.push_back(rec.*field);
      return v;
    };
    using R = learn::EpisodeRecord;
    if (stdev_tail(series(h, &R::vdd_size), tail) < s_band &&
        stdev_tail(series(h, &R::reward), tail) < r_band) {
      ++stable;
    }
    bool quicker = true;
    for (auto field : {&R::gcs_utility, &R::uav_utility}) {
      const auto hs = series(h, field);
      const auto cs = series(c, field);
      const auto hi = learn::settling_index(hs, mean_tail(hs, tail), 50, 0.05);
      const auto ci = learn::settling_index(cs, mean_tail(cs, tail), 50, 0.05);
      if (!(hi < ci)) quicker = false;
    }
    faster += quicker;
  }
  const double secs = seconds_since(t0);
  if (stable * 10 < seeds * 8 || faster * 10 < seeds * 7 || secs >= 120.0) out.pass = false;
  out.detail = "stable " + std::to_string(stable) + "/" + std::to_string(seeds) +
               " (need 24), hotboot faster " + std::to_string(faster) + "/" +
               std::to_string(seeds) + " (need 21), " + harness::format_number(secs) + " s";
  return out;
}

Outcome channel_sanity() {
  Outcome out;
  const channel::ChannelParams p;
  constexpr double deg = std::numbers::pi / 180.0;
  const double at12 = channel::los_probability(12.0 * deg, p);
  if (std::abs(at12 - 1.0 / 13.0) > 1e-12) out.pass = false;
  RandomStream rng(9, "acceptance/channel");
  for (int k = 0; k < 1000; ++k) {
    const double pl = channel::los_probability(rng.uniform(-90.0, 90.0) * deg, p);
    if (std::abs(pl + (1.0 - pl) - 1.0) > 1e-12 || pl < 0.0 || pl > 1.0) out.pass = false;
  }
  channel::MobilityConfig cfg;
  int steps = 0;
  for (int k = 0; k < 1000; ++k) {
    const channel::Position3D from{rng.uniform(0, 200), rng.uniform(0, 200), rng.uniform(30, 80)};
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double phi = rng.uniform(-0.3, 0.3);
    const channel::Position3D dir{std::cos(theta) * std::cos(phi), std::sin(theta) * std::cos(phi),
                                  std::sin(phi)};
    const auto to = channel::advance(from, rng.uniform(0.0, cfg.v_max), dir, cfg);
    if (channel::distance(from, to) > cfg.v_max * cfg.slot_length + 1e-9) out.pass = false;
    ++steps;
  }
  out.detail = "P_LoS(12 deg) = " + harness::format_number(at12) + ", " + std::to_string(steps) +
               " mobility steps";
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism() {
  Outcome out;
  Scenario s;
  s.seed = 42;
  const auto root = std::filesystem::temp_directory_path() / "honeygame_acceptance_fig7";
  std::filesystem::remove_all(root);
  for (const char* run : {"A", "B"}) harness::write_artifact(harness::run_experiment("fig7", s), root / run);
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(root / "A")) {
    if (entry.path().extension() != ".csv") continue;
    ++files;
    if (slurp(entry.path()) != slurp(root / "B" / entry.path().filename())) out.pass = false;
  }
  if (files == 0) out.pass = false;
  std::filesystem::remove_all(root);
  out.detail = std::to_string(files) + " CSV file(s) byte-identical across runs";
  return out;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, Outcome>> results(10);
  auto run = [&](int k, const std::string& name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results[k - 1] = {name, o};
  };
  run(1, "oracle equivalence", oracle_equivalence);
  const auto [feas, order] = feasibility_and_rent_order();
  results[1] = {"feasibility suite", feas};
  run(3, "truthful selection matrix", truthful_selection);
  run(4, "complete-information zero rent", complete_zero_rent);
  run(5, "monotone sizes and rewards", monotone_shapes);
  run(6, "scheme ranking", scheme_ranking);
  results[6] = {"information-rent ordering", order};
  run(8, "PHC convergence", phc_convergence);
  run(9, "channel sanity", channel_sanity);
  run(10, "determinism", determinism);

  bool all = true;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& [name, o] = results[k];
    all = all && o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, name.c_str(), o.detail.c_str());
  }
  return all ? 0 : 1;
}
