#include "honeygame/learn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace honeygame::learn {

ActionGrid ActionGrid::uniform(int intervals, double max_value) {
  if (intervals < 1) throw std::invalid_argument("ActionGrid: intervals must be >= 1");
  if (!(max_value > 0.0) || !std::isfinite(max_value)) {
    throw std::invalid_argument("ActionGrid: max_value must be finite and > 0");
  }
  ActionGrid g;
  g.intervals = intervals;
  g.max_value = max_value;
  g.values.resize(static_cast<std::size_t>(intervals) + 1);
  for (int k = 0; k <= intervals; ++k) g.values[k] = max_value * k / intervals;
  g.values.back() = max_value;
  return g;
}

std::size_t ActionGrid::nearest(double v) const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (std::abs(values[k] - v) < std::abs(values[best] - v)) best = k;
  }
  return best;
}

void PhcParams::validate() const {
  if (!(learn_rate >= 0.0 && learn_rate <= 1.0)) {
    throw std::invalid_argument("PhcParams: learn_rate must lie in [0, 1]");
  }
  if (!(discount >= 0.0 && discount < 1.0)) {
    throw std::invalid_argument("PhcParams: discount must lie in [0, 1)");
  }
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("PhcParams: step must lie in (0, 1]");
}

LearnerState LearnerState::cold(std::size_t states, ActionGrid grid, PhcParams params) {
  params.validate();
  LearnerState ls;
  ls.grid = std::move(grid);
  ls.params = params;
  ls.states = states;
  ls.q.assign(states * ls.actions(), 0.0);
  ls.policy.assign(states * ls.actions(), 1.0 / static_cast<double>(ls.actions()));
  return ls;
}

std::span<const double> LearnerState::policy_row(std::size_t s) const {
  return std::span<const double>(policy).subspan(s * actions(), actions());
}

void q_update(LearnerState& ls, std::size_t s, std::size_t a, double reward, std::size_t s_next) {
  double best_next = ls.q_at(s_next, 0);
  for (std::size_t b = 1; b < ls.actions(); ++b) best_next = std::max(best_next, ls.q_at(s_next, b));
  const double k = ls.params.learn_rate;
  ls.q_at(s, a) = (1.0 - k) * ls.q_at(s, a) + k * (reward + ls.params.discount * best_next);
}

std::size_t greedy_action(const LearnerState& ls, std::size_t s) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < ls.actions(); ++a) {
    if (ls.q_at(s, a) > ls.q_at(s, best)) best = a;
  }
  return best;
}

void policy_update(LearnerState& ls, std::size_t s) {
  const std::size_t n = ls.actions();
  const std::size_t g = greedy_action(ls, s);
  double* row = ls.policy.data() + s * n;
  const double drop = ls.params.step / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    row[a] += a == g ? ls.params.step : -drop;
    row[a] = std::clamp(row[a], 0.0, 1.0);
    total += row[a];
  }
  for (std::size_t a = 0; a < n; ++a) row[a] /= total;
}

std::size_t sample_action(const LearnerState& ls, std::size_t s, RandomStream& rng) {
  const auto row = ls.policy_row(s);
  const double u = rng.uniform01();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t a = 0; a < row.size(); ++a) {
    if (row[a] <= 0.0) continue;
    acc += row[a];
    last_positive = a;
    if (u < acc) return a;
  }
  return last_positive;
}

void LearnConfig::validate() const {
  if (reward_intervals < 1 || size_intervals < 1) {
    throw std::invalid_argument("LearnConfig: grid intervals must be >= 1");
  }
  gcs.validate();
  uav.validate();
  if (episodes < 0 || hotboot_runs < 0 || hotboot_length < 0) {
    throw std::invalid_argument("LearnConfig: episode counts must be >= 0");
  }
  if (!(hotboot_jitter >= 0.0 && hotboot_jitter < 1.0)) {
    throw std::invalid_argument("LearnConfig: hotboot_jitter must lie in [0, 1)");
  }
}

TypeTables cold_tables(const GcsParams& params, const LearnConfig& cfg) {
  const auto rewards = ActionGrid::uniform(cfg.reward_intervals, params.r_max);
  const auto sizes = ActionGrid::uniform(cfg.size_intervals, params.s_max);
  // The GCS state is the last size; the UAV state is the posted reward.
  return {LearnerState::cold(sizes.size(), rewards, cfg.gcs),
          LearnerState::cold(rewards.size(), sizes, cfg.uav)};
}

std::pair<double, double> episode_utilities(const UavType& t, const GcsParams& params, double reward,
                                            double vdd_size) {
  const double paid = reward * vdd_size / params.s_max;
  const ContractItem item{vdd_size, paid};
  return {uav_utility(t, item, params.t_max, params), gcs_utility_term(t, item, params.t_max, params)};
}

EpisodeRecord play_episode(TypeTables& tables, const UavType& t, const GcsParams& params,
                           bool frozen, GameCursor& cursor, RandomStream& gcs_rng,
                           RandomStream& uav_rng, int episode) {
  const std::size_t gs = cursor.gcs_state;
  const std::size_t a = sample_action(tables.gcs, gs, gcs_rng);
  const double reward = tables.gcs.grid.values[a];

  if (cursor.uav_pending && !frozen) {
    q_update(tables.uav, cursor.uav_state, cursor.uav_action, cursor.uav_reward, a);
    policy_update(tables.uav, cursor.uav_state);
  }

  const std::size_t b = sample_action(tables.uav, a, uav_rng);
  const double size = tables.uav.grid.values[b];
  const auto [u_uav, u_gcs] = episode_utilities(t, params, reward, size);

  if (!frozen) {
    q_update(tables.gcs, gs, a, u_gcs, b);
    policy_update(tables.gcs, gs);
  }
  cursor.gcs_state = b;
  cursor.uav_pending = true;
  cursor.uav_state = a;
  cursor.uav_action = b;
  cursor.uav_reward = u_uav;

  return {episode, t.index, gs, reward, size, u_uav, u_gcs};
}

SimilarType jittered(const UavType& t, double jitter) {
  return [t, jitter](RandomStream& rng) {
    UavType out = t;
    out.cost_split.reset();
    out.marginal_cost = t.marginal_cost * rng.uniform(1.0 - jitter, 1.0 + jitter);
    return out;
  };
}

TypeTables hotboot(const SimilarType& similar, const GcsParams& params, const LearnConfig& cfg,
                   RandomStream& rng) {
  cfg.validate();
  TypeTables tables = cold_tables(params, cfg);
  RandomStream gcs_rng = rng.fork("gcs");
  RandomStream uav_rng = rng.fork("uav");
  for (int run = 0; run < cfg.hotboot_runs; ++run) {
    const UavType t = similar(rng);
    GameCursor cursor;
    for (int e = 0; e < cfg.hotboot_length; ++e) {
      play_episode(tables, t, params, false, cursor, gcs_rng, uav_rng, e);
    }
  }
  return tables;
}

GameResult run_dynamic_game(const Population& pop, const GcsParams& params,
                            const LearnConfig& cfg, std::uint64_t seed,
                            const std::vector<TypeTables>* initial) {
  params.validate();
  cfg.validate();
  const auto parts = participating_set(pop, params.t_max);
  if (initial && initial->size() != parts.size()) {
    throw std::invalid_argument("run_dynamic_game: one initial table pair per participant");
  }

  GameResult result;
  std::vector<GameCursor> cursors(parts.size());
  std::vector<RandomStream> gcs_rngs;
  std::vector<RandomStream> uav_rngs;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const std::string tag = "type" + std::to_string(parts[k].index);
    gcs_rngs.emplace_back(seed, "learn/gcs/" + tag);
    uav_rngs.emplace_back(seed, "learn/uav/" + tag);
    if (initial) {
      result.tables.push_back((*initial)[k]);
    } else if (cfg.hotboot_runs > 0) {
      RandomStream boot(seed, "learn/hotboot/" + tag);
      result.tables.push_back(hotboot(jittered(parts[k], cfg.hotboot_jitter), params, cfg, boot));
    } else {
      result.tables.push_back(cold_tables(params, cfg));
    }
    result.logs.push_back({parts[k].index, {}});
    result.logs.back().records.reserve(static_cast<std::size_t>(cfg.episodes));
  }

  for (int e = 0; e < cfg.episodes; ++e) {
    double paid = 0.0;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      const auto rec = play_episode(result.tables[k], parts[k], params, cfg.frozen, cursors[k],
                                    gcs_rngs[k], uav_rngs[k], e);
      paid += parts[k].count * rec.reward * rec.vdd_size / params.s_max;
      result.logs[k].records.push_back(rec);
    }
    if (paid > params.budget * (1.0 + kFeasibilityTolerance)) ++result.budget_violations;
  }
  return result;
}

std::size_t settling_index(std::span<const double> series, double target, std::size_t window,
                           double band) {
  if (window == 0) throw std::invalid_argument("settling_index: window must be >= 1");
  const std::size_t n = series.size();
  if (n < window) return n;
  const double tol = band * std::abs(target);
  // Moving average ending at i, for i >= window - 1.
  std::vector<double> avg(n, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += series[i];
    if (i >= window) sum -= series[i - window];
    if (i + 1 >= window) avg[i] = sum / static_cast<double>(window);
  }
  std::size_t settled = n;
  for (std::size_t i = n; i-- > window - 1;) {
    if (std::abs(avg[i] - target) > tol) break;
    settled = i;
  }
  return settled;
}

double max_abs_utility(const UavType& t, const GcsParams& params, const LearnConfig& cfg) {
  const auto tables = cold_tables(params, cfg);
  double best = 0.0;
  for (double r : tables.gcs.grid.values) {
    for (double s : tables.uav.grid.values) {
      const auto [u, g] = episode_utilities(t, params, r, s);
      best = std::max({best, std::abs(u), std::abs(g)});
    }
  }
  return best;
}

}  // namespace honeygame::learn
