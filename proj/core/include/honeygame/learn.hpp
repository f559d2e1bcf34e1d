#pragma once

// Two-tier policy hill-climbing (PHC) for the dynamic contract game with
// complete information asymmetry. For every participating type a GCS learner
// picks a reward from a quantized grid and a UAV learner answers with a VDD
// size from its own grid.
//
// Timing within an episode: the GCS observes the size delivered in the
// previous episode and posts a reward; the UAV observes that reward and picks
// a size. The reward is paid pro rata, R * S / S_max, so a UAV delivering
// nothing is paid nothing.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "honeygame/model.hpp"
#include "honeygame/rng.hpp"

namespace honeygame::learn {

/// Evenly spaced values {k / intervals * max_value : k = 0..intervals}.
struct ActionGrid {
  int intervals = 20;
  double max_value = 1.0;
  std::vector<double> values;

  static ActionGrid uniform(int intervals, double max_value);
  std::size_t size() const noexcept { return values.size(); }
  std::size_t nearest(double v) const;
};

struct PhcParams {
  double learn_rate = 0.7;  // kappa
  double discount = 0.8;    // phi
  double step = 0.01;       // rho

  void validate() const;
};

/// Row-major Q-table and mixed strategy, one row per state.
struct LearnerState {
  ActionGrid grid;
  PhcParams params;
  std::size_t states = 0;
  std::vector<double> q;
  std::vector<double> policy;

  /// All-zero Q-table and uniform policy.
  static LearnerState cold(std::size_t states, ActionGrid grid, PhcParams params);

  std::size_t actions() const noexcept { return grid.size(); }
  double& q_at(std::size_t s, std::size_t a) { return q[s * actions() + a]; }
  double q_at(std::size_t s, std::size_t a) const { return q[s * actions() + a]; }
  double pi(std::size_t s, std::size_t a) const { return policy[s * actions() + a]; }
  std::span<const double> policy_row(std::size_t s) const;
};

void q_update(LearnerState& ls, std::size_t s, std::size_t a, double reward, std::size_t s_next);

/// Lowest-index argmax of the Q row.
std::size_t greedy_action(const LearnerState& ls, std::size_t s);

/// The greedy entry gains `step`, every other entry loses step / actions, and
/// the row is clipped to [0, 1] and renormalized.
void policy_update(LearnerState& ls, std::size_t s);

std::size_t sample_action(const LearnerState& ls, std::size_t s, RandomStream& rng);

struct LearnConfig {
  int reward_intervals = 20;  // A
  int size_intervals = 20;    // B
  PhcParams gcs;
  PhcParams uav;
  int episodes = 2000;       // T_e
  int hotboot_runs = 10;     // p; 0 is a cold start
  int hotboot_length = 500;  // episodes per offline run
  double hotboot_jitter = 0.1;
  bool frozen = false;  // sample only, never update the tables

  void validate() const;
};

/// The GCS and UAV learners of one type.
struct TypeTables {
  LearnerState gcs;
  LearnerState uav;
};

TypeTables cold_tables(const GcsParams& params, const LearnConfig& cfg);

struct EpisodeRecord {
  int episode = 0;
  int type_index = 0;
  std::size_t state = 0;  // GCS state: grid index of the previous size
  double reward = 0.0;
  double vdd_size = 0.0;
  double uav_utility = 0.0;
  double gcs_utility = 0.0;
};

struct EpisodeLog {
  int type_index = 0;
  std::vector<EpisodeRecord> records;
};

struct GameResult {
  std::vector<EpisodeLog> logs;  // participating-set order
  std::vector<TypeTables> tables;
  int budget_violations = 0;  // episodes whose pro-rata payments exceed the budget
};

/// Produces a type resembling the one being learned.
using SimilarType = std::function<UavType(RandomStream&)>;

/// Same type with marginal cost scaled by a uniform factor in [1 - j, 1 + j].
SimilarType jittered(const UavType& t, double jitter);

/// Offline warm start: cfg.hotboot_runs runs of cfg.hotboot_length episodes,
/// each against a fresh similar type, all updating one pair of tables.
TypeTables hotboot(const SimilarType& similar, const GcsParams& params, const LearnConfig& cfg,
                   RandomStream& rng);

/// What one type's learner pair carries from one episode to the next. The
/// UAV's transition is only known once the next reward is posted, so its
/// Q-update waits one episode.
struct GameCursor {
  std::size_t gcs_state = 0;  // grid index of the previous size
  bool uav_pending = false;
  std::size_t uav_state = 0;
  std::size_t uav_action = 0;
  double uav_reward = 0.0;
};

/// Plays one episode for one type, updating both tables unless frozen.
EpisodeRecord play_episode(TypeTables& tables, const UavType& t, const GcsParams& params,
                           bool frozen, GameCursor& cursor, RandomStream& gcs_rng,
                           RandomStream& uav_rng, int episode);

/// Single-episode utilities (UAV, GCS) of reward R and size S for type t.
std::pair<double, double> episode_utilities(const UavType& t, const GcsParams& params, double reward,
                                            double vdd_size);

/// Runs cfg.episodes episodes for every participating type. Each type's
/// tables come from `initial` when given (one entry per participant), else
/// from hotbooting (or a cold start when cfg.hotboot_runs is 0).
GameResult run_dynamic_game(const Population& pop, const GcsParams& params,
                            const LearnConfig& cfg, std::uint64_t seed,
                            const std::vector<TypeTables>* initial = nullptr);

/// First index from which the trailing moving average (width `window`) stays
/// within `band` * |target| of target. Returns series.size() if never.
std::size_t settling_index(std::span<const double> series, double target, std::size_t window,
                           double band);

/// Largest |single-episode utility| over the action grids, for Q bounds.
double max_abs_utility(const UavType& t, const GcsParams& params, const LearnConfig& cfg);

}  // namespace honeygame::learn
