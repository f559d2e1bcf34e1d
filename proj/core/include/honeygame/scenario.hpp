#pragma once

// Scenario files: everything needed to reproduce a run, stored as one JSON
// document. The schema is documented in docs/scenario_format.md; unknown keys
// are rejected so that typos fail loudly.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "honeygame/channel.hpp"
#include "honeygame/learn.hpp"
#include "honeygame/model.hpp"
#include "honeygame/rng.hpp"
#include "honeygame/solver.hpp"

namespace honeygame {

enum class CostDistribution { kEven, kUniform };

/// How to build a population when no explicit type list is given.
struct PopulationSpec {
  std::vector<UavType> types;  // explicit types; the generator is ignored when non-empty

  int type_count = 10;
  double cost_min = 0.01;
  double cost_max = 1.0;
  CostDistribution distribution = CostDistribution::kEven;
  int uavs_per_type = 1;
  /// Delay shared by every generated type; when unset, delays come from the
  /// channel model at random initial positions.
  std::optional<double> fixed_delay;
  double area_m = 200.0;  // square side; the GCS sits at its center
  double altitude_min_m = 30.0;
  double altitude_max_m = 80.0;

  void validate() const;
};

struct Scenario {
  std::string name = "default";
  std::uint64_t seed = 1;
  PopulationSpec population;
  GcsParams gcs;
  channel::ChannelParams channel;
  channel::MobilityConfig mobility;
  solver::SolverConfig solver;
  learn::LearnConfig learner;

  void validate() const;
};

/// Throws std::invalid_argument on malformed input or unknown keys.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
/// Pretty-printed JSON; parse_scenario(dump_scenario(s)) reproduces s exactly.
std::string dump_scenario(const Scenario& s);
/// FNV-1a of the compact serialization.
std::uint64_t scenario_hash(const Scenario& s);

/// Evenly spaced or uniformly drawn marginal costs, ranked so that index 1 has
/// the highest cost, then canonicalized. Delays are fixed or computed by the
/// channel model as the upload time of s_max bytes.
Population generate_population(const PopulationSpec& spec, const GcsParams& gcs,
                               const channel::ChannelParams& channel, RandomStream& rng);

/// Convenience overload: explicit types when present, else the generator
/// driven by the scenario's "population" stream.
Population build_population(const Scenario& s);

/// Menu files: {"t_max": T, "items": [{"type_index", "vdd_size", "reward"}]}.
std::string dump_menu(const ContractMenu& menu);
ContractMenu parse_menu(const std::string& text);
ContractMenu load_menu(const std::filesystem::path& path);

}  // namespace honeygame
