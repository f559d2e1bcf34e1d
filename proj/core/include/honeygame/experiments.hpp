#pragma once

// Experiment runners. Each one turns a scenario into plottable CSV tables,
// auditing every contract menu before it is written.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "honeygame/model.hpp"
#include "honeygame/scenario.hpp"
#include "honeygame/solver.hpp"

namespace honeygame::harness {

/// Raised when a computed artifact breaks an invariant; the CLI maps it to a
/// nonzero exit code.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nine significant digits, shortest form, no locale.
std::string format_number(double v);

class CsvTable {
 public:
  using Cell = std::variant<std::string, double, long long>;

  explicit CsvTable(std::vector<std::string> header);
  void add_row(std::vector<Cell> cells);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

enum class Scheme { kComplete, kPartial, kLinear, kUniform };

inline constexpr Scheme kAllSchemes[] = {Scheme::kComplete, Scheme::kPartial, Scheme::kLinear,
                                         Scheme::kUniform};

std::string_view scheme_name(Scheme s);

struct SchemeMenu {
  Scheme scheme;
  ContractMenu menu;
  solver::Diagnostics diagnostics;
};

/// The four menus for one population, in kAllSchemes order.
std::vector<SchemeMenu> solve_all_schemes(const Population& pop, const GcsParams& params,
                                          const solver::SolverConfig& cfg);

/// Checks appropriate to each scheme: the partial and uniform menus must be
/// feasible and fair; the complete-information menu must satisfy IR and the
/// budget; the linear menu the budget. An all-zero menu issued because the
/// budget cannot cover deployment passes. Returns the failures (empty = ok).
std::vector<std::string> audit(const SchemeMenu& m, const Population& pop,
                               const GcsParams& params);

struct RunArtifact {
  std::string experiment;
  std::uint64_t seed = 0;
  std::uint64_t scenario_hash = 0;
  std::map<std::string, std::string> tables;  // file name -> CSV text
  std::size_t menus_audited = 0;

  /// Version, seed, hash and table names; a UTC timestamp when requested.
  std::string metadata_json(bool with_timestamp) const;
};

const std::vector<std::string>& experiment_names();

/// Throws std::invalid_argument for an unknown name and InvariantViolation
/// when an audit fails.
RunArtifact run_experiment(const std::string& name, const Scenario& s);

/// Writes each table plus metadata.json into dir (created if missing).
void write_artifact(const RunArtifact& a, const std::filesystem::path& dir);

struct ZetaPoint {
  int uav_count = 0;
  std::string budget_tag;  // "omega1" (high) or "omega2" (low)
  double budget = 0.0;
  Scheme scheme = Scheme::kPartial;
  double zeta = 0.0;
};

inline constexpr int kFig7Counts[] = {2, 4, 6, 8, 10};

/// Defensive effectiveness against UAV count n for budgets 80 n and 46 n.
std::vector<ZetaPoint> zeta_sweep(const Scenario& s);

}  // namespace honeygame::harness
