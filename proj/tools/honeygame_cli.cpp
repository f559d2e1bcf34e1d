// honeygame command-line front end.
//
// Exit codes: 0 success, 1 invariant violation, 2 bad input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "honeygame/experiments.hpp"
#include "honeygame/learn.hpp"
#include "honeygame/oracle.hpp"
#include "honeygame/scenario.hpp"
#include "honeygame/solver.hpp"
#include "honeygame/version.hpp"

namespace fs = std::filesystem;
using namespace honeygame;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

struct CommonFlags {
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string budget_mode;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--scenario", f.scenario_path, "Scenario JSON file (default: built-in reference setup)");
  cmd->add_option("--seed", f.seed, "Master seed, overrides the scenario's");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--budget-mode", f.budget_mode, "Budget handling of the closed-form solvers")
      ->check(CLI::IsMember({"exact", "paper"}));
}

Scenario resolve(const CommonFlags& f) {
  Scenario s = f.scenario_path.empty() ? Scenario{} : load_scenario(f.scenario_path);
  if (f.seed) s.seed = *f.seed;
  if (f.budget_mode == "exact") s.solver.budget_mode = solver::BudgetMode::kExact;
  if (f.budget_mode == "paper") s.solver.budget_mode = solver::BudgetMode::kClosedForm;
  s.validate();
  return s;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::optional<harness::Scheme> parse_scheme(const std::string& name) {
  for (auto s : harness::kAllSchemes) {
    if (harness::scheme_name(s) == name) return s;
  }
  return std::nullopt;
}

int cmd_solve(const CommonFlags& f, const std::string& scheme) {
  const Scenario s = resolve(f);
  const Population pop = build_population(s);
  const auto menus = harness::solve_all_schemes(pop, s.gcs, s.solver);
  bool ok = true;
  for (const auto& m : menus) {
    if (scheme != "all" && harness::scheme_name(m.scheme) != scheme) continue;
    const auto failures = harness::audit(m, pop, s.gcs);
    std::cout << "scheme " << harness::scheme_name(m.scheme) << '\n';
    std::cout << "  type  C          T          S            R            U_uav\n";
    for (const auto& t : pop.types()) {
      const auto& item = m.menu.at(t.index);
      std::cout << "  " << t.index << "  " << harness::format_number(t.marginal_cost) << "  "
                << harness::format_number(t.delay) << "  " << harness::format_number(item.vdd_size)
                << "  " << harness::format_number(item.reward) << "  "
                << harness::format_number(uav_utility(t, item, m.menu.t_max, s.gcs)) << '\n';
    }
    std::cout << "  gcs_utility " << harness::format_number(gcs_utility(m.menu, pop, s.gcs))
              << "  social_surplus " << harness::format_number(social_surplus(m.menu, pop, s.gcs))
              << "  paid " << harness::format_number(total_payment(m.menu, pop)) << " / "
              << harness::format_number(s.gcs.budget) << "  zeta "
              << harness::format_number(defensive_effectiveness(m.menu, pop, s.gcs)) << '\n';
    for (const auto& n : m.diagnostics.notes) std::cout << "  note: " << n << '\n';
    for (const auto& fail : failures) std::cout << "  VIOLATION: " << fail << '\n';
    ok = ok && failures.empty();
    if (!f.out.empty()) {
      write_text(fs::path(f.out) / ("menu_" + std::string(harness::scheme_name(m.scheme)) + ".json"),
                 dump_menu(m.menu));
    }
  }
  return ok ? 0 : kExitViolation;
}

struct OracleOutcome {
  bool ok = true;
  double margin = 0.0;  // solver - oracle, in units of the slack
};

OracleOutcome compare(const ContractMenu& menu, const oracle::OracleResult& best,
                      const Population& pop, const GcsParams& params, double step) {
  const double u = gcs_utility(menu, pop, params);
  const double slack = oracle::grid_slack(menu, pop, params, step);
  const double tol = 1e-9 * std::max(1.0, std::abs(best.objective));
  OracleOutcome out;
  out.margin = slack > 0.0 ? (u - best.objective) / slack : 0.0;
  out.ok = u >= best.objective - slack - tol && u <= best.objective + slack + tol;
  return out;
}

int cmd_oracle_check(const CommonFlags& f, int instances) {
  const Scenario s = resolve(f);
  std::vector<oracle::Instance> cases;
  const Population pop = build_population(s);
  if (participating_set(pop, s.gcs.t_max).size() <= oracle::kMaxParticipants) {
    cases.push_back({pop, s.gcs});
  } else {
    std::cout << "scenario has more than " << oracle::kMaxParticipants
              << " participating types; checking " << instances << " random instances\n";
    RandomStream rng(s.seed, "oracle-check");
    for (int k = 0; k < instances; ++k) cases.push_back(oracle::random_instance({}, rng));
  }
  int failures = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto& c = cases[k];
    const auto grid =
        oracle::default_grid(participating_set(c.pop, c.params.t_max).size(), c.params.s_max);
    const auto oc = oracle::grid_search_complete(c.pop, c.params, grid);
    const auto op = oracle::grid_search_partial(c.pop, c.params, grid);
    const auto rc = compare(solver::solve_complete(c.pop, c.params, s.solver), oc, c.pop, c.params,
                            grid.s_step);
    const auto rp = compare(solver::solve_partial(c.pop, c.params, s.solver), op, c.pop, c.params,
                            grid.s_step);
    if (!rc.ok || !rp.ok) {
      ++failures;
      std::cout << "instance " << k << ": complete margin " << harness::format_number(rc.margin)
                << ", partial margin " << harness::format_number(rp.margin) << " (FAIL)\n";
    }
  }
  std::cout << "oracle-check: " << cases.size() - failures << "/" << cases.size()
            << " instances within one grid step\n";
  return failures == 0 ? 0 : kExitViolation;
}

int cmd_learn(const CommonFlags& f, std::optional<int> episodes) {
  Scenario s = resolve(f);
  if (episodes) s.learner.episodes = *episodes;
  const Population pop = build_population(s);
  const auto result = learn::run_dynamic_game(pop, s.gcs, s.learner, s.seed);
  const auto complete = solver::solve_complete(pop, s.gcs, s.solver);

  bool ok = true;
  for (std::size_t k = 0; k < result.logs.size(); ++k) {
    const auto& log = result.logs[k];
    const auto& tables = result.tables[k];
    for (std::size_t st = 0; st < tables.gcs.states; ++st) {
      double sum = 0.0;
      for (double p : tables.gcs.policy_row(st)) {
        ok = ok && p >= 0.0 && p <= 1.0;
        sum += p;
      }
      ok = ok && std::abs(sum - 1.0) <= 1e-12;
    }
    const std::size_t last_state = log.records.empty() ? 0 : log.records.back().state;
    const double greedy = tables.gcs.grid.values[learn::greedy_action(tables.gcs, last_state)];
    std::cout << "type " << log.type_index << ": greedy R "
              << harness::format_number(greedy) << ", complete-information R* "
              << harness::format_number(complete.at(log.type_index).reward) << '\n';
  }
  std::cout << "budget violations: " << result.budget_violations << " of " << s.learner.episodes
            << " episodes\n";
  if (!f.out.empty()) {
    harness::CsvTable t({"episode", "type_index", "S_bytes", "R", "uav_utility", "gcs_utility"});
    for (const auto& log : result.logs) {
      for (const auto& r : log.records) {
        t.add_row({static_cast<long long>(r.episode), static_cast<long long>(r.type_index),
                   r.vdd_size, r.reward, r.uav_utility, r.gcs_utility});
      }
    }
    write_text(fs::path(f.out) / "learn.csv", t.str());
  }
  if (!ok) std::cout << "VIOLATION: a policy row is not a distribution\n";
  return ok ? 0 : kExitViolation;
}

int cmd_reproduce(const CommonFlags& f, const std::string& name) {
  const Scenario s = resolve(f);
  const auto artifact = harness::run_experiment(name, s);
  const fs::path dir = f.out.empty() ? fs::path("out") / name : fs::path(f.out);
  harness::write_artifact(artifact, dir);
  for (const auto& [file, csv] : artifact.tables) std::cout << (dir / file).string() << '\n';
  std::cout << "menus audited: " << artifact.menus_audited << '\n';
  return 0;
}

int cmd_validate(const CommonFlags& f, const std::string& menu_path, const std::string& level) {
  const Scenario s = resolve(f);
  const Population pop = build_population(s);
  const ContractMenu menu = load_menu(menu_path);
  for (const auto& t : pop.types()) {
    if (!menu.items.count(t.index)) {
      std::cerr << "menu has no item for type " << t.index << '\n';
      return kExitInput;
    }
  }
  GcsParams params = s.gcs;
  params.t_max = menu.t_max;
  const auto scheme = parse_scheme(level);
  const harness::SchemeMenu m{scheme.value_or(harness::Scheme::kPartial), menu, {}};
  const auto rep = check_feasibility(menu, pop, params);
  const auto fair = check_fairness(menu, pop, params);
  std::cout << "IR " << (rep.all_ir() ? "ok" : "violated") << ", IC "
            << (rep.all_ic() ? "ok" : "violated") << ", budget "
            << (rep.budget_ok ? "ok" : "violated") << ", monotone "
            << (rep.monotone_ok ? "ok" : "violated") << ", fairness "
            << (fair.fair() ? "ok" : "violated") << ", worst slack "
            << harness::format_number(rep.worst_violation) << '\n';
  const auto failures = harness::audit(m, pop, params);
  for (const auto& fail : failures) std::cout << "VIOLATION: " << fail << '\n';
  return failures.empty() ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Honeypot-game contract design for collaborative UAV defense"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonFlags flags;

  auto* solve = app.add_subcommand("solve", "Solve one scenario and audit the menus");
  add_common(solve, flags);
  std::string scheme = "all";
  solve->add_option("--scheme", scheme, "Scheme to print")
      ->check(CLI::IsMember({"all", "complete", "partial", "linear", "uniform"}));

  auto* oracle_cmd = app.add_subcommand("oracle-check", "Compare solvers with brute-force search");
  add_common(oracle_cmd, flags);
  int instances = 20;
  oracle_cmd->add_option("--instances", instances, "Random instances when the scenario is too large")
      ->check(CLI::PositiveNumber);

  auto* learn_cmd = app.add_subcommand("learn", "Run the two-tier PHC learner");
  add_common(learn_cmd, flags);
  std::optional<int> episodes;
  learn_cmd->add_option("--episodes", episodes, "Override the episode count");

  auto* reproduce = app.add_subcommand("reproduce", "Regenerate a figure's CSV");
  add_common(reproduce, flags);
  std::string figure;
  reproduce->add_option("figure", figure, "fig1 .. fig10 or sweep")
      ->required()
      ->check(CLI::IsMember(harness::experiment_names()));

  auto* validate = app.add_subcommand("validate", "Audit a menu file against a scenario");
  add_common(validate, flags);
  std::string menu_path;
  std::string level = "partial";
  validate->add_option("--menu", menu_path, "Menu JSON file")->required()->check(CLI::ExistingFile);
  validate->add_option("--level", level, "Audit level, named after the scheme that produced it")
      ->check(CLI::IsMember({"complete", "partial", "linear", "uniform"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitInput;
  }

  try {
    if (*solve) return cmd_solve(flags, scheme);
    if (*oracle_cmd) return cmd_oracle_check(flags, instances);
    if (*learn_cmd) return cmd_learn(flags, episodes);
    if (*reproduce) return cmd_reproduce(flags, figure);
    if (*validate) return cmd_validate(flags, menu_path, level);
  } catch (const harness::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kExitViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitViolation;
  }
  return 0;
}
