#include "honeygame/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>

#include "honeygame/learn.hpp"
#include "honeygame/version.hpp"
#include <nlohmann/json.hpp>

namespace honeygame::harness {

namespace {

bool all_zero(const ContractMenu& menu) {
  return std::all_of(menu.items.begin(), menu.items.end(),
                     [](const auto& kv) { return kv.second == ContractItem{}; });
}

double deployment_total(const Population& pop, const GcsParams& params) {
  double n = 0.0;
  for (const auto& t : participating_set(pop, params.t_max)) n += t.count;
  return n * params.deploy_cost;
}

/// Solves and audits the four schemes, throwing on the first failure.
std::vector<SchemeMenu> audited_schemes(const Population& pop, const GcsParams& params,
                                        const solver::SolverConfig& cfg, const std::string& where,
                                        std::size_t& audited) {
  auto menus = solve_all_schemes(pop, params, cfg);
  for (const auto& m : menus) {
    const auto failures = audit(m, pop, params);
    ++audited;
    if (!failures.empty()) {
      std::string msg = where + ": " + std::string(scheme_name(m.scheme)) + " menu failed audit:";
      for (const auto& f : failures) msg += " " + f + ";";
      throw InvariantViolation(msg);
    }
  }
  return menus;
}

CsvTable menu_table(const std::vector<SchemeMenu>& menus, const Population& pop) {
  CsvTable t({"type_index", "marginal_cost", "scheme", "S_bytes", "R"});
  for (const auto& m : menus) {
    for (const auto& type : pop.types()) {
      const auto& item = m.menu.at(type.index);
      t.add_row({static_cast<long long>(type.index), type.marginal_cost,
                 std::string(scheme_name(m.scheme)), item.vdd_size, item.reward});
    }
  }
  return t;
}

/// One value per (type, scheme): fig4 UAV utility, fig5 GCS utility, fig6
/// social surplus.
CsvTable per_type_table(const std::vector<SchemeMenu>& menus, const Population& pop,
                        const GcsParams& params, int figure) {
  CsvTable t({"marginal_cost", "scheme", "value"});
  for (const auto& m : menus) {
    for (const auto& type : pop.types()) {
      const auto& item = m.menu.at(type.index);
      const double uav = uav_utility(type, item, m.menu.t_max, params);
      const double gcs = gcs_utility_term(type, item, m.menu.t_max, params);
      const bool in = type.delay <= m.menu.t_max;
      double value = 0.0;
      if (figure == 4) {
        value = uav;
      } else if (figure == 5) {
        value = gcs;
      } else {
        value = gcs + (in ? type.count * uav : 0.0);
      }
      t.add_row({type.marginal_cost, std::string(scheme_name(m.scheme)), value});
    }
  }
  return t;
}

CsvTable utility_matrix(const ContractMenu& menu, const Population& pop, const GcsParams& params) {
  CsvTable t({"type_index", "item_index", "utility"});
  for (const auto& type : participating_set(pop, menu.t_max)) {
    for (const auto& other : participating_set(pop, menu.t_max)) {
      t.add_row({static_cast<long long>(type.index), static_cast<long long>(other.index),
                 uav_utility(type, menu.at(other.index), menu.t_max, params)});
    }
  }
  return t;
}

CsvTable learning_table(const learn::GameResult& result) {
  CsvTable t({"episode", "type_index", "S_bytes", "R", "uav_utility", "gcs_utility"});
  for (const auto& log : result.logs) {
    for (const auto& r : log.records) {
      t.add_row({static_cast<long long>(r.episode), static_cast<long long>(r.type_index),
                 r.vdd_size, r.reward, r.uav_utility, r.gcs_utility});
    }
  }
  return t;
}

PopulationSpec generator_spec(const Scenario& s) {
  PopulationSpec spec = s.population;
  spec.types.clear();
  return spec;
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row width does not match header");
  }
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (const auto& c : cells) {
    if (const auto* d = std::get_if<double>(&c)) {
      row.push_back(format_number(*d));
    } else if (const auto* i = std::get_if<long long>(&c)) {
      row.push_back(std::to_string(*i));
    } else {
      row.push_back(std::get<std::string>(c));
    }
  }
  rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kComplete: return "complete";
    case Scheme::kPartial: return "partial";
    case Scheme::kLinear: return "linear";
    case Scheme::kUniform: return "uniform";
  }
  return "unknown";
}

std::vector<SchemeMenu> solve_all_schemes(const Population& pop, const GcsParams& params,
                                          const solver::SolverConfig& cfg) {
  std::vector<SchemeMenu> out;
  SchemeMenu complete{Scheme::kComplete, {}, {}};
  complete.menu = solver::solve_complete(pop, params, cfg, &complete.diagnostics);
  SchemeMenu partial{Scheme::kPartial, {}, {}};
  partial.menu = solver::solve_partial(pop, params, cfg, &partial.diagnostics);
  out.push_back(std::move(complete));
  out.push_back(std::move(partial));
  out.push_back({Scheme::kLinear, solver::linear_contract(pop, params), {}});
  out.push_back({Scheme::kUniform, solver::uniform_contract(pop, params, cfg), {}});
  return out;
}

std::vector<std::string> audit(const SchemeMenu& m, const Population& pop,
                               const GcsParams& params) {
  std::vector<std::string> failures;
  if (all_zero(m.menu) && params.budget < deployment_total(pop, params)) return failures;

  const auto rep = check_feasibility(m.menu, pop, params);
  if (!rep.budget_ok) failures.push_back("budget exceeded");
  if (!rep.nonparticipants_zero) failures.push_back("non-participant paid");
  if (m.scheme == Scheme::kLinear) return failures;
  if (!rep.all_ir()) failures.push_back("IR violated");
  if (m.scheme == Scheme::kComplete) return failures;
  if (!rep.all_ic()) failures.push_back("IC violated");
  if (!rep.structural_ok()) failures.push_back("monotonicity / adjacent conditions violated");
  const auto fair = check_fairness(m.menu, pop, params);
  if (!fair.participation) failures.push_back("participation fairness violated");
  if (!fair.reward) failures.push_back("reward fairness violated");
  return failures;
}

std::string RunArtifact::metadata_json(bool with_timestamp) const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["version"] = kVersion;
  j["seed"] = seed;
  j["scenario_hash"] = scenario_hash;
  j["menus_audited"] = menus_audited;
  nlohmann::json names = nlohmann::json::array();
  for (const auto& [name, csv] : tables) names.push_back(name);
  j["tables"] = names;
  if (with_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    j["timestamp"] = buf;
  }
  return j.dump(2) + "\n";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4", "fig5", "fig6",
                                                 "fig7", "fig8", "fig9", "fig10", "sweep"};
  return names;
}

std::vector<ZetaPoint> zeta_sweep(const Scenario& s) {
  std::vector<ZetaPoint> out;
  const PopulationSpec base = generator_spec(s);
  for (int n : kFig7Counts) {
    PopulationSpec spec = base;
    spec.type_count = n;
    RandomStream rng(s.seed, "fig7/n" + std::to_string(n));
    const Population pop = generate_population(spec, s.gcs, s.channel, rng);
    for (const auto& [tag, per_uav] : {std::pair<const char*, double>{"omega1", 80.0},
                                       std::pair<const char*, double>{"omega2", 46.0}}) {
      GcsParams params = s.gcs;
      params.budget = per_uav * n;
      std::size_t audited = 0;
      const auto menus = audited_schemes(pop, params, s.solver,
                                         "fig7 n=" + std::to_string(n) + " " + tag, audited);
      for (const auto& m : menus) {
        out.push_back({n, tag, params.budget, m.scheme,
                       defensive_effectiveness(m.menu, pop, params)});
      }
    }
  }
  return out;
}

RunArtifact run_experiment(const std::string& name, const Scenario& s) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw std::invalid_argument("unknown experiment '" + name + "'");
  }
  s.validate();
  RunArtifact a;
  a.experiment = name;
  a.seed = s.seed;
  a.scenario_hash = scenario_hash(s);
  const std::string file = name + ".csv";

  if (name == "fig7") {
    CsvTable t({"uav_count", "budget_tag", "scheme", "zeta"});
    const auto points = zeta_sweep(s);
    for (const auto& p : points) {
      t.add_row({static_cast<long long>(p.uav_count), p.budget_tag,
                 std::string(scheme_name(p.scheme)), p.zeta});
    }
    a.menus_audited = points.size();
    a.tables[file] = t.str();
    return a;
  }

  const Population pop = build_population(s);

  if (name == "fig8" || name == "fig9" || name == "fig10") {
    const auto result = learn::run_dynamic_game(pop, s.gcs, s.learner, s.seed);
    a.tables[file] = learning_table(result).str();
    return a;
  }

  if (name == "sweep") {
    CsvTable t({"budget", "scheme", "gcs_utility", "social_surplus", "zeta"});
    for (int k = 1; k <= 8; ++k) {
      GcsParams params = s.gcs;
      params.budget = s.gcs.budget * k / 4.0;
      const auto menus = audited_schemes(pop, params, s.solver,
                                         "sweep budget=" + format_number(params.budget),
                                         a.menus_audited);
      for (const auto& m : menus) {
        t.add_row({params.budget, std::string(scheme_name(m.scheme)),
                   gcs_utility(m.menu, pop, params), social_surplus(m.menu, pop, params),
                   defensive_effectiveness(m.menu, pop, params)});
      }
    }
    a.tables[file] = t.str();
    return a;
  }

  const auto menus = audited_schemes(pop, s.gcs, s.solver, name, a.menus_audited);
  if (name == "fig1" || name == "fig2") {
    a.tables[file] = menu_table(menus, pop).str();
  } else if (name == "fig3") {
    const auto& partial = menus[1].menu;
    a.tables[file] = utility_matrix(partial, pop, s.gcs).str();
  } else {
    const int figure = name[3] - '0';
    a.tables[file] = per_type_table(menus, pop, s.gcs, figure).str();
  }
  return a;
}

void write_artifact(const RunArtifact& a, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, csv] : a.tables) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << csv;
  }
  std::ofstream meta(dir / "metadata.json", std::ios::binary);
  if (!meta) throw std::runtime_error("cannot write " + (dir / "metadata.json").string());
  meta << a.metadata_json(true);
}

}  // namespace honeygame::harness
