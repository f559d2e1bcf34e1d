#include "honeygame/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace honeygame {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw std::invalid_argument(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(where + "." + key + ": " + e.what());
  }
}

template <typename T>
void require(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) throw std::invalid_argument(where + ": missing key '" + key + "'");
  read(obj, key, out, where);
}

json position_to_json(const channel::Position3D& p) { return json::array({p.x, p.y, p.z}); }

channel::Position3D position_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument(where + ": expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json type_to_json(const UavType& t) {
  json j = {{"index", t.index},
            {"marginal_cost", t.marginal_cost},
            {"delay", t.delay},
            {"count", t.count}};
  if (t.cost_split) j["cost_split"] = json::array({t.cost_split->first, t.cost_split->second});
  return j;
}

UavType type_from_json(const json& j, const std::string& where) {
  reject_unknown(j, where, {"index", "marginal_cost", "delay", "count", "cost_split"});
  UavType t;
  read(j, "index", t.index, where);
  read(j, "marginal_cost", t.marginal_cost, where);
  read(j, "delay", t.delay, where);
  read(j, "count", t.count, where);
  if (auto it = j.find("cost_split"); it != j.end()) {
    if (!it->is_array() || it->size() != 2) {
      throw std::invalid_argument(where + ".cost_split: expected [creation, privacy]");
    }
    t.cost_split = std::make_pair((*it)[0].get<double>(), (*it)[1].get<double>());
  }
  return t;
}

const char* distribution_name(CostDistribution d) {
  return d == CostDistribution::kEven ? "even" : "uniform";
}

const char* budget_mode_name(solver::BudgetMode m) {
  return m == solver::BudgetMode::kExact ? "exact" : "paper";
}

json phc_to_json(const learn::PhcParams& p) {
  return {{"learn_rate", p.learn_rate}, {"discount", p.discount}, {"step", p.step}};
}

learn::PhcParams phc_from_json(const json& j, const std::string& where) {
  reject_unknown(j, where, {"learn_rate", "discount", "step"});
  learn::PhcParams p;
  read(j, "learn_rate", p.learn_rate, where);
  read(j, "discount", p.discount, where);
  read(j, "step", p.step, where);
  return p;
}

json to_json(const Scenario& s) {
  const auto& ps = s.population;
  json pop;
  if (!ps.types.empty()) {
    json types = json::array();
    for (const auto& t : ps.types) types.push_back(type_to_json(t));
    pop["types"] = types;
  } else {
    json gen = {{"type_count", ps.type_count},
                {"cost_min", ps.cost_min},
                {"cost_max", ps.cost_max},
                {"distribution", distribution_name(ps.distribution)},
                {"uavs_per_type", ps.uavs_per_type},
                {"area_m", ps.area_m},
                {"altitude_min_m", ps.altitude_min_m},
                {"altitude_max_m", ps.altitude_max_m}};
    if (ps.fixed_delay) {
      gen["delay"] = *ps.fixed_delay;
    } else {
      gen["delay"] = "channel";
    }
    pop["generator"] = gen;
  }

  const auto& g = s.gcs;
  const auto& c = s.channel;
  json waypoints = json::array();
  for (const auto& w : s.mobility.waypoints) {
    waypoints.push_back({{"start", position_to_json(w.start)}, {"end", position_to_json(w.end)}});
  }
  return {
      {"name", s.name},
      {"seed", s.seed},
      {"population", pop},
      {"gcs",
       {{"satisfaction", g.satisfaction},
        {"deploy_cost", g.deploy_cost},
        {"budget", g.budget},
        {"s_max", g.s_max},
        {"r_max", g.r_max},
        {"vdd_requirement", g.vdd_requirement},
        {"t_max", g.t_max}}},
      {"channel",
       {{"pathloss_exp", c.pathloss_exp},
        {"atten_los", c.atten_los},
        {"atten_nlos", c.atten_nlos},
        {"logit_a", c.logit_a},
        {"logit_b", c.logit_b},
        {"carrier_hz", c.carrier_hz},
        {"light_speed", c.light_speed},
        {"gcs_height", c.gcs_height},
        {"bw_a2a", c.bw_a2a},
        {"bw_a2g", c.bw_a2g},
        {"tx_power_dbm", c.tx_power_dbm},
        {"noise_dbm", c.noise_dbm}}},
      {"mobility",
       {{"slot_length", s.mobility.slot_length},
        {"slots", s.mobility.slots},
        {"v_max", s.mobility.v_max},
        {"waypoints", waypoints}}},
      {"solver",
       {{"budget_mode", budget_mode_name(s.solver.budget_mode)},
        {"iron_tolerance", s.solver.iron_tolerance},
        {"max_iron_iters", s.solver.max_iron_iters}}},
      {"learner",
       {{"reward_intervals", s.learner.reward_intervals},
        {"size_intervals", s.learner.size_intervals},
        {"gcs", phc_to_json(s.learner.gcs)},
        {"uav", phc_to_json(s.learner.uav)},
        {"episodes", s.learner.episodes},
        {"hotboot_runs", s.learner.hotboot_runs},
        {"hotboot_length", s.learner.hotboot_length},
        {"hotboot_jitter", s.learner.hotboot_jitter}}},
  };
}

Scenario from_json(const json& root) {
  reject_unknown(root, "scenario",
                 {"name", "seed", "population", "gcs", "channel", "mobility", "solver", "learner"});
  Scenario s;
  read(root, "name", s.name, "scenario");
  read(root, "seed", s.seed, "scenario");

  if (auto it = root.find("population"); it != root.end()) {
    reject_unknown(*it, "population", {"types", "generator"});
    auto& ps = s.population;
    if (auto types = it->find("types"); types != it->end()) {
      if (!types->is_array()) throw std::invalid_argument("population.types: expected a list");
      for (std::size_t k = 0; k < types->size(); ++k) {
        ps.types.push_back(type_from_json((*types)[k], "population.types[" + std::to_string(k) + "]"));
      }
    }
    if (auto gen = it->find("generator"); gen != it->end()) {
      const std::string where = "population.generator";
      reject_unknown(*gen, where,
                     {"type_count", "cost_min", "cost_max", "distribution", "uavs_per_type", "delay",
                      "area_m", "altitude_min_m", "altitude_max_m"});
      read(*gen, "type_count", ps.type_count, where);
      read(*gen, "cost_min", ps.cost_min, where);
      read(*gen, "cost_max", ps.cost_max, where);
      read(*gen, "uavs_per_type", ps.uavs_per_type, where);
      read(*gen, "area_m", ps.area_m, where);
      read(*gen, "altitude_min_m", ps.altitude_min_m, where);
      read(*gen, "altitude_max_m", ps.altitude_max_m, where);
      std::string dist = distribution_name(ps.distribution);
      read(*gen, "distribution", dist, where);
      if (dist == "even") {
        ps.distribution = CostDistribution::kEven;
      } else if (dist == "uniform") {
        ps.distribution = CostDistribution::kUniform;
      } else {
        throw std::invalid_argument(where + ".distribution: expected 'even' or 'uniform'");
      }
      if (auto d = gen->find("delay"); d != gen->end()) {
        if (d->is_number()) {
          ps.fixed_delay = d->get<double>();
        } else if (!(d->is_string() && d->get<std::string>() == "channel")) {
          throw std::invalid_argument(where + ".delay: expected a number or 'channel'");
        }
      }
    }
  }

  if (auto it = root.find("gcs"); it != root.end()) {
    const std::string where = "gcs";
    reject_unknown(*it, where,
                   {"satisfaction", "deploy_cost", "budget", "s_max", "r_max", "vdd_requirement",
                    "t_max"});
    read(*it, "satisfaction", s.gcs.satisfaction, where);
    read(*it, "deploy_cost", s.gcs.deploy_cost, where);
    read(*it, "budget", s.gcs.budget, where);
    read(*it, "s_max", s.gcs.s_max, where);
    read(*it, "r_max", s.gcs.r_max, where);
    read(*it, "vdd_requirement", s.gcs.vdd_requirement, where);
    read(*it, "t_max", s.gcs.t_max, where);
  }

  if (auto it = root.find("channel"); it != root.end()) {
    const std::string where = "channel";
    auto& c = s.channel;
    reject_unknown(*it, where,
                   {"pathloss_exp", "atten_los", "atten_nlos", "logit_a", "logit_b", "carrier_hz",
                    "light_speed", "gcs_height", "bw_a2a", "bw_a2g", "tx_power_dbm", "noise_dbm"});
    read(*it, "pathloss_exp", c.pathloss_exp, where);
    read(*it, "atten_los", c.atten_los, where);
    read(*it, "atten_nlos", c.atten_nlos, where);
    read(*it, "logit_a", c.logit_a, where);
    read(*it, "logit_b", c.logit_b, where);
    read(*it, "carrier_hz", c.carrier_hz, where);
    read(*it, "light_speed", c.light_speed, where);
    read(*it, "gcs_height", c.gcs_height, where);
    read(*it, "bw_a2a", c.bw_a2a, where);
    read(*it, "bw_a2g", c.bw_a2g, where);
    read(*it, "tx_power_dbm", c.tx_power_dbm, where);
    read(*it, "noise_dbm", c.noise_dbm, where);
  }

  if (auto it = root.find("mobility"); it != root.end()) {
    const std::string where = "mobility";
    reject_unknown(*it, where, {"slot_length", "slots", "v_max", "waypoints"});
    read(*it, "slot_length", s.mobility.slot_length, where);
    read(*it, "slots", s.mobility.slots, where);
    read(*it, "v_max", s.mobility.v_max, where);
    if (auto w = it->find("waypoints"); w != it->end()) {
      if (!w->is_array()) throw std::invalid_argument("mobility.waypoints: expected a list");
      for (const auto& entry : *w) {
        reject_unknown(entry, "mobility.waypoints[]", {"start", "end"});
        s.mobility.waypoints.push_back({position_from_json(entry.at("start"), "waypoint start"),
                                        position_from_json(entry.at("end"), "waypoint end")});
      }
    }
  }

  if (auto it = root.find("solver"); it != root.end()) {
    const std::string where = "solver";
    reject_unknown(*it, where, {"budget_mode", "iron_tolerance", "max_iron_iters"});
    std::string mode = budget_mode_name(s.solver.budget_mode);
    read(*it, "budget_mode", mode, where);
    if (mode == "exact") {
      s.solver.budget_mode = solver::BudgetMode::kExact;
    } else if (mode == "paper") {
      s.solver.budget_mode = solver::BudgetMode::kClosedForm;
    } else {
      throw std::invalid_argument("solver.budget_mode: expected 'exact' or 'paper'");
    }
    read(*it, "iron_tolerance", s.solver.iron_tolerance, where);
    read(*it, "max_iron_iters", s.solver.max_iron_iters, where);
  }

  if (auto it = root.find("learner"); it != root.end()) {
    const std::string where = "learner";
    auto& l = s.learner;
    reject_unknown(*it, where,
                   {"reward_intervals", "size_intervals", "gcs", "uav", "episodes", "hotboot_runs",
                    "hotboot_length", "hotboot_jitter"});
    read(*it, "reward_intervals", l.reward_intervals, where);
    read(*it, "size_intervals", l.size_intervals, where);
    if (auto g = it->find("gcs"); g != it->end()) l.gcs = phc_from_json(*g, "learner.gcs");
    if (auto u = it->find("uav"); u != it->end()) l.uav = phc_from_json(*u, "learner.uav");
    read(*it, "episodes", l.episodes, where);
    read(*it, "hotboot_runs", l.hotboot_runs, where);
    read(*it, "hotboot_length", l.hotboot_length, where);
    read(*it, "hotboot_jitter", l.hotboot_jitter, where);
  }

  s.validate();
  return s;
}

}  // namespace

void PopulationSpec::validate() const {
  if (!types.empty()) {
    Population check(types);
    return;
  }
  if (type_count < 1) throw std::invalid_argument("population: type_count must be >= 1");
  if (!(cost_min >= 0.0) || !(cost_max >= cost_min) || !std::isfinite(cost_max)) {
    throw std::invalid_argument("population: need 0 <= cost_min <= cost_max");
  }
  if (uavs_per_type < 1) throw std::invalid_argument("population: uavs_per_type must be >= 1");
  if (fixed_delay && !(*fixed_delay > 0.0 && std::isfinite(*fixed_delay))) {
    throw std::invalid_argument("population: delay must be > 0");
  }
  if (!(area_m > 0.0)) throw std::invalid_argument("population: area_m must be > 0");
  if (!(altitude_min_m >= 0.0) || !(altitude_max_m >= altitude_min_m)) {
    throw std::invalid_argument("population: need 0 <= altitude_min_m <= altitude_max_m");
  }
}

void Scenario::validate() const {
  population.validate();
  gcs.validate();
  channel.validate();
  mobility.validate();
  solver.validate();
  learner.validate();
}

Scenario parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: malformed JSON: ") + e.what());
  }
  return from_json(root);
}

static std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path));
}

std::string dump_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

std::uint64_t scenario_hash(const Scenario& s) { return fnv1a(to_json(s).dump()); }

std::string dump_menu(const ContractMenu& menu) {
  json items = json::array();
  for (const auto& [index, item] : menu.items) {
    items.push_back({{"type_index", index}, {"vdd_size", item.vdd_size}, {"reward", item.reward}});
  }
  return json{{"t_max", menu.t_max}, {"items", items}}.dump(2) + "\n";
}

ContractMenu parse_menu(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("menu: malformed JSON: ") + e.what());
  }
  reject_unknown(root, "menu", {"t_max", "items"});
  ContractMenu menu;
  require(root, "t_max", menu.t_max, "menu");
  if (!(menu.t_max > 0.0)) throw std::invalid_argument("menu.t_max: must be > 0");
  const auto it = root.find("items");
  if (it == root.end() || !it->is_array()) throw std::invalid_argument("menu.items: expected a list");
  for (const auto& entry : *it) {
    reject_unknown(entry, "menu.items[]", {"type_index", "vdd_size", "reward"});
    int index = 0;
    ContractItem item;
    require(entry, "type_index", index, "menu.items[]");
    require(entry, "vdd_size", item.vdd_size, "menu.items[]");
    require(entry, "reward", item.reward, "menu.items[]");
    if (!menu.items.emplace(index, item).second) {
      throw std::invalid_argument("menu.items: duplicate type_index " + std::to_string(index));
    }
  }
  return menu;
}

ContractMenu load_menu(const std::filesystem::path& path) { return parse_menu(read_file(path)); }

Population generate_population(const PopulationSpec& spec, const GcsParams& gcs,
                               const channel::ChannelParams& channel, RandomStream& rng) {
  spec.validate();
  const int n = spec.type_count;
  std::vector<double> costs(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    if (spec.distribution == CostDistribution::kUniform) {
      costs[k] = rng.uniform(spec.cost_min, spec.cost_max);
    } else if (n == 1) {
      costs[k] = 0.5 * (spec.cost_min + spec.cost_max);
    } else {
      costs[k] = spec.cost_min + (spec.cost_max - spec.cost_min) * k / (n - 1);
    }
  }
  std::sort(costs.begin(), costs.end(), std::greater<>());

  std::vector<double> delays(static_cast<std::size_t>(n), spec.fixed_delay.value_or(0.0));
  if (!spec.fixed_delay) {
    const channel::Position3D gcs_pos{spec.area_m / 2, spec.area_m / 2, channel.gcs_height};
    std::vector<channel::Position3D> uavs;
    for (int k = 0; k < n; ++k) {
      const double x = rng.uniform(0.0, spec.area_m);
      const double y = rng.uniform(0.0, spec.area_m);
      const double z = rng.uniform(spec.altitude_min_m, spec.altitude_max_m);
      uavs.push_back({x, y, z});
    }
    const channel::LinkModel link(channel, gcs_pos);
    delays = channel::upload_delays(link, uavs, gcs.s_max);
  }

  std::vector<UavType> types;
  for (int k = 0; k < n; ++k) {
    UavType t;
    t.index = k + 1;
    t.marginal_cost = costs[k];
    t.delay = delays[k];
    t.count = spec.uavs_per_type;
    types.push_back(t);
  }
  return Population(std::move(types)).canonicalized();
}

Population build_population(const Scenario& s) {
  if (!s.population.types.empty()) return Population(s.population.types).canonicalized();
  RandomStream rng(s.seed, "population");
  return generate_population(s.population, s.gcs, s.channel, rng);
}

}  // namespace honeygame
