#include "honeygame/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace honeygame::channel {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kBitsPerByte = 8.0;

double norm(const Position3D& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

bool finite(const Position3D& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

}  // namespace

double distance(const Position3D& a, const Position3D& b) {
  return norm({a.x - b.x, a.y - b.y, a.z - b.z});
}

double horizontal_distance(const Position3D& a, const Position3D& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void MobilityConfig::validate() const {
  if (!(slot_length > 0.0) || !std::isfinite(slot_length)) {
    throw std::invalid_argument("MobilityConfig: slot_length must be > 0");
  }
  if (slots < 1) throw std::invalid_argument("MobilityConfig: slots must be >= 1");
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw std::invalid_argument("MobilityConfig: v_max must be > 0");
  }
  for (const auto& w : waypoints) {
    if (!finite(w.start) || !finite(w.end) || w.start.z < 0.0 || w.end.z < 0.0) {
      throw std::invalid_argument("MobilityConfig: waypoints must be finite with z >= 0");
    }
  }
}

Position3D advance(const Position3D& p, double v, const Position3D& dir,
                   const MobilityConfig& cfg) {
  if (!(v >= 0.0) || v > cfg.v_max) {
    throw std::invalid_argument("advance: velocity outside [0, v_max]");
  }
  if (std::abs(norm(dir) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("advance: direction is not a unit vector");
  }
  const double step = v * cfg.slot_length;
  Position3D next{p.x + step * dir.x, p.y + step * dir.y, p.z + step * dir.z};
  if (next.z < 0.0) throw std::invalid_argument("advance: position would go below ground");
  return next;
}

std::vector<Position3D> straight_line_trajectory(const Waypoints& w, const MobilityConfig& cfg) {
  std::vector<Position3D> path;
  path.reserve(static_cast<std::size_t>(cfg.slots));
  Position3D cur = w.start;
  path.push_back(cur);
  const double max_step = cfg.v_max * cfg.slot_length;
  for (int t = 1; t < cfg.slots; ++t) {
    const Position3D delta{w.end.x - cur.x, w.end.y - cur.y, w.end.z - cur.z};
    const double remaining = norm(delta);
    if (remaining == 0.0) {
      path.push_back(cur);
      continue;
    }
    const Position3D dir{delta.x / remaining, delta.y / remaining, delta.z / remaining};
    const double v = std::min(cfg.v_max, remaining / cfg.slot_length);
    cur = remaining <= max_step ? w.end : advance(cur, v, dir, cfg);
    path.push_back(cur);
  }
  return path;
}

void ChannelParams::validate() const {
  if (!(bw_a2a > 0.0) || !(bw_a2g > 0.0)) {
    throw std::invalid_argument("ChannelParams: bandwidths must be > 0");
  }
  if (!(logit_b > 0.0)) throw std::invalid_argument("ChannelParams: logit_b must be > 0");
  if (!(carrier_hz > 0.0) || !(light_speed > 0.0)) {
    throw std::invalid_argument("ChannelParams: carrier and light speed must be > 0");
  }
}

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double los_probability(double elevation_rad, const ChannelParams& params) {
  const double deg = elevation_rad * 180.0 / std::numbers::pi;
  return 1.0 / (1.0 + params.logit_a * std::exp(-params.logit_b * (deg - params.logit_a)));
}

LinkModel::LinkModel(ChannelParams params, Position3D gcs)
    : params_(params),
      gcs_(gcs),
      tx_watt_(dbm_to_watt(params.tx_power_dbm)),
      noise_watt_(dbm_to_watt(params.noise_dbm)) {
  params_.validate();
}

double LinkModel::a2a_rate(const Position3D& from, const Position3D& to,
                           std::span<const Interferer> interferers) const {
  const double d = distance(from, to);
  if (!(d > 0.0)) throw std::invalid_argument("a2a_rate: zero link distance");
  double interference = 0.0;
  for (const auto& l : interferers) {
    const double dl = distance(l.position, to);
    if (!(dl > 0.0)) throw std::invalid_argument("a2a_rate: interferer at receiver");
    interference += dbm_to_watt(l.tx_power_dbm) * std::pow(dl, -params_.pathloss_exp);
  }
  const double signal = tx_watt_ * std::pow(d, -params_.pathloss_exp);
  return params_.bw_a2a * std::log2(1.0 + signal / (interference + noise_watt_));
}

double LinkModel::a2g_pathloss(const Position3D& uav, double horiz_dist) const {
  if (!(horiz_dist > 0.0)) throw std::invalid_argument("a2g_pathloss: zero horizontal distance");
  const double elevation = std::atan((uav.z - params_.gcs_height) / horiz_dist);
  const double p_los = los_probability(elevation, params_);
  const double free_space =
      20.0 * std::log10(4.0 * std::numbers::pi * horiz_dist * params_.carrier_hz /
                        params_.light_speed);
  return free_space + p_los * params_.atten_los + (1.0 - p_los) * params_.atten_nlos;
}

double LinkModel::a2g_pathloss(const Position3D& uav) const {
  return a2g_pathloss(uav, horizontal_distance(uav, gcs_));
}

double LinkModel::a2g_rate(const Position3D& uav, double horiz_dist) const {
  const double gain = std::pow(10.0, -a2g_pathloss(uav, horiz_dist) / 10.0);
  return params_.bw_a2g * std::log2(1.0 + tx_watt_ * gain / noise_watt_);
}

double LinkModel::a2g_rate(const Position3D& uav) const {
  return a2g_rate(uav, horizontal_distance(uav, gcs_));
}

double transmission_delay(double s_bytes, double direct_rate, const TransmissionMode& mode) {
  const double bits = kBitsPerByte * s_bytes;
  if (mode.direct()) {
    if (!(direct_rate > 0.0)) throw std::invalid_argument("transmission_delay: zero A2G rate");
    return bits / direct_rate;
  }
  const auto& r = *mode.relay;
  if (!(r.hop_rate > 0.0) || !(r.uplink_rate > 0.0)) {
    throw std::invalid_argument("transmission_delay: zero relay rate");
  }
  return bits / r.hop_rate + bits / r.uplink_rate;
}

TransmissionMode select_mode(double direct_rate, std::span<const RelayPath> neighbors) {
  // Compare per-bit delays; the byte count scales both sides equally.
  const double inf = std::numeric_limits<double>::infinity();
  const double direct = direct_rate > 0.0 ? 1.0 / direct_rate : inf;
  TransmissionMode best;
  double best_delay = direct;
  for (const auto& n : neighbors) {
    if (!(n.hop_rate > 0.0) || !(n.uplink_rate > 0.0)) continue;
    const double relay = 1.0 / n.hop_rate + 1.0 / n.uplink_rate;
    if (relay < best_delay) {
      best_delay = relay;
      best.relay = n;
    }
  }
  return best;
}

std::vector<double> upload_delays(const LinkModel& link, std::span<const Position3D> uavs,
                                  double s_bytes) {
  const std::size_t n = uavs.size();
  std::vector<double> uplink(n);
  for (std::size_t i = 0; i < n; ++i) uplink[i] = link.a2g_rate(uavs[i]);

  std::vector<double> delays(n);
  std::vector<Interferer> interferers;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<RelayPath> candidates;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || distance(uavs[i], uavs[k]) == 0.0) continue;
      interferers.clear();
      for (std::size_t l = 0; l < n; ++l) {
        if (l == i || l == k || distance(uavs[l], uavs[k]) == 0.0) continue;
        interferers.push_back({uavs[l], link.params().tx_power_dbm});
      }
      candidates.push_back({static_cast<int>(k), link.a2a_rate(uavs[i], uavs[k], interferers),
                            uplink[k]});
    }
    const auto mode = select_mode(uplink[i], candidates);
    delays[i] = transmission_delay(s_bytes, uplink[i], mode);
  }
  return delays;
}

}  // namespace honeygame::channel
