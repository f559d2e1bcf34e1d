#pragma once

// UAV mobility plus air-to-air (A2A) and air-to-ground (A2G) link models.
//
// Rates are in bit/s, pathloss in dB, distances in meters. Transmit and noise
// powers are configured in dBm and converted to watts once, when a LinkModel
// is built.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace honeygame::channel {

struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Position3D&, const Position3D&) = default;
};

double distance(const Position3D& a, const Position3D& b);
double horizontal_distance(const Position3D& a, const Position3D& b);

struct Waypoints {
  Position3D start;
  Position3D end;
};

struct MobilityConfig {
  double slot_length = 1.0;  // seconds
  int slots = 1;
  double v_max = 20.0;  // m/s
  std::vector<Waypoints> waypoints;

  void validate() const;
};

/// Moves one slot: p + v * slot_length * dir. Throws std::invalid_argument when
/// v exceeds v_max, v is negative, or dir is not a unit vector (1e-9).
Position3D advance(const Position3D& p, double v, const Position3D& dir,
                   const MobilityConfig& cfg);

/// Flies from start toward end at up to v_max for cfg.slots slots, stopping at
/// end. Returns cfg.slots positions, starting with start.
std::vector<Position3D> straight_line_trajectory(const Waypoints& w, const MobilityConfig& cfg);

struct ChannelParams {
  double pathloss_exp = 2.0;
  double atten_los = 1.0;    // dB
  double atten_nlos = 20.0;  // dB
  double logit_a = 12.0;
  double logit_b = 0.135;
  double carrier_hz = 2.4e9;
  double light_speed = 299792458.0;
  double gcs_height = 1.5;  // meters
  double bw_a2a = 0.25e6;   // Hz
  double bw_a2g = 1.0e6;    // Hz
  double tx_power_dbm = 23.0;
  double noise_dbm = -96.0;

  void validate() const;
};

double dbm_to_watt(double dbm);

/// LoS probability as a logistic function of the elevation angle. The angle is
/// given in radians and evaluated in degrees, the convention of (a, b).
double los_probability(double elevation_rad, const ChannelParams& params);

struct Interferer {
  Position3D position;
  double tx_power_dbm = 23.0;
};

class LinkModel {
 public:
  LinkModel(ChannelParams params, Position3D gcs);

  const ChannelParams& params() const noexcept { return params_; }
  const Position3D& gcs() const noexcept { return gcs_; }

  /// Shannon rate from UAV i to UAV k with co-channel interference.
  double a2a_rate(const Position3D& from, const Position3D& to,
                  std::span<const Interferer> interferers = {}) const;

  /// Average A2G pathloss in dB at the given horizontal distance from the GCS.
  double a2g_pathloss(const Position3D& uav, double horiz_dist) const;
  double a2g_pathloss(const Position3D& uav) const;

  double a2g_rate(const Position3D& uav, double horiz_dist) const;
  double a2g_rate(const Position3D& uav) const;

 private:
  ChannelParams params_;
  Position3D gcs_;
  double tx_watt_;
  double noise_watt_;
};

/// Rates relevant to one UAV's upload.
struct RelayPath {
  int neighbor = -1;
  double hop_rate = 0.0;     // UAV -> neighbor (A2A)
  double uplink_rate = 0.0;  // neighbor -> GCS (A2G)
};

struct TransmissionMode {
  std::optional<RelayPath> relay;  // empty means direct A2G upload
  bool direct() const noexcept { return !relay.has_value(); }
};

/// Upload time of s_bytes. Throws std::invalid_argument on a non-positive rate.
double transmission_delay(double s_bytes, double direct_rate, const TransmissionMode& mode);

/// Picks the mode with the smallest upload delay; ties go to direct upload.
TransmissionMode select_mode(double direct_rate, std::span<const RelayPath> neighbors);

/// Per-UAV upload delay of s_bytes given positions. Every other UAV is a relay
/// candidate; the A2A hop sees co-channel interference from the remaining UAVs.
std::vector<double> upload_delays(const LinkModel& link, std::span<const Position3D> uavs,
                                  double s_bytes);

}  // namespace honeygame::channel
