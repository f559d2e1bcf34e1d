#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "honeygame/channel.hpp"
#include "honeygame/rng.hpp"

using namespace honeygame;
using namespace honeygame::channel;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

LinkModel default_link() { return LinkModel(ChannelParams{}, {0.0, 0.0, 1.5}); }

}  // namespace

TEST(Advance, ZeroVelocityStaysPut) {
  MobilityConfig cfg;
  const Position3D p{1.0, 2.0, 40.0};
  EXPECT_EQ(advance(p, 0.0, {1.0, 0.0, 0.0}, cfg), p);
}

TEST(Advance, MovesAlongDirection) {
  MobilityConfig cfg;
  const auto q = advance({0.0, 0.0, 40.0}, 10.0, {1.0, 0.0, 0.0}, cfg);
  EXPECT_DOUBLE_EQ(q.x, 10.0);
  EXPECT_DOUBLE_EQ(q.z, 40.0);
}

TEST(Advance, RejectsSpeedAboveCapAndNonUnitDirection) {
  MobilityConfig cfg;
  EXPECT_THROW(advance({0, 0, 40}, 25.0, {1, 0, 0}, cfg), std::invalid_argument);
  EXPECT_THROW(advance({0, 0, 40}, 5.0, {1, 1, 0}, cfg), std::invalid_argument);
  EXPECT_THROW(advance({0, 0, 1}, 5.0, {0, 0, -1}, cfg), std::invalid_argument);
}

TEST(Advance, DisplacementBoundOnRandomSteps) {
  RandomStream rng(4, "advance");
  MobilityConfig cfg;
  cfg.slot_length = 0.5;
  for (int k = 0; k < 1000; ++k) {
    Position3D p{rng.uniform(0, 200), rng.uniform(0, 200), rng.uniform(30, 80)};
    const double th = rng.uniform(0.0, 2 * std::numbers::pi);
    const double ph = rng.uniform(-0.2, 0.2);
    const Position3D dir{std::cos(th) * std::cos(ph), std::sin(th) * std::cos(ph), std::sin(ph)};
    const auto q = advance(p, rng.uniform(0.0, cfg.v_max), dir, cfg);
    EXPECT_LE(distance(p, q), cfg.slot_length * cfg.v_max + 1e-9);
  }
}

TEST(Trajectory, ReachesEndAndRespectsSpeed) {
  MobilityConfig cfg;
  cfg.slots = 20;
  const Waypoints w{{0, 0, 50}, {100, 0, 50}};
  const auto path = straight_line_trajectory(w, cfg);
  ASSERT_EQ(path.size(), 20u);
  for (std::size_t k = 1; k < path.size(); ++k) {
    EXPECT_LE(distance(path[k - 1], path[k]), cfg.v_max * cfg.slot_length + 1e-9);
  }
  EXPECT_EQ(path.back(), w.end);
}

TEST(A2aRate, UnitSnrGivesBandwidth) {
  ChannelParams p;
  p.tx_power_dbm = p.noise_dbm;  // P = noise, d = 1 m: SNR 1
  const LinkModel link(p, {0, 0, 0});
  EXPECT_NEAR(link.a2a_rate({0, 0, 10}, {1, 0, 10}), p.bw_a2a, 1e-6);
}

TEST(A2aRate, DecreasesWithDistance) {
  const auto link = default_link();
  EXPECT_GT(link.a2a_rate({0, 0, 50}, {50, 0, 50}), link.a2a_rate({0, 0, 50}, {100, 0, 50}));
}

TEST(A2aRate, InterferenceLowersRate) {
  const auto link = default_link();
  const Interferer i{{120, 0, 50}, 23.0};
  EXPECT_LT(link.a2a_rate({0, 0, 50}, {100, 0, 50}, {&i, 1}),
            link.a2a_rate({0, 0, 50}, {100, 0, 50}));
}

TEST(A2aRate, GoldenDefaultsAt100m) {
  const auto link = default_link();
  EXPECT_NEAR(link.a2a_rate({0, 0, 50}, {100, 0, 50}), 6560807.991943154, 1e-5);
}

TEST(A2aRate, ZeroDistanceThrows) {
  const auto link = default_link();
  EXPECT_THROW(link.a2a_rate({1, 1, 50}, {1, 1, 50}), std::invalid_argument);
}

TEST(LosProbability, AtLogitCenter) {
  EXPECT_NEAR(los_probability(12.0 * kDeg, ChannelParams{}), 1.0 / 13.0, 1e-12);
}

TEST(LosProbability, AtZenith) {
  EXPECT_NEAR(los_probability(90.0 * kDeg, ChannelParams{}), 0.9996794313058663, 1e-12);
}

TEST(LosProbability, IncreasingAndComplementary) {
  RandomStream rng(2, "los");
  ChannelParams p;
  for (int k = 0; k < 1000; ++k) {
    const double a = rng.uniform(-89.0, 89.0) * kDeg;
    const double pl = los_probability(a, p);
    EXPECT_GT(pl, 0.0);
    EXPECT_LT(pl, 1.0);
    EXPECT_NEAR(pl + (1.0 - pl), 1.0, 1e-15);
    EXPECT_LT(pl, los_probability(a + 0.5 * kDeg, p));
  }
}

TEST(A2gPathloss, GoldenDefaults) {
  const auto link = default_link();
  EXPECT_NEAR(link.a2g_pathloss({100, 0, 50}), 93.37154750144040, 1e-9);
}

TEST(A2gPathloss, EqualAttenuationsIgnoreElevation) {
  ChannelParams p;
  p.atten_los = p.atten_nlos = 5.0;
  const LinkModel link(p, {0, 0, 1.5});
  EXPECT_NEAR(link.a2g_pathloss({100, 0, 30}, 100.0), link.a2g_pathloss({100, 0, 80}, 100.0), 1e-12);
}

TEST(A2gPathloss, HigherUavSeesLessAttenuation) {
  const auto link = default_link();
  EXPECT_LE(link.a2g_pathloss({100, 0, 80}, 100.0), link.a2g_pathloss({100, 0, 30}, 100.0));
}

TEST(A2gPathloss, ZeroHorizontalDistanceThrows) {
  const auto link = default_link();
  EXPECT_THROW(link.a2g_pathloss({0, 0, 50}), std::invalid_argument);
}

TEST(A2gRate, GoldenDefaults) {
  const auto link = default_link();
  EXPECT_NEAR(link.a2g_rate({100, 0, 50}), 8517529.812421129, 1e-5);
}

TEST(A2gRate, DecreasesWithPathloss) {
  const auto link = default_link();
  EXPECT_GT(link.a2g_rate({50, 0, 50}), link.a2g_rate({150, 0, 50}));
}

TEST(TransmissionDelay, Examples) {
  EXPECT_DOUBLE_EQ(transmission_delay(0.0, 1e6, {}), 0.0);
  EXPECT_DOUBLE_EQ(transmission_delay(300.0, 1e6, {}), 2.4e-3);
  const TransmissionMode relay{RelayPath{2, 2e6, 4e6}};
  const double d = transmission_delay(300.0, 1e6, relay);
  EXPECT_DOUBLE_EQ(d, 2400.0 / 2e6 + 2400.0 / 4e6);
  EXPECT_GE(d, 2400.0 / 2e6);
  EXPECT_DOUBLE_EQ(transmission_delay(600.0, 1e6, relay), 2 * d);
  EXPECT_THROW(transmission_delay(1.0, 0.0, {}), std::invalid_argument);
}

TEST(SelectMode, Examples) {
  EXPECT_TRUE(select_mode(1e6, {}).direct());
  const RelayPath slow{1, 1e5, 1e5};
  EXPECT_TRUE(select_mode(1e7, {&slow, 1}).direct());
  const RelayPath fast{3, 1e6, 1e6};
  const auto mode = select_mode(1e5, {&fast, 1});
  ASSERT_FALSE(mode.direct());
  EXPECT_EQ(mode.relay->neighbor, 3);
  const RelayPath tie{4, 2e6, 2e6};
  EXPECT_TRUE(select_mode(1e6, {&tie, 1}).direct());
}

TEST(UploadDelays, PositiveAndRelayNeverSlower) {
  const LinkModel link(ChannelParams{}, {100, 100, 1.5});
  std::vector<Position3D> uavs{{10, 10, 40}, {190, 20, 60}, {100, 180, 35}, {60, 90, 80}};
  const auto delays = upload_delays(link, uavs, 300.0);
  ASSERT_EQ(delays.size(), uavs.size());
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    EXPECT_GT(delays[i], 0.0);
    EXPECT_LE(delays[i], transmission_delay(300.0, link.a2g_rate(uavs[i]), {}) + 1e-15);
  }
}
