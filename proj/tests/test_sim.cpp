#include <set>

#include <gtest/gtest.h>

#include "mixsdg/mixsdg.hpp"

using namespace mixsdg;

TEST(CounterRng, PureFunctionOfSeedStreamAndCounter) {
  CounterRng a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  for (int k = 0; k < 100; ++k) {
    const auto x = a.next();
    EXPECT_EQ(x, b.next());
    EXPECT_NE(x, c.next());
    EXPECT_NE(x, d.next());
  }
  EXPECT_EQ(a.counter(), 100u);
}

TEST(CounterRng, UniformAndNormalMoments) {
  CounterRng r(42, 9);
  const int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = r.normal();
    sn += z;
    sn2 += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.003);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.015);
}

TEST(CounterRng, PoissonMeanAndVariance) {
  CounterRng r(3, 3);
  for (double mean : {0.5, 7.0, 100.0}) {
    const int n = 20000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto x = static_cast<double>(r.poisson(mean));
      s += x;
      s2 += x * x;
    }
    const double m = s / n, v = s2 / n - m * m;
    EXPECT_NEAR(m, mean, 4.0 * std::sqrt(mean / n));
    EXPECT_NEAR(v / mean, 1.0, 0.06);
  }
  EXPECT_EQ(r.poisson(0.0), 0u);
  EXPECT_THROW(r.poisson(-1.0), Error);
}

TEST(DeriveSeed, DistinctReplicates) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 10000; ++k) seen.insert(derive_seed(1, k));
  EXPECT_EQ(seen.size(), 10000u);
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(SimPoisson, MeanCount) {
  double total = 0.0;
  for (int r = 0; r < 1000; ++r) total += static_cast<double>(sim_poisson(100, Window::unit(), derive_seed(10, r)).locations.size());
  EXPECT_GE(total / 1000, 97.0);
  EXPECT_LE(total / 1000, 103.0);
}

TEST(SimPoisson, AreaScaling) {
  const Window w{2, 3, 2.5, 3.5};
  double total = 0.0;
  for (int r = 0; r < 1000; ++r) {
    const auto pc = sim_poisson(400, w, derive_seed(11, r));
    for (const auto& p : pc.locations) ASSERT_TRUE(w.contains(p));
    total += static_cast<double>(pc.locations.size());
  }
  EXPECT_NEAR(total / 1000, 100.0, 3.0);
}

TEST(SimPoisson, SameSeedSamePattern) {
  const auto a = sim_poisson(250, Window::unit(), 99);
  const auto b = sim_poisson(250, Window::unit(), 99);
  const auto c = sim_poisson(250, Window::unit(), 100);
  EXPECT_EQ(a.locations, b.locations);
  EXPECT_NE(a.locations, c.locations);
  EXPECT_THROW(sim_poisson(0, Window::unit(), 1), Error);
}

TEST(SimWhiteNoise, Moments) {
  const auto lat = sim_white_noise_lattice(regular_layout("w", 100, 100, Window::unit()), 1.0, 8);
  const auto v = lat.values();
  double s = 0.0;
  for (double x : v) s += x;
  const double mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = ss / static_cast<double>(v.size() - 1);
  EXPECT_GE(var, 0.94);
  EXPECT_LE(var, 1.06);
  EXPECT_LE(std::abs(mean), 3.0 / 100.0);
}

TEST(SimWhiteNoise, VarianceParameterAndDeterminism) {
  const auto layout = regular_layout("w", 50, 50, Window::unit());
  const auto a = sim_white_noise_lattice(layout, 4.0, 1);
  const auto b = sim_white_noise_lattice(layout, 4.0, 1);
  EXPECT_EQ(a.values(), b.values());
  double ss = 0.0;
  for (double x : a.values()) ss += x * x;
  EXPECT_NEAR(ss / 2500.0, 4.0, 0.4);
  EXPECT_THROW(sim_white_noise_lattice(layout, 0.0, 1), Error);
}

TEST(SimThomas, DeterministicAndInsideWindow) {
  const Window w{0, 0, 2, 1};
  const auto a = sim_thomas(10, 15, 0.05, w, 4);
  const auto b = sim_thomas(10, 15, 0.05, w, 4);
  EXPECT_EQ(a.locations, b.locations);
  EXPECT_FALSE(a.locations.empty());
  for (const auto& p : a.locations) EXPECT_TRUE(w.contains(p));
  EXPECT_THROW(sim_thomas(10, 15, 0.0, w, 4), Error);
}

TEST(SimLinkedPair, CountsSumToPointTotal) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto [pts, lat] = sim_linked_pair(500, {}, 8, Window::unit(), s);
    double total = 0.0;
    for (double v : lat.values()) total += v;
    EXPECT_EQ(total, static_cast<double>(pts.locations.size()));
    EXPECT_EQ(lat.sites.size(), 64u);
  }
  EXPECT_THROW(sim_linked_pair(500, {}, 1, Window::unit(), 1), Error);
}

TEST(SimLinkedPair, NoiseIsAdditive) {
  const auto [p0, l0] = sim_linked_pair(500, {}, 8, Window::unit(), 7);
  const auto [p1, l1] = sim_linked_pair(500, {Coupling::Kind::noisy_cell_count, 0.5}, 8, Window::unit(), 7);
  EXPECT_EQ(p0.locations, p1.locations);
  double diff = 0.0;
  for (std::size_t k = 0; k < 64; ++k) diff += std::abs(l0.sites[k].value - l1.sites[k].value);
  EXPECT_GT(diff, 0.0);
}

TEST(Simulate, ComponentNamesAndKinds) {
  SimSpec spec{LinkedPairSpec{}, 3, Window::unit()};
  const auto linked = simulate(spec, "x");
  ASSERT_EQ(linked.size(), 2u);
  EXPECT_EQ(component_name(linked[0]), "x_points");
  EXPECT_EQ(component_name(linked[1]), "x_counts");
  spec.kind = WhiteNoiseSpec{4, 5, 1.0};
  const auto wn = simulate(spec, "w");
  ASSERT_EQ(wn.size(), 1u);
  EXPECT_EQ(component_size(wn[0]), 20u);
  EXPECT_EQ(component_kind(wn[0]), ComponentKind::lattice);
  spec.kind = PoissonSpec{50};
  EXPECT_EQ(component_kind(simulate(spec, "p")[0]), ComponentKind::point);
}
