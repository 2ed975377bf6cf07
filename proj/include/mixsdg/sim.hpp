#pragma once

// Seeded generators for calibration: homogeneous Poisson, Thomas cluster,
// Gaussian white-noise lattices and linked point/lattice pairs.
//
// Randomness comes from a counter-based stream: the n-th 64-bit draw is a
// pure function of (seed, stream id, n), so a generator's output depends
// only on its arguments.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <type_traits>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mixsdg/model.hpp"
#include "mixsdg/preprocess.hpp"

namespace mixsdg {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent seed for replicate `index` of an experiment seeded with `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix64(seed ^ mix64(stream * 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next() { return mix64(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Exact Poisson draw: Knuth's product method on chunks of mean <= 16.
  std::uint64_t poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw Error("poisson: mean must be finite and >= 0");
    std::uint64_t total = 0;
    double left = mean;
    while (left > 0.0) {
      const double chunk = std::min(left, 16.0);
      left -= chunk;
      const double limit = std::exp(-chunk);
      double prod = uniform();
      while (prod > limit) {
        ++total;
        prod *= uniform();
      }
    }
    return total;
  }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

namespace stream {
inline constexpr std::uint64_t poisson = 1;
inline constexpr std::uint64_t white_noise = 2;
inline constexpr std::uint64_t thomas = 3;
inline constexpr std::uint64_t linked_points = 4;
inline constexpr std::uint64_t linked_noise = 5;
}  // namespace stream

inline PointComponent sim_poisson(double lambda, const Window& window, std::uint64_t seed,
                                  std::string name = "poisson") {
  if (!(lambda > 0.0)) throw Error("sim_poisson: lambda must be positive");
  if (!window.valid()) throw Error("sim_poisson: window of zero area");
  CounterRng rng(seed, stream::poisson);
  const auto n = rng.poisson(lambda * window.area());
  PointComponent out{std::move(name), {}};
  out.locations.reserve(n);
  for (std::uint64_t k = 0; k < n; ++k) {
    const double x = window.x_min + rng.uniform() * window.width();
    const double y = window.y_min + rng.uniform() * window.height();
    out.locations.push_back({x, y});
  }
  return out;
}

/// Fills the sites of `layout` with i.i.d. N(0, sigma2) values.
inline LatticeComponent sim_white_noise_lattice(LatticeComponent layout, double sigma2, std::uint64_t seed) {
  if (!(sigma2 > 0.0)) throw Error("sim_white_noise_lattice: sigma2 must be positive");
  CounterRng rng(seed, stream::white_noise);
  const double sd = std::sqrt(sigma2);
  for (auto& s : layout.sites) s.value = sd * rng.normal();
  return layout;
}

inline LatticeComponent regular_layout(std::string name, int g1, int g2, const Window& window) {
  std::vector<double> zeros(static_cast<std::size_t>(g1) * static_cast<std::size_t>(g2), 0.0);
  return make_regular_lattice(std::move(name), g1, g2, zeros, window);
}

/// Poisson(kappa) parents, Poisson(mu) offspring per parent displaced by
/// N(0, sigma^2 I). Offspring outside the window are discarded.
inline PointComponent sim_thomas(double kappa, double mu, double sigma, const Window& window, std::uint64_t seed,
                                 std::string name = "thomas") {
  if (!(kappa > 0.0) || !(mu > 0.0) || !(sigma > 0.0)) throw Error("sim_thomas: parameters must be positive");
  if (!window.valid()) throw Error("sim_thomas: window of zero area");
  CounterRng rng(seed, stream::thomas);
  const auto parents = rng.poisson(kappa * window.area());
  PointComponent out{std::move(name), {}};
  for (std::uint64_t k = 0; k < parents; ++k) {
    const double px = window.x_min + rng.uniform() * window.width();
    const double py = window.y_min + rng.uniform() * window.height();
    const auto kids = rng.poisson(mu);
    for (std::uint64_t c = 0; c < kids; ++c) {
      const Point p{px + sigma * rng.normal(), py + sigma * rng.normal()};
      if (window.contains(p)) out.locations.push_back(p);
    }
  }
  return out;
}

/// Regular g x g lattice whose value in each cell is the number of points in it.
inline LatticeComponent cell_count_lattice(std::span<const Point> points, int g, const Window& window,
                                           std::string name) {
  if (g < 1) throw Error("cell_count_lattice: g must be positive");
  std::vector<double> counts(static_cast<std::size_t>(g) * g, 0.0);
  for (const auto& p : points) {
    const int s1 = std::clamp(static_cast<int>((p.x - window.x_min) / window.width() * g), 0, g - 1);
    const int s2 = std::clamp(static_cast<int>((p.y - window.y_min) / window.height() * g), 0, g - 1);
    counts[static_cast<std::size_t>(s1) * g + s2] += 1.0;
  }
  return make_regular_lattice(std::move(name), g, g, counts, window);
}

struct Coupling {
  enum class Kind { cell_count, noisy_cell_count } kind = Kind::cell_count;
  double noise_sigma = 0.0;
};

/// Poisson points plus the g x g lattice of their cell counts (optionally
/// with additive Gaussian noise): a pair with genuine cross-dependence.
inline std::pair<PointComponent, LatticeComponent> sim_linked_pair(double lambda, Coupling coupling, int g,
                                                                   const Window& window, std::uint64_t seed) {
  if (g < 2) throw Error("sim_linked_pair: g must be >= 2");
  auto pts = sim_poisson(lambda, window, derive_seed(seed, stream::linked_points), "points");
  auto lat = cell_count_lattice(pts.locations, g, window, "counts");
  if (coupling.kind == Coupling::Kind::noisy_cell_count) {
    if (!(coupling.noise_sigma >= 0.0)) throw Error("sim_linked_pair: noise sigma must be >= 0");
    CounterRng rng(seed, stream::linked_noise);
    for (auto& s : lat.sites) s.value += coupling.noise_sigma * rng.normal();
  }
  return {std::move(pts), std::move(lat)};
}

// ---------------------------------------------------------------------------

struct PoissonSpec {
  double lambda = 100.0;
};
struct ThomasSpec {
  double kappa = 25.0;
  double mu = 20.0;
  double sigma = 0.02;
};
struct WhiteNoiseSpec {
  int g1 = 16;
  int g2 = 16;
  double sigma2 = 1.0;
};
struct LinkedPairSpec {
  double lambda = 500.0;
  Coupling coupling;
  int g = 8;
};

struct SimSpec {
  std::variant<PoissonSpec, ThomasSpec, WhiteNoiseSpec, LinkedPairSpec> kind;
  std::uint64_t seed = 1;
  Window window;
};

/// Components produced by one spec, named `<prefix>` (or `<prefix>_points`
/// and `<prefix>_counts` for a linked pair).
inline std::vector<Component> simulate(const SimSpec& spec, const std::string& prefix = "sim") {
  std::vector<Component> out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, PoissonSpec>) {
          out.emplace_back(sim_poisson(k.lambda, spec.window, spec.seed, prefix));
        } else if constexpr (std::is_same_v<K, ThomasSpec>) {
          out.emplace_back(sim_thomas(k.kappa, k.mu, k.sigma, spec.window, spec.seed, prefix));
        } else if constexpr (std::is_same_v<K, WhiteNoiseSpec>) {
          out.emplace_back(sim_white_noise_lattice(regular_layout(prefix, k.g1, k.g2, spec.window), k.sigma2, spec.seed));
        } else {
          auto [p, l] = sim_linked_pair(k.lambda, k.coupling, k.g, spec.window, spec.seed);
          p.name = prefix + "_points";
          l.name = prefix + "_counts";
          out.emplace_back(std::move(p));
          out.emplace_back(std::move(l));
        }
      },
      spec.kind);
  return out;
}

}  // namespace mixsdg
