#pragma once

// Descriptive spatial statistics: nearest-neighbour summaries, Clark-Evans
// index, spatial weights, Moran's I and Geary's C.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "mixsdg/model.hpp"

namespace mixsdg {

/// Type-7 (linear interpolation) sample quantile of sorted data.
inline double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw Error("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct Describe {
  std::size_t n = 0;
  double min = 0.0, q25 = 0.0, median = 0.0, mean = 0.0, q75 = 0.0, max = 0.0;
};

inline Describe describe(std::span<const double> values) {
  if (values.empty()) throw Error("describe: empty sample");
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return {s.size(),
          s.front(),
          quantile_sorted(s, 0.25),
          quantile_sorted(s, 0.5),
          std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size()),
          quantile_sorted(s, 0.75),
          s.back()};
}

/// Euclidean distance from every point to its nearest other point, using a
/// uniform bucket grid (expected O(n) for spread-out patterns).
inline std::vector<double> nearest_neighbour_distances(std::span<const Point> pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw Error("nearest-neighbour distances need at least two points");
  double x0 = pts[0].x, x1 = pts[0].x, y0 = pts[0].y, y1 = pts[0].y;
  for (const auto& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double span = std::max({x1 - x0, y1 - y0, 1e-300});
  const int g = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n) / 2.0)));
  const double cell = span / g;
  auto cell_of = [&](double v, double o) { return std::clamp(static_cast<int>((v - o) / cell), 0, g - 1); };

  std::vector<std::vector<std::size_t>> buckets(static_cast<std::size_t>(g) * g);
  for (std::size_t k = 0; k < n; ++k)
    buckets[static_cast<std::size_t>(cell_of(pts[k].x, x0)) * g + cell_of(pts[k].y, y0)].push_back(k);

  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const int cx = cell_of(pts[k].x, x0), cy = cell_of(pts[k].y, y0);
    double best2 = std::numeric_limits<double>::infinity();
    for (int ring = 0; ring <= g; ++ring) {
      // every unvisited point is at least (ring - 1) * cell away
      if (ring > 1) {
        const double bound = (ring - 1) * cell;
        if (bound * bound > best2) break;
      }
      for (int ix = cx - ring; ix <= cx + ring; ++ix) {
        if (ix < 0 || ix >= g) continue;
        for (int iy = cy - ring; iy <= cy + ring; ++iy) {
          if (iy < 0 || iy >= g) continue;
          if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != ring) continue;
          for (const auto m : buckets[static_cast<std::size_t>(ix) * g + iy]) {
            if (m == k) continue;
            const double dx = pts[m].x - pts[k].x, dy = pts[m].y - pts[k].y;
            best2 = std::min(best2, dx * dx + dy * dy);
          }
        }
      }
    }
    out[k] = std::sqrt(best2);
  }
  return out;
}

struct NNSummary {
  double mean = 0.0;    // mu_D
  double median = 0.0;  // tau_D
  double iqr = 0.0;     // IQR_D
};

inline NNSummary nn_summary(std::span<const Point> pts) {
  auto d = nearest_neighbour_distances(pts);
  const auto s = describe(d);
  return {s.mean, s.median, s.q75 - s.q25};
}

/// CEI = mu_D / (1 / (2 sqrt(lambda))), lambda = n / |S|. No edge correction.
inline double clark_evans(std::span<const Point> pts, const Window& window) {
  if (!window.valid()) throw Error("clark_evans: window of zero area");
  if (pts.size() < 2) throw Error("clark_evans: need at least two points");
  const double lambda = static_cast<double>(pts.size()) / window.area();
  return nn_summary(pts).mean * 2.0 * std::sqrt(lambda);
}

// ---------------------------------------------------------------------------
// Spatial weights

enum class WeightStyle { raw, row_standardised };

struct WeightMatrix {
  std::size_t n = 0;
  std::vector<double> w;  // n*n, zero diagonal
  WeightStyle style = WeightStyle::raw;
  std::string construction;
  std::vector<std::string> warnings;

  double operator()(std::size_t i, std::size_t j) const { return w[i * n + j]; }
  double sum() const { return std::accumulate(w.begin(), w.end(), 0.0); }
};

namespace detail {

inline void row_standardise(WeightMatrix& m) {
  for (std::size_t i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.n; ++j) s += m.w[i * m.n + j];
    if (s > 0.0)
      for (std::size_t j = 0; j < m.n; ++j) m.w[i * m.n + j] /= s;
  }
  m.style = WeightStyle::row_standardised;
}

}  // namespace detail

/// Binary k-nearest-neighbour weights, symmetrised by max. Distance ties are
/// broken by site index.
inline WeightMatrix knn_weights(std::span<const Point> centroids, std::size_t k,
                                WeightStyle style = WeightStyle::row_standardised) {
  const std::size_t n = centroids.size();
  if (k < 1 || k >= n) throw Error("knn_weights: need 1 <= k < n");
  WeightMatrix m{n, std::vector<double>(n * n, 0.0), WeightStyle::raw, "knn(" + std::to_string(k) + ")", {}};
  std::size_t dup = 0;
  std::vector<std::pair<double, std::size_t>> order(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = centroids[j].x - centroids[i].x, dy = centroids[j].y - centroids[i].y;
      const double d2 = dx * dx + dy * dy;
      if (d2 == 0.0 && j > i) ++dup;
      order[c++] = {d2, j};
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end());
    for (std::size_t r = 0; r < k; ++r) {
      const auto j = order[r].second;
      m.w[i * n + j] = 1.0;
      m.w[j * n + i] = 1.0;
    }
  }
  if (dup > 0) m.warnings.push_back(std::to_string(dup) + " duplicate centroid pair(s); k-NN ties broken by site order");
  if (style == WeightStyle::row_standardised) detail::row_standardise(m);
  return m;
}

/// Binary weights for pairs within distance r (inclusive).
inline WeightMatrix distance_band_weights(std::span<const Point> centroids, double r,
                                          WeightStyle style = WeightStyle::row_standardised) {
  if (!(r > 0.0)) throw Error("distance_band_weights: radius must be positive");
  const std::size_t n = centroids.size();
  WeightMatrix m{n, std::vector<double>(n * n, 0.0), WeightStyle::raw, "band(" + std::to_string(r) + ")", {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::hypot(centroids[j].x - centroids[i].x, centroids[j].y - centroids[i].y) <= r)
        m.w[i * n + j] = m.w[j * n + i] = 1.0;
  if (style == WeightStyle::row_standardised) detail::row_standardise(m);
  return m;
}

namespace detail {

inline std::vector<double> centred(std::span<const double> values, const WeightMatrix& w, const char* who) {
  if (values.size() != w.n) throw Error(std::string(who) + ": weight matrix does not match values");
  if (values.size() < 2) throw Error(std::string(who) + ": need at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) throw Error(std::string(who) + ": zero variance");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  std::vector<double> z(values.begin(), values.end());
  for (auto& v : z) v -= mean;
  return z;
}

}  // namespace detail

/// I = (n / S0) sum_ij w_ij z_i z_j / sum_i z_i^2.
inline double morans_i(std::span<const double> values, const WeightMatrix& w) {
  const auto z = detail::centred(values, w, "morans_i");
  const std::size_t n = z.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += z[i] * z[i];
    for (std::size_t j = 0; j < n; ++j) num += w(i, j) * z[i] * z[j];
  }
  const double s0 = w.sum();
  if (!(s0 > 0.0)) throw Error("morans_i: weights sum to zero");
  return (static_cast<double>(n) / s0) * num / den;
}

/// C = ((n - 1) / (2 S0)) sum_ij w_ij (z_i - z_j)^2 / sum_i z_i^2.
inline double gearys_c(std::span<const double> values, const WeightMatrix& w) {
  const auto z = detail::centred(values, w, "gearys_c");
  const std::size_t n = z.size();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    den += z[i] * z[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = z[i] - z[j];
      num += w(i, j) * diff * diff;
    }
  }
  const double s0 = w.sum();
  if (!(s0 > 0.0)) throw Error("gearys_c: weights sum to zero");
  return (static_cast<double>(n) - 1.0) / (2.0 * s0) * num / den;
}

// ---------------------------------------------------------------------------
// Per-component summary table

struct StatsOptions {
  std::size_t k = 4;
  bool exclude_zeros = false;  // drop zero-valued lattice sites
};

struct ComponentStats {
  std::string name;
  ComponentKind kind = ComponentKind::point;
  Describe summary;  // NN distances (points) or values (lattice)
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double nn_iqr = std::numeric_limits<double>::quiet_NaN();
  double cei = std::numeric_limits<double>::quiet_NaN();
  double morans_i = std::numeric_limits<double>::quiet_NaN();
  double gearys_c = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> notes;
};

inline ComponentStats component_stats(const Component& c, const Window& window, const StatsOptions& opt = {}) {
  ComponentStats s;
  s.name = component_name(c);
  s.kind = component_kind(c);
  if (const auto* pc = std::get_if<PointComponent>(&c)) {
    s.lambda = static_cast<double>(pc->locations.size()) / window.area();
    if (pc->locations.size() < 2) {
      s.summary.n = pc->locations.size();
      s.notes.push_back("fewer than two points");
      return s;
    }
    const auto d = nearest_neighbour_distances(pc->locations);
    s.summary = describe(d);
    s.summary.n = pc->locations.size();
    s.nn_iqr = s.summary.q75 - s.summary.q25;
    s.cei = s.summary.mean * 2.0 * std::sqrt(s.lambda);
    return s;
  }
  const auto& lc = std::get<LatticeComponent>(c);
  std::vector<double> vals;
  std::vector<Point> cents;
  for (const auto& site : lc.sites) {
    if (opt.exclude_zeros && site.value == 0.0) continue;
    vals.push_back(site.value);
    cents.push_back(site.centroid);
  }
  if (vals.empty()) {
    s.notes.push_back("no sites");
    return s;
  }
  s.summary = describe(vals);
  if (vals.size() < 2) return s;
  try {
    const auto w = knn_weights(cents, std::min(opt.k, vals.size() - 1));
    for (const auto& wn : w.warnings) s.notes.push_back(wn);
    s.morans_i = morans_i(vals, w);
    s.gearys_c = gearys_c(vals, w);
  } catch (const Error& e) {
    s.notes.push_back(e.what());
  }
  return s;
}

}  // namespace mixsdg
