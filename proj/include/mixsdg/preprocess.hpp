#pragma once

// Raw components -> canonical marked patterns on the unit square.

#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "mixsdg/model.hpp"

namespace mixsdg {

struct Polygon {
  std::vector<Point> exterior;            // closed: first == last
  std::vector<std::vector<Point>> holes;  // closed rings
};

/// Affine map of the window onto [0,1]^2.
inline std::vector<Point> rescale_unit_square(std::span<const Point> points, const Window& window) {
  if (!window.valid()) throw Error("rescale: window of zero area");
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    if (!window.contains(p)) throw Error("rescale: point outside window");
    // clamp guards against x_min + width rounding a hair past 1
    out.push_back({std::clamp((p.x - window.x_min) / window.width(), 0.0, 1.0),
                   std::clamp((p.y - window.y_min) / window.height(), 0.0, 1.0)});
  }
  return out;
}

/// x* = n x / l1, y* = n y / l2. Standalone alternative to unit-square
/// rescaling; the graph pipeline does not use it.
inline std::vector<Point> standardize_coords(std::span<const Point> points, std::size_t n, double l1, double l2) {
  if (n < 1) throw Error("standardize_coords: n must be >= 1");
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw Error("standardize_coords: side lengths must be positive");
  const double nd = static_cast<double>(n);
  std::vector<Point> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back({nd * p.x / l1, nd * p.y / l2});
  return out;
}

/// Subtracts the global arithmetic mean.
inline std::vector<double> demean(std::span<const double> values) {
  if (values.empty()) throw Error("demean: empty input");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  std::vector<double> out(values.begin(), values.end());
  for (auto& v : out) v -= mean;
  // second pass removes the rounding residue of the first mean
  const double resid = std::accumulate(out.begin(), out.end(), 0.0) / static_cast<double>(out.size());
  for (auto& v : out) v -= resid;
  return out;
}

namespace detail {

struct RingMoments {
  double area = 0.0;  // unsigned
  double cx = 0.0;
  double cy = 0.0;
};

inline RingMoments ring_moments(const std::vector<Point>& ring) {
  if (ring.size() < 4 || !(ring.front() == ring.back()))
    throw Error("polygon ring must be closed with at least 3 distinct vertices");
  // shoelace relative to the first vertex for conditioning
  const Point o = ring.front();
  double a2 = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
    const double x0 = ring[k].x - o.x, y0 = ring[k].y - o.y;
    const double x1 = ring[k + 1].x - o.x, y1 = ring[k + 1].y - o.y;
    const double cross = x0 * y1 - x1 * y0;
    a2 += cross;
    sx += (x0 + x1) * cross;
    sy += (y0 + y1) * cross;
  }
  if (a2 == 0.0) return {};
  return {std::abs(a2) / 2.0, o.x + sx / (3.0 * a2), o.y + sy / (3.0 * a2)};
}

}  // namespace detail

/// Area-weighted centroid; holes subtract.
inline Point polygon_centroid(const Polygon& poly) {
  const auto ext = detail::ring_moments(poly.exterior);
  double area = ext.area;
  double mx = ext.area * ext.cx;
  double my = ext.area * ext.cy;
  for (const auto& h : poly.holes) {
    const auto m = detail::ring_moments(h);
    area -= m.area;
    mx -= m.area * m.cx;
    my -= m.area * m.cy;
  }
  if (!(area > 0.0)) throw Error("polygon has zero area");
  return {mx / area, my / area};
}

/// Centroid of several disjoint polygons (multi-polygon feature).
inline Point polygon_centroid(std::span<const Polygon> parts) {
  double area = 0.0, mx = 0.0, my = 0.0;
  for (const auto& poly : parts) {
    double a = detail::ring_moments(poly.exterior).area;
    for (const auto& h : poly.holes) a -= detail::ring_moments(h).area;
    if (!(a > 0.0)) continue;
    const auto c = polygon_centroid(poly);
    area += a;
    mx += a * c.x;
    my += a * c.y;
  }
  if (!(area > 0.0)) throw Error("polygon has zero area");
  return {mx / area, my / area};
}

/// Builds a regular l1 x l2 lattice whose sites are the cell centres of the
/// window split into l1 x l2 cells. `values` is indexed [s1 * l2 + s2].
inline LatticeComponent make_regular_lattice(std::string name, int l1, int l2, std::span<const double> values,
                                             const Window& window) {
  if (l1 < 1 || l2 < 1) throw Error("regular lattice needs positive dimensions");
  if (values.size() != static_cast<std::size_t>(l1) * static_cast<std::size_t>(l2))
    throw Error("regular lattice: value count does not match l1*l2");
  LatticeComponent out{std::move(name), {}, RegularShape{l1, l2}};
  out.sites.reserve(values.size());
  const double cw = window.width() / l1;
  const double ch = window.height() / l2;
  for (int s1 = 0; s1 < l1; ++s1) {
    for (int s2 = 0; s2 < l2; ++s2) {
      LatticeSite site;
      site.id = std::to_string(s1) + "_" + std::to_string(s2);
      site.centroid = {window.x_min + (s1 + 0.5) * cw, window.y_min + (s2 + 0.5) * ch};
      site.value = values[static_cast<std::size_t>(s1) * l2 + s2];
      site.cell = CellIndex{s1, s2};
      out.sites.push_back(std::move(site));
    }
  }
  return out;
}

inline MarkedPattern to_marked_pattern(const PointComponent& c, const Window& window) {
  if (c.locations.empty()) throw Error("component '" + c.name + "' is empty");
  MarkedPattern out{c.name, {}, PatternKind::point_derived};
  const auto unit = rescale_unit_square(c.locations, window);
  out.points.reserve(unit.size());
  for (const auto& p : unit) out.points.push_back({p.x, p.y, 1.0});
  return out;
}

inline MarkedPattern to_marked_pattern(const LatticeComponent& c, const Window& window) {
  if (c.sites.empty()) throw Error("component '" + c.name + "' is empty");
  std::vector<Point> centroids;
  centroids.reserve(c.sites.size());
  for (const auto& s : c.sites) centroids.push_back(s.centroid);
  const auto unit = rescale_unit_square(centroids, window);
  const auto marks = demean(c.values());
  MarkedPattern out{c.name, {}, PatternKind::lattice_derived};
  out.points.reserve(unit.size());
  for (std::size_t k = 0; k < unit.size(); ++k) out.points.push_back({unit[k].x, unit[k].y, marks[k]});
  return out;
}

inline MarkedPattern to_marked_pattern(const Component& c, const Window& window) {
  return std::visit([&](const auto& x) { return to_marked_pattern(x, window); }, c);
}

}  // namespace mixsdg
