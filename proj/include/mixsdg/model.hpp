#pragma once

// Core domain types for multivariate spatial hybrid data: point and lattice
// components over a shared rectangular window, the canonical marked-point
// form, frequency grids and the spectral / graph containers built on them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mixsdg {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a dataset fails validation (the CLI maps this to exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Window {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 1.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  bool valid() const {
    return std::isfinite(area()) && x_max > x_min && y_max > y_min && area() > 0.0;
  }
  bool contains(Point p) const {
    return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
  }

  static Window unit() { return {}; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct PointComponent {
  std::string name;
  std::vector<Point> locations;
};

struct CellIndex {
  int s1 = 0;
  int s2 = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct LatticeSite {
  std::string id;
  Point centroid;
  double value = 0.0;
  std::optional<CellIndex> cell;  // set for regular lattices only
};

struct RegularShape {
  int l1 = 0;
  int l2 = 0;
};

struct LatticeComponent {
  std::string name;
  std::vector<LatticeSite> sites;
  std::optional<RegularShape> regular;  // nullopt: irregular (polygons / free centroids)

  bool is_regular() const { return regular.has_value(); }
  std::vector<double> values() const {
    std::vector<double> v;
    v.reserve(sites.size());
    for (const auto& s : sites) v.push_back(s.value);
    return v;
  }
};

using Component = std::variant<PointComponent, LatticeComponent>;

enum class ComponentKind { point, lattice };

inline const std::string& component_name(const Component& c) {
  return std::visit([](const auto& x) -> const std::string& { return x.name; }, c);
}

inline ComponentKind component_kind(const Component& c) {
  return std::holds_alternative<PointComponent>(c) ? ComponentKind::point : ComponentKind::lattice;
}

inline std::size_t component_size(const Component& c) {
  if (const auto* p = std::get_if<PointComponent>(&c)) return p->locations.size();
  return std::get<LatticeComponent>(c).sites.size();
}

inline const char* to_string(ComponentKind k) {
  return k == ComponentKind::point ? "point" : "lattice";
}

/// Components in declaration order; index i is vertex i of the dependence graph.
struct HybridDataset {
  Window window;
  std::vector<Component> components;

  std::size_t dimension() const { return components.size(); }
  std::size_t point_count() const {
    return static_cast<std::size_t>(std::count_if(components.begin(), components.end(), [](const auto& c) {
      return component_kind(c) == ComponentKind::point;
    }));
  }
  std::size_t lattice_count() const { return dimension() - point_count(); }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& c : components) out.push_back(component_name(c));
    return out;
  }
  std::vector<ComponentKind> kinds() const {
    std::vector<ComponentKind> out;
    for (const auto& c : components) out.push_back(component_kind(c));
    return out;
  }
};

enum class PatternKind { point_derived, lattice_derived };

struct MarkedPoint {
  double x = 0.0;
  double y = 0.0;
  double mark = 1.0;
};

/// Locations in the unit square with one real mark each.
struct MarkedPattern {
  std::string name;
  std::vector<MarkedPoint> points;
  PatternKind kind = PatternKind::point_derived;

  double mark_abs_sum() const {
    double s = 0.0;
    for (const auto& p : points) s += std::abs(p.mark);
    return s;
  }

  // Throws Error on a broken invariant.
  void check() const {
    double sum = 0.0;
    for (const auto& p : points) {
      if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
        throw Error("marked pattern '" + name + "': location outside the unit square");
      if (!std::isfinite(p.mark)) throw Error("marked pattern '" + name + "': non-finite mark");
      if (kind == PatternKind::point_derived && p.mark != 1.0)
        throw Error("marked pattern '" + name + "': point-derived marks must equal 1");
      sum += p.mark;
    }
    if (kind == PatternKind::lattice_derived && std::abs(sum) > 1e-9 * mark_abs_sum())
      throw Error("marked pattern '" + name + "': lattice-derived marks are not demeaned");
  }
};

struct Frequency {
  int p = 0;
  int q = 0;
  friend bool operator==(const Frequency&, const Frequency&) = default;
  friend auto operator<=>(const Frequency&, const Frequency&) = default;
};

/// Integer frequency lattice {p_min..p_max} x {q_min..q_max}. Storage order is
/// p-major, so flat index order equals lexicographic (p, q) order.
struct FrequencyGrid {
  int p_min = 0;
  int p_max = 16;
  int q_min = -16;
  int q_max = 15;

  static FrequencyGrid standard() { return {}; }
  static FrequencyGrid lattice_native(int l1, int l2) { return {0, l1 - 1, 0, l2 - 1}; }

  int rows() const { return p_max - p_min + 1; }
  int cols() const { return q_max - q_min + 1; }
  std::size_t size() const {
    return valid() ? static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols()) : 0;
  }
  bool valid() const { return p_max >= p_min && q_max >= q_min; }
  bool contains(int p, int q) const { return p >= p_min && p <= p_max && q >= q_min && q <= q_max; }
  std::size_t index(int p, int q) const {
    return static_cast<std::size_t>(p - p_min) * static_cast<std::size_t>(cols()) +
           static_cast<std::size_t>(q - q_min);
  }
  Frequency at(std::size_t idx) const {
    const auto c = static_cast<std::size_t>(cols());
    return {p_min + static_cast<int>(idx / c), q_min + static_cast<int>(idx % c)};
  }
  FrequencyGrid padded(int h) const { return {p_min - h, p_max + h, q_min - h, q_max + h}; }

  void check() const {
    if (!valid()) throw Error("frequency grid is empty");
  }
  friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;
};

/// A scalar field over a frequency grid. `smoothed` records whether the field
/// went through kernel smoothing (coherence refuses raw input by default).
template <typename T>
struct FrequencyField {
  FrequencyGrid grid;
  std::vector<T> values;
  bool smoothed = false;

  FrequencyField() = default;
  explicit FrequencyField(FrequencyGrid g, T fill = T{}) : grid(g), values(g.size(), fill) {}

  T& operator()(int p, int q) { return values[grid.index(p, q)]; }
  const T& operator()(int p, int q) const { return values[grid.index(p, q)]; }
  std::size_t size() const { return values.size(); }
};

using ComplexField = FrequencyField<std::complex<double>>;
using RealField = FrequencyField<double>;

/// d x d complex spectral matrix at every frequency of the grid (row-major per frequency).
struct SpectraCube {
  FrequencyGrid grid;
  std::size_t d = 0;
  std::vector<std::complex<double>> entries;
  bool smoothed = false;
  std::vector<std::string> names;

  SpectraCube() = default;
  SpectraCube(FrequencyGrid g, std::size_t dim) : grid(g), d(dim), entries(g.size() * dim * dim) {}

  std::span<std::complex<double>> matrix(std::size_t f) { return {entries.data() + f * d * d, d * d}; }
  std::span<const std::complex<double>> matrix(std::size_t f) const {
    return {entries.data() + f * d * d, d * d};
  }
  std::complex<double>& at(std::size_t f, std::size_t i, std::size_t j) { return entries[(f * d + i) * d + j]; }
  const std::complex<double>& at(std::size_t f, std::size_t i, std::size_t j) const {
    return entries[(f * d + i) * d + j];
  }

  ComplexField pair_field(std::size_t i, std::size_t j) const {
    ComplexField out(grid);
    out.smoothed = smoothed;
    for (std::size_t f = 0; f < grid.size(); ++f) out.values[f] = at(f, i, j);
    return out;
  }

  double max_hermitian_deviation() const {
    double worst = 0.0;
    for (std::size_t f = 0; f < grid.size(); ++f)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j)
          worst = std::max(worst, std::abs(at(f, i, j) - std::conj(at(f, j, i))));
    return worst;
  }
};

struct SupMatrix {
  std::size_t d = 0;
  std::vector<double> values;       // d*d, symmetric, diagonal 1
  std::vector<Frequency> argmax;    // d*d, symmetric

  SupMatrix() = default;
  explicit SupMatrix(std::size_t dim) : d(dim), values(dim * dim, 0.0), argmax(dim * dim) {
    for (std::size_t i = 0; i < d; ++i) values[i * d + i] = 1.0;
  }
  double operator()(std::size_t i, std::size_t j) const { return values[i * d + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * d + j]; }
};

struct Edge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DependenceGraph {
  std::vector<std::string> vertices;
  std::vector<ComponentKind> kinds;
  std::vector<Edge> edges;  // sorted
  SupMatrix sup;
  double threshold = 0.3;

  bool has_edge(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return std::binary_search(edges.begin(), edges.end(), Edge{i, j});
  }
  std::vector<std::size_t> isolated() const {
    std::vector<bool> touched(vertices.size(), false);
    for (const auto& e : edges) touched[e.a] = touched[e.b] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < touched.size(); ++i)
      if (!touched[i]) out.push_back(i);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Validation

enum class Severity { warning, fatal };

struct Finding {
  Severity severity = Severity::warning;
  std::string component;  // empty for dataset-level findings
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool accepted() const {
    return std::none_of(findings.begin(), findings.end(),
                        [](const Finding& f) { return f.severity == Severity::fatal; });
  }
  std::size_t fatal_count() const {
    return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                  [](const Finding& f) { return f.severity == Severity::fatal; }));
  }
};

namespace detail {

inline void validate_points(const PointComponent& c, const Window& w, ValidationReport& r) {
  if (c.locations.empty()) {
    r.findings.push_back({Severity::fatal, c.name, "empty component"});
    return;
  }
  std::size_t outside = 0;
  std::set<std::pair<double, double>> seen;
  std::size_t dups = 0;
  for (const auto& p : c.locations) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !w.contains(p)) ++outside;
    if (!seen.emplace(p.x, p.y).second) ++dups;
  }
  if (outside > 0)
    r.findings.push_back({Severity::fatal, c.name, std::to_string(outside) + " point(s) out of window"});
  if (dups > 0)
    r.findings.push_back({Severity::warning, c.name, std::to_string(dups) + " duplicate coordinate(s)"});
  if (c.locations.size() == 1)
    r.findings.push_back({Severity::warning, c.name, "single point; nearest-neighbour statistics undefined"});
}

inline void validate_lattice(const LatticeComponent& c, const Window& w, ValidationReport& r) {
  if (c.sites.empty()) {
    r.findings.push_back({Severity::fatal, c.name, "empty component"});
    return;
  }
  std::set<std::string> ids;
  std::size_t outside = 0;
  std::size_t nonfinite = 0;
  for (const auto& s : c.sites) {
    if (!ids.insert(s.id).second)
      r.findings.push_back({Severity::fatal, c.name, "duplicate site id '" + s.id + "'"});
    if (!w.contains(s.centroid)) ++outside;
    if (!std::isfinite(s.value)) ++nonfinite;
  }
  if (outside > 0)
    r.findings.push_back({Severity::fatal, c.name, std::to_string(outside) + " centroid(s) out of window"});
  if (nonfinite > 0)
    r.findings.push_back({Severity::fatal, c.name, std::to_string(nonfinite) + " non-finite value(s)"});
  if (c.regular) {
    const auto [l1, l2] = *c.regular;
    if (l1 < 1 || l2 < 1 || c.sites.size() != static_cast<std::size_t>(l1) * static_cast<std::size_t>(l2)) {
      r.findings.push_back({Severity::fatal, c.name, "regular lattice does not enumerate a full grid"});
    } else {
      std::set<std::pair<int, int>> cells;
      for (const auto& s : c.sites) {
        if (!s.cell || s.cell->s1 < 0 || s.cell->s1 >= l1 || s.cell->s2 < 0 || s.cell->s2 >= l2 ||
            !cells.emplace(s.cell->s1, s.cell->s2).second) {
          r.findings.push_back({Severity::fatal, c.name, "regular lattice does not enumerate a full grid"});
          break;
        }
      }
    }
  }
  const auto v = c.values();
  if (v.size() >= 1 && std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); }))
    r.findings.push_back({Severity::warning, c.name, "constant values; demeaned marks are all zero"});
}

}  // namespace detail

inline ValidationReport validate(const HybridDataset& ds) {
  ValidationReport r;
  if (!ds.window.valid()) r.findings.push_back({Severity::fatal, "", "window of zero area"});
  if (ds.dimension() < 2) r.findings.push_back({Severity::fatal, "", "fewer than two components"});
  std::set<std::string> names;
  for (const auto& c : ds.components) {
    if (!names.insert(component_name(c)).second)
      r.findings.push_back({Severity::fatal, component_name(c), "duplicate component name"});
  }
  for (const auto& c : ds.components) {
    if (const auto* p = std::get_if<PointComponent>(&c))
      detail::validate_points(*p, ds.window, r);
    else
      detail::validate_lattice(std::get<LatticeComponent>(c), ds.window, r);
  }
  return r;
}

/// Throws ValidationError carrying the first fatal finding.
inline void require_valid(const HybridDataset& ds) {
  const auto r = validate(ds);
  if (r.accepted()) return;
  for (const auto& f : r.findings) {
    if (f.severity == Severity::fatal)
      throw ValidationError(f.component.empty() ? f.message : f.component + ": " + f.message);
  }
}

}  // namespace mixsdg
