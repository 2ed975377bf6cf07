#pragma once

// End-to-end driver: manifest -> validation -> statistics -> spectra ->
// dependence graph -> artifacts on disk.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "mixsdg/format.hpp"
#include "mixsdg/graph.hpp"
#include "mixsdg/graph_io.hpp"
#include "mixsdg/io.hpp"
#include "mixsdg/stats.hpp"

namespace mixsdg {

struct RunConfig {
  fs::path manifest;
  int p_max = 16;
  int q_min = -16;
  int q_max = 15;
  int kernel = kDefaultKernelSize;
  double xi = kDefaultThreshold;
  double ridge = kDefaultRidge;
  std::size_t k = 4;
  std::uint64_t seed = 1;
  fs::path out = "out";
  bool plots = false;
  bool exclude_zeros = false;

  FrequencyGrid grid() const { return {0, p_max, q_min, q_max}; }
  GraphOptions graph_options() const { return {{grid(), kernel, true}, ridge, xi}; }

  void check() const {
    if (p_max < 0 || q_max < q_min) throw Error("config: empty frequency grid");
    if (kernel < 1 || kernel % 2 == 0) throw Error("config: kernel size must be odd and positive");
    if (!(xi > 0.0 && xi < 1.0)) throw Error("config: xi must lie in (0, 1)");
    if (!(ridge >= 0.0)) throw Error("config: ridge must be >= 0");
    if (k < 1) throw Error("config: k must be >= 1");
  }
};

/// Error raised by a pipeline stage; the message is "<stage>: <cause>".
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& cause, bool validation)
      : Error(stage + ": " + cause), stage_(std::move(stage)), validation_(validation) {}
  const std::string& stage() const { return stage_; }
  bool validation_failure() const { return validation_; }

 private:
  std::string stage_;
  bool validation_;
};

template <typename F>
auto run_stage(const std::string& name, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ValidationError& e) {
    throw StageError(name, e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(name, e.what(), false);
  }
}

/// Records every file written so a failed run can remove its partial output.
class ArtifactWriter {
 public:
  explicit ArtifactWriter(fs::path root) : root_(std::move(root)) {}

  void write(const fs::path& rel, const std::string& content) {
    const auto path = root_ / rel;
    const auto dir = path.parent_path();
    std::vector<fs::path> missing;
    for (auto p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) missing.push_back(p);
    fs::create_directories(dir);
    created_dirs_.insert(created_dirs_.end(), missing.begin(), missing.end());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
    files_.push_back(path);
  }

  void rollback() noexcept {
    std::error_code ec;
    for (const auto& f : files_) fs::remove(f, ec);
    for (const auto& d : created_dirs_) fs::remove(d, ec);  // deepest first; only removes empty dirs
    files_.clear();
  }

  const std::vector<fs::path>& files() const { return files_; }
  const fs::path& root() const { return root_; }

 private:
  fs::path root_;
  std::vector<fs::path> files_;
  std::vector<fs::path> created_dirs_;
};

// ---------------------------------------------------------------------------
// Renderers (pure: return file content)

inline std::string render_components_csv(const HybridDataset& ds) {
  std::ostringstream o;
  o << "index,name,kind,n\n";
  for (std::size_t i = 0; i < ds.dimension(); ++i)
    o << i << ',' << detail::csv_escape(component_name(ds.components[i])) << ','
      << to_string(component_kind(ds.components[i])) << ',' << component_size(ds.components[i]) << '\n';
  return o.str();
}

inline std::string render_spectrum_csv(const SpectraCube& cube, std::size_t i, std::size_t j) {
  std::ostringstream o;
  o << "p,q,re,im\n";
  for (std::size_t f = 0; f < cube.grid.size(); ++f) {
    const auto [p, q] = cube.grid.at(f);
    const auto v = cube.at(f, i, j);
    o << p << ',' << q << ',' << fmt_data(v.real()) << ',' << fmt_data(v.imag()) << '\n';
  }
  return o.str();
}

inline std::string render_sup_csv(const SupMatrix& sup, const std::vector<std::string>& names) {
  std::ostringstream o;
  o << "component";
  for (const auto& n : names) o << ',' << detail::csv_escape(n);
  o << '\n';
  for (std::size_t i = 0; i < sup.d; ++i) {
    o << detail::csv_escape(names[i]);
    for (std::size_t j = 0; j < sup.d; ++j) o << ',' << fmt_data(sup(i, j));
    o << '\n';
  }
  return o.str();
}

inline std::string render_stats_csv(const std::vector<ComponentStats>& rows) {
  auto num = [](double v) { return std::isnan(v) ? std::string("NA") : fmt_data(v); };
  std::ostringstream o;
  o << "component,kind,n,min,q25,median,mean,q75,max,lambda,iqr_nn,cei,morans_i,gearys_c\n";
  for (const auto& r : rows) {
    const bool has = r.summary.n >= 1 && !(r.kind == ComponentKind::point && r.summary.n < 2);
    o << detail::csv_escape(r.name) << ',' << to_string(r.kind) << ',' << r.summary.n;
    for (double v : {r.summary.min, r.summary.q25, r.summary.median, r.summary.mean, r.summary.q75, r.summary.max})
      o << ',' << (has ? num(v) : "NA");
    o << ',' << num(r.lambda) << ',' << num(r.nn_iqr) << ',' << num(r.cei) << ',' << num(r.morans_i) << ','
      << num(r.gearys_c) << '\n';
  }
  return o.str();
}

namespace detail {

// Piecewise-linear approximation of the viridis ramp.
inline std::string ramp(double t) {
  static const double stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(std::isnan(t) ? 0.0 : t, 0.0, 1.0) * 4.0;
  const int k = std::min(3, static_cast<int>(t));
  const double u = t - k;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(stops[k][0] + u * (stops[k + 1][0] - stops[k][0])),
                static_cast<int>(stops[k][1] + u * (stops[k + 1][1] - stops[k][1])),
                static_cast<int>(stops[k][2] + u * (stops[k + 1][2] - stops[k][2])));
  return buf;
}

}  // namespace detail

/// log10 |f_ij| heatmap; rows are p, columns q.
inline std::string render_heatmap_svg(const SpectraCube& cube, std::size_t i, std::size_t j) {
  const auto& g = cube.grid;
  const int cell = 14, margin = 40;
  std::vector<double> lv(g.size());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t f = 0; f < g.size(); ++f) {
    const double a = std::abs(cube.at(f, i, j));
    lv[f] = a > 0.0 ? std::log10(a) : std::numeric_limits<double>::quiet_NaN();
    if (std::isfinite(lv[f])) {
      lo = std::min(lo, lv[f]);
      hi = std::max(hi, lv[f]);
    }
  }
  const double span = hi > lo ? hi - lo : 1.0;
  std::ostringstream o;
  const int w = g.cols() * cell + 2 * margin, h = g.rows() * cell + 2 * margin;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  o << "<text x=\"" << margin << "\" y=\"20\" font-size=\"12\">log10 |f| " << detail::xml_escape(cube.names.at(i))
    << " x " << detail::xml_escape(cube.names.at(j)) << " (range " << fmt_display(lo) << " .. " << fmt_display(hi)
    << ")</text>\n";
  for (std::size_t f = 0; f < g.size(); ++f) {
    const auto [p, q] = g.at(f);
    o << "<rect x=\"" << margin + (q - g.q_min) * cell << "\" y=\"" << margin + (p - g.p_min) * cell
      << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"" << detail::ramp((lv[f] - lo) / span)
      << "\"/>\n";
  }
  o << "<text x=\"" << margin << "\" y=\"" << h - 10 << "\" font-size=\"10\">q = " << g.q_min << " .. " << g.q_max
    << " (left to right), p = " << g.p_min << " .. " << g.p_max << " (top to bottom)</text>\n";
  o << "</svg>\n";
  return o.str();
}

/// Circular layout of the dependence graph.
inline std::string render_graph_svg(const DependenceGraph& g) {
  const std::size_t d = g.vertices.size();
  const double size = 520, c = size / 2, r = size / 2 - 90;
  auto pos = [&](std::size_t i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(d, 1));
    return std::pair{c + r * std::cos(a), c + r * std::sin(a)};
  };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
  o << "<text x=\"10\" y=\"20\" font-size=\"12\">xi = " << fmt_display(g.threshold) << ", " << g.edges.size()
    << " edge(s)</text>\n";
  for (const auto& e : g.edges) {
    const auto [x1, y1] = pos(e.a);
    const auto [x2, y2] = pos(e.b);
    o << "<line x1=\"" << fmt_display(x1) << "\" y1=\"" << fmt_display(y1) << "\" x2=\"" << fmt_display(x2)
      << "\" y2=\"" << fmt_display(y2) << "\" stroke=\"#555\" stroke-width=\"" << fmt_display(1.0 + 4.0 * g.sup(e.a, e.b))
      << "\"/>\n";
    o << "<text x=\"" << fmt_display((x1 + x2) / 2) << "\" y=\"" << fmt_display((y1 + y2) / 2)
      << "\" font-size=\"9\" fill=\"#a00\">" << fmt_display(g.sup(e.a, e.b)) << "</text>\n";
  }
  for (std::size_t i = 0; i < d; ++i) {
    const auto [x, y] = pos(i);
    const bool pt = g.kinds[i] == ComponentKind::point;
    o << "<circle cx=\"" << fmt_display(x) << "\" cy=\"" << fmt_display(y) << "\" r=\"10\" fill=\""
      << (pt ? "#4477aa" : "#ee6677") << "\"/>\n";
    o << "<text x=\"" << fmt_display(x + 13) << "\" y=\"" << fmt_display(y + 4) << "\" font-size=\"11\">"
      << detail::xml_escape(g.vertices[i]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Stage writers

inline std::vector<ComponentStats> compute_stats(const HybridDataset& ds, const RunConfig& cfg) {
  std::vector<ComponentStats> rows;
  for (const auto& c : ds.components) rows.push_back(component_stats(c, ds.window, {cfg.k, cfg.exclude_zeros}));
  return rows;
}

inline void write_spectra(ArtifactWriter& w, const SpectraCube& cube) {
  for (std::size_t i = 0; i < cube.d; ++i)
    for (std::size_t j = i; j < cube.d; ++j)
      w.write(fs::path("spectra") / (std::to_string(i) + "_" + std::to_string(j) + ".csv"),
              render_spectrum_csv(cube, i, j));
}

inline void write_graph(ArtifactWriter& w, const DependenceGraph& g) {
  w.write("sup_matrix.csv", render_sup_csv(g.sup, g.vertices));
  w.write("graph.dot", export_graph(g, GraphFormat::dot));
  w.write("graph.json", export_graph(g, GraphFormat::json));
  w.write("graph.graphml", export_graph(g, GraphFormat::graphml));
}

inline void write_plots(ArtifactWriter& w, const SpectraCube& cube, const DependenceGraph& g) {
  for (std::size_t i = 0; i < cube.d; ++i)
    for (std::size_t j = i; j < cube.d; ++j)
      w.write(fs::path("plots") / ("spectrum_" + std::to_string(i) + "_" + std::to_string(j) + ".svg"),
              render_heatmap_svg(cube, i, j));
  w.write(fs::path("plots") / "graph.svg", render_graph_svg(g));
}

struct RunResult {
  HybridDataset dataset;
  ValidationReport report;
  std::vector<ComponentStats> stats;
  GraphEstimate estimate;
  std::vector<fs::path> files;
};

/// Full pipeline. On any stage failure the files written so far are removed
/// and a StageError naming the stage is thrown.
inline RunResult run_pipeline(const RunConfig& cfg) {
  RunResult res;
  ArtifactWriter w(cfg.out);
  try {
    run_stage("config", [&] { cfg.check(); });
    res.dataset = run_stage("ingest", [&] { return read_manifest(cfg.manifest); });
    res.report = run_stage("validate", [&] {
      require_valid(res.dataset);
      return validate(res.dataset);
    });
    res.stats = run_stage("stats", [&] { return compute_stats(res.dataset, cfg); });
    auto opts = cfg.graph_options();
    res.estimate.cube = run_stage("spectra", [&] { return assemble_cube(res.dataset, opts.assemble); });
    run_stage("graph", [&] {
      res.estimate.inverse = invert(res.estimate.cube, opts.ridge);
      res.estimate.strength = partial_strength(res.estimate.inverse);
      res.estimate.sup = sup_statistic(res.estimate.strength);
      res.estimate.graph = build_graph(res.estimate.sup, opts.xi, res.dataset.names(), res.dataset.kinds());
    });
    run_stage("export", [&] {
      w.write("components.csv", render_components_csv(res.dataset));
      w.write("stats.csv", render_stats_csv(res.stats));
      write_spectra(w, res.estimate.cube);
      write_graph(w, res.estimate.graph);
      if (cfg.plots) write_plots(w, res.estimate.cube, res.estimate.graph);
    });
  } catch (...) {
    w.rollback();
    throw;
  }
  res.files = w.files();
  return res;
}

}  // namespace mixsdg
