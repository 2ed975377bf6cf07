#pragma once

// Mixed spatial dependence graph: smoothed spectral matrices over the
// frequency grid, their (ridge-guarded) inverses, the absolute rescaled
// inverse spectral density |g_ij| / sqrt(g_ii g_jj) per frequency, its
// supremum over frequencies, and the thresholded undirected graph.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mixsdg/model.hpp"
#include "mixsdg/preprocess.hpp"
#include "mixsdg/spectral.hpp"

namespace mixsdg {

inline constexpr int kDefaultKernelSize = 11;
inline constexpr double kDefaultThreshold = 0.3;
inline constexpr double kDefaultRidge = 1e-8;
inline constexpr double kConditionLimit = 1e10;

struct AssembleOptions {
  FrequencyGrid grid = FrequencyGrid::standard();
  int kernel_size = kDefaultKernelSize;
  bool smooth = true;
};

namespace detail {

inline FrequencyField<std::uint8_t> dc_mask(const FrequencyGrid& g) {
  FrequencyField<std::uint8_t> m(g, 0);
  if (g.contains(0, 0)) m(0, 0) = 1;
  return m;
}

}  // namespace detail

/// Cross-periodogram matrix of every ordered pair of marked patterns.
///
/// DFTs are evaluated on the target grid padded by the kernel half-width so
/// that every target frequency is smoothed with the full kernel; (0,0) is
/// excluded from every smoothing window (it carries the level n for point
/// components). The result is cropped back to `opt.grid`.
inline SpectraCube assemble_cube(std::span<const MarkedPattern> patterns, const AssembleOptions& opt = {}) {
  opt.grid.check();
  const std::size_t d = patterns.size();
  if (d == 0) throw Error("assemble_cube: no components");
  const auto kernel = SmoothingKernel::uniform(opt.kernel_size);
  if (opt.smooth && (kernel.size() > opt.grid.rows() || kernel.size() > opt.grid.cols()))
    throw Error("smooth: kernel larger than grid");

  const auto work = opt.smooth ? opt.grid.padded(kernel.half()) : opt.grid;
  std::vector<ComplexField> dfts;
  dfts.reserve(d);
  for (const auto& p : patterns) dfts.push_back(dft_marked(p, work));

  const auto mask = detail::dc_mask(work);
  SpectraCube cube(opt.grid, d);
  cube.smoothed = opt.smooth;
  for (const auto& p : patterns) cube.names.push_back(p.name);

  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      auto fij = cross_periodogram(dfts[i], dfts[j]);
      if (opt.smooth) fij = smooth(fij, kernel, &mask);
      for (std::size_t f = 0; f < opt.grid.size(); ++f) {
        const auto [p, q] = opt.grid.at(f);
        auto v = fij(p, q);
        if (i == j) v = {v.real(), 0.0};
        cube.at(f, i, j) = v;
        cube.at(f, j, i) = std::conj(v);
      }
    }
  }
  return cube;
}

inline SpectraCube assemble_cube(const HybridDataset& ds, const AssembleOptions& opt = {}) {
  std::vector<MarkedPattern> patterns;
  patterns.reserve(ds.dimension());
  for (const auto& c : ds.components) patterns.push_back(to_marked_pattern(c, ds.window));
  return assemble_cube(patterns, opt);
}

// ---------------------------------------------------------------------------

struct InverseCube {
  FrequencyGrid grid;
  std::size_t d = 0;
  std::vector<std::complex<double>> entries;
  std::vector<std::uint8_t> excluded;  // failed inversion at this frequency
  std::vector<double> ridge_used;      // absolute diagonal shift, 0 when not needed

  std::complex<double> at(std::size_t f, std::size_t i, std::size_t j) const { return entries[(f * d + i) * d + j]; }
};

namespace detail {

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

inline double condition_number(const CMat& a, double* min_eig = nullptr) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const auto& ev = es.eigenvalues();
  const double lo = ev(0), hi = ev(ev.size() - 1);
  if (min_eig) *min_eig = lo;
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace detail

/// G(w) = F(w)^{-1}; when cond(F) > 1e10 the diagonal is shifted by
/// ridge * tr(F)/d first. Frequencies whose matrix is still not positive
/// definite (or not finite) are flagged in `excluded`.
inline InverseCube invert(const SpectraCube& cube, double ridge = kDefaultRidge) {
  if (!cube.smoothed) throw Error("invert: spectral cube must be smoothed");
  if (!(ridge >= 0.0)) throw Error("invert: ridge must be >= 0");
  const std::size_t d = cube.d;
  InverseCube out{cube.grid, d, std::vector<std::complex<double>>(cube.entries.size()),
                  std::vector<std::uint8_t>(cube.grid.size(), 0), std::vector<double>(cube.grid.size(), 0.0)};
  const detail::CMat eye = detail::CMat::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));

  for (std::size_t f = 0; f < cube.grid.size(); ++f) {
    const auto m = cube.matrix(f);
    detail::CMat a(d, d);
    bool finite = true;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        a(i, j) = m[i * d + j];
        finite = finite && std::isfinite(m[i * d + j].real()) && std::isfinite(m[i * d + j].imag());
      }
    if (!finite) {
      out.excluded[f] = 1;
      continue;
    }
    a = (0.5 * (a + a.adjoint())).eval();

    double cond = detail::condition_number(a);
    if (cond > kConditionLimit && ridge > 0.0) {
      const double shift = ridge * a.trace().real() / static_cast<double>(d);
      a += shift * eye;
      out.ridge_used[f] = shift;
      cond = detail::condition_number(a);
    }
    Eigen::LLT<detail::CMat> llt(a);
    if (!std::isfinite(cond) || llt.info() != Eigen::Success) {
      out.excluded[f] = 1;
      continue;
    }
    detail::CMat g = llt.solve(eye);
    g = (0.5 * (g + g.adjoint())).eval();
    bool ok = true;
    for (std::size_t i = 0; i < d; ++i) ok = ok && g(i, i).real() > 0.0;
    if (!ok) {
      out.excluded[f] = 1;
      continue;
    }
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) out.entries[(f * d + i) * d + j] = g(i, j);
  }
  return out;
}

// ---------------------------------------------------------------------------

/// Per-frequency d x d partial strengths s_ij(w) = |g_ij| / sqrt(g_ii g_jj).
struct StrengthCube {
  FrequencyGrid grid;
  std::size_t d = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> excluded;

  double at(std::size_t f, std::size_t i, std::size_t j) const { return values[(f * d + i) * d + j]; }
  double& at(std::size_t f, std::size_t i, std::size_t j) { return values[(f * d + i) * d + j]; }
  RealField pair_field(std::size_t i, std::size_t j) const {
    RealField out(grid);
    out.smoothed = true;
    for (std::size_t f = 0; f < grid.size(); ++f) out.values[f] = excluded[f] ? detail::kNaN : at(f, i, j);
    return out;
  }
};

inline StrengthCube partial_strength(const InverseCube& inv) {
  const std::size_t d = inv.d;
  StrengthCube out{inv.grid, d, std::vector<double>(inv.entries.size(), 0.0), inv.excluded};
  for (std::size_t f = 0; f < inv.grid.size(); ++f) {
    if (out.excluded[f]) continue;
    for (std::size_t i = 0; i < d; ++i) {
      const double gii = inv.at(f, i, i).real();
      if (!(gii > 0.0)) throw Error("partial_strength: non-positive diagonal (failed inversion)");
    }
    for (std::size_t i = 0; i < d; ++i) {
      out.at(f, i, i) = 1.0;
      for (std::size_t j = i + 1; j < d; ++j) {
        const double s = std::abs(inv.at(f, i, j)) / std::sqrt(inv.at(f, i, i).real() * inv.at(f, j, j).real());
        out.at(f, i, j) = s;
        out.at(f, j, i) = s;
      }
    }
  }
  return out;
}

/// Entrywise supremum over non-excluded frequencies other than (0,0). Ties
/// resolve to the lexicographically smallest (p, q).
inline SupMatrix sup_statistic(const StrengthCube& s) {
  const std::size_t d = s.d;
  SupMatrix out(d);
  std::vector<bool> seen(d * d, false);
  bool any = false;
  for (std::size_t f = 0; f < s.grid.size(); ++f) {
    const auto freq = s.grid.at(f);
    if (s.excluded[f] || (freq.p == 0 && freq.q == 0)) continue;
    any = true;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j) {
        const double v = s.at(f, i, j);
        const auto k = i * d + j;
        if (!seen[k] || v > out.values[k]) {
          seen[k] = true;
          out.values[k] = out.values[j * d + i] = v;
          out.argmax[k] = out.argmax[j * d + i] = freq;
        }
      }
  }
  if (!any) throw Error("sup_statistic: all frequencies excluded");
  return out;
}

/// Edge {i,j} iff sup_ij >= xi.
inline DependenceGraph build_graph(const SupMatrix& sup, double xi, std::vector<std::string> names,
                                   std::vector<ComponentKind> kinds = {}) {
  if (!(xi > 0.0 && xi < 1.0)) throw Error("build_graph: threshold must lie in (0, 1)");
  if (names.size() != sup.d) throw Error("build_graph: vertex count does not match sup matrix");
  if (kinds.empty()) kinds.assign(sup.d, ComponentKind::point);
  DependenceGraph g{std::move(names), std::move(kinds), {}, sup, xi};
  for (std::size_t i = 0; i < sup.d; ++i)
    for (std::size_t j = i + 1; j < sup.d; ++j)
      if (sup(i, j) >= xi) g.edges.push_back({i, j});
  return g;
}

// ---------------------------------------------------------------------------

struct GraphOptions {
  AssembleOptions assemble;
  double ridge = kDefaultRidge;
  double xi = kDefaultThreshold;
};

struct GraphEstimate {
  SpectraCube cube;
  InverseCube inverse;
  StrengthCube strength;
  SupMatrix sup;
  DependenceGraph graph;
};

inline GraphEstimate estimate_graph(const HybridDataset& ds, const GraphOptions& opt = {}) {
  require_valid(ds);
  auto cube = assemble_cube(ds, opt.assemble);
  auto inverse = invert(cube, opt.ridge);
  auto strength = partial_strength(inverse);
  auto sup = sup_statistic(strength);
  auto graph = build_graph(sup, opt.xi, ds.names(), ds.kinds());
  return {std::move(cube), std::move(inverse), std::move(strength), std::move(sup), std::move(graph)};
}

}  // namespace mixsdg
