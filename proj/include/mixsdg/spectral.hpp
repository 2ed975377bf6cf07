#pragma once

// Discrete Fourier transforms of marked point patterns and regular lattices,
// periodograms, co/quadrature and amplitude/phase decompositions, kernel
// smoothing, coherence, and the CSR bias / isotropic spectrum formulas.
//
// Frequencies are integer pairs (p, q); on the unit square the angular
// frequency is w = (2 pi p, 2 pi q).

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "mixsdg/model.hpp"

namespace mixsdg {

namespace detail {

// exp(-2 pi i t) with t reduced to [-1/2, 1/2] first.
inline std::complex<double> unit_phase(double t) {
  const double frac = t - std::nearbyint(t);
  const double a = -2.0 * std::numbers::pi * frac;
  return {std::cos(a), std::sin(a)};
}

inline void require_same_grid(const FrequencyGrid& a, const FrequencyGrid& b, const char* what) {
  if (!(a == b)) throw Error(std::string(what) + ": frequency grid mismatch");
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace detail

// ---------------------------------------------------------------------------
// DFTs

/// F(p,q) = sum_k m_k exp(-2 pi i (p x_k + q y_k)) over the grid. Marks of a
/// lattice-derived pattern must already be demeaned.
inline ComplexField dft_marked(const MarkedPattern& pattern, const FrequencyGrid& grid) {
  if (pattern.points.empty()) throw Error("dft: empty pattern '" + pattern.name + "'");
  grid.check();
  pattern.check();
  ComplexField out(grid, {0.0, 0.0});
  const int rows = grid.rows();
  const int cols = grid.cols();
  std::vector<std::complex<double>> ex(static_cast<std::size_t>(rows));
  std::vector<std::complex<double>> ey(static_cast<std::size_t>(cols));
  for (const auto& pt : pattern.points) {
    for (int r = 0; r < rows; ++r) ex[r] = detail::unit_phase((grid.p_min + r) * pt.x);
    for (int c = 0; c < cols; ++c) ey[c] = detail::unit_phase((grid.q_min + c) * pt.y);
    auto* dst = out.values.data();
    for (int r = 0; r < rows; ++r) {
      const std::complex<double> wx = pt.mark * ex[r];
      for (int c = 0; c < cols; ++c) {
        const auto& e = ey[c];
        // explicit product keeps the inner loop free of complex-NaN checks
        dst->real(dst->real() + wx.real() * e.real() - wx.imag() * e.imag());
        dst->imag(dst->imag() + wx.real() * e.imag() + wx.imag() * e.real());
        ++dst;
      }
    }
  }
  return out;
}

inline ComplexField dft_points(const MarkedPattern& pattern, const FrequencyGrid& grid) {
  if (pattern.kind != PatternKind::point_derived) throw Error("dft_points: pattern is not point-derived");
  return dft_marked(pattern, grid);
}

/// Regular-lattice DFT on its native grid p = 0..l1-1, q = 0..l2-1:
/// F(p,q) = (l1 l2)^{-1/2} sum x(s1,s2) exp[-2 pi i (p s1/l1 + q s2/l2)].
/// Values must be mean-corrected; F(0,0) is exactly 0.
inline ComplexField dft_lattice(const LatticeComponent& lattice) {
  if (!lattice.regular) throw Error("dft_lattice: '" + lattice.name + "' is not a regular lattice");
  const auto [l1, l2] = *lattice.regular;
  const std::size_t n = static_cast<std::size_t>(l1) * static_cast<std::size_t>(l2);
  if (l1 < 1 || l2 < 1 || lattice.sites.size() != n) throw Error("dft_lattice: incomplete grid");

  std::vector<double> x(n, 0.0);
  std::vector<bool> filled(n, false);
  double sum = 0.0, abs_sum = 0.0;
  for (const auto& s : lattice.sites) {
    if (!s.cell || s.cell->s1 < 0 || s.cell->s1 >= l1 || s.cell->s2 < 0 || s.cell->s2 >= l2)
      throw Error("dft_lattice: incomplete grid");
    const auto k = static_cast<std::size_t>(s.cell->s1) * l2 + s.cell->s2;
    if (filled[k]) throw Error("dft_lattice: incomplete grid");
    filled[k] = true;
    x[k] = s.value;
    sum += s.value;
    abs_sum += std::abs(s.value);
  }
  if (std::abs(sum) > 1e-9 * std::max(abs_sum, 1e-300))
    throw Error("dft_lattice: values of '" + lattice.name + "' are not mean-corrected");

  auto twiddles = [](int l) {
    std::vector<std::complex<double>> t(static_cast<std::size_t>(l));
    for (int k = 0; k < l; ++k) {
      const double a = -2.0 * std::numbers::pi * k / l;
      t[k] = {std::cos(a), std::sin(a)};
    }
    return t;
  };
  const auto t1 = twiddles(l1);
  const auto t2 = twiddles(l2);

  // inner transform along s2: row[s1][q]
  std::vector<std::complex<double>> rowq(n);
  for (int s1 = 0; s1 < l1; ++s1)
    for (int q = 0; q < l2; ++q) {
      std::complex<double> acc = 0.0;
      for (int s2 = 0; s2 < l2; ++s2)
        acc += x[static_cast<std::size_t>(s1) * l2 + s2] * t2[(static_cast<long>(q) * s2) % l2];
      rowq[static_cast<std::size_t>(s1) * l2 + q] = acc;
    }

  const auto grid = FrequencyGrid::lattice_native(l1, l2);
  ComplexField out(grid);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int p = 0; p < l1; ++p)
    for (int q = 0; q < l2; ++q) {
      std::complex<double> acc = 0.0;
      for (int s1 = 0; s1 < l1; ++s1)
        acc += rowq[static_cast<std::size_t>(s1) * l2 + q] * t1[(static_cast<long>(p) * s1) % l1];
      out(p, q) = acc * scale;
    }
  out(0, 0) = 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Periodograms

inline RealField auto_periodogram(const ComplexField& f) {
  RealField out(f.grid);
  out.smoothed = f.smoothed;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double a = f.values[k].real(), b = f.values[k].imag();
    out.values[k] = a * a + b * b;
  }
  return out;
}

/// f_ij = F_i conj(F_j), entrywise.
inline ComplexField cross_periodogram(const ComplexField& fi, const ComplexField& fj) {
  detail::require_same_grid(fi.grid, fj.grid, "cross_periodogram");
  ComplexField out(fi.grid);
  out.smoothed = fi.smoothed && fj.smoothed;
  for (std::size_t k = 0; k < fi.size(); ++k) {
    const double ai = fi.values[k].real(), bi = fi.values[k].imag();
    const double aj = fj.values[k].real(), bj = fj.values[k].imag();
    out.values[k] = {ai * aj + bi * bj, bi * aj - ai * bj};
  }
  return out;
}

enum class Decomposition { cartesian, polar };

struct DecomposedSpectrum {
  RealField first;   // co-spectrum C, or amplitude
  RealField second;  // quadrature Q, or phase in (-pi, pi] (NaN where undefined)
};

/// Cartesian: C = Re f_ij = a_i a_j + b_i b_j, Q = Im f_ij = b_i a_j - a_i b_j.
/// Polar: amplitude |f_ij| and phase atan2(Q, C); phase is NaN where |f_ij| < 1e-12.
inline DecomposedSpectrum decompose(const ComplexField& cross, Decomposition mode) {
  DecomposedSpectrum out{RealField(cross.grid), RealField(cross.grid)};
  out.first.smoothed = out.second.smoothed = cross.smoothed;
  for (std::size_t k = 0; k < cross.size(); ++k) {
    const auto z = cross.values[k];
    if (mode == Decomposition::cartesian) {
      out.first.values[k] = z.real();
      out.second.values[k] = z.imag();
    } else {
      const double amp = std::abs(z);
      out.first.values[k] = amp;
      if (amp < 1e-12) {
        out.second.values[k] = detail::kNaN;
      } else {
        double ph = std::atan2(z.imag(), z.real());
        if (ph <= -std::numbers::pi) ph = std::numbers::pi;
        out.second.values[k] = ph;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Smoothing

/// Odd k x k non-negative weights summing to 1 (row-major, centre at k/2).
class SmoothingKernel {
 public:
  static SmoothingKernel uniform(int k) {
    if (k < 1 || k % 2 == 0) throw Error("smoothing kernel size must be odd and positive");
    return SmoothingKernel(k, std::vector<double>(static_cast<std::size_t>(k) * k, 1.0));
  }

  /// Weights are normalised to sum 1.
  static SmoothingKernel from_weights(int k, std::vector<double> weights) { return SmoothingKernel(k, std::move(weights)); }

  int size() const { return size_; }
  int half() const { return size_ / 2; }
  double weight(int dp, int dq) const {
    return weights_[static_cast<std::size_t>(dp + half()) * size_ + (dq + half())];
  }
  const std::vector<double>& weights() const { return weights_; }

 private:
  SmoothingKernel(int k, std::vector<double> w) : size_(k), weights_(std::move(w)) {
    if (k < 1 || k % 2 == 0) throw Error("smoothing kernel size must be odd and positive");
    if (weights_.size() != static_cast<std::size_t>(k) * k) throw Error("smoothing kernel needs k*k weights");
    double s = 0.0;
    for (double v : weights_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw Error("smoothing kernel weights must be finite and >= 0");
      s += v;
    }
    if (!(s > 0.0)) throw Error("smoothing kernel weights sum to zero");
    for (auto& v : weights_) v /= s;
  }

  int size_;
  std::vector<double> weights_;
};

/// Cells flagged in `excluded` contribute no weight; every output cell
/// renormalises by the weight that actually landed inside the grid.
template <typename T>
FrequencyField<T> smooth(const FrequencyField<T>& field, const SmoothingKernel& kernel,
                         const FrequencyField<std::uint8_t>* excluded = nullptr) {
  const auto& g = field.grid;
  if (kernel.size() > g.rows() || kernel.size() > g.cols()) throw Error("smooth: kernel larger than grid");
  if (excluded) detail::require_same_grid(g, excluded->grid, "smooth");
  const int h = kernel.half();
  FrequencyField<T> out(g);
  out.smoothed = true;
  for (int p = g.p_min; p <= g.p_max; ++p) {
    for (int q = g.q_min; q <= g.q_max; ++q) {
      T acc{};
      double wsum = 0.0;
      for (int dp = -h; dp <= h; ++dp) {
        const int pp = p + dp;
        if (pp < g.p_min || pp > g.p_max) continue;
        for (int dq = -h; dq <= h; ++dq) {
          const int qq = q + dq;
          if (qq < g.q_min || qq > g.q_max) continue;
          const auto idx = g.index(pp, qq);
          if (excluded && excluded->values[idx]) continue;
          const double w = kernel.weight(dp, dq);
          acc += w * field.values[idx];
          wsum += w;
        }
      }
      out(p, q) = wsum > 0.0 ? T(acc / wsum) : T(detail::kNaN);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Theory formulas

/// Bias of the CSR auto-periodogram:
/// B(w) = 2 l1 l2 lambda^2 [sinc(l1 w_p / 2) sinc(l2 w_q / 2)]^2.
inline double csr_bias(double w_p, double w_q, double lambda, double l1, double l2) {
  if (!(lambda >= 0.0)) throw Error("csr_bias: lambda must be >= 0");
  auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
  const double s = sinc(l1 * w_p / 2.0) * sinc(l2 * w_q / 2.0);
  return 2.0 * l1 * l2 * lambda * lambda * s * s;
}

struct IsotropicOptions {
  double truncation_radius = 50.0;
  double rel_tol = 1e-6;
  bool cross = false;  // cross-spectrum: no lambda term
  int max_levels = 22;
};

/// f(varpi) = lambda + 2 pi int_0^R r zeta(r) J0(r varpi) dr by successively
/// refined trapezoid rule. Used as a reference for estimator checks.
inline double isotropic_spectrum(const std::function<double(double)>& zeta, double lambda, double varpi,
                                 const IsotropicOptions& opt = {}) {
  const double R = opt.truncation_radius;
  if (!(R > 0.0)) throw Error("isotropic_spectrum: truncation radius must be positive");
  auto integrand = [&](double r) { return r * zeta(r) * std::cyl_bessel_j(0.0, r * varpi); };

  std::size_t n = 1;
  double t = 0.5 * R * (integrand(0.0) + integrand(R));
  double prev = t;
  for (int level = 1; level <= opt.max_levels; ++level) {
    const double hnew = R / static_cast<double>(2 * n);
    double mid = 0.0;
    for (std::size_t k = 0; k < n; ++k) mid += integrand((2.0 * k + 1.0) * hnew);
    t = 0.5 * t + hnew * mid;
    n *= 2;
    if (!std::isfinite(t)) throw Error("isotropic_spectrum: non-finite quadrature");
    if (level >= 5 && std::abs(t - prev) <= opt.rel_tol * std::max(std::abs(t), 1e-300)) break;
    if (level >= 5 && std::abs(t) < 1e-300 && std::abs(prev) < 1e-300) break;
    prev = t;
  }
  const double integral = 2.0 * std::numbers::pi * t;
  return opt.cross ? integral : lambda + integral;
}

// ---------------------------------------------------------------------------
// Coherence

struct CoherenceOptions {
  bool allow_raw = false;  // raw periodograms give coherence 1 everywhere
};

/// |R_ij|^2 = |f_ij|^2 / (f_ii f_jj); NaN where f_ii f_jj < 1e-12.
inline RealField coherence(const ComplexField& fij, const RealField& fii, const RealField& fjj,
                           const CoherenceOptions& opt = {}) {
  detail::require_same_grid(fij.grid, fii.grid, "coherence");
  detail::require_same_grid(fij.grid, fjj.grid, "coherence");
  if (!opt.allow_raw && !(fij.smoothed && fii.smoothed && fjj.smoothed))
    throw Error("coherence: inputs must be smoothed (raw periodograms give coherence 1 at every frequency)");
  RealField out(fij.grid);
  out.smoothed = fij.smoothed;
  for (std::size_t k = 0; k < fij.size(); ++k) {
    const double denom = fii.values[k] * fjj.values[k];
    if (!(denom >= 1e-12)) {
      out.values[k] = detail::kNaN;
      continue;
    }
    const double a = fij.values[k].real(), b = fij.values[k].imag();
    out.values[k] = (a * a + b * b) / denom;
  }
  return out;
}

inline RealField real_part(const ComplexField& f) {
  RealField out(f.grid);
  out.smoothed = f.smoothed;
  for (std::size_t k = 0; k < f.size(); ++k) out.values[k] = f.values[k].real();
  return out;
}

}  // namespace mixsdg
