#pragma once

// Reference implementations used only by the tests. They are written
// independently of the library: plain loops, long double, no shortcuts.

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mixsdg/model.hpp"

namespace oracle {

using cld = std::complex<long double>;

inline constexpr long double kTwoPi = 6.283185307179586476925286766559L;

/// F(p,q) = sum_k m_k exp(-2 pi i (p x_k + q y_k)) by direct summation.
inline cld marked_dft(const mixsdg::MarkedPattern& pat, int p, int q) {
  long double re = 0.0L, im = 0.0L;
  for (const auto& pt : pat.points) {
    const long double arg = kTwoPi * (static_cast<long double>(p) * pt.x + static_cast<long double>(q) * pt.y);
    re += pt.mark * std::cos(arg);
    im -= pt.mark * std::sin(arg);
  }
  return {re, im};
}

/// (l1 l2)^{-1/2} sum_{s1,s2} x[s1][s2] exp(-2 pi i (p s1 / l1 + q s2 / l2)).
inline cld lattice_dft(const std::vector<double>& x, int l1, int l2, int p, int q) {
  long double re = 0.0L, im = 0.0L;
  for (int s1 = 0; s1 < l1; ++s1)
    for (int s2 = 0; s2 < l2; ++s2) {
      const long double arg = kTwoPi * (static_cast<long double>(p) * s1 / l1 + static_cast<long double>(q) * s2 / l2);
      const long double v = x[static_cast<std::size_t>(s1) * l2 + s2];
      re += v * std::cos(arg);
      im -= v * std::sin(arg);
    }
  const long double norm = std::sqrt(static_cast<long double>(l1) * l2);
  return {re / norm, im / norm};
}

/// O(n^2) nearest-neighbour distances.
inline std::vector<double> nn_distances(const std::vector<mixsdg::Point>& pts) {
  std::vector<double> out(pts.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      out[i] = std::min(out[i], std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
    }
  return out;
}

inline mixsdg::MarkedPattern random_pattern(std::mt19937_64& rng, std::size_t n, bool lattice_marks) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 1.0);
  mixsdg::MarkedPattern pat;
  pat.name = "random";
  pat.kind = lattice_marks ? mixsdg::PatternKind::lattice_derived : mixsdg::PatternKind::point_derived;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mixsdg::MarkedPoint mp{u(rng), u(rng), lattice_marks ? z(rng) : 1.0};
    sum += mp.mark;
    pat.points.push_back(mp);
  }
  if (lattice_marks)
    for (auto& mp : pat.points) mp.mark -= sum / static_cast<double>(n);
  return pat;
}

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>;

/// A A^H + d I for a random complex A: Hermitian positive definite.
inline CMat random_hpd(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> z(0.0, 1.0);
  CMat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {z(rng), z(rng)};
  CMat h = a * a.adjoint();
  h += static_cast<double>(d) * CMat::Identity(d, d);
  return h;
}

inline double rel_err(std::complex<double> got, cld want, long double scale) {
  const cld diff = cld(got.real(), got.imag()) - want;
  return static_cast<double>(std::abs(diff) / std::max(scale, 1e-300L));
}

}  // namespace oracle
