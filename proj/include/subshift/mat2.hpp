/*
 * subshift-spectra: 2x2 matrices, spectral norms and log-scaled products.
 *
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace subshift {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }

  Vec2 normalized() const {
    const double n = norm();
    if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
    return {x / n, y / n};
  }

  friend double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

  /// Angle between the lines spanned by a and b, in [0, pi/2].
  friend double line_angle(const Vec2& a, const Vec2& b) {
    const double c = std::abs(dot(a.normalized(), b.normalized()));
    return std::acos(std::min(1.0, c));
  }
};

struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;  // [[a, b], [c, d]]

  static Mat2 identity() { return {}; }
  static Mat2 diag(double u, double v) { return {u, 0.0, 0.0, v}; }
  static Mat2 rotation(double theta) {
    const double s = std::sin(theta), co = std::cos(theta);
    return {co, -s, s, co};
  }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }

  /// Adjugate-based inverse; exact for unimodular matrices.
  Mat2 inverse() const {
    const double dt = det();
    if (dt == 0.0) throw std::domain_error("singular 2x2 matrix");
    return {d / dt, -b / dt, -c / dt, a / dt};
  }

  /// Largest singular value, in closed form from A^T A.
  double spectral_norm() const {
    const double s = a * a + b * b + c * c + d * d;
    const double dt = det();
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * dt * dt));
    return std::sqrt((s + disc) / 2.0);
  }

  double smallest_singular_value() const {
    const double s = a * a + b * b + c * c + d * d;
    const double dt = det();
    const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * dt * dt));
    return std::sqrt(std::max(0.0, (s - disc) / 2.0));
  }

  /// Right-singular vector for the smallest singular value (the contracted
  /// input direction), unit length.
  Vec2 contracted_direction() const {
    // Eigenvector of A^T A for its smaller eigenvalue.
    const double p = a * a + c * c;
    const double q = a * b + c * d;
    const double r = b * b + d * d;
    const double mean = 0.5 * (p + r);
    const double disc = std::sqrt(std::max(0.0, 0.25 * (p - r) * (p - r) + q * q));
    const double lam_min = mean - disc;
    Vec2 v;
    if (std::abs(q) > 1e-300) {
      v = {q, lam_min - p};
    } else {
      v = p <= r ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    }
    return v.normalized();
  }

  friend Mat2 operator*(const Mat2& m, const Mat2& n) {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d,
            m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  friend Vec2 operator*(const Mat2& m, const Vec2& v) {
    return {m.a * v.x + m.b * v.y, m.c * v.x + m.d * v.y};
  }

  friend Mat2 operator*(double s, const Mat2& m) { return {s * m.a, s * m.b, s * m.c, s * m.d}; }

  friend Mat2 operator-(const Mat2& m, const Mat2& n) {
    return {m.a - n.a, m.b - n.b, m.c - n.c, m.d - n.d};
  }

  double max_abs() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
  }
};

/// A matrix stored as (unit-norm factor, log scale): value = exp(log_scale) * m.
/// Keeps long unimodular products representable far beyond double range.
struct ScaledMat2 {
  Mat2 m;                 // spectral norm 1 after renormalization
  double log_scale = 0.0;

  static ScaledMat2 identity() { return {Mat2::identity(), 0.0}; }

  /// log of the spectral norm of the represented matrix.
  double log_norm() const { return log_scale + std::log(m.spectral_norm()); }

  /// log |det| of the represented matrix.
  double log_abs_det() const { return 2.0 * log_scale + std::log(std::abs(m.det())); }

  /// (sign, log|trace|) of the represented matrix.
  std::pair<int, double> signed_log_trace() const {
    const double t = m.trace();
    const int sign = t > 0 ? 1 : (t < 0 ? -1 : 0);
    return {sign, t == 0.0 ? -std::numeric_limits<double>::infinity() : log_scale + std::log(std::abs(t))};
  }

  /// Left-multiplies by `next` and renormalizes.
  void apply_left(const Mat2& next) {
    m = next * m;
    const double n = m.spectral_norm();
    if (n == 0.0) throw std::domain_error("zero matrix in scaled product");
    m = (1.0 / n) * m;
    log_scale += std::log(n);
  }
};

/// A vector stored as (unit vector, log norm): value = exp(log_norm) * v.
struct ScaledVec2 {
  Vec2 v;  // unit length
  double log_norm = 0.0;

  static ScaledVec2 from(const Vec2& u) {
    const double n = u.norm();
    if (n == 0.0) throw std::invalid_argument("cannot scale the zero vector");
    return {{u.x / n, u.y / n}, std::log(n)};
  }

  void apply_left(const Mat2& next) {
    Vec2 w = next * v;
    const double n = w.norm();
    if (n == 0.0) throw std::domain_error("vector annihilated in scaled product");
    v = {w.x / n, w.y / n};
    log_norm += std::log(n);
  }
};

}  // namespace subshift
