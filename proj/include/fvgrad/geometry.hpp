#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fvgrad {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline Vec2 operator*(Vec2 a, double s) { return s * a; }
inline Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
inline Vec2& operator+=(Vec2& a, Vec2 b) { a = a + b; return a; }

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

inline bool finite(Vec2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

/// Second-order tensor with components laid out row-major:
///   [ xx  xy ]
///   [ yx  yy ]
struct Tensor2 {
  double xx = 0.0;
  double xy = 0.0;
  double yx = 0.0;
  double yy = 0.0;
};

inline Tensor2 operator+(Tensor2 a, Tensor2 b) {
  return {a.xx + b.xx, a.xy + b.xy, a.yx + b.yx, a.yy + b.yy};
}
inline Tensor2& operator+=(Tensor2& a, Tensor2 b) { a = a + b; return a; }
inline Tensor2 operator*(double s, Tensor2 t) {
  return {s * t.xx, s * t.xy, s * t.yx, s * t.yy};
}
inline Vec2 operator*(Tensor2 t, Vec2 v) {
  return {t.xx * v.x + t.xy * v.y, t.yx * v.x + t.yy * v.y};
}
inline Tensor2 operator*(Tensor2 a, Tensor2 b) {
  return {a.xx * b.xx + a.xy * b.yx, a.xx * b.xy + a.xy * b.yy,
          a.yx * b.xx + a.yy * b.yx, a.yx * b.xy + a.yy * b.yy};
}

inline Tensor2 outer(Vec2 a, Vec2 b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}
inline Tensor2 transpose(Tensor2 t) { return {t.xx, t.yx, t.xy, t.yy}; }
inline Tensor2 identity_tensor() { return {1.0, 0.0, 0.0, 1.0}; }

inline double det(Tensor2 t) { return t.xx * t.yy - t.xy * t.yx; }

inline double frobenius_norm(Tensor2 t) {
  return std::sqrt(t.xx * t.xx + t.xy * t.xy + t.yx * t.yx + t.yy * t.yy);
}

/// Scale used for the singularity test: product of the row norms.  Makes the
/// determinant threshold independent of the absolute size of the entries.
inline double row_norm_scale(Tensor2 t) {
  return std::hypot(t.xx, t.xy) * std::hypot(t.yx, t.yy);
}

struct SingularTensorError : std::runtime_error {
  double determinant;
  double scale;
  SingularTensorError(double d, double s)
      : std::runtime_error("singular 2x2 tensor: det = " + std::to_string(d) +
                           ", scale = " + std::to_string(s)),
        determinant(d), scale(s) {}
};

constexpr double kSingularDetFraction = 1e-13;

/// Exact adjugate-over-determinant inverse.  Throws SingularTensorError when
/// |det| falls below kSingularDetFraction times the row-norm scale.
inline Tensor2 invert(Tensor2 t) {
  const double d = det(t);
  const double scale = row_norm_scale(t);
  if (std::abs(d) <= kSingularDetFraction * scale || d == 0.0) {
    throw SingularTensorError(d, scale);
  }
  return {t.yy / d, -t.xy / d, -t.yx / d, t.xx / d};
}

}  // namespace fvgrad
