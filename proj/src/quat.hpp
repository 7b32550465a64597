#pragma once
#include <array>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>

#include "errors.hpp"

namespace ik6rp {

// Quaternion over an arbitrary coefficient ring T (double, or a polynomial type
// providing +, -, * and construction from 0).
template <class T>
struct Quat {
  T w{}, x{}, y{}, z{};

  Quat() = default;
  Quat(T w_, T x_, T y_, T z_) : w(std::move(w_)), x(std::move(x_)), y(std::move(y_)), z(std::move(z_)) {}

  Quat conj() const { return {w, -x, -y, -z}; }

  friend Quat operator+(const Quat& a, const Quat& b) { return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Quat operator-(const Quat& a, const Quat& b) { return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z}; }
  // Hamilton product: scalar part w1*w2 - v1.v2, vector part w1*v2 + w2*v1 + v1 x v2.
  friend Quat operator*(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y + a.y * b.w + a.z * b.x - a.x * b.z,
            a.w * b.z + a.z * b.w + a.x * b.y - a.y * b.x};
  }
};

// Dual quaternion p + eps*q with eps^2 = 0.
template <class T>
struct DualQuat {
  Quat<T> p{};  // primal
  Quat<T> q{};  // dual

  DualQuat() = default;
  DualQuat(Quat<T> p_, Quat<T> q_) : p(std::move(p_)), q(std::move(q_)) {}

  DualQuat conj() const { return {p.conj(), q.conj()}; }

  friend DualQuat operator+(const DualQuat& a, const DualQuat& b) { return {a.p + b.p, a.q + b.q}; }
  friend DualQuat operator*(const DualQuat& a, const DualQuat& b) {
    return {a.p * b.p, a.p * b.q + a.q * b.p};
  }

  T coord(int i) const {
    switch (i) {
      case 0: return p.w;
      case 1: return p.x;
      case 2: return p.y;
      case 3: return p.z;
      case 4: return q.w;
      case 5: return q.x;
      case 6: return q.y;
      default: return q.z;
    }
  }
};

using Quatd = Quat<double>;
using DualQuatd = DualQuat<double>;

inline double quat_norm2(const Quatd& a) { return a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z; }

// Coordinate order everywhere: (x0, x1, x2, x3, y0, y1, y2, y3) = (p.w, p.x, p.y, p.z, q.w, q.x, q.y, q.z).
using StudyPoint = std::array<double, 8>;

inline StudyPoint to_study(const DualQuatd& s) {
  return {s.p.w, s.p.x, s.p.y, s.p.z, s.q.w, s.q.x, s.q.y, s.q.z};
}

inline DualQuatd from_study(const StudyPoint& c) {
  return {{c[0], c[1], c[2], c[3]}, {c[4], c[5], c[6], c[7]}};
}

inline double max_abs(const StudyPoint& c) {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  return m;
}

// |x0*y0 + x1*y1 + x2*y2 + x3*y3| / max(|c_i|)^2; scale invariant.
double study_residual(const StudyPoint& s);

// True when the primal part is nonzero and the Study condition holds (relative tol).
bool in_study_group(const DualQuatd& s, double tol = 1e-8);

// Scale so the largest-magnitude coordinate becomes +1.
StudyPoint canonicalize(const StudyPoint& s);

// min over sign of || a/|a| -+ b/|b| ||_2 on the 8-vectors.
double projective_distance(const StudyPoint& a, const StudyPoint& b);

// Replace y by its component orthogonal to x (minimal-norm repair onto the quadric).
// Returns the Study residual of the input as the applied correction magnitude.
double correct_onto_quadric(StudyPoint& s);

// Rotation by theta about a unit axis, then translation t: sigma = r + eps*(t*r)/2.
DualQuatd from_rotation_translation(const std::array<double, 3>& axis, double theta,
                                    const std::array<double, 3>& t);

DualQuatd dq_inverse(const DualQuatd& s, double tol = 1e-8);

Eigen::Matrix4d to_matrix(const DualQuatd& s, double tol = 1e-8);
DualQuatd from_matrix(const Eigen::Matrix4d& m, double tol = 1e-8);

// Image of a 3-point under the rigid transform encoded by s (any nonzero scale).
std::array<double, 3> transform_point(const DualQuatd& s, const std::array<double, 3>& pt);

// Elementary factors, unnormalized projective representatives: entries stay
// polynomial in the half-angle tangent v = tan(theta/2) resp. the length.
inline DualQuatd rot_z(double v) { return {{1, 0, 0, v}, {0, 0, 0, 0}}; }
inline DualQuatd rot_x(double l) { return {{1, l, 0, 0}, {0, 0, 0, 0}}; }
inline DualQuatd trans_z(double d) { return {{1, 0, 0, 0}, {0, 0, 0, d / 2}}; }
inline DualQuatd trans_x(double a) { return {{1, 0, 0, 0}, {0, a / 2, 0, 0}}; }

}  // namespace ik6rp
