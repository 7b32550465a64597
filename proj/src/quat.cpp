#include "quat.hpp"

namespace ik6rp {

double study_residual(const StudyPoint& s) {
  double m = max_abs(s);
  if (m == 0.0) fail(ErrorCode::Invalid, "study_residual: zero point");
  double dot = s[0] * s[4] + s[1] * s[5] + s[2] * s[6] + s[3] * s[7];
  return std::abs(dot) / (m * m);
}

bool in_study_group(const DualQuatd& s, double tol) {
  StudyPoint c = to_study(s);
  double m = max_abs(c);
  if (m == 0.0) return false;
  double pn = std::sqrt(quat_norm2(s.p));
  if (pn <= tol * m) return false;
  return study_residual(c) <= tol;
}

StudyPoint canonicalize(const StudyPoint& s) {
  int best = 0;
  for (int i = 1; i < 8; ++i)
    if (std::abs(s[i]) > std::abs(s[best])) best = i;
  if (s[best] == 0.0) fail(ErrorCode::Invalid, "canonicalize: zero point");
  StudyPoint out;
  for (int i = 0; i < 8; ++i) out[i] = s[i] / s[best];
  return out;
}

double projective_distance(const StudyPoint& a, const StudyPoint& b) {
  double na = 0, nb = 0;
  for (int i = 0; i < 8; ++i) {
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na == 0.0 || nb == 0.0) fail(ErrorCode::Invalid, "projective_distance: zero point");
  double dm = 0, dp = 0;
  for (int i = 0; i < 8; ++i) {
    double u = a[i] / na, v = b[i] / nb;
    dm += (u - v) * (u - v);
    dp += (u + v) * (u + v);
  }
  return std::sqrt(std::min(dm, dp));
}

double correct_onto_quadric(StudyPoint& s) {
  double res = study_residual(s);
  double xx = s[0] * s[0] + s[1] * s[1] + s[2] * s[2] + s[3] * s[3];
  if (xx == 0.0) fail(ErrorCode::Pose, "pose has zero primal part");
  double dot = s[0] * s[4] + s[1] * s[5] + s[2] * s[6] + s[3] * s[7];
  double k = dot / xx;
  for (int i = 0; i < 4; ++i) s[4 + i] -= k * s[i];
  return res;
}

DualQuatd from_rotation_translation(const std::array<double, 3>& axis, double theta,
                                    const std::array<double, 3>& t) {
  double n = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(n - 1.0) > 1e-8) fail(ErrorCode::Invalid, "axis must have unit norm");
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Quatd r{c, s * axis[0], s * axis[1], s * axis[2]};
  Quatd tq{0, t[0], t[1], t[2]};
  Quatd q = tq * r;
  return {r, {q.w / 2, q.x / 2, q.y / 2, q.z / 2}};
}

DualQuatd dq_inverse(const DualQuatd& s, double tol) {
  StudyPoint c = to_study(s);
  double m = max_abs(c);
  double pn2 = quat_norm2(s.p);
  if (m == 0.0 || std::sqrt(pn2) <= tol * m)
    fail(ErrorCode::Invalid, "dq_inverse: primal part too small");
  if (study_residual(c) > tol)
    fail(ErrorCode::Invalid, "dq_inverse: not a rigid-transform element");
  DualQuatd conj = s.conj();
  auto scale = [&](const Quatd& a) { return Quatd{a.w / pn2, a.x / pn2, a.y / pn2, a.z / pn2}; };
  return {scale(conj.p), scale(conj.q)};
}

Eigen::Matrix4d to_matrix(const DualQuatd& s, double tol) {
  if (!in_study_group(s, tol)) fail(ErrorCode::Invalid, "to_matrix: not a rigid-transform element");
  double n2 = quat_norm2(s.p);
  double w = s.p.w, x = s.p.x, y = s.p.y, z = s.p.z;
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = (w * w + x * x - y * y - z * z) / n2;
  m(0, 1) = 2 * (x * y - w * z) / n2;
  m(0, 2) = 2 * (x * z + w * y) / n2;
  m(1, 0) = 2 * (x * y + w * z) / n2;
  m(1, 1) = (w * w - x * x + y * y - z * z) / n2;
  m(1, 2) = 2 * (y * z - w * x) / n2;
  m(2, 0) = 2 * (x * z - w * y) / n2;
  m(2, 1) = 2 * (y * z + w * x) / n2;
  m(2, 2) = (w * w - x * x - y * y + z * z) / n2;
  // q = t*p/2  =>  t = 2*q*p^c / |p|^2
  Quatd t = s.q * s.p.conj();
  m(0, 3) = 2 * t.x / n2;
  m(1, 3) = 2 * t.y / n2;
  m(2, 3) = 2 * t.z / n2;
  return m;
}

DualQuatd from_matrix(const Eigen::Matrix4d& m, double tol) {
  Eigen::Matrix3d r = m.block<3, 3>(0, 0);
  if ((r * r.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol ||
      r.determinant() < 0.0)
    fail(ErrorCode::Invalid, "from_matrix: rotation block is not orthogonal");
  // Shepperd's method: pick the largest of the four squared components.
  double tr = r.trace();
  double c[4] = {1 + tr, 1 + 2 * r(0, 0) - tr, 1 + 2 * r(1, 1) - tr, 1 + 2 * r(2, 2) - tr};
  int k = 0;
  for (int i = 1; i < 4; ++i)
    if (c[i] > c[k]) k = i;
  Quatd p;
  double s = std::sqrt(c[k]) / 2;
  if (k == 0) {
    p = {s, (r(2, 1) - r(1, 2)) / (4 * s), (r(0, 2) - r(2, 0)) / (4 * s), (r(1, 0) - r(0, 1)) / (4 * s)};
  } else if (k == 1) {
    p = {(r(2, 1) - r(1, 2)) / (4 * s), s, (r(0, 1) + r(1, 0)) / (4 * s), (r(0, 2) + r(2, 0)) / (4 * s)};
  } else if (k == 2) {
    p = {(r(0, 2) - r(2, 0)) / (4 * s), (r(0, 1) + r(1, 0)) / (4 * s), s, (r(1, 2) + r(2, 1)) / (4 * s)};
  } else {
    p = {(r(1, 0) - r(0, 1)) / (4 * s), (r(0, 2) + r(2, 0)) / (4 * s), (r(1, 2) + r(2, 1)) / (4 * s), s};
  }
  Quatd t{0, m(0, 3), m(1, 3), m(2, 3)};
  Quatd q = t * p;
  return {p, {q.w / 2, q.x / 2, q.y / 2, q.z / 2}};
}

std::array<double, 3> transform_point(const DualQuatd& s, const std::array<double, 3>& pt) {
  double n2 = quat_norm2(s.p);
  if (n2 == 0.0) fail(ErrorCode::Invalid, "transform_point: zero primal part");
  // x' = (p x p^c + q p^c - p q^c) / |p|^2, vector part.
  Quatd xq{0, pt[0], pt[1], pt[2]};
  Quatd rot = s.p * xq * s.p.conj();
  Quatd tr = s.q * s.p.conj() - s.p * s.q.conj();
  return {(rot.x + tr.x) / n2, (rot.y + tr.y) / n2, (rot.z + tr.z) / n2};
}

}  // namespace ik6rp
