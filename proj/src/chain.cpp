#include "chain.hpp"

#include <cmath>

namespace ik6rp {

namespace {

double half_tan_checked(double angle_rad, const char* what) {
  if (std::abs(std::cos(angle_rad / 2)) < 1e-9)
    fail(ErrorCode::Schema, std::string(what) + " is an odd multiple of 180 degrees");
  return std::tan(angle_rad / 2);
}

}  // namespace

DHRow DHRow::revolute(double d, double a, double alpha_rad) {
  DHRow r;
  r.joint = JointType::Revolute;
  r.d = d;
  r.a = a;
  r.alpha = alpha_rad;
  r.l = half_tan_checked(alpha_rad, "twist angle");
  return r;
}

DHRow DHRow::prismatic(double theta_rad, double a, double alpha_rad) {
  DHRow r;
  r.joint = JointType::Prismatic;
  r.theta = theta_rad;
  r.a = a;
  r.alpha = alpha_rad;
  r.l = half_tan_checked(alpha_rad, "twist angle");
  r.v = half_tan_checked(theta_rad, "fixed rotation angle");
  return r;
}

std::string ChainSpec::pattern() const {
  std::string p;
  for (const DHRow& r : rows) p += (r.joint == JointType::Revolute ? 'R' : 'P');
  return p;
}

void ChainSpec::validate() const {
  std::string p = pattern();
  if (p != "RRPRRR" && p != "RRPPRR" && p != "RRRPRR" && p != "RRRRRR")
    fail(ErrorCode::Schema, "unsupported joint pattern " + p +
                                " (supported: RRPRRR, RRPPRR, RRRPRR, RRRRRR)");
  // rows 1 and 6 are revolute in every supported pattern
  auto zero = [](double v) { return std::abs(v) < 1e-12; };
  if (!zero(rows[0].d)) fail(ErrorCode::Schema, "d1 must be 0; renormalize the base frame");
  if (!zero(rows[5].d)) fail(ErrorCode::Schema, "d6 must be 0; renormalize the end-effector frame");
  if (!zero(rows[5].a) || !zero(rows[5].l))
    fail(ErrorCode::Schema, "a6 and alpha6 must be 0; renormalize the end-effector frame");
}

JointVector joints_from_external(const ChainSpec& chain, const std::array<double, 6>& ext) {
  JointVector jv{};
  for (int i = 0; i < 6; ++i) {
    if (chain.rows[i].joint == JointType::Revolute)
      jv[i] = half_tan_checked(ext[i] * M_PI / 180.0, "joint angle");
    else
      jv[i] = ext[i];
  }
  return jv;
}

std::array<double, 6> joints_to_external(const ChainSpec& chain, const JointVector& jv) {
  std::array<double, 6> out{};
  for (int i = 0; i < 6; ++i) {
    if (chain.rows[i].joint == JointType::Revolute)
      out[i] = 2.0 * std::atan(jv[i]) * 180.0 / M_PI;
    else
      out[i] = jv[i];
  }
  return out;
}

DualQuatd sigma_joint(const DHRow& row, double joint_value) {
  double v = row.joint == JointType::Revolute ? joint_value : row.v;
  double d = row.joint == JointType::Prismatic ? joint_value : row.d;
  return rot_z(v) * trans_z(d) * trans_x(row.a) * rot_x(row.l);
}

DualQuat<Poly1> sigma_joint_poly(const DHRow& row, char var) {
  const double a = row.a, l = row.l;
  auto lin = [var](double c0, double c1) { return Poly1({c0, c1}, var); };
  auto cst = [var](double c0) { return Poly1({c0}, var); };
  if (row.joint == JointType::Revolute) {
    const double d = row.d;
    return {{lin(1, 0), lin(l, 0), lin(0, l), lin(0, 1)},
            {lin(-a * l / 2, -d / 2), lin(a / 2, -d * l / 2), lin(d * l / 2, a / 2),
             lin(d / 2, -a * l / 2)}};
  }
  const double v = row.v;
  return {{cst(1), cst(l), cst(v * l), cst(v)},
          {lin(-a * l / 2, -v / 2), lin(a / 2, -v * l / 2), lin(a * v / 2, l / 2),
           lin(-a * l * v / 2, 0.5)}};
}

DualQuatd forward_kinematics(const ChainSpec& chain, const JointVector& jv) {
  DualQuatd out = sigma_joint(chain.rows[0], jv[0]);
  for (int i = 1; i < 6; ++i) out = out * sigma_joint(chain.rows[i], jv[i]);
  return out;
}

DualQuatd right_chain_pose(const ChainSpec& chain, const StudyPoint& ee, double j4, double j5,
                           double j6, double pose_tol) {
  if (study_residual(ee) > pose_tol)
    fail(ErrorCode::Pose, "end-effector pose violates the Study condition");
  DualQuatd out = from_study(ee);
  out = out * sigma_joint(chain.rows[5], j6).conj();
  out = out * sigma_joint(chain.rows[4], j5).conj();
  out = out * sigma_joint(chain.rows[3], j4).conj();
  return out;
}

std::array<std::string, 6> joint_labels(const ChainSpec& chain) {
  std::array<std::string, 6> out;
  for (int i = 0; i < 6; ++i) {
    if (chain.rows[i].joint == JointType::Revolute)
      out[i] = "theta" + std::to_string(i + 1) + "_deg";
    else
      out[i] = "d" + std::to_string(i + 1);
  }
  return out;
}

}  // namespace ik6rp
