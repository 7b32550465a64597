#pragma once
#include <array>
#include <string>

#include "poly.hpp"
#include "quat.hpp"

namespace ik6rp {

enum class JointType { Revolute, Prismatic };

// One DH row. The joint type decides which of theta/d is the joint variable:
// revolute rows have variable theta (d fixed), prismatic rows variable d (theta fixed).
// Half-angle tangents are cached: l = tan(alpha/2), and v = tan(theta/2) for fixed theta.
struct DHRow {
  JointType joint = JointType::Revolute;
  double theta = 0.0;  // radians, meaningful when fixed
  double d = 0.0;      // meaningful when fixed
  double a = 0.0;
  double alpha = 0.0;  // radians
  double l = 0.0;
  double v = 0.0;

  static DHRow revolute(double d, double a, double alpha_rad);
  static DHRow prismatic(double theta_rad, double a, double alpha_rad);
};

// Six-row chain, normalized form: d1 = d6 = 0 and a6 = alpha6 = 0.
struct ChainSpec {
  std::array<DHRow, 6> rows;
  std::string name;

  // "RRPRRR", "RRPPRR", "RRRPRR" or "RRRRRR"
  std::string pattern() const;
  void validate() const;  // throws Schema on malformed rows or unsupported pattern
};

// Joint values: half-angle tangent for revolute entries, length for prismatic.
using JointVector = std::array<double, 6>;

// External convention (files, CLI, tables): degrees for angles, lengths as-is.
JointVector joints_from_external(const ChainSpec& chain, const std::array<double, 6>& ext);
std::array<double, 6> joints_to_external(const ChainSpec& chain, const JointVector& jv);

// sigma = Rz * Tz * Tx * Rx built from unnormalized half-tangent factors;
// projective representative with |primal|^2 = (1+v^2)(1+l^2).
DualQuatd sigma_joint(const DHRow& row, double joint_value);

// Same transform with the joint variable kept symbolic; every coordinate has degree <= 1.
DualQuat<Poly1> sigma_joint_poly(const DHRow& row, char var = 't');

DualQuatd forward_kinematics(const ChainSpec& chain, const JointVector& jv);

// Pose of the middle frame implied by the last three joints: ee * s6^c * s5^c * s4^c
// (conjugates as projective inverses).
DualQuatd right_chain_pose(const ChainSpec& chain, const StudyPoint& ee, double j4, double j5,
                           double j6, double pose_tol = 1e-3);

// Report/JSON labels per row: "theta1_deg", "d3", ...
std::array<std::string, 6> joint_labels(const ChainSpec& chain);

}  // namespace ik6rp
