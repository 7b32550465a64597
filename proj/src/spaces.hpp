#pragma once
#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "chain.hpp"
#include "poly.hpp"
#include "quat.hpp"

namespace ik6rp {

// A hyperplane of P^7 whose 8 coefficients are polynomials in one joint parameter.
struct ParamLinearForm {
  std::array<Poly1, 8> coeffs;
  char param = 't';

  std::array<double, 8> eval_at(double t) const;
  // Substitute a fixed point: returns the coefficient polynomial sum_m X_m * coeffs[m](t).
  Poly1 apply(const StudyPoint& x) const;
  int degree() const;
  void normalize();  // scale so max |coefficient| == 1
};

struct JointRef {
  int index = 0;  // 0-based row
  JointType type = JointType::Revolute;
  std::string symbol;  // "v1", "d3", ...
};

struct LinearSpaceFamily {
  std::array<ParamLinearForm, 4> forms;
  bool in_study_quadric = false;
  bool in_study_quadric_symbolic = false;
  bool in_study_quadric_numeric = false;
  std::string label;   // "T(v1)", "T(d3)", "T(v4)", "T(d4)", "T(v6)"
  std::string reason;  // degeneracy condition, e.g. "a5=0 or l5=0"
  JointRef joint;

  // 4x8 numeric coefficient matrix at a parameter value.
  Eigen::Matrix<double, 4, 8> eval_matrix(double t) const;
};

struct FamilyPair {
  LinearSpaceFamily primary;    // T(v1) on the left, T(v6) on the right
  LinearSpaceFamily secondary;  // T(d3)/T(v3) on the left, T(v4)/T(d4) on the right
  bool both_in_quadric() const { return primary.in_study_quadric && secondary.in_study_quadric; }
};

enum class SegmentKind { RP, RR, PR };

// Coefficient matrix of the two-joint constraint system: substituting the segment's
// symbolic coordinates into a generic hyperplane and collecting the coefficients of
// the monomials (t1*t2, t1, t2, 1), scaled by 4 to match the reference row layout.
Eigen::Matrix<double, 4, 8> coefficient_matrix_A(SegmentKind kind, double a, double l);

// Orthonormal basis of the kernel of coefficient_matrix_A: four constant forms whose
// common zero set contains the segment's kinematic image. Throws Degenerate when the
// kernel has dimension > 4 (e.g. a = l = 0 for an RR segment).
std::array<ParamLinearForm, 4> two_joint_space(SegmentKind kind, double a, double l);

// Pull forms back through the coordinate change x -> g * x * h. Callers pass the
// conjugates of the fixed transforms (projective inverses).
std::array<ParamLinearForm, 4> conjugate_family(const std::array<ParamLinearForm, 4>& forms,
                                                const DualQuat<Poly1>& g, const DualQuat<Poly1>& h);

// Numeric membership of a family's solution 3-space in the Study quadric, sampled
// over a few parameter values.
bool family_in_quadric_numeric(const std::array<ParamLinearForm, 4>& forms, double tol = 1e-8);

// Families for an explicit three-row chain in its own joint parameters
// (primary parametrized by joint 1, secondary by joint 3).
FamilyPair three_chain_families(const std::array<DHRow, 3>& rows);

// Reverse of the last three rows as a left-style chain: parameters negated so that
// the reversed joint values are the negatives of the original ones.
std::array<DHRow, 3> reversed_right_rows(const ChainSpec& chain);

// Left-workspace families T(v1) and T(d3)/T(v3). Throws Degenerate when both lie in
// the Study quadric (deferred configuration).
FamilyPair left_families(const ChainSpec& chain);
FamilyPair build_left_families(const ChainSpec& chain);  // same, but never throws on flags

// Right-workspace families T(v6) and T(v4)/T(d4), pulled back by the conjugated
// end-effector pose. Same throwing convention.
FamilyPair right_families(const ChainSpec& chain, const StudyPoint& ee);
FamilyPair build_right_families(const ChainSpec& chain, const StudyPoint& ee);

// Middle-joint solver: substitutes the symbolic three-joint workspace coordinates into
// a generic form linear in the middle joint, collects every monomial into the matrix B,
// and extracts kernel elements with a nonzero linear part.
struct MiddleJointSystem {
  Eigen::MatrixXd B;  // one row per monomial, 16 columns
  std::vector<std::array<int, 3>> monomials;
  std::vector<ParamLinearForm> kernel_forms;  // degree 1 in the middle-joint parameter
  ParamLinearForm canonical;                  // the kernel form with the strongest linear part
};

enum class ChainSide { Left, Right };

// For the right side the system is built on the reversed rows, re-parametrized by the
// actual middle joint (v5) and pulled back by the conjugated end-effector pose, so the
// returned forms apply to workspace points directly. `ee` is required for Right.
MiddleJointSystem middle_joint_form(const ChainSpec& chain, ChainSide side,
                                    const StudyPoint* ee = nullptr);

}  // namespace ik6rp
