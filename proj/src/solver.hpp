#pragma once
#include <optional>
#include <string>
#include <vector>

#include "spaces.hpp"

namespace ik6rp {

struct SolveOptions {
  double pose_tol = 1e-3;    // Study-residual gate on the input pose
  double accept_tol = 1e-6;  // projective residual gate on the forward-kinematics check
  bool with_trace = false;
  int force_drop = -1;  // testing hook: fix which of the eight forms is left out (0..7)
};

struct IKSolution {
  JointVector joints;  // internal representation (half-tangents / lengths)
  double residual = 0.0;
  StudyPoint f4_pose{};  // middle-frame pose of this solution
  double u = 0.0, w = 0.0;
};

struct SolveMeta {
  std::string pattern;
  std::string left_family, right_family;
  int dropped_form = -1;  // 0-based index into the stacked eight forms
  int deg_f_u = 0, deg_f_w = 0, deg_g_u = 0, deg_g_w = 0;
  int resultant_degree = 0;
  int candidates = 0;  // (u, w) pairs that survived the algebraic gates
  double pose_correction = 0.0;
  double elapsed_ms = 0.0;
};

struct SolveResult {
  std::vector<IKSolution> solutions;
  SolveMeta meta;
  std::string trace;
};

// Seven chosen rows of the stacked system; the intersection point P and the two
// derived bivariate polynomials (quadric substitution f, leftover form g).
struct EliminationState {
  std::array<int, 7> subset{};
  int dropped = -1;
  std::array<Poly2, 8> p;
  Poly2 f, g;
};

using StackedSystem = std::array<std::array<Poly2, 8>, 8>;

StackedSystem stack_system(const LinearSpaceFamily& tu, const LinearSpaceFamily& tw);

// Rank probe of the 8x8 coefficient matrix at a few deterministic parameter samples;
// throws Singular when rank < 8 at every sample (infinitely many IK solutions).
void check_general_position(const StackedSystem& rows);

// Intersection of the seven chosen hyperplanes as signed 7x7 minors of the 7x8
// coefficient matrix; throws Internal when all eight minors vanish.
std::array<Poly2, 8> kernel_point(const StackedSystem& rows, const std::array<int, 7>& subset);

Poly2 study_substitution(const std::array<Poly2, 8>& p);
Poly2 leftover_form(const std::array<Poly2, 8>& p, const StackedSystem& rows, int dropped);

// Real intersections of the curves f = 0 and g = 0: real roots of the resultant in u
// (computed as generalized eigenvalues of the linearized Sylvester matrix polynomial),
// paired through common real roots in w, Newton-polished, residual-filtered, and with
// points whose primal part vanishes discarded.
struct UWPair {
  double u, w;
  StudyPoint x;  // canonicalized P(u, w)
};
std::vector<UWPair> solve_uw(const Poly2& f, const Poly2& g, const std::array<Poly2, 8>& p,
                             double tol, int* resultant_degree = nullptr);

// Remaining four joints for one candidate middle-frame pose.
JointVector recover_remaining_joints(const ChainSpec& chain, const FamilyPair& left,
                                     const FamilyPair& right, const MiddleJointSystem& mid_left,
                                     const MiddleJointSystem& mid_right, const StudyPoint& ee,
                                     const LinearSpaceFamily& tu, const LinearSpaceFamily& tw,
                                     const UWPair& cand);

SolveResult solve_ik(const ChainSpec& chain, const StudyPoint& ee, const SolveOptions& opts = {});

}  // namespace ik6rp
