#include "spaces.hpp"

#include <cmath>

namespace ik6rp {

namespace {

constexpr double kSymEps = 1e-8;    // exact-condition detection on DH values
constexpr double kRankEps = 1e-10;  // singular-value threshold, relative to sigma_max

DualQuatd basis_dq(int i) {
  StudyPoint c{};
  c[i] = 1.0;
  return from_study(c);
}

DualQuat<Poly1> const_pdq(const DualQuatd& s, char var) {
  auto c = [&](double v) { return Poly1::constant(v, var); };
  return {{c(s.p.w), c(s.p.x), c(s.p.y), c(s.p.z)}, {c(s.q.w), c(s.q.x), c(s.q.y), c(s.q.z)}};
}

// Coefficient of t^k of a polynomial dual quaternion, as a numeric dual quaternion.
DualQuatd pdq_coeff(const DualQuat<Poly1>& s, int k) {
  StudyPoint c;
  for (int i = 0; i < 8; ++i) c[i] = s.coord(i)[k];
  return from_study(c);
}

std::array<ParamLinearForm, 4> nullspace_forms(const Eigen::Matrix<double, 4, 8>& a, char var) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankEps * sv(0)) ++rank;
  if (rank < 4)
    fail(ErrorCode::Degenerate,
         "two-joint segment is degenerate: constraint kernel has dimension > 4");
  Eigen::MatrixXd v = svd.matrixV();
  std::array<ParamLinearForm, 4> out;
  for (int f = 0; f < 4; ++f) {
    out[f].param = var;
    for (int m = 0; m < 8; ++m) out[f].coeffs[m] = Poly1::constant(v(m, 4 + f), var);
    out[f].normalize();
  }
  return out;
}

struct SegmentSpec {
  SegmentKind kind;
  double a, l;
};

SegmentSpec segment_of(const DHRow& mid, const DHRow& next) {
  return {next.joint == JointType::Prismatic ? SegmentKind::RP : SegmentKind::RR, mid.a, mid.l};
}

}  // namespace

std::array<double, 8> ParamLinearForm::eval_at(double t) const {
  std::array<double, 8> out;
  for (int i = 0; i < 8; ++i) out[i] = coeffs[i].eval(t);
  return out;
}

Poly1 ParamLinearForm::apply(const StudyPoint& x) const {
  Poly1 acc = Poly1::constant(0.0, param);
  for (int i = 0; i < 8; ++i) acc = acc + coeffs[i] * x[i];
  return acc;
}

int ParamLinearForm::degree() const {
  int d = 0;
  for (const Poly1& c : coeffs) d = std::max(d, c.shrink().degree());
  return d;
}

void ParamLinearForm::normalize() {
  double m = 0.0;
  for (const Poly1& c : coeffs) m = std::max(m, c.max_abs());
  if (m == 0.0) return;
  for (Poly1& c : coeffs) c = c * (1.0 / m);
}

Eigen::Matrix<double, 4, 8> LinearSpaceFamily::eval_matrix(double t) const {
  Eigen::Matrix<double, 4, 8> out;
  for (int f = 0; f < 4; ++f) {
    auto row = forms[f].eval_at(t);
    for (int m = 0; m < 8; ++m) out(f, m) = row[m];
  }
  return out;
}

Eigen::Matrix<double, 4, 8> coefficient_matrix_A(SegmentKind kind, double a, double l) {
  // Segment coordinates as products of the coefficient dual quaternions of the two
  // variable factors around the fixed link transform Tx(a) Rx(l).
  DualQuatd mid = trans_x(a) * rot_x(l);
  auto rot_c = [](int k) { return k == 0 ? rot_z(0.0) : DualQuatd{{0, 0, 0, 1}, {0, 0, 0, 0}}; };
  auto trans_c = [](int k) {
    return k == 0 ? trans_z(0.0) : DualQuatd{{0, 0, 0, 0}, {0, 0, 0, 0.5}};
  };
  std::array<std::array<DualQuatd, 2>, 2> seg;  // [deg in t1][deg in t2]
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      DualQuatd f1 = kind == SegmentKind::PR ? trans_c(i) : rot_c(i);
      DualQuatd f2 = kind == SegmentKind::RP ? trans_c(j) : rot_c(j);
      seg[i][j] = f1 * mid * f2;
    }
  // Rows: coefficients of (t1*t2, t1, t2, 1), scaled by 4.
  Eigen::Matrix<double, 4, 8> out;
  const int order[4][2] = {{1, 1}, {1, 0}, {0, 1}, {0, 0}};
  for (int r = 0; r < 4; ++r) {
    StudyPoint c = to_study(seg[order[r][0]][order[r][1]]);
    for (int m = 0; m < 8; ++m) out(r, m) = 4.0 * c[m];
  }
  return out;
}

std::array<ParamLinearForm, 4> two_joint_space(SegmentKind kind, double a, double l) {
  return nullspace_forms(coefficient_matrix_A(kind, a, l), 't');
}

std::array<ParamLinearForm, 4> conjugate_family(const std::array<ParamLinearForm, 4>& forms,
                                                const DualQuat<Poly1>& g, const DualQuat<Poly1>& h) {
  // Column j of the induced linear action: coordinates of g * E_j * h.
  std::array<std::array<Poly1, 8>, 8> m;  // m[row coord][basis col]
  for (int j = 0; j < 8; ++j) {
    char var = g.coord(0).var();
    DualQuat<Poly1> img = g * const_pdq(basis_dq(j), var) * h;
    for (int i = 0; i < 8; ++i) m[i][j] = img.coord(i);
  }
  std::array<ParamLinearForm, 4> out;
  for (int f = 0; f < 4; ++f) {
    out[f].param = forms[f].param;
    for (int j = 0; j < 8; ++j) {
      Poly1 acc;
      for (int i = 0; i < 8; ++i) acc = acc + forms[f].coeffs[i] * m[i][j];
      out[f].coeffs[j] = acc.shrink();
    }
    out[f].normalize();
  }
  return out;
}

bool family_in_quadric_numeric(const std::array<ParamLinearForm, 4>& forms, double tol) {
  static const double samples[3] = {0.37, -1.71, 2.23};
  Eigen::Matrix<double, 8, 8> q = Eigen::Matrix<double, 8, 8>::Zero();
  for (int i = 0; i < 4; ++i) q(i, 4 + i) = q(4 + i, i) = 0.5;
  for (double t : samples) {
    Eigen::Matrix<double, 4, 8> fm;
    for (int f = 0; f < 4; ++f) {
      auto row = forms[f].eval_at(t);
      for (int m = 0; m < 8; ++m) fm(f, m) = row[m];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(fm, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > kRankEps * sv(0)) ++rank;
    if (rank < 4) continue;  // degenerate sample, not informative
    Eigen::MatrixXd sol = svd.matrixV().rightCols(4);
    double worst = (sol.transpose() * q * sol).cwiseAbs().maxCoeff();
    if (worst > tol) return false;
  }
  return true;
}

FamilyPair three_chain_families(const std::array<DHRow, 3>& rows) {
  const DHRow &r1 = rows[0], &r2 = rows[1], &r3 = rows[2];
  FamilyPair out;

  // family parametrized by joint 1, built on the (joint2, joint3) segment
  {
    SegmentSpec seg = segment_of(r2, r3);
    auto base = two_joint_space(seg.kind, seg.a, seg.l);
    // strip sigma1(t) Tz(d2) on the left and the fixed trailing factors of row 3 on the right
    DualQuat<Poly1> gc = const_pdq(trans_z(-r2.d), 't') * sigma_joint_poly(r1, 't').conj();
    DualQuatd h = r3.joint == JointType::Prismatic ? rot_z(r3.v) * trans_x(r3.a) * rot_x(r3.l)
                                                   : trans_z(r3.d) * trans_x(r3.a) * rot_x(r3.l);
    out.primary.forms = conjugate_family(base, gc, const_pdq(h.conj(), 't'));
    bool sym = seg.kind == SegmentKind::RP ? std::abs(std::abs(r2.l) - 1.0) < kSymEps
                                           : (std::abs(r2.a) < kSymEps || std::abs(r2.l) < kSymEps);
    out.primary.in_study_quadric_symbolic = sym;
    out.primary.reason = seg.kind == SegmentKind::RP ? "l2=+/-1" : "a2=0 or l2=0";
  }
  // family parametrized by joint 3, built on the (joint1, joint2) segment
  {
    auto base = two_joint_space(SegmentKind::RR, r1.a, r1.l);
    DualQuat<Poly1> hc = sigma_joint_poly(r3, 't').conj() *
                         const_pdq(rot_x(-r2.l) * trans_x(-r2.a) * trans_z(-r2.d), 't');
    out.secondary.forms = conjugate_family(base, const_pdq(rot_z(0.0), 't'), hc);
    out.secondary.in_study_quadric_symbolic = std::abs(r1.a) < kSymEps || std::abs(r1.l) < kSymEps;
    out.secondary.reason = "a1=0 or l1=0";
  }
  for (LinearSpaceFamily* fam : {&out.primary, &out.secondary}) {
    fam->in_study_quadric_numeric = family_in_quadric_numeric(fam->forms);
    fam->in_study_quadric = fam->in_study_quadric_symbolic || fam->in_study_quadric_numeric;
  }
  return out;
}

std::array<DHRow, 3> reversed_right_rows(const ChainSpec& chain) {
  const DHRow &r4 = chain.rows[3], &r5 = chain.rows[4];
  DHRow t1 = DHRow::revolute(0.0, -r5.a, -r5.alpha);
  DHRow t2 = DHRow::revolute(-r5.d, -r4.a, -r4.alpha);
  DHRow t3 = r4.joint == JointType::Revolute ? DHRow::revolute(-r4.d, 0.0, 0.0)
                                             : DHRow::prismatic(-r4.theta, 0.0, 0.0);
  return {t1, t2, t3};
}

FamilyPair build_left_families(const ChainSpec& chain) {
  FamilyPair out = three_chain_families({chain.rows[0], chain.rows[1], chain.rows[2]});
  bool p3 = chain.rows[2].joint == JointType::Prismatic;
  out.primary.label = "T(v1)";
  out.primary.joint = {0, JointType::Revolute, "v1"};
  out.secondary.label = p3 ? "T(d3)" : "T(v3)";
  out.secondary.joint = {2, chain.rows[2].joint, p3 ? "d3" : "v3"};
  return out;
}

FamilyPair left_families(const ChainSpec& chain) {
  FamilyPair out = build_left_families(chain);
  if (out.both_in_quadric())
    fail(ErrorCode::Degenerate,
         "both left families lie in the Study quadric ({a1=0 or l1=0} and l2=+/-1)");
  return out;
}

namespace {

std::array<ParamLinearForm, 4> flip_and_pull(const std::array<ParamLinearForm, 4>& forms,
                                             const DualQuatd& ee_conj, char var) {
  std::array<ParamLinearForm, 4> flipped;
  for (int f = 0; f < 4; ++f) {
    flipped[f].param = var;
    for (int m = 0; m < 8; ++m) {
      flipped[f].coeffs[m] = forms[f].coeffs[m].negate_var();
      flipped[f].coeffs[m].set_var(var);
    }
  }
  return conjugate_family(flipped, const_pdq(ee_conj, var), const_pdq(rot_z(0.0), var));
}

}  // namespace

FamilyPair build_right_families(const ChainSpec& chain, const StudyPoint& ee) {
  auto rows = reversed_right_rows(chain);
  FamilyPair rev = three_chain_families(rows);
  DualQuatd ee_conj = from_study(ee).conj();
  bool p4 = chain.rows[3].joint == JointType::Prismatic;

  FamilyPair out;
  out.primary = rev.primary;
  out.primary.forms = flip_and_pull(rev.primary.forms, ee_conj, 'w');
  out.primary.label = "T(v6)";
  out.primary.joint = {5, JointType::Revolute, "v6"};
  out.primary.reason = p4 ? "l4=+/-1" : "a4=0 or l4=0";

  out.secondary = rev.secondary;
  out.secondary.forms = flip_and_pull(rev.secondary.forms, ee_conj, 'w');
  out.secondary.label = p4 ? "T(d4)" : "T(v4)";
  out.secondary.joint = {3, chain.rows[3].joint, p4 ? "d4" : "v4"};
  out.secondary.reason = "a5=0 or l5=0";

  // the pullback maps the quadric to itself, but re-verify on the final forms
  for (LinearSpaceFamily* fam : {&out.primary, &out.secondary}) {
    fam->in_study_quadric_numeric = family_in_quadric_numeric(fam->forms);
    fam->in_study_quadric = fam->in_study_quadric_symbolic || fam->in_study_quadric_numeric;
  }
  return out;
}

FamilyPair right_families(const ChainSpec& chain, const StudyPoint& ee) {
  FamilyPair out = build_right_families(chain, ee);
  if (out.both_in_quadric())
    fail(ErrorCode::Degenerate,
         "both right families lie in the Study quadric ({a4=0 or l4=0} and {a5=0 or l5=0})");
  return out;
}

MiddleJointSystem middle_joint_form(const ChainSpec& chain, ChainSide side, const StudyPoint* ee) {
  std::array<DHRow, 3> rows;
  if (side == ChainSide::Left) {
    rows = {chain.rows[0], chain.rows[1], chain.rows[2]};
  } else {
    if (!ee) fail(ErrorCode::Invalid, "middle_joint_form: right side requires the pose");
    rows = reversed_right_rows(chain);
  }
  char var = side == ChainSide::Left ? 'v' : 'w';

  // Coefficient dual quaternions of the three factors; the product's trivariate
  // coefficients are the ordered products of one coefficient per factor.
  DualQuat<Poly1> s1 = sigma_joint_poly(rows[0], var);
  DualQuat<Poly1> s2 = sigma_joint_poly(rows[1], var);
  DualQuat<Poly1> s3 = sigma_joint_poly(rows[2], var);
  DualQuatd c1[2] = {pdq_coeff(s1, 0), pdq_coeff(s1, 1)};
  DualQuatd c2[2] = {pdq_coeff(s2, 0), pdq_coeff(s2, 1)};
  DualQuatd c3[2] = {pdq_coeff(s3, 0), pdq_coeff(s3, 1)};
  StudyPoint s[2][2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) s[i][j][k] = to_study(c1[i] * c2[j] * c3[k]);

  // Unknown form: sum_m (alpha_m + beta_m * t2) * X_m, 16 unknowns. One row of B per
  // monomial t1^i t2^j t3^k appearing after substitution (j runs to 2).
  MiddleJointSystem out;
  std::vector<Eigen::Matrix<double, 1, 16>> brows;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 2; ++k) {
        Eigen::Matrix<double, 1, 16> row = Eigen::Matrix<double, 1, 16>::Zero();
        if (j <= 1)
          for (int m = 0; m < 8; ++m) row(m) = s[i][j][k][m];
        if (j >= 1)
          for (int m = 0; m < 8; ++m) row(8 + m) = s[i][j - 1][k][m];
        if (row.cwiseAbs().maxCoeff() > 0.0) {
          brows.push_back(row);
          out.monomials.push_back({i, j, k});
        }
      }
  out.B.resize(static_cast<Eigen::Index>(brows.size()), 16);
  for (size_t r = 0; r < brows.size(); ++r) out.B.row(static_cast<Eigen::Index>(r)) = brows[r];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.B, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankEps * sv(0)) ++rank;
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(16 - rank);

  DualQuatd ee_conj = ee ? from_study(*ee).conj() : rot_z(0.0);
  double best = 0.0;
  for (int c = 0; c < kernel.cols(); ++c) {
    Eigen::VectorXd k16 = kernel.col(c);
    double lin = k16.tail(8).cwiseAbs().maxCoeff();
    if (lin <= 1e-8 * k16.cwiseAbs().maxCoeff()) continue;
    std::array<ParamLinearForm, 4> one;
    one[0].param = var;
    for (int m = 0; m < 8; ++m) one[0].coeffs[m] = Poly1({k16(m), k16(8 + m)}, var);
    if (side == ChainSide::Right) {
      // middle parameter of the reversed chain is the negated actual joint; also pull
      // the form back so it applies to workspace points in base coordinates
      one = flip_and_pull({one[0], one[0], one[0], one[0]}, ee_conj, var);
    }
    one[0].normalize();
    out.kernel_forms.push_back(one[0]);
    if (lin > best) {
      best = lin;
      out.canonical = one[0];
    }
  }
  if (out.kernel_forms.empty())
    fail(ErrorCode::Singular,
         "no middle-joint kernel element with a parametrized part: infinitely many solutions");
  return out;
}

}  // namespace ik6rp
