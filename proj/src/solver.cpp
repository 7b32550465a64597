#include "solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace ik6rp {

namespace {

constexpr double kRankEps = 1e-10;

int numeric_rank(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankEps * sv(0)) ++rank;
  return rank;
}

double max_abs_all(const std::array<Poly2, 8>& p) {
  double m = 0.0;
  for (const Poly2& q : p) m = std::max(m, q.max_abs());
  return m;
}

// Sylvester matrix of f, g w.r.t. w as a matrix polynomial in u: S(u) = sum_k S_k u^k.
std::vector<Eigen::MatrixXd> sylvester_blocks(const Poly2& f, const Poly2& g) {
  int m = f.deg_w(), n = g.deg_w(), nn = m + n;
  int d = std::max(f.deg_u(), g.deg_u());
  std::vector<Eigen::MatrixXd> s(d + 1, Eigen::MatrixXd::Zero(nn, nn));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k)
      for (int i = 0; i <= f.deg_u(); ++i) s[i](r, r + k) = f.at(i, m - k);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= g.deg_u(); ++i) s[i](n + r, r + k) = g.at(i, n - k);
  double mx = 0.0;
  for (const auto& b : s) mx = std::max(mx, b.cwiseAbs().maxCoeff());
  while (s.size() > 1 && s.back().cwiseAbs().maxCoeff() <= 1e-12 * mx) s.pop_back();
  return s;
}

// Real u with det S(u) = 0 via the block-companion linearization of S(u) and QZ.
// Backward stable where coefficient expansion of the determinant is not.
std::vector<double> real_pencil_roots(const std::vector<Eigen::MatrixXd>& s) {
  int d = static_cast<int>(s.size()) - 1;
  int n = static_cast<int>(s[0].rows());
  if (d == 0 || n == 0) return {};
  int m = n * d;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m), b = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i + 1 < d; ++i) {
    a.block(i * n, (i + 1) * n, n, n).setIdentity();
    b.block(i * n, i * n, n, n).setIdentity();
  }
  for (int k = 0; k < d; ++k) a.block((d - 1) * n, k * n, n, n) = -s[k];
  b.block((d - 1) * n, (d - 1) * n, n, n) = s[d];
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(a, b, false);
  std::vector<double> out;
  for (int i = 0; i < m; ++i) {
    std::complex<double> al = ges.alphas()(i);
    double be = ges.betas()(i);
    if (std::abs(be) < 1e-300) continue;
    std::complex<double> z = al / be;
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
    if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z.real()))) continue;
    out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-10 * (1.0 + std::abs(x)); }),
            out.end());
  return out;
}

// Solve one family form linear in its parameter at a fixed point; largest linear
// coefficient wins. Returns nothing when every linear coefficient underflows.
std::optional<double> solve_joint_linear(const LinearSpaceFamily& fam, const StudyPoint& x) {
  double best_beta = 0.0, best_alpha = 0.0, scale = 0.0;
  for (const ParamLinearForm& form : fam.forms) {
    Poly1 lin = form.apply(x);
    double alpha = lin[0], beta = lin[1];
    scale = std::max(scale, std::max(std::abs(alpha), std::abs(beta)));
    if (std::abs(beta) > std::abs(best_beta)) {
      best_beta = beta;
      best_alpha = alpha;
    }
  }
  if (std::abs(best_beta) <= 1e-10 * std::max(scale, 1e-300)) return std::nullopt;
  return -best_alpha / best_beta;
}

std::optional<double> solve_middle_linear(const MiddleJointSystem& mid, const StudyPoint& x) {
  double best_beta = 0.0, best_alpha = 0.0, scale = 0.0;
  for (const ParamLinearForm& form : mid.kernel_forms) {
    Poly1 lin = form.apply(x);
    double alpha = lin[0], beta = lin[1];
    scale = std::max(scale, std::max(std::abs(alpha), std::abs(beta)));
    if (std::abs(beta) > std::abs(best_beta)) {
      best_beta = beta;
      best_alpha = alpha;
    }
  }
  if (std::abs(best_beta) <= 1e-10 * std::max(scale, 1e-300)) return std::nullopt;
  return -best_alpha / best_beta;
}

void append_family_table(std::ostringstream& os, const LinearSpaceFamily& fam) {
  os << fam.label << " (param " << fam.joint.symbol
     << (fam.in_study_quadric ? ", in Study quadric" : "") << ")\n";
  for (int f = 0; f < 4; ++f) {
    os << "  form " << f + 1 << ":";
    for (int m = 0; m < 8; ++m) {
      const Poly1& c = fam.forms[f].coeffs[m];
      os << " [";
      for (int k = 0; k <= c.degree(); ++k) os << (k ? " " : "") << c[k];
      os << "]";
    }
    os << "\n";
  }
}

}  // namespace

StackedSystem stack_system(const LinearSpaceFamily& tu, const LinearSpaceFamily& tw) {
  StackedSystem rows;
  for (int f = 0; f < 4; ++f)
    for (int m = 0; m < 8; ++m) {
      rows[f][m] = Poly2::from_u(tu.forms[f].coeffs[m]);
      rows[4 + f][m] = Poly2::from_w(tw.forms[f].coeffs[m]);
    }
  return rows;
}

void check_general_position(const StackedSystem& rows) {
  std::mt19937 rng(0x6b7046u);  // deterministic probe
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  int best_rank = 0;
  for (int probe = 0; probe < 5; ++probe) {
    double u = dist(rng), w = dist(rng);
    Eigen::MatrixXd m(8, 8);
    for (int r = 0; r < 8; ++r)
      for (int c = 0; c < 8; ++c) m(r, c) = rows[r][c].eval(u, w);
    best_rank = std::max(best_rank, numeric_rank(m));
    if (best_rank == 8) return;
  }
  fail(ErrorCode::Singular, "stacked hyperplane system has rank " + std::to_string(best_rank) +
                                " < 8: infinitely many IK solutions");
}

std::array<Poly2, 8> kernel_point(const StackedSystem& rows, const std::array<int, 7>& subset) {
  // Shared minor expansion: process the seven rows once; the states after row k are the
  // signed determinants of all k-column selections. The 7-column states are the eight
  // maximal minors at once.
  std::vector<std::pair<uint32_t, Poly2>> states{{0u, [] {
                                                    Poly2 one(1, 1);
                                                    one.at(0, 0) = 1.0;
                                                    return one;
                                                  }()}};
  for (int r = 0; r < 7; ++r) {
    std::vector<std::pair<uint32_t, Poly2>> next;
    next.reserve(states.size() * 8);
    auto find = [&next](uint32_t key) -> Poly2* {
      for (auto& [k, v] : next)
        if (k == key) return &v;
      return nullptr;
    };
    for (auto& [cols, det] : states) {
      for (int c = 0; c < 8; ++c) {
        if (cols & (1u << c)) continue;
        const Poly2& e = rows[subset[r]][c];
        if (e.is_zero()) continue;
        int pos = __builtin_popcount(cols & ((1u << c) - 1u));
        Poly2 term = (e * det).scaled(pos % 2 ? -1.0 : 1.0);
        uint32_t key = cols | (1u << c);
        if (Poly2* acc = find(key))
          *acc = *acc + term;
        else
          next.emplace_back(key, std::move(term));
      }
    }
    states = std::move(next);
    if (states.empty()) break;
  }
  std::array<Poly2, 8> p;
  for (auto& [cols, det] : states) {
    uint32_t missing = ~cols & 0xffu;
    int i = __builtin_ctz(missing);
    p[i] = det.scaled(i % 2 ? -1.0 : 1.0).shrink();
  }
  double m = max_abs_all(p);
  if (m == 0.0) fail(ErrorCode::Internal, "kernel_point: all eight minors vanish");
  for (Poly2& q : p) q = q.scaled(1.0 / m);
  return p;
}

Poly2 study_substitution(const std::array<Poly2, 8>& p) {
  Poly2 f;
  for (int i = 0; i < 4; ++i) f = f + p[i] * p[4 + i];
  return f.shrink();
}

Poly2 leftover_form(const std::array<Poly2, 8>& p, const StackedSystem& rows, int dropped) {
  Poly2 g;
  for (int m = 0; m < 8; ++m) g = g + rows[dropped][m] * p[m];
  return g.shrink();
}

std::vector<UWPair> solve_uw(const Poly2& f, const Poly2& g, const std::array<Poly2, 8>& p,
                             double tol, int* resultant_degree) {
  auto blocks = sylvester_blocks(f, g);
  if (resultant_degree)
    *resultant_degree = static_cast<int>(blocks.size() - 1) * static_cast<int>(blocks[0].rows());
  std::vector<double> us = real_pencil_roots(blocks);

  Poly2 fu = f.d_du(), fw = f.d_dw(), gu = g.d_du(), gw = g.d_dw();
  std::vector<UWPair> out;
  for (double u0 : us) {
    Poly1 fslice = f.eval_partial_u(u0).shrink(1e-11);
    Poly1 gslice = g.eval_partial_u(u0).shrink(1e-11);
    if (fslice.is_zero() || gslice.is_zero()) continue;
    // loose pre-pairing; the polished residual gates below do the real filtering
    std::vector<double> ws = common_real_roots(fslice, gslice, 1e-3);
    for (double w0 : ws) {
      double u = u0, w = w0;
      for (int it = 0; it < 40; ++it) {
        double fv = f.eval(u, w), gv = g.eval(u, w);
        double j00 = fu.eval(u, w), j01 = fw.eval(u, w);
        double j10 = gu.eval(u, w), j11 = gw.eval(u, w);
        double det = j00 * j11 - j01 * j10;
        if (std::abs(det) < 1e-300) break;
        double du = (-fv * j11 + gv * j01) / det;
        double dw = (-gv * j00 + fv * j10) / det;
        u += du;
        w += dw;
        if (std::abs(du) + std::abs(dw) <= 1e-15 * (1.0 + std::abs(u) + std::abs(w))) break;
      }
      if (!std::isfinite(u) || !std::isfinite(w)) continue;
      if (std::abs(f.eval(u, w)) > tol * std::max(f.eval_scale(u, w), 1e-300)) continue;
      if (std::abs(g.eval(u, w)) > tol * std::max(g.eval_scale(u, w), 1e-300)) continue;
      StudyPoint x;
      double mx = 0.0;
      for (int i = 0; i < 8; ++i) {
        x[i] = p[i].eval(u, w);
        mx = std::max(mx, std::abs(x[i]));
      }
      if (mx == 0.0) continue;
      for (double& v : x) v /= mx;
      // discard points outside the rigid-transform set: primal part (numerically) zero
      double primal = std::max(std::max(std::abs(x[0]), std::abs(x[1])),
                               std::max(std::abs(x[2]), std::abs(x[3])));
      if (primal < 1e-8) continue;
      bool dup = false;
      for (const UWPair& q : out)
        if (std::abs(q.u - u) <= 1e-9 * (1.0 + std::abs(u)) &&
            std::abs(q.w - w) <= 1e-9 * (1.0 + std::abs(w)))
          dup = true;
      if (dup) continue;
      out.push_back({u, w, canonicalize(x)});
    }
  }
  return out;
}

JointVector recover_remaining_joints(const ChainSpec& chain, const FamilyPair& left,
                                     const FamilyPair& right, const MiddleJointSystem& mid_left,
                                     const MiddleJointSystem& mid_right, const StudyPoint& ee,
                                     const LinearSpaceFamily& tu, const LinearSpaceFamily& tw,
                                     const UWPair& cand) {
  JointVector jv{};
  const LinearSpaceFamily& other_left = (&tu == &left.primary) ? left.secondary : left.primary;
  const LinearSpaceFamily& other_right = (&tw == &right.primary) ? right.secondary : right.primary;

  jv[tu.joint.index] = cand.u;
  std::optional<double> j_left = solve_joint_linear(other_left, cand.x);
  std::optional<double> v2 = solve_middle_linear(mid_left, cand.x);

  jv[tw.joint.index] = cand.w;
  std::optional<double> j_right = solve_joint_linear(other_right, cand.x);
  std::optional<double> v5 = solve_middle_linear(mid_right, cand.x);

  if (!j_left || !v2 || !j_right || !v5)
    fail(ErrorCode::Unsolvable,
         "joint coefficient underflows in every available linear form (degenerate pose)");
  jv[other_left.joint.index] = *j_left;
  jv[1] = *v2;
  jv[other_right.joint.index] = *j_right;
  jv[4] = *v5;
  (void)ee;
  return jv;
}

SolveResult solve_ik(const ChainSpec& chain, const StudyPoint& ee_in, const SolveOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  chain.validate();

  SolveResult result;
  result.meta.pattern = chain.pattern();
  std::ostringstream trace;

  if (max_abs(ee_in) == 0.0) fail(ErrorCode::Pose, "pose is the zero tuple");
  double res_in = study_residual(ee_in);
  if (res_in > opts.pose_tol)
    fail(ErrorCode::Pose, "pose violates the Study condition (residual " + std::to_string(res_in) +
                              " > tolerance " + std::to_string(opts.pose_tol) + ")");
  StudyPoint ee = ee_in;
  result.meta.pose_correction = correct_onto_quadric(ee);
  ee = canonicalize(ee);

  FamilyPair left = left_families(chain);
  FamilyPair right = right_families(chain, ee);
  const LinearSpaceFamily& tu = left.primary.in_study_quadric ? left.secondary : left.primary;
  const LinearSpaceFamily& tw = right.primary.in_study_quadric ? right.secondary : right.primary;
  result.meta.left_family = tu.label;
  result.meta.right_family = tw.label;
  if (opts.with_trace) {
    append_family_table(trace, left.primary);
    append_family_table(trace, left.secondary);
    append_family_table(trace, right.primary);
    append_family_table(trace, right.secondary);
    trace << "chosen: " << tu.label << " / " << tw.label << "\n";
  }

  StackedSystem rows = stack_system(tu, tw);
  check_general_position(rows);

  // Leave one of the eight forms out, last first; keep the first subset whose quadric
  // substitution and leftover form are both usable.
  EliminationState st;
  bool found = false, saw_nonzero_f = false;
  for (int drop = 7; drop >= 0; --drop) {
    if (opts.force_drop >= 0 && drop != opts.force_drop) continue;
    std::array<int, 7> subset{};
    for (int i = 0, j = 0; i < 8; ++i)
      if (i != drop) subset[j++] = i;
    std::array<Poly2, 8> p;
    try {
      p = kernel_point(rows, subset);
    } catch (const Error&) {
      continue;  // all minors vanish: subset unusable
    }
    Poly2 f = study_substitution(p);
    if (f.is_zero(1e-12)) continue;
    saw_nonzero_f = true;
    Poly2 g = leftover_form(p, rows, drop);
    if (g.is_zero(1e-12))
      fail(ErrorCode::Internal,
           "leftover form vanishes identically despite the rank check (inconsistent system)");
    if (g.deg_u() == 0 && g.deg_w() == 0) continue;  // constant nonzero: no solution here
    st.subset = subset;
    st.dropped = drop;
    st.p = std::move(p);
    st.f = f.scaled(1.0 / f.max_abs());
    st.g = g.scaled(1.0 / g.max_abs());
    found = true;
    break;
  }
  if (!found) {
    if (!saw_nonzero_f)
      fail(ErrorCode::Degenerate,
           "every seven-form subset yields an identically vanishing quadric substitution");
    result.meta.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    result.trace = trace.str();
    return result;  // constant nonzero leftover form everywhere: no solutions
  }
  result.meta.dropped_form = st.dropped;
  result.meta.deg_f_u = st.f.deg_u();
  result.meta.deg_f_w = st.f.deg_w();
  result.meta.deg_g_u = st.g.deg_u();
  result.meta.deg_g_w = st.g.deg_w();

  std::vector<UWPair> cands = solve_uw(st.f, st.g, st.p, 1e-8, &result.meta.resultant_degree);
  result.meta.candidates = static_cast<int>(cands.size());
  if (opts.with_trace) {
    trace << "dropped form: " << st.dropped + 1 << " of 8\n";
    trace << "deg f = (" << st.f.deg_u() << "," << st.f.deg_w() << "), deg g = (" << st.g.deg_u()
          << "," << st.g.deg_w() << ")\n";
    trace << "resultant degree bound: " << result.meta.resultant_degree << "\n";
    trace << "surviving (u,w) candidates:";
    for (const UWPair& c : cands) trace << " (" << c.u << "," << c.w << ")";
    trace << "\n";
  }

  std::vector<IKSolution> sols;
  MiddleJointSystem mid_left, mid_right;
  if (!cands.empty()) {
    mid_left = middle_joint_form(chain, ChainSide::Left);
    mid_right = middle_joint_form(chain, ChainSide::Right, &ee);
  }
  for (const UWPair& cand : cands) {
    JointVector jv;
    try {
      jv = recover_remaining_joints(chain, left, right, mid_left, mid_right, ee, tu, tw, cand);
    } catch (const Error& e) {
      if (opts.with_trace)
        trace << "candidate (" << cand.u << "," << cand.w << ") dropped: " << e.what() << "\n";
      continue;
    }
    bool ok = true;
    for (double v : jv)
      if (!std::isfinite(v)) ok = false;
    if (!ok) continue;
    StudyPoint fk = to_study(forward_kinematics(chain, jv));
    double residual = projective_distance(fk, ee);
    if (residual > opts.accept_tol) {
      if (opts.with_trace)
        trace << "candidate (" << cand.u << "," << cand.w
              << ") rejected by the forward-kinematics gate (residual " << residual << ")\n";
      continue;
    }
    IKSolution s;
    s.joints = jv;
    s.residual = residual;
    s.f4_pose = cand.x;
    s.u = cand.u;
    s.w = cand.w;
    sols.push_back(s);
  }

  // merge joint-space duplicates, then order by the first joint
  std::sort(sols.begin(), sols.end(),
            [](const IKSolution& a, const IKSolution& b) { return a.residual < b.residual; });
  std::vector<IKSolution> dedup;
  for (const IKSolution& s : sols) {
    bool dup = false;
    for (const IKSolution& q : dedup) {
      double dist = 0.0;
      for (int i = 0; i < 6; ++i) dist = std::max(dist, std::abs(s.joints[i] - q.joints[i]));
      if (dist <= 1e-6) dup = true;
    }
    if (!dup) dedup.push_back(s);
  }
  std::sort(dedup.begin(), dedup.end(),
            [](const IKSolution& a, const IKSolution& b) { return a.joints[0] < b.joints[0]; });
  result.solutions = std::move(dedup);
  result.meta.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (opts.with_trace) {
    trace << "solutions: " << result.solutions.size() << ", elapsed " << result.meta.elapsed_ms
          << " ms\n";
  }
  result.trace = trace.str();
  return result;
}

}  // namespace ik6rp
