#include "poly.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ik6rp {

double Poly1::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double Poly1::eval(double x) const {
  double acc = 0.0;
  for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

double Poly1::eval_scale(double x) const {
  double acc = 0.0, p = 1.0;
  for (double v : c_) {
    acc += std::abs(v) * p;
    p *= std::abs(x);
  }
  return acc;
}

Poly1 Poly1::derivative() const {
  if (c_.size() <= 1) return Poly1({0.0}, var_);
  std::vector<double> d(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<double>(i);
  return Poly1(std::move(d), var_);
}

Poly1 Poly1::shrink(double rel_eps) const {
  double m = max_abs();
  if (m == 0.0) return Poly1({0.0}, var_);
  size_t n = c_.size();
  while (n > 1 && std::abs(c_[n - 1]) <= rel_eps * m) --n;
  return Poly1(std::vector<double>(c_.begin(), c_.begin() + n), var_);
}

Poly1 Poly1::trim(double rel_eps) const {
  double m = max_abs();
  if (m == 0.0) return Poly1({0.0}, var_);
  std::vector<double> out(c_);
  for (double& v : out)
    if (std::abs(v) < rel_eps * m) v = 0.0;
  size_t n = out.size();
  while (n > 1 && out[n - 1] == 0.0) --n;
  out.resize(n);
  return Poly1(std::move(out), var_);
}

Poly1 Poly1::negate_var() const {
  std::vector<double> out(c_);
  for (size_t i = 1; i < out.size(); i += 2) out[i] = -out[i];
  return Poly1(std::move(out), var_);
}

Poly1 operator+(const Poly1& a, const Poly1& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) out[i] += b.c_[i];
  return Poly1(std::move(out), a.var_);
}

Poly1 operator-(const Poly1& a, const Poly1& b) {
  std::vector<double> out(std::max(a.c_.size(), b.c_.size()), 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i) out[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) out[i] -= b.c_[i];
  return Poly1(std::move(out), a.var_);
}

Poly1 operator*(const Poly1& a, const Poly1& b) {
  std::vector<double> out(a.c_.size() + b.c_.size() - 1, 0.0);
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0.0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly1(std::move(out), a.var_);
}

Poly1 operator*(const Poly1& a, double s) {
  std::vector<double> out(a.c_);
  for (double& v : out) v *= s;
  return Poly1(std::move(out), a.var_);
}

// ---------------------------------------------------------------- Poly2

Poly2 Poly2::from_u(const Poly1& p) {
  Poly2 out(p.degree() + 1, 1);
  for (int i = 0; i <= p.degree(); ++i) out.at(i, 0) = p[i];
  return out;
}

Poly2 Poly2::from_w(const Poly1& p) {
  Poly2 out(1, p.degree() + 1);
  for (int j = 0; j <= p.degree(); ++j) out.at(0, j) = p[j];
  return out;
}

double Poly2::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double Poly2::eval(double u, double w) const {
  double acc = 0.0;
  for (int i = nu_ - 1; i >= 0; --i) {
    double row = 0.0;
    for (int j = nw_ - 1; j >= 0; --j) row = row * w + at(i, j);
    acc = acc * u + row;
  }
  return acc;
}

double Poly2::eval_scale(double u, double w) const {
  double acc = 0.0, pu = 1.0;
  for (int i = 0; i < nu_; ++i) {
    double pw = 1.0;
    for (int j = 0; j < nw_; ++j) {
      acc += std::abs(at(i, j)) * pu * pw;
      pw *= std::abs(w);
    }
    pu *= std::abs(u);
  }
  return acc;
}

Poly1 Poly2::eval_partial_u(double u) const {
  std::vector<double> out(nw_, 0.0);
  double pu = 1.0;
  for (int i = 0; i < nu_; ++i) {
    for (int j = 0; j < nw_; ++j) out[j] += at(i, j) * pu;
    pu *= u;
  }
  return Poly1(std::move(out), 'w');
}

Poly1 Poly2::coeff_of_w(int j) const {
  std::vector<double> out(nu_, 0.0);
  for (int i = 0; i < nu_; ++i) out[i] = at(i, j);
  return Poly1(std::move(out), 'u');
}

Poly2 Poly2::d_du() const {
  if (nu_ == 1) return Poly2(1, 1);
  Poly2 out(nu_ - 1, nw_);
  for (int i = 1; i < nu_; ++i)
    for (int j = 0; j < nw_; ++j) out.at(i - 1, j) = at(i, j) * i;
  return out;
}

Poly2 Poly2::d_dw() const {
  if (nw_ == 1) return Poly2(1, 1);
  Poly2 out(nu_, nw_ - 1);
  for (int i = 0; i < nu_; ++i)
    for (int j = 1; j < nw_; ++j) out.at(i, j - 1) = at(i, j) * j;
  return out;
}

Poly2 Poly2::shrink(double rel_eps) const {
  double m = max_abs();
  if (m == 0.0) return Poly2();
  int nu = nu_, nw = nw_;
  auto row_max = [&](int i) {
    double r = 0.0;
    for (int j = 0; j < nw; ++j) r = std::max(r, std::abs(at(i, j)));
    return r;
  };
  auto col_max = [&](int j) {
    double r = 0.0;
    for (int i = 0; i < nu; ++i) r = std::max(r, std::abs(at(i, j)));
    return r;
  };
  while (nu > 1 && row_max(nu - 1) <= rel_eps * m) --nu;
  while (nw > 1 && col_max(nw - 1) <= rel_eps * m) --nw;
  Poly2 out(nu, nw);
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nw; ++j) out.at(i, j) = at(i, j);
  return out;
}

Poly2 Poly2::trim(double rel_eps) const {
  double m = max_abs();
  if (m == 0.0) return Poly2();
  Poly2 tmp(nu_, nw_);
  for (int i = 0; i < nu_; ++i)
    for (int j = 0; j < nw_; ++j) {
      double v = at(i, j);
      tmp.at(i, j) = std::abs(v) < rel_eps * m ? 0.0 : v;
    }
  return tmp.shrink(0.0);
}

Poly2 Poly2::scaled(double s) const {
  Poly2 out(*this);
  for (double& v : out.c_) v *= s;
  return out;
}

Poly2 operator+(const Poly2& a, const Poly2& b) {
  Poly2 out(std::max(a.nu_, b.nu_), std::max(a.nw_, b.nw_));
  for (int i = 0; i < a.nu_; ++i)
    for (int j = 0; j < a.nw_; ++j) out.at(i, j) += a.at(i, j);
  for (int i = 0; i < b.nu_; ++i)
    for (int j = 0; j < b.nw_; ++j) out.at(i, j) += b.at(i, j);
  return out;
}

Poly2 operator*(const Poly2& a, const Poly2& b) {
  Poly2 out(a.nu_ + b.nu_ - 1, a.nw_ + b.nw_ - 1);
  for (int i = 0; i < a.nu_; ++i)
    for (int j = 0; j < a.nw_; ++j) {
      double v = a.at(i, j);
      if (v == 0.0) continue;
      for (int k = 0; k < b.nu_; ++k)
        for (int l = 0; l < b.nw_; ++l) out.at(i + k, j + l) += v * b.at(k, l);
    }
  return out;
}

// ---------------------------------------------------------------- roots

namespace {

// Sturm chain with positive rescaling of every remainder (keeps magnitudes near 1;
// positive scales preserve the sign structure).
std::vector<Poly1> sturm_chain(const Poly1& p) {
  std::vector<Poly1> chain;
  Poly1 p0 = p.shrink();
  double m0 = p0.max_abs();
  chain.push_back(p0 * (1.0 / m0));
  Poly1 p1 = p0.derivative().shrink();
  if (p1.is_zero()) return chain;
  chain.push_back(p1 * (1.0 / p1.max_abs()));
  while (chain.back().degree() > 0) {
    const Poly1& a = chain[chain.size() - 2];
    const Poly1& b = chain.back();
    // remainder of a / b
    std::vector<double> r(a.coeffs());
    int db = b.degree();
    double lb = b[db];
    for (int k = static_cast<int>(r.size()) - 1; k >= db; --k) {
      double f = r[k] / lb;
      if (f == 0.0) continue;
      for (int j = 0; j <= db; ++j) r[k - db + j] -= f * b[j];
      r[k] = 0.0;
    }
    Poly1 rem = Poly1(std::move(r), a.var()).shrink(1e-13);
    if (rem.is_zero(1e-13)) break;
    chain.push_back(rem * (-1.0 / rem.max_abs()));
  }
  return chain;
}

int sign_variations(const std::vector<Poly1>& chain, double x) {
  int var = 0, prev = 0;
  for (const Poly1& p : chain) {
    double v = p.eval(x);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++var;
    prev = s;
  }
  return var;
}

double newton_polish(const Poly1& p, const Poly1& dp, double x) {
  double best = x, bestv = std::abs(p.eval(x));
  for (int it = 0; it < 8; ++it) {
    double d = dp.eval(x);
    if (d == 0.0) break;
    x -= p.eval(x) / d;
    double v = std::abs(p.eval(x));
    if (v < bestv) {
      bestv = v;
      best = x;
    } else
      break;
  }
  return best;
}

// Distinct real roots in (lo, hi) by bisection on the variation count.
void isolate(const std::vector<Poly1>& chain, double lo, double hi, int vlo, int vhi,
             std::vector<std::pair<double, double>>& out, int depth) {
  int count = vlo - vhi;
  if (count <= 0) return;
  if (count == 1 || depth > 80) {
    out.emplace_back(lo, hi);
    return;
  }
  double mid = 0.5 * (lo + hi);
  // nudge off an exact root of the first chain element
  if (chain[0].eval(mid) == 0.0) mid += (hi - lo) * 1e-9;
  int vm = sign_variations(chain, mid);
  isolate(chain, lo, mid, vlo, vm, out, depth + 1);
  isolate(chain, mid, hi, vm, vhi, out, depth + 1);
}

double refine_bisect(const Poly1& p, double lo, double hi) {
  double flo = p.eval(lo);
  if (flo == 0.0) return lo;
  if (p.eval(hi) == 0.0) return hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * (1.0 + std::abs(mid))) return mid;
    double fm = p.eval(mid);
    if (fm == 0.0) return mid;
    if ((flo > 0) != (fm > 0))
      hi = mid;
    else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Shrink a single-root bracket by bisecting on the variation count; works for
// even-multiplicity roots where the polynomial does not change sign.
void narrow_by_variations(const std::vector<Poly1>& chain, double& lo, double& hi, int vlo) {
  for (int it = 0; it < 120; ++it) {
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-13 * (1.0 + std::abs(mid))) return;
    if (chain[0].eval(mid) == 0.0) mid += (hi - lo) * 1e-9;
    int vm = sign_variations(chain, mid);
    if (vlo - vm >= 1)
      hi = mid;
    else {
      lo = mid;
      vlo = vm;
    }
  }
}

}  // namespace

std::vector<RealRoot> real_roots(const Poly1& p_in, double tol) {
  Poly1 p = p_in.shrink();
  if (p.is_zero()) fail(ErrorCode::Invalid, "real_roots: zero polynomial");
  if (p.degree() == 0) return {};
  auto chain = sturm_chain(p);
  // Cauchy bound
  double lead = std::abs(p[p.degree()]);
  double b = 0.0;
  for (int i = 0; i < p.degree(); ++i) b = std::max(b, std::abs(p[i]) / lead);
  double bound = 1.0 + b;
  int vlo = sign_variations(chain, -bound), vhi = sign_variations(chain, bound);
  std::vector<std::pair<double, double>> brackets;
  isolate(chain, -bound, bound, vlo, vhi, brackets, 0);

  // gcd chain for multiplicities: last Sturm element of a non-squarefree input
  // is (a scalar multiple of) gcd(p, p'); recurse through its own chain.
  std::vector<Poly1> gcds;
  {
    Poly1 cur = p;
    while (true) {
      auto ch = sturm_chain(cur);
      Poly1 g = ch.back();
      if (g.degree() == 0) break;
      gcds.push_back(g);
      cur = g;
    }
  }

  Poly1 dp = p.derivative();
  std::vector<RealRoot> roots;
  for (auto [lo, hi] : brackets) {
    double x;
    double flo = p.eval(lo), fhi = p.eval(hi);
    if ((flo > 0) != (fhi > 0)) {
      x = refine_bisect(p, lo, hi);
    } else {
      // even-multiplicity root: no sign change, narrow on the variation count
      narrow_by_variations(chain, lo, hi, sign_variations(chain, lo));
      x = 0.5 * (lo + hi);
    }
    x = newton_polish(p, dp, x);
    double sc = std::max(p.eval_scale(x), 1e-300);
    if (std::abs(p.eval(x)) > std::max(tol, 1e-9) * sc) continue;
    int mult = 1;
    for (const Poly1& g : gcds) {
      double gs = std::max(g.eval_scale(x), 1e-300);
      if (std::abs(g.eval(x)) <= 1e-6 * gs)
        ++mult;
      else
        break;
    }
    if (!roots.empty() && std::abs(x - roots.back().value) <= 1e-11 * (1.0 + std::abs(x))) continue;
    roots.push_back({x, mult});
  }
  std::sort(roots.begin(), roots.end(), [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
  return roots;
}

std::vector<double> common_real_roots(const Poly1& p_in, const Poly1& q_in, double tol) {
  Poly1 p = p_in.shrink(1e-12), q = q_in.shrink(1e-12);
  bool pz = p.is_zero(), qz = q.is_zero();
  if (pz && qz) fail(ErrorCode::Invalid, "common_real_roots: both polynomials are zero");
  std::vector<double> out;
  if (pz || qz) {
    // common roots with the zero polynomial are the other one's roots
    for (const RealRoot& r : real_roots(pz ? q : p)) out.push_back(r.value);
    return out;
  }
  const Poly1& small = p.degree() <= q.degree() ? p : q;
  const Poly1& other = p.degree() <= q.degree() ? q : p;
  for (const RealRoot& r : real_roots(small)) {
    double sc = std::max(other.eval_scale(r.value), 1e-300);
    if (std::abs(other.eval(r.value)) <= tol * sc) out.push_back(r.value);
  }
  return out;
}

Poly1 sylvester_resultant_w(const Poly2& f_in, const Poly2& g_in) {
  Poly2 f = f_in.shrink(), g = g_in.shrink();
  if (f.is_zero() || g.is_zero()) fail(ErrorCode::Invalid, "resultant: zero polynomial input");
  int m = f.deg_w(), n = g.deg_w();
  if (m == 0 && n == 0) fail(ErrorCode::Invalid, "resultant: both inputs constant in w");
  int N = m + n;
  // Sylvester entry (r, c) as Poly1 in u; f block first.
  auto entry = [&](int r, int c) -> Poly1 {
    if (r < n) {
      int k = c - r;
      if (k >= 0 && k <= m) return f.coeff_of_w(m - k);
    } else {
      int k = c - (r - n);
      if (k >= 0 && k <= n) return g.coeff_of_w(n - k);
    }
    return Poly1();
  };
  // Row-by-row expansion; state = bitmask of used columns -> signed minor.
  std::unordered_map<uint32_t, Poly1> states;
  states.emplace(0u, Poly1::constant(1.0, 'u'));
  for (int r = 0; r < N; ++r) {
    std::unordered_map<uint32_t, Poly1> next;
    next.reserve(states.size() * static_cast<size_t>(N - r));
    for (const auto& [cols, det] : states) {
      for (int c = 0; c < N; ++c) {
        if (cols & (1u << c)) continue;
        Poly1 e = entry(r, c);
        if (e.is_zero()) continue;
        int pos = __builtin_popcount(cols & ((1u << c) - 1u));
        Poly1 term = (pos % 2 ? -1.0 : 1.0) * (e * det);
        uint32_t key = cols | (1u << c);
        auto it = next.find(key);
        if (it == next.end())
          next.emplace(key, std::move(term));
        else
          it->second = it->second + term;
      }
    }
    states = std::move(next);
    if (states.empty()) return Poly1();  // structurally singular: resultant is 0
  }
  auto it = states.find((1u << N) - 1u);
  Poly1 r = it == states.end() ? Poly1() : it->second;
  r.set_var('u');
  return r.shrink();
}

}  // namespace ik6rp
