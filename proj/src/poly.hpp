#pragma once
#include <vector>

#include "errors.hpp"

namespace ik6rp {

// Dense univariate polynomial, coefficients ascending by degree.
// Invariant after shrink()/trim(): leading coefficient nonzero, or size()==1 for the zero polynomial.
class Poly1 {
public:
  Poly1() : c_{0.0} {}
  explicit Poly1(std::vector<double> c, char var = 'x') : c_(std::move(c)), var_(var) {
    if (c_.empty()) c_.push_back(0.0);
  }
  static Poly1 constant(double v, char var = 'x') { return Poly1({v}, var); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int i) const { return i >= 0 && i < static_cast<int>(c_.size()) ? c_[i] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }
  char var() const { return var_; }
  void set_var(char v) { var_ = v; }

  double max_abs() const;
  bool is_zero(double eps = 0.0) const { return max_abs() <= eps; }

  double eval(double x) const;
  // Magnitude scale of the evaluation at x: sum |c_i| |x|^i. Residual tests divide by this.
  double eval_scale(double x) const;
  Poly1 derivative() const;

  // Strip negligible leading coefficients only (degree control; interior terms untouched).
  Poly1 shrink(double rel_eps = 1e-12) const;
  // Zero every coefficient below rel_eps * max|coeff|, then strip zero leading terms.
  Poly1 trim(double rel_eps) const;
  // Substitute x -> -x.
  Poly1 negate_var() const;

  friend Poly1 operator+(const Poly1& a, const Poly1& b);
  friend Poly1 operator-(const Poly1& a, const Poly1& b);
  friend Poly1 operator*(const Poly1& a, const Poly1& b);
  friend Poly1 operator*(const Poly1& a, double s);
  friend Poly1 operator*(double s, const Poly1& a) { return a * s; }
  Poly1 operator-() const { return *this * -1.0; }

private:
  std::vector<double> c_;
  char var_ = 'x';
};

// Dense bivariate polynomial; coefficient of u^i w^j at (i, j).
class Poly2 {
public:
  Poly2() : nu_(1), nw_(1), c_{0.0} {}
  Poly2(int nu, int nw) : nu_(nu), nw_(nw), c_(static_cast<size_t>(nu) * nw, 0.0) {}

  static Poly2 from_u(const Poly1& p);  // polynomial in u only
  static Poly2 from_w(const Poly1& p);  // polynomial in w only

  int deg_u() const { return nu_ - 1; }
  int deg_w() const { return nw_ - 1; }
  double& at(int i, int j) { return c_[static_cast<size_t>(i) * nw_ + j]; }
  double at(int i, int j) const { return c_[static_cast<size_t>(i) * nw_ + j]; }

  double max_abs() const;
  bool is_zero(double eps = 0.0) const { return max_abs() <= eps; }

  double eval(double u, double w) const;
  double eval_scale(double u, double w) const;
  Poly1 eval_partial_u(double u) const;  // -> Poly1 in w
  Poly1 coeff_of_w(int j) const;         // -> Poly1 in u
  Poly2 d_du() const;
  Poly2 d_dw() const;

  Poly2 shrink(double rel_eps = 1e-12) const;  // strip negligible top rows/columns only
  Poly2 trim(double rel_eps) const;
  Poly2 scaled(double s) const;

  friend Poly2 operator+(const Poly2& a, const Poly2& b);
  friend Poly2 operator*(const Poly2& a, const Poly2& b);

private:
  int nu_, nw_;
  std::vector<double> c_;
};

struct RealRoot {
  double value;
  int multiplicity;
};

// All real roots (Sturm isolation + bisection + Newton polish), ascending;
// multiplicity from the depth of the derivative-gcd chain.
std::vector<RealRoot> real_roots(const Poly1& p, double tol = 1e-12);

// Values where both residuals |p|, |q| fall under tol * evaluation scale.
std::vector<double> common_real_roots(const Poly1& p, const Poly1& q, double tol = 1e-8);

// Resultant of f and g with respect to w: determinant of the Sylvester matrix
// (f rows first), expanded over R[u] by column-subset DP with shared minors.
Poly1 sylvester_resultant_w(const Poly2& f, const Poly2& g);

}  // namespace ik6rp
