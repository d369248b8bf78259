#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frontier/estimator.hpp"

namespace frontier
{

struct InequalityCheckResult
{
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool pass = true;
  std::string witness;
};

InequalityCheckResult make_inequality_result(double lhs, double rhs,
                                             std::string witness);

// Polynomial sample on a triangle: coefficients in the orthonormal
// reference basis of P_degree.
struct ElementPolynomial
{
  int degree = 0;
  Eigen::VectorXd coefficients;
};

// rho^{-1/2} ||v||_{dK} <= max(beta, sqrt(3)/(nu rho)) (nu^2 ||v||^2 + ||grad v||^2)^{1/2}
InequalityCheckResult check_trace_inequality(Point a, Point b, Point c,
                                             const ElementPolynomial& v, double nu);

// Field on the truncated cylinder (0, q/k) x (0, w) in (along, across)
// coordinates; must vanish on the walls across = 0, w.
struct CylinderSample
{
  std::function<double(double, double)> value;
  std::function<double(double, double)> d_along;
  std::function<double(double, double)> d_across;
};

// k^2 ||v||^2_{C_q} <= 2 q k ||v||^2_{Sigma_q} + 4 q^2 ||d_along v||^2_{C_q}
// with Sigma_q the cross-section at along = q/k.
InequalityCheckResult check_poincare_cylinder(double q, double k, double width,
                                              const CylinderSample& v);
// k ||v||^2_{Sigma_0} <= 2 (k^2 ||v||^2 + ||grad v||^2) on (0, length) x (0, w)
// for samples that vanish at along = length.
InequalityCheckResult check_cylinder_trace(double k, double width, double length,
                                           const CylinderSample& v);

struct ModeFit
{
  int mode = 0;
  double nu = 0.0;           // predicted rate per unit length
  double fitted = 0.0;       // least-squares rate per unit length
  double relative_error = 0.0;
  bool usable = false;       // above the amplitude floor
  bool pass = true;
};

struct DecayReport
{
  std::vector<ModeFit> modes;
  std::vector<double> stations;
  std::vector<Eigen::VectorXcd> coefficients;  // per station
  bool pass = true;
};

// Fits the decay of each mode amplitude along a cylinder over the stations
// (along-coordinates); modes below floor * leading amplitude at the first
// station are skipped.
DecayReport check_pml_decay(const ScalarField& u, const Cylinder& cylinder,
                            const ModeBasis& modes,
                            const std::vector<double>& stations,
                            double floor = 1e-8, double tolerance = 0.10);

struct EquilibrationCheck
{
  double worst = 0.0;
  std::vector<double> element;  // per element, relative
  bool pass = true;
};

// Moments of f - c u_h - div sigma against P_q(K) on every element,
// relative to the largest elementwise data norm.
EquilibrationCheck check_equilibration(const Problem& problem,
                                       const ScalarField& u_h,
                                       const Equilibration& eq,
                                       double tolerance = 1e-9);

// Empirical discrete trace ratio rho^{1/2} ||v||_{dK} / (q ||v||_K).
double discrete_trace_ratio(Point a, Point b, Point c, const ElementPolynomial& v);

}  // namespace frontier
