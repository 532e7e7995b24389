#pragma once

#include <vector>

namespace loosecore {

/// Fixed-point parameter set for the loose core of H^r(n, p) with
/// p = d / C(n-1, r-1):
///   rho_star      largest solution of 1 - rho = exp(-d (1 - (1-rho)^{r-1}))
///   rho_hat_star  1 - (1 - rho_star)^{r-1}
///   eta           1 - (r-1) rho_star (1-rho_star)^{r-2} / rho_hat_star
///   alpha, beta   asymptotic loose-core order and size coefficients
///   gamma         alternative cycle-length coefficient
/// Everything vanishes for d <= d_star = 1/(r-1).
struct AnalyticParams {
  unsigned r = 0;
  double d = 0.0;
  double d_star = 0.0;
  double rho_star = 0.0;
  double rho_hat_star = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double tolerance = 0.0;    // absolute tolerance used by the solver
  unsigned iterations = 0;   // bisection steps taken
  bool supercritical = false;
  bool at_threshold = false;  // d == d_star; rho_star = 0 by convention
};

/// F(x) = exp(-d (1 - x^{r-1})) for x in [0, 1].
double F_eval(double x, unsigned r, double d);

/// Largest solution rho_star of 1 - rho = F(1 - rho): exactly 0 for
/// d <= 1/(r-1), otherwise the unique positive root, found by bisection on
/// f(x) = log(x) + d (1 - x^{r-1}) with |f| < tol at the returned point.
double solve_fixed_point(unsigned r, double d, double tol);
double solve_fixed_point(unsigned r, double d, double tol,
                         unsigned& iterations_out);

AnalyticParams derived_params(unsigned r, double d, double tol = 1e-12);

/// Poisson / binomial laws with the mass at 1 reassigned to 0.
double po_tilde_pmf(double lambda, unsigned j);
double bi_tilde_pmf(unsigned trials, double p, unsigned j);

/// Limiting pmf of variable degrees in the loose core: Poisson(d rho_hat*)
/// with a unit value kept with probability eta and dropped to 0 otherwise.
double z_pmf(const AnalyticParams& params, unsigned j);
double z_pmf(unsigned r, double d, unsigned j);

struct SurvivalPair {
  unsigned t = 0;
  double p = 1.0;  // variable-node survival probability
  double q = 1.0;  // factor-node survival probability
};

/// Survival recursion p_0 = 1, q_t = 1 - (1 - p_{t-1})^{r-1},
/// p_t = 1 - exp(-d q_t); converges down to (rho_star, rho_hat_star).
/// Entry 0 holds the convention (p_0, q_0) = (1, 1).
std::vector<SurvivalPair> survival_recursion(unsigned r, double d,
                                             unsigned t_max);

enum class BoundSide { beta, gamma, tie };

struct CycleBound {
  double coefficient = 0.0;  // min(beta, gamma)
  BoundSide side = BoundSide::tie;
};

/// min(beta, gamma): the linear coefficient bounding the longest loose cycle.
CycleBound cycle_bound_coeff(unsigned r, double d);

/// Numeric check of the near-threshold expansion of gamma at
/// d = (1 + eps) / (r-1): the exact value over the leading term
/// 2 eps^2 / (r-1)^2 tends to 1. Also carries the literature lower-bound
/// display eps^2 / (4 (r-1)^2), reported but never asserted.
struct ExpansionReport {
  unsigned r = 0;
  double eps = 0.0;
  double d = 0.0;
  double leading_term = 0.0;
  double gamma_exact = 0.0;
  double ratio = 0.0;
  double quoted_lower_bound = 0.0;
};

ExpansionReport supercritical_expansion(unsigned r, double eps);

}  // namespace loosecore
