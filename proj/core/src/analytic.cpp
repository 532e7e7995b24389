#include "loosecore/analytic.hpp"

#include <cmath>

#include "loosecore/errors.hpp"
#include "loosecore/mathutil.hpp"

namespace loosecore {

namespace {

constexpr unsigned kMaxBisectionSteps = 20000;

void check_rd(unsigned r, double d) {
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  if (!(d > 0.0)) throw InvalidParams("degree parameter d must be positive");
}

// f(x) = log x + d (1 - x^{r-1}); strictly concave on (0, 1] with f(1) = 0,
// so for d > 1/(r-1) it has exactly one root below 1.
double f_transformed(double x, unsigned r, double d) {
  return std::log(x) + d * (1.0 - std::pow(x, static_cast<double>(r - 1)));
}

}  // namespace

double F_eval(double x, unsigned r, double d) {
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw DomainError("F is only evaluated on [0, 1]");
  }
  check_rd(r, d);
  return std::exp(-d * (1.0 - std::pow(x, static_cast<double>(r - 1))));
}

double solve_fixed_point(unsigned r, double d, double tol) {
  unsigned iterations = 0;
  return solve_fixed_point(r, d, tol, iterations);
}

double solve_fixed_point(unsigned r, double d, double tol,
                         unsigned& iterations_out) {
  check_rd(r, d);
  if (!(tol > 0.0)) throw InvalidParams("tolerance must be positive");
  iterations_out = 0;

  const double d_star = 1.0 / (r - 1);
  // At and below the threshold 0 is the largest solution (the boundary case
  // is a convention).
  if (d <= d_star) return 0.0;

  // Find a lower bracket with f < 0 by halving down from 1/2; f -> -inf at 0.
  double lo = 0.5;
  while (f_transformed(lo, r, d) >= 0.0) {
    lo *= 0.5;
    if (lo == 0.0) {
      // f stayed positive on every representable positive x, so the root
      // sits below the smallest subnormal and rho* rounds to exactly 1.
      return 1.0;
    }
    if (++iterations_out > kMaxBisectionSteps) {
      throw NoConvergence("bracketing failed");
    }
  }
  // Just below 1 the supercritical condition makes f positive.
  double hi = 1.0 - std::min(tol, 1e-3);
  if (f_transformed(hi, r, d) <= 0.0) hi = 1.0 - 1e-16;

  double mid = lo;
  for (;;) {
    mid = 0.5 * (lo + hi);
    const double fm = f_transformed(mid, r, d);
    if (std::abs(fm) < tol) break;
    if (mid == lo || mid == hi) {
      // adjacent doubles: no further refinement is possible
      throw NoConvergence("tolerance unreachable in double precision");
    }
    if (++iterations_out > kMaxBisectionSteps) {
      throw NoConvergence(
          "bisection hit the iteration cap; tolerance too small for double");
    }
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  // The root must be a crossing, not a tangency: f' > 0 there.
  const double deriv =
      1.0 / mid - d * (r - 1) * std::pow(mid, static_cast<double>(r - 2));
  if (!(deriv > 0.0)) {
    throw NoConvergence("fixed-point root has non-positive derivative");
  }
  return 1.0 - mid;
}

AnalyticParams derived_params(unsigned r, double d, double tol) {
  AnalyticParams out;
  out.r = r;
  out.d = d;
  out.d_star = 1.0 / (r - 1);
  out.tolerance = tol;
  out.rho_star = solve_fixed_point(r, d, tol, out.iterations);
  out.supercritical = d > out.d_star;
  out.at_threshold = d == out.d_star;

  const double rho = out.rho_star;
  const double q = 1.0 - rho;  // survival complement
  out.rho_hat_star = 1.0 - std::pow(q, static_cast<double>(r - 1));
  // eta is 0/0 at the threshold; every consumer multiplies it by a
  // vanishing mass, so 0 is the right convention.
  out.eta = out.rho_hat_star == 0.0
                ? 0.0
                : 1.0 - (r - 1) * rho * std::pow(q, static_cast<double>(r - 2)) /
                          out.rho_hat_star;
  out.alpha = rho * (1.0 - d * (r - 1) * std::pow(q, static_cast<double>(r - 1)));
  out.beta = d / r *
             (1.0 - std::pow(q, static_cast<double>(r)) -
              r * rho * std::pow(q, static_cast<double>(r - 1)));
  const double x = d * out.rho_hat_star;
  out.gamma = -std::expm1(-x) - x * std::exp(-x);
  return out;
}

double po_tilde_pmf(double lambda, unsigned j) {
  if (!(lambda >= 0.0)) throw DomainError("Poisson rate must be non-negative");
  if (j == 0) return poisson_pmf(lambda, 0) + poisson_pmf(lambda, 1);
  if (j == 1) return 0.0;
  return poisson_pmf(lambda, j);
}

double bi_tilde_pmf(unsigned trials, double p, unsigned j) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw DomainError("success probability must lie in [0, 1]");
  }
  if (j == 0) return binomial_pmf(trials, p, 0) + binomial_pmf(trials, p, 1);
  if (j == 1) return 0.0;
  return binomial_pmf(trials, p, j);
}

double z_pmf(const AnalyticParams& params, unsigned j) {
  const double lambda = params.d * params.rho_hat_star;
  if (j >= 2) return poisson_pmf(lambda, j);
  if (j == 1) return params.eta * poisson_pmf(lambda, 1);
  return poisson_pmf(lambda, 0) + (1.0 - params.eta) * poisson_pmf(lambda, 1);
}

double z_pmf(unsigned r, double d, unsigned j) {
  return z_pmf(derived_params(r, d), j);
}

std::vector<SurvivalPair> survival_recursion(unsigned r, double d,
                                             unsigned t_max) {
  check_rd(r, d);
  std::vector<SurvivalPair> trajectory;
  trajectory.reserve(t_max + 1);
  trajectory.push_back({0, 1.0, 1.0});
  double p = 1.0;
  for (unsigned t = 1; t <= t_max; ++t) {
    const double q = 1.0 - std::pow(1.0 - p, static_cast<double>(r - 1));
    p = -std::expm1(-d * q);
    trajectory.push_back({t, p, q});
  }
  return trajectory;
}

CycleBound cycle_bound_coeff(unsigned r, double d) {
  const AnalyticParams params = derived_params(r, d);
  CycleBound out;
  out.coefficient = std::min(params.beta, params.gamma);
  if (params.beta < params.gamma) {
    out.side = BoundSide::beta;
  } else if (params.gamma < params.beta) {
    out.side = BoundSide::gamma;
  } else {
    out.side = BoundSide::tie;
  }
  return out;
}

ExpansionReport supercritical_expansion(unsigned r, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw DomainError("expansion parameter must lie in (0, 1)");
  }
  if (r < 2) throw InvalidParams("uniformity r must be at least 2");
  ExpansionReport out;
  out.r = r;
  out.eps = eps;
  out.d = (1.0 + eps) / (r - 1);
  const double rm1 = static_cast<double>(r - 1);
  out.leading_term = 2.0 * eps * eps / (rm1 * rm1);
  out.gamma_exact = derived_params(r, out.d).gamma;
  out.ratio = out.gamma_exact / out.leading_term;
  out.quoted_lower_bound = eps * eps / (4.0 * rm1 * rm1);
  return out;
}

}  // namespace loosecore
