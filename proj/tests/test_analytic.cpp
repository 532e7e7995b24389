#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "loosecore/analytic.hpp"
#include "loosecore/errors.hpp"

using namespace loosecore;

// Reference values computed independently with 60-digit bisection on
// log(x) + d (1 - x^{r-1}) and exact substitution into the closed forms.
namespace pinned {
constexpr double rho_star_3_1 = 0.549236347982692870455558;
constexpr double rho_hat_star_3_1 = 0.796812130020020046161521;
constexpr double eta_3_1 = 0.378584304355138794762547;
constexpr double alpha_3_1 = 0.326040020658320022111854;
constexpr double beta_3_1 = 0.191205267565215732605939;
constexpr double gamma_3_1 = 0.190062402283179270577743;
constexpr double z1_3_1 = 0.135977618375140751534111;
constexpr double z0_3_1 = 0.673959979341679977888146;
constexpr double z2_3_1 = 0.143097078360262225227765;
constexpr double po_tilde0_3_1 = 0.809937597716820729422257;
constexpr double bi_tilde0_3_1 = 0.426384197304352802182183;
constexpr double bi_tilde2_3_1 = 0.407932855125422254602333;
constexpr double bi_tilde3_3_1 = 0.165682947570224943215484;
constexpr double rho_star_3_2 = 0.859190194653289808229018;
constexpr double rho_star_2_2 = 0.796812130020020046161521;
constexpr double rho_star_4_1 = 0.609559539293017166612764;
constexpr double rho_star_3_07 = 0.300722643603119408513353;
constexpr double exp_m075 = 0.472366552741014707138047;
}  // namespace pinned

TEST_CASE("F evaluation") {
  CHECK(F_eval(1.0, 3, 1.0) == 1.0);
  CHECK(F_eval(1.0, 5, 7.3) == 1.0);
  CHECK(F_eval(0.0, 3, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(F_eval(0.5, 3, 1.0) ==
        doctest::Approx(pinned::exp_m075).epsilon(1e-15));
  CHECK_THROWS_AS(F_eval(-0.1, 3, 1.0), DomainError);
  CHECK_THROWS_AS(F_eval(1.1, 3, 1.0), DomainError);
}

TEST_CASE("fixed-point solver against pinned references") {
  CHECK(solve_fixed_point(3, 0.4, 1e-12) == 0.0);  // subcritical
  CHECK(solve_fixed_point(2, 1.0, 1e-12) == 0.0);  // boundary convention
  CHECK(solve_fixed_point(3, 0.5, 1e-12) == 0.0);  // boundary convention
  CHECK(std::abs(solve_fixed_point(3, 1.0, 1e-12) - pinned::rho_star_3_1) < 1e-11);
  CHECK(std::abs(solve_fixed_point(3, 2.0, 1e-12) - pinned::rho_star_3_2) < 1e-11);
  CHECK(std::abs(solve_fixed_point(2, 2.0, 1e-12) - pinned::rho_star_2_2) < 1e-11);
  CHECK(std::abs(solve_fixed_point(4, 1.0, 1e-12) - pinned::rho_star_4_1) < 1e-11);
  CHECK(std::abs(solve_fixed_point(3, 0.7, 1e-12) - pinned::rho_star_3_07) < 1e-11);
}

TEST_CASE("solver input validation") {
  CHECK_THROWS_AS(solve_fixed_point(1, 1.0, 1e-12), InvalidParams);
  CHECK_THROWS_AS(solve_fixed_point(3, -1.0, 1e-12), InvalidParams);
  CHECK_THROWS_AS(solve_fixed_point(3, 1.0, 0.0), InvalidParams);
}

TEST_CASE("absurd tolerances either hit the root exactly or refuse") {
  // A tolerance below double resolution is only satisfiable if the residual
  // lands on exactly 0 at the solver's iterate; it must return an essentially
  // exact root (up to the 1 - (1 - x) round trip) or refuse, never loop.
  for (double d : {0.8, 1.0, 1.7, 3.14}) {
    try {
      const double rho = solve_fixed_point(3, d, 1e-300);
      const double x = 1.0 - rho;
      CHECK(std::abs(std::log(x) + d * (1.0 - std::pow(x, 2.0))) < 1e-14);
    } catch (const NoConvergence&) {
      // acceptable outcome
    }
  }
}

TEST_CASE("derived parameters at (3, 1)") {
  const auto p = derived_params(3, 1.0);
  CHECK(p.d_star == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.supercritical);
  CHECK_FALSE(p.at_threshold);
  CHECK(std::abs(p.rho_star - pinned::rho_star_3_1) < 1e-11);
  CHECK(std::abs(p.rho_hat_star - pinned::rho_hat_star_3_1) < 1e-11);
  CHECK(std::abs(p.eta - pinned::eta_3_1) < 1e-11);
  CHECK(std::abs(p.alpha - pinned::alpha_3_1) < 1e-11);
  CHECK(std::abs(p.beta - pinned::beta_3_1) < 1e-11);
  CHECK(std::abs(p.gamma - pinned::gamma_3_1) < 1e-11);
}

TEST_CASE("everything collapses below the threshold") {
  const auto p = derived_params(3, 0.4);
  CHECK(p.rho_star == 0.0);
  CHECK(p.rho_hat_star == 0.0);
  CHECK(p.eta == 0.0);
  CHECK(p.alpha == 0.0);
  CHECK(p.beta == 0.0);
  CHECK(p.gamma == 0.0);
  CHECK_FALSE(p.supercritical);

  const auto boundary = derived_params(3, 0.5);
  CHECK(boundary.at_threshold);
  CHECK(boundary.rho_star == 0.0);
}

TEST_CASE("fixed point identities over the parameter grid") {
  for (unsigned r = 2; r <= 8; ++r) {
    for (double d = 0.1; d <= 20.0; d += 0.1) {
      const double tol = 1e-12;
      const auto p = derived_params(r, d, tol);
      const double x = 1.0 - p.rho_star;
      // residual of the fixed-point equation itself
      CHECK(std::abs(x - F_eval(x, r, d)) < 10 * tol);
      // 1 - rho* = exp(-d rho_hat*)
      CHECK(std::abs(x - std::exp(-d * p.rho_hat_star)) < 10 * tol);
      CHECK(p.alpha >= 0.0);
      CHECK(p.alpha <= 1.0);
      // beta counts core edges per vertex, so its natural ceiling is d/r
      CHECK(p.beta >= 0.0);
      CHECK(p.beta <= d / r + 1e-12);
      CHECK(p.gamma >= 0.0);
      CHECK(p.gamma <= 1.0);
      CHECK(p.eta >= 0.0);
      CHECK(p.eta <= 1.0);
    }
  }
}

TEST_CASE("sign-change probe of the transformed equation") {
  auto sign_changes = [](unsigned r, double d) {
    int changes = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (int i = 1; i < 10000; ++i) {
      const double x = i / 10000.0;
      const double f = std::log(x) + d * (1.0 - std::pow(x, double(r - 1)));
      if (f == 0.0) continue;
      if (have_prev && (prev < 0.0) != (f < 0.0)) ++changes;
      prev = f;
      have_prev = true;
    }
    return changes;
  };
  for (unsigned r : {3u, 4u, 6u}) {
    const double d_star = 1.0 / (r - 1);
    CHECK(sign_changes(r, d_star * 0.8) == 0);
    CHECK(sign_changes(r, d_star * 1.5) == 1);
    CHECK(sign_changes(r, 5.0) == 1);
  }
}

TEST_CASE("solver is continuous away from the threshold") {
  for (unsigned r : {2u, 3u, 5u, 8u}) {
    const double d_star = 1.0 / (r - 1);
    for (double d : {d_star + 0.01, d_star + 0.5, 2.0, 10.0}) {
      const double a = solve_fixed_point(r, d, 1e-12);
      const double b = solve_fixed_point(r, d * (1.0 + 1e-6), 1e-12);
      CHECK(std::abs(a - b) < 1e-4);
    }
  }
}

TEST_CASE("tilde laws") {
  CHECK(po_tilde_pmf(0.0, 0) == 1.0);
  CHECK(po_tilde_pmf(0.0, 2) == 0.0);
  for (double lambda : {0.3, 1.0, 4.2}) {
    CHECK(po_tilde_pmf(lambda, 1) == 0.0);
  }
  CHECK(bi_tilde_pmf(3, 0.5, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bi_tilde_pmf(3, 0.5, 1) == 0.0);
  CHECK_THROWS_AS(po_tilde_pmf(-1.0, 0), DomainError);
  CHECK_THROWS_AS(bi_tilde_pmf(3, 1.5, 0), DomainError);

  const double lambda = 1.0 * pinned::rho_hat_star_3_1;
  CHECK(std::abs(po_tilde_pmf(lambda, 0) - pinned::po_tilde0_3_1) < 1e-12);
  CHECK(std::abs(po_tilde_pmf(lambda, 2) - pinned::z2_3_1) < 1e-12);
  CHECK(std::abs(bi_tilde_pmf(3, pinned::rho_star_3_1, 0) - pinned::bi_tilde0_3_1) < 1e-12);
  CHECK(std::abs(bi_tilde_pmf(3, pinned::rho_star_3_1, 2) - pinned::bi_tilde2_3_1) < 1e-12);
  CHECK(std::abs(bi_tilde_pmf(3, pinned::rho_star_3_1, 3) - pinned::bi_tilde3_3_1) < 1e-12);
}

TEST_CASE("tilde laws are normalized") {
  for (double lambda : {0.0, 0.2, 1.7, 9.0}) {
    double total = 0.0;
    // cumulative mass past j grows past 1 - 1e-13 well before j = 200 here
    for (unsigned j = 0; j <= 200; ++j) total += po_tilde_pmf(lambda, j);
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
  for (unsigned trials : {2u, 3u, 7u}) {
    for (double p : {0.0, 0.3, 1.0}) {
      double total = 0.0;
      for (unsigned j = 0; j <= trials; ++j) total += bi_tilde_pmf(trials, p, j);
      CHECK(std::abs(total - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("limiting variable-degree law") {
  const auto p = derived_params(3, 1.0);
  CHECK(std::abs(z_pmf(p, 0) - pinned::z0_3_1) < 1e-11);
  CHECK(std::abs(z_pmf(p, 1) - pinned::z1_3_1) < 1e-11);
  CHECK(std::abs(z_pmf(p, 2) - pinned::z2_3_1) < 1e-11);
  double total = 0.0;
  for (unsigned j = 0; j <= 200; ++j) total += z_pmf(p, j);
  CHECK(std::abs(total - 1.0) < 1e-12);

  // below threshold the law is a point mass at zero
  CHECK(z_pmf(3, 0.3, 0) == 1.0);
  CHECK(z_pmf(3, 0.3, 1) == 0.0);
  CHECK(z_pmf(3, 0.3, 5) == 0.0);
}

TEST_CASE("survival recursion") {
  SUBCASE("first steps have closed forms") {
    for (unsigned r : {2u, 3u, 5u}) {
      const auto traj = survival_recursion(r, 1.3, 2);
      REQUIRE(traj.size() == 3);
      CHECK(traj[0].p == 1.0);
      CHECK(traj[1].q == 1.0);  // Bi(r-1, 1) >= 1 is certain
      CHECK(traj[1].p == doctest::Approx(1.0 - std::exp(-1.3)).epsilon(1e-15));
    }
  }
  SUBCASE("converges to the fixed-point pair") {
    const auto params = derived_params(3, 1.0);
    const auto traj = survival_recursion(3, 1.0, 200);
    CHECK(std::abs(traj.back().p - params.rho_star) < 1e-10);
    CHECK(std::abs(traj.back().q - params.rho_hat_star) < 1e-10);
  }
  SUBCASE("monotone and bounded below by the fixed point") {
    for (double d : {0.3, 0.7, 1.0, 2.0}) {
      const auto params = derived_params(3, d);
      const auto traj = survival_recursion(3, d, 120);
      for (std::size_t t = 1; t < traj.size(); ++t) {
        CHECK(traj[t].p <= traj[t - 1].p + 1e-15);
        CHECK(traj[t].q <= traj[t - 1].q + 1e-15);
        CHECK(traj[t].p >= params.rho_star - 1e-12);
        CHECK(traj[t].q >= params.rho_hat_star - 1e-12);
      }
    }
  }
}

TEST_CASE("cycle bound coefficient") {
  const auto below = cycle_bound_coeff(3, 0.4);
  CHECK(below.coefficient == 0.0);
  CHECK(below.side == BoundSide::tie);

  // r = 3: no sign change of beta - gamma on the scan range; gamma binds
  for (double d = 0.6; d <= 10.0; d += 0.1) {
    const auto bound = cycle_bound_coeff(3, d);
    const auto p = derived_params(3, d);
    CHECK(bound.coefficient == doctest::Approx(std::min(p.beta, p.gamma)));
    CHECK(bound.side == BoundSide::gamma);
  }
  // r = 4: beta binds near the threshold, gamma after the crossing
  CHECK(cycle_bound_coeff(4, 1.0).side == BoundSide::beta);
  CHECK(cycle_bound_coeff(4, 5.0).side == BoundSide::gamma);
}

TEST_CASE("near-threshold expansion of gamma") {
  const auto coarse = supercritical_expansion(3, 0.01);
  CHECK(coarse.leading_term == doctest::Approx(5e-5).epsilon(1e-12));
  CHECK(coarse.ratio > 0.9);
  CHECK(coarse.ratio < 1.1);
  CHECK(coarse.quoted_lower_bound == doctest::Approx(0.01 * 0.01 / 16.0));

  const auto fine = supercritical_expansion(3, 0.001);
  CHECK(fine.ratio > 0.99);
  CHECK(fine.ratio < 1.01);
  // reference ratio 0.99866813735 from the high-precision oracle
  CHECK(fine.ratio == doctest::Approx(0.99866813735).epsilon(1e-4));

  CHECK_THROWS_AS(supercritical_expansion(3, 0.0), DomainError);
  CHECK_THROWS_AS(supercritical_expansion(3, 1.0), DomainError);
}

TEST_CASE("near-threshold expansion of rho_star") {
  for (unsigned r : {3u, 4u, 5u}) {
    for (double eps : {0.01, 0.001}) {
      const double d = (1.0 + eps) / (r - 1);
      const double rho = solve_fixed_point(r, d, 1e-13);
      const double ratio = rho / (2.0 * eps / (r - 1));
      CHECK(std::abs(ratio - 1.0) < eps);
    }
  }
}
