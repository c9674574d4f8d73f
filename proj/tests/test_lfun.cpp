#include "doctest.h"
#include "muforge/lfun.hpp"

#include <cmath>

using namespace muforge;

namespace {

curve_data curve_11a() {
  curve_data e;
  e.a1 = 0; e.a2 = -1; e.a3 = 1; e.a4 = -10; e.a6 = -20;
  e.conductor = 11;
  return e;
}

curve_data curve_37a() {
  curve_data e;
  e.a1 = 0; e.a2 = 0; e.a3 = 1; e.a4 = -1; e.a6 = 0;
  e.conductor = 37;
  return e;
}

const eigen_symbol& plus_11a() {
  static eigen_symbol s = build_symbol(curve_11a(), +1);
  return s;
}

const eigen_symbol& minus_11a() {
  static eigen_symbol s = build_symbol(curve_11a(), -1);
  return s;
}

}  // namespace

TEST_CASE("level one telescopes to the classical multiplier") {
  // c_{1,0} = (1 - 1/alpha)^2 lambda(0) for trivial chi: the Hecke relation at p
  // collapses the unit sum.
  theta_level_data th = theta_level(plus_11a(), trivial_character(), 7, 1, 4);
  REQUIRE(th.c.size() == 1);
  padic_int al = unit_root(-2, 7, 4);
  padic_int one(7, 4, 1);
  padic_int factor = one - al.unit_inverse();
  padic_int rhs = factor * factor * padic_int::from_rational(7, 4, mpq_class(1, 5));
  CHECK(congruent_mod(th.c[0], rhs, 4));
}

TEST_CASE("riemann sums refine consistently") {
  // The level-2 cells over a level-1 cell sum back to it, for trivial and for
  // quadratic chi (the weighting must follow the twisted Hecke eigenvalue).
  for (const dirichlet_character& chi :
       {trivial_character(), quadratic_character(8)}) {
    theta_level_data t1 = theta_level(plus_11a(), chi, 7, 1, 3);
    theta_level_data t2 = theta_level(plus_11a(), chi, 7, 2, 3);
    REQUIRE(t2.c.size() == 7);
    padic_int sum(7, t2.c[0].precision(), 0);
    for (const padic_int& c : t2.c) sum = sum + c;
    CHECK(congruent_mod(sum, t1.c[0], 3));
  }
  // Odd character, minus symbol.
  theta_level_data m1 = theta_level(minus_11a(), quadratic_character(-4), 7, 1, 3);
  theta_level_data m2 = theta_level(minus_11a(), quadratic_character(-4), 7, 2, 3);
  padic_int sum(7, m2.c[0].precision(), 0);
  for (const padic_int& c : m2.c) sum = sum + c;
  CHECK(congruent_mod(sum, m1.c[0], 3));
}

TEST_CASE("expansion in powers of T") {
  theta_level_data th = theta_level(plus_11a(), trivial_character(), 3, 2, 3);
  REQUIRE(th.c.size() == 3);
  padic_series f = theta_expansion(th, 3);
  // A_m = sum_j binom(j, m) c_j by definition.
  CHECK(same_residue(f.coeff(0), th.c[0] + th.c[1] + th.c[2]));
  CHECK(same_residue(f.coeff(1), th.c[1] + padic_int(3, 3, 2) * th.c[2]));
  CHECK(same_residue(f.coeff(2), th.c[2]));
}

TEST_CASE("series stabilization and invariants at 7") {
  lp_result r = lp_series(plus_11a(), trivial_character(), 7, 3, 5);
  CHECK(r.stabilized_at >= 2);
  CHECK(r.stabilized_at <= 4);
  CHECK(r.series.length() == 5);
  CHECK(r.series.coeff(0).is_unit());
  mu_lambda_result ml = mu_lambda(r.series);
  CHECK(ml.mu == 0);
  CHECK(ml.lambda == 0);
}

TEST_CASE("stabilization failure is reported") {
  CHECK_THROWS_AS(
      (void)lp_series(plus_11a(), trivial_character(), 7, 3, 5, /*max_level=*/1),
      stabilization_failed);
}

TEST_CASE("interpolation multipliers") {
  // Trivial character at p = 5 for the level 11 form: alpha = 96 mod 125,
  // (1 - 1/alpha)^2 = 25 mod 125.
  CHECK(ep_multiplier(1, trivial_character(), 5, 3).residue() == 25);

  // Wild conductor p^2: both parenthesised factors collapse, leaving alpha^{-2}.
  padic_int expect = unit_root(1, 5, 3).unit_inverse().pow(2);
  CHECK(same_residue(ep_multiplier(1, wild_character(5, 1), 5, 3), expect));

  // Tame quadratic psi with psi(7) = 1 and a_7 = -2.
  padic_int al = unit_root(-2, 7, 3);
  padic_int f = padic_int(7, 3, 1) - al.unit_inverse();
  CHECK(same_residue(ep_multiplier(-2, quadratic_character(8), 7, 3), f * f));

  CHECK_THROWS_AS((void)ep_multiplier(5, trivial_character(), 5, 3),
                  ordinarity_violation);
}

TEST_CASE("interpolation property of the constructed measure") {
  theta_options scale1;
  scale1.scale_pow = 1;  // lambda(0) = 1/5 needs one power of 5 cleared

  struct combo { long p; int prec; theta_options opt; };
  for (const combo& cb : {combo{3, 3, {}}, combo{5, 3, scale1}, combo{7, 2, {}}}) {
    for (int rho = 0; rho <= 1; ++rho) {
      interp_report triv = interpolation_check(plus_11a(), trivial_character(),
                                               rho, cb.p, cb.prec, cb.opt);
      CHECK(triv.pass);
      CHECK(triv.working_prec >= 1);
      CHECK(triv.diff_val_num == triv.working_prec * triv.diff_val_den);

      interp_report even = interpolation_check(plus_11a(), quadratic_character(8),
                                               rho, cb.p, cb.prec, cb.opt);
      CHECK(even.pass);

      interp_report odd = interpolation_check(minus_11a(), quadratic_character(-4),
                                              rho, cb.p, cb.prec, cb.opt);
      CHECK(odd.pass);
    }
  }
}

TEST_CASE("hypothesis violations throw rather than mislead") {
  CHECK_THROWS_AS((void)theta_level(plus_11a(), quadratic_character(-4), 3, 1, 2),
                  parity_mismatch);
  CHECK_THROWS_AS((void)theta_level(plus_11a(), trivial_character(), 19, 1, 2),
                  ordinarity_violation);
  // Bad reduction at 11 is caught by the same ordinarity gate.
  CHECK_THROWS_AS((void)theta_level(plus_11a(), trivial_character(), 11, 1, 2),
                  ordinarity_violation);
  // chi_{-3} is odd, so pair it with the minus symbol to reach the
  // conductor check: 3 divides 3.
  CHECK_THROWS_AS((void)theta_level(minus_11a(), quadratic_character(-3), 3, 1, 2),
                  bad_input);
  // Even character of order 4 (conductor 16): order does not divide 3 - 1.
  dirichlet_character quartic = character_from_exponents(16, {0, 1});
  CHECK(quartic.order == 4);
  CHECK(quartic.is_even());
  CHECK_THROWS_AS((void)theta_level(plus_11a(), quartic, 3, 1, 2),
                  embedding_unsupported);
  // lambda(0) = 1/5 is not 5-integral without rescaling.
  CHECK_THROWS_AS((void)theta_level(plus_11a(), trivial_character(), 5, 1, 3),
                  non_integral_value);
}

TEST_CASE("threaded evaluation is deterministic") {
  theta_options seq, par;
  par.threads = 3;
  theta_level_data a = theta_level(plus_11a(), trivial_character(), 7, 2, 3, seq);
  theta_level_data b = theta_level(plus_11a(), trivial_character(), 7, 2, 3, par);
  REQUIRE(a.c.size() == b.c.size());
  for (size_t i = 0; i < a.c.size(); ++i) {
    CHECK(a.c[i].precision() == b.c[i].precision());
    CHECK(a.c[i].residue() == b.c[i].residue());
  }
}

TEST_CASE("complex L-values") {
  double l11 = complex_L_value(curve_11a());
  CHECK(std::abs(l11 - 0.253842) < 1e-6);
  CHECK(std::abs(complex_L_value(curve_37a())) < 1e-6);

  // Removing the Euler factor at 2 multiplies by (1 - a_2/2 + 1/2).
  double stripped = complex_L_value(curve_11a(), {2});
  CHECK(std::abs(stripped - l11 * 2.5) < 5e-6);
}

TEST_CASE("neron periods") {
  period_pair p11 = neron_periods(curve_11a());
  CHECK(std::abs(p11.real_period - 1.269210) < 1e-6);
  CHECK(p11.imaginary_period > 0);

  // Ratio against the normalized symbol: the numeric side must reproduce the
  // exact rational 1/5.
  double ratio = complex_L_value(curve_11a()) / p11.real_period;
  CHECK(std::abs(ratio - 0.2) < 1e-6);

  // Positive discriminant: two real components, doubled real cycle.
  period_pair p37 = neron_periods(curve_37a());
  CHECK(p37.real_period > 0);
  CHECK(p37.imaginary_period > 0);
}
