#include "doctest.h"
#include "muforge/congruence.hpp"

#include <algorithm>

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

curve_data curve_37b() {
  curve_data e;
  e.a1 = 0; e.a2 = 1; e.a3 = 1; e.a4 = -23; e.a6 = -50;
  e.conductor = 37;
  return e;
}

padic_series series_of(long p, std::vector<long> v, int prec) {
  std::vector<padic_int> c;
  for (long x : v) c.emplace_back(p, prec, x);
  return padic_series(p, std::move(c));
}

}  // namespace

TEST_CASE("sturm bounds") {
  CHECK(sturm_bound(11) == 2);
  CHECK(sturm_bound(121) == 22);
  CHECK(sturm_bound(1) == 1);
  CHECK(sturm_bound(539) == 112);  // 11 * 7^2
}

TEST_CASE("irreducibility certificates") {
  // x^2 - a_2 x + 2 = x^2 + 2x + 2 has discriminant -4, a non-square mod 7.
  CHECK(certify_irreducible(curve_11a(), 7) == 2);
  CHECK(certify_irreducible(curve_37a(), 3) == 2);
  // 11a admits a rational 5-isogeny: E[5] is honestly reducible, no witness.
  CHECK(!certify_irreducible(curve_11a(), 5).has_value());
}

TEST_CASE("trace evidence tables") {
  evidence_table self = congruence_evidence(curve_11a(), curve_11a(), 7, 2);
  CHECK(self.pass);
  CHECK(self.exponent == 2);
  CHECK(!self.rows.empty());
  for (const evidence_row& r : self.rows) CHECK(r.agrees);
  // The trace at p itself is part of the evidence.
  CHECK(self.rows.back().ell == 7);
  CHECK(self.prime_bound >= sturm_bound(mpz_class(11 * 49)));

  evidence_table diff = congruence_evidence(curve_11a(), curve_37b(), 3, 1);
  CHECK(!diff.pass);
  auto at2 = std::find_if(diff.rows.begin(), diff.rows.end(),
                          [](const evidence_row& r) { return r.ell == 2; });
  REQUIRE(at2 != diff.rows.end());
  CHECK(at2->a1 == -2);
  CHECK(at2->a2 == 0);
  CHECK(!at2->agrees);
}

TEST_CASE("euler polynomials") {
  curve_data e = curve_11a();

  euler_poly_data good = euler_poly(e, 2, trivial_character(), 5, 4, 3);
  CHECK(good.kind == euler_kind::good_prime);
  // P_2(0) = 1 - a_2/2 + 1/2 = 5/2: valuation 1 at p = 5.
  CHECK(good.series.coeff(0).valuation() == 1);
  CHECK(same_residue(good.series.coeff(0),
                     padic_int::from_rational(5, 3, mpq_class(5, 2))));
  bool unit_coeff = false;
  for (int j = 0; j < good.series.length(); ++j)
    unit_coeff = unit_coeff || good.series.coeff(j).valuation() == 0;
  CHECK(unit_coeff);

  euler_poly_data bad = euler_poly(e, 11, trivial_character(), 5, 4, 3);
  CHECK(bad.kind == euler_kind::bad_prime);
  CHECK(same_residue(bad.series.coeff(0),
                     padic_int::from_rational(5, 3, mpq_class(10, 11))));

  // Primes inside the conductor of chi fall out of the Sigma-product entirely.
  euler_poly_data drop = euler_poly(e, 2, quadratic_character(8), 5, 4, 3);
  CHECK(drop.kind == euler_kind::dropped);
  CHECK(drop.series.coeff(0).residue() == 1);
  for (int j = 1; j < drop.series.length(); ++j)
    CHECK(drop.series.coeff(j).is_zero());

  CHECK_THROWS_AS((void)euler_poly(e, 5, trivial_character(), 5, 4, 3), bad_input);
}

TEST_CASE("sigma-incomplete series shifts lambda, not mu") {
  eigen_symbol s = build_symbol(curve_11a(), +1);
  lp_result base = lp_series(s, trivial_character(), 7, 3, 5);

  padic_series unchanged = sigma_incomplete(base.series, {}, curve_11a(), trivial_character());
  for (int j = 0; j < unchanged.length(); ++j)
    CHECK(same_residue(unchanged.coeff(j), base.series.coeff(j)));

  padic_series out = sigma_incomplete(base.series, {2, 3}, curve_11a(), trivial_character());
  mu_lambda_result m0 = mu_lambda(base.series);
  mu_lambda_result m1 = mu_lambda(out);
  long extra = 0;
  for (long ell : {2L, 3L}) {
    euler_poly_data pd = euler_poly(curve_11a(), ell, trivial_character(), 7, 5, 3);
    mu_lambda_result pm = mu_lambda(pd.series);
    REQUIRE(pm.mu == 0);  // unit-coefficient invariant
    extra += *pm.lambda;
  }
  CHECK(m1.mu == m0.mu);
  CHECK(*m1.lambda == *m0.lambda + extra);

  CHECK_THROWS_AS((void)sigma_incomplete(base.series, {7}, curve_11a(), trivial_character()),
                  bad_input);
}

TEST_CASE("unit matching") {
  padic_series f = series_of(5, {1, 2, 3}, 3);
  padic_series g = series_of(5, {1, 2, 3}, 3);
  std::optional<padic_int> u = unit_match(f, g, 2);
  REQUIRE(u.has_value());
  CHECK(u->residue() == 1);
  CHECK(u->precision() == 2);

  std::optional<padic_int> two = unit_match(series_of(5, {2, 4, 6}, 3), g, 2);
  REQUIRE(two.has_value());
  CHECK(two->residue() == 2);

  // Common valuation eats matching precision: 5 = u * 10 pins u = 3 mod 5 only.
  std::optional<padic_int> half = unit_match(series_of(5, {5}, 3), series_of(5, {10}, 3), 2);
  REQUIRE(half.has_value());
  CHECK(half->precision() == 1);
  CHECK(half->residue() == 3);

  // Valuation patterns that no unit can reconcile.
  CHECK(!unit_match(series_of(5, {1}, 3), series_of(5, {5}, 3), 1).has_value());
  CHECK(!unit_match(series_of(5, {1, 5}, 3), series_of(5, {1, 1}, 3), 2).has_value());

  // Rescaling both sides by the same unit does not move the match.
  padic_int c(5, 3, 7);
  std::optional<padic_int> scaled = unit_match(f.scaled(c), g.scaled(c), 2);
  REQUIRE(scaled.has_value());
  CHECK(scaled->residue() == 1);

  CHECK_THROWS_AS((void)unit_match(series_of(5, {1}, 1), series_of(5, {1}, 1), 2),
                  precision_insufficient);
}

TEST_CASE("full verification on an identical pair") {
  congruence_report rep = verify_theorems(curve_11a(), curve_11a(), 7, trivial_character());
  CHECK(rep.witness1 == 2);
  CHECK(rep.witness2 == 2);
  CHECK(rep.mu1 == 0);
  CHECK(rep.lambda1 == 0);
  CHECK(rep.sigma == std::vector<long>{11});
  CHECK(rep.congruence == verdict::pass);
  CHECK(rep.congruence_exponent >= 1);
  REQUIRE(!rep.units.empty());
  REQUIRE(rep.units[0].u.has_value());
  CHECK(rep.units[0].u->residue() % 7 == 1);
  CHECK(rep.mu_le == verdict::pass);
  CHECK(rep.mu_eq == verdict::pass);
  for (const evidence_table& ev : rep.evidence) CHECK(ev.pass);
}

TEST_CASE("hypotheses that cannot be certified degrade to not-applicable") {
  congruence_report rep = verify_theorems(curve_11a(), curve_11a(), 5, trivial_character());
  CHECK(rep.congruence == verdict::not_applicable);
  CHECK(rep.mu_le == verdict::not_applicable);
  CHECK(rep.mu_eq == verdict::not_applicable);
  CHECK(!rep.note.empty());
  CHECK(std::string(verdict_name(verdict::not_applicable)) == "not-applicable");
}

TEST_CASE("corpus scanning") {
  std::vector<curve_data> corpus = {curve_11a(), curve_37a(), curve_37b()};
  auto pairs = scan_pairs(corpus, 100, 7);
  CHECK(pairs.empty());  // traces already differ mod 7 on {2, 3}

  // A duplicated curve is excluded as isogenous rather than reported.
  std::vector<curve_data> dup = {curve_11a(), curve_11a()};
  CHECK(scan_pairs(dup, 100, 7).empty());
}
