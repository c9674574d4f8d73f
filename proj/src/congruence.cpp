#include "muforge/congruence.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "muforge/parallel.hpp"
#include "muforge/symbol.hpp"

namespace muforge {

namespace {

std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
  for (long q = 2; q <= n; ++q) {
    if (composite[static_cast<size_t>(q)]) continue;
    out.push_back(q);
    for (long m = q * q; m <= n; m += q) composite[static_cast<size_t>(m)] = true;
  }
  return out;
}

std::vector<long> prime_divisors(mpz_class n) {
  std::vector<long> out;
  n = abs(n);
  for (long q = 2; mpz_class(q) * q <= n; q == 2 ? q = 3 : q += 2) {
    if (!mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q))) continue;
    out.push_back(q);
    while (mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q)))
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(q));
  }
  if (n > 1) out.push_back(n.get_si());
  return out;
}

bool divides(long q, const mpz_class& n) {
  return mpz_divisible_ui_p(n.get_mpz_t(), static_cast<unsigned long>(q)) != 0;
}

int min_certified(const padic_series& s) {
  int m = s.coeff(0).precision();
  for (int j = 1; j < s.length(); ++j) m = std::min(m, s.coeff(j).precision());
  return m;
}

long vp_factorial(long n, long p) {
  long v = 0;
  for (long q = p; q <= n; q *= p) v += n / q;
  return v;
}

}  // namespace

long sturm_bound(const mpz_class& level) {
  if (level < 1) throw bad_input("sturm_bound: level must be positive");
  mpz_class index = level;
  for (long q : prime_divisors(level)) {
    mpz_divexact_ui(index.get_mpz_t(), index.get_mpz_t(), static_cast<unsigned long>(q));
    index *= q + 1;
  }
  mpz_class bound = (index + 5) / 6;
  if (!bound.fits_slong_p()) throw bad_input("sturm_bound: level out of range");
  return bound.get_si();
}

std::optional<long> certify_irreducible(const curve_data& e, long p, long prime_bound) {
  if (p < 3 || divides(p, e.conductor))
    throw bad_input("certify_irreducible: p must be an odd prime of good reduction");
  for (long ell : primes_up_to(prime_bound)) {
    if (ell == p || divides(ell, e.conductor)) continue;
    long a = ap_cache::global().get(e, ell);
    // no eigenvalue mod p means the discriminant a^2 - 4 ell is a non-residue
    long disc = a * a - 4 * ell;
    if (legendre(disc, p) == -1) return ell;
  }
  return std::nullopt;
}

evidence_table congruence_evidence(const curve_data& e1, const curve_data& e2, long p,
                                   int i, int extra_margin) {
  if (p < 3 || divides(p, e1.conductor) || divides(p, e2.conductor))
    throw bad_input("congruence_evidence: p must be odd and good for both curves");
  if (i < 0 || extra_margin < 1) throw bad_input("congruence_evidence: bad exponent or margin");
  evidence_table out;
  out.p = p;
  out.exponent = i;

  mpz_class lcm_n;
  mpz_lcm(lcm_n.get_mpz_t(), e1.conductor.get_mpz_t(), e2.conductor.get_mpz_t());
  out.prime_bound = sturm_bound(lcm_n * p * p) * extra_margin;
  if (out.prime_bound > 2'000'000)
    throw bad_input("congruence_evidence: evidence bound " + std::to_string(out.prime_bound) +
                    " exceeds the supported range");

  mpz_class mod = pow_z(p, i);
  out.pass = true;
  auto push = [&](long ell) {
    evidence_row row;
    row.ell = ell;
    row.a1 = ap_cache::global().get(e1, ell);
    row.a2 = ap_cache::global().get(e2, ell);
    row.agrees = mpz_divisible_p(mpz_class(row.a1 - row.a2).get_mpz_t(), mod.get_mpz_t()) != 0;
    out.pass = out.pass && row.agrees;
    out.rows.push_back(row);
  };
  for (long ell : primes_up_to(out.prime_bound)) {
    if (ell == p || divides(ell, e1.conductor) || divides(ell, e2.conductor)) continue;
    push(ell);
  }
  push(p);  // the unit-root congruence, tested directly
  return out;
}

euler_poly_data euler_poly(const curve_data& e, long ell, const dirichlet_character& chi,
                           long p, int tdeg, int prec) {
  if (ell == p) throw bad_input("euler_poly: ell must differ from p");
  if (ell < 2 || tdeg < 1 || prec < 1) throw bad_input("euler_poly: bad arguments");
  euler_poly_data out;
  out.ell = ell;
  if (chi.modulus % ell == 0) {
    out.kind = euler_kind::dropped;
    out.series = padic_series::one(p, prec, tdeg);
    return out;
  }
  out.kind = divides(ell, e.conductor) ? euler_kind::bad_prime : euler_kind::good_prime;
  long a = out.kind == euler_kind::bad_prime ? a_ell_bad(e, ell)
                                             : ap_cache::global().get(e, ell);

  // work with enough slack that every binomial coefficient keeps prec digits
  int w = prec + static_cast<int>(vp_factorial(tdeg - 1, p));
  padic_int chb = padic_value(chi.conjugate(), ell, p, w);
  padic_int ell_inv = padic_int::from_rational(p, w, mpq_class(1, ell));
  padic_int f = frobenius_exponent(ell, p, w);

  padic_series one = padic_series::one(p, w, tdeg);
  padic_series lin = binom_power(f, tdeg).scaled(padic_int(p, w, a) * chb * ell_inv);
  padic_series total = one - lin;
  if (out.kind == euler_kind::good_prime) {
    padic_series quad = binom_power(f + f, tdeg).scaled(chb * chb * ell_inv);
    total = total + quad;
  }
  out.series = total;
  return out;
}

padic_series sigma_incomplete(const padic_series& lp, const std::vector<long>& sigma,
                              const curve_data& e, const dirichlet_character& chi) {
  std::set<long> primes(sigma.begin(), sigma.end());
  if (primes.count(lp.p()))
    throw bad_input("sigma_incomplete: p itself cannot be removed");
  padic_series out = lp;
  int prec = 0;
  for (int j = 0; j < lp.length(); ++j) prec = std::max(prec, lp.coeff(j).precision());
  for (long ell : primes)
    out = out * euler_poly(e, ell, chi, lp.p(), lp.length(), prec).series;
  return out;
}

std::optional<padic_int> unit_match(const padic_series& f, const padic_series& g, int i) {
  if (f.p() != g.p() || f.length() != g.length())
    throw bad_input("unit_match: series shapes differ");
  if (i < 1) throw bad_input("unit_match: exponent must be positive");
  long p = f.p();
  int have = std::min(min_certified(f), min_certified(g));
  if (have < i)
    throw precision_insufficient("unit_match: need " + std::to_string(i) + " digits, have " +
                                 std::to_string(have));

  int v = i;
  for (int j = 0; j < f.length(); ++j)
    v = std::min({v, f.coeff(j).valuation(), g.coeff(j).valuation()});
  if (v >= i) return padic_int(p, i, 1);

  for (int j = 0; j < f.length(); ++j) {
    if (f.coeff(j).valuation() != v || g.coeff(j).valuation() != v) continue;
    // u is determined modulo p^{i-v}; any lift verifies or refutes identically,
    // because g's coefficients all have valuation >= v
    padic_int fu = f.coeff(j).shift_down(v);
    padic_int gu = g.coeff(j).shift_down(v);
    padic_int u = (fu * gu.unit_inverse()).reduced(i - v);
    padic_int lift(p, have, u.residue());
    bool ok = true;
    for (int t = 0; t < f.length() && ok; ++t)
      ok = (f.coeff(t) - lift * g.coeff(t)).valuation() >= i;
    if (ok) return u;
  }
  return std::nullopt;
}

const char* verdict_name(verdict v) {
  switch (v) {
    case verdict::pass: return "pass";
    case verdict::fail: return "fail";
    default: return "not-applicable";
  }
}

congruence_report verify_theorems(const curve_data& e1, const curve_data& e2, long p,
                                  const dirichlet_character& chi, const verify_options& opt) {
  validate_curve(e1);
  validate_curve(e2);
  if (!good_ordinary(e1, p) || !good_ordinary(e2, p))
    throw ordinarity_violation("verify_theorems: both curves must be good ordinary at " +
                               std::to_string(p));

  congruence_report rep;
  rep.e1 = e1;
  rep.e2 = e2;
  rep.p = p;
  rep.sigma = prime_divisors(e1.conductor * e2.conductor);

  rep.witness1 = certify_irreducible(e1, p, opt.irr_prime_bound);
  rep.witness2 = certify_irreducible(e2, p, opt.irr_prime_bound);
  if (!rep.witness1 || !rep.witness2) {
    rep.note = "mod-p irreducibility not certified for " +
               std::string(!rep.witness1 ? "the first" : "the second") +
               " curve up to " + std::to_string(opt.irr_prime_bound) +
               "; theorem hypotheses unmet";
    return rep;
  }

  int sign = chi.is_even() ? +1 : -1;
  theta_options topt;
  topt.threads = opt.threads;
  lp_result l1 = lp_series(build_symbol(e1, sign), chi, p, opt.prec, opt.tdeg, 0, topt);
  lp_result l2 = lp_series(build_symbol(e2, sign), chi, p, opt.prec, opt.tdeg, 0, topt);

  mu_lambda_result ml1 = mu_lambda(l1.series);
  mu_lambda_result ml2 = mu_lambda(l2.series);
  rep.mu1 = ml1.mu;
  rep.lambda1 = ml1.lambda;
  rep.mu2 = ml2.mu;
  rep.lambda2 = ml2.lambda;
  if (!rep.mu1) {
    rep.note = "mu of the first series is indeterminate at precision " +
               std::to_string(opt.prec) + "; increase the working precision";
    return rep;
  }

  padic_series s1 = sigma_incomplete(l1.series, rep.sigma, e1, chi);
  padic_series s2 = sigma_incomplete(l2.series, rep.sigma, e2, chi);

  int mu1 = *rep.mu1;
  std::vector<int> exps;
  if (mu1 >= 1) exps.push_back(mu1);
  exps.push_back(mu1 + 1);

  bool any_match = false, any_refuted = false;
  for (int i : exps) {
    evidence_table ev = congruence_evidence(e1, e2, p, i, opt.extra_margin);
    rep.evidence.push_back(ev);
    if (!ev.pass) continue;
    matched_unit mu;
    mu.exponent = i;
    try {
      mu.u = unit_match(s1, s2, i);
    } catch (const precision_insufficient&) {
      rep.note += std::string(rep.note.empty() ? "" : "; ") + "exponent " + std::to_string(i) +
                  " exceeds the certified series precision";
      continue;
    }
    if (mu.u) {
      any_match = true;
      rep.congruence_exponent = std::max(rep.congruence_exponent, i);
    } else {
      any_refuted = true;
    }
    rep.units.push_back(mu);
  }

  if (any_refuted)
    rep.congruence = verdict::fail;
  else if (any_match)
    rep.congruence = verdict::pass;

  auto evidenced = [&](int i) {
    for (const evidence_table& ev : rep.evidence)
      if (ev.exponent == i) return ev.pass;
    return false;
  };

  if (mu1 == 0) {
    rep.mu_le = verdict::pass;  // nothing to prove
  } else if (evidenced(mu1)) {
    if (rep.mu2)
      rep.mu_le = mu1 <= *rep.mu2 ? verdict::pass : verdict::fail;
    else if (min_certified(l2.series) > mu1)
      rep.mu_le = verdict::pass;  // mu2 provably exceeds mu1 even if indeterminate
    else
      rep.note += std::string(rep.note.empty() ? "" : "; ") +
                  "mu of the second series indeterminate and not boundable";
  }

  if (evidenced(mu1 + 1)) {
    if (rep.mu2)
      rep.mu_eq = mu1 == *rep.mu2 ? verdict::pass : verdict::fail;
    else
      rep.note += std::string(rep.note.empty() ? "" : "; ") +
                  "mu equality untestable while mu2 is indeterminate";
  }

  if (rep.congruence == verdict::not_applicable && rep.note.empty())
    rep.note = "trace evidence fails at every tested exponent; hypotheses unmet";
  return rep;
}

std::vector<std::pair<curve_data, curve_data>> scan_pairs(
    const std::vector<curve_data>& corpus, const mpz_class& conductor_bound, long p,
    int threads) {
  static const std::array<long, 6> probe = {2, 3, 5, 7, 11, 13};
  constexpr long kBadPrime = -1'000'000;  // marks ell | N in fingerprints

  std::vector<char> keep(corpus.size(), 0);
  std::vector<std::array<long, 6>> fp(corpus.size());
  parallel_for(static_cast<long>(corpus.size()), threads, [&](long t) {
    size_t idx = static_cast<size_t>(t);
    const curve_data& e = corpus[idx];
    if (e.conductor > conductor_bound) return;
    if (!good_ordinary(e, p)) return;
    if (!certify_irreducible(e, p)) return;
    for (size_t k = 0; k < probe.size(); ++k) {
      long ell = probe[k];
      fp[idx][k] = (ell == p || divides(ell, e.conductor))
                       ? kBadPrime
                       : ((ap_cache::global().get(e, ell) % p) + p) % p;
    }
    keep[idx] = 1;
  });

  std::vector<std::pair<curve_data, curve_data>> out;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!keep[i]) continue;
    for (size_t j = i + 1; j < corpus.size(); ++j) {
      if (!keep[j]) continue;
      bool plausible = true;
      for (size_t k = 0; k < probe.size() && plausible; ++k)
        if (fp[i][k] != kBadPrime && fp[j][k] != kBadPrime) plausible = fp[i][k] == fp[j][k];
      if (!plausible) continue;
      evidence_table ev = congruence_evidence(corpus[i], corpus[j], p, 1);
      if (!ev.pass) continue;
      if (corpus[i].conductor == corpus[j].conductor) {
        bool identical = true;
        for (const evidence_row& row : ev.rows)
          if (row.a1 != row.a2) { identical = false; break; }
        if (identical) continue;  // same isogeny class, nothing to learn
      }
      out.emplace_back(corpus[i], corpus[j]);
    }
  }
  return out;
}

}  // namespace muforge
