#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "muforge/curves.hpp"
#include "muforge/dirichlet.hpp"
#include "muforge/lfun.hpp"
#include "muforge/padic.hpp"

namespace muforge {

// Weight-2 Sturm bound: ceil([SL2(Z):Gamma0(M)] / 6). Two eigenforms of level
// dividing M agreeing on a_ell for ell up to this bound agree everywhere.
long sturm_bound(const mpz_class& level);

// A prime ell not dividing N*p such that X^2 - a_ell X + ell has no root mod p.
// Such a witness forces the mod-p Galois representation to have no stable line,
// hence E[p] is irreducible. nullopt means "no witness up to the bound", which
// is NOT a proof of reducibility.
std::optional<long> certify_irreducible(const curve_data& e, long p,
                                        long prime_bound = 100);

struct evidence_row {
  long ell = 0;
  long a1 = 0, a2 = 0;
  bool agrees = false;
};

struct evidence_table {
  long p = 0;
  int exponent = 0;     // congruence tested mod p^exponent
  long prime_bound = 0; // primes scanned up to here
  std::vector<evidence_row> rows;
  bool pass = false;
};

// Checks a_ell(e1) = a_ell(e2) mod p^i for all good-for-both primes up to
// sturm_bound(lcm(N1,N2) p^2) * extra_margin, plus the a_p row itself.
evidence_table congruence_evidence(const curve_data& e1, const curve_data& e2,
                                   long p, int i, int extra_margin = 1);

enum class euler_kind { good_prime, bad_prime, dropped };

struct euler_poly_data {
  long ell = 0;
  euler_kind kind = euler_kind::dropped;
  padic_series series;
};

// The removed Euler factor at ell as a polynomial in T:
//   1 - a_ell conj(chi)(ell) ell^{-1} (1+T)^{f_ell}  [+ conj(chi)(ell)^2 ell^{-1} (1+T)^{2 f_ell} at good ell]
// with f_ell the cyclotomic Frobenius exponent of ell. Primes dividing the
// conductor of chi contribute the constant 1. Requires ell != p.
euler_poly_data euler_poly(const curve_data& e, long ell, const dirichlet_character& chi,
                           long p, int tdeg, int prec);

// Multiplies the series by every euler_poly over sigma (deduplicated). p must
// not lie in sigma.
padic_series sigma_incomplete(const padic_series& lp, const std::vector<long>& sigma,
                              const curve_data& e, const dirichlet_character& chi);

// Searches for a unit u with f = u g mod p^i, coefficientwise. Returns u to its
// determined precision (i minus the common minimal valuation), nullopt when the
// valuation patterns rule every unit out. Throws precision_insufficient if either
// series carries fewer than i certified digits somewhere.
std::optional<padic_int> unit_match(const padic_series& f, const padic_series& g, int i);

enum class verdict { pass, fail, not_applicable };
const char* verdict_name(verdict v);

struct verify_options {
  int prec = 3;          // working p-adic precision
  int tdeg = 5;          // series truncation length
  int threads = 1;
  long irr_prime_bound = 100;
  int extra_margin = 1;  // multiplies the Sturm bound in evidence scans
};

struct matched_unit {
  int exponent = 0;
  std::optional<padic_int> u;
};

struct congruence_report {
  curve_data e1, e2;
  long p = 0;
  std::optional<long> witness1, witness2;  // irreducibility certificates
  std::optional<int> mu1, mu2, lambda1, lambda2;
  std::vector<long> sigma;                 // primes dividing N1 N2
  std::vector<evidence_table> evidence;    // one per tested exponent
  std::vector<matched_unit> units;         // unit_match outcome per evidenced exponent
  verdict congruence = verdict::not_applicable;  // series congruence at some exponent >= 1
  int congruence_exponent = 0;                   // largest exponent achieved
  verdict mu_le = verdict::not_applicable;
  verdict mu_eq = verdict::not_applicable;
  std::string note;
};

// Full pipeline for a candidate congruent pair: irreducibility certificates,
// both p-adic L-series for chi, Sturm-bounded trace evidence at the exponents
// mu1 and mu1+1, Sigma-incomplete unit matching, and the three verdicts
// (congruence of the series, mu1 <= mu2, mu1 = mu2). Verdicts degrade to
// not_applicable whenever a hypothesis cannot be certified; they say fail only
// when hypotheses held and the conclusion was refuted numerically.
congruence_report verify_theorems(const curve_data& e1, const curve_data& e2, long p,
                                  const dirichlet_character& chi,
                                  const verify_options& opt = {});

// Candidate congruent pairs from the corpus: good ordinary at p, certified
// irreducible, trace fingerprints matching mod p on small primes, then full
// evidence at exponent 1. Isogenous pairs (same conductor, identical trace
// table over the whole evidence range) are dropped.
std::vector<std::pair<curve_data, curve_data>> scan_pairs(
    const std::vector<curve_data>& corpus, const mpz_class& conductor_bound, long p,
    int threads = 1);

}  // namespace muforge
