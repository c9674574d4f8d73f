#pragma once

#include <gmpxx.h>

#include <vector>

#include "muforge/curves.hpp"
#include "muforge/dirichlet.hpp"
#include "muforge/padic.hpp"
#include "muforge/symbol.hpp"

namespace muforge {

struct theta_options {
  int threads = 1;    // parallelism width for the sums over (eta, j, b)
  int scale_pow = 0;  // evaluate with lambda multiplied by p^scale_pow; callers
                      // that hit non_integral_value can retry with a larger
                      // power, since every identity below is linear in lambda
};

// Values c_{n,j} for j in [0, p^{n-1}): the Riemann sums of the modular-symbol
// measure over the level-n cyclotomic layer, collected along the (1+p)-orbit.
struct theta_level_data {
  long p = 0;
  int level = 0;
  std::vector<padic_int> c;
};

// Requires the symbol normalized with sign chi(-1), good ordinary reduction at
// p, conductor of chi coprime to p, and the order of chi dividing p - 1.
theta_level_data theta_level(const eigen_symbol& sym, const dirichlet_character& chi,
                             long p, int level, int prec, const theta_options& opt = {});

// Coefficients A_0..A_{tdeg-1} of sum_j c_{n,j} (1+T)^j, i.e. A_m = sum_j
// binom(j, m) c_{n,j}.
padic_series theta_expansion(const theta_level_data& th, int tdeg);

struct lp_result {
  padic_series series;    // tdeg coefficients certified to the working precision
  int stabilized_at = 0;  // the level whose expansion is returned
  int scale_pow = 0;      // copied from the options that produced the run
};

// Refines theta levels down to the depth at which the distribution property
// certifies every kept coefficient mod p^prec, checking the per-level
// congruence bound along the way (a violation throws stabilization_failed).
// No data-driven early exit: shallow levels can be identically zero while
// deeper ones carry the measure. max_level below the certified depth also
// throws; pass 0 to accept the computed depth.
lp_result lp_series(const eigen_symbol& sym, const dirichlet_character& chi, long p,
                    int prec, int tdeg, int max_level = 0, const theta_options& opt = {});

// alpha^{-v_p(f_psi)} (1 - conj(psi)(p)/alpha)(1 - psi(p)/alpha) for the unit
// root alpha of X^2 - a_p X + p. When p divides the conductor of psi both
// parenthesised factors equal 1.
padic_int ep_multiplier(const mpz_class& a_p, const dirichlet_character& psi, long p, int prec);

struct interp_report {
  long p = 0;
  int rho_exp = 0;       // the wild twist rho has order p^rho_exp
  int working_prec = 0;  // certified p-adic digits carried on both sides
  int scale_pow = 0;
  bool pass = false;  // the two sides differ by valuation >= working_prec
  // p-adic valuation of (series side) - (twisted-sum side), as the fraction
  // diff_val_num / diff_val_den; the denominator is phi(p^rho_exp) because the
  // comparison happens in the ramified ring Z_p[zeta_{p^rho_exp}]. Capped at
  // working_prec when the difference vanishes to working precision.
  long diff_val_num = 0;
  long diff_val_den = 1;
};

// Evaluates the level-(rho_exp + 1) theta polynomial at 1+x = zeta_{p^rho_exp}
// and compares it against ep_multiplier(chi * rho) times the twisted symbol sum
// sum_b conj(chi rho)(b) lambda(b / f). For rho_exp = 0 the left side is the
// constant coefficient A_0 and the comparison is plain p-adic equality.
interp_report interpolation_check(const eigen_symbol& sym, const dirichlet_character& chi,
                                  int rho_exp, long p, int prec, const theta_options& opt = {});

// L(E, 1) as a real number, with the Euler factors at the primes in sigma
// removed; accurate to about 1e-8 for conductors up to a few hundred.
double complex_L_value(const curve_data& e, const std::vector<long>& sigma = {});

struct period_pair {
  double real_period = 0.0;       // integral of |dx/y| over the connected
                                  // component cycle, doubled when disc > 0
  double imaginary_period = 0.0;  // |Im| of the generator of (lattice cap iR)
};

// Neron periods of the given (minimal) model via the arithmetic-geometric mean.
period_pair neron_periods(const curve_data& e);

}  // namespace muforge
