#pragma once

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "muforge/errors.hpp"

namespace muforge {

mpz_class pow_z(long base, long exp);

// A residue in Z/p^prec together with the number of certified p-adic digits.
// Arithmetic propagates the pessimistic precision (min of the operands); nothing
// is ever reported more precisely than the bookkeeping can justify.
class padic_int {
 public:
  padic_int() : p_(0), prec_(0), r_(0) {}
  padic_int(long p, int prec, mpz_class value);

  // Embeds num/den with p-free denominator; throws non_integral_value otherwise.
  static padic_int from_rational(long p, int prec, const mpq_class& x);

  long p() const { return p_; }
  int precision() const { return prec_; }
  const mpz_class& residue() const { return r_; }
  mpz_class modulus() const { return pow_z(p_, prec_); }

  // Valuation of the residue, capped at the certified precision. A return value
  // equal to precision() means "zero as far as we can see".
  int valuation() const;
  bool is_zero() const { return r_ == 0; }
  bool is_unit() const { return valuation() == 0; }

  padic_int reduced(int prec) const;       // forget digits down to prec
  padic_int unit_inverse() const;          // requires valuation 0
  padic_int shift_down(int k) const;       // exact division by p^k; prec drops by k
  padic_int pow(unsigned long e) const;

  padic_int operator-() const;
  friend padic_int operator+(const padic_int& a, const padic_int& b);
  friend padic_int operator-(const padic_int& a, const padic_int& b);
  friend padic_int operator*(const padic_int& a, const padic_int& b);

  // Equality of residues at the shared (minimum) certified precision.
  friend bool same_residue(const padic_int& a, const padic_int& b);
  // a == b mod p^i; throws precision_insufficient if either side has fewer digits.
  friend bool congruent_mod(const padic_int& a, const padic_int& b, int i);

 private:
  long p_;
  int prec_;
  mpz_class r_;  // canonical representative in [0, p^prec)
  void reduce_();
  static void check_compat_(const padic_int& a, const padic_int& b);
};

// Truncated power series over Z_p: (Z/p^*)[[T]] / (T^M) with an individually
// certified precision on every coefficient (a coefficient may be known to fewer
// digits than its neighbours, e.g. after dividing by j!).
class padic_series {
 public:
  padic_series() : p_(0) {}
  padic_series(long p, std::vector<padic_int> coeffs);
  static padic_series zero(long p, int prec, int len);
  static padic_series one(long p, int prec, int len);

  long p() const { return p_; }
  int length() const { return static_cast<int>(c_.size()); }
  const padic_int& coeff(int j) const { return c_[static_cast<size_t>(j)]; }
  padic_int& coeff(int j) { return c_[static_cast<size_t>(j)]; }

  padic_series truncated(int len) const;

  friend padic_series operator+(const padic_series& a, const padic_series& b);
  friend padic_series operator-(const padic_series& a, const padic_series& b);
  // Product truncated to min(len_a, len_b) terms.
  friend padic_series operator*(const padic_series& a, const padic_series& b);
  padic_series scaled(const padic_int& s) const;

 private:
  long p_;
  std::vector<padic_int> c_;
};

// Iwasawa invariants with a first-class "cannot tell at this precision" outcome.
// mu is determinate iff some coefficient's valuation is strictly below its own
// certified precision and realizes the minimum; lambda additionally requires the
// first minimizing index to be certified (an earlier all-zero coefficient whose
// certified precision equals mu leaves lambda open).
struct mu_lambda_result {
  std::optional<int> mu;
  std::optional<int> lambda;
};

mu_lambda_result mu_lambda(const padic_series& f);

// Unit root of X^2 - a_p X + p via the contraction alpha <- a_p - p/alpha starting
// at a_p. Throws ordinarity_violation when p | a_p.
padic_int unit_root(const mpz_class& a_p, long p, int prec);

// Teichmuller lift omega(a): the unique (p-1)-st root of unity congruent to a.
padic_int teichmuller(const mpz_class& a, long p, int prec);

// log_p on 1 + pZ_p by the alternating series, certified to the requested digits
// (internally works at higher precision to absorb the divisions by k).
padic_int iwasawa_log(const padic_int& u, int prec);

// The exponent f with <m> = (1+p)^f, i.e. -log<m> / log(1+p) with <m> = m/omega(m).
// Defined for any m coprime to p; additive in m (used for primes ell != p).
padic_int frobenius_exponent(const mpz_class& m, long p, int prec);

// (1+T)^f as a series of binomial coefficients C(f,j), j < len. Coefficient j is
// certified to prec - v_p(j!); throws precision_exhausted if that hits zero.
padic_series binom_power(const padic_int& f, int len);

}  // namespace muforge
