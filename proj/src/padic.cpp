#include "muforge/padic.hpp"

#include <algorithm>
#include <string>

namespace muforge {

mpz_class pow_z(long base, long exp) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exp));
  return r;
}

// ---------------------------------------------------------------------------
// padic_int
// ---------------------------------------------------------------------------

padic_int::padic_int(long p, int prec, mpz_class value)
    : p_(p), prec_(prec), r_(std::move(value)) {
  if (p < 2) throw bad_input("padic_int: p must be a prime >= 2");
  if (prec < 1) throw bad_input("padic_int: precision must be positive");
  reduce_();
}

void padic_int::reduce_() {
  mpz_class m = modulus();
  mpz_mod(r_.get_mpz_t(), r_.get_mpz_t(), m.get_mpz_t());
}

padic_int padic_int::from_rational(long p, int prec, const mpq_class& x) {
  mpz_class den = x.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(p)))
    throw non_integral_value("from_rational: denominator divisible by p");
  mpz_class m = pow_z(p, prec);
  mpz_class dinv;
  if (!mpz_invert(dinv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()))
    throw non_integral_value("from_rational: denominator not invertible");
  return padic_int(p, prec, x.get_num() * dinv);
}

int padic_int::valuation() const {
  if (r_ == 0) return prec_;
  int v = 0;
  mpz_class t = r_;
  while (mpz_divisible_ui_p(t.get_mpz_t(), static_cast<unsigned long>(p_))) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), static_cast<unsigned long>(p_));
    ++v;
  }
  return std::min(v, prec_);
}

padic_int padic_int::reduced(int prec) const {
  if (prec > prec_) throw precision_insufficient("reduced: cannot gain digits");
  return padic_int(p_, prec, r_);
}

padic_int padic_int::unit_inverse() const {
  if (valuation() != 0) throw not_a_unit("unit_inverse: residue divisible by p");
  mpz_class m = modulus(), inv;
  mpz_invert(inv.get_mpz_t(), r_.get_mpz_t(), m.get_mpz_t());
  return padic_int(p_, prec_, inv);
}

padic_int padic_int::shift_down(int k) const {
  if (k == 0) return *this;
  if (k < 0 || k >= prec_) throw precision_exhausted("shift_down: no digits left");
  mpz_class q = pow_z(p_, k);
  if (!mpz_divisible_p(r_.get_mpz_t(), q.get_mpz_t()))
    throw bad_input("shift_down: residue not divisible by p^k");
  return padic_int(p_, prec_ - k, r_ / q);
}

padic_int padic_int::pow(unsigned long e) const {
  mpz_class m = modulus(), r;
  mpz_powm_ui(r.get_mpz_t(), r_.get_mpz_t(), e, m.get_mpz_t());
  return padic_int(p_, prec_, r);
}

padic_int padic_int::operator-() const { return padic_int(p_, prec_, -r_); }

void padic_int::check_compat_(const padic_int& a, const padic_int& b) {
  if (a.p_ != b.p_ || a.p_ == 0)
    throw bad_input("padic_int: mixed or unset primes");
}

padic_int operator+(const padic_int& a, const padic_int& b) {
  padic_int::check_compat_(a, b);
  int prec = std::min(a.prec_, b.prec_);
  return padic_int(a.p_, prec, a.r_ + b.r_);
}

padic_int operator-(const padic_int& a, const padic_int& b) {
  padic_int::check_compat_(a, b);
  int prec = std::min(a.prec_, b.prec_);
  return padic_int(a.p_, prec, a.r_ - b.r_);
}

padic_int operator*(const padic_int& a, const padic_int& b) {
  padic_int::check_compat_(a, b);
  int prec = std::min(a.prec_, b.prec_);
  return padic_int(a.p_, prec, a.r_ * b.r_);
}

bool same_residue(const padic_int& a, const padic_int& b) {
  padic_int::check_compat_(a, b);
  int prec = std::min(a.prec_, b.prec_);
  mpz_class m = pow_z(a.p_, prec);
  return mpz_congruent_p(a.r_.get_mpz_t(), b.r_.get_mpz_t(), m.get_mpz_t()) != 0;
}

bool congruent_mod(const padic_int& a, const padic_int& b, int i) {
  padic_int::check_compat_(a, b);
  if (a.prec_ < i || b.prec_ < i)
    throw precision_insufficient("congruent_mod: fewer certified digits than p^i");
  mpz_class m = pow_z(a.p_, i);
  return mpz_congruent_p(a.r_.get_mpz_t(), b.r_.get_mpz_t(), m.get_mpz_t()) != 0;
}

// ---------------------------------------------------------------------------
// padic_series
// ---------------------------------------------------------------------------

padic_series::padic_series(long p, std::vector<padic_int> coeffs)
    : p_(p), c_(std::move(coeffs)) {
  for (const auto& x : c_)
    if (x.p() != p) throw bad_input("padic_series: coefficient prime mismatch");
}

padic_series padic_series::zero(long p, int prec, int len) {
  std::vector<padic_int> c(static_cast<size_t>(len), padic_int(p, prec, 0));
  return padic_series(p, std::move(c));
}

padic_series padic_series::one(long p, int prec, int len) {
  padic_series s = zero(p, prec, len);
  s.coeff(0) = padic_int(p, prec, 1);
  return s;
}

padic_series padic_series::truncated(int len) const {
  if (len > length()) throw bad_input("truncated: cannot extend");
  return padic_series(p_, std::vector<padic_int>(c_.begin(), c_.begin() + len));
}

padic_series operator+(const padic_series& a, const padic_series& b) {
  if (a.p_ != b.p_) throw bad_input("padic_series: prime mismatch");
  int len = std::min(a.length(), b.length());
  std::vector<padic_int> c;
  c.reserve(static_cast<size_t>(len));
  for (int j = 0; j < len; ++j) c.push_back(a.coeff(j) + b.coeff(j));
  return padic_series(a.p_, std::move(c));
}

padic_series operator-(const padic_series& a, const padic_series& b) {
  if (a.p_ != b.p_) throw bad_input("padic_series: prime mismatch");
  int len = std::min(a.length(), b.length());
  std::vector<padic_int> c;
  c.reserve(static_cast<size_t>(len));
  for (int j = 0; j < len; ++j) c.push_back(a.coeff(j) - b.coeff(j));
  return padic_series(a.p_, std::move(c));
}

padic_series operator*(const padic_series& a, const padic_series& b) {
  if (a.p_ != b.p_) throw bad_input("padic_series: prime mismatch");
  int len = std::min(a.length(), b.length());
  padic_series out = padic_series::zero(a.p_, 1, len);
  for (int k = 0; k < len; ++k) {
    // Certified digits of sum_{i+j=k} a_i b_j: every term is only as good as the
    // worse of its two integral factors, and the sum as good as its worst term.
    int prec = 0;
    mpz_class acc = 0;
    bool first = true;
    for (int i = 0; i <= k; ++i) {
      const padic_int& x = a.coeff(i);
      const padic_int& y = b.coeff(k - i);
      int tp = std::min(x.precision(), y.precision());
      prec = first ? tp : std::min(prec, tp);
      first = false;
      acc += x.residue() * y.residue();
    }
    out.coeff(k) = padic_int(a.p_, prec, acc);
  }
  return out;
}

padic_series padic_series::scaled(const padic_int& s) const {
  std::vector<padic_int> c;
  c.reserve(c_.size());
  for (const auto& x : c_) c.push_back(x * s);
  return padic_series(p_, std::move(c));
}

// ---------------------------------------------------------------------------
// Iwasawa invariants
// ---------------------------------------------------------------------------

mu_lambda_result mu_lambda(const padic_series& f) {
  if (f.length() == 0) throw bad_input("mu_lambda: empty series");
  int m = f.coeff(0).precision();
  bool witnessed = false;  // some coefficient's valuation is exact, not a cap
  for (int j = 0; j < f.length(); ++j) {
    const padic_int& c = f.coeff(j);
    int v = c.valuation();
    if (v < m) {
      m = v;
      witnessed = v < c.precision();
    } else if (v == m && v < c.precision()) {
      witnessed = true;
    }
  }
  mu_lambda_result out;
  if (!witnessed) return out;  // every minimal coefficient might sink lower
  out.mu = m;
  for (int j = 0; j < f.length(); ++j) {
    const padic_int& c = f.coeff(j);
    if (c.valuation() == m) {
      // First index reaching the minimum. If it is only a precision cap the true
      // first minimizer is ambiguous between this index and a later witness.
      if (m < c.precision()) out.lambda = j;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unit root, Teichmuller, logarithm
// ---------------------------------------------------------------------------

padic_int unit_root(const mpz_class& a_p, long p, int prec) {
  if (mpz_divisible_ui_p(a_p.get_mpz_t(), static_cast<unsigned long>(p)))
    throw ordinarity_violation("unit_root: p divides a_p");
  padic_int ap(p, prec, a_p);
  padic_int alpha = ap;
  padic_int pp(p, prec, p);
  // alpha <- a_p - p/alpha gains one certified digit per pass.
  for (int i = 0; i <= prec; ++i) {
    padic_int next = ap - pp * alpha.unit_inverse();
    if (same_residue(next, alpha)) {
      alpha = next;
      break;
    }
    alpha = next;
  }
  padic_int check = alpha * alpha - ap * alpha + pp;
  if (!check.is_zero()) throw error("unit_root: iteration failed to converge");
  return alpha;
}

padic_int teichmuller(const mpz_class& a, long p, int prec) {
  if (mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(p)))
    throw not_a_unit("teichmuller: argument divisible by p");
  padic_int x(p, prec, a);
  for (int i = 0; i <= prec; ++i) {
    padic_int next = x.pow(static_cast<unsigned long>(p));
    if (same_residue(next, x)) return next;
    x = next;
  }
  throw error("teichmuller: iteration failed to converge");
}

padic_int iwasawa_log(const padic_int& u, int prec) {
  long p = u.p();
  padic_int one(p, u.precision(), 1);
  padic_int z = u - one;
  if (z.valuation() < 1) throw bad_input("iwasawa_log: argument not in 1 + pZ_p");

  // Terms (-1)^(k+1) z^k / k vanish mod p^prec once k - v_p(k) >= prec; the
  // divisions by k cost up to e = max v_p(k) digits, so we need the input at
  // prec + e digits and run the sum there.
  int kmax = 1;
  {
    auto vp = [&](int k) {
      int v = 0;
      while (k % p == 0) { k /= static_cast<int>(p); ++v; }
      return v;
    };
    while (kmax - vp(kmax) < prec) ++kmax;
  }
  int e = 0;
  for (long q = p; q <= kmax; q *= p) ++e;
  int work = prec + e;
  if (u.precision() < work)
    throw precision_insufficient("iwasawa_log: need argument at prec + max v_p(k)");

  padic_int zw = z.reduced(work);
  padic_int acc(p, work, 0);
  padic_int zpow = zw;
  for (int k = 1; k <= kmax; ++k) {
    int vk = 0;
    long kk = k;
    while (kk % p == 0) { kk /= p; ++vk; }
    padic_int term = zpow.shift_down(vk);            // divide by p^v(k)
    term = term * padic_int(p, work, kk).unit_inverse();  // and by the unit part
    if (k % 2 == 0) term = -term;
    acc = acc + term;
    if (k < kmax) zpow = zpow * zw;
  }
  return acc.reduced(prec);
}

padic_int frobenius_exponent(const mpz_class& m, long p, int prec) {
  if (mpz_divisible_ui_p(m.get_mpz_t(), static_cast<unsigned long>(p)))
    throw bad_input("frobenius_exponent: argument divisible by p");
  // f = -log<m> / log(1+p); both logs sit in pZ_p, so ask for one extra digit
  // and strip the common factor p before taking the unit inverse.
  int lg = prec + 1;
  int kmax = 1;
  {
    auto vp = [&](int k) {
      int v = 0;
      while (k % p == 0) { k /= static_cast<int>(p); ++v; }
      return v;
    };
    while (kmax - vp(kmax) < lg) ++kmax;
  }
  int e = 0;
  for (long q = p; q <= kmax; q *= p) ++e;
  int work = lg + e;

  padic_int omega = teichmuller(m, p, work);
  padic_int bracket = padic_int(p, work, m) * omega.unit_inverse();
  padic_int num = iwasawa_log(bracket, lg).shift_down(1);
  padic_int den = iwasawa_log(padic_int(p, work, 1 + p), lg).shift_down(1);
  padic_int f = -(num * den.unit_inverse());
  return f.reduced(prec);
}

padic_series binom_power(const padic_int& f, int len) {
  long p = f.p();
  int prec = f.precision();
  std::vector<padic_int> c;
  c.reserve(static_cast<size_t>(len));
  c.push_back(padic_int(p, prec, 1));
  padic_int run = c[0];
  for (int j = 1; j < len; ++j) {
    // C(f,j) = C(f,j-1) * (f - j + 1) / j. The p-part of j divides the running
    // numerator exactly because binomial coefficients of p-adic integers are
    // p-adic integers; each such division costs certified digits.
    padic_int fac = f - padic_int(p, prec, j - 1);
    run = run * fac;
    int vj = 0;
    long jj = j;
    while (jj % p == 0) { jj /= p; ++vj; }
    if (vj > 0) {
      if (run.precision() - vj < 1)
        throw precision_exhausted("binom_power: v_p(j!) ate all certified digits");
      run = run.shift_down(vj);
    }
    run = run * padic_int(p, run.precision(), jj).unit_inverse();
    c.push_back(run);
  }
  return padic_series(p, std::move(c));
}

}  // namespace muforge
