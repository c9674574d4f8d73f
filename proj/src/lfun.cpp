#include "muforge/lfun.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>

#include "muforge/errors.hpp"
#include "muforge/parallel.hpp"

namespace muforge {

namespace {

// Memoized symbol evaluation, shared across theta levels. Keys are reduced to
// [0,1) using lambda(r+1) = lambda(r), which makes the second term of level n
// hit the cache filled by the first term of level n-1.
class lambda_cache {
 public:
  lambda_cache(const eigen_symbol& sym, long p, int scale_pow) : sym_(sym), scale_(1) {
    for (int i = 0; i < scale_pow; ++i) scale_ *= p;
  }

  mpq_class at(const mpq_class& r) {
    mpq_class key = r;
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), key.get_num_mpz_t(), key.get_den_mpz_t());
    key -= fl;
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    mpq_class v = sym_.eval(key) * scale_;
    std::lock_guard<std::mutex> g(mu_);
    return memo_.emplace(key, v).first->second;
  }

 private:
  const eigen_symbol& sym_;
  mpq_class scale_;
  std::map<mpq_class, mpq_class> memo_;
  std::mutex mu_;
};

void check_theta_inputs(const eigen_symbol& sym, const dirichlet_character& chi, long p) {
  if (!sym.normalized) throw bad_input("theta_level: symbol must be normalized first");
  if (p < 3) throw bad_input("theta_level: p must be an odd prime");
  if (!good_ordinary(sym.curve, p))
    throw ordinarity_violation("theta_level: curve not good ordinary at " + std::to_string(p));
  int chi_sign = chi.is_even() ? +1 : -1;
  if (chi_sign != sym.sign)
    throw parity_mismatch("theta_level: character parity " + std::to_string(chi_sign) +
                          " does not match symbol sign " + std::to_string(sym.sign));
  if (chi.modulus % p == 0)
    throw bad_input("theta_level: tame conductor must be coprime to p");
  if ((p - 1) % chi.order != 0)
    throw embedding_unsupported("theta_level: character order " + std::to_string(chi.order) +
                                " does not divide " + std::to_string(p - 1));
}

}  // namespace

theta_level_data theta_level(const eigen_symbol& sym, const dirichlet_character& chi,
                             long p, int level, int prec, const theta_options& opt) {
  check_theta_inputs(sym, chi, p);
  if (level < 1 || prec < 1) throw bad_input("theta_level: level and prec must be positive");
  if (level > 10 || pow_z(p, level) > 50'000'000)
    throw bad_input("theta_level: level out of supported range");
  int W = prec;
  long f = chi.modulus;

  mpz_class a_p = ap_cache::global().get(sym.curve, p);
  padic_int ainv = unit_root(a_p, p, W).unit_inverse();

  dirichlet_character chib = chi.conjugate();

  // The twisted symbol sum_b chibar(b) lambda(r + b/f) satisfies the Hecke
  // relation of the twisted form, whose U_p-eigenvalue is chi(p) alpha. The
  // distribution property therefore pairs the level-k term with
  // (chi(p) alpha)^{-k}; with plain alpha powers the cells would not add up
  // to a measure whenever chi(p) != 1.
  padic_int twb = padic_value(chib, p, p, W);
  padic_int ainv_level = ainv.pow(static_cast<unsigned long>(level));
  padic_int w_hi = ainv_level * twb.pow(static_cast<unsigned long>(level));
  padic_int w_lo = ainv_level * ainv * twb.pow(static_cast<unsigned long>(level - 1));
  std::vector<padic_int> chibar(static_cast<size_t>(f));
  std::vector<bool> coprime(static_cast<size_t>(f), false);
  for (long b = 0; b < f; ++b) {
    if (chib.exponent_at(b) < 0) continue;
    coprime[static_cast<size_t>(b)] = true;
    chibar[static_cast<size_t>(b)] = padic_value(chib, b, p, W);
  }

  mpz_class mod_hi = pow_z(p, level);
  mpz_class mod_lo = level >= 2 ? pow_z(p, level - 1) : mpz_class(1);
  long J = mpz_class(mod_hi / p).get_si();  // p^{level-1} indices j

  std::vector<mpz_class> teich_hi(static_cast<size_t>(p));
  for (long eta = 1; eta < p; ++eta)
    teich_hi[static_cast<size_t>(eta)] = teichmuller(eta, p, level).residue();
  std::vector<mpz_class> onep_hi(static_cast<size_t>(J)), onep_lo(static_cast<size_t>(J));
  mpz_class acc_hi = 1, acc_lo = 1;
  for (long j = 0; j < J; ++j) {
    onep_hi[static_cast<size_t>(j)] = acc_hi;
    onep_lo[static_cast<size_t>(j)] = acc_lo;
    acc_hi = acc_hi * (1 + p) % mod_hi;
    acc_lo = acc_lo * (1 + p) % mod_lo;
  }

  lambda_cache lam(sym, p, opt.scale_pow);
  mpq_class f_q(f);

  theta_level_data out;
  out.p = p;
  out.level = level;
  out.c.assign(static_cast<size_t>(J), padic_int(p, W, 0));

  parallel_for(J, opt.threads, [&](long j) {
    padic_int sum_hi(p, W, 0), sum_lo(p, W, 0);
    for (long eta = 1; eta < p; ++eta) {
      mpz_class a_hi = teich_hi[static_cast<size_t>(eta)] * onep_hi[static_cast<size_t>(j)] % mod_hi;
      mpq_class arg_hi = (mpq_class(a_hi) / mpq_class(mod_hi));
      mpq_class arg_lo;
      if (level >= 2) {
        mpz_class a_lo =
            teich_hi[static_cast<size_t>(eta)] * onep_lo[static_cast<size_t>(j)] % mod_lo;
        arg_lo = mpq_class(a_lo) / mpq_class(mod_lo);
      }
      for (long b = 0; b < f; ++b) {
        if (!coprime[static_cast<size_t>(b)]) continue;
        mpq_class shift = mpq_class(b) / f_q;
        padic_int hi = padic_int::from_rational(p, W, lam.at(arg_hi + shift));
        padic_int lo = padic_int::from_rational(p, W, lam.at(arg_lo + shift));
        sum_hi = sum_hi + chibar[static_cast<size_t>(b)] * hi;
        sum_lo = sum_lo + chibar[static_cast<size_t>(b)] * lo;
      }
    }
    out.c[static_cast<size_t>(j)] = w_hi * sum_hi - w_lo * sum_lo;
  });
  return out;
}

padic_series theta_expansion(const theta_level_data& th, int tdeg) {
  if (th.c.empty() || tdeg < 1) throw bad_input("theta_expansion: empty input");
  long p = th.p;
  int W = th.c[0].precision();
  padic_series out = padic_series::zero(p, W, tdeg);
  for (int m = 0; m < tdeg; ++m) {
    padic_int s(p, W, 0);
    for (size_t j = static_cast<size_t>(m); j < th.c.size(); ++j) {
      mpz_class bin;
      mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(m));
      s = s + th.c[j] * padic_int(p, W, bin);
    }
    out.coeff(m) = s;
  }
  return out;
}

lp_result lp_series(const eigen_symbol& sym, const dirichlet_character& chi, long p,
                    int prec, int tdeg, int max_level, const theta_options& opt) {
  int logdeg = 0;
  for (long t = tdeg - 1; t >= p; t /= p) ++logdeg;
  // Consecutive levels n, n+1 agree on coefficient m to n - 1 - floor(log_p m)
  // digits, so the expansion at this depth carries the limit mod p^prec on
  // every kept coefficient. There is no sound data-driven early exit: root
  // numbers can force every twist below some conductor to vanish, making all
  // shallow levels identically zero while deeper levels carry the mass
  // (conductor 57 at p = 5 does exactly this), so agreement of two shallow
  // levels proves nothing.
  const int depth = prec + 1 + logdeg;
  if (max_level <= 0) max_level = depth;
  if (max_level < depth)
    throw stabilization_failed("lp_series: level cap " + std::to_string(max_level) +
                               " is below the certified depth " + std::to_string(depth));
  padic_series prev = theta_expansion(theta_level(sym, chi, p, 1, prec, opt), tdeg);
  for (int n = 1; n < depth; ++n) {
    padic_series cur = theta_expansion(theta_level(sym, chi, p, n + 1, prec, opt), tdeg);
    for (int m = 0; m < tdeg; ++m) {
      int lm = 0;
      for (long t = m; t >= p; t /= p) ++lm;
      int provable = std::min(prec, n - 1 - lm);
      if (provable > 0 && !congruent_mod(cur.coeff(m), prev.coeff(m), provable))
        throw stabilization_failed(
            "lp_series: refinement from level " + std::to_string(n) + " to " +
            std::to_string(n + 1) + " broke the distribution bound");
    }
    prev = cur;
  }
  return lp_result{prev, depth, opt.scale_pow};
}

padic_int ep_multiplier(const mpz_class& a_p, const dirichlet_character& psi, long p, int prec) {
  padic_int ainv = unit_root(a_p, p, prec).unit_inverse();
  long f = psi.modulus;
  int k = 0;
  while (f % p == 0) {
    f /= p;
    ++k;
  }
  padic_int out = ainv.pow(static_cast<unsigned long>(k));
  if (k == 0) {
    padic_int one(p, prec, 1);
    padic_int vp = padic_value(psi, p, p, prec);
    padic_int vpb = padic_value(psi.conjugate(), p, p, prec);
    out = out * (one - vpb * ainv) * (one - vp * ainv);
  }
  return out;
}

interp_report interpolation_check(const eigen_symbol& sym, const dirichlet_character& chi,
                                  int rho_exp, long p, int prec, const theta_options& opt) {
  check_theta_inputs(sym, chi, p);
  if (rho_exp < 0 || prec < 1) throw bad_input("interpolation_check: bad rho_exp or prec");
  int W = prec;
  interp_report rep;
  rep.p = p;
  rep.rho_exp = rho_exp;
  rep.working_prec = W;
  rep.scale_pow = opt.scale_pow;

  mpz_class a_p = ap_cache::global().get(sym.curve, p);
  lambda_cache lam(sym, p, opt.scale_pow);
  dirichlet_character chib = chi.conjugate();

  if (rho_exp == 0) {
    theta_level_data th = theta_level(sym, chi, p, 1, W, opt);
    padic_int lhs = th.c[0];  // A_0, which is the same at every level
    padic_int s(p, W, 0);
    long f = chi.modulus;
    for (long b = 0; b < f; ++b) {
      if (chib.exponent_at(b) < 0) continue;
      padic_int lv = padic_int::from_rational(p, W, lam.at(mpq_class(b) / mpq_class(f)));
      s = s + padic_value(chib, b, p, W) * lv;
    }
    padic_int diff = lhs - ep_multiplier(a_p, chi, p, W) * s;
    rep.diff_val_num = diff.valuation();
    rep.diff_val_den = 1;
    rep.pass = rep.diff_val_num >= W;
    return rep;
  }

  int k = rho_exp;
  mpz_class pk_z = pow_z(p, k);
  if (pk_z > 100'000) throw bad_input("interpolation_check: rho order out of supported range");
  long pk = pk_z.get_si();
  long deg = pk - pk / p;  // phi(p^k)
  mpz_class mod = pow_z(p, W);
  auto norm = [&](mpz_class v) {
    v %= mod;
    if (v < 0) v += mod;
    return v;
  };

  // Left side: the full level-(k+1) theta polynomial, written in y = 1 + x with
  // y^{p^k} = 1, so coefficient j is c_{k+1, j}.
  theta_level_data th = theta_level(sym, chi, p, k + 1, W, opt);
  std::vector<mpz_class> poly(static_cast<size_t>(pk), mpz_class(0));
  for (long j = 0; j < pk; ++j) poly[static_cast<size_t>(j)] = th.c[static_cast<size_t>(j)].residue();

  // Right side: alpha^{-(k+1)} sum_b conj(chi rho)(b) lambda(b / f_psi), with the
  // wild part conj(rho)(b) contributing y^{exponent}. The table below stores the
  // exponents of conj(rho) directly: rho itself maps 1+p to y^{-1} here, matching
  // the orientation of the (1+p)-orbit used to index the c_{n,j}.
  dirichlet_character rhob = wild_character(p, k);
  long f_psi = chi.modulus * pk * p;
  padic_int ep = unit_root(a_p, p, W).unit_inverse().pow(static_cast<unsigned long>(k + 1));
  // Splitting B mod f_psi into a/p^{k+1} + b/f pieces leaves a global
  // conj(rho)(f) behind, realized as a shift of every wild exponent. It is
  // invisible for trivial chi, where f = 1.
  long fshift = rhob.exponent_at(chi.modulus);
  for (long b = 0; b < f_psi; ++b) {
    if (chib.exponent_at(b) < 0 || rhob.exponent_at(b) < 0) continue;
    padic_int lv = padic_int::from_rational(p, W, lam.at(mpq_class(b) / mpq_class(f_psi)));
    padic_int scal = ep * padic_value(chib, b, p, W) * lv;
    size_t pos = static_cast<size_t>(((rhob.exponent_at(b) - fshift) % pk + pk) % pk);
    poly[pos] = norm(poly[pos] - scal.residue());
  }

  // Reduce modulo the p^k-th cyclotomic polynomial in y (its terms are
  // y^{i p^{k-1}}, i < p) down to degree < phi(p^k).
  for (long t = pk - 1; t >= deg; --t) {
    mpz_class c = poly[static_cast<size_t>(t)];
    if (c == 0) continue;
    poly[static_cast<size_t>(t)] = 0;
    for (long i = 0; i < p - 1; ++i) {
      size_t pos = static_cast<size_t>(t - deg + i * (pk / p));
      poly[pos] = norm(poly[pos] - c);
    }
  }

  // Substitute y = 1 + x and take the x-adic valuation, where v(x) = 1/phi(p^k)
  // and v(p) = 1: terms d*v_p(coef) + i are pairwise distinct across i, so the
  // minimum is exact whenever any coefficient survives mod p^W.
  long best = deg * W;
  for (long i = 0; i < deg; ++i) {
    mpz_class xi = 0;
    for (long j = i; j < deg; ++j) {
      mpz_class bin;
      mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(j), static_cast<unsigned long>(i));
      xi = norm(xi + bin * poly[static_cast<size_t>(j)]);
    }
    if (xi == 0) continue;
    mpz_class unit;
    long v = static_cast<long>(mpz_remove(unit.get_mpz_t(), xi.get_mpz_t(), mpz_class(p).get_mpz_t()));
    best = std::min(best, deg * v + i);
  }
  rep.diff_val_num = best;
  rep.diff_val_den = deg;
  rep.pass = best >= deg * W;
  return rep;
}

namespace {

// sum over n of (a_n / n) exp(-2 pi n t / sqrt(N)), truncated once the Hasse
// tail bound drops below 1e-11.
double symmetric_sum(const curve_data& e, double t) {
  double rtN = std::sqrt(mpz_get_d(e.conductor.get_mpz_t()));
  double c = 2.0 * std::numbers::pi * t / rtN;
  double tail_unit = std::exp(-c);
  long M = 16;
  while (2.0 * std::pow(tail_unit, static_cast<double>(M)) / (1.0 - tail_unit) > 1e-11) ++M;
  double s = 0.0;
  for (long n = 1; n <= M; ++n)
    s += mpz_get_d(a_n(e, n).get_mpz_t()) / static_cast<double>(n) * std::exp(-c * n);
  return s;
}

double agm(double a, double b) {
  while (std::fabs(a - b) > 1e-15 * std::fabs(a)) {
    double a1 = 0.5 * (a + b), b1 = std::sqrt(a * b);
    a = a1;
    b = b1;
  }
  return a;
}

// roots of the monic cubic x^3 + A x^2 + B x + C, all real, descending
void three_real_roots(double A, double B, double C, double r[3]) {
  double p = B - A * A / 3.0;
  double q = 2.0 * A * A * A / 27.0 - A * B / 3.0 + C;
  double m = 2.0 * std::sqrt(-p / 3.0);
  double arg = 3.0 * q / (p * m);
  arg = std::max(-1.0, std::min(1.0, arg));
  double theta = std::acos(arg) / 3.0;
  for (int k = 0; k < 3; ++k) r[k] = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) - A / 3.0;
  std::sort(r, r + 3, std::greater<double>());
  for (int k = 0; k < 3; ++k)  // one Newton polish each
    for (int it = 0; it < 3; ++it) {
      double x = r[k];
      double fx = ((x + A) * x + B) * x + C;
      double dfx = (3.0 * x + 2.0 * A) * x + B;
      if (dfx != 0.0) r[k] = x - fx / dfx;
    }
}

double real_root(double A, double B, double C) {
  double x = 1.0 + std::fabs(A) + std::fabs(B) + std::fabs(C);
  for (int it = 0; it < 200; ++it) {
    double fx = ((x + A) * x + B) * x + C;
    double dfx = (3.0 * x + 2.0 * A) * x + B;
    double step = fx / dfx;
    x -= step;
    if (std::fabs(step) < 1e-14 * (1.0 + std::fabs(x))) break;
  }
  return x;
}

}  // namespace

double complex_L_value(const curve_data& e, const std::vector<long>& sigma) {
  // L(1) = S(t) + w S(1/t) for every t > 0; two choices of t pin down both the
  // root number w and the value.
  double s_mid = symmetric_sum(e, 1.0);
  double s_hi = symmetric_sum(e, 1.2);
  double s_lo = symmetric_sum(e, 1.0 / 1.2);
  double denom = s_lo - s_mid;
  double w;
  if (std::fabs(denom) < 1e-12) {
    w = 1.0;  // S constant across t only when the odd part cancels, i.e. w = +1
  } else {
    w = (s_mid - s_hi) / denom;
  }
  double snapped = w >= 0.0 ? 1.0 : -1.0;
  if (std::fabs(w - snapped) > 0.1)
    throw bad_input("complex_L_value: root number did not resolve to +1 or -1");
  double L = s_mid * (1.0 + snapped);
  for (long ell : sigma) {
    double a = static_cast<double>(a_ell_any(e, ell));
    double factor = 1.0 - a / static_cast<double>(ell);
    if (e.conductor % ell != 0) factor += 1.0 / static_cast<double>(ell);
    L *= factor;
  }
  return L;
}

period_pair neron_periods(const curve_data& e) {
  // Periods of y^2 = 4x^3 + b2 x^2 + 2 b4 x + b6, i.e. of the monic cubic
  // x^3 + (b2/4) x^2 + (b4/2) x + (b6/4) scaled by 2 in y.
  double A = mpz_get_d(e.b2().get_mpz_t()) / 4.0;
  double B = mpz_get_d(e.b4().get_mpz_t()) / 2.0;
  double C = mpz_get_d(e.b6().get_mpz_t()) / 4.0;
  period_pair out;
  if (e.discriminant() > 0) {
    double r[3];
    three_real_roots(A, B, C, r);
    double e1 = r[0], e2 = r[1], e3 = r[2];
    double w_real = std::numbers::pi / agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
    double w_imag = std::numbers::pi / agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3));
    out.real_period = 2.0 * w_real;  // two real components
    out.imaginary_period = w_imag;
  } else {
    double e1 = real_root(A, B, C);
    double c1 = A + e1, c0 = B + e1 * c1;  // remaining quadratic x^2 + c1 x + c0
    double mu = -c1 / 2.0;
    double nu = std::sqrt(std::max(0.0, c0 - c1 * c1 / 4.0));
    // AGM of the conjugate pair sqrt(e1 - e2), sqrt(e1 - e3): after one step it
    // is the real AGM of Re sqrt(e1 - e2) and |e1 - e2|^{1/2}.
    double modulus = std::hypot(e1 - mu, nu);
    double re_sqrt = std::sqrt((modulus + (e1 - mu)) / 2.0);
    out.real_period = std::numbers::pi / agm(re_sqrt, std::sqrt(modulus));
    // generator of the imaginary-axis sublattice, by quadrature of
    // 2 * int_{-oo}^{e1} dx / sqrt(-g(x)) with x = e1 - tan(theta)^2
    long steps = 4096;
    double h = (std::numbers::pi / 2.0) / static_cast<double>(steps);
    double total = 0.0;
    for (long i = 0; i <= steps; ++i) {
      double val;
      if (i == steps) {
        val = 1.0;  // limit of sec^2 / |x - e1| as x -> -oo
      } else {
        double th = h * static_cast<double>(i);
        double u = std::tan(th);
        double sec2 = 1.0 + u * u;
        val = sec2 / std::hypot(e1 - u * u - mu, nu);
      }
      double wgt = (i == 0 || i == steps) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      total += wgt * val;
    }
    out.imaginary_period = 2.0 * total * h / 3.0;
  }
  return out;
}

}  // namespace muforge
