#include "muforge/curves.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace muforge {

namespace {

long mod_pos(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long powmod(long base, long exp, long m) {
  unsigned __int128 acc = 1, b = static_cast<unsigned long>(mod_pos(base, m));
  while (exp > 0) {
    if (exp & 1) acc = acc * b % static_cast<unsigned long>(m);
    b = b * b % static_cast<unsigned long>(m);
    exp >>= 1;
  }
  return static_cast<long>(acc);
}

}  // namespace

int legendre(long a, long ell) {
  a = mod_pos(a, ell);
  if (a == 0) return 0;
  long r = powmod(a, (ell - 1) / 2, ell);
  return r == 1 ? 1 : -1;
}

mpz_class curve_data::b2() const { return mpz_class(a1) * a1 + 4 * mpz_class(a2); }
mpz_class curve_data::b4() const { return 2 * mpz_class(a4) + mpz_class(a1) * a3; }
mpz_class curve_data::b6() const { return mpz_class(a3) * a3 + 4 * mpz_class(a6); }
mpz_class curve_data::b8() const {
  return mpz_class(a1) * a1 * a6 + 4 * mpz_class(a2) * a6 -
         mpz_class(a1) * a3 * a4 + mpz_class(a2) * a3 * a3 - mpz_class(a4) * a4;
}
mpz_class curve_data::c4() const { return b2() * b2() - 24 * b4(); }
mpz_class curve_data::c6() const {
  return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6();
}
mpz_class curve_data::discriminant() const {
  mpz_class B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
  return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

void validate_curve(const curve_data& e) {
  mpz_class disc = e.discriminant();
  if (disc == 0) throw invalid_model("validate_curve: singular model (disc = 0)");
  if (e.conductor < 1) throw invalid_model("validate_curve: conductor must be >= 1");
  // Every prime of bad reduction divides the discriminant, so the conductor's
  // support must too. (Minimality itself is not checkable locally and is assumed.)
  mpz_class n = e.conductor;
  for (long q = 2; n > 1; q == 2 ? q = 3 : q += 2) {
    if (mpz_class(n % q) != 0) {
      if (mpz_class(q) * q > n) {
        // n itself is a big prime factor
        if (!mpz_divisible_p(disc.get_mpz_t(), n.get_mpz_t()))
          throw invalid_model("validate_curve: conductor prime misses discriminant");
        break;
      }
      continue;
    }
    if (mpz_class(disc % q) == 0) {
      while (mpz_class(n % q) == 0) n /= q;
    } else {
      throw invalid_model("validate_curve: conductor prime misses discriminant");
    }
  }
}

namespace {

// #E(F_ell) - 1 (affine points) for the full Weierstrass model.
long affine_points(const curve_data& e, long ell) {
  if (ell == 2) {
    long count = 0;
    for (long x = 0; x < 2; ++x)
      for (long y = 0; y < 2; ++y) {
        long lhs = y * y + e.a1 * x * y + e.a3 * y;
        long rhs = x * x * x + e.a2 * x * x + e.a4 * x + e.a6;
        if (mod_pos(lhs - rhs, 2) == 0) ++count;
      }
    return count;
  }
  // Complete the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6; the
  // substitution is a bijection on y for odd ell, so each x contributes
  // 1 + legendre(rhs).
  long b2 = mod_pos(e.a1 * e.a1 + 4 * e.a2, ell);
  long b4 = mod_pos(2 * e.a4 + e.a1 * e.a3, ell);
  long b6 = mod_pos(e.a3 * e.a3 + 4 * e.a6, ell);
  // Above a few thousand the per-x Euler-criterion exponentiations dominate, so
  // amortize them into one squares table; congruence scans go well past 10^4.
  std::vector<bool> sq;
  if (ell > 2048) {
    sq.assign(static_cast<size_t>(ell), false);
    for (long t = 0; t <= ell / 2; ++t)
      sq[static_cast<size_t>(static_cast<unsigned __int128>(t) * t % static_cast<unsigned long>(ell))] = true;
  }
  long count = 0;
  for (long x = 0; x < ell; ++x) {
    unsigned __int128 v =
        static_cast<unsigned __int128>(mod_pos(4 * x + b2, ell)) * x % ell;
    v = (v + 2 * b4) % ell;
    v = (v * x + b6) % ell;
    long rhs = static_cast<long>(v % ell);
    if (sq.empty())
      count += 1 + legendre(rhs, ell);
    else
      count += rhs == 0 ? 1 : (sq[static_cast<size_t>(rhs)] ? 2 : 0);
  }
  return count;
}

}  // namespace

long a_ell(const curve_data& e, long ell) {
  if (ell < 2) throw bad_input("a_ell: not a prime");
  if (mpz_divisible_ui_p(e.conductor.get_mpz_t(), static_cast<unsigned long>(ell)))
    throw bad_input("a_ell: prime divides the conductor");
  return ell + 1 - (affine_points(e, ell) + 1);
}

long a_ell_bad(const curve_data& e, long ell) {
  if (!mpz_divisible_ui_p(e.conductor.get_mpz_t(), static_cast<unsigned long>(ell)))
    throw bad_input("a_ell_bad: prime does not divide the conductor");
  // Locate the singular point of the reduction (unique for a Weierstrass cubic).
  long sx = -1, sy = -1;
  for (long x = 0; x < ell && sx < 0; ++x)
    for (long y = 0; y < ell; ++y) {
      long f = y * y + e.a1 * x * y + e.a3 * y - x * x * x - e.a2 * x * x -
               e.a4 * x - e.a6;
      long fx = e.a1 * y - 3 * x * x - 2 * e.a2 * x - e.a4;
      long fy = 2 * y + e.a1 * x + e.a3;
      if (mod_pos(f, ell) == 0 && mod_pos(fx, ell) == 0 && mod_pos(fy, ell) == 0) {
        sx = x;
        sy = y;
        break;
      }
    }
  if (sx < 0)
    throw invalid_model("a_ell_bad: reduction is nonsingular; conductor is wrong");
  // Shift the singular point to the origin; the lowest-degree part becomes
  // y^2 + a1 xy - (a2 + 3 sx) x^2 and its roots t^2 + a1 t - (a2 + 3 sx) are the
  // tangent slopes: two in F_ell = split node, none = nonsplit node, double = cusp.
  long a1s = mod_pos(e.a1, ell);
  long a2s = mod_pos(e.a2 + 3 * sx, ell);
  (void)sy;
  long roots = 0;
  bool dbl = false;
  for (long t = 0; t < ell; ++t)
    if (mod_pos(t * t + a1s * t - a2s, ell) == 0) ++roots;
  if (roots == 1) {
    // single root over F_ell means a double root (quadratic over a field)
    dbl = true;
  }
  if (dbl) return 0;
  return roots == 2 ? 1 : -1;
}

long a_ell_any(const curve_data& e, long ell) {
  if (mpz_divisible_ui_p(e.conductor.get_mpz_t(), static_cast<unsigned long>(ell)))
    return a_ell_bad(e, ell);
  return ap_cache::global().get(e, ell);
}

mpz_class a_n(const curve_data& e, long n) {
  if (n < 1) throw bad_input("a_n: n must be positive");
  mpz_class result = 1;
  long m = n;
  for (long q = 2; static_cast<__int128>(q) * q <= m; q == 2 ? q = 3 : q += 2) {
    if (m % q != 0) continue;
    int k = 0;
    while (m % q == 0) { m /= q; ++k; }
    bool bad = mpz_divisible_ui_p(e.conductor.get_mpz_t(),
                                  static_cast<unsigned long>(q)) != 0;
    mpz_class aq(a_ell_any(e, q));
    mpz_class prev = 1, cur = aq;
    for (int i = 1; i < k; ++i) {
      mpz_class next = aq * cur - (bad ? 0 : mpz_class(q)) * prev;
      prev = cur;
      cur = next;
    }
    result *= cur;
  }
  if (m > 1) {
    result *= a_ell_any(e, m);
    // exponent one: nothing further
  }
  return result;
}

bool good_ordinary(const curve_data& e, long p) {
  if (mpz_divisible_ui_p(e.conductor.get_mpz_t(), static_cast<unsigned long>(p)))
    return false;
  return a_ell(e, p) % p != 0;
}

std::string ap_cache::key_(const curve_data& e) {
  std::ostringstream os;
  os << e.a1 << ',' << e.a2 << ',' << e.a3 << ',' << e.a4 << ',' << e.a6 << ':'
     << e.conductor;
  return os.str();
}

long ap_cache::get(const curve_data& e, long ell) {
  auto k = std::make_pair(key_(e), ell);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(k);
    if (it != table_.end()) return it->second;
  }
  long v = a_ell(e, ell);
  std::lock_guard<std::mutex> lock(mu_);
  table_.emplace(k, v);  // a second writer stores the same value; emplace keeps one
  return v;
}

ap_cache& ap_cache::global() {
  static ap_cache cache;
  return cache;
}

}  // namespace muforge
