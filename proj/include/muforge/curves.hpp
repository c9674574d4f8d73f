#pragma once

#include <gmpxx.h>

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "muforge/errors.hpp"

namespace muforge {

// Legendre symbol (a/ell) for an odd prime ell; 0 when ell | a.
int legendre(long a, long ell);

// Integral Weierstrass model [a1,a2,a3,a4,a6] with its conductor. The model is
// trusted to be globally minimal; validate() only checks what can be checked
// locally (nonzero discriminant, conductor support inside the discriminant's).
struct curve_data {
  long a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
  mpz_class conductor = 0;
  std::string label;  // optional display name from the corpus file

  mpz_class b2() const;
  mpz_class b4() const;
  mpz_class b6() const;
  mpz_class b8() const;
  mpz_class c4() const;
  mpz_class c6() const;
  mpz_class discriminant() const;

  bool operator==(const curve_data& o) const {
    return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6 &&
           conductor == o.conductor;
  }
};

// Throws invalid_model on a singular model or a conductor whose prime support
// does not divide the discriminant.
void validate_curve(const curve_data& e);

// Trace of Frobenius at a good prime ell (ell must not divide the conductor):
// point count over F_ell, completing the square for odd ell, direct enumeration
// for ell = 2. Results are memoized per curve.
long a_ell(const curve_data& e, long ell);

// a_ell at a bad prime via the tangent directions at the singular point of the
// reduced curve: +1 split multiplicative, -1 nonsplit, 0 additive.
long a_ell_bad(const curve_data& e, long ell);

// a_ell for good or bad ell, dispatching on the conductor.
long a_ell_any(const curve_data& e, long ell);

// a_n for arbitrary n >= 1 by multiplicativity and the three-term recursion
// a_{ell^(k+1)} = a_ell a_{ell^k} - ell a_{ell^(k-1)} at good ell (the ell-term
// drops at bad ell).
mpz_class a_n(const curve_data& e, long n);

bool good_ordinary(const curve_data& e, long p);

// Shared memo for traces of Frobenius; safe for concurrent fills.
class ap_cache {
 public:
  long get(const curve_data& e, long ell);
  static ap_cache& global();

 private:
  std::mutex mu_;
  std::map<std::pair<std::string, long>, long> table_;
  static std::string key_(const curve_data& e);
};

}  // namespace muforge
