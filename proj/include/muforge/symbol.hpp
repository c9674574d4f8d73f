#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>

#include "muforge/curves.hpp"
#include "muforge/linalg.hpp"
#include "muforge/manin.hpp"

namespace muforge {

// A Hecke eigenfunctional on the weight-2 modular symbols of level N(E), i.e. the
// linear map "pair with the plus or minus part of E's modular symbol". Values are
// exact rationals; normalize_symbol pins the global scale and sign.
struct eigen_symbol {
  curve_data curve;
  int sign = +1;  // star-involution eigenvalue
  std::shared_ptr<const manin_basis> space;
  qvec functional;   // coordinates on the quotient basis (length dim)
  qvec gen_values;   // functional paired with every P^1 generator's class
  mpq_class scale = 1;  // total rescaling applied since extraction
  bool normalized = false;

  // lambda(r): value on the path from the rational r to oo, via the continued
  // fraction of r (Manin's trick). lambda(r + 1) = lambda(r).
  mpq_class eval(const mpq_class& r) const;
};

// Cut the dual of the full quotient down to the line where every good T_ell acts
// by a_ell(E) and the star involution by sign, then verify the eigen equations at
// all good primes up to the Sturm bound of the level. Throws eigenline_not_found
// when the cuts kill everything (wrong level or wrong traces) and
// eigenline_not_unique when they fail to isolate a line.
eigen_symbol eigen_functional(std::shared_ptr<const manin_basis> space,
                              const curve_data& e, int sign);

// Rescale so the values on the integral cuspidal sign-eigenlattice are coprime
// integers. That makes every value of the symbol p-integral on cuspidal classes
// with at least one p-unit value, simultaneously for all primes p. The overall
// sign is fixed by lambda(0) > 0 when lambda(0) != 0, else by making the first
// nonzero generator value positive.
void normalize_symbol(eigen_symbol& s);

// build_space + eigen_functional + normalize_symbol in one call.
eigen_symbol build_symbol(const curve_data& e, int sign);

// Text round-trip for caching. Deserialization rebuilds the space from the level
// (the construction is deterministic) and recomputes the generator values.
std::string serialize_symbol(const eigen_symbol& s);
eigen_symbol deserialize_symbol(const std::string& text);

}  // namespace muforge
