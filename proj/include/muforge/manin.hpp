#pragma once

#include <gmpxx.h>

#include <array>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "muforge/linalg.hpp"

namespace muforge {

// P^1(Z/N): pairs (c:d) with gcd(c,d,N) = 1 up to scaling by units, with a fixed
// canonical representative per class (Cremona's normalization: first coordinate a
// divisor g of N, second minimized over the stabilizing units 1 + k N/g).
class p1_space {
 public:
  explicit p1_space(long N);

  long modulus() const { return n_; }
  long size() const { return static_cast<long>(reps_.size()); }
  const std::pair<long, long>& rep(long i) const { return reps_[static_cast<size_t>(i)]; }

  // Canonical representative of (c:d); second component -1 when gcd(c,d,N) > 1.
  std::pair<long, long> normalize(long c, long d) const;
  // Index of the class of (c:d), or -1 when the pair is not primitive mod N.
  long index(long c, long d) const;

 private:
  long n_;
  std::vector<std::pair<long, long>> reps_;
  std::map<std::pair<long, long>, long> lookup_;
};

// Cusps for Gamma_0(N): lowest-terms fractions p/q with oo = 1/0, classified by
// the standard equivalence test s1 q2 == s2 q1 mod gcd(q1 q2, N), p_j s_j == 1 mod q_j.
class cusp_classes {
 public:
  explicit cusp_classes(long N);
  // Number of classes interned so far; classes are discovered through index().
  long size() const { return static_cast<long>(reps_.size()); }
  // Class index of the cusp a/c (c may be 0 for oo); fractions need not be reduced.
  long index(const mpz_class& a, const mpz_class& c);

 private:
  long n_;
  std::vector<std::pair<mpz_class, mpz_class>> reps_;
  bool equivalent_(const std::pair<mpz_class, mpz_class>& x,
                   const std::pair<mpz_class, mpz_class>& y) const;
};

// Weight-2 modular symbols for Gamma_0(N): the quotient of the free Q-module on
// P^1(Z/N) by the two- and three-term Manin relations, with the boundary map to
// cusp classes. gen_image[i] expresses generator i in the chosen quotient basis
// (images of the free generators), so any operator given on Manin symbols can be
// pushed to the quotient.
struct manin_basis {
  long level = 0;
  p1_space p1;
  int dim = 0;                    // full quotient: 2g + (#cusps) - 1
  int cuspidal_dim = 0;           // kernel of the boundary map: 2g
  std::vector<int> basis_gens;    // generator indices whose classes form the basis
  std::vector<qvec> gen_image;    // size |P^1|, each of length dim
  long n_cusps = 0;
  std::vector<qvec> gen_boundary;  // boundary of each generator in C^{n_cusps}
  qmat boundary_on_basis;          // n_cusps x dim

  explicit manin_basis(long N) : p1(N) {}
};

std::shared_ptr<const manin_basis> build_space(long N);

// Heilbronn matrices of determinant ell (Merel's family: det = ell, a > b >= 0,
// d > c >= 0); right action on Manin symbols realizes T_ell for ell prime to N.
std::vector<std::array<long, 4>> heilbronn_matrices(long ell);

// Matrix of T_ell on the full quotient (columns = images of basis elements).
qmat hecke_matrix(const manin_basis& mb, long ell);

// Star involution (c:d) -> (-c:d), the action induced by z -> -conj(z).
qmat star_matrix(const manin_basis& mb);

}  // namespace muforge
