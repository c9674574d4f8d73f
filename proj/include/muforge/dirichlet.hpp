#pragma once

#include <gmpxx.h>

#include <vector>

#include "muforge/linalg.hpp"
#include "muforge/padic.hpp"

namespace muforge {

// Coefficients of the D-th cyclotomic polynomial, constant term first.
zvec cyclotomic_poly(long D);

// Element of Z[zeta_D] represented as a polynomial of degree < phi(D) in zeta_D
// (the representation modulo the monic cyclotomic polynomial is unique, so
// equality is coefficientwise).
struct cyclo_element {
  long order = 1;
  zvec c;  // length deg(Phi_D), low degree first

  bool operator==(const cyclo_element& o) const { return order == o.order && c == o.c; }
};

cyclo_element cyclo_zero(long D);
cyclo_element cyclo_integer(long D, const mpz_class& n);
cyclo_element cyclo_root_power(long D, long e);  // zeta_D^e
cyclo_element operator+(const cyclo_element& a, const cyclo_element& b);
cyclo_element operator-(const cyclo_element& a, const cyclo_element& b);
cyclo_element operator*(const cyclo_element& a, const cyclo_element& b);
cyclo_element cyclo_conj(const cyclo_element& a);  // zeta -> zeta^{-1}

// Primitive Dirichlet character stored by its exponent table: chi(a) =
// zeta_order^exps[a mod modulus], with -1 marking residues sharing a factor
// with the modulus.
struct dirichlet_character {
  long modulus = 1;
  long order = 1;
  std::vector<long> exps{0};

  long exponent_at(const mpz_class& a) const;     // -1 when chi(a) = 0
  cyclo_element value(const mpz_class& a) const;  // in Z[zeta_order]
  bool is_even() const;                           // chi(-1) == +1
  bool is_trivial() const { return modulus == 1; }
  dirichlet_character conjugate() const;
};

dirichlet_character trivial_character();

// The real primitive character attached to a fundamental discriminant d
// (Kronecker symbol (d/.)); conductor |d|, even exactly when d > 0.
dirichlet_character quadratic_character(long d);

// The canonical character of conductor p^{k+1} and order p^k (k >= 1): trivial
// on the Teichmuller part, sends a = omega(a) (1+p)^e to zeta_{p^k}^e.
dirichlet_character wild_character(long p, int k);

// Character mod m1*m2 with values chi1(a) chi2(a); the moduli must be coprime,
// and the product of primitive characters to coprime moduli is again primitive.
dirichlet_character product_character(const dirichlet_character& c1,
                                      const dirichlet_character& c2);

// tau(chi) = sum_a chi(a) zeta_f^a in Z[zeta_L], L = lcm(order, conductor).
cyclo_element gauss_sum(const dirichlet_character& chi);

// Generators of (Z/m)^* together with their orders, from the CRT decomposition
// of m into prime powers (each generator is = 1 modulo the other factors).
struct unit_group_basis {
  std::vector<long> gens;
  std::vector<long> orders;
};
unit_group_basis unit_group_generators(long m);

// All primitive characters whose modulus divides m and whose order divides
// order_divides, each listed once. Pass order_divides = 0 for no order bound.
std::vector<dirichlet_character> enumerate_characters(long m, long order_divides);

// The character chi with chi(gens[i]) = zeta^(evec[i] * ord / orders[i]) for the
// basis returned by unit_group_generators(m), where ord = lcm of the orders of
// the chosen values; evec[i] is taken mod orders[i]. Returns the primitive
// character inducing it.
dirichlet_character character_from_exponents(long m, const std::vector<long>& evec);

// chi(a) as a p-adic number, for characters whose order divides p - 1: the value
// group embeds via Teichmuller lifts, with zeta_order := omega(g)^((p-1)/order)
// for the smallest primitive root g mod p.
padic_int padic_value(const dirichlet_character& chi, const mpz_class& a, long p, int prec);

// Image of a cyclotomic integer under the embedding sending zeta_{p-1} to the
// Teichmuller lift used by padic_value. Requires the order to divide p - 1;
// anything else throws embedding_unsupported.
padic_int padic_embed(const cyclo_element& a, long p, int prec);

}  // namespace muforge
