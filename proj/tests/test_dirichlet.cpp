#include "doctest.h"
#include "muforge/dirichlet.hpp"

#include <algorithm>
#include <numeric>

using namespace muforge;

TEST_CASE("cyclotomic polynomials") {
  CHECK(cyclotomic_poly(1) == zvec{-1, 1});
  CHECK(cyclotomic_poly(4) == zvec{1, 0, 1});
  CHECK(cyclotomic_poly(6) == zvec{1, -1, 1});
  CHECK(cyclotomic_poly(12) == zvec{1, 0, -1, 0, 1});
}

TEST_CASE("arithmetic in Z[zeta]") {
  cyclo_element i = cyclo_root_power(4, 1);
  CHECK(i * i == cyclo_integer(4, -1));

  // 1 + zeta_3 + zeta_3^2 = 0.
  cyclo_element z3 = cyclo_root_power(3, 1);
  CHECK(cyclo_integer(3, 1) + z3 + z3 * z3 == cyclo_zero(3));

  CHECK(cyclo_conj(cyclo_root_power(5, 1)) == cyclo_root_power(5, 4));
  CHECK(cyclo_root_power(6, 3) == cyclo_integer(6, -1));

  cyclo_element a = cyclo_root_power(8, 1) + cyclo_integer(8, 2);
  cyclo_element b = cyclo_root_power(8, 3) - cyclo_integer(8, 1);
  CHECK((a + b) * a == a * a + b * a);
}

TEST_CASE("quadratic characters are Kronecker symbols") {
  dirichlet_character c8 = quadratic_character(8);
  CHECK(c8.modulus == 8);
  CHECK(c8.order == 2);
  CHECK(c8.is_even());
  CHECK(c8.value(3) == cyclo_integer(2, -1));
  CHECK(c8.value(5) == cyclo_integer(2, -1));
  CHECK(c8.value(7) == cyclo_integer(2, 1));
  CHECK(c8.exponent_at(2) == -1);

  dirichlet_character cm4 = quadratic_character(-4);
  CHECK(!cm4.is_even());
  CHECK(cm4.value(3) == cyclo_integer(2, -1));
  CHECK(cm4.value(5) == cyclo_integer(2, 1));
  CHECK(cm4.value(7) == cyclo_integer(2, -1));

  dirichlet_character cm3 = quadratic_character(-3);
  CHECK(!cm3.is_even());
  CHECK(cm3.value(2) == cyclo_integer(2, -1));
}

TEST_CASE("gauss sums") {
  // tau(chi_{-3})^2 = -3, computed in Z[zeta_6].
  cyclo_element t = gauss_sum(quadratic_character(-3));
  CHECK(t * t == cyclo_integer(t.order, -3));

  cyclo_element t4 = gauss_sum(quadratic_character(-4));
  CHECK(t4 * t4 == cyclo_integer(t4.order, -4));

  // tau(chi) tau(conj chi) = chi(-1) f for every primitive chi of conductor <= 12.
  for (long f = 1; f <= 12; ++f)
    for (const dirichlet_character& chi : enumerate_characters(f, 0)) {
      if (chi.modulus != f) continue;
      cyclo_element lhs = gauss_sum(chi) * gauss_sum(chi.conjugate());
      CHECK(lhs == cyclo_integer(lhs.order, chi.is_even() ? f : -f));
    }
}

TEST_CASE("wild characters") {
  dirichlet_character w = wild_character(5, 1);
  CHECK(w.modulus == 25);
  CHECK(w.order == 5);
  CHECK(w.is_even());
  CHECK(w.exponent_at(6) == 1);  // 6 = (1+5)^1 exactly, omega(6) = 1 in Z_5
  CHECK(w.exponent_at(5) == -1);
  // chi(ab) = chi(a) chi(b) on the exponent table.
  for (long a : {2L, 3L, 7L})
    for (long b : {2L, 11L})
      CHECK((w.exponent_at(a) + w.exponent_at(b)) % 5 == w.exponent_at(a * b));

  dirichlet_character w2 = wild_character(3, 2);
  CHECK(w2.modulus == 27);
  CHECK(w2.order == 9);
  CHECK(w2.exponent_at(4) == 1);
}

TEST_CASE("unit group bases") {
  for (long m : {8L, 15L, 24L, 25L}) {
    unit_group_basis b = unit_group_generators(m);
    long phi = 0;
    for (long a = 1; a < m; ++a)
      if (std::gcd(a, m) == 1) ++phi;
    long prod = std::accumulate(b.orders.begin(), b.orders.end(), 1L,
                                std::multiplies<long>());
    CHECK(prod == phi);
    for (size_t i = 0; i < b.gens.size(); ++i) {
      // The stated order is the exact multiplicative order.
      mpz_class g(b.gens[i]), mm(m), r;
      auto pw = [&](long e) {
        mpz_powm_ui(r.get_mpz_t(), g.get_mpz_t(), static_cast<unsigned long>(e), mm.get_mpz_t());
        return r;
      };
      CHECK(pw(b.orders[i]) == 1);
      for (long q = 2; q <= b.orders[i]; ++q)
        if (b.orders[i] % q == 0) CHECK(pw(b.orders[i] / q) != 1);
    }
  }
}

TEST_CASE("character enumeration") {
  // All characters mod 5 have order dividing 4.
  CHECK(enumerate_characters(5, 4).size() == 4);
  CHECK(enumerate_characters(5, 2).size() == 2);

  std::vector<dirichlet_character> mod8 = enumerate_characters(8, 2);
  CHECK(mod8.size() == 4);
  std::vector<long> conductors;
  for (const auto& chi : mod8) conductors.push_back(chi.modulus);
  std::sort(conductors.begin(), conductors.end());
  CHECK(conductors == std::vector<long>{1, 4, 8, 8});
  auto found = [&](const dirichlet_character& want) {
    for (const auto& chi : mod8)
      if (chi.modulus == want.modulus && chi.order == want.order && chi.exps == want.exps)
        return true;
    return false;
  };
  CHECK(found(quadratic_character(-4)));
  CHECK(found(quadratic_character(8)));
  CHECK(found(quadratic_character(-8)));

  // Each primitive character appears exactly once: moduli divide 12, count by hand.
  // Conductors dividing 12: 1 (1 char), 3 (1), 4 (1), 12 (1). Total 4.
  CHECK(enumerate_characters(12, 0).size() == 4);
}

TEST_CASE("characters from exponent vectors") {
  unit_group_basis b = unit_group_generators(5);
  REQUIRE(b.gens.size() == 1);
  dirichlet_character chi = character_from_exponents(5, {1});
  CHECK(chi.order == 4);
  CHECK(chi.exponent_at(b.gens[0]) == 1);

  // All-zero exponents give the trivial character (primitive quotient).
  CHECK(character_from_exponents(12, {0, 0}).is_trivial());

  // Multiplicativity of the exponent table.
  dirichlet_character c12 = character_from_exponents(12, {1, 1});
  for (long a : {5L, 7L, 11L})
    for (long bb : {5L, 7L, 11L}) {
      long s = (c12.exponent_at(a) + c12.exponent_at(bb)) % c12.order;
      CHECK(s == c12.exponent_at(a * bb % 12));
    }

  dirichlet_character conj = chi.conjugate();
  CHECK(conj.exponent_at(2) == (chi.order - chi.exponent_at(2)) % chi.order);
}

TEST_CASE("p-adic character values") {
  CHECK(padic_embed(cyclo_root_power(4, 1), 5, 2).residue() == 7);  // 7^2 = -1 mod 25
  CHECK_THROWS_AS((void)padic_embed(cyclo_root_power(4, 1), 7, 2), embedding_unsupported);

  // Embedding is a ring map: compare chi(a) embedded elementwise with padic_value.
  dirichlet_character chi = character_from_exponents(5, {1});
  for (long a : {2L, 3L, 4L, 6L}) {
    padic_int direct = padic_value(chi, a, 13, 3);
    padic_int via = padic_embed(chi.value(a), 13, 3);
    CHECK(same_residue(direct, via));
    // Character values are roots of unity: fourth power is 1.
    CHECK(same_residue(direct.pow(4), padic_int(13, 3, 1)));
  }
  CHECK(same_residue(padic_value(quadratic_character(-4), 3, 7, 2), padic_int(7, 2, -1)));
  CHECK(padic_value(chi, 5, 13, 3).is_zero());
}

TEST_CASE("product characters") {
  dirichlet_character prod = product_character(quadratic_character(8), quadratic_character(-3));
  CHECK(prod.modulus == 24);
  CHECK(prod.order == 2);
  CHECK(prod.exponent_at(5) == 0);   // (-1) * (-1)
  CHECK(prod.exponent_at(7) == 0);   // (+1) * (+1), since 7 = 1 mod 3
  CHECK(prod.exponent_at(13) == 1);  // (-1) * (+1)
  CHECK(!prod.is_even());

  dirichlet_character same = product_character(trivial_character(), quadratic_character(8));
  CHECK(same.modulus == 8);
  CHECK(same.exps == quadratic_character(8).exps);
}
