#include "doctest.h"
#include "muforge/manin.hpp"

#include <algorithm>
#include <numeric>
#include <set>

using namespace muforge;

namespace {

std::vector<long> prime_divisors(long n) {
  std::vector<long> ps;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      ps.push_back(p);
      while (n % p == 0) n /= p;
    }
  if (n > 1) ps.push_back(n);
  return ps;
}

long psi_index(long n) {
  long r = n;
  for (long p : prime_divisors(n)) r = r / p * (p + 1);
  return r;
}

long nu2(long n) {
  if (n % 4 == 0) return 0;
  long r = 1;
  for (long p : prime_divisors(n)) {
    if (p == 2) continue;
    r *= 1 + (p % 4 == 1 ? 1 : -1);
  }
  return r;
}

long nu3(long n) {
  if (n % 9 == 0) return 0;
  long r = 1;
  for (long p : prime_divisors(n)) {
    if (p == 3) continue;
    r *= 1 + (p % 3 == 1 ? 1 : -1);
  }
  return r;
}

long euler_phi(long n) {
  long r = n;
  for (long p : prime_divisors(n)) r = r / p * (p - 1);
  return r;
}

long cusp_count(long n) {
  long total = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) total += euler_phi(std::gcd(d, n / d));
  return total;
}

long genus(long n) {
  long twelve_g = 12 + psi_index(n) - 3 * nu2(n) - 4 * nu3(n) - 6 * cusp_count(n);
  REQUIRE(twelve_g % 12 == 0);
  return twelve_g / 12;
}

}  // namespace

TEST_CASE("projective line over Z/N") {
  for (long n : {6L, 11L, 24L, 35L}) {
    p1_space p1(n);
    CHECK(p1.size() == psi_index(n));
    for (long i = 0; i < p1.size(); ++i) {
      auto [c, d] = p1.rep(i);
      CHECK(p1.index(c, d) == i);
      // Scaling by a unit does not move the class.
      long u = 2;
      while (std::gcd(u, n) != 1) ++u;
      CHECK(p1.index(u * c % n, u * d % n) == i);
    }
    CHECK(p1.index(n, n) == -1);  // gcd(c, d, N) > 1
  }
}

TEST_CASE("cusp classification") {
  cusp_classes cc(11);
  CHECK(cc.index(1, 0) == cc.index(2, 11));  // denominators divisible by N sit at oo
  CHECK(cc.index(0, 1) != cc.index(1, 0));
  CHECK(cc.index(0, 1) == cc.index(0, 7));
  CHECK(cc.size() == 2);

  // Every class has a representative a/c with c dividing N, so a sweep over
  // small fractions discovers all of them.
  cusp_classes cc4(4);
  (void)cc4.index(1, 0);
  for (long c = 1; c <= 4; ++c)
    for (long a = 0; a < 4 * c; ++a) (void)cc4.index(a, c);
  CHECK(cc4.size() == cusp_count(4));
}

TEST_CASE("space dimensions match the genus formulas") {
  for (long n : {11L, 14L, 15L, 24L, 30L, 37L, 43L, 49L, 60L}) {
    auto mb = build_space(n);
    long g = genus(n);
    long c = cusp_count(n);
    CHECK(mb->level == n);
    CHECK(mb->cuspidal_dim == 2 * g);
    CHECK(mb->dim == 2 * g + c - 1);
    CHECK(mb->n_cusps == c);
    CHECK(static_cast<long>(mb->gen_image.size()) == mb->p1.size());
  }
}

TEST_CASE("boundaries of generators are degree zero") {
  auto mb = build_space(30);
  for (const qvec& bd : mb->gen_boundary) {
    mpq_class total = std::accumulate(bd.begin(), bd.end(), mpq_class(0));
    CHECK(total == 0);
  }
  CHECK(mb->boundary_on_basis.rows == mb->n_cusps);
  CHECK(mb->boundary_on_basis.cols == mb->dim);
  // The boundary map on the quotient has rank #cusps - 1.
  qmat bd = mb->boundary_on_basis;
  CHECK(static_cast<long>(rref(bd).size()) == mb->n_cusps - 1);
}

TEST_CASE("heilbronn families") {
  std::set<std::array<long, 4>> h2;
  for (const auto& m : heilbronn_matrices(2)) h2.insert(m);
  std::set<std::array<long, 4>> expect = {
      {1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
  CHECK(h2 == expect);

  for (long ell : {3L, 5L, 7L, 13L})
    for (const auto& m : heilbronn_matrices(ell))
      CHECK(m[0] * m[3] - m[1] * m[2] == ell);
}

TEST_CASE("hecke operators commute and respect the star involution") {
  auto mb = build_space(11);
  qmat t2 = hecke_matrix(*mb, 2);
  qmat t3 = hecke_matrix(*mb, 3);
  qmat ab = t2 * t3;
  qmat ba = t3 * t2;
  for (int i = 0; i < ab.rows; ++i)
    for (int j = 0; j < ab.cols; ++j) CHECK(ab.at(i, j) == ba.at(i, j));

  qmat st = star_matrix(*mb);
  qmat st2 = st * st;
  qmat t2s = t2 * st;
  qmat st2b = st * t2;
  for (int i = 0; i < st.rows; ++i)
    for (int j = 0; j < st.cols; ++j) {
      CHECK(st2.at(i, j) == (i == j ? 1 : 0));
      CHECK(t2s.at(i, j) == st2b.at(i, j));
    }
}
