#include "muforge/dirichlet.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <utility>

#include "muforge/errors.hpp"

namespace muforge {

namespace {

long mod_pos_z(const mpz_class& a, long m) {
  mpz_class r;
  mpz_class mm(m);
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), mm.get_mpz_t());
  return r.get_si();
}

zvec poly_trimmed(zvec v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

zvec poly_mul(const zvec& a, const zvec& b) {
  if (a.empty() || b.empty()) return {};
  zvec out(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

// Division by a monic polynomial; returns the quotient, leaves the remainder in num.
zvec poly_divmod_monic(zvec& num, const zvec& den) {
  if (den.empty() || den.back() != 1) throw bad_input("poly_divmod_monic: divisor not monic");
  long dd = static_cast<long>(den.size()) - 1;
  long dn = static_cast<long>(num.size()) - 1;
  if (dn < dd) return {};
  zvec quot(static_cast<size_t>(dn - dd + 1), 0);
  for (long i = dn - dd; i >= 0; --i) {
    mpz_class c = num[static_cast<size_t>(i + dd)];
    if (c == 0) continue;
    quot[static_cast<size_t>(i)] = c;
    for (long j = 0; j <= dd; ++j) num[static_cast<size_t>(i + j)] -= c * den[static_cast<size_t>(j)];
  }
  num = poly_trimmed(std::move(num));
  return quot;
}

zvec poly_mod(zvec num, const zvec& den) {
  poly_divmod_monic(num, den);
  return num;
}

const zvec& cyclotomic_cached(long D);

zvec cyclotomic_compute(long D) {
  // Phi_D = (x^D - 1) / prod_{d | D, d < D} Phi_d, exact at every step.
  zvec num(static_cast<size_t>(D) + 1, 0);
  num[0] = -1;
  num[static_cast<size_t>(D)] = 1;
  for (long d = 1; d < D; ++d) {
    if (D % d != 0) continue;
    zvec q = poly_divmod_monic(num, cyclotomic_cached(d));
    if (!num.empty()) throw bad_input("cyclotomic_compute: inexact division");
    num = std::move(q);
  }
  return num;
}

const zvec& cyclotomic_cached(long D) {
  // cyclotomic_compute re-enters this function for the proper divisors, hence
  // the recursive mutex. Map nodes are stable, so returned references survive
  // later insertions.
  static std::map<long, zvec> cache;
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lk(mu);
  auto it = cache.find(D);
  if (it != cache.end()) return it->second;
  zvec v = cyclotomic_compute(D);
  return cache.emplace(D, std::move(v)).first->second;
}

cyclo_element cyclo_from_poly(long D, zvec poly) {
  const zvec& phi = cyclotomic_cached(D);
  zvec r = poly_mod(std::move(poly), phi);
  r.resize(phi.size() - 1, 0);
  return cyclo_element{D, std::move(r)};
}

long mulmod_l(long a, long b, long m) {
  return static_cast<long>((static_cast<__int128>(a) * b) % m);
}

long powmod_l(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_l(r, b, m);
    b = mulmod_l(b, b, m);
    e >>= 1;
  }
  return r;
}

std::vector<long> prime_factors_l(long n) {
  std::vector<long> out;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) out.push_back(n);
  return out;
}

// Smallest generator of the cyclic group (Z/q^e)^*, q an odd prime.
long primitive_root_pp(long q, int e) {
  long Q = 1;
  for (int i = 0; i < e; ++i) Q *= q;
  long phi = Q / q * (q - 1);
  std::vector<long> rs = prime_factors_l(phi);
  for (long cand = 2; cand < Q; ++cand) {
    if (cand % q == 0) continue;
    bool ok = true;
    for (long r : rs)
      if (powmod_l(cand, phi / r, Q) == 1) {
        ok = false;
        break;
      }
    if (ok) return cand;
  }
  throw bad_input("primitive_root_pp: no generator found");
}

long primitive_root_mod(long p) { return primitive_root_pp(p, 1); }

// Discrete logs of every unit mod m with respect to the generator basis,
// built by walking the whole group once (fine at the moduli we handle).
std::map<long, std::vector<long>> unit_dlog_table(long m, const unit_group_basis& B) {
  std::map<long, std::vector<long>> table;
  size_t k = B.gens.size();
  std::vector<long> t(k, 0);
  while (true) {
    long r = 1 % m;
    for (size_t i = 0; i < k; ++i) r = mulmod_l(r, powmod_l(B.gens[i], t[i], m), m);
    table[r] = t;
    size_t i = 0;
    for (; i < k; ++i) {
      if (++t[i] < B.orders[i]) break;
      t[i] = 0;
    }
    if (i == k) break;
  }
  return table;
}

// Character mod m determined by chi(g_i) = zeta_{orders[i]}^{tvec[i]}, reduced
// to the primitive character inducing it.
dirichlet_character build_from_tuple(long m, const unit_group_basis& B,
                                     const std::map<long, std::vector<long>>& dlog,
                                     const std::vector<long>& tvec) {
  long L = 1;
  for (long o : B.orders) L = std::lcm(L, o);
  std::vector<long> exps(static_cast<size_t>(m), -1);
  if (m == 1) exps.assign(1, 0);
  for (const auto& [r, t] : dlog) {
    long e = 0;
    for (size_t i = 0; i < t.size(); ++i)
      e = (e + mulmod_l(t[i] % B.orders[i], tvec[i] % B.orders[i], L) % L * (L / B.orders[i])) % L;
    exps[static_cast<size_t>(r)] = e;
  }
  long g = L;
  for (long e : exps)
    if (e > 0) g = std::gcd(g, e);
  long order = (g == 0) ? 1 : L / g;
  if (order > 1)
    for (long& e : exps)
      if (e > 0) e /= g;
  // conductor: smallest f | m with chi trivial on units congruent to 1 mod f
  for (long f = 1; f <= m; ++f) {
    if (m % f != 0) continue;
    bool trivial_on_fiber = true;
    for (long a = 1; a < m && trivial_on_fiber; a += f)
      if (exps[static_cast<size_t>(a)] > 0) trivial_on_fiber = false;
    if (m == 1) trivial_on_fiber = true;
    if (!trivial_on_fiber) continue;
    dirichlet_character out;
    out.modulus = f;
    out.order = order;
    out.exps.assign(static_cast<size_t>(f), -1);
    for (long b = 0; b < f; ++b) {
      if (std::gcd(b, f) != 1 && f > 1) continue;
      long lift = b;
      while (std::gcd(lift == 0 ? m : lift, m) != 1) lift += f;
      out.exps[static_cast<size_t>(b)] = exps[static_cast<size_t>(lift % m)];
    }
    if (f == 1) out.exps.assign(1, 0);
    return out;
  }
  throw bad_input("build_from_tuple: conductor search failed");
}

bool squarefree_long(long n) {
  if (n < 0) n = -n;
  for (long q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return false;
  return true;
}

}  // namespace

zvec cyclotomic_poly(long D) {
  if (D < 1) throw bad_input("cyclotomic_poly: order must be positive");
  return cyclotomic_cached(D);
}

cyclo_element cyclo_zero(long D) {
  return cyclo_element{D, zvec(cyclotomic_cached(D).size() - 1, 0)};
}

cyclo_element cyclo_integer(long D, const mpz_class& n) {
  cyclo_element e = cyclo_zero(D);
  if (e.c.empty()) throw bad_input("cyclo_integer: degenerate order");
  e.c[0] = n;
  if (D == 1) return e;  // Phi_1 = x - 1, so the constant already is the value
  return e;
}

cyclo_element cyclo_root_power(long D, long e) {
  long r = e % D;
  if (r < 0) r += D;
  zvec mono(static_cast<size_t>(r) + 1, 0);
  mono[static_cast<size_t>(r)] = 1;
  return cyclo_from_poly(D, std::move(mono));
}

cyclo_element operator+(const cyclo_element& a, const cyclo_element& b) {
  if (a.order != b.order) throw bad_input("cyclo +: mixed orders");
  cyclo_element out = a;
  for (size_t i = 0; i < out.c.size(); ++i) out.c[i] += b.c[i];
  return out;
}

cyclo_element operator-(const cyclo_element& a, const cyclo_element& b) {
  if (a.order != b.order) throw bad_input("cyclo -: mixed orders");
  cyclo_element out = a;
  for (size_t i = 0; i < out.c.size(); ++i) out.c[i] -= b.c[i];
  return out;
}

cyclo_element operator*(const cyclo_element& a, const cyclo_element& b) {
  if (a.order != b.order) throw bad_input("cyclo *: mixed orders");
  return cyclo_from_poly(a.order, poly_mul(a.c, b.c));
}

cyclo_element cyclo_conj(const cyclo_element& a) {
  cyclo_element out = cyclo_zero(a.order);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    cyclo_element t = cyclo_root_power(a.order, -static_cast<long>(i));
    for (size_t j = 0; j < out.c.size(); ++j) out.c[j] += a.c[i] * t.c[j];
  }
  return out;
}

long dirichlet_character::exponent_at(const mpz_class& a) const {
  return exps[static_cast<size_t>(mod_pos_z(a, modulus))];
}

cyclo_element dirichlet_character::value(const mpz_class& a) const {
  long e = exponent_at(a);
  if (e < 0) return cyclo_zero(order);
  return cyclo_root_power(order, e);
}

bool dirichlet_character::is_even() const {
  return exps[static_cast<size_t>(mod_pos_z(mpz_class(-1), modulus))] == 0;
}

dirichlet_character dirichlet_character::conjugate() const {
  dirichlet_character out = *this;
  for (auto& e : out.exps)
    if (e > 0) e = order - e;
  return out;
}

dirichlet_character trivial_character() { return dirichlet_character{}; }

dirichlet_character quadratic_character(long d) {
  if (d == 1) return trivial_character();
  long m4 = ((d % 4) + 4) % 4;
  bool fundamental = false;
  if (m4 == 1) fundamental = squarefree_long(d);
  else if (m4 == 0) {
    long q = d / 4;
    long q4 = ((q % 4) + 4) % 4;
    fundamental = (q4 == 2 || q4 == 3) && squarefree_long(q);
  }
  if (d == 0 || !fundamental)
    throw bad_input("quadratic_character: " + std::to_string(d) + " is not a fundamental discriminant");
  dirichlet_character chi;
  chi.modulus = d > 0 ? d : -d;
  chi.order = 2;
  chi.exps.assign(static_cast<size_t>(chi.modulus), -1);
  mpz_class dz(d);
  for (long a = 0; a < chi.modulus; ++a) {
    mpz_class az(a);
    int k = mpz_kronecker(dz.get_mpz_t(), az.get_mpz_t());
    if (k == 1) chi.exps[static_cast<size_t>(a)] = 0;
    else if (k == -1) chi.exps[static_cast<size_t>(a)] = 1;
  }
  return chi;
}

dirichlet_character wild_character(long p, int k) {
  if (p < 3 || k < 1) throw bad_input("wild_character: need an odd prime and k >= 1");
  long pk = 1, q = p;
  for (int i = 0; i < k; ++i) {
    pk *= p;
    q *= p;
    if (q > (1L << 40)) throw bad_input("wild_character: modulus out of range");
  }
  // discrete log table of 1 + p, which generates the principal units mod p^{k+1}
  std::map<long, long> log1p;
  long cur = 1;
  for (long j = 0; j < pk; ++j) {
    log1p[cur] = j;
    cur = static_cast<long>((static_cast<__int128>(cur) * (1 + p)) % q);
  }
  dirichlet_character rho;
  rho.modulus = q;
  rho.order = pk;
  rho.exps.assign(static_cast<size_t>(q), -1);
  for (long a = 1; a < q; ++a) {
    if (a % p == 0) continue;
    padic_int om = teichmuller(a, p, k + 1);
    padic_int u = padic_int(p, k + 1, a) * om.unit_inverse();
    auto it = log1p.find(u.residue().get_si());
    if (it == log1p.end()) throw bad_input("wild_character: unit outside the principal subgroup");
    rho.exps[static_cast<size_t>(a)] = it->second;
  }
  return rho;
}

dirichlet_character product_character(const dirichlet_character& c1,
                                      const dirichlet_character& c2) {
  if (std::gcd(c1.modulus, c2.modulus) != 1)
    throw bad_input("product_character: moduli must be coprime");
  dirichlet_character out;
  out.modulus = c1.modulus * c2.modulus;
  out.order = std::lcm(c1.order, c2.order);
  out.exps.assign(static_cast<size_t>(out.modulus), -1);
  for (long a = 0; a < out.modulus; ++a) {
    long e1 = c1.exps[static_cast<size_t>(a % c1.modulus)];
    long e2 = c2.exps[static_cast<size_t>(a % c2.modulus)];
    if (e1 < 0 || e2 < 0) continue;
    out.exps[static_cast<size_t>(a)] = (e1 * (out.order / c1.order) + e2 * (out.order / c2.order)) % out.order;
  }
  return out;
}

cyclo_element gauss_sum(const dirichlet_character& chi) {
  long f = chi.modulus, m = chi.order;
  long L = std::lcm(f, m);
  cyclo_element s = cyclo_zero(L);
  for (long a = 0; a < f; ++a) {
    long e = chi.exps[static_cast<size_t>(a)];
    if (e < 0) continue;
    s = s + cyclo_root_power(L, e * (L / m) + a * (L / f));
  }
  return s;
}

unit_group_basis unit_group_generators(long m) {
  if (m <= 0) throw bad_input("unit_group_generators: modulus must be positive");
  if (m > 2'000'000) throw bad_input("unit_group_generators: modulus too large");
  unit_group_basis out;
  long rest = m;
  std::vector<std::pair<long, int>> fac;
  for (long q = 2; q * q <= rest; ++q)
    if (rest % q == 0) {
      int e = 0;
      while (rest % q == 0) {
        rest /= q;
        ++e;
      }
      fac.emplace_back(q, e);
    }
  if (rest > 1) fac.emplace_back(rest, 1);
  auto crt_lift = [m](long g, long Q) {
    // x = g mod Q, x = 1 mod m/Q
    long M = m / Q;
    if (M == 1) return g % m;
    mpz_class inv;
    mpz_class Mz = M, Qz = Q;
    if (mpz_invert(inv.get_mpz_t(), Mz.get_mpz_t(), Qz.get_mpz_t()) == 0)
      throw bad_input("unit_group_generators: CRT lift failed");
    mpz_class t = (mpz_class(g) - 1) * inv % Qz;
    if (t < 0) t += Qz;
    mpz_class x = (1 + Mz * t) % m;
    return x.get_si();
  };
  for (auto [q, e] : fac) {
    long Q = 1;
    for (int i = 0; i < e; ++i) Q *= q;
    if (q == 2) {
      if (e == 1) continue;  // single invertible residue
      if (e == 2) {
        out.gens.push_back(crt_lift(3, 4));
        out.orders.push_back(2);
      } else {
        out.gens.push_back(crt_lift(Q - 1, Q));
        out.orders.push_back(2);
        out.gens.push_back(crt_lift(5, Q));
        out.orders.push_back(Q / 4);
      }
    } else {
      out.gens.push_back(crt_lift(primitive_root_pp(q, e), Q));
      out.orders.push_back(Q / q * (q - 1));
    }
  }
  return out;
}

std::vector<dirichlet_character> enumerate_characters(long m, long order_divides) {
  unit_group_basis B = unit_group_generators(m);
  std::map<long, std::vector<long>> dlog = unit_dlog_table(m, B);
  if (dlog.size() > 1'000'000) throw bad_input("enumerate_characters: group too large");
  std::vector<dirichlet_character> out;
  size_t k = B.gens.size();
  std::vector<long> tvec(k, 0);
  while (true) {
    bool admissible = true;
    for (size_t i = 0; i < k && admissible; ++i) {
      long comp_order = B.orders[i] / std::gcd(B.orders[i], tvec[i]);
      if (order_divides > 0 && order_divides % comp_order != 0) admissible = false;
    }
    if (admissible) out.push_back(build_from_tuple(m, B, dlog, tvec));
    size_t i = 0;
    for (; i < k; ++i) {
      if (++tvec[i] < B.orders[i]) break;
      tvec[i] = 0;
    }
    if (i == k) break;
  }
  std::sort(out.begin(), out.end(), [](const dirichlet_character& a, const dirichlet_character& b) {
    if (a.modulus != b.modulus) return a.modulus < b.modulus;
    if (a.order != b.order) return a.order < b.order;
    return a.exps < b.exps;
  });
  return out;
}

dirichlet_character character_from_exponents(long m, const std::vector<long>& evec) {
  unit_group_basis B = unit_group_generators(m);
  if (evec.size() != B.gens.size())
    throw bad_input("character_from_exponents: expected " + std::to_string(B.gens.size()) +
                    " exponents for modulus " + std::to_string(m));
  std::vector<long> tvec(evec.size());
  for (size_t i = 0; i < evec.size(); ++i) {
    long t = evec[i] % B.orders[i];
    tvec[i] = t < 0 ? t + B.orders[i] : t;
  }
  return build_from_tuple(m, B, unit_dlog_table(m, B), tvec);
}

padic_int padic_value(const dirichlet_character& chi, const mpz_class& a, long p, int prec) {
  long e = chi.exponent_at(a);
  if (e < 0) return padic_int(p, prec, 0);
  if (chi.order == 1) return padic_int(p, prec, 1);
  if ((p - 1) % chi.order != 0)
    throw bad_input("padic_value: character order does not divide p - 1");
  unsigned long expo = static_cast<unsigned long>(((p - 1) / chi.order) * e);
  return teichmuller(primitive_root_mod(p), p, prec).pow(expo);
}

padic_int padic_embed(const cyclo_element& a, long p, int prec) {
  long D = a.order;
  if (D < 1 || (p - 1) % D != 0)
    throw embedding_unsupported("padic_embed: order " + std::to_string(D) +
                                " does not divide " + std::to_string(p - 1));
  padic_int zeta = (D == 1) ? padic_int(p, prec, 1)
                            : teichmuller(primitive_root_mod(p), p, prec)
                                  .pow(static_cast<unsigned long>((p - 1) / D));
  padic_int acc(p, prec, 0);
  padic_int pw(p, prec, 1);
  for (const mpz_class& cj : a.c) {
    acc = acc + pw * padic_int(p, prec, cj);
    pw = pw * zeta;
  }
  return acc;
}

}  // namespace muforge
