#include "muforge/manin.hpp"

#include <algorithm>
#include <numeric>

#include "muforge/errors.hpp"

namespace muforge {

namespace {

long mod_pos(long a, long n) {
  long r = a % n;
  return r < 0 ? r + n : r;
}

// Extended gcd: returns g >= 0 and sets s, t with s*a + t*b = g.
long xgcd_long(long a, long b, long& s, long& t) {
  long r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
  while (r1 != 0) {
    long q = r0 / r1;
    long tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = s0 - q * s1;
    s0 = s1;
    s1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (r0 < 0) {
    r0 = -r0;
    s0 = -s0;
    t0 = -t0;
  }
  s = s0;
  t = t0;
  return r0;
}

}  // namespace

p1_space::p1_space(long N) : n_(N) {
  if (N < 1) throw bad_input("p1_space: level must be positive");
  if (N == 1) {
    // Store the primitive lift (0, 1) so downstream boundary lifts stay valid.
    reps_.emplace_back(0, 1);
    lookup_[{0, 1}] = 0;
    return;
  }
  // Every class has a canonical representative whose first coordinate divides N,
  // so scanning (g : d) over divisors g and all d hits each class at least once.
  for (long g = 1; g <= N; ++g) {
    if (N % g != 0) continue;
    for (long d = 0; d < N; ++d) {
      auto r = normalize(g, d);
      if (r.second < 0) continue;
      if (lookup_.emplace(r, static_cast<long>(reps_.size())).second) reps_.push_back(r);
    }
  }
}

std::pair<long, long> p1_space::normalize(long c, long d) const {
  const long N = n_;
  if (N == 1) return {0, 1};
  c = mod_pos(c, N);
  d = mod_pos(d, N);
  if (c == 0) {
    if (std::gcd(d, N) != 1) return {0, -1};
    return {0, 1};
  }
  long s, t;
  long g = xgcd_long(c, N, s, t);  // s*c == g (mod N)
  if (std::gcd(g, d) != 1) return {0, -1};
  // s is a unit mod N/g; bump it by multiples of N/g until it is a unit mod N
  // (this keeps s*c == g mod N because c*(N/g) == 0 mod N).
  const long Ng = N / g;
  s = mod_pos(s, N);
  while (std::gcd(s, N) != 1) s = (s + Ng) % N;
  long v = static_cast<long>((static_cast<__int128>(s) * d) % N);
  // The units fixing the first coordinate g are exactly t == 1 (mod N/g); pick
  // the lift of the class with the smallest second coordinate.
  long min_v = v;
  long vstep = static_cast<long>((static_cast<__int128>(v) * Ng) % N);
  long tcur = 1, vcur = v;
  for (long k = 2; k <= g; ++k) {
    vcur = (vcur + vstep) % N;
    tcur = (tcur + Ng) % N;
    if (vcur < min_v && std::gcd(tcur, N) == 1) min_v = vcur;
  }
  return {g, min_v};
}

long p1_space::index(long c, long d) const {
  auto r = normalize(c, d);
  if (r.second < 0) return -1;
  auto it = lookup_.find(r);
  if (it == lookup_.end()) throw bad_input("p1_space: normalized pair missing from table");
  return it->second;
}

cusp_classes::cusp_classes(long N) : n_(N) {
  if (N < 1) throw bad_input("cusp_classes: level must be positive");
}

bool cusp_classes::equivalent_(const std::pair<mpz_class, mpz_class>& x,
                               const std::pair<mpz_class, mpz_class>& y) const {
  const mpz_class &p1 = x.first, &q1 = x.second, &p2 = y.first, &q2 = y.second;
  // s_j p_j == 1 (mod q_j); the test below does not depend on the choice of lift.
  auto inv_mod = [](const mpz_class& p, const mpz_class& q) -> mpz_class {
    if (q == 0) return p;  // reduced fraction with q = 0 has p = +-1, its own inverse
    if (q == 1) return 0;
    mpz_class s;
    if (mpz_invert(s.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t()) == 0)
      throw bad_input("cusp_classes: fraction not in lowest terms");
    return s;
  };
  mpz_class g = gcd(q1 * q2, mpz_class(n_));
  mpz_class lhs = inv_mod(p1, q1) * q2 - inv_mod(p2, q2) * q1;
  return mpz_divisible_p(lhs.get_mpz_t(), g.get_mpz_t()) != 0;
}

long cusp_classes::index(const mpz_class& a_in, const mpz_class& c_in) {
  mpz_class a = a_in, c = c_in;
  if (c < 0) {
    a = -a;
    c = -c;
  }
  mpz_class g = gcd(a, c);
  if (g == 0) throw bad_input("cusp_classes: 0/0 is not a cusp");
  a /= g;
  c /= g;
  if (c == 0 && a < 0) a = -a;
  std::pair<mpz_class, mpz_class> cu{a, c};
  for (size_t i = 0; i < reps_.size(); ++i)
    if (equivalent_(reps_[i], cu)) return static_cast<long>(i);
  reps_.push_back(cu);
  return static_cast<long>(reps_.size()) - 1;
}

std::shared_ptr<const manin_basis> build_space(long N) {
  auto out = std::make_shared<manin_basis>(N);
  manin_basis& mb = *out;
  mb.level = N;
  const p1_space& p1 = mb.p1;
  const long n = p1.size();

  // sigma: (c:d) -> (d:-c) reverses a path, tau: (c:d) -> (d:-c-d) rotates the
  // ideal triangle; x + x.sigma = 0 and x + x.tau + x.tau^2 = 0 present the
  // quotient. One row per orbit is enough.
  std::vector<qvec> rows;
  for (long i = 0; i < n; ++i) {
    auto [c, d] = p1.rep(i);
    long is = p1.index(d, -c);
    if (is < 0) throw bad_input("manin relations: sigma left the space");
    if (i <= is) {
      qvec row(static_cast<size_t>(n), 0);
      row[static_cast<size_t>(i)] += 1;
      row[static_cast<size_t>(is)] += 1;
      rows.push_back(std::move(row));
    }
    long it1 = p1.index(d, -c - d);
    long it2 = p1.index(-c - d, c);
    if (it1 < 0 || it2 < 0) throw bad_input("manin relations: tau left the space");
    if (i <= it1 && i <= it2) {
      qvec row(static_cast<size_t>(n), 0);
      row[static_cast<size_t>(i)] += 1;
      row[static_cast<size_t>(it1)] += 1;
      row[static_cast<size_t>(it2)] += 1;
      rows.push_back(std::move(row));
    }
  }
  qmat rel(static_cast<int>(rows.size()), static_cast<int>(n));
  for (size_t r = 0; r < rows.size(); ++r) rel.a[r] = rows[r];
  std::vector<int> pivots = rref(rel);

  std::vector<bool> is_pivot(static_cast<size_t>(n), false);
  for (int pc : pivots) is_pivot[static_cast<size_t>(pc)] = true;
  std::vector<int> free_cols;
  for (long j = 0; j < n; ++j)
    if (!is_pivot[static_cast<size_t>(j)]) free_cols.push_back(static_cast<int>(j));

  mb.dim = static_cast<int>(free_cols.size());
  mb.basis_gens = free_cols;
  std::vector<int> free_pos(static_cast<size_t>(n), -1);
  for (size_t k = 0; k < free_cols.size(); ++k) free_pos[static_cast<size_t>(free_cols[k])] = static_cast<int>(k);

  mb.gen_image.assign(static_cast<size_t>(n), qvec(static_cast<size_t>(mb.dim), 0));
  for (long j = 0; j < n; ++j) {
    if (!is_pivot[static_cast<size_t>(j)]) {
      mb.gen_image[static_cast<size_t>(j)][static_cast<size_t>(free_pos[static_cast<size_t>(j)])] = 1;
      continue;
    }
    // Pivot generator: read its expression in the free generators off the RREF row.
    int prow = -1;
    for (size_t r = 0; r < pivots.size(); ++r)
      if (pivots[r] == static_cast<int>(j)) prow = static_cast<int>(r);
    for (int k = 0; k < mb.dim; ++k)
      mb.gen_image[static_cast<size_t>(j)][static_cast<size_t>(k)] = -rel.at(prow, free_cols[static_cast<size_t>(k)]);
  }

  // Boundary map. Generator (c:d) lifts to [a b; c d] in SL2(Z) and stands for
  // the geodesic from b/d to a/c, so its boundary is [a/c] - [b/d].
  cusp_classes cc(N);
  std::vector<std::pair<long, long>> ends(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    auto [c, d] = p1.rep(i);
    long x, y;
    long g = xgcd_long(d, c, x, y);  // x*d + y*c = 1 for reduced representatives
    if (g != 1) throw bad_input("manin boundary: representative not primitive");
    long a = x, b = -y;
    long to = cc.index(a, c);
    long from = cc.index(b, d);
    ends[static_cast<size_t>(i)] = {to, from};
  }
  mb.n_cusps = cc.size();
  mb.gen_boundary.assign(static_cast<size_t>(n), qvec(static_cast<size_t>(mb.n_cusps), 0));
  for (long i = 0; i < n; ++i) {
    auto [to, from] = ends[static_cast<size_t>(i)];
    mb.gen_boundary[static_cast<size_t>(i)][static_cast<size_t>(to)] += 1;
    mb.gen_boundary[static_cast<size_t>(i)][static_cast<size_t>(from)] -= 1;
  }

  mb.boundary_on_basis = qmat(static_cast<int>(mb.n_cusps), mb.dim);
  for (int k = 0; k < mb.dim; ++k) {
    const qvec& bd = mb.gen_boundary[static_cast<size_t>(mb.basis_gens[static_cast<size_t>(k)])];
    for (long r = 0; r < mb.n_cusps; ++r) mb.boundary_on_basis.at(static_cast<int>(r), k) = bd[static_cast<size_t>(r)];
  }
  mb.cuspidal_dim = kernel(mb.boundary_on_basis).cols;
  return out;
}

std::vector<std::array<long, 4>> heilbronn_matrices(long ell) {
  if (ell < 2) throw bad_input("heilbronn_matrices: determinant must be >= 2");
  // det = ell with a > b >= 0 and d > c >= 0 forces a + d <= ell + 1, so the scan
  // below over a, b and admissible c terminates quickly.
  std::vector<std::array<long, 4>> out;
  for (long a = 1; a <= ell; ++a)
    for (long b = 0; b < a; ++b)
      for (long c = 0; c * (a - b) < ell; ++c) {
        long num = ell + b * c;
        if (num % a != 0) continue;
        out.push_back({a, b, c, num / a});
      }
  return out;
}

qmat hecke_matrix(const manin_basis& mb, long ell) {
  auto hset = heilbronn_matrices(ell);
  qmat T(mb.dim, mb.dim);
  for (int k = 0; k < mb.dim; ++k) {
    auto [c, d] = mb.p1.rep(mb.basis_gens[static_cast<size_t>(k)]);
    for (const auto& h : hset) {
      // Right action of [a b; c' d'] on the row (c, d).
      long cc = c * h[0] + d * h[2];
      long dd = c * h[1] + d * h[3];
      long idx = mb.p1.index(cc, dd);
      if (idx < 0) continue;  // image not primitive mod N: contributes zero
      const qvec& im = mb.gen_image[static_cast<size_t>(idx)];
      for (int r = 0; r < mb.dim; ++r) T.at(r, k) += im[static_cast<size_t>(r)];
    }
  }
  return T;
}

qmat star_matrix(const manin_basis& mb) {
  qmat S(mb.dim, mb.dim);
  for (int k = 0; k < mb.dim; ++k) {
    auto [c, d] = mb.p1.rep(mb.basis_gens[static_cast<size_t>(k)]);
    long idx = mb.p1.index(-c, d);
    if (idx < 0) throw bad_input("star_matrix: involution left the space");
    const qvec& im = mb.gen_image[static_cast<size_t>(idx)];
    for (int r = 0; r < mb.dim; ++r) S.at(r, k) = im[static_cast<size_t>(r)];
  }
  return S;
}

}  // namespace muforge
