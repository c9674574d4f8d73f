#include "muforge/symbol.hpp"

#include <algorithm>
#include <sstream>

#include "muforge/errors.hpp"

namespace muforge {

namespace {

bool is_prime_long(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Index of Gamma_0(N) in SL2(Z): N * prod_{q | N} (1 + 1/q).
long gamma0_index(long N) {
  long idx = N, m = N;
  for (long q = 2; q * q <= m; ++q) {
    if (m % q != 0) continue;
    idx = idx / q * (q + 1);
    while (m % q == 0) m /= q;
  }
  if (m > 1) idx = idx / m * (m + 1);
  return idx;
}

void rescale(eigen_symbol& s, const mpq_class& f) {
  for (auto& x : s.functional) x *= f;
  for (auto& x : s.gen_values) x *= f;
  s.scale *= f;
}

qvec values_on_generators(const manin_basis& mb, const qvec& phi) {
  qvec out(static_cast<size_t>(mb.p1.size()), 0);
  for (long i = 0; i < mb.p1.size(); ++i) {
    mpq_class acc = 0;
    const qvec& im = mb.gen_image[static_cast<size_t>(i)];
    for (int k = 0; k < mb.dim; ++k)
      if (im[static_cast<size_t>(k)] != 0) acc += phi[static_cast<size_t>(k)] * im[static_cast<size_t>(k)];
    out[static_cast<size_t>(i)] = acc;
  }
  return out;
}

}  // namespace

mpq_class eigen_symbol::eval(const mpq_class& r) const {
  const manin_basis& mb = *space;
  const mpz_class Nz(mb.level);
  // Continued fraction with floor quotients; works for negative r too.
  std::vector<mpz_class> quo;
  mpz_class x = r.get_num(), y = r.get_den();
  while (y != 0) {
    mpz_class q, rem;
    mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    quo.push_back(q);
    x = y;
    y = rem;
  }
  // The path from oo to r runs through the convergents; segment k is the class
  // of the Manin symbol (q_k : (-1)^(k-1) q_{k-1}).
  mpq_class acc = 0;
  mpz_class qprev = 0, qcur = 1;
  for (size_t k = 0; k < quo.size(); ++k) {
    if (k >= 1) {
      mpz_class qnext = quo[k] * qcur + qprev;
      qprev = qcur;
      qcur = qnext;
    }
    mpz_class c = qcur % Nz;
    mpz_class d = ((k % 2 == 0) ? mpz_class(-qprev) : qprev) % Nz;
    long idx = mb.p1.index(c.get_si(), d.get_si());
    if (idx < 0) throw bad_input("eval: non-primitive convergent pair");
    acc += gen_values[static_cast<size_t>(idx)];
  }
  return -acc;  // {r -> oo} = -{oo -> r}
}

eigen_symbol eigen_functional(std::shared_ptr<const manin_basis> space,
                              const curve_data& e, int sign) {
  if (sign != 1 && sign != -1) throw bad_input("eigen_functional: sign must be +1 or -1");
  const manin_basis& mb = *space;
  const long N = mb.level;
  // A level that is not a multiple of the conductor carries no copy of the
  // form at all; proper multiples are allowed through so that the oldform
  // multiplicity surfaces as eigenline_not_unique below.
  mpz_class Nz(N);
  if (!mpz_divisible_p(Nz.get_mpz_t(), e.conductor.get_mpz_t()))
    throw eigenline_not_found("eigen_functional: level " + std::to_string(N) +
                              " is not a multiple of the conductor");

  qmat C = qmat::identity(mb.dim);
  auto cut_by = [&C](qmat M) {
    C = C * kernel(M * C);
  };

  {
    qmat S = star_matrix(mb).transposed();
    for (int i = 0; i < mb.dim; ++i) S.at(i, i) -= sign;
    cut_by(std::move(S));
  }

  // Hecke eigenvalues up to the Sturm bound of the level pin a cusp form, so the
  // isolation loop and the verification pass together make the answer rigorous.
  const long bound = std::max<long>(2, (gamma0_index(N) + 5) / 6);
  std::vector<long> used;
  for (long ell = 2; C.cols > 1 && ell <= bound; ++ell) {
    if (!is_prime_long(ell) || N % ell == 0) continue;
    qmat M = hecke_matrix(mb, ell).transposed();
    mpq_class ap(ap_cache::global().get(e, ell));
    for (int i = 0; i < mb.dim; ++i) M.at(i, i) -= ap;
    cut_by(std::move(M));
    used.push_back(ell);
    if (C.cols == 0)
      throw eigenline_not_found("no eigenfunctional with these traces at level " + std::to_string(N));
  }
  if (C.cols == 0)
    throw eigenline_not_found("star cut is empty at level " + std::to_string(N));
  if (C.cols != 1)
    throw eigenline_not_unique("eigenvalues below the Sturm bound leave " +
                               std::to_string(C.cols) + " dimensions at level " + std::to_string(N));

  qvec phi(static_cast<size_t>(mb.dim));
  for (int i = 0; i < mb.dim; ++i) phi[static_cast<size_t>(i)] = C.at(i, 0);
  mpq_class c = rational_content(phi);
  for (auto& v : phi) v /= c;

  for (long ell = 2; ell <= bound; ++ell) {
    if (!is_prime_long(ell) || N % ell == 0) continue;
    if (std::find(used.begin(), used.end(), ell) != used.end()) continue;
    qvec lhs = mat_vec(hecke_matrix(mb, ell).transposed(), phi);
    mpq_class ap(ap_cache::global().get(e, ell));
    for (int i = 0; i < mb.dim; ++i)
      if (lhs[static_cast<size_t>(i)] != ap * phi[static_cast<size_t>(i)])
        throw eigenline_not_found("trace mismatch at ell = " + std::to_string(ell) +
                                  " for level " + std::to_string(N));
  }

  eigen_symbol s;
  s.curve = e;
  s.sign = sign;
  s.space = std::move(space);
  s.functional = std::move(phi);
  s.gen_values = values_on_generators(mb, s.functional);
  s.scale = 1;
  s.normalized = false;
  return s;
}

void normalize_symbol(eigen_symbol& s) {
  const manin_basis& mb = *s.space;
  const long n = mb.p1.size();
  const int d = mb.dim;

  // Integer vectors y describe formal sums of generators; we want the lattice of
  // those whose class is cuspidal and star-eigen with the symbol's sign.
  std::vector<long> istar(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    auto [c, dd] = mb.p1.rep(i);
    istar[static_cast<size_t>(i)] = mb.p1.index(-c, dd);
  }

  std::vector<zvec> rows;
  for (int r = 0; r < d; ++r) {
    qvec row(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i)
      row[static_cast<size_t>(i)] =
          mb.gen_image[static_cast<size_t>(istar[static_cast<size_t>(i)])][static_cast<size_t>(r)] -
          mpq_class(s.sign) * mb.gen_image[static_cast<size_t>(i)][static_cast<size_t>(r)];
    mpz_class den = 1;
    for (const auto& v : row) den = lcm(den, v.get_den());
    zvec zrow(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
      mpq_class t = row[static_cast<size_t>(i)] * den;
      zrow[static_cast<size_t>(i)] = t.get_num();
    }
    rows.push_back(std::move(zrow));
  }
  for (long r = 0; r < mb.n_cusps; ++r) {
    zvec zrow(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) {
      const mpq_class& v = mb.gen_boundary[static_cast<size_t>(i)][static_cast<size_t>(r)];
      if (v.get_den() != 1) throw bad_input("normalize_symbol: non-integral boundary");
      zrow[static_cast<size_t>(i)] = v.get_num();
    }
    rows.push_back(std::move(zrow));
  }

  std::vector<zvec> lattice = kernel_lattice(rows, static_cast<int>(n));
  if (lattice.empty())
    throw error("normalize_symbol: cuspidal eigenlattice is trivial at level " +
                std::to_string(mb.level));
  qvec vals;
  vals.reserve(lattice.size());
  for (const zvec& yv : lattice) {
    mpq_class acc = 0;
    for (long i = 0; i < n; ++i)
      if (yv[static_cast<size_t>(i)] != 0)
        acc += mpq_class(yv[static_cast<size_t>(i)]) * s.gen_values[static_cast<size_t>(i)];
    vals.push_back(acc);
  }
  mpq_class content = rational_content(vals);
  if (content == 0)
    throw error("normalize_symbol: symbol vanishes on the cuspidal eigenlattice");
  rescale(s, 1 / content);

  mpq_class v0 = s.eval(0);
  if (s.sign == +1 && v0 != 0) {
    if (v0 < 0) rescale(s, -1);
  } else {
    for (const auto& v : s.gen_values) {
      if (v == 0) continue;
      if (v < 0) rescale(s, -1);
      break;
    }
  }
  s.normalized = true;
}

eigen_symbol build_symbol(const curve_data& e, int sign) {
  validate_curve(e);
  if (!e.conductor.fits_slong_p()) throw bad_input("build_symbol: conductor out of range");
  auto space = build_space(e.conductor.get_si());
  eigen_symbol s = eigen_functional(std::move(space), e, sign);
  normalize_symbol(s);
  return s;
}

std::string serialize_symbol(const eigen_symbol& s) {
  std::ostringstream os;
  os << "eigensymbol 1\n";
  os << s.curve.a1 << ' ' << s.curve.a2 << ' ' << s.curve.a3 << ' ' << s.curve.a4 << ' '
     << s.curve.a6 << ' ' << s.curve.conductor << ' '
     << (s.curve.label.empty() ? std::string("-") : s.curve.label) << '\n';
  os << s.sign << ' ' << (s.normalized ? 1 : 0) << ' ' << s.scale << '\n';
  os << s.functional.size();
  for (const auto& v : s.functional) os << ' ' << v;
  os << '\n';
  return os.str();
}

eigen_symbol deserialize_symbol(const std::string& text) {
  std::istringstream is(text);
  std::string magic;
  int version = 0;
  is >> magic >> version;
  if (magic != "eigensymbol" || version != 1)
    throw bad_input("deserialize_symbol: unrecognized header");
  eigen_symbol s;
  std::string label;
  int norm = 0;
  is >> s.curve.a1 >> s.curve.a2 >> s.curve.a3 >> s.curve.a4 >> s.curve.a6 >>
      s.curve.conductor >> label >> s.sign >> norm >> s.scale;
  s.curve.label = (label == "-") ? "" : label;
  s.normalized = norm != 0;
  size_t dim = 0;
  is >> dim;
  s.functional.assign(dim, 0);
  for (size_t i = 0; i < dim; ++i) is >> s.functional[i];
  if (!is) throw bad_input("deserialize_symbol: truncated input");

  if (!s.curve.conductor.fits_slong_p())
    throw bad_input("deserialize_symbol: conductor out of range");
  s.space = build_space(s.curve.conductor.get_si());
  if (static_cast<size_t>(s.space->dim) != dim)
    throw bad_input("deserialize_symbol: dimension does not match the level");
  s.gen_values = values_on_generators(*s.space, s.functional);

  // Cheap staleness check: the claimed functional must still be an eigenline.
  long N = s.space->level;
  for (long ell = 2; ell < 50; ++ell) {
    if (!is_prime_long(ell) || N % ell == 0) continue;
    qvec lhs = mat_vec(hecke_matrix(*s.space, ell).transposed(), s.functional);
    mpq_class ap(ap_cache::global().get(s.curve, ell));
    for (int i = 0; i < s.space->dim; ++i)
      if (lhs[static_cast<size_t>(i)] != ap * s.functional[static_cast<size_t>(i)])
        throw bad_input("deserialize_symbol: cached functional is not an eigenline");
    break;
  }
  return s;
}

}  // namespace muforge
