#include "muforge/linalg.hpp"

#include <algorithm>

namespace muforge {

qmat qmat::identity(int n) {
  qmat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

qmat qmat::transposed() const {
  qmat t(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) t.at(j, i) = at(i, j);
  return t;
}

qmat operator*(const qmat& x, const qmat& y) {
  if (x.cols != y.rows) throw bad_input("qmat: dimension mismatch in product");
  qmat out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (int j = 0; j < y.cols; ++j) {
        if (y.at(k, j) == 0) continue;
        out.at(i, j) += x.at(i, k) * y.at(k, j);
      }
    }
  return out;
}

qvec mat_vec(const qmat& m, const qvec& x) {
  if (static_cast<int>(x.size()) != m.cols)
    throw bad_input("apply: dimension mismatch");
  qvec out(static_cast<size_t>(m.rows), 0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.at(i, j) != 0 && x[static_cast<size_t>(j)] != 0)
        out[static_cast<size_t>(i)] += m.at(i, j) * x[static_cast<size_t>(j)];
  return out;
}

std::vector<int> rref(qmat& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    // pick the row with the fewest nonzero entries among candidates: keeps the
    // elimination from densifying more than it must
    int best = -1;
    size_t best_nnz = 0;
    for (int i = row; i < m.rows; ++i) {
      if (m.at(i, col) == 0) continue;
      size_t nnz = 0;
      for (int j = col; j < m.cols; ++j)
        if (m.at(i, j) != 0) ++nnz;
      if (best < 0 || nnz < best_nnz) {
        best = i;
        best_nnz = nnz;
      }
    }
    if (best < 0) continue;
    std::swap(m.a[static_cast<size_t>(row)], m.a[static_cast<size_t>(best)]);
    mpq_class inv = 1 / m.at(row, col);
    for (int j = col; j < m.cols; ++j) m.at(row, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      mpq_class f = m.at(i, col);
      for (int j = col; j < m.cols; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

qmat kernel(const qmat& m) {
  qmat r = m;
  std::vector<int> piv = rref(r);
  std::vector<bool> is_piv(static_cast<size_t>(m.cols), false);
  for (int c : piv) is_piv[static_cast<size_t>(c)] = true;
  std::vector<int> free_cols;
  for (int c = 0; c < m.cols; ++c)
    if (!is_piv[static_cast<size_t>(c)]) free_cols.push_back(c);
  qmat out(m.cols, static_cast<int>(free_cols.size()));
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int fc = free_cols[k];
    out.at(fc, static_cast<int>(k)) = 1;
    for (size_t i = 0; i < piv.size(); ++i)
      out.at(piv[i], static_cast<int>(k)) = -r.at(static_cast<int>(i), fc);
  }
  return out;
}

std::vector<zvec> kernel_lattice(const std::vector<zvec>& m, int cols) {
  // Column reduction by unimodular operations, mirrored on an identity block;
  // mirror columns under the zero columns of the reduced matrix generate the
  // kernel lattice exactly.
  int rows = static_cast<int>(m.size());
  std::vector<zvec> a = m;
  for (auto& r : a)
    if (static_cast<int>(r.size()) != cols)
      throw bad_input("kernel_lattice: ragged matrix");
  std::vector<zvec> u(static_cast<size_t>(cols), zvec(static_cast<size_t>(cols), 0));
  for (int i = 0; i < cols; ++i) u[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;

  auto col_is_zero = [&](int c, int from_row) {
    for (int i = from_row; i < rows; ++i)
      if (a[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) return false;
    return true;
  };
  auto add_col = [&](int dst, int src, const mpz_class& f) {
    for (int i = 0; i < rows; ++i)
      a[static_cast<size_t>(i)][static_cast<size_t>(dst)] +=
          f * a[static_cast<size_t>(i)][static_cast<size_t>(src)];
    for (int i = 0; i < cols; ++i)
      u[static_cast<size_t>(i)][static_cast<size_t>(dst)] +=
          f * u[static_cast<size_t>(i)][static_cast<size_t>(src)];
  };
  auto swap_col = [&](int x, int y) {
    if (x == y) return;
    for (int i = 0; i < rows; ++i)
      std::swap(a[static_cast<size_t>(i)][static_cast<size_t>(x)],
                a[static_cast<size_t>(i)][static_cast<size_t>(y)]);
    for (int i = 0; i < cols; ++i)
      std::swap(u[static_cast<size_t>(i)][static_cast<size_t>(x)],
                u[static_cast<size_t>(i)][static_cast<size_t>(y)]);
  };

  int lead = 0;  // next column to place a pivot in
  for (int r = 0; r < rows && lead < cols; ++r) {
    // Euclidean elimination across columns lead..cols-1 on row r.
    while (true) {
      int nz = -1;
      for (int c = lead; c < cols; ++c)
        if (a[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0) {
          if (nz < 0 ||
              cmp(abs(a[static_cast<size_t>(r)][static_cast<size_t>(c)]),
                  abs(a[static_cast<size_t>(r)][static_cast<size_t>(nz)])) < 0)
            nz = c;
        }
      if (nz < 0) break;  // row r is zero on the active block
      swap_col(lead, nz);
      bool clean = true;
      for (int c = lead + 1; c < cols; ++c) {
        mpz_class v = a[static_cast<size_t>(r)][static_cast<size_t>(c)];
        if (v == 0) continue;
        mpz_class q = v / a[static_cast<size_t>(r)][static_cast<size_t>(lead)];
        if (q != 0) add_col(c, lead, -q);
        if (a[static_cast<size_t>(r)][static_cast<size_t>(c)] != 0) clean = false;
      }
      if (clean) {
        ++lead;
        break;
      }
    }
  }
  std::vector<zvec> basis;
  for (int c = lead; c < cols; ++c) {
    if (!col_is_zero(c, 0)) continue;  // cannot happen once lead passed all rows
    zvec v(static_cast<size_t>(cols));
    for (int i = 0; i < cols; ++i)
      v[static_cast<size_t>(i)] = u[static_cast<size_t>(i)][static_cast<size_t>(c)];
    basis.push_back(std::move(v));
  }
  return basis;
}

mpq_class rational_content(const qvec& v) {
  mpz_class num_gcd = 0, den_lcm = 1;
  for (const auto& x : v) {
    if (x == 0) continue;
    mpz_class n = abs(x.get_num());
    mpz_class d = x.get_den();
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
  }
  if (num_gcd == 0) return 0;
  // gcd over Q of n_i/d_i: gcd(n_i * (L/d_i)) / L with L = lcm(d_i)
  mpz_class g = 0;
  for (const auto& x : v) {
    if (x == 0) continue;
    mpz_class scaled = abs(x.get_num()) * (den_lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
  }
  mpq_class out(g, den_lcm);
  out.canonicalize();
  return out;
}

}  // namespace muforge
