#pragma once

#include <gmpxx.h>

#include <vector>

#include "muforge/errors.hpp"

namespace muforge {

using qvec = std::vector<mpq_class>;
using zvec = std::vector<mpz_class>;

// Dense matrix over Q. Sizes in this project stay in the low hundreds, so plain
// rows of mpq with exact Gauss-Jordan are comfortably fast and, unlike floating
// point, never lie.
struct qmat {
  int rows = 0, cols = 0;
  std::vector<qvec> a;

  qmat() = default;
  qmat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r), qvec(static_cast<size_t>(c), 0)) {}
  mpq_class& at(int i, int j) { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  const mpq_class& at(int i, int j) const { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

  static qmat identity(int n);
  qmat transposed() const;
};

qmat operator*(const qmat& x, const qmat& y);

// In-place reduced row echelon form; returns the pivot columns in order.
std::vector<int> rref(qmat& m);

// Basis of the right kernel {x : Mx = 0}, as columns of the returned matrix.
qmat kernel(const qmat& m);

// Basis of {x : Mx = 0, x in Z^n} as columns; integer column reduction, so the
// result generates the full (saturated) kernel lattice, not just a Q-basis.
std::vector<zvec> kernel_lattice(const std::vector<zvec>& m, int cols);

// Positive generator of the fractional ideal generated by the entries
// (gcd of numerators over lcm of denominators); zero for an all-zero list.
mpq_class rational_content(const qvec& v);

// Multiply a matrix by a column vector.
qvec mat_vec(const qmat& m, const qvec& x);

}  // namespace muforge
