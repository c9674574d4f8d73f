#pragma once

#include <stdexcept>
#include <string>

namespace muforge {

// Base class for all failures this library raises on purpose. Everything that can
// go wrong for a mathematical reason (as opposed to a caller bug) derives from it,
// so the CLI can map the whole family onto one exit code.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Inversion or Teichmuller lift requested for a residue divisible by p.
struct not_a_unit : error {
  explicit not_a_unit(const std::string& what) : error(what) {}
};

// p | a_p (or p | N where good ordinary reduction is required).
struct ordinarity_violation : error {
  explicit ordinarity_violation(const std::string& what) : error(what) {}
};

// A computation ran out of certified p-adic digits before producing its result.
struct precision_exhausted : error {
  explicit precision_exhausted(const std::string& what) : error(what) {}
};

// A result is needed modulo p^i but its inputs are only certified below p^i.
struct precision_insufficient : error {
  explicit precision_insufficient(const std::string& what) : error(what) {}
};

// Weierstrass model with zero discriminant, or conductor whose support does not
// divide the discriminant, or coefficients otherwise outside the supported range.
struct invalid_model : error {
  explicit invalid_model(const std::string& what) : error(what) {}
};

// No functional with the requested Hecke eigenvalues exists at this level.
struct eigenline_not_found : error {
  explicit eigenline_not_found(const std::string& what) : error(what) {}
};

// The eigenvalue system did not cut the dual space down to one line.
struct eigenline_not_unique : error {
  explicit eigenline_not_unique(const std::string& what) : error(what) {}
};

// Character parity does not match the requested symbol sign.
struct parity_mismatch : error {
  explicit parity_mismatch(const std::string& what) : error(what) {}
};

// Consecutive theta levels never agreed to the requested precision.
struct stabilization_failed : error {
  explicit stabilization_failed(const std::string& what) : error(what) {}
};

// A rational that should have been p-integral has p in its denominator.
struct non_integral_value : error {
  explicit non_integral_value(const std::string& what) : error(what) {}
};

// A cyclotomic value cannot be mapped into the requested p-adic ring (its order
// is divisible neither by p alone nor by a divisor of p - 1 alone).
struct embedding_unsupported : error {
  explicit embedding_unsupported(const std::string& what) : error(what) {}
};

// Catch-all for violated preconditions (caller passed nonsense).
struct bad_input : error {
  explicit bad_input(const std::string& what) : error(what) {}
};

}  // namespace muforge
