#pragma once

#include <ostream>

#include "coverlab/natural.hpp"

namespace coverlab {

/// The residue class a(n) = { x : x ≡ a (mod n) }.
struct ResidueClass {
  Integer a;
  Natural n{1};

  /// Membership of x; independent of whether `a` is normalized.
  bool contains(const Integer& x) const {
    Integer diff = x - a;
    return mpz_divisible_p(diff.get_mpz_t(), n.get_mpz_t()) != 0;
  }

  friend bool operator==(const ResidueClass& lhs, const ResidueClass& rhs) {
    return lhs.a == rhs.a && lhs.n == rhs.n;
  }
};

inline std::ostream& operator<<(std::ostream& os, const ResidueClass& c) {
  return os << c.a.get_str() << '(' << c.n.get_str() << ')';
}

/// Reduces the representative into [0, n). Throws on n < 1.
inline ResidueClass normalize(const ResidueClass& c) {
  if (sgn(c.n) <= 0) {
    throw PreconditionError("residue class modulus must be >= 1, got " + to_decimal(c.n));
  }
  return ResidueClass{floor_mod(c.a, c.n), c.n};
}

}  // namespace coverlab
