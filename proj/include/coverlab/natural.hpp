#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "coverlab/errors.hpp"

namespace coverlab {

// GMP integers carry every big constant in the library. `Natural` marks the
// places where a value is nonnegative by contract; `Integer` may be signed.
using Natural = mpz_class;
using Integer = mpz_class;

/// Parses a canonical decimal string: ASCII digits only, no sign, and no
/// leading zeros except for "0" itself. Canonical form makes the decimal
/// round-trip exact.
inline Natural parse_natural(std::string_view text) {
  if (text.empty()) throw ParseError("empty decimal string");
  for (char ch : text) {
    if (ch < '0' || ch > '9') {
      throw ParseError("invalid decimal string \"" + std::string(text) + "\"");
    }
  }
  if (text.size() > 1 && text.front() == '0') {
    throw ParseError("leading zero in decimal string \"" + std::string(text) + "\"");
  }
  return Natural(std::string(text), 10);
}

inline std::string to_decimal(const Integer& value) { return value.get_str(10); }

/// Least nonnegative residue of x modulo m (m > 0).
inline Natural floor_mod(const Integer& x, const Natural& m) {
  Natural r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline bool fits_u64(const Integer& v) {
  return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const Integer& v) {
  if (!fits_u64(v)) throw PreconditionError("value " + to_decimal(v) + " does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

inline Natural from_u64(std::uint64_t v) {
  Natural out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
  return out;
}

}  // namespace coverlab
