#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <string>

namespace scv {

// Exact arithmetic is backed by GMP. Coefficients of the structural series
// (Eisenstein, Delta, j, the weight-2 basis elements) routinely exceed the
// int64 range, so arbitrary precision is non-negotiable here.
using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool fits_int64(const BigInt& z) {
    return z.fits_slong_p();
}

} // namespace scv
