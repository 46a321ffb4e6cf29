#pragma once

#include <cstdint>

namespace scv {

struct KloostermanQuery {
    long m = 0;
    long n = 0;
    long c = 1; // modulus, >= 1
};

// K(m,n,c) = sum over primitive residues v mod c of e((m*vbar + n*v)/c),
// real by the v -> -v symmetry.  K(m,n,1) = 1 (empty condition, e(0) term).
// Values are memoised keyed on (m mod c, n mod c, c); concurrent lookups are
// safe and racing inserts compute equal values.
double kloosterman(const KloostermanQuery& q);
double kloosterman(long m, long n, long c);

// Uncached direct evaluation (the cache feeds from this).
double kloosterman_direct(long m, long n, long c);

// Modular inverse via extended Euclid; gcd(a, c) must be 1.
long mod_inverse(long a, long c);

void clear_kloosterman_cache();

} // namespace scv
