#pragma once

#include <cstdint>
#include <stdexcept>

namespace scv {

// Generalized binomial coefficient C(x, j) = x(x-1)...(x-j+1)/j! for integer
// x of either sign and j >= 0.  This is the falling-factorial convention used
// both by the symmetrized-series weights and the bracket coefficients.
inline int64_t generalized_binomial(int64_t x, int64_t j) {
    if (j < 0) throw std::invalid_argument("generalized_binomial: lower index must be >= 0");
    // Multiply before dividing; every prefix product of a falling factorial is
    // divisible by the matching factorial prefix.
    int64_t num = 1;
    for (int64_t i = 0; i < j; ++i) {
        num *= (x - i);
        num /= (i + 1);
    }
    return num;
}

// Weights of the symmetrized shifted convolution series:
//   alpha(nu,k1,k2,mu) = C(nu-k1+1, nu-mu) * C(nu+k2-1, mu)
//   beta(nu,k1,k2)     = sum_mu alpha(nu,k1,k2,mu)
inline int64_t alpha_coeff(int nu, int k1, int k2, int mu) {
    if (nu < 0 || mu < 0 || mu > nu) throw std::invalid_argument("alpha_coeff: need 0 <= mu <= nu");
    return generalized_binomial(nu - k1 + 1, nu - mu) * generalized_binomial(nu + k2 - 1, mu);
}

inline int64_t beta_coeff(int nu, int k1, int k2) {
    int64_t s = 0;
    for (int mu = 0; mu <= nu; ++mu) s += alpha_coeff(nu, k1, k2, mu);
    return s;
}

} // namespace scv
