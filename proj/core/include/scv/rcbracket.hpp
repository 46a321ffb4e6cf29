#pragma once

#include "scv/forms.hpp"
#include "scv/qseries.hpp"
#include "scv/shiftconv.hpp"

namespace scv {

struct WeightedSeries {
    QSeries series;
    int weight = 0; // may be negative (2 - k1 for a holomorphic part)
};

// nu-th Rankin-Cohen bracket on formal q-expansions.  All derivatives are
// theta-derivatives (q^n -> n q^n), which absorbs the (2 pi i)^-nu prefactor;
// the coefficient at exponent t is
//   sum_{r+u=t} sum_mu (-1)^mu C(k+nu-1, nu-mu) C(l+nu-1, mu) r^mu u^(nu-mu) f_r g_u.
// Result weight: k + l + 2 nu.
QSeries rc_bracket(const WeightedSeries& f, const WeightedSeries& g, int nu);

// G_{a,b}(X,Y) = sum_{j=0}^{a-2} (-1)^j C(a+b-3, a-2-j) C(j+b-2, j) X^(a-2-j) Y^j,
// homogeneous of degree a-2; requires a >= 2.
Rational g_poly(int a, int b, const Rational& X, const Rational& Y);
double g_poly(int a, int b, double X, double Y);

struct ProjectedBracket {
    QSeries series;                          // pi_hol^reg([M, f2]_nu) up to q^hmax
    QSeries bracket;                         // [M^+, f2]_nu alone
    std::vector<ConvolutionValue> correction; // per-h correction sums (G-polynomial route)
};

// Regularized holomorphic projection of [M_{f1}, f2]_nu from the explicit
// coefficient formula: bracket of the holomorphic part minus (k1-2)! times
// the double sum built from G-polynomial weights.  The correction is also
// evaluated through the symmetrized-series route and the two must agree
// within their tail estimates; that agreement is what makes the generating
// function a mixed mock modular object up to a weight-2 correction.
// Defined for nu = (k1-k2)/2: smaller nu puts the bracket weight below 2
// where holomorphic projection is not defined, larger nu loses convergence.
ProjectedBracket projected_bracket(const WeightedSeries& mplus, const CoefficientTable& f2,
                                   const CoefficientTable& f1, int nu, long hmax, long terms,
                                   const SumControl& control = {});

} // namespace scv
