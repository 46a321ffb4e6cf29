#pragma once

#include "scv/binomial.hpp"
#include "scv/forms.hpp"
#include "scv/qseries.hpp"
#include "scv/sum_control.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace scv {

struct ConvolutionRequest {
    const CoefficientTable* f1 = nullptr; // coefficients sampled at n+h
    const CoefficientTable* f2 = nullptr; // coefficients sampled at n (conjugated)
    long h = 1;
    int nu = 0;
    std::optional<double> s;       // defaults to k1 - 1
    long terms = 1000000;
    bool allow_conditional = false; // opt-in for derived_series past its abscissa
    SumControl control;
};

struct ConvolutionValue {
    double value = 0.0;
    double tail_estimate = 0.0;
    long terms_used = 0;
    bool converged = false;
};

void validate(const ConvolutionRequest& req);

// D^(mu)(f1,f2,h;s) = sum a1(n+h) conj(a2(n)) (n+h)^mu / n^s, straight
// partial sum with a Deligne-bound tail estimate.  Refused past the
// absolute-convergence abscissa unless allow_conditional is set.
ConvolutionValue derived_series(const ConvolutionRequest& req, int mu);

// Symmetrized series at nu = 0.
ConvolutionValue dhat(const ConvolutionRequest& req);

// D-hat^(nu)(f1,f2,h;s): all mu-components and the reflected term combined
// into one summand per n (the grouping that makes s = k1-1 converge), with
// tail-window averaging of the partial sums.
ConvolutionValue dhat_nu(const ConvolutionRequest& req);

struct LSeriesResult {
    QSeries series; // floating, coefficients h = 1..hmax
    std::vector<ConvolutionValue> per_h;
    bool converged = true;
};

// L^(nu)(f1,f2) = sum_h Dhat^(nu)(f1,f2,h;k1-1) q^h.
LSeriesResult l_series(const CoefficientTable& f1, const CoefficientTable& f2, int nu,
                       long hmax, long terms, const SumControl& control = {});

// Window-averaged summation of sum_{n=1}^{terms} summand(n); the estimate
// compares the trailing window mean against both its own spread and the mean
// one window earlier.
template <typename F>
ConvolutionValue windowed_sum(long terms, long window, double tol, F&& summand) {
    if (window < 1) window = 1;
    if (window > terms) window = terms;
    const long w2_lo = std::max(1L, terms - 2 * window + 1);
    const long w1_lo = terms - window + 1;
    double sum = 0.0, comp = 0.0;
    double mean1 = 0.0, mean2 = 0.0;
    double lo = 0.0, hi = 0.0;
    bool have_spread = false;
    long count2 = 0;
    for (long n = 1; n <= terms; ++n) {
        double y = summand(n) - comp; // Kahan update
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if (n >= w1_lo) {
            mean1 += sum;
            if (!have_spread) {
                lo = hi = sum;
                have_spread = true;
            } else {
                lo = std::min(lo, sum);
                hi = std::max(hi, sum);
            }
        } else if (n >= w2_lo) {
            mean2 += sum;
            ++count2;
        }
    }
    mean1 /= double(window);
    if (count2 > 0) mean2 /= double(count2);
    ConvolutionValue out;
    out.value = mean1;
    double spread = have_spread ? 0.5 * (hi - lo) : 0.0;
    double drift = count2 > 0 ? std::fabs(mean1 - mean2) : spread;
    out.tail_estimate = std::max(spread, drift) + 1e-14 * std::fabs(mean1);
    out.terms_used = terms;
    out.converged = out.tail_estimate <= tol;
    return out;
}

} // namespace scv
