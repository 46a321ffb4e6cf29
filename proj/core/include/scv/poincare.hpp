#pragma once

#include "scv/qseries.hpp"
#include "scv/sum_control.hpp"

#include <span>
#include <vector>

namespace scv {

struct PoincareSpec {
    long m = 1;   // index, >= 1
    int k = 12;   // even weight >= 2
    long N = 1;   // level >= 1
    SumControl control;
};

void validate(const PoincareSpec& spec);

// One Kloosterman-Bessel coefficient value with its truncation diagnostics.
// tail_estimate is a rigorous bound on the dropped c-tail.
struct CoeffResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    long c_used = 0;
    bool converged = true;
};

// Full coefficient of q^n in P(m,k,N), i.e. the Kloosterman-Bessel series
// plus 1 when n = m (the seeded q^m term).  n >= 1.
CoeffResult cusp_coeff(const PoincareSpec& spec, long n);

// Coefficient of q^n in the NORMALISED holomorphic part of Q(-m,k,N): the
// principal part is exactly q^{-m} (the raw expansion carries (k-1)! there,
// which this function divides out).  Accepts n >= 0 and n = -m.
CoeffResult qplus_coeff(const PoincareSpec& spec, long n);

// Coefficient of q^m in P(m,k,N) = the Petersson-norm constant of the
// examples, e.g. beta(1,12,1) = 1 + 2*pi*sum_c K(1,1,c)/c J_11(4*pi/c).
CoeffResult petersson_beta(const PoincareSpec& spec);

struct LiftResult {
    QSeries series;                    // fitted combination, floating mode
    std::vector<double> coefficients;  // one per basis element
    double fit_residual = 0.0;         // max |probe mismatch| on fitted rows
    double predictive_residual = 0.0;  // max mismatch on held-out probes
    bool converged = true;
};

// Express P(m,k,N) in a holomorphic basis by matching leading Kloosterman
// coefficients (least squares over probe_count >= dim rows), so that deep
// coefficient tables can come from the basis instead of the c-sums.
LiftResult lift_to_basis(const PoincareSpec& spec, std::span<const QSeries> basis,
                         int probe_count);

} // namespace scv
