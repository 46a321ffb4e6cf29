#pragma once

namespace scv {

// Truncation policy for the infinite sums.  c_max caps the Kloosterman-
// Bessel modulus (the sums stop earlier once the rigorous tail bound drops
// under tol); tail_window sets the partial-sum averaging window of the
// conditionally convergent convolution sums (0 picks terms/16).  tol is the
// absolute accuracy target of whichever sum the control is handed to.
struct SumControl {
    long c_max = 100000;
    double tol = 1e-6;
    long max_terms = 4000000;
    long tail_window = 0;
};

} // namespace scv
