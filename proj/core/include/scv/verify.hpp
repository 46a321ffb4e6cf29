#pragma once

#include "scv/forms.hpp"
#include "scv/poincare.hpp"
#include "scv/qseries.hpp"
#include "scv/shiftconv.hpp"

#include <string>
#include <utility>
#include <vector>

namespace scv {

// Declared weight-2 correction space (E2, the level-9 Eisenstein pair, or
// E4^2 E6 / Delta + E2), floating series over a common truncation.
struct CorrectionBasis {
    std::vector<std::string> labels;
    std::vector<QSeries> series;
};

struct FitResult {
    std::vector<double> coefficients;
    std::vector<double> coefficient_sigma; // error propagated from row noise
    double fit_residual = 0.0;
    double predictive_residual = 0.0;      // on held-out exponents only
    long fit_lo = 0, fit_hi = 0;
    long test_lo = 0, test_hi = 0;
};

// Solve (lhs - rhs_mock) = sum_j gamma_j basis_j on fit_range by (weighted)
// least squares and evaluate the predictive residual on test_range.
// row_sigma, when given, holds one noise scale per fit-range exponent and
// both weights the solve and propagates into coefficient_sigma.
FitResult fit_correction(const QSeries& lhs, const QSeries& rhs_mock, const CorrectionBasis& basis,
                         std::pair<long, long> fit_range, std::pair<long, long> test_range,
                         const std::vector<double>& row_sigma = {});

// T(f;h) = beta*Dhat + 24*beta*gamma*sigma_1(h) - 12*beta*delta*sum_{d|h,3!|d} d.
double t_value(long h, double beta, double gamma, double delta, double dhat_value);

struct RationalSnap {
    Rational value;
    double distance;
};

// Nearest rational with denominator <= max_denominator (continued fractions).
RationalSnap rational_snap(double x, long max_denominator);

struct VerifyOptions {
    long terms = 1000000;
    long hmax = 10;      // identity rows; example 2 extends internally to 15
    double tol = 0.0;    // 0 = judge rows against their combined error estimates
    double sum_tol = 0.0; // convolution-sum convergence target, 0 = per-example default
    SumControl control;  // Kloosterman-Bessel cutoff/tolerance, tail window
};

struct PerHRow {
    long h = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;
    double tolerance = 0.0;
    bool held_out = false;
    bool pass = true;
};

struct TValueRow {
    long h = 0;
    double t = 0.0;
    Rational snapped;
    double snap_distance = 0.0;
};

struct ExampleReport {
    int example = 0;
    std::string lhs_label;
    std::string rhs_label;
    std::vector<std::string> basis_labels;
    std::vector<double> coefficients;
    std::vector<double> coefficient_sigma;
    double fit_residual = 0.0;
    double predictive_residual = 0.0;
    double beta = 0.0;
    std::vector<PerHRow> per_h;
    std::vector<ConvolutionValue> lhs_values; // Dhat diagnostics per h
    std::vector<TValueRow> t_table;           // example 2
    double correction_pole = 0.0;             // q^-1 coefficient of fitted F
    bool pass = false;
};

// End-to-end reproduction of one of the three worked identities.
ExampleReport verify_example(int which, const VerifyOptions& opts = {});

std::string to_json(const ExampleReport& report);
std::string to_text(const ExampleReport& report);

} // namespace scv
