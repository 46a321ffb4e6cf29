#pragma once

#include <stdexcept>

namespace scv {

enum class BesselKind { J, I };

struct BesselQuery {
    int order = 0;     // k-1 in all Poincare uses
    double argument = 0.0;
    BesselKind kind = BesselKind::J;
};

// Raised when a series/recurrence fails to reach the requested tolerance
// within the term budget; carries the best value obtained so far.
class BesselConvergenceError : public std::runtime_error {
public:
    BesselConvergenceError(const std::string& what, double partial)
        : std::runtime_error(what), partial_value(partial) {}
    double partial_value;
};

// J_order(x) to relative tolerance tol (relative to max(1,|value|)).
// Ascending series where it is cancellation-safe (x <= 2*sqrt(order+1)),
// backward recurrence normalised by J_0 + 2*sum J_{2k} = 1 otherwise.
double bessel_j(int order, double x, double tol = 1e-12);

// I_order(x), ascending series (all terms positive, no cancellation).
double bessel_i(int order, double x, double tol = 1e-12);

double bessel(const BesselQuery& q, double tol = 1e-12);

} // namespace scv
