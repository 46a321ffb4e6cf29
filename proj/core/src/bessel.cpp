#include "scv/bessel.hpp"

#include <cmath>
#include <string>

namespace scv {

namespace {

constexpr int kMaxSeriesTerms = 100000;

// Ascending series sum_j s^j (x/2)^(2j+nu) / (j! (j+nu)!), s = -1 for J, +1 for I.
double ascending_series(int nu, double x, double tol, int sign) {
    if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
    double term = std::exp(double(nu) * std::log(0.5 * x) - std::lgamma(double(nu) + 1.0));
    double sum = term;
    double q = 0.25 * x * x;
    for (int j = 0; j < kMaxSeriesTerms; ++j) {
        double ratio = q / (double(j + 1) * double(j + 1 + nu));
        term *= ratio;
        sum += (sign < 0 && (j % 2 == 0)) ? -term : term;
        if (ratio < 0.5 && term <= 0.5 * tol * std::max(1.0, std::fabs(sum))) return sum;
    }
    throw BesselConvergenceError("bessel: ascending series did not converge", sum);
}

// Miller backward recurrence for J_nu(x), normalised by J_0 + 2 sum J_{2k} = 1.
double miller_j(int nu, double x, int start) {
    double bjp = 0.0, bj = 1e-300, bsum = 0.0, ans = 0.0;
    for (int j = start; j > 0; --j) {
        double bjm = (2.0 * j / x) * bj - bjp;
        bjp = bj;
        bj = bjm;
        if (std::fabs(bj) > 1e100) {
            bj *= 1e-100;
            bjp *= 1e-100;
            bsum *= 1e-100;
            ans *= 1e-100;
        }
        int idx = j - 1;
        if (idx == nu) ans = bj;
        if (idx != 0 && idx % 2 == 0) bsum += 2.0 * bj;
    }
    return ans / (bj + bsum);
}

} // namespace

double bessel_i(int order, double x, double tol) {
    if (order < 0) throw std::invalid_argument("bessel_i: order must be >= 0");
    if (x < 0.0) throw std::invalid_argument("bessel_i: argument must be >= 0");
    if (tol <= 0.0) throw std::invalid_argument("bessel_i: tol must be positive");
    return ascending_series(order, x, tol, +1);
}

double bessel_j(int order, double x, double tol) {
    if (order < 0) throw std::invalid_argument("bessel_j: order must be >= 0");
    if (x < 0.0) throw std::invalid_argument("bessel_j: argument must be >= 0");
    if (tol <= 0.0) throw std::invalid_argument("bessel_j: tol must be positive");
    if (x <= 2.0 * std::sqrt(double(order + 1))) {
        // Terms decrease monotonically here, so the alternating series loses
        // no significant cancellation.
        return ascending_series(order, x, tol, -1);
    }
    int base = order + int(x) + 20;
    if (base % 2 != 0) ++base;
    double prev = miller_j(order, x, base);
    for (int margin = 20; margin <= 520; margin += 40) {
        double cur = miller_j(order, x, base + margin);
        if (std::fabs(cur - prev) <= tol * std::max(1.0, std::fabs(cur))) return cur;
        prev = cur;
    }
    throw BesselConvergenceError("bessel_j: backward recurrence did not stabilise", prev);
}

double bessel(const BesselQuery& q, double tol) {
    return q.kind == BesselKind::J ? bessel_j(q.order, q.argument, tol)
                                   : bessel_i(q.order, q.argument, tol);
}

} // namespace scv
