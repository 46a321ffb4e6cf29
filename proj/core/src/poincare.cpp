#include "scv/poincare.hpp"

#include "scv/bessel.hpp"
#include "scv/kloosterman.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace scv {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

double factorial(int n) { return std::tgamma(double(n) + 1.0); }

int sign_pow_half_k(int k) { return (k / 2) % 2 == 0 ? 1 : -1; } // (-1)^(k/2)

// Tail of sum_{c > C, c = 0 mod N} (x_c/2)^(k-1)/(k-1)! with x_c = 4*pi*s/c
// and |K(m,n,c)| <= c.  Valid once x_C <= 1; the e^(1/4) factor covers the
// I-Bessel case (I_nu(x) <= (x/2)^nu e^(x^2/4)/nu!).
double bessel_sum_tail(double s, int k, long N, long C) {
    double A = std::exp(0.25) * std::pow(2.0 * kPi * s, double(k - 1)) / factorial(k - 1);
    double J = std::floor(double(C) / double(N)) + 1.0;
    double tail_j = std::pow(J, 1.0 - k) + std::pow(J, 2.0 - k) / double(k - 2);
    return A * std::pow(double(N), 1.0 - k) * tail_j;
}

struct KBSum {
    double value = 0.0;
    double tail = 0.0;
    long c_used = 0;
    bool converged = false;
};

// sum_{c = N, 2N, ... <= c_max} K(ka, kb, c)/c * B_{k-1}(4*pi*s/c),
// stopping early once the rigorous tail bound drops under tol.
KBSum kloosterman_bessel_sum(long ka, long kb, double s, int k, long N,
                             BesselKind kind, const SumControl& ctl) {
    KBSum out;
    double bessel_tol = std::min(1e-13, ctl.tol);
    for (long c = N; c <= ctl.c_max; c += N) {
        double x = 4.0 * kPi * s / double(c);
        double b = (kind == BesselKind::J) ? bessel_j(k - 1, x, bessel_tol)
                                           : bessel_i(k - 1, x, bessel_tol);
        out.value += kloosterman(ka, kb, c) / double(c) * b;
        out.c_used = c;
        if (x <= 1.0) {
            out.tail = bessel_sum_tail(s, k, N, c);
            if (out.tail <= ctl.tol) {
                out.converged = true;
                return out;
            }
        }
    }
    if (out.c_used > 0 && 4.0 * kPi * s / double(out.c_used) <= 1.0)
        out.tail = bessel_sum_tail(s, k, N, out.c_used);
    else
        out.tail = HUGE_VAL;
    return out;
}

} // namespace

void validate(const PoincareSpec& spec) {
    if (spec.k < 2 || spec.k % 2 != 0)
        throw std::invalid_argument("PoincareSpec: weight must be even and >= 2");
    if (spec.m < 1 || spec.N < 1)
        throw std::invalid_argument("PoincareSpec: index and level must be >= 1");
    if (spec.control.c_max < spec.N)
        throw std::invalid_argument("PoincareSpec: c_max must be at least the level");
    if (spec.control.tol <= 0.0)
        throw std::invalid_argument("PoincareSpec: tol must be positive");
}

CoeffResult cusp_coeff(const PoincareSpec& spec, long n) {
    validate(spec);
    if (n < 1) throw std::invalid_argument("cusp_coeff: n must be >= 1");
    double s = std::sqrt(double(spec.m) * double(n));
    double pref = 2.0 * kPi * sign_pow_half_k(spec.k) *
                  std::pow(double(n) / double(spec.m), 0.5 * (spec.k - 1));
    KBSum kb = kloosterman_bessel_sum(spec.m, n, s, spec.k, spec.N, BesselKind::J, spec.control);
    CoeffResult r;
    r.value = pref * kb.value + (n == spec.m ? 1.0 : 0.0);
    r.tail_estimate = std::fabs(pref) * kb.tail;
    r.c_used = kb.c_used;
    r.converged = kb.converged;
    return r;
}

CoeffResult qplus_coeff(const PoincareSpec& spec, long n) {
    validate(spec);
    if (n == -spec.m) return CoeffResult{1.0, 0.0, 0, true};
    if (n < 0)
        throw std::invalid_argument(
            "qplus_coeff: negative exponents besides -m belong to the non-holomorphic part");
    const int k = spec.k;
    const int ik = sign_pow_half_k(k); // i^k for even k
    if (n == 0) {
        // c_m(0) = -(2 pi i)^k m^(k-1) sum K(-m,0,c)/c^k, divided by (k-1)!.
        double pref = -ik * std::pow(2.0 * kPi, double(k)) *
                      std::pow(double(spec.m), double(k - 1)) / factorial(k - 1);
        double sum = 0.0;
        CoeffResult r;
        for (long c = spec.N; c <= spec.control.c_max; c += spec.N) {
            sum += kloosterman(-spec.m, 0, c) * std::pow(double(c), -double(k));
            r.c_used = c;
            // |K(-m,0,c)| <= c, so the dropped terms are bounded by c^(1-k).
            double J = std::floor(double(c) / double(spec.N)) + 1.0;
            double tail = std::pow(double(spec.N), 1.0 - k) *
                          (std::pow(J, 1.0 - k) + std::pow(J, 2.0 - k) / double(k - 2));
            r.tail_estimate = std::fabs(pref) * tail;
            if (r.tail_estimate <= spec.control.tol) {
                r.converged = true;
                break;
            }
        }
        r.value = pref * sum;
        return r;
    }
    // n > 0: -2 pi i^k Gamma(k) (n/m)^((1-k)/2) sum K(-m,n,c)/c I_{k-1}(...),
    // normalised by (k-1)! so the principal coefficient is exactly 1.
    double s = std::sqrt(double(spec.m) * double(n));
    double pref = -2.0 * kPi * ik * std::pow(double(n) / double(spec.m), 0.5 * (1 - k));
    KBSum kb = kloosterman_bessel_sum(-spec.m, n, s, k, spec.N, BesselKind::I, spec.control);
    CoeffResult r;
    r.value = pref * kb.value;
    r.tail_estimate = std::fabs(pref) * kb.tail;
    r.c_used = kb.c_used;
    r.converged = kb.converged;
    return r;
}

CoeffResult petersson_beta(const PoincareSpec& spec) { return cusp_coeff(spec, spec.m); }

LiftResult lift_to_basis(const PoincareSpec& spec, std::span<const QSeries> basis,
                         int probe_count) {
    validate(spec);
    const int dim = int(basis.size());
    if (dim == 0) throw std::invalid_argument("lift_to_basis: empty basis");
    if (probe_count < dim)
        throw std::invalid_argument("lift_to_basis: probe_count must be >= basis dimension");
    long bn = basis[0].nmax();
    for (const auto& b : basis) bn = std::min(bn, b.nmax());
    const int extra = (bn >= probe_count + 2) ? 2 : int(std::max(0L, bn - probe_count));

    Eigen::MatrixXd A(probe_count, dim);
    Eigen::VectorXd rhs(probe_count);
    double tail_max = 0.0;
    for (int n = 1; n <= probe_count; ++n) {
        CoeffResult c = cusp_coeff(spec, n);
        rhs(n - 1) = c.value;
        tail_max = std::max(tail_max, c.tail_estimate);
        for (int j = 0; j < dim; ++j) A(n - 1, j) = basis[size_t(j)].at(n);
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-10);
    if (qr.rank() < dim)
        throw std::invalid_argument("lift_to_basis: probe matrix is rank-deficient for this basis");
    Eigen::VectorXd x = qr.solve(rhs);

    LiftResult out;
    out.coefficients.assign(x.data(), x.data() + dim);
    out.fit_residual = (A * x - rhs).cwiseAbs().maxCoeff();

    double pred = 0.0;
    for (int n = probe_count + 1; n <= probe_count + extra; ++n) {
        double fit = 0.0;
        for (int j = 0; j < dim; ++j) fit += out.coefficients[size_t(j)] * basis[size_t(j)].at(n);
        pred = std::max(pred, std::fabs(fit - cusp_coeff(spec, n).value));
    }
    out.predictive_residual = pred;

    QSeries acc = out.coefficients[0] * basis[0].to_floating().truncated(bn);
    for (int j = 1; j < dim; ++j)
        acc = acc + out.coefficients[size_t(j)] * basis[size_t(j)].to_floating().truncated(bn);
    out.series = std::move(acc);
    out.converged = out.fit_residual <= std::max(100.0 * tail_max, 1e-8);
    return out;
}

} // namespace scv
