#include "scv/rcbracket.hpp"

#include "scv/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace scv {

namespace {

Rational rat_int_pow(long base, int e) {
    BigInt b(base), r(1);
    for (int i = 0; i < e; ++i) r *= b;
    return Rational(r);
}

double dbl_int_pow(double base, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

template <typename Vec, typename PowFn>
Vec bracket_coeffs(const Vec& fc, long fs, const Vec& gc, long gs, int k, int l, int nu,
                   long rstart, long rnmax, PowFn ipow) {
    Vec out(size_t(std::max(0L, rnmax - rstart + 1)));
    std::vector<int64_t> cf(size_t(nu + 1)), cg(size_t(nu + 1));
    for (int mu = 0; mu <= nu; ++mu) {
        cf[size_t(mu)] = generalized_binomial(k + nu - 1, nu - mu);
        cg[size_t(mu)] = generalized_binomial(l + nu - 1, mu);
    }
    for (long r = fs; r < fs + long(fc.size()); ++r) {
        const auto& fr = fc[size_t(r - fs)];
        if (fr == typename Vec::value_type{}) continue;
        for (long u = gs; u < gs + long(gc.size()); ++u) {
            long t = r + u;
            if (t < rstart || t > rnmax) continue;
            const auto& gu = gc[size_t(u - gs)];
            if (gu == typename Vec::value_type{}) continue;
            typename Vec::value_type w{};
            for (int mu = 0; mu <= nu; ++mu) {
                typename Vec::value_type term = ipow(r, mu) * ipow(u, nu - mu);
                term = term * (cf[size_t(mu)] * cg[size_t(mu)]);
                w += (mu % 2 != 0) ? typename Vec::value_type(-term) : term;
            }
            out[size_t(t - rstart)] += w * fr * gu;
        }
    }
    return out;
}

} // namespace

QSeries rc_bracket(const WeightedSeries& f, const WeightedSeries& g, int nu) {
    if (nu < 0) throw std::invalid_argument("rc_bracket: nu must be >= 0");
    if (f.series.mode() != g.series.mode())
        throw std::invalid_argument("rc_bracket: operands must share a coefficient mode");
    long rstart = f.series.start_exponent() + g.series.start_exponent();
    long rnmax = std::min(f.series.start_exponent() + g.series.nmax(),
                          g.series.start_exponent() + f.series.nmax());
    if (rnmax < rstart)
        throw std::invalid_argument("rc_bracket: truncation ranges do not overlap");
    if (f.series.is_exact()) {
        auto c = bracket_coeffs(f.series.rat_coeffs(), f.series.start_exponent(),
                                g.series.rat_coeffs(), g.series.start_exponent(),
                                f.weight, g.weight, nu, rstart, rnmax,
                                [](long b, int e) { return rat_int_pow(b, e); });
        return QSeries(rstart, std::move(c));
    }
    auto c = bracket_coeffs(f.series.dbl_coeffs(), f.series.start_exponent(),
                            g.series.dbl_coeffs(), g.series.start_exponent(),
                            f.weight, g.weight, nu, rstart, rnmax,
                            [](long b, int e) { return dbl_int_pow(double(b), e); });
    return QSeries(rstart, std::move(c));
}

Rational g_poly(int a, int b, const Rational& X, const Rational& Y) {
    if (a < 2) throw std::invalid_argument("g_poly: need a >= 2");
    if (b < 0) throw std::invalid_argument("g_poly: need b >= 0");
    Rational sum(0);
    for (int j = 0; j <= a - 2; ++j) {
        Rational term(generalized_binomial(a + b - 3, a - 2 - j) * generalized_binomial(j + b - 2, j));
        Rational xp(1), yp(1);
        for (int i = 0; i < a - 2 - j; ++i) xp *= X;
        for (int i = 0; i < j; ++i) yp *= Y;
        term *= xp * yp;
        sum += (j % 2 == 0) ? term : -term;
    }
    return sum;
}

double g_poly(int a, int b, double X, double Y) {
    if (a < 2) throw std::invalid_argument("g_poly: need a >= 2");
    if (b < 0) throw std::invalid_argument("g_poly: need b >= 0");
    double sum = 0.0;
    for (int j = 0; j <= a - 2; ++j) {
        double term = double(generalized_binomial(a + b - 3, a - 2 - j)) *
                      double(generalized_binomial(j + b - 2, j)) *
                      dbl_int_pow(X, a - 2 - j) * dbl_int_pow(Y, j);
        sum += (j % 2 == 0) ? term : -term;
    }
    return sum;
}

ProjectedBracket projected_bracket(const WeightedSeries& mplus, const CoefficientTable& f2,
                                   const CoefficientTable& f1, int nu, long hmax, long terms,
                                   const SumControl& control) {
    const int k1 = f1.weight(), k2 = f2.weight();
    if (nu < 0 || 2 * nu > k1 - k2)
        throw std::invalid_argument("projected_bracket: need 0 <= nu <= (k1-k2)/2");
    const int a = 2 * nu - k1 + k2 + 2; // weight of the bracket = projection weight
    if (a < 2)
        throw std::invalid_argument(
            "projected_bracket: bracket weight below 2, holomorphic projection undefined "
            "(need nu = (k1-k2)/2)");
    if (mplus.weight != 2 - k1)
        throw std::invalid_argument("projected_bracket: holomorphic part must have weight 2-k1");
    if (hmax < 1) throw std::invalid_argument("projected_bracket: hmax must be >= 1");

    // [M^+, f2]_nu, with f2 as a floating series long enough to cover q^hmax.
    long f2_need = hmax - mplus.series.start_exponent();
    QSeries::DblVec f2c(static_cast<size_t>(f2_need));
    for (long n = 1; n <= f2_need; ++n) f2c[size_t(n - 1)] = f2(n);
    WeightedSeries f2w{QSeries(1, std::move(f2c)), k2};
    WeightedSeries mw{mplus.series.to_floating(), mplus.weight};
    QSeries bracket = rc_bracket(mw, f2w, nu).truncated(hmax);

    std::vector<double> alpha(size_t(nu + 1));
    for (int mu = 0; mu <= nu; ++mu) alpha[size_t(mu)] = double(alpha_coeff(nu, k1, k2, mu));

    const long window = control.tail_window > 0 ? control.tail_window : std::max(64L, terms / 16);
    if (f1.nmax() < terms || f2.nmax() < terms + hmax)
        throw std::invalid_argument("projected_bracket: coefficient tables end before the cutoff");

    ProjectedBracket out;
    out.bracket = bracket;
    QSeries corr = QSeries::zero_floating(1, hmax);
    double kfac = std::tgamma(double(k1 - 1)); // (k1-2)!
    for (long h = 1; h <= hmax; ++h) {
        // closed-form projection weights (G-polynomial route)
        auto summand_g = [&](long n) {
            double nh = double(n + h), nn = double(n);
            double inner = 0.0;
            for (int mu = 0; mu <= nu; ++mu) {
                double gval = g_poly(a, k1 - mu, nh, nn);
                inner += alpha[size_t(mu)] *
                         (std::pow(nh, double(-nu - k2 + 1)) * gval -
                          std::pow(nn, double(mu - k1 + 1)) * dbl_int_pow(nh, nu - mu));
            }
            return f2(n + h) * f1(n) * inner;
        };
        ConvolutionValue cg = windowed_sum(terms, window, control.tol, summand_g);

        // symmetrized-series route over the same tables; expanding the
        // G-polynomial shows cg = -cd, so the two runs must agree
        auto summand_d = [&](long n) {
            double nh = double(n + h), nn = double(n);
            double w = 0.0;
            for (int mu = 0; mu <= nu; ++mu) {
                w += alpha[size_t(mu)] *
                     (dbl_int_pow(nh, nu - mu) * std::pow(nn, double(mu - k1 + 1)) -
                      std::pow(nh, double(nu - k1 + 1)));
            }
            return f2(n + h) * f1(n) * w;
        };
        ConvolutionValue cd = windowed_sum(terms, window, control.tol, summand_d);

        double slack = cg.tail_estimate + cd.tail_estimate +
                       1e-9 * std::max(1.0, std::fabs(cg.value));
        if (std::fabs(cg.value + cd.value) > 10.0 * slack)
            throw std::runtime_error(
                "projected_bracket: G-polynomial and symmetrized-series corrections disagree");

        corr.set(h, cg.value);
        out.correction.push_back(cg);
    }
    out.series = bracket - kfac * corr;
    return out;
}

} // namespace scv
