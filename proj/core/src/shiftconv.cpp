#include "scv/shiftconv.hpp"

#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

namespace scv {

namespace {

double int_pow(double base, long e) {
    // e >= 0 small
    double r = 1.0;
    for (long i = 0; i < e; ++i) r *= base;
    return r;
}

// n^p for real p, fast path for small negative integers (the s = k-1 case).
struct PowEval {
    double p;
    bool integral;
    long ip;
    explicit PowEval(double p_) : p(p_) {
        integral = std::fabs(p_ - std::round(p_)) == 0.0 && std::fabs(p_) <= 64.0;
        ip = long(std::round(p_));
    }
    double operator()(double x) const {
        if (integral) {
            double r = int_pow(x, std::labs(ip));
            return ip >= 0 ? r : 1.0 / r;
        }
        return std::pow(x, p);
    }
};

long auto_window(const ConvolutionRequest& req) {
    if (req.control.tail_window > 0) return req.control.tail_window;
    return std::max(64L, req.terms / 16);
}

} // namespace

void validate(const ConvolutionRequest& req) {
    if (!req.f1 || !req.f2) throw std::invalid_argument("ConvolutionRequest: missing coefficient tables");
    const int k1 = req.f1->weight(), k2 = req.f2->weight();
    if (k1 % 2 != 0 || k2 % 2 != 0 || k1 < 2 || k2 < 2)
        throw std::invalid_argument("ConvolutionRequest: weights must be even and >= 2");
    if (k1 < k2) throw std::invalid_argument("ConvolutionRequest: need k1 >= k2");
    if (req.f1->level() != req.f2->level())
        throw std::invalid_argument("ConvolutionRequest: forms must share a level");
    if (req.h < 1) throw std::invalid_argument("ConvolutionRequest: shift h must be >= 1");
    if (req.nu < 0 || 2 * req.nu > k1 - k2)
        throw std::invalid_argument("ConvolutionRequest: need 0 <= nu <= (k1-k2)/2");
    if (req.terms < 1) throw std::invalid_argument("ConvolutionRequest: terms must be >= 1");
    if (req.f1->nmax() < req.terms + req.h || req.f2->nmax() < req.terms)
        throw std::invalid_argument("ConvolutionRequest: coefficient tables end before the requested cutoff");
}

ConvolutionValue derived_series(const ConvolutionRequest& req, int mu) {
    validate(req);
    if (mu < 0) throw std::invalid_argument("derived_series: mu must be >= 0");
    const int k1 = req.f1->weight(), k2 = req.f2->weight();
    const double s = req.s.value_or(double(k1 - 1));
    const double abscissa = 0.5 * (k1 + k2) + mu;
    if (s <= abscissa && !req.allow_conditional)
        throw std::invalid_argument(
            "derived_series: s is at or below the absolute-convergence abscissa; "
            "set allow_conditional to force a raw partial sum");
    const auto& a1 = *req.f1;
    const auto& a2 = *req.f2;
    const long h = req.h;
    PowEval ppow{double(mu)};
    PowEval spow{-s};
    double sum = 0.0, comp = 0.0;
    for (long n = 1; n <= req.terms; ++n) {
        double y = a1(n + h) * a2(n) * ppow(double(n + h)) * spow(double(n)) - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    ConvolutionValue out;
    out.value = sum;
    out.terms_used = req.terms;
    // |a_i(n)| <= d(n) n^((k_i-1)/2) and d(n) <= 2 sqrt(n) give a crude but
    // rigorous tail bound when it decays at all.
    double p = 0.5 * (k1 + k2) + mu + 0.5 - s; // summand growth exponent, n >> h
    if (p + 1.0 < 0.0) {
        double c = 4.0 * std::pow(2.0, 0.5 * (k1 - 1) + mu + 0.5);
        out.tail_estimate = c * std::pow(double(req.terms), p + 1.0) / (-(p + 1.0));
    } else {
        out.tail_estimate = HUGE_VAL;
    }
    out.converged = out.tail_estimate <= req.control.tol;
    return out;
}

ConvolutionValue dhat_nu(const ConvolutionRequest& req) {
    validate(req);
    if (req.terms < 10 * req.h)
        throw std::invalid_argument("dhat_nu: need terms >= 10*h for the paired summand");
    const int k1 = req.f1->weight(), k2 = req.f2->weight();
    const int nu = req.nu;
    const double s = req.s.value_or(double(k1 - 1));
    const long h = req.h;
    const auto& a1 = *req.f1;
    const auto& a2 = *req.f2;

    std::vector<double> alpha(size_t(nu + 1));
    for (int mu = 0; mu <= nu; ++mu) alpha[size_t(mu)] = double(alpha_coeff(nu, k1, k2, mu));
    const double beta = double(beta_coeff(nu, k1, k2));

    std::vector<PowEval> npow;     // n^(mu - s)
    npow.reserve(size_t(nu + 1));
    for (int mu = 0; mu <= nu; ++mu) npow.emplace_back(double(mu) - s);
    PowEval hpow(double(nu) - s);  // (n+h)^(nu - s)

    auto summand = [&](long n) {
        const double nh = double(n + h);
        double w = -beta * hpow(nh);
        double nh_pow = 1.0; // (n+h)^(nu - mu), built from mu = nu downward
        for (int mu = nu; mu >= 0; --mu) {
            w += alpha[size_t(mu)] * nh_pow * npow[size_t(mu)](double(n));
            nh_pow *= nh;
        }
        return a1(n + h) * a2(n) * w;
    };
    return windowed_sum(req.terms, auto_window(req), req.control.tol, summand);
}

ConvolutionValue dhat(const ConvolutionRequest& req) {
    ConvolutionRequest r = req;
    r.nu = 0;
    return dhat_nu(r);
}

LSeriesResult l_series(const CoefficientTable& f1, const CoefficientTable& f2, int nu,
                       long hmax, long terms, const SumControl& control) {
    if (hmax < 1) throw std::invalid_argument("l_series: hmax must be >= 1");
    LSeriesResult out;
    out.per_h.resize(size_t(hmax));

    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> jobs;
    std::atomic<long> next{1};
    auto run = [&]() {
        for (;;) {
            long h = next.fetch_add(1);
            if (h > hmax) return;
            ConvolutionRequest req;
            req.f1 = &f1;
            req.f2 = &f2;
            req.h = h;
            req.nu = nu;
            req.terms = terms;
            req.control = control;
            out.per_h[size_t(h - 1)] = dhat_nu(req);
        }
    };
    for (unsigned i = 1; i < workers; ++i) jobs.push_back(std::async(std::launch::async, run));
    run();
    for (auto& j : jobs) j.get();

    QSeries::DblVec c(static_cast<size_t>(hmax));
    out.converged = true;
    for (long h = 1; h <= hmax; ++h) {
        c[size_t(h - 1)] = out.per_h[size_t(h - 1)].value;
        out.converged = out.converged && out.per_h[size_t(h - 1)].converged;
    }
    out.series = QSeries(1, std::move(c));
    return out;
}

} // namespace scv
