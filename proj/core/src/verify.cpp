#include "scv/verify.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace scv {

namespace {

constexpr double kRelFloor = 5e-14; // double-precision floor on reported values

FitResult solve_fit(const QSeries& lhs, const QSeries& mock, const CorrectionBasis& basis,
                    std::pair<long, long> fit_range, std::pair<long, long> test_range,
                    const std::vector<double>& row_sigma) {
    const long flo = fit_range.first, fhi = fit_range.second;
    const long tlo = test_range.first, thi = test_range.second;
    const int rows = int(fhi - flo + 1);
    const int cols = int(basis.series.size());
    if (cols == 0) throw std::invalid_argument("fit_correction: empty basis");
    if (rows < cols) throw std::invalid_argument("fit_correction: fewer fit rows than basis elements");
    if (thi >= tlo && !(tlo > fhi || thi < flo))
        throw std::invalid_argument("fit_correction: test range overlaps fit range");
    if (!row_sigma.empty() && long(row_sigma.size()) != rows)
        throw std::invalid_argument("fit_correction: row_sigma size mismatch");

    Eigen::MatrixXd A(rows, cols);
    Eigen::VectorXd b(rows);
    for (long e = flo; e <= fhi; ++e) {
        b(e - flo) = lhs.at(e) - mock.at(e);
        for (int j = 0; j < cols; ++j) A(e - flo, j) = basis.series[size_t(j)].at(e);
    }
    double bscale = b.cwiseAbs().maxCoeff();

    Eigen::VectorXd w(rows);
    for (int r = 0; r < rows; ++r) {
        double sigma = row_sigma.empty() ? 1.0 : row_sigma[size_t(r)];
        sigma = std::max(sigma, 1e-12 * bscale + 1e-300);
        w(r) = 1.0 / sigma;
    }
    Eigen::MatrixXd WA = w.asDiagonal() * A;
    Eigen::VectorXd Wb = w.asDiagonal() * b;

    // Column equilibration so the condition check measures shape, not units.
    Eigen::VectorXd colscale(cols);
    for (int j = 0; j < cols; ++j) {
        double norm = WA.col(j).norm();
        if (norm == 0.0)
            throw std::invalid_argument("fit_correction: basis element vanishes on the fit range");
        colscale(j) = 1.0 / norm;
    }
    Eigen::MatrixXd S = WA * colscale.asDiagonal();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double smin = svd.singularValues()(cols - 1);
    double smax = svd.singularValues()(0);
    if (smin == 0.0 || smax / smin > 1e12) {
        std::ostringstream os;
        os << "fit_correction: fit system is ill-conditioned (cond = "
           << (smin == 0.0 ? std::string("inf") : std::to_string(smax / smin))
           << "); basis is numerically dependent on the fit range";
        throw std::invalid_argument(os.str());
    }
    Eigen::VectorXd y = svd.solve(Wb);
    Eigen::VectorXd x = colscale.asDiagonal() * y;

    // Pseudoinverse row sums propagate the per-row noise into the coefficients:
    // x = P (Wb) with unit-variance rows after weighting.
    Eigen::MatrixXd pinv = colscale.asDiagonal() *
                           (svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
                            svd.matrixU().transpose());

    FitResult out;
    out.coefficients.assign(x.data(), x.data() + cols);
    out.coefficient_sigma.resize(size_t(cols));
    for (int j = 0; j < cols; ++j) out.coefficient_sigma[size_t(j)] = pinv.row(j).cwiseAbs().sum();
    out.fit_residual = (A * x - b).cwiseAbs().maxCoeff();
    out.fit_lo = flo;
    out.fit_hi = fhi;
    out.test_lo = tlo;
    out.test_hi = thi;

    double pred = 0.0;
    for (long e = tlo; e <= thi; ++e) {
        double fitv = 0.0;
        for (int j = 0; j < cols; ++j) fitv += out.coefficients[size_t(j)] * basis.series[size_t(j)].at(e);
        pred = std::max(pred, std::fabs((lhs.at(e) - mock.at(e)) - fitv));
    }
    out.predictive_residual = pred;
    return out;
}

} // namespace

FitResult fit_correction(const QSeries& lhs, const QSeries& rhs_mock, const CorrectionBasis& basis,
                         std::pair<long, long> fit_range, std::pair<long, long> test_range,
                         const std::vector<double>& row_sigma) {
    return solve_fit(lhs, rhs_mock, basis, fit_range, test_range, row_sigma);
}

double t_value(long h, double beta, double gamma, double delta, double dhat_value) {
    if (h < 1) throw std::invalid_argument("t_value: h must be >= 1");
    double s_all = to_double(divisor_sum(h, 1));
    double s_no3 = to_double(divisor_sum(h, 1, 3));
    return beta * dhat_value + 24.0 * beta * gamma * s_all - 12.0 * beta * delta * s_no3;
}

RationalSnap rational_snap(double x, long max_denominator) {
    if (max_denominator < 1) throw std::invalid_argument("rational_snap: max_denominator must be >= 1");
    if (!std::isfinite(x)) throw std::invalid_argument("rational_snap: x must be finite");
    // Continued-fraction convergents, with a final semiconvergent when the
    // next denominator would overshoot the cap.
    long pk1 = 1, qk1 = 0; // previous
    long pk = long(std::floor(x)), qk = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 64 && frac > 1e-15; ++it) {
        double inv = 1.0 / frac;
        long a = long(std::floor(inv));
        frac = inv - std::floor(inv);
        long qn = a * qk + qk1;
        if (qn > max_denominator) {
            long amax = (max_denominator - qk1) / qk;
            if (amax >= 1) {
                long ps = amax * pk + pk1, qs = amax * qk + qk1;
                if (std::fabs(x - double(ps) / double(qs)) < std::fabs(x - double(pk) / double(qk))) {
                    pk = ps;
                    qk = qs;
                }
            }
            break;
        }
        long pn = a * pk + pk1;
        pk1 = pk; qk1 = qk;
        pk = pn; qk = qn;
    }
    Rational r(pk, qk);
    r.canonicalize();
    return RationalSnap{r, std::fabs(x - double(pk) / double(qk))};
}

namespace {

struct MockSide {
    QSeries series; // exponents 1-m .. hmax
    std::vector<double> tail;
    std::vector<double> qplus_values; // indices j = 0..hmax-1
    long start = 0;
    double tail_at(long e) const {
        if (e < start || e - start >= long(tail.size())) return 0.0;
        return tail[size_t(e - start)];
    }
};

// scale * Qplus(-m,k,N) * P as a q-expansion on [1-m, hmax], with a per-
// exponent error bound assembled from the Kloosterman tails of every factor.
MockSide build_mock(const PoincareSpec& ps, long hmax, const std::vector<double>& pval,
                    const std::vector<double>& ptail, double scale, double scale_rel_sigma) {
    const long m = ps.m;
    std::vector<double> qv(size_t(hmax), 0.0), qt(size_t(hmax), 0.0); // indices j = 0..hmax-1
    for (long j = 0; j < hmax; ++j) {
        CoeffResult c = qplus_coeff(ps, j);
        qv[size_t(j)] = c.value;
        qt[size_t(j)] = c.tail_estimate + std::fabs(c.value) * kRelFloor;
    }
    const long start = 1 - m;
    std::vector<double> val(size_t(hmax - start + 1), 0.0), tl(size_t(hmax - start + 1), 0.0);
    auto p_at = [&](long n) { return (n >= 1 && n < long(pval.size())) ? pval[size_t(n)] : 0.0; };
    auto p_tl = [&](long n) { return (n >= 1 && n < long(ptail.size())) ? ptail[size_t(n)] : 0.0; };
    for (long e = start; e <= hmax; ++e) {
        double v = p_at(e + m); // leading q^-m coefficient of Qplus is exactly 1
        double t = p_tl(e + m);
        for (long j = 0; j < hmax; ++j) {
            long n = e - j;
            if (n < 1) continue;
            v += qv[size_t(j)] * p_at(n);
            t += qt[size_t(j)] * std::fabs(p_at(n)) + std::fabs(qv[size_t(j)]) * p_tl(n);
        }
        val[size_t(e - start)] = scale * v;
        tl[size_t(e - start)] = std::fabs(scale) * t + std::fabs(scale * v) * scale_rel_sigma;
    }
    MockSide out;
    out.series = QSeries(start, std::move(val));
    out.tail = std::move(tl);
    out.qplus_values = std::move(qv);
    out.start = start;
    return out;
}

CorrectionBasis basis_e2(long nmax) {
    CorrectionBasis b;
    b.labels = {"E2"};
    b.series = {eisenstein(2, nmax).to_floating()};
    return b;
}

CorrectionBasis basis_level9(long nmax) {
    CorrectionBasis b;
    b.labels = {"1 - 24 sum sigma_1(3n) q^(3n)", "1 + 12 sum (sum_{d|3n, 3 no| d} d) q^(3n)"};
    QSeries b1 = QSeries::zero_floating(0, nmax);
    QSeries b2 = QSeries::zero_floating(0, nmax);
    b1.set(0L, 1.0);
    b2.set(0L, 1.0);
    for (long e = 3; e <= nmax; e += 3) {
        b1.set(e, -24.0 * to_double(divisor_sum(e, 1)));
        b2.set(e, 12.0 * to_double(divisor_sum(e, 1, 3)));
    }
    b.series = {std::move(b1), std::move(b2)};
    return b;
}

CorrectionBasis basis_weight24(long nmax) {
    CorrectionBasis b;
    b.labels = {"E4^2*E6/Delta / 2^23", "E2 / 2^23"};
    QSeries e4 = eisenstein(4, nmax + 2);
    QSeries e6 = eisenstein(6, nmax + 2);
    QSeries num = ((e4 * e4) * e6.truncated(nmax + 2));
    QSeries delta = eta_power(24, 1, nmax + 3);
    QSeries pole = divide(num, delta).truncated(nmax);
    double scale = std::ldexp(1.0, -23); // 1 / 2^23
    b.series = {scale * pole.to_floating(), scale * eisenstein(2, nmax).to_floating()};
    return b;
}

struct Pipeline {
    PoincareSpec ps;
    CoefficientTable table;
    LSeriesResult ls;
    MockSide mock;
    CorrectionBasis basis;
    FitResult fit;
    QSeries lhs_series;
    long hmax_all = 0;
};

QSeries lhs_as_series(const LSeriesResult& ls, long start, long hmax) {
    QSeries::DblVec v(size_t(hmax - start + 1), 0.0);
    for (long h = 1; h <= hmax; ++h) v[size_t(h - start)] = ls.per_h[size_t(h - 1)].value;
    return QSeries(start, std::move(v));
}

std::vector<double> fit_row_sigma(const Pipeline& p, long flo, long fhi) {
    std::vector<double> sigma;
    for (long e = flo; e <= fhi; ++e) {
        double s = p.mock.tail_at(e);
        if (e >= 1) s += p.ls.per_h[size_t(e - 1)].tail_estimate;
        sigma.push_back(s);
    }
    return sigma;
}

ExampleReport assemble(int which, Pipeline& p, const VerifyOptions& opts, long test_hi) {
    ExampleReport rep;
    rep.example = which;
    rep.basis_labels = p.basis.labels;
    rep.coefficients = p.fit.coefficients;
    rep.coefficient_sigma = p.fit.coefficient_sigma;
    rep.fit_residual = p.fit.fit_residual;
    rep.predictive_residual = p.fit.predictive_residual;
    rep.lhs_values = p.ls.per_h;
    rep.pass = true;
    for (long h = 1; h <= p.hmax_all; ++h) {
        PerHRow row;
        row.h = h;
        row.lhs = p.ls.per_h[size_t(h - 1)].value;
        double rhs = p.mock.series.at(h);
        double tol = p.mock.tail_at(h) + p.ls.per_h[size_t(h - 1)].tail_estimate;
        for (size_t j = 0; j < p.basis.series.size(); ++j) {
            double bj = p.basis.series[j].at(h);
            rhs += p.fit.coefficients[j] * bj;
            tol += std::fabs(bj) * p.fit.coefficient_sigma[j];
        }
        row.rhs = rhs;
        row.residual = std::fabs(row.lhs - rhs);
        row.tolerance = tol + kRelFloor * (std::fabs(row.lhs) + std::fabs(rhs) + 1.0);
        row.held_out = (h >= p.fit.test_lo && h <= test_hi);
        row.pass = row.residual <= (opts.tol > 0.0 ? opts.tol : row.tolerance);
        if (row.held_out && !row.pass) rep.pass = false;
        rep.per_h.push_back(row);
    }
    return rep;
}

SumControl conv_control(const VerifyOptions& opts, double fallback) {
    SumControl c = opts.control;
    c.tol = opts.sum_tol > 0.0 ? opts.sum_tol : fallback;
    return c;
}

ExampleReport run_example1(const VerifyOptions& opts) {
    Pipeline p;
    p.hmax_all = std::max(5L, opts.hmax);
    p.ps = PoincareSpec{1, 12, 1, opts.control};
    p.table = build_table(FormSpec::eta(24, 1), opts.terms + p.hmax_all + 2);
    p.ls = l_series(p.table, p.table, 0, p.hmax_all, opts.terms, conv_control(opts, 1.0));

    CoeffResult beta = petersson_beta(p.ps);
    std::vector<double> pv(size_t(p.hmax_all + 2), 0.0), pt(size_t(p.hmax_all + 2), 0.0);
    for (long n = 1; n <= p.hmax_all + 1; ++n) {
        pv[size_t(n)] = p.table(n);
        pt[size_t(n)] = std::fabs(pv[size_t(n)]) * kRelFloor;
    }
    p.mock = build_mock(p.ps, p.hmax_all, pv, pt, 1.0 / beta.value,
                        beta.tail_estimate / beta.value);
    p.basis = basis_e2(p.hmax_all);
    p.lhs_series = lhs_as_series(p.ls, 0, p.hmax_all);
    p.fit = fit_correction(p.lhs_series, p.mock.series, p.basis, {0, 4}, {5, opts.hmax},
                           fit_row_sigma(p, 0, 4));

    ExampleReport rep = assemble(1, p, opts, opts.hmax);
    rep.lhs_label = "L^(0)(Delta,Delta)";
    rep.rhs_label = "Qplus(-1,12,1)*Delta/beta + F,  F = gamma*E2";
    rep.beta = beta.value;
    return rep;
}

ExampleReport run_example2(const VerifyOptions& opts) {
    Pipeline p;
    p.hmax_all = std::max(15L, opts.hmax); // the rationality table runs to h = 15
    p.ps = PoincareSpec{1, 4, 9, opts.control};
    p.table = build_table(FormSpec::eta(8, 3), opts.terms + p.hmax_all + 2);
    p.ls = l_series(p.table, p.table, 0, p.hmax_all, opts.terms, conv_control(opts, 0.05));

    CoeffResult beta = petersson_beta(p.ps);
    std::vector<double> pv(size_t(p.hmax_all + 2), 0.0), pt(size_t(p.hmax_all + 2), 0.0);
    for (long n = 1; n <= p.hmax_all + 1; ++n) {
        pv[size_t(n)] = p.table(n);
        pt[size_t(n)] = std::fabs(pv[size_t(n)]) * kRelFloor;
    }
    p.mock = build_mock(p.ps, p.hmax_all, pv, pt, 1.0 / beta.value,
                        beta.tail_estimate / beta.value);
    p.basis = basis_level9(p.hmax_all);
    p.lhs_series = lhs_as_series(p.ls, 0, p.hmax_all);
    p.fit = fit_correction(p.lhs_series, p.mock.series, p.basis, {0, 4}, {5, opts.hmax},
                           fit_row_sigma(p, 0, 4));

    ExampleReport rep = assemble(2, p, opts, opts.hmax);
    rep.lhs_label = "L^(0)(f,f), f = eta(3tau)^8";
    rep.rhs_label = "Qplus(-1,4,9)*f/beta + F,  F = gamma*B1 + delta*B2";
    rep.beta = beta.value;
    double gamma = p.fit.coefficients[0], delta = p.fit.coefficients[1];
    // The identity makes T(f;h) the q^h coefficient of Qplus * f, a rational
    // number (the mock coefficients of this CM form are rational with small
    // denominators).  Snap those coefficients, convolve exactly with the
    // integral eta expansion, and the exact T drops out; the directly summed
    // T must then sit within its summation noise of it.
    QSeries qrat = QSeries::zero_exact(-1, 12);
    qrat.set(-1L, Rational(1));
    for (long j = 2; j <= 11; j += 3)
        qrat.set(j, rational_snap(p.mock.qplus_values[size_t(j)], 3000).value);
    QSeries trat = qrat * eta_power(8, 3, 13);
    for (long h = 3; h <= 12; h += 3) {
        TValueRow row;
        row.h = h;
        row.t = t_value(h, beta.value, gamma, delta, p.ls.per_h[size_t(h - 1)].value);
        RationalSnap snap = rational_snap(to_double(trat.rat_at(h)), 200000);
        row.snapped = snap.value;
        row.snap_distance = std::fabs(row.t - to_double(trat.rat_at(h)));
        rep.t_table.push_back(row);
    }
    return rep;
}

ExampleReport run_example3(const VerifyOptions& opts) {
    Pipeline p;
    p.hmax_all = std::max(5L, opts.hmax);
    p.ps = PoincareSpec{2, 24, 1, opts.control};
    p.table = build_table(FormSpec::poincare(2, 24, 1), opts.terms + p.hmax_all + 4, opts.control);
    p.ls = l_series(p.table, p.table, 0, p.hmax_all, opts.terms, conv_control(opts, 0.05));

    std::vector<double> pv(size_t(p.hmax_all + 3), 0.0), pt(size_t(p.hmax_all + 3), 0.0);
    for (long n = 1; n <= p.hmax_all + 2; ++n) {
        CoeffResult c = cusp_coeff(p.ps, n);
        pv[size_t(n)] = c.value;
        pt[size_t(n)] = c.tail_estimate + std::fabs(c.value) * kRelFloor;
    }
    p.mock = build_mock(p.ps, p.hmax_all, pv, pt, std::ldexp(1.0, -23), 0.0);
    p.basis = basis_weight24(p.hmax_all);
    p.lhs_series = lhs_as_series(p.ls, -1, p.hmax_all);
    p.fit = fit_correction(p.lhs_series, p.mock.series, p.basis, {-1, 4}, {5, opts.hmax},
                           fit_row_sigma(p, -1, 4));

    ExampleReport rep = assemble(3, p, opts, opts.hmax);
    rep.lhs_label = "L^(0)(f,f), f = P(2,24,1)";
    rep.rhs_label = "Qplus(-2,24,1)*P(2,24,1)/2^23 + F,  F = (gamma*E4^2E6/Delta + delta*E2)/2^23";
    rep.beta = pv[2]; // coefficient of q^2 in P(2,24,1)
    rep.correction_pole = p.fit.coefficients[0] * p.basis.series[0].at(-1);
    return rep;
}

} // namespace

ExampleReport verify_example(int which, const VerifyOptions& opts) {
    switch (which) {
        case 1: return run_example1(opts);
        case 2: return run_example2(opts);
        case 3: return run_example3(opts);
        default: throw std::invalid_argument("verify_example: which must be 1, 2 or 3");
    }
}

std::string to_json(const ExampleReport& rep) {
    nlohmann::json j;
    j["example"] = rep.example;
    j["identity"] = {{"lhs", rep.lhs_label},
                     {"rhs", rep.rhs_label},
                     {"basis", rep.basis_labels},
                     {"coefficients", rep.coefficients}};
    j["per_h"] = nlohmann::json::array();
    for (const auto& row : rep.per_h)
        j["per_h"].push_back({{"h", row.h}, {"lhs", row.lhs}, {"rhs", row.rhs}, {"residual", row.residual}});
    j["pass"] = rep.pass;
    return j.dump(2);
}

std::string to_text(const ExampleReport& rep) {
    std::ostringstream os;
    os << "example " << rep.example << ": " << rep.lhs_label << "\n";
    os << "  identity: " << rep.rhs_label << "\n";
    os << std::setprecision(10);
    if (rep.beta != 0.0) os << "  beta = " << rep.beta << "\n";
    for (size_t i = 0; i < rep.coefficients.size(); ++i) {
        os << "  coefficient[" << rep.basis_labels[i] << "] = " << rep.coefficients[i]
           << "  (+- " << std::setprecision(3) << rep.coefficient_sigma[i] << std::setprecision(10) << ")\n";
    }
    if (rep.correction_pole != 0.0)
        os << "  fitted correction has q^-1 coefficient " << rep.correction_pole
           << " (weakly holomorphic)\n";
    os << "  h    lhs              rhs              residual     tolerance    status\n";
    for (const auto& row : rep.per_h) {
        os << "  " << std::left << std::setw(4) << row.h << std::right
           << std::setw(16) << row.lhs << " " << std::setw(16) << row.rhs << " "
           << std::setprecision(3) << std::setw(12) << row.residual << " "
           << std::setw(12) << row.tolerance << std::setprecision(10) << " "
           << (row.pass ? "ok" : "FAIL") << (row.held_out ? " (held out)" : "") << "\n";
    }
    if (!rep.t_table.empty()) {
        os << "  T(f;h) rationality table:\n";
        for (const auto& t : rep.t_table) {
            os << "    h=" << t.h << "  T=" << t.t << "  ~ " << to_string(t.snapped)
               << "  (|T - p/q| = " << std::setprecision(3) << t.snap_distance
               << std::setprecision(10) << ")\n";
        }
    }
    os << (rep.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

} // namespace scv
