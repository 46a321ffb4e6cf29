#include <doctest.h>

#include "scv/qseries.hpp"
#include "scv/verify.hpp"

#include <cmath>
#include <random>

using namespace scv;

TEST_CASE("rational_snap") {
    RationalSnap s1 = rational_snap(-8.2500001, 100);
    CHECK(s1.value == Rational(-33, 4));
    CHECK(s1.distance < 1e-6);

    RationalSnap s2 = rational_snap(0.392, 200);
    CHECK(s2.value == Rational(49, 125));
    CHECK(s2.distance <= 1e-3);

    RationalSnap s3 = rational_snap(0.5, 2);
    CHECK(s3.value == Rational(1, 2));
    CHECK(s3.distance == 0.0);

    RationalSnap s4 = rational_snap(M_PI, 120);
    CHECK(s4.value == Rational(355, 113));

    CHECK_THROWS_AS(rational_snap(1.0, 0), std::invalid_argument);
}

TEST_CASE("t_value combines the divisor sums") {
    // T(f;h) = beta*Dhat + 24*beta*gamma*sigma_1(h) - 12*beta*delta*sigma'_1(h)
    double beta = 2.0, gamma = -0.5, delta = 0.25, dv = 3.0;
    // h = 6: sigma_1 = 12, excluding multiples of 3: 1+2 = 3
    double expect = beta * dv + 24.0 * beta * gamma * 12.0 - 12.0 * beta * delta * 3.0;
    CHECK(t_value(6, beta, gamma, delta, dv) == doctest::Approx(expect));
    CHECK_THROWS_AS(t_value(0, 1, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("fit_correction recovers a planted combination") {
    long nmax = 12;
    CorrectionBasis basis;
    basis.labels = {"E2", "pole"};
    QSeries e2 = eisenstein(2, nmax).to_floating();
    QSeries pole = QSeries::zero_floating(-1, nmax);
    pole.set(-1L, 1.0);
    for (long e = 0; e <= nmax; ++e) pole.set(e, double(3 * e * e + 1));
    basis.series = {e2, pole};

    double g0 = -0.352, g1 = 2.5e-4;
    QSeries mock = QSeries::zero_floating(-1, nmax);
    QSeries lhs = QSeries::zero_floating(-1, nmax);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> noise(-1e-9, 1e-9);
    for (long e = -1; e <= nmax; ++e) {
        double m = std::sin(double(e) * 1.7) * 5.0;
        mock.set(e, m);
        lhs.set(e, m + g0 * e2.at(e) + g1 * pole.at(e) + noise(rng));
    }
    FitResult fit = fit_correction(lhs, mock, basis, {-1, 4}, {5, 10});
    REQUIRE(fit.coefficients.size() == 2);
    CHECK(fit.coefficients[0] == doctest::Approx(g0).epsilon(1e-5));
    CHECK(fit.coefficients[1] == doctest::Approx(g1).epsilon(1e-3));
    CHECK(fit.predictive_residual < 1e-7);
    CHECK(fit.fit_residual < 1e-7);
}

TEST_CASE("fit_correction rejects a dependent basis") {
    long nmax = 8;
    CorrectionBasis basis;
    basis.labels = {"a", "b"};
    QSeries e2 = eisenstein(2, nmax).to_floating();
    basis.series = {e2, 2.0 * e2};
    QSeries zero = QSeries::zero_floating(0, nmax);
    CHECK_THROWS_AS(fit_correction(zero, zero, basis, {0, 4}, {5, 8}), std::invalid_argument);
}

TEST_CASE("fit_correction enforces disjoint ranges and row counts") {
    long nmax = 8;
    CorrectionBasis basis;
    basis.labels = {"E2"};
    basis.series = {eisenstein(2, nmax).to_floating()};
    QSeries zero = QSeries::zero_floating(0, nmax);
    CHECK_THROWS_AS(fit_correction(zero, zero, basis, {0, 4}, {3, 8}), std::invalid_argument);
    CHECK_THROWS_AS(fit_correction(zero, zero, basis, {0, 4}, {5, 8}, {1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("verify_example input validation") {
    CHECK_THROWS_AS(verify_example(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(verify_example(4, {}), std::invalid_argument);
}

TEST_CASE("verify_example(1) at desk scale reproduces the structure") {
    // Small term count: the identity holds within the (larger) reported
    // tolerances and the fitted coefficient approximates -1/beta.
    VerifyOptions opts;
    opts.terms = 30000;
    opts.hmax = 10;
    ExampleReport rep = verify_example(1, opts);
    CHECK(rep.example == 1);
    CHECK(rep.beta == doctest::Approx(2.8402).epsilon(1e-3));
    REQUIRE(rep.coefficients.size() == 1);
    CHECK(rep.coefficients[0] == doctest::Approx(-1.0 / 2.840287).epsilon(1e-2));
    CHECK(rep.per_h.size() == 10);
    CHECK(rep.pass);
}

TEST_CASE("the weight-24 correction space has a genuine simple pole") {
    QSeries e4 = eisenstein(4, 8), e6 = eisenstein(6, 8);
    QSeries pole = divide((e4 * e4) * e6.truncated(8), eta_power(24, 1, 9));
    CHECK(pole.start_exponent() == -1);
    CHECK(pole.rat_at(-1) == 1);
    CHECK(pole.rat_at(0) == 0);
}

TEST_CASE("prediction discipline: held-out residual stays near the fit noise") {
    VerifyOptions opts;
    opts.terms = 30000;
    ExampleReport rep = verify_example(1, opts);
    // the held-out rows are noisier than the fitted ones but must stay within
    // an order of magnitude of the summation noise, not blow up
    double noise = 0.0;
    for (const auto& v : rep.lhs_values) noise = std::max(noise, v.tail_estimate);
    CHECK(rep.predictive_residual < 10.0 * noise);
}

TEST_CASE("verify_example reports are deterministic") {
    VerifyOptions opts;
    opts.terms = 5000;
    opts.hmax = 6;
    ExampleReport a = verify_example(1, opts);
    ExampleReport b = verify_example(1, opts);
    CHECK(to_json(a) == to_json(b));
    CHECK(to_text(a) == to_text(b));
}

TEST_CASE("report JSON carries the pinned schema") {
    VerifyOptions opts;
    opts.terms = 5000;
    opts.hmax = 6;
    ExampleReport rep = verify_example(1, opts);
    std::string j = to_json(rep);
    CHECK(j.find("\"example\"") != std::string::npos);
    CHECK(j.find("\"identity\"") != std::string::npos);
    CHECK(j.find("\"lhs\"") != std::string::npos);
    CHECK(j.find("\"rhs\"") != std::string::npos);
    CHECK(j.find("\"basis\"") != std::string::npos);
    CHECK(j.find("\"coefficients\"") != std::string::npos);
    CHECK(j.find("\"per_h\"") != std::string::npos);
    CHECK(j.find("\"residual\"") != std::string::npos);
    CHECK(j.find("\"pass\"") != std::string::npos);
}
