#pragma once

#include "scv/rational.hpp"

#include <variant>
#include <vector>
#include <span>
#include <stdexcept>

namespace scv {

// Truncated Laurent q-expansion.  Coefficients are stored for exponents
// start_exponent() .. nmax() inclusive; exponents below the start are zero by
// construction, exponents above nmax are UNKNOWN, never zero.  All arithmetic
// tracks the truncation bound so that nothing ever reads past it.
//
// A series is either exact (GMP rationals) or floating (doubles).  The two
// modes never mix silently; to_floating() is the only crossing point.
class QSeries {
public:
    enum class Mode { exact, floating };

    using RatVec = std::vector<Rational>;
    using DblVec = std::vector<double>;

    QSeries() : start_(0), nmax_(-1), coeff_(RatVec{}) {}

    static QSeries zero_exact(long start, long nmax);
    static QSeries zero_floating(long start, long nmax);
    static QSeries one_exact(long nmax);

    // Series from explicit coefficients, first entry at exponent `start`.
    QSeries(long start, RatVec c) : start_(start), nmax_(start + long(c.size()) - 1), coeff_(std::move(c)) {}
    QSeries(long start, DblVec c) : start_(start), nmax_(start + long(c.size()) - 1), coeff_(std::move(c)) {}

    Mode mode() const { return std::holds_alternative<RatVec>(coeff_) ? Mode::exact : Mode::floating; }
    bool is_exact() const { return mode() == Mode::exact; }
    long start_exponent() const { return start_; }
    long nmax() const { return nmax_; }
    long size() const { return nmax_ - start_ + 1; }

    const RatVec& rat_coeffs() const;
    const DblVec& dbl_coeffs() const;
    RatVec& rat_coeffs();
    DblVec& dbl_coeffs();

    // Coefficient at exponent e.  Below the start this is an exact zero;
    // past nmax the value is unknown and the read is rejected.
    Rational rat_at(long e) const;
    double at(long e) const;

    void set(long e, Rational v);
    void set(long e, double v);

    QSeries to_floating() const;

    // Drop coefficients above new_nmax (new_nmax may exceed nmax only for a
    // zero-extension-free no-op; information is never invented).
    QSeries truncated(long new_nmax) const;

    // Multiply by q^delta.
    QSeries shifted(long delta) const;

    bool is_zero() const;

    // Throws unless both series share a coefficient mode.
    void check_mode(const QSeries& other) const;

private:
    long start_;
    long nmax_;
    std::variant<RatVec, DblVec> coeff_;

    friend QSeries operator+(const QSeries&, const QSeries&);
    friend QSeries operator-(const QSeries&, const QSeries&);
    friend QSeries operator*(const QSeries&, const QSeries&);
};

QSeries operator+(const QSeries& a, const QSeries& b);
QSeries operator-(const QSeries& a, const QSeries& b);
QSeries operator*(const QSeries& a, const QSeries& b);
QSeries operator*(const Rational& c, const QSeries& a);
QSeries operator*(double c, const QSeries& a);
QSeries operator-(const QSeries& a);

bool operator==(const QSeries& a, const QSeries& b);

// q d/dq: the coefficient at exponent n picks up a factor n (negative n included).
QSeries theta_derivative(const QSeries& a);

// Exact division; the divisor's leading (start) coefficient must be nonzero.
QSeries divide(const QSeries& a, const QSeries& b);

// sigma_weight(n), optionally skipping divisors that are multiples of
// `exclude_multiples_of` (0 = keep everything).
Rational divisor_sum(long n, long weight, long exclude_multiples_of = 0);

// Exact Bernoulli number B_k (B_1 = -1/2 convention).
Rational bernoulli(int k);

// q^(power*scale/24) * prod_{n>=1} (1 - q^(scale*n))^power, exact integers.
// power*scale must be divisible by 24 so the leading exponent is integral.
QSeries eta_power(long power, long scale, long nmax);

// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, exact, k even >= 2.
QSeries eisenstein(int k, long nmax);

// Klein j = E_4^3 / Delta, exact, leading term q^-1.
QSeries j_function(long nmax);

// -Delta * (j^2 - 1464 j - alpha^2 + 1464 alpha), floating, leading term -q^-1.
QSeries r_series(double alpha, long nmax);

} // namespace scv
