#include "scv/qseries.hpp"

#include <algorithm>
#include <cmath>

namespace scv {

namespace {

// Sparse factor in the auxiliary variable x: list of (exponent, coefficient).
struct SparseFactor {
    std::vector<long> exp;
    std::vector<long> coef;
};

// prod (1-x^n) = sum_{j in Z} (-1)^j x^(j(3j-1)/2)   (Euler)
SparseFactor pentagonal_factor(long emax) {
    SparseFactor f;
    f.exp.push_back(0);
    f.coef.push_back(1);
    for (long j = 1;; ++j) {
        long g1 = j * (3 * j - 1) / 2;
        long g2 = j * (3 * j + 1) / 2;
        if (g1 > emax && g2 > emax) break;
        long s = (j % 2 == 0) ? 1 : -1;
        if (g1 <= emax) { f.exp.push_back(g1); f.coef.push_back(s); }
        if (g2 <= emax) { f.exp.push_back(g2); f.coef.push_back(s); }
    }
    return f;
}

// prod (1-x^n)^3 = sum_{j>=0} (-1)^j (2j+1) x^(j(j+1)/2)   (Jacobi)
SparseFactor triple_factor(long emax) {
    SparseFactor f;
    for (long j = 0;; ++j) {
        long t = j * (j + 1) / 2;
        if (t > emax) break;
        f.exp.push_back(t);
        f.coef.push_back((j % 2 == 0) ? (2 * j + 1) : -(2 * j + 1));
    }
    return f;
}

// In-place dense *= sparse; valid because every factor has constant term 1.
template <typename Vec>
void apply_sparse(Vec& dense, const SparseFactor& f) {
    const long n = long(dense.size());
    for (long t = n - 1; t >= 0; --t) {
        for (size_t j = 1; j < f.exp.size(); ++j) {
            long e = f.exp[j];
            if (e > t) break;
            dense[t] += f.coef[j] * dense[t - e];
        }
    }
}

template <typename Vec>
Vec euler_product_power(long power, long emax) {
    Vec body(emax + 1);
    body[0] = typename Vec::value_type(1);
    if (emax < 0) return body;
    long triples = power / 3;
    long singles = power % 3;
    if (triples > 0) {
        SparseFactor s = triple_factor(emax);
        for (long i = 0; i < triples; ++i) apply_sparse(body, s);
    }
    if (singles > 0) {
        SparseFactor p = pentagonal_factor(emax);
        for (long i = 0; i < singles; ++i) apply_sparse(body, p);
    }
    return body;
}

} // namespace

QSeries QSeries::zero_exact(long start, long nmax) {
    QSeries s;
    s.start_ = start;
    s.nmax_ = nmax;
    s.coeff_ = RatVec(size_t(std::max(0L, nmax - start + 1)));
    return s;
}

QSeries QSeries::zero_floating(long start, long nmax) {
    QSeries s;
    s.start_ = start;
    s.nmax_ = nmax;
    s.coeff_ = DblVec(size_t(std::max(0L, nmax - start + 1)), 0.0);
    return s;
}

QSeries QSeries::one_exact(long nmax) {
    QSeries s = zero_exact(0, nmax);
    if (nmax >= 0) s.rat_coeffs()[0] = 1;
    return s;
}

const QSeries::RatVec& QSeries::rat_coeffs() const {
    if (!is_exact()) throw std::invalid_argument("QSeries: exact coefficients requested from floating series");
    return std::get<RatVec>(coeff_);
}

const QSeries::DblVec& QSeries::dbl_coeffs() const {
    if (is_exact()) throw std::invalid_argument("QSeries: floating coefficients requested from exact series");
    return std::get<DblVec>(coeff_);
}

QSeries::RatVec& QSeries::rat_coeffs() {
    if (!is_exact()) throw std::invalid_argument("QSeries: exact coefficients requested from floating series");
    return std::get<RatVec>(coeff_);
}

QSeries::DblVec& QSeries::dbl_coeffs() {
    if (is_exact()) throw std::invalid_argument("QSeries: floating coefficients requested from exact series");
    return std::get<DblVec>(coeff_);
}

Rational QSeries::rat_at(long e) const {
    if (e > nmax_) throw std::out_of_range("QSeries: coefficient beyond truncation bound is unknown");
    if (e < start_) return Rational(0);
    return rat_coeffs()[size_t(e - start_)];
}

double QSeries::at(long e) const {
    if (e > nmax_) throw std::out_of_range("QSeries: coefficient beyond truncation bound is unknown");
    if (e < start_) return 0.0;
    if (is_exact()) return to_double(std::get<RatVec>(coeff_)[size_t(e - start_)]);
    return std::get<DblVec>(coeff_)[size_t(e - start_)];
}

void QSeries::set(long e, Rational v) {
    if (e < start_ || e > nmax_) throw std::out_of_range("QSeries::set: exponent outside stored range");
    rat_coeffs()[size_t(e - start_)] = std::move(v);
}

void QSeries::set(long e, double v) {
    if (e < start_ || e > nmax_) throw std::out_of_range("QSeries::set: exponent outside stored range");
    dbl_coeffs()[size_t(e - start_)] = v;
}

QSeries QSeries::to_floating() const {
    if (!is_exact()) return *this;
    DblVec d(rat_coeffs().size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = to_double(rat_coeffs()[i]);
    return QSeries(start_, std::move(d));
}

QSeries QSeries::truncated(long new_nmax) const {
    if (new_nmax >= nmax_) return *this;
    QSeries s = *this;
    s.nmax_ = new_nmax;
    size_t keep = size_t(std::max(0L, new_nmax - start_ + 1));
    if (s.is_exact()) std::get<RatVec>(s.coeff_).resize(keep);
    else std::get<DblVec>(s.coeff_).resize(keep);
    return s;
}

QSeries QSeries::shifted(long delta) const {
    QSeries s = *this;
    s.start_ += delta;
    s.nmax_ += delta;
    return s;
}

bool QSeries::is_zero() const {
    if (is_exact()) {
        for (const auto& c : std::get<RatVec>(coeff_)) if (c != 0) return false;
    } else {
        for (double c : std::get<DblVec>(coeff_)) if (c != 0.0) return false;
    }
    return true;
}

void QSeries::check_mode(const QSeries& other) const {
    if (mode() != other.mode())
        throw std::invalid_argument("QSeries: exact and floating series cannot mix; convert explicitly");
}

namespace {

template <typename Vec>
Vec add_vecs(long astart, const Vec& a, long bstart, const Vec& b, long rstart, long rnmax) {
    Vec r(size_t(std::max(0L, rnmax - rstart + 1)));
    for (long e = rstart; e <= rnmax; ++e) {
        typename Vec::value_type v{};
        if (e >= astart && e - astart < long(a.size())) v += a[size_t(e - astart)];
        if (e >= bstart && e - bstart < long(b.size())) v += b[size_t(e - bstart)];
        r[size_t(e - rstart)] = v;
    }
    return r;
}

template <typename Vec>
Vec mul_vecs(const Vec& a, const Vec& b, long out_len) {
    Vec r(size_t(std::max(0L, out_len)));
    const long na = long(a.size()), nb = long(b.size());
    for (long i = 0; i < na; ++i) {
        if (a[size_t(i)] == typename Vec::value_type{}) continue;
        long jmax = std::min(nb - 1, out_len - 1 - i);
        for (long j = 0; j <= jmax; ++j) {
            r[size_t(i + j)] += a[size_t(i)] * b[size_t(j)];
        }
    }
    return r;
}

} // namespace

QSeries operator+(const QSeries& a, const QSeries& b) {
    a.check_mode(b);
    long rstart = std::min(a.start_, b.start_);
    long rnmax = std::min(a.nmax_, b.nmax_);
    QSeries r;
    r.start_ = rstart;
    r.nmax_ = rnmax;
    if (a.is_exact())
        r.coeff_ = add_vecs(a.start_, std::get<QSeries::RatVec>(a.coeff_), b.start_, std::get<QSeries::RatVec>(b.coeff_), rstart, rnmax);
    else
        r.coeff_ = add_vecs(a.start_, std::get<QSeries::DblVec>(a.coeff_), b.start_, std::get<QSeries::DblVec>(b.coeff_), rstart, rnmax);
    return r;
}

QSeries operator-(const QSeries& a) {
    QSeries r = a;
    if (r.is_exact()) for (auto& c : r.rat_coeffs()) c = -c;
    else for (auto& c : r.dbl_coeffs()) c = -c;
    return r;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a, const QSeries& b) {
    a.check_mode(b);
    // Coefficient t of the product needs a up to t-b.start and b up to
    // t-a.start, so the reliable range ends at min(a.start+b.nmax, b.start+a.nmax).
    long rstart = a.start_ + b.start_;
    long rnmax = std::min(a.start_ + b.nmax_, b.start_ + a.nmax_);
    QSeries r;
    r.start_ = rstart;
    r.nmax_ = rnmax;
    long out_len = std::max(0L, rnmax - rstart + 1);
    if (a.is_exact())
        r.coeff_ = mul_vecs(std::get<QSeries::RatVec>(a.coeff_), std::get<QSeries::RatVec>(b.coeff_), out_len);
    else
        r.coeff_ = mul_vecs(std::get<QSeries::DblVec>(a.coeff_), std::get<QSeries::DblVec>(b.coeff_), out_len);
    return r;
}

QSeries operator*(const Rational& c, const QSeries& a) {
    QSeries r = a;
    for (auto& x : r.rat_coeffs()) x *= c;
    return r;
}

QSeries operator*(double c, const QSeries& a) {
    QSeries r = a;
    for (auto& x : r.dbl_coeffs()) x *= c;
    return r;
}

bool operator==(const QSeries& a, const QSeries& b) {
    if (a.mode() != b.mode() || a.nmax() != b.nmax()) return false;
    long lo = std::min(a.start_exponent(), b.start_exponent());
    for (long e = lo; e <= a.nmax(); ++e) {
        if (a.is_exact()) {
            if (a.rat_at(e) != b.rat_at(e)) return false;
        } else {
            if (a.at(e) != b.at(e)) return false;
        }
    }
    return true;
}

QSeries theta_derivative(const QSeries& a) {
    QSeries r = a;
    if (r.is_exact()) {
        auto& c = r.rat_coeffs();
        for (long e = r.start_exponent(); e <= r.nmax(); ++e) c[size_t(e - r.start_exponent())] *= e;
    } else {
        auto& c = r.dbl_coeffs();
        for (long e = r.start_exponent(); e <= r.nmax(); ++e) c[size_t(e - r.start_exponent())] *= double(e);
    }
    return r;
}

namespace {

template <typename Vec>
Vec divide_vecs(long astart, const Vec& a, long bstart, const Vec& b, long cstart, long cnmax) {
    using T = typename Vec::value_type;
    const T& pivot = b[0];
    Vec c(size_t(std::max(0L, cnmax - cstart + 1)));
    for (long m = cstart; m <= cnmax; ++m) {
        long t = m + bstart; // exponent in a that determines c_m
        T acc{};
        if (t >= astart && t - astart < long(a.size())) acc = a[size_t(t - astart)];
        long ulim = std::min(long(b.size()) - 1, m - cstart);
        for (long u = 1; u <= ulim; ++u) {
            acc -= b[size_t(u)] * c[size_t(m - cstart - u)];
        }
        c[size_t(m - cstart)] = acc / pivot;
    }
    return c;
}

} // namespace

QSeries divide(const QSeries& a, const QSeries& b) {
    a.check_mode(b);
    if (b.size() <= 0) throw std::invalid_argument("divide: empty divisor");
    bool zero_lead = b.is_exact() ? (b.rat_coeffs()[0] == 0) : (b.dbl_coeffs()[0] == 0.0);
    if (zero_lead)
        throw std::invalid_argument("divide: divisor has zero leading coefficient; shift its start exponent first");
    long cstart = a.start_exponent() - b.start_exponent();
    long cnmax = std::min(a.nmax() - b.start_exponent(),
                          b.nmax() + a.start_exponent() - 2 * b.start_exponent());
    QSeries r;
    if (a.is_exact())
        r = QSeries(cstart, divide_vecs(a.start_exponent(), a.rat_coeffs(), b.start_exponent(), b.rat_coeffs(), cstart, cnmax));
    else
        r = QSeries(cstart, divide_vecs(a.start_exponent(), a.dbl_coeffs(), b.start_exponent(), b.dbl_coeffs(), cstart, cnmax));
    return r.truncated(cnmax);
}

Rational divisor_sum(long n, long weight, long exclude_multiples_of) {
    if (n < 1) throw std::invalid_argument("divisor_sum: n must be positive");
    BigInt total = 0;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        long e = n / d;
        if (exclude_multiples_of == 0 || d % exclude_multiples_of != 0) {
            BigInt p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(weight));
            total += p;
        }
        if (e != d && (exclude_multiples_of == 0 || e % exclude_multiples_of != 0)) {
            BigInt p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e), static_cast<unsigned long>(weight));
            total += p;
        }
    }
    return Rational(total);
}

Rational bernoulli(int k) {
    if (k < 0) throw std::invalid_argument("bernoulli: k must be nonnegative");
    static std::vector<Rational> cache{Rational(1)};
    // B_m = -1/(m+1) * sum_{j<m} C(m+1, j) B_j
    for (int m = int(cache.size()); m <= k; ++m) {
        Rational acc(0);
        BigInt binom = 1; // C(m+1, 0)
        for (int j = 0; j < m; ++j) {
            acc += Rational(binom) * cache[size_t(j)];
            binom = binom * (m + 1 - j) / (j + 1);
        }
        Rational b = -acc / Rational(m + 1);
        b.canonicalize();
        cache.push_back(b);
    }
    return cache[size_t(k)];
}

QSeries eta_power(long power, long scale, long nmax) {
    if (power < 1 || scale < 1) throw std::invalid_argument("eta_power: power and scale must be positive");
    if ((power * scale) % 24 != 0)
        throw std::invalid_argument("eta_power: power*scale must be divisible by 24 for an integral leading exponent");
    long e0 = power * scale / 24;
    if (nmax < e0) return QSeries::zero_exact(e0, nmax);
    long emax = (nmax - e0) / scale;
    auto body = euler_product_power<std::vector<Rational>>(power, emax);
    QSeries::RatVec out(size_t(nmax - e0 + 1));
    for (long t = 0; t <= emax; ++t) out[size_t(scale * t)] = std::move(body[size_t(t)]);
    return QSeries(e0, std::move(out));
}

QSeries eisenstein(int k, long nmax) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("eisenstein: weight must be even and >= 2");
    QSeries s = QSeries::zero_exact(0, nmax);
    if (nmax < 0) return s;
    auto& c = s.rat_coeffs();
    c[0] = 1;
    if (nmax >= 1) {
        std::vector<BigInt> sigma(size_t(nmax + 1));
        for (long d = 1; d <= nmax; ++d) {
            BigInt p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), static_cast<unsigned long>(k - 1));
            for (long m = d; m <= nmax; m += d) sigma[size_t(m)] += p;
        }
        Rational factor = Rational(-2 * k) / bernoulli(k);
        factor.canonicalize();
        for (long n = 1; n <= nmax; ++n) c[size_t(n)] = factor * Rational(sigma[size_t(n)]);
    }
    return s;
}

QSeries j_function(long nmax) {
    if (nmax < -1) throw std::invalid_argument("j_function: nmax must be >= -1");
    QSeries e4 = eisenstein(4, nmax + 1);
    QSeries delta = eta_power(24, 1, nmax + 2);
    QSeries num = (e4 * e4) * e4.truncated(nmax + 1);
    return divide(num, delta).truncated(nmax);
}

QSeries r_series(double alpha, long nmax) {
    if (nmax < -1) throw std::invalid_argument("r_series: nmax must be >= -1");
    QSeries j = j_function(std::max(0L, nmax)).to_floating();
    QSeries delta = eta_power(24, 1, nmax + 2).to_floating();
    QSeries bracket = j * j - 1464.0 * j;
    double c0 = alpha * alpha - 1464.0 * alpha;
    QSeries constant = QSeries::zero_floating(bracket.start_exponent(), bracket.nmax());
    if (constant.nmax() >= 0) constant.set(0, c0);
    return (-(delta * (bracket - constant))).truncated(nmax);
}

} // namespace scv
