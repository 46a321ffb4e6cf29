#include "scv/forms.hpp"

#include "scv/series_io.hpp"

#include <cstdint>
#include <thread>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scv {

namespace {

// Streaming multiply of a dense double table by a sparse factor with constant
// term 1: out[t] = in[t] + sum_j c_j in[t - e_j].  Iterating the sparse entry
// in the outer loop keeps every read sequential.
void apply_sparse_stream(std::vector<double>& cur, std::vector<double>& scratch,
                         const std::vector<long>& exp, const std::vector<long>& coef) {
    const long n = long(cur.size());
    scratch = cur;
    for (size_t j = 1; j < exp.size(); ++j) {
        const long e = exp[j];
        const double c = double(coef[j]);
        const double* in = scratch.data();
        double* out = cur.data();
        for (long t = e; t < n; ++t) out[t] += c * in[t - e];
    }
    // scratch holds the pre-multiplication values; cur accumulated the result
    // because the e = 0 coefficient is 1 and cur started as a copy of in.
}

void triple_product_factor(long emax, std::vector<long>& exp, std::vector<long>& coef) {
    exp.clear();
    coef.clear();
    for (long j = 0;; ++j) {
        long t = j * (j + 1) / 2;
        if (t > emax) break;
        exp.push_back(t);
        coef.push_back((j % 2 == 0) ? (2 * j + 1) : -(2 * j + 1));
    }
}

void pentagonal_factor(long emax, std::vector<long>& exp, std::vector<long>& coef) {
    exp.clear();
    coef.clear();
    exp.push_back(0);
    coef.push_back(1);
    for (long j = 1;; ++j) {
        long g1 = j * (3 * j - 1) / 2;
        long g2 = j * (3 * j + 1) / 2;
        if (g1 > emax && g2 > emax) break;
        long s = (j % 2 == 0) ? 1 : -1;
        if (g1 <= emax) { exp.push_back(g1); coef.push_back(s); }
        if (g2 <= emax) { exp.push_back(g2); coef.push_back(s); }
    }
}

// body = prod (1-x^n)^power up to x^emax, starting from `body` (seed series).
void euler_power_into(std::vector<double>& body, long power, long emax) {
    std::vector<long> exp, coef;
    std::vector<double> scratch;
    long triples = power / 3, singles = power % 3;
    if (triples > 0) {
        triple_product_factor(emax, exp, coef);
        for (long i = 0; i < triples; ++i) apply_sparse_stream(body, scratch, exp, coef);
    }
    if (singles > 0) {
        pentagonal_factor(emax, exp, coef);
        for (long i = 0; i < singles; ++i) apply_sparse_stream(body, scratch, exp, coef);
    }
}

std::vector<double> unit_table(long len) {
    std::vector<double> v(size_t(std::max(0L, len)), 0.0);
    if (!v.empty()) v[0] = 1.0;
    return v;
}

// Shift a body expansion in x to q-exponents e0 + scale*t, table size nmax+1.
std::vector<double> place_body(const std::vector<double>& body, long e0, long scale, long nmax) {
    std::vector<double> out(size_t(nmax + 1), 0.0);
    for (long t = 0; t < long(body.size()); ++t) {
        long e = e0 + scale * t;
        if (e > nmax) break;
        if (e >= 0) out[size_t(e)] = body[size_t(t)];
    }
    return out;
}

// Miller-style echelon basis of S_24(SL_2(Z)) as build recipes on big tables:
//   b1 = Delta*E4^3 - 720*Delta^2 = Delta*E12 - (65520/691)*Delta^2
//   b2 = Delta^2
// (E4^3 = E12 + (432000/691) Delta reduces the E4^3 product to eta passes
// against the cheap E12 divisor-sum table.)
//
// The Delta*E12 passes cannot run in doubles: an Eisenstein-seeded series
// shrinks towards cusp-form size under each eta factor, and the rounding
// noise injected early is amplified by every later pass (empirically the
// table is garbage beyond n ~ 10^4).  The passes below therefore run in
// exact 448-bit two's-complement integers on the integer series 691*E12;
// the crude growth bound 65520*sigma_11(10^6) * (sum (2j+1))^8 < 2^403
// keeps them overflow-free, and the single rounding happens at readout.
namespace limb {

constexpr int kLimbs = 7;

inline void addmul(uint64_t* out, const uint64_t* in, uint64_t c) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < kLimbs; ++i) {
        unsigned __int128 cur = (unsigned __int128)in[i] * c + out[i] + (uint64_t)carry;
        out[i] = (uint64_t)cur;
        carry = cur >> 64;
    }
}

inline void submul(uint64_t* out, const uint64_t* in, uint64_t c) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < kLimbs; ++i) {
        unsigned __int128 prod = (unsigned __int128)in[i] * c + (uint64_t)carry;
        uint64_t lo = (uint64_t)prod;
        carry = prod >> 64;
        uint64_t o = out[i];
        uint64_t r = o - lo;
        if (r > o) carry += 1;
        out[i] = r;
    }
}

inline double to_double(const uint64_t* v) {
    uint64_t mag[kLimbs];
    bool neg = (v[kLimbs - 1] >> 63) != 0;
    if (neg) {
        unsigned __int128 carry = 1;
        for (int i = 0; i < kLimbs; ++i) {
            unsigned __int128 cur = (unsigned __int128)(uint64_t)~v[i] + carry;
            mag[i] = (uint64_t)cur;
            carry = cur >> 64;
        }
    } else {
        for (int i = 0; i < kLimbs; ++i) mag[i] = v[i];
    }
    double r = 0.0;
    for (int i = kLimbs - 1; i >= 0; --i) r = r * 18446744073709551616.0 + double(mag[i]);
    return neg ? -r : r;
}

} // namespace limb

std::vector<double> delta_e12_table(long nmax) {
    const long emax = std::max(0L, nmax - 1);
    const size_t count = size_t(emax + 1);
    std::vector<uint64_t> cur(count * limb::kLimbs, 0), scratch;

    // seed: 691*E12 = 691 + 65520 sum sigma_11(n) q^n, exact
    {
        std::vector<BigInt> sigma(count);
        for (long d = 1; d <= emax; ++d) {
            BigInt p;
            mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(d), 11);
            for (long m = d; m <= emax; m += d) sigma[size_t(m)] += p;
        }
        BigInt v = 691;
        for (long t = 0; t <= emax; ++t) {
            if (t > 0) v = 65520 * sigma[size_t(t)];
            size_t n = 0;
            mpz_export(cur.data() + size_t(t) * limb::kLimbs, &n, -1, 8, 0, 0, v.get_mpz_t());
        }
    }

    std::vector<long> exp, coef;
    triple_product_factor(emax, exp, coef);
    const unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
    for (int pass = 0; pass < 8; ++pass) {
        scratch = cur;
        auto run = [&](long lo, long hi) {
            for (size_t j = 1; j < exp.size(); ++j) {
                const long e = exp[j];
                const uint64_t c = uint64_t(std::labs(coef[j]));
                const bool negc = coef[j] < 0;
                for (long t = std::max(lo, e); t < hi; ++t) {
                    uint64_t* out = cur.data() + size_t(t) * limb::kLimbs;
                    const uint64_t* in = scratch.data() + size_t(t - e) * limb::kLimbs;
                    if (negc) limb::submul(out, in, c);
                    else limb::addmul(out, in, c);
                }
            }
        };
        if (nthreads >= 2 && emax > 4096) {
            long mid = (emax + 1) / 2;
            std::thread worker(run, 0L, mid);
            run(mid, emax + 1);
            worker.join();
        } else {
            run(0, emax + 1);
        }
    }

    std::vector<double> body(count);
    for (size_t t = 0; t < count; ++t)
        body[t] = limb::to_double(cur.data() + t * limb::kLimbs) / 691.0;
    return place_body(body, 1, 1, nmax);
}

std::vector<double> delta_sq_table(long nmax) {
    std::vector<double> body = unit_table(std::max(0L, nmax - 2) + 1);
    euler_power_into(body, 48, std::max(0L, nmax - 2));
    return place_body(body, 2, 1, nmax);
}

std::vector<double> combine(double c1, const std::vector<double>& v1, double c2,
                            const std::vector<double>& v2) {
    std::vector<double> out(v1.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = c1 * v1[i] + c2 * v2[i];
    return out;
}

// Exact probe bases for the Poincare spaces the examples need.
std::vector<QSeries> probe_basis(int k, long N, long nmax) {
    if (k == 12 && N == 1) {
        return {eta_power(24, 1, nmax)};
    }
    if (k == 4 && N == 9) {
        // S_4(Gamma_0(9)) is one-dimensional, spanned by eta(3 tau)^8.
        return {eta_power(8, 3, nmax)};
    }
    if (k == 24 && N == 1) {
        QSeries delta = eta_power(24, 1, nmax + 1);
        QSeries e4 = eisenstein(4, nmax + 1);
        QSeries e4cubed = (e4 * e4) * e4;
        QSeries delta_sq = (delta * delta).truncated(nmax);
        QSeries b1 = (delta * e4cubed).truncated(nmax) - make_rational(720) * delta_sq;
        return {b1, delta_sq};
    }
    throw std::invalid_argument("build_table: no builtin cusp-form basis for weight " +
                                std::to_string(k) + ", level " + std::to_string(N));
}

} // namespace

FormSpec FormSpec::eta(long power, long scale) {
    if (power < 1 || scale < 1) throw std::invalid_argument("FormSpec::eta: power and scale must be positive");
    if ((power * scale) % 24 != 0)
        throw std::invalid_argument("FormSpec::eta: power*scale must be divisible by 24");
    if (power % 2 != 0)
        throw std::invalid_argument("FormSpec::eta: power must be even for an integral weight");
    FormSpec s;
    s.source = Source::eta_product;
    s.eta_power = power;
    s.eta_scale = scale;
    s.weight = int(power / 2);
    s.level = scale * scale;
    return s;
}

FormSpec FormSpec::poincare(long m, int k, long N) {
    FormSpec s;
    s.source = Source::poincare_lifted;
    s.m = m;
    s.weight = k;
    s.level = N;
    return s;
}

FormSpec FormSpec::from_series(int weight, long level, QSeries ser) {
    FormSpec s;
    s.source = Source::explicit_series;
    s.weight = weight;
    s.level = level;
    s.series = std::move(ser);
    return s;
}

FormSpec FormSpec::parse(const std::string& text, std::optional<int> weight_hint,
                         std::optional<long> level_hint) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.empty()) throw std::invalid_argument("form spec: empty string");
    try {
        if (parts[0] == "eta" && parts.size() == 3)
            return eta(std::stol(parts[1]), std::stol(parts[2]));
        if (parts[0] == "poincare" && parts.size() == 4)
            return poincare(std::stol(parts[1]), std::stoi(parts[2]), std::stol(parts[3]));
        if (parts[0] == "file" && parts.size() >= 2) {
            // Paths may contain ':'; re-join the remainder.
            std::string path = text.substr(5);
            if (!weight_hint)
                throw std::invalid_argument("form spec: file-backed forms need an explicit weight (--k1/--k2)");
            return from_series(*weight_hint, level_hint.value_or(1), load_series(path));
        }
    } catch (const std::logic_error& e) {
        throw std::invalid_argument("form spec '" + text + "': " + e.what());
    }
    throw std::invalid_argument("form spec '" + text + "': expected eta:POWER:SCALE | poincare:M:K:N | file:PATH");
}

std::string FormSpec::label() const {
    switch (source) {
        case Source::eta_product:
            return "eta(" + std::to_string(eta_scale) + "tau)^" + std::to_string(eta_power);
        case Source::poincare_lifted:
            return "P(" + std::to_string(m) + "," + std::to_string(weight) + "," + std::to_string(level) + ")";
        case Source::explicit_series:
            return "series(k=" + std::to_string(weight) + ")";
    }
    return "?";
}

std::vector<double> eta_power_table(long power, long scale, long nmax) {
    if (power < 1 || scale < 1) throw std::invalid_argument("eta_power_table: power and scale must be positive");
    if ((power * scale) % 24 != 0)
        throw std::invalid_argument("eta_power_table: power*scale must be divisible by 24");
    long e0 = power * scale / 24;
    if (nmax < e0) return std::vector<double>(size_t(std::max(0L, nmax + 1)), 0.0);
    long emax = (nmax - e0) / scale;
    std::vector<double> body = unit_table(emax + 1);
    euler_power_into(body, power, emax);
    return place_body(body, e0, scale, nmax);
}

std::vector<double> eisenstein_table(int k, long nmax) {
    if (k < 2 || k % 2 != 0) throw std::invalid_argument("eisenstein_table: weight must be even and >= 2");
    std::vector<double> out(size_t(std::max(0L, nmax + 1)), 0.0);
    if (nmax < 0) return out;
    out[0] = 1.0;
    double factor = to_double(Rational(-2 * k) / bernoulli(k));
    for (long d = 1; d <= nmax; ++d) {
        double p = factor * std::pow(double(d), double(k - 1));
        for (long m = d; m <= nmax; m += d) out[size_t(m)] += p;
    }
    return out;
}

CoefficientTable build_table(const FormSpec& spec, long nmax, const SumControl& control) {
    if (nmax < 1) throw std::invalid_argument("build_table: nmax must be >= 1");
    switch (spec.source) {
        case FormSpec::Source::eta_product: {
            return CoefficientTable(eta_power_table(spec.eta_power, spec.eta_scale, nmax),
                                    spec.weight, spec.level, spec.label());
        }
        case FormSpec::Source::explicit_series: {
            if (spec.series.nmax() < nmax)
                throw std::invalid_argument(
                    "build_table: explicit series is truncated below the requested bound");
            std::vector<double> a(size_t(nmax + 1), 0.0);
            for (long n = 1; n <= nmax; ++n) a[size_t(n)] = spec.series.at(n);
            return CoefficientTable(std::move(a), spec.weight, spec.level, spec.label());
        }
        case FormSpec::Source::poincare_lifted: {
            PoincareSpec ps{spec.m, spec.weight, spec.level, control};
            const int probe_count = 8;
            auto basis = probe_basis(spec.weight, spec.level, probe_count + 3);
            LiftResult lift = lift_to_basis(ps, basis, probe_count);
            const auto& c = lift.coefficients;
            std::vector<double> a;
            if (spec.weight == 12 && spec.level == 1) {
                a = eta_power_table(24, 1, nmax);
                for (auto& v : a) v *= c[0];
            } else if (spec.weight == 4 && spec.level == 9) {
                a = eta_power_table(8, 3, nmax);
                for (auto& v : a) v *= c[0];
            } else {
                // b1 = Delta*E12 - (65520/691) Delta^2, b2 = Delta^2.
                double w = to_double(Rational(-65520, 691));
                a = combine(c[0], delta_e12_table(nmax), c[0] * w + c[1], delta_sq_table(nmax));
            }
            return CoefficientTable(std::move(a), spec.weight, spec.level, spec.label());
        }
    }
    throw std::logic_error("build_table: unhandled source");
}

} // namespace scv
