#include "scv/series_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <istream>

namespace scv {

namespace {

constexpr int64_t kBigSentinel = std::numeric_limits<int64_t>::min();

void put_u64(std::ostream& os, uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (unsigned char)((v >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_i64(std::ostream& os, int64_t v) { put_u64(os, (uint64_t)v); }

void put_double(std::ostream& os, double d) {
    uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

uint64_t get_u64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    if (!is) throw std::runtime_error("series cache: truncated file");
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= (uint64_t)b[i] << (8 * i);
    return v;
}

int64_t get_i64(std::istream& is) { return (int64_t)get_u64(is); }

double get_double(std::istream& is) {
    uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

void put_bigint(std::ostream& os, const BigInt& z) {
    if (fits_int64(z) && z.get_si() != kBigSentinel) {
        put_i64(os, z.get_si());
        return;
    }
    put_i64(os, kBigSentinel);
    size_t nlimbs = 0;
    BigInt mag = abs(z);
    std::vector<uint64_t> limbs((mpz_sizeinbase(mag.get_mpz_t(), 2) + 63) / 64);
    mpz_export(limbs.data(), &nlimbs, -1, 8, 0, 0, mag.get_mpz_t());
    int64_t count = int64_t(nlimbs);
    put_i64(os, sgn(z) < 0 ? -count : count);
    for (size_t i = 0; i < nlimbs; ++i) put_u64(os, limbs[i]);
}

BigInt get_bigint(std::istream& is) {
    int64_t head = get_i64(is);
    if (head != kBigSentinel) return BigInt((long)head);
    int64_t count = get_i64(is);
    bool neg = count < 0;
    size_t n = size_t(neg ? -count : count);
    std::vector<uint64_t> limbs(n);
    for (size_t i = 0; i < n; ++i) limbs[i] = get_u64(is);
    BigInt z;
    mpz_import(z.get_mpz_t(), n, -1, 8, 0, 0, limbs.data());
    return neg ? BigInt(-z) : z;
}

} // namespace

void write_series(std::ostream& os, const QSeries& s) {
    os.write("SCV1", 4);
    put_i64(os, s.is_exact() ? 0 : 1);
    put_i64(os, s.start_exponent());
    put_i64(os, s.nmax());
    if (s.is_exact()) {
        for (const auto& c : s.rat_coeffs()) {
            put_bigint(os, c.get_num());
            put_bigint(os, c.get_den());
        }
    } else {
        for (double c : s.dbl_coeffs()) put_double(os, c);
    }
    if (!os) throw std::runtime_error("series cache: write failed");
}

QSeries read_series(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "SCV1", 4) != 0)
        throw std::runtime_error("series cache: bad magic (expected SCV1)");
    int64_t mode = get_i64(is);
    int64_t start = get_i64(is);
    int64_t nmax = get_i64(is);
    if (mode != 0 && mode != 1) throw std::runtime_error("series cache: unknown coefficient mode");
    long count = long(nmax - start + 1);
    if (count < 0) count = 0;
    if (mode == 0) {
        QSeries::RatVec c(static_cast<size_t>(count));
        for (auto& x : c) {
            BigInt num = get_bigint(is);
            BigInt den = get_bigint(is);
            if (den == 0) throw std::runtime_error("series cache: zero denominator");
            Rational r(num, den);
            r.canonicalize();
            x = r;
        }
        return QSeries(start, std::move(c)).truncated(nmax);
    }
    QSeries::DblVec c(static_cast<size_t>(count));
    for (auto& x : c) x = get_double(is);
    return QSeries(start, std::move(c)).truncated(nmax);
}

void save_series(const std::string& path, const QSeries& s) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    write_series(f, s);
}

QSeries load_series(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return read_series(f);
}

} // namespace scv
