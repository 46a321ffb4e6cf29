#include "scv/kloosterman.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace scv {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct KeyHash {
    size_t operator()(const std::tuple<long, long, long>& k) const {
        auto [a, b, c] = k;
        size_t h = std::hash<long>()(a);
        h ^= std::hash<long>()(b) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        h ^= std::hash<long>()(c) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

std::unordered_map<std::tuple<long, long, long>, double, KeyHash> g_cache;
std::shared_mutex g_cache_mutex;

long positive_mod(long a, long c) {
    long r = a % c;
    return r < 0 ? r + c : r;
}

} // namespace

long mod_inverse(long a, long c) {
    // extended Euclid: returns x with a*x == 1 (mod c)
    long r0 = c, r1 = positive_mod(a, c);
    long t0 = 0, t1 = 1;
    while (r1 != 0) {
        long q = r0 / r1;
        long r2 = r0 - q * r1;
        long t2 = t0 - q * t1;
        r0 = r1; r1 = r2;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw std::invalid_argument("mod_inverse: arguments are not coprime");
    return positive_mod(t0, c);
}

double kloosterman_direct(long m, long n, long c) {
    if (c < 1) throw std::invalid_argument("kloosterman: modulus must be >= 1");
    if (c == 1) return 1.0;
    m = positive_mod(m, c);
    n = positive_mod(n, c);
    // Pair v with c-v: the two terms are conjugate, so each coprime v < c/2
    // contributes 2*cos once.  Self-paired v (only v = c/2) is coprime to c
    // only for c = 2.
    double sum = 0.0;
    for (long v = 1; 2 * v < c; ++v) {
        if (std::gcd(v, c) != 1) continue;
        long vbar = mod_inverse(v, c);
        long phase = positive_mod(m * vbar + n * v, c);
        sum += 2.0 * std::cos(kTwoPi * double(phase) / double(c));
    }
    if (c == 2) {
        long phase = positive_mod(m + n, 2);
        sum += std::cos(kTwoPi * double(phase) / 2.0);
    }
    return sum;
}

double kloosterman(long m, long n, long c) {
    if (c < 1) throw std::invalid_argument("kloosterman: modulus must be >= 1");
    long mm = positive_mod(m, c), nn = positive_mod(n, c);
    if (mm > nn) std::swap(mm, nn); // K is symmetric in (m, n)
    std::tuple<long, long, long> key{mm, nn, c};
    {
        std::shared_lock lock(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return it->second;
    }
    double v = kloosterman_direct(mm, nn, c);
    {
        std::unique_lock lock(g_cache_mutex);
        g_cache.emplace(key, v);
    }
    return v;
}

double kloosterman(const KloostermanQuery& q) { return kloosterman(q.m, q.n, q.c); }

void clear_kloosterman_cache() {
    std::unique_lock lock(g_cache_mutex);
    g_cache.clear();
}

} // namespace scv
