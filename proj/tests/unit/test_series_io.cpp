#include <doctest.h>

#include "scv/qseries.hpp"
#include "scv/series_io.hpp"

#include <sstream>

using namespace scv;

TEST_CASE("rational cache round-trip with bigint promotion") {
    // 100! overflows int64 by a wide margin, forcing the promoted encoding.
    BigInt big = 1;
    for (int i = 2; i <= 100; ++i) big *= i;
    Rational third(big, 3);
    third.canonicalize();
    QSeries s(-2, QSeries::RatVec{Rational(big), make_rational(-3, 7), Rational(0), third * -1});
    std::stringstream buf;
    write_series(buf, s);
    QSeries r = read_series(buf);
    CHECK(r.is_exact());
    CHECK(r.start_exponent() == s.start_exponent());
    CHECK(r.nmax() == s.nmax());
    for (long e = s.start_exponent(); e <= s.nmax(); ++e) CHECK(r.rat_at(e) == s.rat_at(e));
}

TEST_CASE("float cache round-trip is bit-exact") {
    QSeries s(0, QSeries::DblVec{1.0, -0.3325, 1e-300, 2.840287435});
    std::stringstream buf;
    write_series(buf, s);
    QSeries r = read_series(buf);
    CHECK(!r.is_exact());
    for (long e = 0; e <= 3; ++e) CHECK(r.at(e) == s.at(e));
}

TEST_CASE("bad magic is rejected") {
    std::stringstream buf("XXXXgarbage");
    CHECK_THROWS_AS(read_series(buf), std::runtime_error);
}

TEST_CASE("header starts with the SCV1 magic") {
    QSeries s(0, QSeries::DblVec{1.0});
    std::stringstream buf;
    write_series(buf, s);
    std::string bytes = buf.str();
    REQUIRE(bytes.size() >= 4);
    CHECK(bytes.substr(0, 4) == "SCV1");
}
