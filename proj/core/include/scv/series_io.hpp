#pragma once

#include "scv/qseries.hpp"

#include <iosfwd>
#include <string>

namespace scv {

// Binary coefficient cache, magic "SCV1".
//
// Layout (all integers little-endian):
//   bytes 0..3   magic "SCV1"
//   int64        coefficient mode: 0 = exact rational, 1 = float64
//   int64        start_exponent
//   int64        nmax
//   coefficients for start_exponent..nmax:
//     float mode:    IEEE-754 double per coefficient
//     rational mode: numerator then denominator, each as one int64; the
//                    sentinel INT64_MIN escapes to a length-prefixed big
//                    integer (int64 signed limb count, then that many
//                    uint64 limbs, least significant first).
void write_series(std::ostream& os, const QSeries& s);
QSeries read_series(std::istream& is);

void save_series(const std::string& path, const QSeries& s);
QSeries load_series(const std::string& path);

} // namespace scv
