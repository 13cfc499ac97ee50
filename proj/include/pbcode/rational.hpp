#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <string>

namespace pbcode {

// Exact rationals for read/download accounting. Code symbols never live here.
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(long long num, long long den) {
    return Rational(num) / Rational(den);
}

inline std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

inline double rational_double(const Rational& r) {
    return r.convert_to<double>();
}

}  // namespace pbcode
