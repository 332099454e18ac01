#pragma once

#include <boost/rational.hpp>

namespace sccc {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
    return double(r.numerator()) / double(r.denominator());
}

} // namespace sccc
