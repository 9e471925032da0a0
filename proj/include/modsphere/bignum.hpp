#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace modsphere {

using BigInt = boost::multiprecision::cpp_int;

/// Always stored reduced with positive denominator; the backend canonicalizes.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

}  // namespace modsphere
