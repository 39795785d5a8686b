#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>

namespace hcol {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact binomial coefficient; zero when k > n.
BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Natural log of a nonnegative big integer (-inf for zero).
double log_big(const BigInt& x);

/// Natural log of a nonnegative rational (-inf for zero).
double log_rational(const Rational& x);

}  // namespace hcol
