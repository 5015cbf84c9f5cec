#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace tadet {

// Exact time values; strict and weak bounds only differ at exact points.
using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);
// Accepts "3", "-2", "5/2" and finite decimals such as "2.25".
Rational parse_rational(const std::string& text);

}  // namespace tadet
