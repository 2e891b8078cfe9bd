#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace gog {

// Exact lengths and limits; denominators stay small at desk scale.
using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& value);

// Accepts "p", "-p" or "p/q".
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

}  // namespace gog
