#include "gog/rational.hpp"

#include <charconv>
#include <stdexcept>

namespace gog {

namespace {

std::int64_t parse_integer(std::string_view text) {
  std::int64_t value = 0;
  auto const* first = text.data();
  auto const* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') {
    ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) {
    return std::to_string(value.numerator());
  }
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    return Rational(parse_integer(text));
  }
  auto den = parse_integer(text.substr(slash + 1));
  if (den == 0) {
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  }
  return Rational(parse_integer(text.substr(0, slash)), den);
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

}  // namespace gog
