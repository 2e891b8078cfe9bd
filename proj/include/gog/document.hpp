#pragma once

// JSON input documents: a Dehn twist on a graph of groups, or a two-level
// twist whose top vertices carry local twists.  Grammar in docs/formats.md.

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gog/dehn.hpp"
#include "gog/two_level.hpp"

namespace gog {

// Malformed text, or a word that does not parse against its alphabet.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Well-formed document that violates a structural invariant.
class SemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Document {
  std::optional<DehnTwist> twist;
  std::optional<TwoLevelTwist> two_level;
  std::optional<std::string> base;  // marking base vertex for plain twists
  std::map<char, Rational> weights;  // by marking basis letter, default 1

  bool is_two_level() const { return two_level.has_value(); }
  // Graph of groups that words on the command line refer to.
  GraphOfGroups gog() const;
  Marking marking() const;
  // marking().basis() with the document weights applied.
  Basis weighted_basis() const;
};

Document parse_document(std::string_view text);
Document load_document(const std::string& path);
std::string serialize(const Document& document);

bool operator==(const Document& lhs, const Document& rhs);

}  // namespace gog
