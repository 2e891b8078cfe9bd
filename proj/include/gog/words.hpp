#pragma once

// Reduced words, cyclic words and basis maps over a finite ordered basis.
// A letter is a signed 1-based generator index: +i is generator i-1, -i its
// inverse.  Text form uses one lowercase character per generator, uppercase
// for inverses, and "1" for the trivial word.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gog/rational.hpp"

namespace gog {

using Letter = int;

constexpr Letter inverse_letter(Letter letter) { return -letter; }
constexpr std::size_t generator_of(Letter letter) {
  return static_cast<std::size_t>(letter < 0 ? -letter : letter) - 1;
}
constexpr Letter letter_of(std::size_t generator, int sign = 1) {
  return sign * static_cast<Letter>(generator + 1);
}
// Order a < A < b < B < ... used for canonical rotations and tiebreaks.
constexpr int letter_key(Letter letter) {
  return 2 * static_cast<int>(generator_of(letter)) + (letter < 0 ? 1 : 0);
}

class FreeWord {
 public:
  FreeWord() = default;

  // Freely reduces the given letter sequence.
  static FreeWord from_letters(std::span<const Letter> letters);
  static FreeWord generator(std::size_t index, int sign = 1);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }

  FreeWord inverse() const;
  FreeWord pow(long exponent) const;

  // In-place right multiplication with free reduction at the seam.
  FreeWord& operator*=(const FreeWord& rhs);
  FreeWord& append(Letter letter);

  friend FreeWord operator*(FreeWord lhs, const FreeWord& rhs) { return lhs *= rhs; }
  friend bool operator==(const FreeWord&, const FreeWord&) = default;

 private:
  std::vector<Letter> letters_;
};

// Shortlex under letter_key; the tiebreak used for coset representatives.
bool shortlex_less(const FreeWord& lhs, const FreeWord& rhs);

FreeWord concat_reduce(const FreeWord& lhs, const FreeWord& rhs);

// Cyclically reduced word stored at its least rotation.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(const FreeWord& word);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

 private:
  std::vector<Letter> letters_;
};

struct CyclicReduction {
  FreeWord core;        // cyclically reduced, not rotated
  FreeWord conjugator;  // input == conjugator * core * conjugator^-1
  CyclicWord cyclic;
};

CyclicReduction cyclic_reduce(const FreeWord& word);

// Length of the cyclic core, without building it.
std::size_t cyclic_length(const FreeWord& word);

struct PrimitiveRoot {
  FreeWord root;
  long exponent = 1;
};

// Throws std::invalid_argument on the trivial word.
PrimitiveRoot primitive_root(const FreeWord& word);

// g with w == g u g^-1, if u and w are conjugate.
std::optional<FreeWord> conjugacy_witness(const FreeWord& u, const FreeWord& w);

// k with w == u^k; u must be non-trivial.
std::optional<long> cyclic_subgroup_member(const FreeWord& w, const FreeWord& u);

class Basis {
 public:
  Basis() = default;
  // One lowercase character per generator.
  explicit Basis(std::string names, std::vector<Rational> weights = {});

  std::size_t rank() const { return names_.size(); }
  char name(std::size_t generator) const { return names_[generator]; }
  const std::string& names() const { return names_; }
  const Rational& weight(std::size_t generator) const { return weights_[generator]; }
  const std::vector<Rational>& weights() const { return weights_; }
  std::optional<std::size_t> index_of(char name) const;

  Basis with_weights(std::vector<Rational> weights) const;

  FreeWord parse(std::string_view text) const;
  std::string format(const FreeWord& word) const;

  friend bool operator==(const Basis&, const Basis&) = default;

 private:
  std::string names_;
  std::vector<Rational> weights_;
};

Rational weighted_length(const CyclicWord& word, const Basis& basis);
Rational weighted_length(const FreeWord& word, const Basis& basis);
Rational weighted_cyclic_length(const FreeWord& word, const Basis& basis);

// Homomorphism between free groups given by generator images.  Domain and
// codomain are identified with index ranges; callers track which basis is which.
class BasisMap {
 public:
  BasisMap() = default;
  explicit BasisMap(std::vector<FreeWord> images) : images_(std::move(images)) {}
  static BasisMap identity(std::size_t rank);
  // Inner automorphism x -> g x g^-1.
  static BasisMap inner(const FreeWord& conjugator, std::size_t rank);

  std::size_t rank() const { return images_.size(); }
  const FreeWord& image(std::size_t generator) const { return images_[generator]; }
  const std::vector<FreeWord>& images() const { return images_; }

  FreeWord operator()(const FreeWord& word) const;

  friend bool operator==(const BasisMap&, const BasisMap&) = default;

 private:
  std::vector<FreeWord> images_;
};

// outer o inner
BasisMap compose(const BasisMap& outer, const BasisMap& inner);

// Inverse by Nielsen reduction of the image tuple; empty if the map is not a
// bijection onto the indexed basis (or the bounded search gives up).
std::optional<BasisMap> invert(const BasisMap& map);

BasisMap power(const BasisMap& map, long exponent);

struct InnerDifference {
  std::optional<FreeWord> witness;  // psi(x) == g phi(x) g^-1 for all x
  long exponent_bound = 0;          // search range |k| for g0 * root^k
};

// Throws std::invalid_argument if either map is not bijective.
InnerDifference inner_difference(const BasisMap& phi, const BasisMap& psi);

}  // namespace gog
