#pragma once

// Twisted conjugacy: g ~ h^-1 g phi(h) in a free group, and W ~ U^-1 W H(U)
// for closed words in the pointed path group.

#include <cstddef>
#include <optional>

#include "gog/dehn.hpp"
#include "gog/graph_of_groups.hpp"
#include "gog/marking.hpp"
#include "gog/morphism.hpp"

namespace gog {

inline constexpr std::size_t kDefaultStepBudget = 200000;

struct PhiWitness {
  std::optional<FreeWord> witness;  // g' == h^-1 g phi(h)
  bool budget_exhausted = false;
};

// Meet-in-the-middle search over |h| <= radius.  An empty witness only means
// none was found within the radius.
PhiWitness phi_conjugate_witness(const BasisMap& phi, const FreeWord& g, const FreeWord& g_prime,
                                 std::size_t radius, std::size_t budget = kDefaultStepBudget);

// U^-1 W H(U), reduced.  The graph map of H must be the identity.
PathWord h_conjugate(const PathWord& word, const PathWord& conjugator, const GOGMorphism& morphism);

struct TwistedClassRep {
  PathWord word;
  PathWord conjugator;  // word == conjugator^-1 input H(conjugator)
  Vertex base_vertex;
  bool certified = false;  // path length equals the cyclic length of its loop
  bool budget_exhausted = false;
};

// 2 (q + syllable letters) + 8.
std::size_t default_search_radius(const PathWord& word);

TwistedClassRep h_reduce(const PathWord& word, const GOGMorphism& morphism, std::size_t radius,
                         std::size_t budget = kDefaultStepBudget);

struct HZero {
  std::optional<Vertex> vertex;  // vertex of issue of a length-0 representative
  bool certified = false;        // true when the answer is exact
  bool budget_exhausted = false;
};

HZero h_zero_test(const PathWord& word, const GOGMorphism& morphism, std::size_t radius,
                  std::size_t budget = kDefaultStepBudget);
std::optional<Vertex> is_h_zero(const PathWord& word, const GOGMorphism& morphism,
                                std::size_t radius);

struct TwistedWitness {
  std::optional<PathWord> conjugator;  // second == U^-1 first H(U)
  bool budget_exhausted = false;
};

// Words of path length zero may also cross edges, up to |V| - 1 hops.
TwistedWitness twisted_conjugacy_witness(const PathWord& first, const PathWord& second,
                                         const GOGMorphism& morphism, std::size_t radius,
                                         std::size_t budget = kDefaultStepBudget);

// Half the weighted cyclic length of the twistors along the loop of the
// D-reduced representative, measured in the marking basis.
Rational d_length(const PathWord& word, const DehnTwist& twist, const Marking& marking,
                  const Basis& weights);

// Cyclic length of the underlying edge loop after removing backtracks.
std::size_t loop_cyclic_length(const PathWord& word);

}  // namespace gog
