#pragma once

// Isomorphisms between graphs of groups with correction terms, the maps they
// induce on path groups and on marked fundamental groups, and the equivalence
// moves that change a morphism without changing its outer class.

#include <string>
#include <vector>

#include "gog/graph_of_groups.hpp"
#include "gog/marking.hpp"

namespace gog {

struct GOGMorphism {
  GraphOfGroups source;
  GraphOfGroups target;
  std::vector<Vertex> vertex_map;
  std::vector<Edge> edge_map;               // per oriented edge
  std::vector<BasisMap> vertex_maps;        // G_v -> G_{H(v)}
  std::vector<int> edge_signs;              // per pair, z -> z^sign
  std::vector<FreeWord> corrections;        // delta(e) in G_{terminal(H(e))}

  static GOGMorphism identity(const GraphOfGroups& gog);
  int sign(Edge e) const { return edge_signs.at(e.pair()); }
  const FreeWord& correction(Edge e) const { return corrections.at(e.index); }
};

// Empty when valid; otherwise one line per violated condition.
std::vector<std::string> validate(const GOGMorphism& morphism);

// Reduced image of a connected word over the source.
PathWord apply(const GOGMorphism& morphism, const PathWord& word);

// outer o inner.  Throws std::invalid_argument unless inner.target == outer.source.
GOGMorphism compose(const GOGMorphism& outer, const GOGMorphism& inner);
// Throws std::invalid_argument if a vertex map is not invertible.
GOGMorphism invert(const GOGMorphism& morphism);
// Source and target must coincide; negative powers go through invert.
GOGMorphism power(const GOGMorphism& morphism, long exponent);

PathWord iterate(const GOGMorphism& morphism, long times, const PathWord& word);

// H^(t)(g) = g H(g) ... H^{t-1}(g) for g based at a vertex fixed by H.
PathWord iterated_product(const GOGMorphism& morphism, const PathWord& element, long times);
// H^t(t_e) through iterated products of the corrections; graph map must be the identity.
PathWord closed_form_stable_power(const GOGMorphism& morphism, Edge e, long times);

// phi^s(g) ... phi^{t-1}(g); requires s < t.
FreeWord iterated_product(const BasisMap& phi, const FreeWord& element, long from, long to);

// Image of t_e as an arbitrary path word; vertex groups map by basis maps.
struct PathMap {
  GraphOfGroups source;
  GraphOfGroups target;
  std::vector<Vertex> vertex_map;
  std::vector<BasisMap> vertex_maps;
  std::vector<PathWord> edge_images;  // per oriented edge

  static PathMap from(const GOGMorphism& morphism);
};

PathWord apply(const PathMap& map, const PathWord& word);

// Map pi_1(source, M.base) -> pi_1(target, M'.base), moving the image base
// point back along the tree path of M'.
BasisMap induced_on_markings(const PathMap& map, const Marking& from, const Marking& to);
BasisMap induced_automorphism(const GOGMorphism& morphism, const Marking& marking);

// Witness that theta o phi and phi' o theta differ by an inner automorphism.
std::optional<FreeWord> same_outer_class(const BasisMap& phi, const BasisMap& phi_prime,
                                         const BasisMap& theta);

struct EdgeMove {
  GraphOfGroups modified;
  GOGMorphism transport;  // H_g: original -> modified
};

// f'_e = ad_g o f_e; H_g has every correction trivial except delta(e) = g^-1.
EdgeMove move_edge_monomorphism(const GraphOfGroups& gog, Edge e, const FreeWord& g);
// H_g o H o H_g^-1 on the modified graph of groups.
GOGMorphism conjugate_by_move(const GOGMorphism& morphism, Edge e, const FreeWord& g);
// ad_g o H_v at the source vertex v, with g in G_{H(v)}.
GOGMorphism slide_inner_at_vertex(const GOGMorphism& morphism, Vertex v, const FreeWord& g);

// ad_{U^-1 H(U)} o H_{*v'} on the basis of `at` (based at v'), where U runs
// from v to v' and both are fixed by the graph map.
BasisMap change_base_point(const GOGMorphism& morphism, Vertex from, const Marking& at,
                           const PathWord& connecting);

}  // namespace gog
