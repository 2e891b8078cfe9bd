#pragma once

// Two-level Dehn twists: a top graph with trivial edge groups whose vertex
// groups are fundamental groups of local Dehn-twisted graphs of groups, with
// corrections delta*(E) given as closed words in the local pointed path group.

#include <optional>
#include <string>
#include <vector>

#include "gog/dehn.hpp"
#include "gog/marking.hpp"
#include "gog/morphism.hpp"
#include "gog/twisted.hpp"

namespace gog {

struct LocalTwist {
  DehnTwist twist;
  Vertex base_point;
  Marking marking;  // at base_point, names the top vertex group

  LocalTwist(DehnTwist local, Vertex base);
  // One vertex named `vertex_name`, trivial group.
  static LocalTwist trivial(const std::string& vertex_name);
  bool is_trivial() const;
};

class TwoLevelTwist {
 public:
  // delta_star and connecting are indexed by oriented top edge; connecting[E]
  // runs from the vertex of issue of delta_star[E] to the local base point.
  TwoLevelTwist(Graph top, std::vector<LocalTwist> locals, std::vector<PathWord> delta_star,
                std::vector<PathWord> connecting);

  const Graph& top() const { return top_; }
  const LocalTwist& local(Vertex v) const { return locals_.at(v.index); }
  const std::vector<LocalTwist>& locals() const { return locals_; }
  const PathWord& delta_star(Edge e) const { return delta_star_.at(e.index); }
  const PathWord& connecting(Edge e) const { return connecting_.at(e.index); }
  const std::vector<PathWord>& delta_stars() const { return delta_star_; }
  const std::vector<PathWord>& connectings() const { return connecting_; }

  // Trivial edge groups, vertex groups from the local markings.
  GraphOfGroups top_gog() const;
  // delta(E) = D(U_E^-1) delta*(E) U_E in the basis of G_{terminal(E)}.
  FreeWord assembled_correction(Edge e) const;

  TwoLevelTwist with_delta_star(Edge e, PathWord delta_star, PathWord connecting) const;
  // Move the base point of `v` to `base`; `path` runs from the new base to the old one.
  TwoLevelTwist with_base_point(Vertex v, Vertex base, const PathWord& path) const;

 private:
  Graph top_;
  std::vector<LocalTwist> locals_;
  std::vector<PathWord> delta_star_;
  std::vector<PathWord> connecting_;
};

GOGMorphism assemble(const TwoLevelTwist& twist);

// Marking of the top graph of groups at top vertex 0.
Marking top_marking(const TwoLevelTwist& twist);

// Outer class comparison: witness g with theta phi = ad_g phi' theta on top markings.
std::optional<FreeWord> outer_class_witness(const TwoLevelTwist& before,
                                            const TwoLevelTwist& after, const PathMap& transport);

// Identification between two assemblies of the same data that differ in base
// points and connecting words; paths[V] runs from the new base to the old one.
PathMap reassembly_transport(const TwoLevelTwist& before, const TwoLevelTwist& after,
                             const std::vector<PathWord>& paths);

// Edge name, prefixed with "~" for the reverse orientation.
std::string oriented_edge_name(const Graph& graph, Edge e);

// delta*(E) is zero under the inverse of the local twist at terminal(E).
HZero locally_zero(const TwoLevelTwist& twist, Edge e, std::size_t radius);

struct ForwardOrientation {
  std::vector<Edge> forward;  // E+
  bool certified = true;
};
// Throws std::invalid_argument naming a pair with both or neither side zero.
ForwardOrientation forward_orientation(const TwoLevelTwist& twist, std::size_t radius);

struct TwoLevelReport {
  std::size_t rank = 0;
  bool forward_ok = false;
  std::string forward_detail;
  bool distinct_corrections = true;
  bool certified = true;  // every search behind the answer is exact
  std::vector<std::string> witnesses;
  std::vector<std::pair<std::string, EfficiencyReport>> local_reports;

  bool efficient() const;
};

TwoLevelReport check_efficient_2level(const TwoLevelTwist& twist, std::size_t radius);

struct MoveResult {
  TwoLevelTwist twist;
  PathMap transport;  // top_gog(before) -> top_gog(after)
  std::string description;
};

MoveResult move_subdivide(const TwoLevelTwist& twist, Edge e);
// Both sides locally zero, not a loop, and at least one endpoint with a
// trivial local graph of groups; anything else needs a blow-up.
MoveResult move_contract(const TwoLevelTwist& twist, Edge e, std::size_t radius);
// Replaces delta*(e) by U^-1 delta*(e) D^-1(U) for U = witness.
MoveResult move_replace_correction(const TwoLevelTwist& twist, Edge e, const PathWord& witness);
// witness: delta*(other) == U^-1 delta*(e) D^-1(U).
MoveResult move_align(const TwoLevelTwist& twist, Edge e, Edge other, const PathWord& witness);
// Subdivides first when an initial vertex is not a fresh trivial vertex.
std::vector<MoveResult> move_fold(const TwoLevelTwist& twist, Edge e, Edge other,
                                  std::size_t radius);

struct MakeEfficientResult {
  std::vector<MoveResult> steps;
  std::optional<TwoLevelTwist> result;
  std::string failure;  // blocking edge when result is empty
  TwoLevelReport report;
};

MakeEfficientResult make_efficient(const TwoLevelTwist& twist, std::size_t radius);

// d_length of delta*(E), reduced under the inverse local twist, measured in a
// marking of the top graph of groups.
Rational top_d_length(const TwoLevelTwist& twist, Edge e, const Marking& top,
                      const Basis& weights);

}  // namespace gog
