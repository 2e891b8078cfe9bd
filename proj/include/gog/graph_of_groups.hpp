#pragma once

// Graphs of groups with free vertex groups and trivial or infinite cyclic edge
// groups, and connected words in the path group with vertex-tagged syllables.

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gog/words.hpp"

namespace gog {

struct Vertex {
  std::size_t index = 0;
  friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// Oriented edge; the two orientations of pair p are 2p (as declared) and 2p+1.
struct Edge {
  std::size_t index = 0;
  Edge bar() const { return Edge{index ^ 1U}; }
  std::size_t pair() const { return index / 2; }
  bool declared() const { return (index & 1U) == 0; }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class Graph {
 public:
  Vertex add_vertex(std::string name);
  // Returns the declared orientation, running from `from` to `to`.
  Edge add_edge(std::string name, Vertex from, Vertex to);

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return terminal_.size(); }
  std::size_t pair_count() const { return edge_names_.size(); }

  Vertex terminal(Edge e) const { return terminal_.at(e.index); }
  Vertex initial(Edge e) const { return terminal_.at(e.bar().index); }

  const std::string& vertex_name(Vertex v) const { return vertex_names_.at(v.index); }
  const std::string& edge_name(Edge e) const { return edge_names_.at(e.pair()); }
  std::optional<Vertex> find_vertex(std::string_view name) const;
  // Declared orientation of the named pair.
  std::optional<Edge> find_edge(std::string_view name) const;

  std::vector<Edge> edges_into(Vertex v) const;
  bool connected() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
  std::vector<Vertex> terminal_;
};

class GraphOfGroups {
 public:
  GraphOfGroups() = default;
  // edge_images[e] is u_e = f_e(z) in G_{terminal(e)}, empty optional for a
  // trivial edge group.  Both orientations of a pair must agree on triviality.
  GraphOfGroups(Graph graph, std::vector<Basis> vertex_groups,
                std::vector<std::optional<FreeWord>> edge_images);

  const Graph& graph() const { return graph_; }
  const Basis& vertex_group(Vertex v) const { return vertex_groups_.at(v.index); }
  const std::vector<Basis>& vertex_groups() const { return vertex_groups_; }
  bool cyclic(Edge e) const { return edge_images_.at(e.index).has_value(); }
  // Precondition: cyclic(e).
  const FreeWord& edge_image(Edge e) const { return *edge_images_.at(e.index); }
  const std::vector<std::optional<FreeWord>>& edge_images() const { return edge_images_; }

  friend bool operator==(const GraphOfGroups&, const GraphOfGroups&) = default;

 private:
  Graph graph_;
  std::vector<Basis> vertex_groups_;
  std::vector<std::optional<FreeWord>> edge_images_;
};

// r_0 t_1 r_1 ... t_q r_q with every r_i tagged by its vertex.
class PathWord {
 public:
  PathWord() = default;
  PathWord(std::vector<FreeWord> syllables, std::vector<Vertex> tags, std::vector<Edge> edges);

  static PathWord trivial(Vertex v);
  static PathWord vertex_element(FreeWord element, Vertex v);
  static PathWord stable_letter(const Graph& graph, Edge e);

  std::size_t letter_count() const { return edges_.size(); }
  const std::vector<FreeWord>& syllables() const { return syllables_; }
  const std::vector<Vertex>& tags() const { return tags_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const FreeWord& syllable(std::size_t i) const { return syllables_.at(i); }
  Vertex tag(std::size_t i) const { return tags_.at(i); }
  Edge edge(std::size_t i) const { return edges_.at(i); }

  Vertex initial_vertex() const { return tags_.front(); }
  Vertex terminal_vertex() const { return tags_.back(); }
  bool closed() const { return initial_vertex() == terminal_vertex(); }
  bool is_connected(const Graph& graph) const;
  bool is_trivial() const { return edges_.empty() && syllables_.front().empty(); }
  std::size_t syllable_letters() const;

  PathWord inverse() const;

  friend bool operator==(const PathWord&, const PathWord&) = default;

 private:
  friend class PathWordBuilder;
  std::vector<FreeWord> syllables_;
  std::vector<Vertex> tags_;
  std::vector<Edge> edges_;
};

// Incremental reduced product: every push pinches against the top only, so
// feeding a reduced word keeps the word reduced (Britton reduction).
class PathWordBuilder {
 public:
  PathWordBuilder(const GraphOfGroups& gog, Vertex start);
  PathWordBuilder(const GraphOfGroups& gog, PathWord reduced_prefix);

  void push_element(const FreeWord& element, Vertex at);
  void push_edge(Edge e);
  void push_word(const PathWord& word);
  std::size_t pinches() const { return pinches_; }
  PathWord finish() &&;
  const PathWord& current() const { return word_; }

 private:
  const GraphOfGroups* gog_;
  PathWord word_;
  std::size_t pinches_ = 0;
};

// Errors: std::invalid_argument for disconnected input.
PathWord reduce_word(const PathWord& word, const GraphOfGroups& gog);
// Product of connected words, reduced.
PathWord multiply(const PathWord& lhs, const PathWord& rhs, const GraphOfGroups& gog);
PathWord canonical_form(const PathWord& word, const GraphOfGroups& gog);
std::size_t path_length(const PathWord& word, const GraphOfGroups& gog);
bool equal_in_path_group(const PathWord& lhs, const PathWord& rhs, const GraphOfGroups& gog);
// Equality in the pointed variant: trivial words remember their vertex.
bool equal_pointed(const PathWord& lhs, const PathWord& rhs, const GraphOfGroups& gog);

struct PathCyclicReduction {
  PathWord core;
  PathWord conjugator;  // word == conjugator * core * conjugator^-1
};
PathCyclicReduction cyclically_reduce(const PathWord& word, const GraphOfGroups& gog);

// Least-length representative of r * <u>, shortlex tiebreak; returns k.
long coset_minimizer(const FreeWord& r, const FreeWord& u);

// Text form: syllables joined by "·" (or "."), stable letters t[e] / T[e],
// vertex elements as words, optionally suffixed "@vertex"; "1@v" is 1_v.
PathWord parse_path_word(std::string_view text, const GraphOfGroups& gog);
std::string format_path_word(const PathWord& word, const GraphOfGroups& gog);

}  // namespace gog
