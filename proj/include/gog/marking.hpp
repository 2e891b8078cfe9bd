#pragma once

// Identification of pi_1(G, base) with a free group on an explicit basis.
// Spanning-tree stable letters are trivial; every cyclic edge relation
// t_e u_e t_e^-1 = u_{bar e} eliminates one vertex generator that occurs
// exactly once in one of the two images, which keeps the remaining generators
// free.

#include <optional>
#include <vector>

#include "gog/graph_of_groups.hpp"

namespace gog {

class Marking {
 public:
  Marking() = default;
  // Breadth-first spanning tree unless `tree` lists declared-orientation edges.
  // Throws std::invalid_argument for a non-spanning tree or a cyclic edge with
  // no eliminable generator.
  Marking(GraphOfGroups gog, Vertex base, std::optional<std::vector<Edge>> tree = std::nullopt);

  const GraphOfGroups& gog() const { return gog_; }
  Vertex base() const { return base_; }
  const Basis& basis() const { return basis_; }
  std::size_t rank() const { return basis_.rank(); }
  bool in_tree(Edge e) const { return in_tree_.at(e.pair()); }
  // Tree path from the base vertex to v.
  const PathWord& tree_path(Vertex v) const { return tree_paths_.at(v.index); }

  // Image of gamma_v x gamma_v^-1 for the generator x of G_v.
  const FreeWord& vertex_letter(Vertex v, std::size_t generator) const;
  // Image of gamma_{initial e} t_e gamma_{terminal e}^-1.
  FreeWord stable_letter(Edge e) const;
  // gamma_v g gamma_v^-1 for g in G_v.
  FreeWord element_to_basis(Vertex v, const FreeWord& element) const;

  // Closed connected word at the base vertex -> free word.
  FreeWord to_basis(const PathWord& word) const;
  // Reduced closed word at the base vertex.
  PathWord from_basis(const FreeWord& word) const;

 private:
  GraphOfGroups gog_;
  Vertex base_;
  Basis basis_;
  std::vector<bool> in_tree_;
  std::vector<PathWord> tree_paths_;
  std::vector<std::vector<FreeWord>> vertex_letters_;
  std::vector<std::optional<std::size_t>> stable_generator_;  // per pair
  // Basis generator -> (vertex, generator) or pair.
  struct Source {
    bool stable = false;
    Vertex vertex;
    std::size_t index = 0;
  };
  std::vector<Source> sources_;
};

// 1 - |V| + #trivial edge pairs + sum of vertex ranks.
std::size_t expected_rank(const GraphOfGroups& gog);

}  // namespace gog
