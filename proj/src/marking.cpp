#include "gog/marking.hpp"

#include <algorithm>
#include <queue>
#include <span>
#include <stdexcept>

namespace gog {

namespace {

// Raw generators: vertex generators first, then one per non-tree pair.
struct RawAlphabet {
  std::vector<std::size_t> vertex_offset;
  std::vector<std::optional<std::size_t>> pair_generator;
  std::size_t size = 0;
};

enum class Visit { kFresh, kActive, kDone };

}  // namespace

std::size_t expected_rank(const GraphOfGroups& gog) {
  auto const& graph = gog.graph();
  long rank = 1 - static_cast<long>(graph.vertex_count());
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    if (!gog.cyclic(Edge{2 * p})) ++rank;
  }
  for (auto const& basis : gog.vertex_groups()) {
    rank += static_cast<long>(basis.rank());
  }
  return static_cast<std::size_t>(rank);
}

Marking::Marking(GraphOfGroups gog, Vertex base, std::optional<std::vector<Edge>> tree)
    : gog_(std::move(gog)), base_(base) {
  auto const& graph = gog_.graph();
  if (base.index >= graph.vertex_count()) {
    throw std::invalid_argument("marking: unknown base vertex");
  }
  in_tree_.assign(graph.pair_count(), false);
  if (tree) {
    if (tree->size() + 1 != graph.vertex_count()) {
      throw std::invalid_argument("marking: tree must have |V| - 1 edges");
    }
    for (Edge e : *tree) {
      if (e.pair() >= graph.pair_count()) {
        throw std::invalid_argument("marking: unknown tree edge");
      }
      in_tree_[e.pair()] = true;
    }
  }

  tree_paths_.assign(graph.vertex_count(), PathWord{});
  std::vector<bool> reached(graph.vertex_count(), false);
  reached[base.index] = true;
  tree_paths_[base.index] = PathWord::trivial(base);
  std::queue<Vertex> todo;
  todo.push(base);
  while (!todo.empty()) {
    Vertex v = todo.front();
    todo.pop();
    for (std::size_t i = 0; i < graph.edge_count(); ++i) {
      Edge e{i};
      Vertex w = graph.terminal(e);
      if (graph.initial(e) != v || reached[w.index]) continue;
      if (tree && !in_tree_[e.pair()]) continue;
      in_tree_[e.pair()] = true;
      reached[w.index] = true;
      tree_paths_[w.index] =
          multiply(tree_paths_[v.index], PathWord::stable_letter(graph, e), gog_);
      todo.push(w);
    }
  }
  for (bool r : reached) {
    if (!r) throw std::invalid_argument("marking: tree does not span the graph");
  }

  RawAlphabet raw;
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    raw.vertex_offset.push_back(raw.size);
    raw.size += gog_.vertex_group(Vertex{v}).rank();
  }
  raw.pair_generator.assign(graph.pair_count(), std::nullopt);
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    if (!in_tree_[p]) raw.pair_generator[p] = raw.size++;
  }

  auto raw_element = [&](const FreeWord& word, Vertex v) {
    std::vector<Letter> letters;
    for (Letter l : word.letters()) {
      letters.push_back(letter_of(raw.vertex_offset[v.index] + generator_of(l), l < 0 ? -1 : 1));
    }
    return FreeWord::from_letters(letters);
  };
  auto raw_stable = [&](Edge e) {
    auto g = raw.pair_generator[e.pair()];
    return g ? FreeWord::generator(*g, e.declared() ? 1 : -1) : FreeWord{};
  };

  // u_{bar s} = p x^sign q with x occurring once gives
  // x^sign = p^-1 L(t_s) u_s L(t_s)^-1 q^-1.
  std::vector<std::optional<FreeWord>> eliminated(raw.size);
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    Edge declared{2 * p};
    if (!gog_.cyclic(declared)) continue;
    bool done = false;
    for (Edge side : {declared.bar(), declared}) {
      auto image = raw_element(gog_.edge_image(side), graph.terminal(side));
      Edge other = side.bar();
      auto stable = raw_stable(other);
      auto expr = stable * raw_element(gog_.edge_image(other), graph.terminal(other)) *
                  stable.inverse();
      auto const& letters = image.letters();
      for (std::size_t at = 0; at < letters.size() && !done; ++at) {
        auto x = generator_of(letters[at]);
        auto occurs = [&](const FreeWord& w) {
          return std::count_if(w.letters().begin(), w.letters().end(),
                               [&](Letter l) { return generator_of(l) == x; });
        };
        // x may not define itself.
        if (eliminated[x] || occurs(image) != 1 || occurs(expr) != 0) continue;
        auto before = FreeWord::from_letters(std::span(letters).first(at));
        auto after = FreeWord::from_letters(std::span(letters).subspan(at + 1));
        auto solved = before.inverse() * expr * after.inverse();
        eliminated[x] = letters[at] > 0 ? solved : solved.inverse();
        done = true;
      }
      if (done) break;
    }
    if (!done) {
      throw std::invalid_argument("marking: edge '" + graph.edge_name(declared) +
                                  "' has no eliminable generator in its edge images");
    }
  }

  // Surviving generators become the basis, vertex letters first.
  std::vector<std::optional<std::size_t>> basis_index(raw.size);
  std::string names;
  std::vector<Rational> weights;
  std::vector<char> wanted(raw.size, 0);
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    auto const& group = gog_.vertex_group(Vertex{v});
    for (std::size_t g = 0; g < group.rank(); ++g) {
      auto x = raw.vertex_offset[v] + g;
      wanted[x] = group.name(g);
      if (!eliminated[x]) {
        basis_index[x] = sources_.size();
        sources_.push_back(Source{false, Vertex{v}, g});
        weights.push_back(group.weight(g));
      }
    }
  }
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    if (auto g = raw.pair_generator[p]) {
      auto const& name = graph.edge_name(Edge{2 * p});
      wanted[*g] = name.size() == 1 ? name[0] : 0;
      basis_index[*g] = sources_.size();
      sources_.push_back(Source{true, Vertex{}, p});
      weights.push_back(Rational(1));
    }
  }
  names.assign(sources_.size(), 0);
  std::vector<std::size_t> by_basis(sources_.size());
  for (std::size_t x = 0; x < raw.size; ++x) {
    if (basis_index[x]) by_basis[*basis_index[x]] = x;
  }
  std::string used;
  for (std::size_t i = 0; i < by_basis.size(); ++i) {
    char c = wanted[by_basis[i]];
    if (c >= 'a' && c <= 'z' && used.find(c) == std::string::npos) {
      names[i] = c;
      used.push_back(c);
    }
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] != 0) continue;
    char c = 'a';
    while (c <= 'z' && used.find(c) != std::string::npos) ++c;
    if (c > 'z') throw std::invalid_argument("marking: rank exceeds 26 generators");
    names[i] = c;
    used.push_back(c);
  }
  basis_ = Basis(names, weights);

  // Expand eliminated generators, refusing circular substitutions.
  std::vector<FreeWord> expanded(raw.size);
  std::vector<Visit> state(raw.size, Visit::kFresh);
  auto expand = [&](auto&& self, std::size_t x) -> const FreeWord& {
    if (state[x] == Visit::kDone) return expanded[x];
    if (state[x] == Visit::kActive) {
      throw std::invalid_argument("marking: edge relations do not present a free group");
    }
    state[x] = Visit::kActive;
    FreeWord result;
    if (!eliminated[x]) {
      result = FreeWord::generator(*basis_index[x]);
    } else {
      for (Letter l : eliminated[x]->letters()) {
        auto const& part = self(self, generator_of(l));
        result *= l > 0 ? part : part.inverse();
      }
    }
    expanded[x] = std::move(result);
    state[x] = Visit::kDone;
    return expanded[x];
  };
  vertex_letters_.resize(graph.vertex_count());
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    for (std::size_t g = 0; g < gog_.vertex_group(Vertex{v}).rank(); ++g) {
      vertex_letters_[v].push_back(expand(expand, raw.vertex_offset[v] + g));
    }
  }
  stable_generator_.assign(graph.pair_count(), std::nullopt);
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    if (auto g = raw.pair_generator[p]) stable_generator_[p] = *basis_index[*g];
  }
  if (rank() != expected_rank(gog_)) {
    throw std::logic_error("marking: rank mismatch");
  }
}

const FreeWord& Marking::vertex_letter(Vertex v, std::size_t generator) const {
  return vertex_letters_.at(v.index).at(generator);
}

FreeWord Marking::stable_letter(Edge e) const {
  auto g = stable_generator_.at(e.pair());
  return g ? FreeWord::generator(*g, e.declared() ? 1 : -1) : FreeWord{};
}

FreeWord Marking::element_to_basis(Vertex v, const FreeWord& element) const {
  FreeWord result;
  for (Letter l : element.letters()) {
    auto const& image = vertex_letter(v, generator_of(l));
    result *= l > 0 ? image : image.inverse();
  }
  return result;
}

FreeWord Marking::to_basis(const PathWord& word) const {
  if (!word.is_connected(gog_.graph()) || word.initial_vertex() != base_ ||
      word.terminal_vertex() != base_) {
    throw std::invalid_argument("to_basis: word must be a closed connected word at the base");
  }
  FreeWord result;
  for (std::size_t i = 0; i < word.syllables().size(); ++i) {
    if (i > 0) result *= stable_letter(word.edge(i - 1));
    result *= element_to_basis(word.tag(i), word.syllable(i));
  }
  return result;
}

PathWord Marking::from_basis(const FreeWord& word) const {
  auto const& graph = gog_.graph();
  PathWordBuilder builder(gog_, base_);
  for (Letter l : word.letters()) {
    auto const& source = sources_.at(generator_of(l));
    PathWord piece;
    if (source.stable) {
      Edge e{2 * source.index};
      piece = multiply(multiply(tree_path(graph.initial(e)), PathWord::stable_letter(graph, e),
                                gog_),
                       tree_path(graph.terminal(e)).inverse(), gog_);
    } else {
      auto const& path = tree_path(source.vertex);
      piece = multiply(
          multiply(path, PathWord::vertex_element(FreeWord::generator(source.index), source.vertex),
                   gog_),
          path.inverse(), gog_);
    }
    builder.push_word(l > 0 ? piece : piece.inverse());
  }
  return std::move(builder).finish();
}

}  // namespace gog
