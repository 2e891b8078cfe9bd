#include "gog/twisted.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace gog {

namespace {

struct LettersHash {
  std::size_t operator()(const std::vector<Letter>& letters) const {
    std::size_t h = letters.size();
    for (Letter l : letters) {
      h ^= static_cast<std::size_t>(l + 0x9e3779b9) + (h << 6) + (h >> 2);
    }
    return h;
  }
};

using Frontier = std::unordered_map<std::vector<Letter>, FreeWord, LettersHash>;

// All states h^-1 g phi(h) with |h| <= depth, keyed by state, valued by h.
bool explore(const BasisMap& phi, const FreeWord& start, std::size_t depth, std::size_t& budget,
             Frontier& seen) {
  std::vector<FreeWord> phi_letters;
  for (std::size_t i = 0; i < phi.rank(); ++i) {
    phi_letters.push_back(phi.image(i));
  }
  seen.emplace(start.letters(), FreeWord{});
  std::vector<std::pair<FreeWord, FreeWord>> layer{{start, FreeWord{}}};
  for (std::size_t d = 0; d < depth && !layer.empty(); ++d) {
    std::vector<std::pair<FreeWord, FreeWord>> next;
    for (auto const& [state, h] : layer) {
      for (std::size_t i = 0; i < phi.rank(); ++i) {
        for (int sign : {1, -1}) {
          if (budget == 0) return false;
          --budget;
          auto x = FreeWord::generator(i, sign);
          auto image = sign > 0 ? phi_letters[i] : phi_letters[i].inverse();
          auto moved = x.inverse() * state * image;
          if (seen.count(moved.letters()) != 0) continue;
          auto longer = h * x;
          seen.emplace(moved.letters(), longer);
          next.emplace_back(std::move(moved), std::move(longer));
        }
      }
    }
    layer = std::move(next);
  }
  return true;
}

bool identity_graph_map(const GOGMorphism& morphism) {
  for (std::size_t v = 0; v < morphism.vertex_map.size(); ++v) {
    if (morphism.vertex_map[v].index != v) return false;
  }
  for (std::size_t e = 0; e < morphism.edge_map.size(); ++e) {
    if (morphism.edge_map[e].index != e) return false;
  }
  return morphism.source == morphism.target;
}

// Vertex maps trivial and every correction inside its edge group: then whether
// a wrap pinches is unchanged by H, so one cycle of rotations decides it.
bool rotations_suffice(const GOGMorphism& morphism) {
  auto const& gog = morphism.source;
  for (std::size_t v = 0; v < morphism.vertex_maps.size(); ++v) {
    if (!(morphism.vertex_maps[v] ==
          BasisMap::identity(gog.vertex_group(Vertex{v}).rank()))) {
      return false;
    }
  }
  for (std::size_t i = 0; i < morphism.corrections.size(); ++i) {
    Edge e{i};
    auto const& delta = morphism.corrections[i];
    if (gog.cyclic(e) ? !cyclic_subgroup_member(delta, gog.edge_image(e)) : !delta.empty()) {
      return false;
    }
  }
  return true;
}

struct Twister {
  const GraphOfGroups& gog;
  PathMap map;

  PathWord conjugate(const PathWord& word, const PathWord& u) const {
    return multiply(multiply(u.inverse(), word, gog), apply(map, u), gog);
  }

  // U = w_0 u_{bar e_1}^k t_1.
  PathWord rotation(const PathWord& word, long k = 0) const {
    Edge first = word.edge(0);
    auto head = word.syllable(0);
    if (k != 0) head *= gog.edge_image(first.bar()).pow(k);
    return PathWord({head, FreeWord{}}, {word.tag(0), word.tag(1)}, {first});
  }
};

}  // namespace

PhiWitness phi_conjugate_witness(const BasisMap& phi, const FreeWord& g, const FreeWord& g_prime,
                                 std::size_t radius, std::size_t budget) {
  PhiWitness result;
  Frontier from_start;
  Frontier from_target;
  bool complete = explore(phi, g, (radius + 1) / 2, budget, from_start);
  complete = explore(phi, g_prime, radius / 2, budget, from_target) && complete;
  result.budget_exhausted = !complete;
  // h1^-1 g phi(h1) == h2^-1 g' phi(h2) gives h = h1 h2^-1.
  std::optional<FreeWord> best;
  for (auto const& [state, h2] : from_target) {
    auto hit = from_start.find(state);
    if (hit == from_start.end()) continue;
    auto h = hit->second * h2.inverse();
    if (!best || shortlex_less(h, *best)) best = h;
  }
  result.witness = best;
  return result;
}

PathWord h_conjugate(const PathWord& word, const PathWord& conjugator,
                     const GOGMorphism& morphism) {
  if (!identity_graph_map(morphism)) {
    throw std::invalid_argument("h_conjugate: the graph map must be the identity");
  }
  auto const& gog = morphism.source;
  if (!word.is_connected(gog.graph()) || !word.closed()) {
    throw std::invalid_argument("h_conjugate: word must be closed and connected");
  }
  if (!conjugator.is_connected(gog.graph()) ||
      conjugator.initial_vertex() != word.initial_vertex()) {
    throw std::invalid_argument("h_conjugate: conjugator must start at the vertex of issue");
  }
  Twister twister{gog, PathMap::from(morphism)};
  return twister.conjugate(reduce_word(word, gog), reduce_word(conjugator, gog));
}

std::size_t loop_cyclic_length(const PathWord& word) {
  std::deque<Edge> stack;
  for (Edge e : word.edges()) {
    if (!stack.empty() && stack.back() == e.bar()) {
      stack.pop_back();
    } else {
      stack.push_back(e);
    }
  }
  while (stack.size() >= 2 && stack.front() == stack.back().bar()) {
    stack.pop_front();
    stack.pop_back();
  }
  return stack.size();
}

std::size_t default_search_radius(const PathWord& word) {
  return 2 * (word.letter_count() + word.syllable_letters()) + 8;
}

TwistedClassRep h_reduce(const PathWord& word, const GOGMorphism& morphism, std::size_t radius,
                         std::size_t budget) {
  if (!identity_graph_map(morphism)) {
    throw std::invalid_argument("h_reduce: the graph map must be the identity");
  }
  auto const& gog = morphism.source;
  if (!word.is_connected(gog.graph()) || !word.closed()) {
    throw std::invalid_argument("h_reduce: word must be closed and connected");
  }
  Twister twister{gog, PathMap::from(morphism)};
  bool const exhaustive_rotations = rotations_suffice(morphism);
  TwistedClassRep rep;
  rep.word = reduce_word(word, gog);
  rep.conjugator = PathWord::trivial(word.initial_vertex());

  auto accept = [&](const PathWord& u, PathWord next) {
    rep.conjugator = multiply(rep.conjugator, u, gog);
    rep.word = std::move(next);
  };

  while (rep.word.letter_count() > loop_cyclic_length(rep.word)) {
    std::size_t const q = rep.word.letter_count();
    bool progressed = false;
    auto state = rep.word;
    auto travelled = PathWord::trivial(state.initial_vertex());
    for (std::size_t j = 0; j < q && !progressed; ++j) {
      auto u = twister.rotation(state);
      auto next = twister.conjugate(state, u);
      travelled = multiply(travelled, u, gog);
      if (next.letter_count() < q) {
        accept(travelled, std::move(next));
        progressed = true;
      }
      state = std::move(next);
    }
    if (progressed) continue;
    if (exhaustive_rotations) break;

    // Rotations with edge-group shifts, breadth first, deduplicated.
    struct Node {
      PathWord word;
      PathWord travelled;
      std::size_t depth;
    };
    std::deque<Node> queue{{rep.word, PathWord::trivial(rep.word.initial_vertex()), 0}};
    std::map<std::pair<std::size_t, std::string>, bool> seen;
    long const shift = static_cast<long>(radius);
    while (!queue.empty() && !progressed) {
      auto node = std::move(queue.front());
      queue.pop_front();
      if (node.depth >= 2 * q) continue;
      bool cyclic = gog.cyclic(node.word.edge(0).bar());
      for (long k = cyclic ? -shift : 0; k <= (cyclic ? shift : 0) && !progressed; ++k) {
        if (budget == 0) {
          rep.budget_exhausted = true;
          queue.clear();
          break;
        }
        --budget;
        auto u = twister.rotation(node.word, k);
        auto next = twister.conjugate(node.word, u);
        auto travelled = multiply(node.travelled, u, gog);
        if (next.letter_count() < q) {
          accept(travelled, std::move(next));
          progressed = true;
          break;
        }
        auto key = std::make_pair(next.initial_vertex().index,
                                  format_path_word(canonical_form(next, gog), gog));
        if (seen.emplace(key, true).second) {
          queue.push_back({std::move(next), std::move(travelled), node.depth + 1});
        }
      }
    }
    if (!progressed) break;
  }
  rep.base_vertex = rep.word.initial_vertex();
  rep.certified = rep.word.letter_count() == loop_cyclic_length(rep.word);
  return rep;
}

HZero h_zero_test(const PathWord& word, const GOGMorphism& morphism, std::size_t radius,
                  std::size_t budget) {
  auto rep = h_reduce(word, morphism, radius, budget);
  HZero result;
  result.budget_exhausted = rep.budget_exhausted;
  result.certified = rep.certified;
  if (rep.word.letter_count() == 0) {
    result.vertex = rep.base_vertex;
  }
  return result;
}

std::optional<Vertex> is_h_zero(const PathWord& word, const GOGMorphism& morphism,
                                std::size_t radius) {
  return h_zero_test(word, morphism, radius).vertex;
}

TwistedWitness twisted_conjugacy_witness(const PathWord& first, const PathWord& second,
                                         const GOGMorphism& morphism, std::size_t radius,
                                         std::size_t budget) {
  TwistedWitness result;
  auto const& gog = morphism.source;
  auto r1 = h_reduce(first, morphism, radius, budget);
  auto r2 = h_reduce(second, morphism, radius, budget);
  result.budget_exhausted = r1.budget_exhausted || r2.budget_exhausted;
  if (r1.word.letter_count() != r2.word.letter_count()) {
    return result;
  }
  Twister twister{gog, PathMap::from(morphism)};
  auto back = r2.conjugator.inverse();
  auto verified = [&](const PathWord& u) {
    auto full = multiply(u, back, gog);
    if (equal_pointed(h_conjugate(first, full, morphism), second, gog)) {
      result.conjugator = full;
      return true;
    }
    return false;
  };

  if (r1.word.letter_count() == 0) {
    // A vertex element g crosses e via U = h t_e once h^-1 g H(h) delta(bar e)
    // is a power of u_{bar e}; hops are bounded by the vertex count.
    struct Hop {
      Vertex at;
      FreeWord element;
      PathWord lead;
      std::size_t hops = 0;
    };
    auto const& graph = gog.graph();
    std::deque<Hop> todo{{r1.base_vertex, r1.word.syllable(0), r1.conjugator, 0}};
    std::set<std::pair<std::size_t, std::vector<Letter>>> seen{
        {r1.base_vertex.index, r1.word.syllable(0).letters()}};
    auto const powers = static_cast<long>(std::min<std::size_t>(radius, 2));
    while (!todo.empty()) {
      auto hop = std::move(todo.front());
      todo.pop_front();
      auto const& phi = morphism.vertex_maps[hop.at.index];
      if (hop.at == r2.base_vertex) {
        auto found = phi_conjugate_witness(phi, hop.element, r2.word.syllable(0), radius, budget);
        result.budget_exhausted = result.budget_exhausted || found.budget_exhausted;
        if (found.witness &&
            verified(multiply(hop.lead, PathWord::vertex_element(*found.witness, hop.at), gog))) {
          return result;
        }
      }
      if (hop.hops + 1 >= graph.vertex_count()) continue;
      for (std::size_t i = 0; i < graph.edge_count(); ++i) {
        Edge e{i};
        if (graph.initial(e) != hop.at) continue;
        bool cyclic = gog.cyclic(e);
        for (long k = cyclic ? -powers : 0; k <= (cyclic ? powers : 0); ++k) {
          auto target = morphism.correction(e.bar()).inverse();
          if (k != 0) target = gog.edge_image(e.bar()).pow(k) * target;
          auto found = phi_conjugate_witness(phi, hop.element, target, radius, budget);
          result.budget_exhausted = result.budget_exhausted || found.budget_exhausted;
          if (!found.witness) continue;
          auto step = multiply(PathWord::vertex_element(*found.witness, hop.at),
                               PathWord::stable_letter(graph, e), gog);
          auto moved = reduce_word(
              h_conjugate(PathWord::vertex_element(hop.element, hop.at), step, morphism), gog);
          if (moved.letter_count() != 0) continue;
          auto far = graph.terminal(e);
          if (!seen.emplace(far.index, moved.syllable(0).letters()).second) continue;
          todo.push_back({far, moved.syllable(0), multiply(hop.lead, step, gog), hop.hops + 1});
        }
      }
    }
    return result;
  }

  std::size_t const q = r1.word.letter_count();
  long const range = static_cast<long>(radius);
  auto inverse_map = PathMap::from(invert(morphism));
  // Orbit H^m(R1), reached from R1 by U = R1 H(R1) ... (or inverse words for m < 0).
  for (long m = 0; m <= range; ++m) {
    for (int direction : {1, -1}) {
      if (m == 0 && direction < 0) continue;
      auto image = r1.word;
      auto lead = r1.conjugator;
      for (long i = 0; i < m; ++i) {
        if (direction > 0) {
          lead = multiply(lead, image, gog);
          image = apply(twister.map, image);
        } else {
          image = apply(inverse_map, image);
          lead = multiply(lead, image.inverse(), gog);
        }
      }
      auto state = image;
      for (std::size_t j = 0; j < q; ++j) {
        if (state.edges() == r2.word.edges()) {
          Edge e1 = state.edge(0);
          bool cyclic = gog.cyclic(e1);
          for (long k = cyclic ? -range : 0; k <= (cyclic ? range : 0); ++k) {
            if (budget == 0) {
              result.budget_exhausted = true;
              return result;
            }
            --budget;
            auto g = state.syllable(0);
            if (k != 0) g *= gog.edge_image(e1.bar()).pow(-k);
            g *= r2.word.syllable(0).inverse();
            auto shifted = PathWord::vertex_element(g, state.initial_vertex());
            if (equal_pointed(twister.conjugate(state, shifted), r2.word, gog) &&
                verified(multiply(lead, shifted, gog))) {
              return result;
            }
          }
        }
        auto u = twister.rotation(state);
        state = twister.conjugate(state, u);
        lead = multiply(lead, u, gog);
      }
    }
  }
  return result;
}

Rational d_length(const PathWord& word, const DehnTwist& twist, const Marking& marking,
                  const Basis& weights) {
  if (!(marking.gog() == twist.gog())) {
    throw std::invalid_argument("d_length: marking belongs to a different graph of groups");
  }
  auto rep = h_reduce(word, twist.as_morphism(), default_search_radius(word));
  auto const& graph = twist.gog().graph();
  Rational total(0);
  for (Edge e : rep.word.edges()) {
    auto z = marking.element_to_basis(graph.terminal(e), twist.twistor_image(e));
    total += weighted_cyclic_length(z, weights);
  }
  return total / 2;
}

}  // namespace gog
