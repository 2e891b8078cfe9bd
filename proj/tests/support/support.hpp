#pragma once

// Shared fixtures, random generators and brute-force oracles for the unit and
// acceptance suites.  Oracles deliberately avoid the library's reduction code.

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "gog/dehn.hpp"
#include "gog/document.hpp"
#include "gog/graph_of_groups.hpp"
#include "gog/marking.hpp"
#include "gog/morphism.hpp"
#include "gog/twisted.hpp"
#include "gog/two_level.hpp"

#ifndef GOG_FIXTURE_DIR
#define GOG_FIXTURE_DIR "fixtures"
#endif

namespace gog::testing {

inline constexpr int kIterations = 200;

inline std::string fixture_path(const std::string& name) {
  return std::string(GOG_FIXTURE_DIR) + "/" + name;
}

inline Document fixture_a_document() { return load_document(fixture_path("fixture_a.json")); }
inline Document fixture_b_document() { return load_document(fixture_path("fixture_b.json")); }
inline DehnTwist fixture_a() { return *fixture_a_document().twist; }
inline TwoLevelTwist fixture_b() { return *fixture_b_document().two_level; }

inline Document document_from(const std::string& json) { return parse_document(json); }

// Trivial edge groups and identity on graph and vertex groups; only the
// corrections are non-trivial.
struct WorkedExample {
  GraphOfGroups gog;
  GOGMorphism morphism;
};

// v = <b>, v1 = <a>, e: v -> v1 with delta(e) = a^-1 and delta(bar e) = b^-1,
// so H(t_e) = b^-1 t_e a.
inline WorkedExample worked_example_one() {
  Graph graph;
  auto v = graph.add_vertex("v");
  auto v1 = graph.add_vertex("v1");
  graph.add_edge("e", v, v1);
  GraphOfGroups gog(graph, {Basis("b"), Basis("a")}, {std::nullopt, std::nullopt});
  auto morphism = GOGMorphism::identity(gog);
  morphism.corrections[0] = Basis("a").parse("A");  // in G_{v1}
  morphism.corrections[1] = Basis("b").parse("B");  // in G_v
  return {gog, morphism};
}

// v = <b, c>, v1 and v2 trivial; e: v -> v1 and f: v -> v2 trivial edges
// with delta(bar e) = b^-1 and delta(bar f) = c^-1.
inline WorkedExample worked_example_two() {
  Graph graph;
  auto v = graph.add_vertex("v");
  auto v1 = graph.add_vertex("v1");
  auto v2 = graph.add_vertex("v2");
  graph.add_edge("e", v, v1);
  graph.add_edge("f", v, v2);
  Basis group("bc");
  GraphOfGroups gog(graph, {group, Basis(""), Basis("")},
                    {std::nullopt, std::nullopt, std::nullopt, std::nullopt});
  auto morphism = GOGMorphism::identity(gog);
  morphism.corrections[1] = group.parse("B");
  morphism.corrections[3] = group.parse("C");
  return {gog, morphism};
}

// A small zoo of graphs of groups for randomized path-group checks.
inline std::vector<GraphOfGroups> sample_gogs() {
  std::vector<GraphOfGroups> gogs;
  gogs.push_back(fixture_a().gog());
  gogs.push_back(worked_example_one().gog);
  {
    // Amalgam-style cyclic edge plus a loop with trivial group.
    Graph graph;
    auto v = graph.add_vertex("v");
    auto w = graph.add_vertex("w");
    graph.add_edge("e", v, w);
    graph.add_edge("f", v, v);
    Basis left("ab");
    Basis right("c");
    gogs.emplace_back(graph, std::vector<Basis>{left, right},
                      std::vector<std::optional<FreeWord>>{right.parse("cc"), left.parse("ab"),
                                                           std::nullopt, std::nullopt});
  }
  {
    // HNN loop with a non-cyclically-reduced image.
    Graph graph;
    auto v = graph.add_vertex("v");
    graph.add_edge("e", v, v);
    Basis group("ab");
    gogs.emplace_back(graph, std::vector<Basis>{group},
                      std::vector<std::optional<FreeWord>>{group.parse("aB"), group.parse("bab")});
  }
  return gogs;
}

// ------------------------------------------------------- two-level families

// The fixture's local twist on <a, c> with loop b, based at its only vertex.
inline LocalTwist fixture_local() { return LocalTwist(fixture_a(), Vertex{0}); }

inline PathWord local_word(const std::string& text) {
  return parse_path_word(text, fixture_a().gog());
}

// Top vertex V carrying the fixture local twist and trivial vertices N1, N2;
// edges e, f run N1 -> V and g, h run N2 -> V.  delta* of the forward sides
// are t[b], t[b]^2, `g_star`, T[b]; the reverse sides are trivial.
inline TwoLevelTwist parallel_edges(const std::string& g_star) {
  Graph top;
  auto v = top.add_vertex("V");
  auto n1 = top.add_vertex("N1");
  auto n2 = top.add_vertex("N2");
  top.add_edge("e", n1, v);
  top.add_edge("f", n1, v);
  top.add_edge("g", n2, v);
  top.add_edge("h", n2, v);
  // Every local graph here has a single vertex, so trivial words agree.
  auto one = PathWord::trivial(Vertex{0});
  return TwoLevelTwist(
      top, {fixture_local(), LocalTwist::trivial("N1"), LocalTwist::trivial("N2")},
      {local_word("t[b]"), one, local_word("t[b].t[b]"), one, local_word(g_star), one,
       local_word("T[b]"), one},
      std::vector<PathWord>(8, one));
}

// The fixture two-level twist with delta* of the reverse loop side replaced.
inline TwoLevelTwist fixture_b_with_reverse(const std::string& reverse_star) {
  auto b = fixture_b();
  return b.with_delta_star(Edge{1}, local_word(reverse_star), PathWord::trivial(Vertex{0}));
}

// Two top vertices with non-trivial local twists joined by an edge that is
// locally zero on both sides: contracting it needs a blow-up.
inline TwoLevelTwist blow_up_needed() {
  Graph top;
  auto p = top.add_vertex("P");
  auto q = top.add_vertex("Q");
  top.add_edge("c", p, p);
  top.add_edge("d", p, q);
  top.add_edge("k", q, q);
  auto one = PathWord::trivial(Vertex{0});
  auto tb = local_word("t[b]");
  return TwoLevelTwist(top, {fixture_local(), fixture_local()}, {tb, one, one, one, tb, one},
                       {one, one, one, one, one, one});
}

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : engine_(seed) {}

  long integer(long low, long high) {
    return std::uniform_int_distribution<long>(low, high)(engine_);
  }
  bool coin() { return integer(0, 1) == 1; }
  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items.at(static_cast<std::size_t>(integer(0, static_cast<long>(items.size()) - 1)));
  }

  std::vector<Letter> letters(std::size_t rank, std::size_t max_length) {
    std::vector<Letter> out;
    if (rank == 0) return out;
    auto length = integer(0, static_cast<long>(max_length));
    for (long i = 0; i < length; ++i) {
      out.push_back(letter_of(static_cast<std::size_t>(integer(0, static_cast<long>(rank) - 1)),
                              coin() ? 1 : -1));
    }
    return out;
  }

  FreeWord word(std::size_t rank, std::size_t max_length) {
    auto raw = letters(rank, max_length);
    return FreeWord::from_letters(raw);
  }

  FreeWord nontrivial_word(std::size_t rank, std::size_t max_length) {
    for (;;) {
      auto w = word(rank, max_length);
      if (!w.empty()) return w;
    }
  }

  // Random walk of `steps` stable letters from `start`; not necessarily reduced.
  PathWord walk(const GraphOfGroups& gog, Vertex start, std::size_t steps,
                std::size_t syllable_length) {
    auto const& graph = gog.graph();
    std::vector<FreeWord> syllables;
    std::vector<Vertex> tags{start};
    std::vector<Edge> edges;
    syllables.push_back(word(gog.vertex_group(start).rank(), syllable_length));
    auto here = start;
    for (std::size_t i = 0; i < steps; ++i) {
      std::vector<Edge> out;
      for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        if (graph.initial(Edge{e}) == here) out.push_back(Edge{e});
      }
      auto e = pick(out);
      here = graph.terminal(e);
      edges.push_back(e);
      tags.push_back(here);
      syllables.push_back(word(gog.vertex_group(here).rank(), syllable_length));
    }
    return PathWord(std::move(syllables), std::move(tags), std::move(edges));
  }

  // Closed walk: a random walk followed by a shortest return path.
  PathWord loop(const GraphOfGroups& gog, Vertex start, std::size_t steps,
                std::size_t syllable_length) {
    auto forward = walk(gog, start, steps, syllable_length);
    auto syllables = forward.syllables();
    auto tags = forward.tags();
    auto edges = forward.edges();
    for (Edge e : shortest_path(gog.graph(), forward.terminal_vertex(), start)) {
      edges.push_back(e);
      tags.push_back(gog.graph().terminal(e));
      syllables.push_back(word(gog.vertex_group(tags.back()).rank(), syllable_length));
    }
    return PathWord(std::move(syllables), std::move(tags), std::move(edges));
  }

  static std::vector<Edge> shortest_path(const Graph& graph, Vertex from, Vertex to) {
    std::vector<std::optional<Edge>> via(graph.vertex_count());
    std::vector<bool> seen(graph.vertex_count(), false);
    std::deque<Vertex> queue{from};
    seen[from.index] = true;
    while (!queue.empty()) {
      auto here = queue.front();
      queue.pop_front();
      for (std::size_t e = 0; e < graph.edge_count(); ++e) {
        Edge edge{e};
        auto next = graph.terminal(edge);
        if (graph.initial(edge) == here && !seen[next.index]) {
          seen[next.index] = true;
          via[next.index] = edge;
          queue.push_back(next);
        }
      }
    }
    std::vector<Edge> path;
    for (auto at = to; at != from;) {
      auto e = *via.at(at.index);
      path.insert(path.begin(), e);
      at = graph.initial(e);
    }
    return path;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

// ---------------------------------------------------------------- free groups

// Cancels a uniformly chosen adjacent inverse pair until none is left.
inline std::vector<Letter> reduce_in_random_order(std::vector<Letter> letters, Generator& gen) {
  for (;;) {
    std::vector<std::size_t> spots;
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
      if (letters[i] == -letters[i + 1]) spots.push_back(i);
    }
    if (spots.empty()) return letters;
    auto at = gen.pick(spots);
    letters.erase(letters.begin() + static_cast<long>(at), letters.begin() + static_cast<long>(at) + 2);
  }
}

// Stack reduction, independent of FreeWord.
inline std::vector<Letter> stack_reduce(const std::vector<Letter>& letters) {
  std::vector<Letter> out;
  for (Letter x : letters) {
    if (!out.empty() && out.back() == -x) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline std::vector<Letter> inverse_letters(std::vector<Letter> letters) {
  std::vector<Letter> out(letters.rbegin(), letters.rend());
  for (auto& x : out) x = -x;
  return out;
}

inline std::vector<Letter> join(std::vector<Letter> lhs, const std::vector<Letter>& rhs) {
  lhs.insert(lhs.end(), rhs.begin(), rhs.end());
  return lhs;
}

// Minimal length over all conjugates p^-1 w p by prefixes p of w.
inline std::size_t brute_cyclic_length(const FreeWord& word) {
  auto letters = word.letters();
  auto best = letters.size();
  for (std::size_t cut = 0; cut <= letters.size(); ++cut) {
    std::vector<Letter> prefix(letters.begin(), letters.begin() + static_cast<long>(cut));
    auto conjugate = stack_reduce(join(join(inverse_letters(prefix), letters), prefix));
    best = std::min(best, conjugate.size());
  }
  return best;
}

// Smallest period dividing the length.
inline std::pair<std::vector<Letter>, long> brute_root(const std::vector<Letter>& letters) {
  auto n = letters.size();
  for (std::size_t period = 1; period <= n; ++period) {
    if (n % period != 0) continue;
    bool repeats = true;
    for (std::size_t i = period; i < n && repeats; ++i) repeats = letters[i] == letters[i - period];
    if (repeats) {
      return {std::vector<Letter>(letters.begin(), letters.begin() + static_cast<long>(period)),
              static_cast<long>(n / period)};
    }
  }
  return {letters, 1};
}

// Every reduced word of length <= max_length over `rank` generators.
inline std::vector<FreeWord> all_words(std::size_t rank, std::size_t max_length) {
  std::vector<FreeWord> out{FreeWord{}};
  std::vector<FreeWord> layer{FreeWord{}};
  for (std::size_t length = 1; length <= max_length; ++length) {
    std::vector<FreeWord> next;
    for (auto const& w : layer) {
      for (std::size_t g = 0; g < rank; ++g) {
        for (int sign : {1, -1}) {
          Letter x = letter_of(g, sign);
          if (!w.empty() && w.letters().back() == -x) continue;
          auto longer = w;
          longer.append(x);
          next.push_back(longer);
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// ---------------------------------------------------------------- path groups

inline std::string key_of(const PathWord& word, const GraphOfGroups& gog) {
  return format_path_word(word, gog);
}

inline PathWord replace_syllable(const PathWord& word, std::size_t i, FreeWord value) {
  auto syllables = word.syllables();
  syllables.at(i) = std::move(value);
  return PathWord(std::move(syllables), word.tags(), word.edges());
}

// r_{i-1} t_e r_i -> r_{i-1} u_{bar e}^s t_e u_e^-s r_i for the stable letter at i.
inline PathWord slide(const PathWord& word, std::size_t i, long exponent, const GraphOfGroups& gog) {
  auto e = word.edge(i);
  auto syllables = word.syllables();
  syllables[i] = syllables[i] * gog.edge_image(e.bar()).pow(exponent);
  syllables[i + 1] = gog.edge_image(e).pow(-exponent) * syllables[i + 1];
  return PathWord(std::move(syllables), word.tags(), word.edges());
}

// Exponent k with w == u^k by scanning |k| <= |w|, independent of the library.
inline std::optional<long> scan_power(const FreeWord& w, const FreeWord& u) {
  auto limit = static_cast<long>(w.size());
  for (long k = -limit; k <= limit; ++k) {
    if (u.pow(k) == w) return k;
  }
  return std::nullopt;
}

// Removes t_e r t_{bar e} at stable letter i when r lies in the edge image.
inline std::optional<PathWord> pinch(const PathWord& word, std::size_t i, const GraphOfGroups& gog) {
  if (i + 1 >= word.letter_count()) return std::nullopt;
  auto e = word.edge(i);
  if (word.edge(i + 1) != e.bar()) return std::nullopt;
  auto const& middle = word.syllable(i + 1);
  FreeWord replacement;
  if (gog.cyclic(e)) {
    auto k = scan_power(middle, gog.edge_image(e));
    if (!k) return std::nullopt;
    replacement = gog.edge_image(e.bar()).pow(*k);
  } else if (!middle.empty()) {
    return std::nullopt;
  }
  std::vector<FreeWord> syllables;
  std::vector<Vertex> tags;
  std::vector<Edge> edges;
  for (std::size_t j = 0; j < i; ++j) {
    syllables.push_back(word.syllable(j));
    tags.push_back(word.tag(j));
    edges.push_back(word.edge(j));
  }
  syllables.push_back(word.syllable(i) * replacement * word.syllable(i + 2));
  tags.push_back(word.tag(i));
  for (std::size_t j = i + 2; j < word.letter_count(); ++j) {
    edges.push_back(word.edge(j));
    syllables.push_back(word.syllable(j + 1));
    tags.push_back(word.tag(j + 1));
  }
  return PathWord(std::move(syllables), std::move(tags), std::move(edges));
}

// Everything reachable by single slides and pinches with every syllable at
// most `cap` letters long.  Stops early when `target` is met.
struct Closure {
  std::unordered_set<std::string> seen;
  bool hit = false;
  bool truncated = false;
};

inline Closure rewrite_closure(const PathWord& start, const GraphOfGroups& gog, std::size_t cap,
                               const std::unordered_set<std::string>* target = nullptr,
                               std::size_t max_states = 200000) {
  Closure closure;
  std::deque<PathWord> queue;
  auto visit = [&](const PathWord& w) {
    for (auto const& s : w.syllables()) {
      if (s.size() > cap) return;
    }
    auto key = key_of(w, gog);
    if (!closure.seen.insert(key).second) return;
    if (target && target->count(key)) closure.hit = true;
    queue.push_back(w);
  };
  visit(start);
  while (!queue.empty() && !closure.hit) {
    if (closure.seen.size() > max_states) {
      closure.truncated = true;
      break;
    }
    auto w = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i < w.letter_count(); ++i) {
      if (gog.cyclic(w.edge(i))) {
        visit(slide(w, i, 1, gog));
        visit(slide(w, i, -1, gog));
      }
      if (auto pinched = pinch(w, i, gog)) visit(*pinched);
    }
  }
  return closure;
}

// Oracle equality: the two rewrite closures meet.
struct OracleVerdict {
  bool equal = false;
  bool truncated = false;
};

inline OracleVerdict oracle_equal(const PathWord& lhs, const PathWord& rhs,
                                  const GraphOfGroups& gog, std::size_t cap) {
  std::unordered_set<std::string> goal{key_of(rhs, gog)};
  auto left = rewrite_closure(lhs, gog, cap, &goal);
  if (left.hit) return {true, false};
  auto right = rewrite_closure(rhs, gog, cap, &left.seen);
  return {right.hit, left.truncated || right.truncated};
}

// r'_k = u_{e_k}^{g_k} r_k u_{bar e_{k+1}}^{g_{k+1}}: the normal-form moves
// with one random exponent per cyclic stable letter.
inline PathWord random_moves(const PathWord& word, const GraphOfGroups& gog, Generator& gen,
                             long max_exponent) {
  auto out = word;
  for (std::size_t i = 0; i < word.letter_count(); ++i) {
    if (!gog.cyclic(word.edge(i))) continue;
    out = slide(out, i, gen.integer(-max_exponent, max_exponent), gog);
  }
  return out;
}

// Inserts t_e u_e^k t_{bar e} u_{bar e}^-k at syllable i for some edge leaving
// the syllable's vertex; the product is trivial in the path group.
inline PathWord insert_identity(const PathWord& word, std::size_t i, const GraphOfGroups& gog,
                                Generator& gen) {
  auto const& graph = gog.graph();
  auto here = word.tag(i);
  std::vector<Edge> out;
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    if (graph.initial(Edge{e}) == here) out.push_back(Edge{e});
  }
  auto e = gen.pick(out);
  long k = gog.cyclic(e) ? gen.integer(-2, 2) : 0;
  FreeWord inner = gog.cyclic(e) ? gog.edge_image(e).pow(k) : FreeWord{};
  FreeWord outer = gog.cyclic(e) ? gog.edge_image(e.bar()).pow(-k) : FreeWord{};
  std::vector<FreeWord> syllables;
  std::vector<Vertex> tags;
  std::vector<Edge> edges;
  for (std::size_t j = 0; j <= word.letter_count(); ++j) {
    if (j > 0) edges.push_back(word.edge(j - 1));
    if (j == i) {
      syllables.push_back(word.syllable(j));
      tags.push_back(here);
      edges.push_back(e);
      syllables.push_back(inner);
      tags.push_back(graph.terminal(e));
      edges.push_back(e.bar());
      syllables.push_back(outer);
      tags.push_back(here);
    } else {
      syllables.push_back(word.syllable(j));
      tags.push_back(word.tag(j));
    }
  }
  return PathWord(std::move(syllables), std::move(tags), std::move(edges));
}

// ---------------------------------------------------------------- iteration

// phi^t(g) cyclic length by naive substitution, stack reduction and trimming
// of mutually inverse ends; the trimmed word is cyclically reduced.
inline std::vector<std::size_t> naive_cyclic_lengths(const BasisMap& phi, const FreeWord& g,
                                                     std::size_t t_max) {
  std::vector<std::size_t> lengths;
  auto current = g.letters();
  for (std::size_t t = 0;; ++t) {
    std::size_t front = 0;
    std::size_t back = current.size();
    while (back - front > 1 && current[front] == -current[back - 1]) {
      ++front;
      --back;
    }
    current = std::vector<Letter>(current.begin() + static_cast<long>(front),
                                  current.begin() + static_cast<long>(back));
    lengths.push_back(current.size());
    if (t == t_max) break;
    std::vector<Letter> image;
    for (Letter x : current) {
      auto const& w = phi.image(generator_of(x)).letters();
      auto piece = x > 0 ? w : inverse_letters(w);
      image.insert(image.end(), piece.begin(), piece.end());
    }
    current = stack_reduce(image);
  }
  return lengths;
}

}  // namespace gog::testing
