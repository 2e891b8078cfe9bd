#include "gog/graph_of_groups.hpp"

#include <algorithm>
#include <cctype>
#include <queue>
#include <stdexcept>

namespace gog {

namespace {

constexpr std::string_view kMiddleDot = "\xC2\xB7";

bool letters_fit(const FreeWord& word, const Basis& basis) {
  return std::all_of(word.letters().begin(), word.letters().end(),
                     [&](Letter l) { return generator_of(l) < basis.rank(); });
}

std::string trim(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_syllables(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, kMiddleDot.size()) == kMiddleDot) {
      tokens.push_back(trim(current));
      current.clear();
      i += kMiddleDot.size();
    } else if (text[i] == '.') {
      tokens.push_back(trim(current));
      current.clear();
      ++i;
    } else {
      current.push_back(text[i]);
      ++i;
    }
  }
  tokens.push_back(trim(current));
  return tokens;
}

}  // namespace

Vertex Graph::add_vertex(std::string name) {
  if (find_vertex(name)) {
    throw std::invalid_argument("duplicate vertex '" + name + "'");
  }
  vertex_names_.push_back(std::move(name));
  return Vertex{vertex_names_.size() - 1};
}

Edge Graph::add_edge(std::string name, Vertex from, Vertex to) {
  if (from.index >= vertex_count() || to.index >= vertex_count()) {
    throw std::invalid_argument("edge '" + name + "' references an unknown vertex");
  }
  if (find_edge(name)) {
    throw std::invalid_argument("duplicate edge '" + name + "'");
  }
  edge_names_.push_back(std::move(name));
  terminal_.push_back(to);
  terminal_.push_back(from);
  return Edge{terminal_.size() - 2};
}

std::optional<Vertex> Graph::find_vertex(std::string_view name) const {
  for (std::size_t i = 0; i < vertex_names_.size(); ++i) {
    if (vertex_names_[i] == name) {
      return Vertex{i};
    }
  }
  return std::nullopt;
}

std::optional<Edge> Graph::find_edge(std::string_view name) const {
  for (std::size_t i = 0; i < edge_names_.size(); ++i) {
    if (edge_names_[i] == name) {
      return Edge{2 * i};
    }
  }
  return std::nullopt;
}

std::vector<Edge> Graph::edges_into(Vertex v) const {
  std::vector<Edge> result;
  for (std::size_t i = 0; i < terminal_.size(); ++i) {
    if (terminal_[i] == v) {
      result.push_back(Edge{i});
    }
  }
  return result;
}

bool Graph::connected() const {
  if (vertex_count() == 0) {
    return false;
  }
  std::vector<bool> seen(vertex_count(), false);
  std::queue<std::size_t> todo;
  todo.push(0);
  seen[0] = true;
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop();
    for (std::size_t e = 0; e < terminal_.size(); ++e) {
      if (initial(Edge{e}).index == v && !seen[terminal_[e].index]) {
        seen[terminal_[e].index] = true;
        todo.push(terminal_[e].index);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

GraphOfGroups::GraphOfGroups(Graph graph, std::vector<Basis> vertex_groups,
                             std::vector<std::optional<FreeWord>> edge_images)
    : graph_(std::move(graph)),
      vertex_groups_(std::move(vertex_groups)),
      edge_images_(std::move(edge_images)) {
  if (!graph_.connected()) {
    throw std::invalid_argument("graph must be non-empty and connected");
  }
  if (vertex_groups_.size() != graph_.vertex_count()) {
    throw std::invalid_argument("one vertex group per vertex required");
  }
  if (edge_images_.size() != graph_.edge_count()) {
    throw std::invalid_argument("one edge image slot per oriented edge required");
  }
  for (std::size_t i = 0; i < edge_images_.size(); ++i) {
    Edge e{i};
    if (edge_images_[i].has_value() != edge_images_[e.bar().index].has_value()) {
      throw std::invalid_argument("edge '" + graph_.edge_name(e) +
                                  "': both orientations must share the edge group");
    }
    if (edge_images_[i]) {
      if (edge_images_[i]->empty()) {
        throw std::invalid_argument("edge '" + graph_.edge_name(e) +
                                    "': cyclic edge image must be non-trivial");
      }
      if (!letters_fit(*edge_images_[i], vertex_group(graph_.terminal(e)))) {
        throw std::invalid_argument("edge '" + graph_.edge_name(e) +
                                    "': image outside its vertex group");
      }
    }
  }
}

PathWord::PathWord(std::vector<FreeWord> syllables, std::vector<Vertex> tags,
                   std::vector<Edge> edges)
    : syllables_(std::move(syllables)), tags_(std::move(tags)), edges_(std::move(edges)) {
  if (syllables_.size() != edges_.size() + 1 || tags_.size() != syllables_.size()) {
    throw std::invalid_argument("path word must alternate syllables and stable letters");
  }
}

PathWord PathWord::trivial(Vertex v) { return PathWord({FreeWord{}}, {v}, {}); }

PathWord PathWord::vertex_element(FreeWord element, Vertex v) {
  return PathWord({std::move(element)}, {v}, {});
}

PathWord PathWord::stable_letter(const Graph& graph, Edge e) {
  return PathWord({FreeWord{}, FreeWord{}}, {graph.initial(e), graph.terminal(e)}, {e});
}

bool PathWord::is_connected(const Graph& graph) const {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (edges_[i].index >= graph.edge_count() || tags_[i] != graph.initial(edges_[i]) ||
        tags_[i + 1] != graph.terminal(edges_[i])) {
      return false;
    }
  }
  return std::all_of(tags_.begin(), tags_.end(),
                     [&](Vertex v) { return v.index < graph.vertex_count(); });
}

std::size_t PathWord::syllable_letters() const {
  std::size_t total = 0;
  for (auto const& s : syllables_) {
    total += s.size();
  }
  return total;
}

PathWord PathWord::inverse() const {
  std::vector<FreeWord> syllables;
  std::vector<Vertex> tags(tags_.rbegin(), tags_.rend());
  std::vector<Edge> edges;
  syllables.reserve(syllables_.size());
  for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it) {
    syllables.push_back(it->inverse());
  }
  for (auto it = edges_.rbegin(); it != edges_.rend(); ++it) {
    edges.push_back(it->bar());
  }
  return PathWord(std::move(syllables), std::move(tags), std::move(edges));
}

PathWordBuilder::PathWordBuilder(const GraphOfGroups& gog, Vertex start)
    : gog_(&gog), word_(PathWord::trivial(start)) {}

PathWordBuilder::PathWordBuilder(const GraphOfGroups& gog, PathWord reduced_prefix)
    : gog_(&gog), word_(std::move(reduced_prefix)) {}

void PathWordBuilder::push_element(const FreeWord& element, Vertex at) {
  if (at != word_.terminal_vertex()) {
    throw std::invalid_argument("disconnected word: element at vertex '" +
                                gog_->graph().vertex_name(at) + "' follows vertex '" +
                                gog_->graph().vertex_name(word_.terminal_vertex()) + "'");
  }
  if (!letters_fit(element, gog_->vertex_group(at))) {
    throw std::invalid_argument("element outside the group of vertex '" +
                                gog_->graph().vertex_name(at) + "'");
  }
  word_.syllables_.back() *= element;
}

void PathWordBuilder::push_edge(Edge e) {
  auto const& graph = gog_->graph();
  if (graph.initial(e) != word_.terminal_vertex()) {
    throw std::invalid_argument("disconnected word at stable letter of edge '" +
                                graph.edge_name(e) + "'");
  }
  if (!word_.edges_.empty() && word_.edges_.back() == e.bar()) {
    Edge top = word_.edges_.back();
    auto const& r = word_.syllables_.back();
    std::optional<long> k;
    if (gog_->cyclic(top)) {
      k = cyclic_subgroup_member(r, gog_->edge_image(top));
    } else if (r.empty()) {
      k = 0;
    }
    if (k) {
      word_.syllables_.pop_back();
      word_.tags_.pop_back();
      word_.edges_.pop_back();
      if (*k != 0) {
        word_.syllables_.back() *= gog_->edge_image(top.bar()).pow(*k);
      }
      ++pinches_;
      return;
    }
  }
  word_.edges_.push_back(e);
  word_.syllables_.emplace_back();
  word_.tags_.push_back(graph.terminal(e));
}

void PathWordBuilder::push_word(const PathWord& word) {
  push_element(word.syllable(0), word.tag(0));
  for (std::size_t i = 0; i < word.letter_count(); ++i) {
    push_edge(word.edge(i));
    push_element(word.syllable(i + 1), word.tag(i + 1));
  }
}

PathWord PathWordBuilder::finish() && { return std::move(word_); }

PathWord reduce_word(const PathWord& word, const GraphOfGroups& gog) {
  if (!word.is_connected(gog.graph())) {
    throw std::invalid_argument("reduce_word: disconnected word");
  }
  PathWordBuilder builder(gog, word.initial_vertex());
  builder.push_word(word);
  return std::move(builder).finish();
}

PathWord multiply(const PathWord& lhs, const PathWord& rhs, const GraphOfGroups& gog) {
  PathWordBuilder builder(gog, lhs);
  builder.push_word(rhs);
  return std::move(builder).finish();
}

long coset_minimizer(const FreeWord& r, const FreeWord& u) {
  // |r u^k| >= |k| |core(u)| - |r| - 2 |conj(u)|, so larger |k| cannot beat k = 0.
  auto reduction = cyclic_reduce(u);
  long const bound =
      static_cast<long>((2 * r.size() + 2 * reduction.conjugator.size()) / reduction.core.size());
  long best_k = 0;
  FreeWord best = r;
  FreeWord up = r;
  FreeWord down = r;
  auto u_inv = u.inverse();
  for (long k = 1; k <= bound; ++k) {
    up *= u;
    down *= u_inv;
    if (shortlex_less(up, best)) {
      best = up;
      best_k = k;
    }
    if (shortlex_less(down, best)) {
      best = down;
      best_k = -k;
    }
  }
  return best_k;
}

PathWord canonical_form(const PathWord& word, const GraphOfGroups& gog) {
  auto reduced = reduce_word(word, gog);
  std::vector<FreeWord> syllables = reduced.syllables();
  for (std::size_t i = 0; i < reduced.letter_count(); ++i) {
    Edge e = reduced.edge(i);
    if (!gog.cyclic(e)) {
      continue;
    }
    // r_i u_{bar e}^k t_e = r_i t_e u_e^k, so u_e^{-k} moves into r_{i+1}.
    long k = coset_minimizer(syllables[i], gog.edge_image(e.bar()));
    if (k != 0) {
      syllables[i] *= gog.edge_image(e.bar()).pow(k);
      syllables[i + 1] = gog.edge_image(e).pow(-k) * syllables[i + 1];
    }
  }
  return PathWord(std::move(syllables), reduced.tags(), reduced.edges());
}

std::size_t path_length(const PathWord& word, const GraphOfGroups& gog) {
  return reduce_word(word, gog).letter_count();
}

bool equal_pointed(const PathWord& lhs, const PathWord& rhs, const GraphOfGroups& gog) {
  return canonical_form(lhs, gog) == canonical_form(rhs, gog);
}

bool equal_in_path_group(const PathWord& lhs, const PathWord& rhs, const GraphOfGroups& gog) {
  auto a = canonical_form(lhs, gog);
  auto b = canonical_form(rhs, gog);
  if (a.is_trivial() && b.is_trivial()) {
    return true;
  }
  return a == b;
}

PathCyclicReduction cyclically_reduce(const PathWord& word, const GraphOfGroups& gog) {
  if (!word.is_connected(gog.graph()) || !word.closed()) {
    throw std::invalid_argument("cyclically_reduce: word must be closed and connected");
  }
  PathCyclicReduction result{reduce_word(word, gog), PathWord::trivial(word.initial_vertex())};
  while (result.core.letter_count() >= 2) {
    auto const& core = result.core;
    Edge last = core.edges().back();
    if (last != core.edges().front().bar()) {
      break;
    }
    auto wrap = core.syllables().back() * core.syllables().front();
    bool pinch = gog.cyclic(last) ? cyclic_subgroup_member(wrap, gog.edge_image(last)).has_value()
                                  : wrap.empty();
    if (!pinch) {
      break;
    }
    PathWord prefix({core.syllable(0), FreeWord{}}, {core.tag(0), core.tag(1)}, {core.edge(0)});
    result.core = multiply(multiply(prefix.inverse(), core, gog), prefix, gog);
    result.conjugator = multiply(result.conjugator, prefix, gog);
  }
  return result;
}

PathWord parse_path_word(std::string_view text, const GraphOfGroups& gog) {
  auto const& graph = gog.graph();
  struct Element {
    std::string word;
    std::optional<Vertex> tag;
  };
  std::vector<Element> elements(1);
  std::vector<Edge> edges;
  bool element_open = false;
  for (auto const& token : split_syllables(text)) {
    if (token.empty()) {
      throw std::invalid_argument("empty syllable in '" + std::string(text) + "'");
    }
    if ((token[0] == 't' || token[0] == 'T') && token.size() > 3 && token[1] == '[' &&
        token.back() == ']') {
      auto name = token.substr(2, token.size() - 3);
      auto e = graph.find_edge(name);
      if (!e) {
        throw std::invalid_argument("unknown edge '" + name + "'");
      }
      edges.push_back(token[0] == 't' ? *e : e->bar());
      elements.emplace_back();
      element_open = false;
      continue;
    }
    Element element;
    auto at = token.find('@');
    element.word = token.substr(0, at);
    if (at != std::string::npos) {
      auto name = token.substr(at + 1);
      element.tag = graph.find_vertex(name);
      if (!element.tag) {
        throw std::invalid_argument("unknown vertex '" + name + "'");
      }
    }
    if (element_open) {
      auto& prev = elements.back();
      if (element.tag && prev.tag && *element.tag != *prev.tag) {
        throw std::invalid_argument("adjacent elements at different vertices");
      }
      prev.word = (prev.word == "1" ? "" : prev.word) + (element.word == "1" ? "" : element.word);
      if (element.tag) prev.tag = element.tag;
    } else {
      elements.back() = element;
    }
    element_open = true;
  }
  std::size_t const q = edges.size();
  std::vector<Vertex> tags;
  std::vector<FreeWord> syllables;
  for (std::size_t i = 0; i <= q; ++i) {
    std::optional<Vertex> v = elements[i].tag;
    auto require = [&](Vertex w) {
      if (v && *v != w) {
        throw std::invalid_argument("disconnected word: syllable " + std::to_string(i) +
                                    " sits at vertex '" + graph.vertex_name(w) + "'");
      }
      v = w;
    };
    if (i > 0) require(graph.terminal(edges[i - 1]));
    if (i < q) require(graph.initial(edges[i]));
    if (!v) {
      if (graph.vertex_count() == 1) {
        v = Vertex{0};
      } else {
        std::vector<Vertex> fits;
        std::string lower;
        for (char c : elements[i].word) {
          lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
        for (std::size_t w = 0; w < graph.vertex_count(); ++w) {
          auto const& basis = gog.vertex_group(Vertex{w});
          bool fit = !lower.empty() && lower != "1" &&
                     std::all_of(lower.begin(), lower.end(),
                                 [&](char c) { return basis.index_of(c).has_value(); });
          if (fit) fits.push_back(Vertex{w});
        }
        if (fits.size() != 1) {
          throw std::invalid_argument("vertex of '" + elements[i].word +
                                      "' is ambiguous; add @vertex");
        }
        v = fits.front();
      }
    }
    tags.push_back(*v);
    syllables.push_back(gog.vertex_group(*v).parse(elements[i].word));
  }
  return PathWord(std::move(syllables), std::move(tags), std::move(edges));
}

std::string format_path_word(const PathWord& word, const GraphOfGroups& gog) {
  auto const& graph = gog.graph();
  auto element = [&](std::size_t i) {
    return gog.vertex_group(word.tag(i)).format(word.syllable(i));
  };
  if (word.letter_count() == 0) {
    return element(0) + "@" + graph.vertex_name(word.tag(0));
  }
  std::vector<std::string> parts;
  if (!word.syllable(0).empty()) parts.push_back(element(0));
  for (std::size_t i = 0; i < word.letter_count(); ++i) {
    Edge e = word.edge(i);
    parts.push_back(std::string(e.declared() ? "t[" : "T[") + graph.edge_name(e) + "]");
    if (!word.syllable(i + 1).empty()) parts.push_back(element(i + 1));
  }
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += kMiddleDot;
    out += parts[i];
  }
  return out;
}

}  // namespace gog
