#include "gog/morphism.hpp"

#include <algorithm>
#include <stdexcept>

namespace gog {

namespace {

bool fits(const FreeWord& word, std::size_t rank) {
  return std::all_of(word.letters().begin(), word.letters().end(),
                     [&](Letter l) { return generator_of(l) < rank; });
}

void require_endomorphism(const GOGMorphism& morphism, const char* what) {
  if (!(morphism.source == morphism.target)) {
    throw std::invalid_argument(std::string(what) + ": source and target differ");
  }
}

bool graph_map_is_identity(const GOGMorphism& morphism) {
  for (std::size_t v = 0; v < morphism.vertex_map.size(); ++v) {
    if (morphism.vertex_map[v].index != v) return false;
  }
  for (std::size_t e = 0; e < morphism.edge_map.size(); ++e) {
    if (morphism.edge_map[e].index != e) return false;
  }
  return true;
}

}  // namespace

GOGMorphism GOGMorphism::identity(const GraphOfGroups& gog) {
  auto const& graph = gog.graph();
  GOGMorphism id{gog, gog, {}, {}, {}, std::vector<int>(graph.pair_count(), 1),
                 std::vector<FreeWord>(graph.edge_count())};
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    id.vertex_map.push_back(Vertex{v});
    id.vertex_maps.push_back(BasisMap::identity(gog.vertex_group(Vertex{v}).rank()));
  }
  for (std::size_t e = 0; e < graph.edge_count(); ++e) {
    id.edge_map.push_back(Edge{e});
  }
  return id;
}

std::vector<std::string> validate(const GOGMorphism& morphism) {
  std::vector<std::string> problems;
  auto const& src = morphism.source;
  auto const& dst = morphism.target;
  auto const& sg = src.graph();
  auto const& tg = dst.graph();
  if (sg.vertex_count() != tg.vertex_count() || sg.edge_count() != tg.edge_count() ||
      morphism.vertex_map.size() != sg.vertex_count() ||
      morphism.edge_map.size() != sg.edge_count() ||
      morphism.vertex_maps.size() != sg.vertex_count() ||
      morphism.edge_signs.size() != sg.pair_count() ||
      morphism.corrections.size() != sg.edge_count()) {
    problems.emplace_back("morphism data does not match the graphs");
    return problems;
  }
  std::vector<bool> hit_vertex(tg.vertex_count(), false);
  for (std::size_t v = 0; v < sg.vertex_count(); ++v) {
    auto image = morphism.vertex_map[v];
    if (image.index >= tg.vertex_count() || hit_vertex[image.index]) {
      problems.push_back("vertex map is not a bijection at '" + sg.vertex_name(Vertex{v}) + "'");
      return problems;
    }
    hit_vertex[image.index] = true;
  }
  std::vector<bool> hit_edge(tg.edge_count(), false);
  for (std::size_t i = 0; i < sg.edge_count(); ++i) {
    Edge e{i};
    auto image = morphism.edge_map[i];
    if (image.index >= tg.edge_count() || hit_edge[image.index]) {
      problems.push_back("edge map is not a bijection at '" + sg.edge_name(e) + "'");
      return problems;
    }
    hit_edge[image.index] = true;
    if (morphism.edge_map[e.bar().index] != image.bar() ||
        tg.terminal(image) != morphism.vertex_map[sg.terminal(e).index]) {
      problems.push_back("graph map does not commute with bar and terminal at edge '" +
                         sg.edge_name(e) + "'");
      return problems;
    }
  }
  for (std::size_t v = 0; v < sg.vertex_count(); ++v) {
    auto const& map = morphism.vertex_maps[v];
    auto rank = dst.vertex_group(morphism.vertex_map[v]).rank();
    bool ok = map.rank() == src.vertex_group(Vertex{v}).rank() &&
              std::all_of(map.images().begin(), map.images().end(),
                          [&](const FreeWord& w) { return fits(w, rank); }) &&
              invert(map).has_value();
    if (!ok) {
      problems.push_back("vertex map at '" + sg.vertex_name(Vertex{v}) +
                         "' is not an isomorphism onto its image vertex group");
    }
  }
  if (!problems.empty()) return problems;
  for (std::size_t i = 0; i < sg.edge_count(); ++i) {
    Edge e{i};
    Edge image = morphism.edge_map[i];
    auto const& delta = morphism.correction(e);
    auto v = sg.terminal(e);
    if (!fits(delta, dst.vertex_group(tg.terminal(image)).rank())) {
      problems.push_back("correction term of '" + sg.edge_name(e) +
                         "' lies outside its vertex group");
      continue;
    }
    if (src.cyclic(e) != dst.cyclic(image)) {
      problems.push_back("edge '" + sg.edge_name(e) + "' changes edge-group type");
      continue;
    }
    if (!src.cyclic(e)) continue;
    int sign = morphism.sign(e);
    if (sign != 1 && sign != -1) {
      problems.push_back("edge '" + sg.edge_name(e) + "' has edge sign other than +-1");
      continue;
    }
    auto lhs = morphism.vertex_maps[v.index](src.edge_image(e));
    auto rhs = delta * dst.edge_image(image).pow(sign) * delta.inverse();
    if (!(lhs == rhs)) {
      problems.push_back("edge equation fails at " + std::string(e.declared() ? "" : "reverse of ") +
                         "edge '" + sg.edge_name(e) + "'");
    }
  }
  return problems;
}

PathMap PathMap::from(const GOGMorphism& morphism) {
  auto const& sg = morphism.source.graph();
  auto const& tg = morphism.target.graph();
  PathMap map{morphism.source, morphism.target, morphism.vertex_map, morphism.vertex_maps, {}};
  for (std::size_t i = 0; i < sg.edge_count(); ++i) {
    Edge e{i};
    Edge image = morphism.edge_map[i];
    PathWord word({morphism.correction(e.bar()), morphism.correction(e).inverse()},
                  {tg.initial(image), tg.terminal(image)}, {image});
    map.edge_images.push_back(reduce_word(word, morphism.target));
  }
  return map;
}

PathWord apply(const PathMap& map, const PathWord& word) {
  if (!word.is_connected(map.source.graph())) {
    throw std::invalid_argument("apply: disconnected word");
  }
  PathWordBuilder builder(map.target, map.vertex_map.at(word.initial_vertex().index));
  for (std::size_t i = 0; i < word.syllables().size(); ++i) {
    if (i > 0) builder.push_word(map.edge_images.at(word.edge(i - 1).index));
    auto v = word.tag(i);
    builder.push_element(map.vertex_maps.at(v.index)(word.syllable(i)),
                         map.vertex_map.at(v.index));
  }
  return std::move(builder).finish();
}

PathWord apply(const GOGMorphism& morphism, const PathWord& word) {
  return apply(PathMap::from(morphism), word);
}

GOGMorphism compose(const GOGMorphism& outer, const GOGMorphism& inner) {
  if (!(inner.target == outer.source)) {
    throw std::invalid_argument("compose: mismatched graphs of groups");
  }
  auto const& graph = inner.source.graph();
  GOGMorphism result{inner.source, outer.target, {}, {}, {}, {}, {}};
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    auto mid = inner.vertex_map[v];
    result.vertex_map.push_back(outer.vertex_map[mid.index]);
    result.vertex_maps.push_back(compose(outer.vertex_maps[mid.index], inner.vertex_maps[v]));
  }
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    result.edge_signs.push_back(inner.edge_signs[p] * outer.sign(inner.edge_map[2 * p]));
  }
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    Edge mid = inner.edge_map[i];
    result.edge_map.push_back(outer.edge_map[mid.index]);
    auto mid_vertex = outer.source.graph().terminal(mid);
    result.corrections.push_back(outer.vertex_maps[mid_vertex.index](inner.corrections[i]) *
                                 outer.correction(mid));
  }
  return result;
}

GOGMorphism invert(const GOGMorphism& morphism) {
  auto const& graph = morphism.source.graph();
  GOGMorphism result{morphism.target,
                     morphism.source,
                     std::vector<Vertex>(graph.vertex_count()),
                     std::vector<Edge>(graph.edge_count()),
                     std::vector<BasisMap>(graph.vertex_count()),
                     std::vector<int>(graph.pair_count(), 1),
                     std::vector<FreeWord>(graph.edge_count())};
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    auto image = morphism.vertex_map[v];
    auto inverse = invert(morphism.vertex_maps[v]);
    if (!inverse) {
      throw std::invalid_argument("invert: vertex map at '" + graph.vertex_name(Vertex{v}) +
                                  "' is not invertible");
    }
    result.vertex_map[image.index] = Vertex{v};
    result.vertex_maps[image.index] = std::move(*inverse);
  }
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    Edge e{i};
    Edge image = morphism.edge_map[i];
    result.edge_map[image.index] = e;
    result.edge_signs[image.pair()] = morphism.sign(e);
    auto back = result.vertex_maps[morphism.target.graph().terminal(image).index];
    result.corrections[image.index] = back(morphism.correction(e)).inverse();
  }
  return result;
}

GOGMorphism power(const GOGMorphism& morphism, long exponent) {
  require_endomorphism(morphism, "power");
  auto base = exponent < 0 ? invert(morphism) : morphism;
  auto result = GOGMorphism::identity(morphism.source);
  for (long i = 0; i < (exponent < 0 ? -exponent : exponent); ++i) {
    result = compose(base, result);
  }
  return result;
}

PathWord iterate(const GOGMorphism& morphism, long times, const PathWord& word) {
  require_endomorphism(morphism, "iterate");
  auto map = PathMap::from(times < 0 ? invert(morphism) : morphism);
  auto result = reduce_word(word, morphism.source);
  for (long i = 0; i < (times < 0 ? -times : times); ++i) {
    result = apply(map, result);
  }
  return result;
}

PathWord iterated_product(const GOGMorphism& morphism, const PathWord& element, long times) {
  require_endomorphism(morphism, "iterated_product");
  if (times < 0) {
    throw std::invalid_argument("iterated_product: negative length");
  }
  auto map = PathMap::from(morphism);
  auto const& gog = morphism.source;
  auto result = PathWord::trivial(element.initial_vertex());
  auto current = reduce_word(element, gog);
  for (long i = 0; i < times; ++i) {
    result = multiply(result, current, gog);
    if (i + 1 < times) current = apply(map, current);
  }
  return result;
}

PathWord closed_form_stable_power(const GOGMorphism& morphism, Edge e, long times) {
  if (!graph_map_is_identity(morphism)) {
    throw std::invalid_argument("closed form needs an identity graph map");
  }
  auto const& gog = morphism.source;
  auto const& graph = gog.graph();
  auto back = PathWord::vertex_element(morphism.correction(e.bar()).inverse(), graph.initial(e));
  auto front = PathWord::vertex_element(morphism.correction(e).inverse(), graph.terminal(e));
  auto left = iterated_product(morphism, back, times).inverse();
  return multiply(multiply(left, PathWord::stable_letter(graph, e), gog),
                  iterated_product(morphism, front, times), gog);
}

FreeWord iterated_product(const BasisMap& phi, const FreeWord& element, long from, long to) {
  if (from >= to) {
    throw std::invalid_argument("iterated_product: need s < t");
  }
  auto current = power(phi, from)(element);
  FreeWord result;
  for (long i = from; i < to; ++i) {
    result *= current;
    if (i + 1 < to) current = phi(current);
  }
  return result;
}

BasisMap induced_on_markings(const PathMap& map, const Marking& from, const Marking& to) {
  if (!(map.source == from.gog()) || !(map.target == to.gog())) {
    throw std::invalid_argument("induced_on_markings: markings do not match the map");
  }
  auto const& back = to.tree_path(map.vertex_map.at(from.base().index));
  auto back_inverse = back.inverse();
  std::vector<FreeWord> images;
  for (std::size_t x = 0; x < from.rank(); ++x) {
    auto image = apply(map, from.from_basis(FreeWord::generator(x)));
    auto closed = multiply(multiply(back, image, to.gog()), back_inverse, to.gog());
    images.push_back(to.to_basis(closed));
  }
  return BasisMap(std::move(images));
}

BasisMap induced_automorphism(const GOGMorphism& morphism, const Marking& marking) {
  return induced_on_markings(PathMap::from(morphism), marking, marking);
}

std::optional<FreeWord> same_outer_class(const BasisMap& phi, const BasisMap& phi_prime,
                                         const BasisMap& theta) {
  return inner_difference(compose(theta, phi), compose(phi_prime, theta)).witness;
}

EdgeMove move_edge_monomorphism(const GraphOfGroups& gog, Edge e, const FreeWord& g) {
  auto const& graph = gog.graph();
  if (e.index >= graph.edge_count()) {
    throw std::invalid_argument("move_edge_monomorphism: unknown edge");
  }
  if (!fits(g, gog.vertex_group(graph.terminal(e)).rank())) {
    throw std::invalid_argument("move_edge_monomorphism: g is not in the vertex group at the "
                                "terminal vertex of '" + graph.edge_name(e) + "'");
  }
  auto images = gog.edge_images();
  if (images[e.index]) {
    images[e.index] = g * *images[e.index] * g.inverse();
  }
  GraphOfGroups modified(graph, gog.vertex_groups(), std::move(images));
  auto transport = GOGMorphism::identity(gog);
  transport.target = modified;
  transport.corrections[e.index] = g.inverse();
  return {std::move(modified), std::move(transport)};
}

GOGMorphism conjugate_by_move(const GOGMorphism& morphism, Edge e, const FreeWord& g) {
  require_endomorphism(morphism, "conjugate_by_move");
  auto move = move_edge_monomorphism(morphism.source, e, g);
  return compose(compose(move.transport, morphism), invert(move.transport));
}

GOGMorphism slide_inner_at_vertex(const GOGMorphism& morphism, Vertex v, const FreeWord& g) {
  auto const& graph = morphism.source.graph();
  auto image = morphism.vertex_map.at(v.index);
  auto rank = morphism.target.vertex_group(image).rank();
  if (!fits(g, rank)) {
    throw std::invalid_argument("slide_inner_at_vertex: g is not in the image vertex group");
  }
  auto result = morphism;
  result.vertex_maps[v.index] = compose(BasisMap::inner(g, rank), morphism.vertex_maps[v.index]);
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    if (graph.terminal(Edge{i}) == v) {
      result.corrections[i] = g * morphism.corrections[i];
    }
  }
  return result;
}

BasisMap change_base_point(const GOGMorphism& morphism, Vertex from, const Marking& at,
                           const PathWord& connecting) {
  require_endomorphism(morphism, "change_base_point");
  auto const& gog = morphism.source;
  if (!connecting.is_connected(gog.graph()) || connecting.initial_vertex() != from ||
      connecting.terminal_vertex() != at.base()) {
    throw std::invalid_argument("change_base_point: U does not connect v to v'");
  }
  if (morphism.vertex_map.at(from.index) != from ||
      morphism.vertex_map.at(at.base().index) != at.base()) {
    throw std::invalid_argument("change_base_point: base points must be fixed by the graph map");
  }
  auto map = PathMap::from(morphism);
  auto u = reduce_word(connecting, gog);
  auto shift = multiply(u.inverse(), apply(map, u), gog);
  auto shift_inverse = shift.inverse();
  std::vector<FreeWord> images;
  for (std::size_t x = 0; x < at.rank(); ++x) {
    auto image = apply(map, at.from_basis(FreeWord::generator(x)));
    images.push_back(at.to_basis(multiply(multiply(shift, image, gog), shift_inverse, gog)));
  }
  return BasisMap(std::move(images));
}

}  // namespace gog
