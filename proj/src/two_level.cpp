#include "gog/two_level.hpp"

#include <algorithm>
#include <stdexcept>

namespace gog {

namespace {

struct EdgeSpec {
  std::string name;
  std::size_t from;
  std::size_t to;
};

// A top graph described by declared edges, ready to be rebuilt.
struct Layout {
  std::vector<std::string> vertex_names;
  std::vector<LocalTwist> locals;
  std::vector<EdgeSpec> edges;
  std::vector<PathWord> delta_star;  // per oriented edge
  std::vector<PathWord> connecting;

  static Layout of(const TwoLevelTwist& twist) {
    Layout layout;
    auto const& top = twist.top();
    for (std::size_t v = 0; v < top.vertex_count(); ++v) {
      layout.vertex_names.push_back(top.vertex_name(Vertex{v}));
    }
    layout.locals = twist.locals();
    for (std::size_t p = 0; p < top.pair_count(); ++p) {
      Edge e{2 * p};
      layout.edges.push_back({top.edge_name(e), top.initial(e).index, top.terminal(e).index});
    }
    layout.delta_star = twist.delta_stars();
    layout.connecting = twist.connectings();
    return layout;
  }

  TwoLevelTwist build() const {
    Graph graph;
    for (auto const& name : vertex_names) graph.add_vertex(name);
    for (auto const& e : edges) graph.add_edge(e.name, Vertex{e.from}, Vertex{e.to});
    return TwoLevelTwist(std::move(graph), locals, delta_star, connecting);
  }

  std::string fresh_vertex() const {
    for (std::size_t k = 1;; ++k) {
      auto name = "n" + std::to_string(k);
      if (std::find(vertex_names.begin(), vertex_names.end(), name) == vertex_names.end()) {
        return name;
      }
    }
  }

  bool edge_name_used(const std::string& name) const {
    return std::any_of(edges.begin(), edges.end(),
                       [&](const EdgeSpec& e) { return e.name == name; });
  }

  std::string fresh_edge(const std::string& base) const {
    for (std::size_t k = 1;; ++k) {
      auto name = base + std::to_string(k);
      if (!edge_name_used(name)) return name;
    }
  }
};

PathWord trivial_local(const LocalTwist& local) { return PathWord::trivial(local.base_point); }

PathMap transport_skeleton(const GraphOfGroups& before, const GraphOfGroups& after,
                           std::vector<Vertex> vertex_map) {
  PathMap map{before, after, std::move(vertex_map), {}, {}};
  for (std::size_t v = 0; v < before.graph().vertex_count(); ++v) {
    auto rank = before.vertex_group(Vertex{v}).rank();
    map.vertex_maps.push_back(BasisMap::identity(rank));
  }
  return map;
}

PathWord path_of(const Graph& graph, std::initializer_list<Edge> edges) {
  std::vector<FreeWord> syllables(edges.size() + 1);
  std::vector<Vertex> tags;
  tags.push_back(graph.initial(*edges.begin()));
  for (Edge e : edges) tags.push_back(graph.terminal(e));
  return PathWord(std::move(syllables), std::move(tags), std::vector<Edge>(edges));
}

void set_pair_images(PathMap& map, Edge declared, PathWord image) {
  map.edge_images[declared.bar().index] = image.inverse();
  map.edge_images[declared.index] = std::move(image);
}

GOGMorphism local_inverse(const TwoLevelTwist& twist, Vertex v) {
  return twist.local(v).twist.inverse().as_morphism();
}

}  // namespace

LocalTwist::LocalTwist(DehnTwist local, Vertex base)
    : twist(std::move(local)), base_point(base), marking(twist.gog(), base) {}

LocalTwist LocalTwist::trivial(const std::string& vertex_name) {
  Graph graph;
  graph.add_vertex(vertex_name);
  GraphOfGroups gog(std::move(graph), {Basis("")}, {});
  return LocalTwist(DehnTwist::identity(std::move(gog)), Vertex{0});
}

bool LocalTwist::is_trivial() const {
  auto const& gog = twist.gog();
  return gog.graph().vertex_count() == 1 && gog.graph().edge_count() == 0 &&
         gog.vertex_group(Vertex{0}).rank() == 0;
}

TwoLevelTwist::TwoLevelTwist(Graph top, std::vector<LocalTwist> locals,
                             std::vector<PathWord> delta_star, std::vector<PathWord> connecting)
    : top_(std::move(top)),
      locals_(std::move(locals)),
      delta_star_(std::move(delta_star)),
      connecting_(std::move(connecting)) {
  if (!top_.connected()) {
    throw std::invalid_argument("two-level twist: top graph must be non-empty and connected");
  }
  if (locals_.size() != top_.vertex_count()) {
    throw std::invalid_argument("two-level twist: one local twist per top vertex required");
  }
  if (delta_star_.size() != top_.edge_count() || connecting_.size() != top_.edge_count()) {
    throw std::invalid_argument("two-level twist: delta* and U needed for every oriented edge");
  }
  for (std::size_t i = 0; i < top_.edge_count(); ++i) {
    Edge e{i};
    auto const& local = locals_[top_.terminal(e).index];
    auto const& gog = local.twist.gog();
    auto where = std::string(e.declared() ? "edge '" : "reverse of edge '") + top_.edge_name(e) + "'";
    if (!delta_star_[i].is_connected(gog.graph()) || !delta_star_[i].closed()) {
      throw std::invalid_argument(where + ": delta* must be a closed connected local word");
    }
    if (!connecting_[i].is_connected(gog.graph()) ||
        connecting_[i].initial_vertex() != delta_star_[i].initial_vertex() ||
        connecting_[i].terminal_vertex() != local.base_point) {
      throw std::invalid_argument(where +
                                  ": connecting word must run from delta* to the local base point");
    }
    try {
      delta_star_[i] = reduce_word(delta_star_[i], gog);
      connecting_[i] = reduce_word(connecting_[i], gog);
    } catch (const std::invalid_argument& error) {
      throw std::invalid_argument(where + ": " + error.what());
    }
  }
}

GraphOfGroups TwoLevelTwist::top_gog() const {
  std::vector<Basis> groups;
  for (auto const& local : locals_) groups.push_back(local.marking.basis());
  return GraphOfGroups(top_, std::move(groups),
                       std::vector<std::optional<FreeWord>>(top_.edge_count()));
}

FreeWord TwoLevelTwist::assembled_correction(Edge e) const {
  auto const& local = locals_.at(top_.terminal(e).index);
  auto const& gog = local.twist.gog();
  auto const& u = connecting(e);
  auto moved = apply(local.twist.as_morphism(), u.inverse());
  auto closed = multiply(multiply(moved, delta_star(e), gog), u, gog);
  return local.marking.to_basis(closed);
}

TwoLevelTwist TwoLevelTwist::with_delta_star(Edge e, PathWord delta_star,
                                             PathWord connecting) const {
  auto ds = delta_star_;
  auto cs = connecting_;
  ds.at(e.index) = std::move(delta_star);
  cs.at(e.index) = std::move(connecting);
  return TwoLevelTwist(top_, locals_, std::move(ds), std::move(cs));
}

TwoLevelTwist TwoLevelTwist::with_base_point(Vertex v, Vertex base, const PathWord& path) const {
  auto const& old = locals_.at(v.index);
  auto const& gog = old.twist.gog();
  if (!path.is_connected(gog.graph()) || path.initial_vertex() != base ||
      path.terminal_vertex() != old.base_point) {
    throw std::invalid_argument("with_base_point: path must run from the new base to the old one");
  }
  auto locals = locals_;
  locals[v.index] = LocalTwist(old.twist, base);
  auto cs = connecting_;
  auto back = reduce_word(path, gog).inverse();
  for (std::size_t i = 0; i < top_.edge_count(); ++i) {
    if (top_.terminal(Edge{i}) == v) cs[i] = multiply(cs[i], back, gog);
  }
  return TwoLevelTwist(top_, std::move(locals), delta_star_, std::move(cs));
}

GOGMorphism assemble(const TwoLevelTwist& twist) {
  auto gog = twist.top_gog();
  auto morphism = GOGMorphism::identity(gog);
  for (std::size_t v = 0; v < twist.top().vertex_count(); ++v) {
    auto const& local = twist.local(Vertex{v});
    morphism.vertex_maps[v] = induced_automorphism(local.twist.as_morphism(), local.marking);
  }
  for (std::size_t i = 0; i < twist.top().edge_count(); ++i) {
    morphism.corrections[i] = twist.assembled_correction(Edge{i});
  }
  auto problems = validate(morphism);
  if (!problems.empty()) {
    throw std::invalid_argument("assemble: " + problems.front());
  }
  return morphism;
}

Marking top_marking(const TwoLevelTwist& twist) { return Marking(twist.top_gog(), Vertex{0}); }

std::optional<FreeWord> outer_class_witness(const TwoLevelTwist& before,
                                            const TwoLevelTwist& after, const PathMap& transport) {
  auto from = top_marking(before);
  auto to = top_marking(after);
  auto phi = induced_automorphism(assemble(before), from);
  auto phi_after = induced_automorphism(assemble(after), to);
  auto theta = induced_on_markings(transport, from, to);
  return same_outer_class(phi, phi_after, theta);
}

PathMap reassembly_transport(const TwoLevelTwist& before, const TwoLevelTwist& after,
                             const std::vector<PathWord>& paths) {
  auto const& top = before.top();
  if (!(top == after.top()) || paths.size() != top.vertex_count()) {
    throw std::invalid_argument("reassembly_transport: top graphs must agree");
  }
  std::vector<Vertex> identity;
  for (std::size_t v = 0; v < top.vertex_count(); ++v) identity.push_back(Vertex{v});
  auto map = transport_skeleton(before.top_gog(), after.top_gog(), identity);
  for (std::size_t v = 0; v < top.vertex_count(); ++v) {
    auto const& old = before.local(Vertex{v});
    auto const& fresh = after.local(Vertex{v});
    auto const& gog = old.twist.gog();
    auto const& p = paths[v];
    std::vector<FreeWord> images;
    for (std::size_t x = 0; x < old.marking.rank(); ++x) {
      auto loop = old.marking.from_basis(FreeWord::generator(x));
      images.push_back(fresh.marking.to_basis(multiply(multiply(p, loop, gog), p.inverse(), gog)));
    }
    map.vertex_maps[v] = BasisMap(std::move(images));
  }
  map.edge_images.resize(top.edge_count());
  for (std::size_t pair = 0; pair < top.pair_count(); ++pair) {
    Edge e{2 * pair};
    auto tail = top.initial(e);
    auto head = top.terminal(e);
    auto const& tail_gog = before.local(tail).twist.gog();
    auto const& head_gog = before.local(head).twist.gog();
    auto lead = multiply(multiply(paths[tail.index], before.connecting(e.bar()).inverse(), tail_gog),
                         after.connecting(e.bar()), tail_gog);
    auto trail = multiply(multiply(after.connecting(e).inverse(), before.connecting(e), head_gog),
                          paths[head.index].inverse(), head_gog);
    PathWord image({after.local(tail).marking.to_basis(lead),
                    after.local(head).marking.to_basis(trail)},
                   {tail, head}, {e});
    set_pair_images(map, e, std::move(image));
  }
  return map;
}

std::string oriented_edge_name(const Graph& graph, Edge e) {
  return (e.declared() ? "" : "~") + graph.edge_name(e);
}

HZero locally_zero(const TwoLevelTwist& twist, Edge e, std::size_t radius) {
  return h_zero_test(twist.delta_star(e), local_inverse(twist, twist.top().terminal(e)), radius);
}

ForwardOrientation forward_orientation(const TwoLevelTwist& twist, std::size_t radius) {
  ForwardOrientation result;
  auto const& top = twist.top();
  for (std::size_t p = 0; p < top.pair_count(); ++p) {
    Edge e{2 * p};
    auto here = locally_zero(twist, e, radius);
    auto there = locally_zero(twist, e.bar(), radius);
    result.certified = result.certified && here.certified && there.certified;
    if (here.vertex && there.vertex) {
      throw std::invalid_argument("edge '" + top.edge_name(e) +
                                  "': both orientations are locally zero");
    }
    if (!here.vertex && !there.vertex) {
      throw std::invalid_argument("edge '" + top.edge_name(e) +
                                  "': neither orientation is locally zero");
    }
    result.forward.push_back(here.vertex ? e.bar() : e);
  }
  return result;
}

namespace {

bool cyclic_rotation(const std::vector<Edge>& a, const std::vector<Edge>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t shift = 0; shift < a.size(); ++shift) {
    if (std::equal(a.begin() + static_cast<long>(shift), a.end(), b.begin()) &&
        std::equal(a.begin(), a.begin() + static_cast<long>(shift),
                   b.begin() + static_cast<long>(a.size() - shift))) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool TwoLevelReport::efficient() const {
  return rank >= 2 && forward_ok && distinct_corrections;
}

TwoLevelReport check_efficient_2level(const TwoLevelTwist& twist, std::size_t radius) {
  TwoLevelReport report;
  auto const& top = twist.top();
  try {
    report.rank = top_marking(twist).rank();
  } catch (const std::invalid_argument&) {
    report.rank = 0;
  }
  for (std::size_t v = 0; v < top.vertex_count(); ++v) {
    auto const& local = twist.local(Vertex{v});
    if (local.twist.gog().graph().edge_count() > 0) {
      report.local_reports.emplace_back(top.vertex_name(Vertex{v}), check_efficient(local.twist));
    }
  }
  ForwardOrientation forward;
  try {
    forward = forward_orientation(twist, radius);
    report.forward_ok = true;
    report.certified = forward.certified;
  } catch (const std::invalid_argument& error) {
    report.forward_ok = false;
    report.forward_detail = error.what();
    return report;
  }
  for (std::size_t i = 0; i < forward.forward.size(); ++i) {
    for (std::size_t j = i + 1; j < forward.forward.size(); ++j) {
      Edge e = forward.forward[i];
      Edge f = forward.forward[j];
      auto v = top.terminal(e);
      if (top.terminal(f) != v) continue;
      auto inverse = local_inverse(twist, v);
      auto const& gog = twist.local(v).twist.gog();
      auto found = twisted_conjugacy_witness(twist.delta_star(e), twist.delta_star(f), inverse,
                                             radius);
      if (found.conjugator) {
        report.distinct_corrections = false;
        report.witnesses.push_back(oriented_edge_name(top, e) + " conjugate to " +
                                   oriented_edge_name(top, f) + " by U = " + format_path_word(*found.conjugator, gog));
        continue;
      }
      auto first = h_reduce(twist.delta_star(e), inverse, radius);
      auto second = h_reduce(twist.delta_star(f), inverse, radius);
      bool separated = first.certified && second.certified &&
                       !cyclic_rotation(first.word.edges(), second.word.edges());
      if (!separated) report.certified = false;
    }
  }
  return report;
}

MoveResult move_subdivide(const TwoLevelTwist& twist, Edge e) {
  auto layout = Layout::of(twist);
  auto const& top = twist.top();
  Edge declared{2 * e.pair()};
  auto name = top.edge_name(declared);
  auto mid = layout.vertex_names.size();
  auto mid_name = layout.fresh_vertex();
  layout.vertex_names.push_back(mid_name);
  layout.locals.push_back(LocalTwist::trivial(mid_name));
  auto first = layout.fresh_edge(name);
  layout.edges[e.pair()] = {first, top.initial(declared).index, mid};
  layout.edges.push_back({layout.fresh_edge(name), mid, top.terminal(declared).index});
  auto one = trivial_local(layout.locals.back());
  // First half keeps the far correction; second half keeps the near one.
  layout.delta_star[declared.index] = one;
  layout.connecting[declared.index] = one;
  layout.delta_star.push_back(twist.delta_star(declared));
  layout.connecting.push_back(twist.connecting(declared));
  layout.delta_star.push_back(one);
  layout.connecting.push_back(one);
  auto after = layout.build();

  std::vector<Vertex> vertex_map;
  for (std::size_t v = 0; v < top.vertex_count(); ++v) vertex_map.push_back(Vertex{v});
  auto map = transport_skeleton(twist.top_gog(), after.top_gog(), vertex_map);
  for (std::size_t i = 0; i < top.edge_count(); ++i) {
    map.edge_images.push_back(PathWord::stable_letter(after.top(), Edge{i}));
  }
  Edge second{2 * (after.top().pair_count() - 1)};
  set_pair_images(map, declared, path_of(after.top(), {declared, second}));
  return {std::move(after), std::move(map), "subdivide " + name};
}

MoveResult move_contract(const TwoLevelTwist& twist, Edge e, std::size_t radius) {
  auto const& top = twist.top();
  auto name = top.edge_name(e);
  if (top.initial(e) == top.terminal(e)) {
    throw std::invalid_argument("contract: edge '" + name + "' is a loop");
  }
  auto here = locally_zero(twist, e, radius);
  auto there = locally_zero(twist, e.bar(), radius);
  if (!here.vertex || !there.vertex || !here.certified || !there.certified) {
    throw std::invalid_argument("contract: edge '" + name +
                                "' must be locally zero on both sides");
  }
  // into_kept runs from the trivial endpoint to the endpoint that stays.
  Edge into_kept;
  if (twist.local(top.initial(e)).is_trivial()) {
    into_kept = e;
  } else if (twist.local(top.terminal(e)).is_trivial()) {
    into_kept = e.bar();
  } else {
    throw std::invalid_argument("contract: edge '" + name +
                                "': general blow-up not implemented (out of scope)");
  }
  auto removed = top.initial(into_kept);
  auto kept = top.terminal(into_kept);

  std::vector<Vertex> vertex_map;
  auto old = Layout::of(twist);
  Layout layout;
  for (std::size_t v = 0; v < top.vertex_count(); ++v) {
    if (v == removed.index) {
      vertex_map.push_back(Vertex{});
      continue;
    }
    vertex_map.push_back(Vertex{layout.vertex_names.size()});
    layout.vertex_names.push_back(old.vertex_names[v]);
    layout.locals.push_back(old.locals[v]);
  }
  vertex_map[removed.index] = vertex_map[kept.index];
  std::vector<std::optional<std::size_t>> pair_map(top.pair_count());
  for (std::size_t p = 0; p < top.pair_count(); ++p) {
    if (p == e.pair()) continue;
    pair_map[p] = layout.edges.size();
    Edge declared{2 * p};
    layout.edges.push_back({old.edges[p].name, vertex_map[top.initial(declared).index].index,
                            vertex_map[top.terminal(declared).index].index});
    for (Edge side : {declared, declared.bar()}) {
      bool redirected = top.terminal(side) == removed;
      layout.delta_star.push_back(redirected ? twist.delta_star(into_kept) : twist.delta_star(side));
      layout.connecting.push_back(redirected ? twist.connecting(into_kept) : twist.connecting(side));
    }
  }
  auto after = layout.build();
  auto map = transport_skeleton(twist.top_gog(), after.top_gog(), vertex_map);
  map.edge_images.resize(top.edge_count());
  for (std::size_t p = 0; p < top.pair_count(); ++p) {
    Edge declared{2 * p};
    if (pair_map[p]) {
      set_pair_images(map, declared, PathWord::stable_letter(after.top(), Edge{2 * *pair_map[p]}));
    } else {
      set_pair_images(map, declared, PathWord::trivial(vertex_map[kept.index]));
    }
  }
  return {std::move(after), std::move(map), "contract " + name};
}

namespace {

// Isomorphism modification at e with g = U_new^-1 D^-1(W)^-1 U_old, where W
// twisted-conjugates delta*(e) to the new correction.
MoveResult modify_correction(const TwoLevelTwist& twist, Edge e, PathWord delta_star,
                             PathWord connecting, const PathWord& witness, std::string description) {
  auto const& top = twist.top();
  auto v = top.terminal(e);
  auto const& local = twist.local(v);
  auto const& gog = local.twist.gog();
  auto moved = apply(local_inverse(twist, v), witness);
  auto g = multiply(multiply(connecting.inverse(), moved.inverse(), gog), twist.connecting(e), gog);
  auto after = twist.with_delta_star(e, std::move(delta_star), std::move(connecting));
  std::vector<Vertex> vertex_map;
  for (std::size_t u = 0; u < top.vertex_count(); ++u) vertex_map.push_back(Vertex{u});
  auto map = transport_skeleton(twist.top_gog(), after.top_gog(), vertex_map);
  for (std::size_t i = 0; i < top.edge_count(); ++i) {
    map.edge_images.push_back(PathWord::stable_letter(top, Edge{i}));
  }
  PathWord image({FreeWord{}, local.marking.to_basis(g)}, {top.initial(e), v}, {e});
  map.edge_images[e.index] = image;
  map.edge_images[e.bar().index] = image.inverse();
  return {std::move(after), std::move(map), std::move(description)};
}

}  // namespace

MoveResult move_replace_correction(const TwoLevelTwist& twist, Edge e, const PathWord& witness) {
  auto v = twist.top().terminal(e);
  auto replaced = h_conjugate(twist.delta_star(e), witness, local_inverse(twist, v));
  return modify_correction(twist, e, std::move(replaced), twist.connecting(e), witness,
                           "replace " + oriented_edge_name(twist.top(), e));
}

MoveResult move_align(const TwoLevelTwist& twist, Edge e, Edge other, const PathWord& witness) {
  auto const& top = twist.top();
  auto v = top.terminal(e);
  if (top.terminal(other) != v) {
    throw std::invalid_argument("align: edges must share their terminal vertex");
  }
  auto const& gog = twist.local(v).twist.gog();
  if (!equal_pointed(h_conjugate(twist.delta_star(e), witness, local_inverse(twist, v)),
                     twist.delta_star(other), gog)) {
    throw std::invalid_argument("align: witness does not conjugate delta*(" + top.edge_name(e) +
                                ") to delta*(" + top.edge_name(other) + ")");
  }
  return modify_correction(twist, e, twist.delta_star(other), twist.connecting(other), witness,
                           "align " + oriented_edge_name(top, e) + " to " +
                               oriented_edge_name(top, other));
}

std::vector<MoveResult> move_fold(const TwoLevelTwist& twist, Edge e, Edge other,
                                  std::size_t radius) {
  auto const& top = twist.top();
  if (e.pair() == other.pair()) {
    throw std::invalid_argument("fold: edges must be distinct");
  }
  if (top.terminal(e) != top.terminal(other)) {
    throw std::invalid_argument("fold: edges must share their terminal vertex");
  }
  if (!(twist.assembled_correction(e) == twist.assembled_correction(other))) {
    throw std::invalid_argument("fold: correction terms of '" + top.edge_name(e) + "' and '" +
                                top.edge_name(other) + "' differ");
  }
  if (locally_zero(twist, e, radius).vertex || locally_zero(twist, other, radius).vertex) {
    throw std::invalid_argument("fold: both edges must be forward oriented");
  }
  std::vector<MoveResult> steps;
  auto current = twist;
  auto prepare = [&](Edge& edge, std::optional<Vertex> avoid) {
    auto const& g = current.top();
    auto start = g.initial(edge);
    if (current.local(start).is_trivial() && (!avoid || start != *avoid)) return;
    auto step = move_subdivide(current, edge);
    if (edge.declared()) edge = Edge{2 * (step.twist.top().pair_count() - 1)};
    current = step.twist;
    steps.push_back(std::move(step));
  };
  prepare(e, std::nullopt);
  prepare(other, current.top().initial(e));

  auto const& g = current.top();
  auto merged = g.initial(e);
  auto kept = g.initial(other);
  auto old = Layout::of(current);
  Layout layout;
  std::vector<Vertex> vertex_map;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (v == merged.index) {
      vertex_map.push_back(Vertex{});
      continue;
    }
    vertex_map.push_back(Vertex{layout.vertex_names.size()});
    layout.vertex_names.push_back(old.vertex_names[v]);
    layout.locals.push_back(old.locals[v]);
  }
  vertex_map[merged.index] = vertex_map[kept.index];
  auto one = trivial_local(current.local(kept));
  std::vector<std::optional<std::size_t>> pair_map(g.pair_count());
  for (std::size_t p = 0; p < g.pair_count(); ++p) {
    if (p == e.pair()) continue;
    pair_map[p] = layout.edges.size();
    Edge declared{2 * p};
    layout.edges.push_back({old.edges[p].name, vertex_map[g.initial(declared).index].index,
                            vertex_map[g.terminal(declared).index].index});
    for (Edge side : {declared, declared.bar()}) {
      bool redirected = g.terminal(side) == merged;
      layout.delta_star.push_back(redirected ? one : current.delta_star(side));
      layout.connecting.push_back(redirected ? one : current.connecting(side));
    }
  }
  auto after = layout.build();
  auto map = transport_skeleton(current.top_gog(), after.top_gog(), vertex_map);
  map.edge_images.resize(g.edge_count());
  for (std::size_t p = 0; p < g.pair_count(); ++p) {
    Edge declared{2 * p};
    auto target = p == e.pair() ? Edge{2 * *pair_map[other.pair()] + (other.declared() ? 0 : 1)}
                                : Edge{2 * *pair_map[p]};
    // The folded edge follows the orientation of e.
    if (p == e.pair() && !e.declared()) target = target.bar();
    set_pair_images(map, declared, PathWord::stable_letter(after.top(), target));
  }
  steps.push_back({std::move(after), std::move(map),
                   "fold " + oriented_edge_name(g, e) + " onto " + oriented_edge_name(g, other)});
  return steps;
}

namespace {

std::size_t non_zero_count(const TwoLevelTwist& twist, std::size_t radius) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < twist.top().edge_count(); ++i) {
    if (!locally_zero(twist, Edge{i}, radius).vertex) ++count;
  }
  return count;
}

void record(std::vector<MoveResult>& steps, TwoLevelTwist& current, MoveResult step,
            std::size_t radius) {
  auto witness = outer_class_witness(current, step.twist, step.transport);
  if (!witness) {
    throw std::logic_error("make_efficient: move '" + step.description +
                           "' changed the outer class");
  }
  if (non_zero_count(step.twist, radius) > non_zero_count(current, radius)) {
    throw std::logic_error("make_efficient: move '" + step.description +
                           "' added an edge that is not locally zero");
  }
  current = step.twist;
  steps.push_back(std::move(step));
}

}  // namespace

MakeEfficientResult make_efficient(const TwoLevelTwist& twist, std::size_t radius) {
  MakeEfficientResult out;
  auto current = twist;
  bool changed = true;
  while (changed) {
    changed = false;
    auto const& top = current.top();
    for (std::size_t p = 0; p < top.pair_count() && !changed; ++p) {
      Edge e{2 * p};
      if (!locally_zero(current, e, radius).vertex &&
          !locally_zero(current, e.bar(), radius).vertex) {
        record(out.steps, current, move_subdivide(current, e), radius);
        changed = true;
      }
    }
    if (changed) continue;

    ForwardOrientation forward;
    try {
      forward = forward_orientation(current, radius);
    } catch (const std::invalid_argument&) {
      forward.forward.clear();
    }
    for (std::size_t i = 0; i < forward.forward.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < forward.forward.size() && !changed; ++j) {
        Edge e = forward.forward[i];
        Edge f = forward.forward[j];
        auto v = current.top().terminal(e);
        if (current.top().terminal(f) != v) continue;
        if (!(current.assembled_correction(e) == current.assembled_correction(f))) {
          auto found = twisted_conjugacy_witness(current.delta_star(e), current.delta_star(f),
                                                 local_inverse(current, v), radius);
          if (!found.conjugator) continue;
          record(out.steps, current, move_align(current, e, f, *found.conjugator), radius);
        }
        for (auto& step : move_fold(current, e, f, radius)) {
          record(out.steps, current, std::move(step), radius);
        }
        changed = true;
      }
    }
    if (changed) continue;

    for (std::size_t p = 0; p < current.top().pair_count() && !changed; ++p) {
      Edge e{2 * p};
      auto here = locally_zero(current, e, radius);
      auto there = locally_zero(current, e.bar(), radius);
      if (!here.vertex || !there.vertex) continue;
      try {
        record(out.steps, current, move_contract(current, e, radius), radius);
        changed = true;
      } catch (const std::invalid_argument& error) {
        out.failure = error.what();
        out.report = check_efficient_2level(current, radius);
        return out;
      }
    }
  }
  out.report = check_efficient_2level(current, radius);
  out.result = current;
  return out;
}

Rational top_d_length(const TwoLevelTwist& twist, Edge e, const Marking& top,
                      const Basis& weights) {
  auto v = twist.top().terminal(e);
  auto const& local = twist.local(v);
  auto const& delta = twist.delta_star(e);
  // Same twisted class as locally_zero, so the value depends only on the class.
  auto rep = h_reduce(delta, local_inverse(twist, v), default_search_radius(delta));
  auto const& graph = local.twist.gog().graph();
  Rational total(0);
  for (Edge step : rep.word.edges()) {
    auto z = local.marking.element_to_basis(graph.terminal(step),
                                            local.twist.twistor_image(step));
    total += weighted_cyclic_length(top.element_to_basis(v, z), weights);
  }
  return total / 2;
}

}  // namespace gog
