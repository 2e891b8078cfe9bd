#include "gog/document.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <nlohmann/json.hpp>
#include <sstream>

namespace gog {

using Json = nlohmann::ordered_json;

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line == 0 ? message
                                   : "line " + std::to_string(line) + ", column " +
                                         std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

void expect_keys(const Json& object, const std::string& where,
                 std::initializer_list<std::string_view> allowed,
                 std::initializer_list<std::string_view> required = {}) {
  if (!object.is_object()) throw SemanticError(where + ": expected an object");
  for (auto const& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SemanticError(where + ": unknown key '" + key + "'");
    }
  }
  for (auto key : required) {
    if (!object.contains(std::string(key))) {
      throw SemanticError(where + ": missing key '" + std::string(key) + "'");
    }
  }
}

std::string text_at(const Json& value, const std::string& where) {
  if (!value.is_string()) throw SemanticError(where + ": expected a string");
  return value.get<std::string>();
}

Rational rational_at(const Json& value, const std::string& where) {
  if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& error) {
      throw ParseError(where + ": " + error.what());
    }
  }
  throw SemanticError(where + ": expected an integer or a rational string");
}

Graph parse_graph(const Json& json, const std::string& where) {
  expect_keys(json, where, {"vertices", "edges"}, {"vertices"});
  Graph graph;
  auto const& vertices = json.at("vertices");
  if (!vertices.is_array()) throw SemanticError(where + ".vertices: expected an array");
  for (auto const& name : vertices) {
    auto text = text_at(name, where + ".vertices");
    if (graph.find_vertex(text)) throw SemanticError(where + ": duplicate vertex '" + text + "'");
    graph.add_vertex(text);
  }
  if (json.contains("edges")) {
    auto const& edges = json.at("edges");
    if (!edges.is_array()) throw SemanticError(where + ".edges: expected an array");
    for (auto const& edge : edges) {
      expect_keys(edge, where + ".edges", {"name", "from", "to"}, {"name", "from", "to"});
      auto name = text_at(edge.at("name"), where + ".edges");
      auto vertex = [&](const char* key) {
        auto text = text_at(edge.at(key), where + ".edges." + name);
        auto found = graph.find_vertex(text);
        if (!found) throw SemanticError(where + ".edges." + name + ": unknown vertex '" + text + "'");
        return *found;
      };
      if (graph.find_edge(name)) throw SemanticError(where + ": duplicate edge '" + name + "'");
      graph.add_edge(name, vertex("from"), vertex("to"));
    }
  }
  if (graph.vertex_count() == 0) throw SemanticError(where + ": graph has no vertices");
  return graph;
}

Vertex vertex_named(const Graph& graph, const std::string& name, const std::string& where) {
  auto found = graph.find_vertex(name);
  if (!found) throw SemanticError(where + ": unknown vertex '" + name + "'");
  return *found;
}

Edge edge_named(const Graph& graph, const std::string& name, const std::string& where) {
  auto found = graph.find_edge(name);
  if (!found) throw SemanticError(where + ": unknown edge '" + name + "'");
  return *found;
}

FreeWord word_in(const Basis& basis, const std::string& text, const std::string& where) {
  try {
    return basis.parse(text);
  } catch (const std::invalid_argument& error) {
    throw ParseError(where + ": " + error.what());
  }
}

PathWord path_in(const GraphOfGroups& gog, const std::string& text, const std::string& where) {
  try {
    return parse_path_word(text, gog);
  } catch (const std::invalid_argument& error) {
    throw ParseError(where + ": " + error.what());
  }
}

// Graph, vertex groups, edge groups and twist of one level.
DehnTwist parse_twist(const Json& json, const std::string& where) {
  auto graph = parse_graph(json.at("graph"), where + "graph");
  std::vector<Basis> groups(graph.vertex_count(), Basis(""));
  if (json.contains("vertex_groups")) {
    auto const& section = json.at("vertex_groups");
    if (!section.is_object()) throw SemanticError(where + "vertex_groups: expected an object");
    for (auto const& [name, value] : section.items()) {
      auto v = vertex_named(graph, name, where + "vertex_groups");
      try {
        groups[v.index] = Basis(text_at(value, where + "vertex_groups." + name));
      } catch (const std::invalid_argument& error) {
        throw SemanticError(where + "vertex_groups." + name + ": " + error.what());
      }
    }
  }
  std::vector<std::optional<FreeWord>> images(graph.edge_count());
  if (json.contains("edge_groups")) {
    auto const& section = json.at("edge_groups");
    if (!section.is_object()) throw SemanticError(where + "edge_groups: expected an object");
    for (auto const& [name, value] : section.items()) {
      auto here = where + "edge_groups." + name;
      Edge e = edge_named(graph, name, where + "edge_groups");
      expect_keys(value, here, {"kind", "image", "reverse_image"}, {"kind"});
      auto kind = text_at(value.at("kind"), here + ".kind");
      if (kind == "trivial") {
        if (value.contains("image") || value.contains("reverse_image")) {
          throw SemanticError(here + ": a trivial edge group takes no images");
        }
        continue;
      }
      if (kind != "cyclic") throw SemanticError(here + ".kind: expected 'trivial' or 'cyclic'");
      expect_keys(value, here, {"kind", "image", "reverse_image"}, {"image", "reverse_image"});
      images[e.index] = word_in(groups[graph.terminal(e).index],
                                text_at(value.at("image"), here + ".image"), here + ".image");
      images[e.bar().index] =
          word_in(groups[graph.initial(e).index],
                  text_at(value.at("reverse_image"), here + ".reverse_image"), here + ".reverse_image");
    }
  }
  std::vector<long> gamma(graph.edge_count(), 0);
  if (json.contains("twist")) {
    auto const& section = json.at("twist");
    if (!section.is_object()) throw SemanticError(where + "twist: expected an object");
    for (auto const& [name, value] : section.items()) {
      Edge e = edge_named(graph, name, where + "twist");
      if (!value.is_array() || value.size() != 2 || !value[0].is_number_integer() ||
          !value[1].is_number_integer()) {
        throw SemanticError(where + "twist." + name + ": expected [gamma, reverse_gamma]");
      }
      gamma[e.index] = value[0].get<long>();
      gamma[e.bar().index] = value[1].get<long>();
    }
  }
  try {
    GraphOfGroups gog(std::move(graph), std::move(groups), std::move(images));
    return DehnTwist(std::move(gog), std::move(gamma));
  } catch (const std::invalid_argument& error) {
    throw SemanticError(where + (where.empty() ? "" : " ") + error.what());
  }
}

LocalTwist parse_local(const Json& json, const std::string& where) {
  expect_keys(json, where, {"graph", "vertex_groups", "edge_groups", "twist", "base_point"},
              {"graph"});
  auto twist = parse_twist(json, where + ".");
  Vertex base{0};
  if (json.contains("base_point")) {
    base = vertex_named(twist.gog().graph(), text_at(json.at("base_point"), where + ".base_point"),
                        where + ".base_point");
  }
  try {
    return LocalTwist(std::move(twist), base);
  } catch (const std::invalid_argument& error) {
    throw SemanticError(where + ": " + error.what());
  }
}

TwoLevelTwist parse_two_level(const Json& json, const Json& section) {
  auto top = parse_graph(json.at("graph"), "graph");
  expect_keys(section, "two_level", {"locals", "edges"});
  std::vector<std::optional<LocalTwist>> locals(top.vertex_count());
  if (section.contains("locals")) {
    auto const& entries = section.at("locals");
    if (!entries.is_object()) throw SemanticError("two_level.locals: expected an object");
    for (auto const& [name, value] : entries.items()) {
      auto v = vertex_named(top, name, "two_level.locals");
      locals[v.index] = parse_local(value, "two_level.locals." + name);
    }
  }
  std::vector<LocalTwist> filled;
  for (std::size_t v = 0; v < top.vertex_count(); ++v) {
    filled.push_back(locals[v] ? *locals[v] : LocalTwist::trivial(top.vertex_name(Vertex{v})));
  }
  std::vector<PathWord> delta(top.edge_count());
  std::vector<PathWord> connecting(top.edge_count());
  for (std::size_t i = 0; i < top.edge_count(); ++i) {
    auto const& local = filled[top.terminal(Edge{i}).index];
    delta[i] = connecting[i] = PathWord::trivial(local.base_point);
  }
  if (section.contains("edges")) {
    auto const& entries = section.at("edges");
    if (!entries.is_object()) throw SemanticError("two_level.edges: expected an object");
    for (auto const& [name, value] : entries.items()) {
      auto here = "two_level.edges." + name;
      Edge e = edge_named(top, name, "two_level.edges");
      expect_keys(value, here,
                  {"delta_star", "connecting", "reverse_delta_star", "reverse_connecting"});
      auto read = [&](const char* key, Edge side) {
        if (!value.contains(key)) return;
        auto const& gog = filled[top.terminal(side).index].twist.gog();
        auto word = path_in(gog, text_at(value.at(key), here + "." + key), here + "." + key);
        auto is_connecting = std::string_view(key).find("connecting") != std::string_view::npos;
        (is_connecting ? connecting : delta)[side.index] = std::move(word);
      };
      read("delta_star", e);
      read("connecting", e);
      read("reverse_delta_star", e.bar());
      read("reverse_connecting", e.bar());
    }
  }
  try {
    return TwoLevelTwist(std::move(top), std::move(filled), std::move(delta),
                         std::move(connecting));
  } catch (const std::invalid_argument& error) {
    throw SemanticError(error.what());
  }
}

Json graph_json(const Graph& graph) {
  Json vertices = Json::array();
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    vertices.push_back(graph.vertex_name(Vertex{v}));
  }
  Json edges = Json::array();
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    Edge e{2 * p};
    edges.push_back({{"name", graph.edge_name(e)},
                     {"from", graph.vertex_name(graph.initial(e))},
                     {"to", graph.vertex_name(graph.terminal(e))}});
  }
  Json out;
  out["vertices"] = std::move(vertices);
  if (!edges.empty()) out["edges"] = std::move(edges);
  return out;
}

Json twist_json(const DehnTwist& twist) {
  auto const& gog = twist.gog();
  auto const& graph = gog.graph();
  Json out;
  out["graph"] = graph_json(graph);
  Json groups = Json::object();
  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    auto const& basis = gog.vertex_group(Vertex{v});
    if (basis.rank() > 0) groups[graph.vertex_name(Vertex{v})] = basis.names();
  }
  if (!groups.empty()) out["vertex_groups"] = std::move(groups);
  Json edge_groups = Json::object();
  Json gammas = Json::object();
  for (std::size_t p = 0; p < graph.pair_count(); ++p) {
    Edge e{2 * p};
    auto const& name = graph.edge_name(e);
    if (gog.cyclic(e)) {
      edge_groups[name] = {
          {"kind", "cyclic"},
          {"image", gog.vertex_group(graph.terminal(e)).format(gog.edge_image(e))},
          {"reverse_image", gog.vertex_group(graph.initial(e)).format(gog.edge_image(e.bar()))}};
    }
    if (twist.gamma(e) != 0 || twist.gamma(e.bar()) != 0) {
      gammas[name] = {twist.gamma(e), twist.gamma(e.bar())};
    }
  }
  if (!edge_groups.empty()) out["edge_groups"] = std::move(edge_groups);
  if (!gammas.empty()) out["twist"] = std::move(gammas);
  return out;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

}  // namespace

GraphOfGroups Document::gog() const { return two_level ? two_level->top_gog() : twist->gog(); }

Marking Document::marking() const {
  if (two_level) return top_marking(*two_level);
  Vertex v{0};
  if (base) v = vertex_named(twist->gog().graph(), *base, "base");
  return Marking(twist->gog(), v);
}

Basis Document::weighted_basis() const {
  auto basis = marking().basis();
  std::vector<Rational> values(basis.rank(), Rational(1));
  for (auto const& [letter, value] : weights) {
    auto index = basis.index_of(letter);
    if (!index) {
      throw SemanticError(std::string("metric: '") + letter + "' is not a marking basis letter");
    }
    values[*index] = value;
  }
  return basis.with_weights(std::move(values));
}

Document parse_document(std::string_view text) {
  Json json;
  try {
    json = Json::parse(text);
  } catch (const Json::parse_error& error) {
    auto [line, column] = line_column(text, error.byte);
    std::string message = error.what();
    auto cut = message.find("syntax error");
    throw ParseError(cut == std::string::npos ? message : message.substr(cut), line, column);
  }
  expect_keys(json, "document",
              {"graph", "vertex_groups", "edge_groups", "twist", "two_level", "metric", "base"},
              {"graph"});
  Document document;
  if (json.contains("two_level")) {
    for (auto key : {"vertex_groups", "edge_groups", "twist", "base"}) {
      if (json.contains(key)) {
        throw SemanticError(std::string("document: '") + key +
                            "' is not allowed next to 'two_level'");
      }
    }
    document.two_level = parse_two_level(json, json.at("two_level"));
  } else {
    document.twist = parse_twist(json, "");
    if (json.contains("base")) {
      auto name = text_at(json.at("base"), "base");
      vertex_named(document.twist->gog().graph(), name, "base");
      document.base = name;
    }
  }
  if (json.contains("metric")) {
    auto const& metric = json.at("metric");
    expect_keys(metric, "metric", {"weights"});
    if (metric.contains("weights")) {
      auto const& weights = metric.at("weights");
      if (!weights.is_object()) throw SemanticError("metric.weights: expected an object");
      for (auto const& [key, value] : weights.items()) {
        if (key.size() != 1) throw SemanticError("metric.weights: keys are single basis letters");
        auto weight = rational_at(value, "metric.weights." + key);
        if (weight <= Rational(0)) throw SemanticError("metric.weights." + key + ": must be positive");
        document.weights[key[0]] = weight;
      }
    }
    try {
      (void)document.weighted_basis();
    } catch (const std::invalid_argument& error) {
      throw SemanticError(error.what());
    }
  }
  return document;
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_document(buffer.str());
}

std::string serialize(const Document& document) {
  Json out;
  if (document.two_level) {
    auto const& twist = *document.two_level;
    auto const& top = twist.top();
    out["graph"] = graph_json(top);
    Json locals = Json::object();
    for (std::size_t v = 0; v < top.vertex_count(); ++v) {
      auto const& local = twist.local(Vertex{v});
      auto const& name = top.vertex_name(Vertex{v});
      if (local.is_trivial() && local.twist.gog().graph().vertex_name(Vertex{0}) == name) continue;
      auto entry = twist_json(local.twist);
      entry["base_point"] = local.twist.gog().graph().vertex_name(local.base_point);
      locals[name] = std::move(entry);
    }
    Json edges = Json::object();
    for (std::size_t p = 0; p < top.pair_count(); ++p) {
      Edge e{2 * p};
      auto word = [&](const PathWord& w, Edge side) {
        return format_path_word(w, twist.local(top.terminal(side)).twist.gog());
      };
      edges[top.edge_name(e)] = {{"delta_star", word(twist.delta_star(e), e)},
                                 {"connecting", word(twist.connecting(e), e)},
                                 {"reverse_delta_star", word(twist.delta_star(e.bar()), e.bar())},
                                 {"reverse_connecting", word(twist.connecting(e.bar()), e.bar())}};
    }
    Json section;
    if (!locals.empty()) section["locals"] = std::move(locals);
    if (!edges.empty()) section["edges"] = std::move(edges);
    out["two_level"] = std::move(section);
  } else {
    out = twist_json(*document.twist);
    if (document.base) out["base"] = *document.base;
  }
  if (!document.weights.empty()) {
    Json weights = Json::object();
    for (auto const& [letter, value] : document.weights) {
      weights[std::string(1, letter)] = to_string(value);
    }
    out["metric"] = {{"weights", std::move(weights)}};
  }
  return out.dump(2) + "\n";
}

bool operator==(const Document& lhs, const Document& rhs) {
  if (lhs.base != rhs.base || lhs.weights != rhs.weights) return false;
  if (lhs.twist.has_value() != rhs.twist.has_value()) return false;
  if (lhs.twist && !(*lhs.twist == *rhs.twist)) return false;
  if (lhs.two_level.has_value() != rhs.two_level.has_value()) return false;
  if (!lhs.two_level) return true;
  auto const& a = *lhs.two_level;
  auto const& b = *rhs.two_level;
  if (!(a.top() == b.top()) || a.delta_stars() != b.delta_stars() ||
      a.connectings() != b.connectings()) {
    return false;
  }
  for (std::size_t v = 0; v < a.top().vertex_count(); ++v) {
    auto const& x = a.local(Vertex{v});
    auto const& y = b.local(Vertex{v});
    if (!(x.twist == y.twist) || x.base_point != y.base_point) return false;
  }
  return true;
}

}  // namespace gog
