#include "gog/dehn.hpp"

#include <numeric>
#include <stdexcept>

#include "gog/marking.hpp"

namespace gog {

namespace {

// Compatibility of consecutive edges: u_{e_i}^{n_i} ~ u_{bar e_{i+1}}^{n_{i+1}}.
struct Link {
  Edge left;
  Edge right;  // bar of the next edge
};

std::vector<Link> links(const std::vector<Edge>& edges, bool loop) {
  std::vector<Link> result;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    result.push_back({edges[i], edges[i + 1].bar()});
  }
  if (loop && !edges.empty()) {
    result.push_back({edges.back(), edges.front().bar()});
  }
  return result;
}

bool consecutive(const Graph& graph, const std::vector<Edge>& edges, bool loop) {
  for (auto const& link : links(edges, loop)) {
    if (graph.terminal(link.left) != graph.terminal(link.right)) return false;
  }
  return true;
}

bool check_bonders(const GraphOfGroups& gog, const std::vector<Edge>& edges,
                   const std::vector<long>& bonders, bool loop) {
  if (edges.empty()) return true;
  if (bonders.size() != edges.size() || !consecutive(gog.graph(), edges, loop)) return false;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (bonders[i] == 0 || !gog.cyclic(edges[i])) return false;
  }
  auto const& ls = links(edges, loop);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto next = (i + 1) % edges.size();
    auto lhs = gog.edge_image(ls[i].left).pow(bonders[i]);
    auto rhs = gog.edge_image(ls[i].right).pow(bonders[next]);
    if (!conjugacy_witness(rhs, lhs)) return false;
  }
  return true;
}

std::optional<std::vector<long>> find_bonders(const GraphOfGroups& gog,
                                              const std::vector<Edge>& edges, bool loop) {
  if (edges.empty()) return std::vector<long>{};
  if (!consecutive(gog.graph(), edges, loop)) return std::nullopt;
  for (Edge e : edges) {
    if (!gog.cyclic(e)) return std::nullopt;
  }
  // n_{i+1} = n_i * (sigma m_i / m'_{i+1}); track as a reduced fraction of n_1.
  std::vector<long> numerators{1};
  std::vector<long> denominators{1};
  auto const& ls = links(edges, loop);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto bond = bonded_witness(gog.edge_image(ls[i].left), gog.edge_image(ls[i].right));
    if (!bond) return std::nullopt;
    // u^{a} ~ w^{b} with a = bond.exponent, b = bond.other_exponent: n_next / n_i = b / a.
    long num = numerators[i] * bond->other_exponent;
    long den = denominators[i] * bond->exponent;
    long g = std::gcd(num, den);
    num /= g;
    den /= g;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (i + 1 < edges.size()) {
      numerators.push_back(num);
      denominators.push_back(den);
    } else if (num != 1 || den != 1) {
      return std::nullopt;  // the loop does not close up
    }
  }
  long scale = 1;
  for (long d : denominators) scale = std::lcm(scale, d);
  std::vector<long> bonders;
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    bonders.push_back(numerators[i] * (scale / denominators[i]));
  }
  return bonders;
}

bool surjective(const GraphOfGroups& gog, Edge e) {
  auto rank = gog.vertex_group(gog.graph().terminal(e)).rank();
  if (!gog.cyclic(e)) return rank == 0;
  return rank == 1 && gog.edge_image(e).size() == 1;
}

std::string edge_label(const Graph& graph, Edge e) {
  return (e.declared() ? "" : "bar ") + graph.edge_name(e);
}

}  // namespace

DehnTwist::DehnTwist(GraphOfGroups gog, std::vector<long> gamma)
    : gog_(std::move(gog)), gamma_(std::move(gamma)) {
  if (gamma_.size() != gog_.graph().edge_count()) {
    throw std::invalid_argument("twist: one exponent per oriented edge required");
  }
  for (std::size_t i = 0; i < gamma_.size(); ++i) {
    if (!gog_.cyclic(Edge{i}) && gamma_[i] != 0) {
      throw std::invalid_argument("twist: edge '" + gog_.graph().edge_name(Edge{i}) +
                                  "' has a trivial edge group and cannot twist");
    }
  }
}

DehnTwist DehnTwist::identity(GraphOfGroups gog) {
  auto count = gog.graph().edge_count();
  return DehnTwist(std::move(gog), std::vector<long>(count, 0));
}

FreeWord DehnTwist::twistor_image(Edge e) const {
  if (!gog_.cyclic(e)) return {};
  return gog_.edge_image(e).pow(twistor_exponent(e));
}

GOGMorphism DehnTwist::as_morphism() const {
  auto morphism = GOGMorphism::identity(gog_);
  for (std::size_t i = 0; i < gamma_.size(); ++i) {
    if (gog_.cyclic(Edge{i})) {
      morphism.corrections[i] = gog_.edge_image(Edge{i}).pow(gamma_[i]);
    }
  }
  return morphism;
}

DehnTwist DehnTwist::inverse() const {
  auto negated = gamma_;
  for (auto& g : negated) g = -g;
  return DehnTwist(gog_, std::move(negated));
}

std::optional<Bond> bonded_witness(const FreeWord& u, const FreeWord& w) {
  auto ru = primitive_root(u);
  auto rw = primitive_root(w);
  for (int sign : {1, -1}) {
    auto target = sign > 0 ? rw.root : rw.root.inverse();
    if (auto h = conjugacy_witness(target, ru.root)) {
      long common = std::lcm(ru.exponent, rw.exponent);
      return Bond{common / ru.exponent, sign * (common / rw.exponent), *h};
    }
  }
  return std::nullopt;
}

std::optional<Bond> bonded_witness(const GraphOfGroups& gog, Edge e, Edge e_prime) {
  auto const& graph = gog.graph();
  if (graph.terminal(e) != graph.terminal(e_prime)) {
    throw std::invalid_argument("bonded_witness: edges do not share their terminal vertex");
  }
  if (!gog.cyclic(e) || !gog.cyclic(e_prime)) {
    throw std::invalid_argument("bonded_witness: edge groups must be cyclic");
  }
  return bonded_witness(gog.edge_image(e), gog.edge_image(e_prime));
}

namespace {

std::optional<Bond> twistor_bond(const DehnTwist& twist, Edge e, Edge e_prime) {
  auto const& graph = twist.gog().graph();
  if (graph.terminal(e) != graph.terminal(e_prime)) {
    throw std::invalid_argument("bondedness: edges do not share their terminal vertex");
  }
  auto z = twist.twistor_image(e);
  auto z_prime = twist.twistor_image(e_prime);
  if (z.empty() || z_prime.empty()) return std::nullopt;
  return bonded_witness(z, z_prime);
}

}  // namespace

bool positively_bonded(const DehnTwist& twist, Edge e, Edge e_prime) {
  auto bond = twistor_bond(twist, e, e_prime);
  return bond && bond->other_exponent > 0;
}

bool negatively_bonded(const DehnTwist& twist, Edge e, Edge e_prime) {
  auto bond = twistor_bond(twist, e, e_prime);
  return bond && bond->other_exponent < 0;
}

bool is_bonded_path(const GraphOfGroups& gog, const std::vector<Edge>& path,
                    const std::vector<long>& bonders) {
  return check_bonders(gog, path, bonders, false);
}

bool is_bonded_loop(const GraphOfGroups& gog, const std::vector<Edge>& loop,
                    const std::vector<long>& bonders) {
  return check_bonders(gog, loop, bonders, true);
}

std::optional<std::vector<long>> find_path_bonders(const GraphOfGroups& gog,
                                                   const std::vector<Edge>& path) {
  return find_bonders(gog, path, false);
}

std::optional<std::vector<long>> find_loop_bonders(const GraphOfGroups& gog,
                                                   const std::vector<Edge>& loop) {
  return find_bonders(gog, loop, true);
}

bool EfficiencyReport::efficient() const {
  if (!free_of_rank_two) return false;
  for (auto const& c : conditions) {
    if (!c.pass) return false;
  }
  return true;
}

EfficiencyReport check_efficient(const DehnTwist& twist) {
  auto const& gog = twist.gog();
  auto const& graph = gog.graph();
  EfficiencyReport report;
  try {
    report.rank = Marking(gog, Vertex{0}).rank();
    report.free_of_rank_two = report.rank >= 2;
  } catch (const std::invalid_argument&) {
    report.rank = expected_rank(gog);
    report.free_of_rank_two = false;
  }

  ConditionResult minimal{1, "minimal", true, {}};
  ConditionResult visible{2, "no invisible vertex", true, {}};
  ConditionResult powers{3, "no proper power", true, {}};
  ConditionResult bonding{4, "no positive bonding", true, {}};
  ConditionResult used{5, "no unused edge", true, {}};

  for (std::size_t v = 0; v < graph.vertex_count(); ++v) {
    Vertex vertex{v};
    auto into = graph.edges_into(vertex);
    auto const& name = graph.vertex_name(vertex);
    if (into.size() == 1 && surjective(gog, into[0])) {
      minimal.pass = false;
      minimal.witnesses.push_back("vertex " + name + " via edge " + edge_label(graph, into[0]));
    }
    if (into.size() == 2 && surjective(gog, into[0]) && surjective(gog, into[1])) {
      if (into[0] == into[1].bar()) {
        report.loop_invisible.push_back("vertex " + name + " via loop " + graph.edge_name(into[0]));
      } else {
        visible.pass = false;
        visible.witnesses.push_back("vertex " + name + " via edges " +
                                    edge_label(graph, into[0]) + ", " +
                                    edge_label(graph, into[1]));
      }
    }
    for (std::size_t i = 0; i < into.size(); ++i) {
      for (std::size_t j = i + 1; j < into.size(); ++j) {
        auto bond = twistor_bond(twist, into[i], into[j]);
        if (bond && bond->other_exponent > 0) {
          bonding.pass = false;
          bonding.witnesses.push_back(
              "edges " + edge_label(graph, into[i]) + ", " + edge_label(graph, into[j]) +
              " at " + name + ": exponents " + std::to_string(bond->exponent) + ", " +
              std::to_string(bond->other_exponent) + ", conjugator " +
              gog.vertex_group(vertex).format(bond->conjugator));
        }
      }
    }
  }
  for (std::size_t i = 0; i < graph.edge_count(); ++i) {
    Edge e{i};
    auto const& basis = gog.vertex_group(graph.terminal(e));
    if (gog.cyclic(e)) {
      auto root = primitive_root(gog.edge_image(e));
      if (root.exponent != 1) {
        powers.pass = false;
        powers.witnesses.push_back("edge " + edge_label(graph, e) + ": image " +
                                   basis.format(gog.edge_image(e)) + " = (" +
                                   basis.format(root.root) + ")^" +
                                   std::to_string(root.exponent));
      }
    }
    if (twist.twistor_exponent(e) == 0) {
      used.pass = false;
      used.witnesses.push_back("edge " + edge_label(graph, e) + ": trivial twistor");
    }
  }
  report.conditions = {minimal, visible, powers, bonding, used};
  return report;
}

std::size_t cancellation_defect(const std::vector<PathWord>& words, const GraphOfGroups& gog) {
  if (words.empty()) return 0;
  std::size_t total = 0;
  PathWord product = reduce_word(words.front(), gog);
  total += product.letter_count();
  for (std::size_t i = 1; i < words.size(); ++i) {
    auto reduced = reduce_word(words[i], gog);
    total += reduced.letter_count();
    if (reduced.initial_vertex() != product.terminal_vertex()) {
      throw std::invalid_argument("cancellation_defect: product is disconnected");
    }
    product = multiply(product, reduced, gog);
  }
  return total - product.letter_count();
}

}  // namespace gog
