#pragma once

// Classical Dehn twists: corrections are powers of the edge images, so
// D(t_e) = t_e u_e^{zeta(e)} with zeta(e) = gamma(bar e) - gamma(e).

#include <optional>
#include <string>
#include <vector>

#include "gog/graph_of_groups.hpp"
#include "gog/morphism.hpp"

namespace gog {

class DehnTwist {
 public:
  DehnTwist() = default;
  // gamma per oriented edge; must vanish on trivial edge groups.
  DehnTwist(GraphOfGroups gog, std::vector<long> gamma);
  static DehnTwist identity(GraphOfGroups gog);

  const GraphOfGroups& gog() const { return gog_; }
  long gamma(Edge e) const { return gamma_.at(e.index); }
  const std::vector<long>& gammas() const { return gamma_; }
  long twistor_exponent(Edge e) const { return gamma(e.bar()) - gamma(e); }
  // u_e^{zeta(e)}, trivial for trivial edge groups.
  FreeWord twistor_image(Edge e) const;

  GOGMorphism as_morphism() const;
  DehnTwist inverse() const;

  friend bool operator==(const DehnTwist&, const DehnTwist&) = default;

 private:
  GraphOfGroups gog_;
  std::vector<long> gamma_;
};

struct Bond {
  long exponent = 1;        // n_e >= 1
  long other_exponent = 1;  // n_e', sign records the bonding sign
  FreeWord conjugator;      // u^{n_e} = h w^{n_e'} h^-1
};

// Minimal exponents through primitive roots; words must be non-trivial.
std::optional<Bond> bonded_witness(const FreeWord& u, const FreeWord& w);
// Throws std::invalid_argument unless e and e' are cyclic and co-terminal.
std::optional<Bond> bonded_witness(const GraphOfGroups& gog, Edge e, Edge e_prime);

bool positively_bonded(const DehnTwist& twist, Edge e, Edge e_prime);
bool negatively_bonded(const DehnTwist& twist, Edge e, Edge e_prime);

// Bonders are edge-group exponents, one per edge of the path, all non-zero.
bool is_bonded_path(const GraphOfGroups& gog, const std::vector<Edge>& path,
                    const std::vector<long>& bonders);
bool is_bonded_loop(const GraphOfGroups& gog, const std::vector<Edge>& loop,
                    const std::vector<long>& bonders);
// Existence versions; return a bonder family when one exists.
std::optional<std::vector<long>> find_path_bonders(const GraphOfGroups& gog,
                                                   const std::vector<Edge>& path);
std::optional<std::vector<long>> find_loop_bonders(const GraphOfGroups& gog,
                                                   const std::vector<Edge>& loop);

struct ConditionResult {
  int id = 0;
  std::string name;
  bool pass = true;
  std::vector<std::string> witnesses;
};

struct EfficiencyReport {
  std::size_t rank = 0;
  bool free_of_rank_two = false;
  std::vector<ConditionResult> conditions;  // ids 1..5
  // Valence-two vertices whose two edges are the orientations of one loop.
  std::vector<std::string> loop_invisible;

  bool efficient() const;
};

EfficiencyReport check_efficient(const DehnTwist& twist);

// Sum of path lengths minus the path length of the reduced product.
std::size_t cancellation_defect(const std::vector<PathWord>& words, const GraphOfGroups& gog);

}  // namespace gog
