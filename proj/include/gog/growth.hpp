#pragma once

// Growth of conjugacy classes under iteration, the predicted quadratic
// coefficient, the projective limit point and cancellation probes.

#include <cstddef>
#include <string>
#include <vector>

#include "gog/dehn.hpp"
#include "gog/two_level.hpp"

namespace gog {

struct GrowthTable {
  std::string class_id;
  std::string length_function = "weighted cyclic length";
  std::vector<Rational> lengths;  // indexed by t

  // lengths[t] / t^2; t must be positive.
  Rational ratio(std::size_t t) const;
};

GrowthTable growth_table(const BasisMap& phi, const FreeWord& g, std::size_t t_max,
                         const Basis& basis);

// Independent tables computed on up to `jobs` threads; order follows `classes`.
std::vector<GrowthTable> growth_tables(const BasisMap& phi, const std::vector<FreeWord>& classes,
                                       std::size_t t_max, const Basis& basis, std::size_t jobs);

// Header "t,length,ratio"; the t = 0 ratio is left empty.
std::string to_csv(const GrowthTable& table);

// Two Richardson steps on lengths/t^2 over t, t/2, t/4.  Exact for quadratics.
Rational richardson_coefficient(const GrowthTable& table, std::size_t t);

struct Prediction {
  Rational coefficient{0};
  std::vector<std::string> warnings;
};

// `word` is a closed connected word of the top graph of groups.
Prediction predicted_quadratic_coefficient(const TwoLevelTwist& twist, const PathWord& word,
                                           const Basis& weights, std::size_t radius);
// Class given in the top marking basis.
Prediction predicted_quadratic_coefficient(const TwoLevelTwist& twist, const FreeWord& word,
                                           const Basis& weights, std::size_t radius);

Rational local_quadratic_limit(const DehnTwist& twist, const PathWord& word,
                               const Marking& marking, const Basis& weights);

struct SimplexPoint {
  std::vector<std::string> edges;  // forward edges, "~" marks the reverse orientation
  std::vector<Rational> coordinates;
  std::vector<Rational> projective;  // sums to 1
  bool interior = false;
  std::vector<std::string> warnings;
};

SimplexPoint limit_point(const TwoLevelTwist& twist, const Basis& weights, std::size_t radius);

struct ClassConvergence {
  GrowthTable table;
  Rational predicted{0};
  Rational extrapolated{0};
  double deviation = 0;  // relative at t_max, absolute when predicted is 0
};

struct ConvergeReport {
  std::vector<ClassConvergence> classes;
  std::vector<double> observed_direction;
  std::vector<double> predicted_direction;
  double direction_deviation = 0;  // max relative error of the projectivized vector
  double max_deviation = 0;
  std::vector<std::string> warnings;
};

ConvergeReport converge_probe(const TwoLevelTwist& twist, const Basis& weights,
                              const std::vector<FreeWord>& classes, std::size_t t_max,
                              std::size_t jobs = 1);

struct CancellationReport {
  std::vector<std::size_t> defects;  // indexed by t, defects[0] = 0
  bool bounded = false;
  std::string classification() const { return bounded ? "bounded" : "unbounded"; }
};

// Defect of D^(t)(first) . D^t(conjugator) . D^(t)(second)^-1 for 1 <= t <= t_max.
CancellationReport cancellation_probe(const DehnTwist& twist, const PathWord& first,
                                      const PathWord& second, const PathWord& conjugator,
                                      std::size_t t_max);

std::string to_csv(const CancellationReport& report);

}  // namespace gog
