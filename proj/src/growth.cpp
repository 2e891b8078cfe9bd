#include "gog/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gog {

Rational GrowthTable::ratio(std::size_t t) const {
  if (t == 0) throw std::invalid_argument("ratio: t must be positive");
  auto square = static_cast<std::int64_t>(t * t);
  return lengths.at(t) / square;
}

GrowthTable growth_table(const BasisMap& phi, const FreeWord& g, std::size_t t_max,
                         const Basis& basis) {
  GrowthTable table;
  table.class_id = basis.format(g);
  auto current = cyclic_reduce(g).core;
  table.lengths.reserve(t_max + 1);
  for (std::size_t t = 0;; ++t) {
    table.lengths.push_back(weighted_cyclic_length(current, basis));
    if (t == t_max) break;
    // Conjugacy class growth only needs some representative; keep it cyclically reduced.
    current = cyclic_reduce(phi(current)).core;
  }
  return table;
}

std::vector<GrowthTable> growth_tables(const BasisMap& phi, const std::vector<FreeWord>& classes,
                                       std::size_t t_max, const Basis& basis, std::size_t jobs) {
  std::vector<GrowthTable> tables(classes.size());
  jobs = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(classes.size(), 1));
  if (jobs == 1) {
    for (std::size_t i = 0; i < classes.size(); ++i) {
      tables[i] = growth_table(phi, classes[i], t_max, basis);
    }
    return tables;
  }
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < classes.size(); i += jobs) {
        tables[i] = growth_table(phi, classes[i], t_max, basis);
      }
    });
  }
  for (auto& worker : workers) worker.join();
  return tables;
}

namespace {

std::string decimal(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", value);
  return buffer;
}

Rational ratio_at(const GrowthTable& table, std::size_t t) { return table.ratio(t); }

}  // namespace

std::string to_csv(const GrowthTable& table) {
  std::ostringstream out;
  out << "t,length,ratio\n";
  for (std::size_t t = 0; t < table.lengths.size(); ++t) {
    out << t << ',' << to_string(table.lengths[t]) << ',';
    if (t > 0) out << decimal(to_double(table.ratio(t)));
    out << '\n';
  }
  return out.str();
}

Rational richardson_coefficient(const GrowthTable& table, std::size_t t) {
  if (t < 4 || t % 4 != 0 || t >= table.lengths.size()) {
    throw std::invalid_argument("richardson_coefficient: need t divisible by 4 within the table");
  }
  // f(t) = a + b/t + c/t^2 for quadratic lengths.
  auto first = [&](std::size_t s) { return ratio_at(table, s) * 2 - ratio_at(table, s / 2); };
  return (first(t) * 4 - first(t / 2)) / 3;
}

namespace {

std::vector<std::string> efficiency_warnings(const TwoLevelTwist& twist, std::size_t radius) {
  std::vector<std::string> warnings;
  auto report = check_efficient_2level(twist, radius);
  if (!report.efficient()) {
    warnings.push_back("twist is not 2-level efficient; the prediction may not apply");
  } else if (!report.certified) {
    warnings.push_back("efficiency is not certified within the search radius");
  }
  return warnings;
}

}  // namespace

Prediction predicted_quadratic_coefficient(const TwoLevelTwist& twist, const PathWord& word,
                                           const Basis& weights, std::size_t radius) {
  auto gog = twist.top_gog();
  if (!word.is_connected(gog.graph()) || !word.closed()) {
    throw std::invalid_argument("predict: word must be closed and connected");
  }
  Prediction prediction;
  prediction.warnings = efficiency_warnings(twist, radius);
  auto core = cyclically_reduce(reduce_word(word, gog), gog).core;
  auto marking = top_marking(twist);
  for (Edge e : core.edges()) {
    bool here = locally_zero(twist, e, radius).vertex.has_value();
    bool there = locally_zero(twist, e.bar(), radius).vertex.has_value();
    if (here == there) {
      prediction.warnings.push_back("edge '" + twist.top().edge_name(e) +
                                    "' has no unique non-zero side");
    }
    Edge side = here && !there ? e.bar() : e;
    prediction.coefficient += top_d_length(twist, side, marking, weights);
  }
  return prediction;
}

Prediction predicted_quadratic_coefficient(const TwoLevelTwist& twist, const FreeWord& word,
                                           const Basis& weights, std::size_t radius) {
  auto marking = top_marking(twist);
  return predicted_quadratic_coefficient(twist, marking.from_basis(word), weights, radius);
}

Rational local_quadratic_limit(const DehnTwist& twist, const PathWord& word,
                               const Marking& marking, const Basis& weights) {
  if (word.letter_count() == 0) return Rational(0);
  return d_length(word, twist, marking, weights);
}

SimplexPoint limit_point(const TwoLevelTwist& twist, const Basis& weights, std::size_t radius) {
  SimplexPoint point;
  point.warnings = efficiency_warnings(twist, radius);
  auto marking = top_marking(twist);
  ForwardOrientation forward;
  try {
    forward = forward_orientation(twist, radius);
  } catch (const std::invalid_argument& error) {
    point.warnings.emplace_back(error.what());
    return point;
  }
  Rational total(0);
  for (Edge e : forward.forward) {
    point.edges.push_back(oriented_edge_name(twist.top(), e));
    point.coordinates.push_back(top_d_length(twist, e, marking, weights));
    total += point.coordinates.back();
  }
  point.interior = !point.coordinates.empty() &&
                   std::all_of(point.coordinates.begin(), point.coordinates.end(),
                               [](const Rational& x) { return x > Rational(0); });
  for (auto const& x : point.coordinates) {
    point.projective.push_back(total == Rational(0) ? Rational(0) : x / total);
  }
  return point;
}

ConvergeReport converge_probe(const TwoLevelTwist& twist, const Basis& weights,
                              const std::vector<FreeWord>& classes, std::size_t t_max,
                              std::size_t jobs) {
  if (t_max < 4) throw std::invalid_argument("converge_probe: t_max must be at least 4");
  ConvergeReport report;
  auto radius = default_search_radius(PathWord::trivial(Vertex{0}));
  report.warnings = efficiency_warnings(twist, radius);
  auto marking = top_marking(twist);
  auto phi = induced_automorphism(assemble(twist), marking);
  auto tables = growth_tables(phi, classes, t_max, weights, jobs);
  double observed_total = 0;
  double predicted_total = 0;
  auto extrapolation_point = t_max - t_max % 4;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    ClassConvergence row;
    row.table = std::move(tables[i]);
    auto prediction = predicted_quadratic_coefficient(twist, classes[i], weights,
                                                      radius + classes[i].size());
    row.predicted = prediction.coefficient;
    row.extrapolated = richardson_coefficient(row.table, extrapolation_point);
    auto ratio = to_double(row.table.ratio(t_max));
    auto predicted = to_double(row.predicted);
    row.deviation = predicted == 0 ? std::abs(ratio) : std::abs(ratio - predicted) / predicted;
    report.max_deviation = std::max(report.max_deviation, row.deviation);
    report.observed_direction.push_back(to_double(row.table.lengths[t_max]));
    report.predicted_direction.push_back(predicted);
    observed_total += report.observed_direction.back();
    predicted_total += predicted;
    report.classes.push_back(std::move(row));
  }
  // Compare directions of the class-length vector, not its scale.
  for (std::size_t i = 0; i < classes.size(); ++i) {
    auto& observed = report.observed_direction[i];
    auto& predicted = report.predicted_direction[i];
    observed = observed_total > 0 ? observed / observed_total : 0;
    predicted = predicted_total > 0 ? predicted / predicted_total : 0;
    double error = predicted > 0 ? std::abs(observed - predicted) / predicted : std::abs(observed);
    report.direction_deviation = std::max(report.direction_deviation, error);
  }
  return report;
}

namespace {

PathWord suffix(const PathWord& word, std::size_t letters) {
  auto q = word.letter_count();
  if (letters >= q) return word;
  auto from = static_cast<long>(q - letters);
  return PathWord({word.syllables().begin() + from, word.syllables().end()},
                  {word.tags().begin() + from, word.tags().end()},
                  {word.edges().begin() + from, word.edges().end()});
}

PathWord prefix(const PathWord& word, std::size_t letters) {
  if (letters >= word.letter_count()) return word;
  auto to = static_cast<long>(letters);
  return PathWord({word.syllables().begin(), word.syllables().begin() + to + 1},
                  {word.tags().begin(), word.tags().begin() + to + 1},
                  {word.edges().begin(), word.edges().begin() + to});
}

// Cancellation only reaches as far into the outer factors as there are
// pinches, so short windows suffice whenever they are not exhausted.
std::size_t windowed_defect(const PathWord& left, const PathWord& middle, const PathWord& right,
                            const GraphOfGroups& gog) {
  for (std::size_t window = 4;; window *= 2) {
    auto left_part = suffix(left, window);
    auto right_part = prefix(right, window);
    auto defect = cancellation_defect({left_part, middle, right_part}, gog);
    bool left_whole = left_part.letter_count() == left.letter_count();
    bool right_whole = right_part.letter_count() == right.letter_count();
    if ((left_whole || defect / 2 < window) && (right_whole || defect / 2 < window)) {
      return defect;
    }
  }
}

}  // namespace

CancellationReport cancellation_probe(const DehnTwist& twist, const PathWord& first,
                                      const PathWord& second, const PathWord& conjugator,
                                      std::size_t t_max) {
  auto const& gog = twist.gog();
  for (auto const* w : {&first, &second}) {
    if (!w->is_connected(gog.graph()) || !w->closed()) {
      throw std::invalid_argument("cancellation_probe: words must be closed and connected");
    }
  }
  if (conjugator.initial_vertex() != first.initial_vertex() ||
      conjugator.terminal_vertex() != second.initial_vertex()) {
    throw std::invalid_argument("cancellation_probe: conjugator must join the two base vertices");
  }
  if (t_max < 2) throw std::invalid_argument("cancellation_probe: t_max must be at least 2");
  auto morphism = twist.as_morphism();
  auto power_first = reduce_word(first, gog);
  auto power_second = reduce_word(second, gog);
  auto power_conjugator = reduce_word(conjugator, gog);
  auto product_first = PathWord::trivial(first.initial_vertex());
  auto product_second = PathWord::trivial(second.initial_vertex());
  CancellationReport report;
  report.defects.push_back(0);
  for (std::size_t t = 1; t <= t_max; ++t) {
    product_first = multiply(product_first, power_first, gog);
    product_second = multiply(product_second, power_second, gog);
    power_first = apply(morphism, power_first);
    power_second = apply(morphism, power_second);
    power_conjugator = apply(morphism, power_conjugator);
    report.defects.push_back(
        windowed_defect(product_first, power_conjugator, product_second.inverse(), gog));
  }
  auto tail = report.defects.begin() + static_cast<long>(t_max / 2);
  report.bounded = std::all_of(tail, report.defects.end(),
                               [&](std::size_t d) { return d == *tail; });
  return report;
}

std::string to_csv(const CancellationReport& report) {
  std::ostringstream out;
  out << "t,defect\n";
  for (std::size_t t = 0; t < report.defects.size(); ++t) {
    out << t << ',' << report.defects[t] << '\n';
  }
  return out.str();
}

}  // namespace gog
