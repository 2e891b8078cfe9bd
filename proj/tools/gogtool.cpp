// Command-line front end: load a document, run one operation, print a report.
// Exit codes: 0 ok, 1 usage, 2 parse, 3 semantic, 4 search budget.

#include <CLI11.hpp>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gog/document.hpp"
#include "gog/growth.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace gog;

enum Exit : int { kOk = 0, kUsage = 1, kParse = 2, kSemantic = 3, kBudget = 4 };

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string file;
  std::string word;
  std::vector<std::string> words;
  long times = 1;
  std::optional<std::size_t> radius;
  std::size_t t_max = 256;
  std::size_t jobs = 1;
  bool json = false;
  bool certify = false;
};

std::size_t radius_for(const Options& options, const PathWord& word) {
  if (options.radius) return *options.radius;
  if (const char* env = std::getenv("GOG_SEARCH_RADIUS")) {
    try {
      return std::stoul(env);
    } catch (const std::exception&) {
      throw std::invalid_argument("GOG_SEARCH_RADIUS must be a non-negative integer");
    }
  }
  return default_search_radius(word);
}

std::size_t document_radius(const Options& options) {
  return radius_for(options, PathWord::trivial(Vertex{0}));
}

PathWord path_argument(const std::string& text, const GraphOfGroups& gog) {
  try {
    return parse_path_word(text, gog);
  } catch (const std::invalid_argument& error) {
    throw ParseError("word '" + text + "': " + error.what());
  }
}

FreeWord class_argument(const std::string& text, const Basis& basis) {
  try {
    return basis.parse(text);
  } catch (const std::invalid_argument& error) {
    throw ParseError("class '" + text + "': " + error.what());
  }
}

GOGMorphism morphism_of(const Document& document) {
  return document.is_two_level() ? assemble(*document.two_level) : document.twist->as_morphism();
}

const DehnTwist& plain_twist(const Document& document, const char* command) {
  if (!document.twist) {
    throw SemanticError(std::string(command) + " needs a document with a plain twist");
  }
  return *document.twist;
}

const TwoLevelTwist& two_level_twist(const Document& document, const char* command) {
  if (!document.two_level) {
    throw SemanticError(std::string(command) + " needs a two-level document");
  }
  return *document.two_level;
}

std::string canonical(const PathWord& word, const GraphOfGroups& gog) {
  return format_path_word(canonical_form(word, gog), gog);
}

void print(const Options& options, const Json& json, const std::string& text) {
  if (options.json) {
    std::cout << json.dump(2) << '\n';
  } else {
    std::cout << text;
  }
}

int cmd_validate(const Options& options) {
  auto document = load_document(options.file);
  auto marking = document.marking();
  auto const& graph = document.gog().graph();
  std::string kind = document.is_two_level() ? "two-level twist" : "Dehn twist";
  Json json{{"valid", true},
            {"kind", kind},
            {"vertices", graph.vertex_count()},
            {"edge_pairs", graph.pair_count()},
            {"rank", marking.rank()},
            {"basis", marking.basis().names()}};
  print(options, json,
        "valid " + kind + ": vertices " + std::to_string(graph.vertex_count()) +
            ", edge pairs " + std::to_string(graph.pair_count()) + ", rank " +
            std::to_string(marking.rank()) + ", basis " + marking.basis().names() + "\n");
  return kOk;
}

int cmd_apply(const Options& options) {
  auto document = load_document(options.file);
  auto gog = document.gog();
  auto word = path_argument(options.word, gog);
  auto image = iterate(morphism_of(document), options.times, word);
  auto text = canonical(image, gog);
  print(options, Json{{"t", options.times}, {"image", text}}, text + "\n");
  return kOk;
}

int cmd_reduce(const Options& options) {
  auto document = load_document(options.file);
  auto gog = document.gog();
  auto word = canonical_form(path_argument(options.word, gog), gog);
  auto text = format_path_word(word, gog);
  print(options, Json{{"word", text}, {"length", word.letter_count()}}, text + "\n");
  return kOk;
}

int cmd_hreduce(const Options& options) {
  auto document = load_document(options.file);
  auto gog = document.gog();
  auto word = path_argument(options.word, gog);
  auto rep = h_reduce(word, morphism_of(document), radius_for(options, word));
  auto status = rep.certified ? "certified" : "best-found";
  Json json{{"representative", canonical(rep.word, gog)},
            {"conjugator", canonical(rep.conjugator, gog)},
            {"length", rep.word.letter_count()},
            {"status", status}};
  print(options, json,
        "representative: " + canonical(rep.word, gog) + "\nconjugator: " +
            canonical(rep.conjugator, gog) + "\nstatus: " + status + "\n");
  if (options.certify && (!rep.certified || rep.budget_exhausted)) {
    throw BudgetExhausted("no certificate within radius " +
                          std::to_string(radius_for(options, word)));
  }
  return kOk;
}

Json report_json(const EfficiencyReport& report) {
  Json conditions = Json::array();
  for (auto const& c : report.conditions) {
    conditions.push_back(
        {{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"witnesses", c.witnesses}});
  }
  return {{"rank", report.rank},
          {"free_of_rank_two", report.free_of_rank_two},
          {"conditions", conditions},
          {"loop_invisible", report.loop_invisible},
          {"efficient", report.efficient()}};
}

std::string report_text(const EfficiencyReport& report, const std::string& indent) {
  std::string out = indent + "rank " + std::to_string(report.rank) +
                    (report.free_of_rank_two ? "" : " (needs free rank >= 2)") + "\n";
  for (auto const& c : report.conditions) {
    out += indent + "condition " + std::to_string(c.id) + " (" + c.name +
           "): " + (c.pass ? "pass" : "FAIL") + "\n";
    for (auto const& w : c.witnesses) out += indent + "  " + w + "\n";
  }
  for (auto const& v : report.loop_invisible) out += indent + "loop-invisible vertex " + v + "\n";
  out += indent + "efficient: " + (report.efficient() ? "yes" : "no") + "\n";
  return out;
}

Json report_json(const TwoLevelReport& report) {
  Json locals = Json::object();
  for (auto const& [name, local] : report.local_reports) locals[name] = report_json(local);
  return {{"rank", report.rank},
          {"forward_orientation", report.forward_ok},
          {"forward_detail", report.forward_detail},
          {"distinct_corrections", report.distinct_corrections},
          {"witnesses", report.witnesses},
          {"certified", report.certified},
          {"local_reports", locals},
          {"efficient", report.efficient()}};
}

std::string report_text(const TwoLevelReport& report) {
  std::string out = "rank " + std::to_string(report.rank) + "\n";
  out += std::string("forward orientation: ") + (report.forward_ok ? "pass" : "FAIL") + "\n";
  if (!report.forward_detail.empty()) out += "  " + report.forward_detail + "\n";
  out += std::string("distinct corrections: ") + (report.distinct_corrections ? "pass" : "FAIL") +
         "\n";
  for (auto const& w : report.witnesses) out += "  " + w + "\n";
  for (auto const& [name, local] : report.local_reports) {
    out += "local twist at " + name + ":\n" + report_text(local, "  ");
  }
  out += std::string("efficient: ") + (report.efficient() ? "yes" : "no") +
         (report.certified ? "" : " (best-found)") + "\n";
  return out;
}

int cmd_check_efficient(const Options& options) {
  auto document = load_document(options.file);
  if (document.is_two_level()) {
    auto report = check_efficient_2level(*document.two_level, document_radius(options));
    print(options, report_json(report), report_text(report));
    if (options.certify && !report.certified) throw BudgetExhausted("efficiency not certified");
  } else {
    auto report = check_efficient(*document.twist);
    print(options, report_json(report), report_text(report, ""));
  }
  return kOk;
}

int cmd_make_efficient(const Options& options) {
  auto document = load_document(options.file);
  auto result = make_efficient(two_level_twist(document, "make-efficient"),
                               document_radius(options));
  Json steps = Json::array();
  std::string text;
  for (auto const& step : result.steps) {
    steps.push_back(step.description);
    text += "step: " + step.description + "\n";
  }
  Json json{{"steps", steps}, {"report", report_json(result.report)}};
  if (result.result) {
    Document repaired{std::nullopt, *result.result, std::nullopt, {}};
    json["result"] = Json::parse(serialize(repaired));
    text += report_text(result.report) + serialize(repaired);
  } else {
    json["failure"] = result.failure;
    text += "failure: " + result.failure + "\n";
  }
  print(options, json, text);
  return result.result ? kOk : kSemantic;
}

std::vector<FreeWord> classes_of(const Options& options, const Basis& basis) {
  std::vector<FreeWord> classes;
  for (auto const& text : options.words) classes.push_back(class_argument(text, basis));
  return classes;
}

int cmd_growth(const Options& options) {
  auto document = load_document(options.file);
  auto marking = document.marking();
  auto basis = document.weighted_basis();
  auto phi = induced_automorphism(morphism_of(document), marking);
  auto tables = growth_tables(phi, classes_of(options, basis), options.t_max, basis, options.jobs);
  Json json = Json::array();
  std::string text;
  for (auto const& table : tables) {
    Json lengths = Json::array();
    for (auto const& l : table.lengths) lengths.push_back(to_string(l));
    json.push_back({{"class", table.class_id},
                    {"length_function", table.length_function},
                    {"lengths", lengths}});
    if (tables.size() > 1) text += "# class " + table.class_id + "\n";
    text += to_csv(table);
  }
  print(options, json, text);
  return kOk;
}

int cmd_predict(const Options& options) {
  auto document = load_document(options.file);
  auto basis = document.weighted_basis();
  auto word = class_argument(options.word, basis);
  Prediction prediction;
  if (document.is_two_level()) {
    prediction = predicted_quadratic_coefficient(*document.two_level, word, basis,
                                                 document_radius(options) + word.size());
  } else {
    auto marking = document.marking();
    auto path = cyclically_reduce(marking.from_basis(word), marking.gog()).core;
    prediction.coefficient = local_quadratic_limit(*document.twist, path, marking, basis);
  }
  for (auto const& w : prediction.warnings) std::cerr << "warning: " << w << '\n';
  print(options,
        Json{{"class", basis.format(word)},
             {"coefficient", to_string(prediction.coefficient)},
             {"warnings", prediction.warnings}},
        to_string(prediction.coefficient) + "\n");
  return kOk;
}

int cmd_limit_point(const Options& options) {
  auto document = load_document(options.file);
  auto point = limit_point(two_level_twist(document, "limit-point"), document.weighted_basis(),
                           document_radius(options));
  for (auto const& w : point.warnings) std::cerr << "warning: " << w << '\n';
  Json coordinates = Json::object();
  std::string text = "edge,coordinate,projective\n";
  for (std::size_t i = 0; i < point.edges.size(); ++i) {
    coordinates[point.edges[i]] = {{"coordinate", to_string(point.coordinates[i])},
                                   {"projective", to_string(point.projective[i])}};
    text += point.edges[i] + "," + to_string(point.coordinates[i]) + "," +
            to_string(point.projective[i]) + "\n";
  }
  print(options, Json{{"coordinates", coordinates}, {"interior", point.interior}}, text);
  return kOk;
}

int cmd_converge(const Options& options) {
  auto document = load_document(options.file);
  auto basis = document.weighted_basis();
  auto report = converge_probe(two_level_twist(document, "converge"), basis,
                               classes_of(options, basis), options.t_max, options.jobs);
  for (auto const& w : report.warnings) std::cerr << "warning: " << w << '\n';
  Json rows = Json::array();
  std::string text = "class,predicted,ratio,extrapolated,deviation,direction\n";
  char buffer[64];
  for (std::size_t i = 0; i < report.classes.size(); ++i) {
    auto const& row = report.classes[i];
    auto ratio = to_double(row.table.ratio(options.t_max));
    rows.push_back({{"class", row.table.class_id},
                    {"predicted", to_string(row.predicted)},
                    {"ratio", ratio},
                    {"extrapolated", to_string(row.extrapolated)},
                    {"deviation", row.deviation},
                    {"direction", report.observed_direction[i]}});
    std::snprintf(buffer, sizeof buffer, "%.6f,", ratio);
    text += row.table.class_id + "," + to_string(row.predicted) + "," + buffer +
            to_string(row.extrapolated) + ",";
    std::snprintf(buffer, sizeof buffer, "%.6f,%.6f\n", row.deviation,
                  report.observed_direction[i]);
    text += buffer;
  }
  std::snprintf(buffer, sizeof buffer, "%.6f", report.direction_deviation);
  text += std::string("# direction deviation ") + buffer + "\n";
  print(options,
        Json{{"t_max", options.t_max},
             {"classes", rows},
             {"direction_deviation", report.direction_deviation},
             {"max_deviation", report.max_deviation}},
        text);
  return kOk;
}

int cmd_probe(const Options& options) {
  auto document = load_document(options.file);
  auto const& twist = plain_twist(document, "probe");
  auto const& gog = twist.gog();
  if (options.words.size() != 3) throw ParseError("probe takes W1 W2 U");
  auto report = cancellation_probe(twist, path_argument(options.words[0], gog),
                                   path_argument(options.words[1], gog),
                                   path_argument(options.words[2], gog), options.t_max);
  print(options,
        Json{{"defects", report.defects}, {"classification", report.classification()}},
        to_csv(report) + "# " + report.classification() + "\n");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphs of groups, Dehn twists and their growth"};
  app.require_subcommand(1);
  Options options;
  app.add_flag("--json", options.json, "Machine-readable reports");
  std::function<int(const Options&)> run;

  auto command = [&](const char* name, const char* help, int (*handler)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", options.file, "Input document")->required()->check(CLI::ExistingFile);
    sub->callback([&run, handler] { run = handler; });
    return sub;
  };
  auto radius = [&](CLI::App* sub) {
    sub->add_option("--radius", options.radius, "Search radius (default: GOG_SEARCH_RADIUS)");
    sub->add_flag("--certify", options.certify, "Exit 4 unless the answer is certified");
  };

  command("validate", "Check a document", cmd_validate);
  auto* apply_cmd = command("apply", "Image of a word under the t-th iterate", cmd_apply);
  apply_cmd->add_option("word", options.word)->required();
  apply_cmd->add_option("-t,--times", options.times, "Iterate, negative for the inverse");
  command("reduce", "Canonical form of a word", cmd_reduce)
      ->add_option("word", options.word)
      ->required();
  auto* hreduce_cmd = command("hreduce", "Twisted-conjugacy reduced representative", cmd_hreduce);
  hreduce_cmd->add_option("word", options.word)->required();
  radius(hreduce_cmd);
  radius(command("check-efficient", "Efficiency report", cmd_check_efficient));
  radius(command("make-efficient", "Normalize a two-level twist", cmd_make_efficient));
  auto* growth_cmd = command("growth", "Growth table CSV", cmd_growth);
  growth_cmd->add_option("class", options.words, "Classes in the marking basis")->required();
  growth_cmd->add_option("--t-max", options.t_max);
  growth_cmd->add_option("-j,--jobs", options.jobs)->check(CLI::PositiveNumber);
  auto* predict_cmd = command("predict", "Predicted quadratic coefficient", cmd_predict);
  predict_cmd->add_option("class", options.word)->required();
  radius(predict_cmd);
  radius(command("limit-point", "Projective limit point", cmd_limit_point));
  auto* converge_cmd = command("converge", "Compare growth with predictions", cmd_converge);
  converge_cmd->add_option("class", options.words)->required();
  converge_cmd->add_option("--t-max", options.t_max);
  converge_cmd->add_option("-j,--jobs", options.jobs)->check(CLI::PositiveNumber);
  auto* probe_cmd = command("probe", "Cancellation probe CSV", cmd_probe);
  probe_cmd->add_option("words", options.words, "W1 W2 U")->required()->expected(3);
  probe_cmd->add_option("--t-max", options.t_max);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    int code = app.exit(error);
    return code == 0 ? kOk : kUsage;
  }
  try {
    return run(options);
  } catch (const ParseError& error) {
    std::cerr << "parse error: " << error.what() << '\n';
    return kParse;
  } catch (const BudgetExhausted& error) {
    std::cerr << "search budget exhausted: " << error.what() << '\n';
    return kBudget;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << '\n';
    return kSemantic;
  }
}
