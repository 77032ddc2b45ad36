#include "collapsekit/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <sstream>

#include "collapsekit/collapsibility.hpp"
#include "collapsekit/identification.hpp"
#include "collapsekit/random_gen.hpp"
#include "collapsekit/scenario.hpp"
#include "collapsekit/serialize.hpp"

namespace collapsekit {

namespace {

struct GlobalOptions {
  std::string format;  // "text" or "json"
  int decimals = 6;
  std::uint64_t seed = 0;
  std::string input = "-";

  bool json() const { return format == "json"; }
};

std::string default_format() {
  if (const char* env = std::getenv("COLLAPSEKIT_FORMAT"); env != nullptr) {
    const std::string value(env);
    if (value == "json" || value == "text") return value;
  }
  return "text";
}

std::string read_input(const GlobalOptions& options, std::istream& in) {
  if (options.input == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  std::ifstream file(options.input);
  if (!file) {
    fail(ErrorCode::ParseError, "cannot open input file '" + options.input + "'");
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void emit(const GlobalOptions& options, std::ostream& out, const Json& json,
          const std::string& text) {
  if (options.json()) {
    out << json.dump(2) << "\n";
  } else {
    out << text;
  }
}

std::string exact_and_decimal(const Rational& value, int decimals) {
  return format_rational(value) + " (" + to_decimal_string(value, decimals) + ")";
}

Json value_json(const Rational& value, int decimals) {
  return Json{{"exact", rational_json(value)}, {"decimal", to_decimal_string(value, decimals)}};
}

// --- input resolution -------------------------------------------------------

ObservationalTable table_from_input(const AnyInput& input) {
  if (input.table.has_value()) return *input.table;
  if (input.scenario.has_value()) {
    return apply_assignment(input.scenario->population, input.scenario->mechanism);
  }
  fail(ErrorCode::InputMismatch,
       "this command needs an observational table or a scenario, got a different input type");
}

const CounterfactualPopulation& population_from_input(const AnyInput& input) {
  if (input.population.has_value()) return *input.population;
  fail(ErrorCode::InputMismatch,
       "this command needs a counterfactual population or a scenario, got a different input "
       "type");
}

// --- measures ----------------------------------------------------------------

Json measures_world_json(const std::string& world, const std::vector<ObservationalStratum>& rows,
                         const std::optional<RiskPair>& marginal, const std::string& marginal_note,
                         int decimals) {
  // rows carry per-stratum risks; for the causal world both risks are present.
  Json strata = Json::array();
  for (const auto& row : rows) {
    Json s{{"label", row.label}, {"prevalence", rational_json(row.prevalence.value())}};
    s["r0"] = row.r0.has_value() ? rational_json(row.r0->value()) : Json(nullptr);
    s["r1"] = row.r1.has_value() ? rational_json(row.r1->value()) : Json(nullptr);
    strata.push_back(std::move(s));
  }
  Json world_json{{"world", world}, {"strata", std::move(strata)}};
  if (marginal.has_value()) {
    world_json["marginal_risks"] = Json{{"r0", rational_json(marginal->r0.value())},
                                        {"r1", rational_json(marginal->r1.value())}};
  } else {
    world_json["marginal_risks"] = Json{{"undefined", true}, {"reason", marginal_note}};
  }

  Json measures = Json::array();
  for (auto kind : kAllEffectMeasureKinds) {
    Json entry{{"kind", kind_name(kind)}};
    Json values = Json::array();
    for (const auto& row : rows) {
      Json v{{"label", row.label}};
      std::string note;
      std::optional<Rational> value;
      if (row.r0.has_value() && row.r1.has_value()) {
        value = try_effect_value(kind, RiskPair{*row.r0, *row.r1}, &note);
      } else {
        note = "absent cell";
      }
      if (value.has_value()) {
        v["value"] = rational_json(*value);
        v["decimal"] = to_decimal_string(*value, decimals);
      } else {
        v["undefined"] = true;
        v["reason"] = note;
      }
      values.push_back(std::move(v));
    }
    entry["stratum_values"] = std::move(values);
    std::optional<Rational> marginal_value;
    std::string note = marginal_note;
    if (marginal.has_value()) marginal_value = try_effect_value(kind, *marginal, &note);
    entry["marginal"] = marginal_value.has_value()
                            ? value_json(*marginal_value, decimals)
                            : Json{{"undefined", true}, {"reason", note}};
    measures.push_back(std::move(entry));
  }
  world_json["measures"] = std::move(measures);
  return world_json;
}

void measures_world_text(std::ostream& out, const Json& world, int) {
  out << "world: " << world["world"].get<std::string>() << "\n";
  for (const auto& measure : world["measures"]) {
    for (const auto& v : measure["stratum_values"]) {
      out << "  " << measure["kind"].get<std::string>() << "  " << v["label"].get<std::string>()
          << "  ";
      if (v.contains("value")) {
        out << v["value"].get<std::string>() << " (" << v["decimal"].get<std::string>() << ")";
      } else {
        out << "undefined: " << v["reason"].get<std::string>();
      }
      out << "\n";
    }
    out << "  " << measure["kind"].get<std::string>() << "  (marginal)  ";
    const auto& m = measure["marginal"];
    if (m.contains("exact")) {
      out << m["exact"].get<std::string>() << " (" << m["decimal"].get<std::string>() << ")";
    } else {
      out << "undefined: " << m["reason"].get<std::string>();
    }
    out << "\n";
  }
}

std::vector<ObservationalStratum> causal_rows(const CounterfactualPopulation& population) {
  // Reuse the table row shape to carry counterfactual risks per stratum.
  std::vector<ObservationalStratum> rows;
  for (const auto& s : population.strata()) {
    const RiskPair risks = stratum_risks(s);
    rows.push_back(ObservationalStratum{s.label, s.prevalence, Probability(0), risks.r0, risks.r1});
  }
  return rows;
}

int cmd_measures(const GlobalOptions& options, std::istream& in, std::ostream& out) {
  const AnyInput input = parse_input_text(read_input(options, in));
  Json worlds = Json::array();
  if (input.population.has_value()) {
    worlds.push_back(measures_world_json("causal", causal_rows(*input.population),
                                         marginal_risks(*input.population), "", options.decimals));
  }
  if (input.table.has_value() || input.scenario.has_value()) {
    const ObservationalTable table = table_from_input(input);
    std::optional<RiskPair> marginal;
    std::string note;
    try {
      marginal = marginal_associational_risks(table);
    } catch (const Error& e) {
      if (is_input_error(e.code())) throw;
      note = e.what();
    }
    worlds.push_back(
        measures_world_json("associational", table.strata(), marginal, note, options.decimals));
  }
  if (worlds.empty()) {
    fail(ErrorCode::InputMismatch, "measures needs a population, table, or scenario");
  }
  Json result{{"type", "measures"}, {"decimals", options.decimals}, {"worlds", std::move(worlds)}};
  std::ostringstream text;
  for (const auto& world : result["worlds"]) measures_world_text(text, world, options.decimals);
  emit(options, out, result, text.str());
  return 0;
}

// --- weights ------------------------------------------------------------------

int cmd_weights(const GlobalOptions& options, const std::string& scheme,
                const std::string& kind_text, std::istream& in, std::ostream& out) {
  const AnyInput input = parse_input_text(read_input(options, in));
  Json result{{"type", "weights"}, {"scheme", scheme}};
  WeightVector weights = WeightVector::validate({{"", 1}});
  std::vector<ConditionCheck> conditions;

  if (scheme == "causal") {
    if (kind_text.empty()) fail(ErrorCode::InputMismatch, "--kind is required for --scheme causal");
    const EffectMeasureKind kind = kind_from_name(kind_text);
    result["kind"] = kind_name(kind);
    weights = causal_weights(kind, population_from_input(input));
  } else if (scheme == "newman") {
    if (kind_text.empty()) fail(ErrorCode::InputMismatch, "--kind is required for --scheme newman");
    const EffectMeasureKind kind = kind_from_name(kind_text);
    result["kind"] = kind_name(kind);
    NewmanWeights newman = newman_weights(kind, table_from_input(input));
    weights = newman.weights;
    conditions = newman.conditions;
  } else if (scheme == "identify") {
    result["kind"] = kind_name(EffectMeasureKind::RiskRatio);
    weights = identify_rr_minus_weights(table_from_input(input));
  } else if (scheme == "miettinen") {
    result["kind"] = kind_name(EffectMeasureKind::RiskRatio);
    weights = miettinen_weights(table_from_input(input));
  } else if (scheme == "unexposed-target") {
    if (!input.outcome.has_value()) {
      fail(ErrorCode::InputMismatch,
           "--scheme unexposed-target needs outcome-by-stratum input (label,prevalence,pY)");
    }
    weights = unexposed_target_weights(*input.outcome);
  } else {
    fail(ErrorCode::InputMismatch,
         "unknown scheme '" + scheme +
             "' (expected causal, newman, identify, miettinen, unexposed-target)");
  }

  result["weights"] = weight_vector_to_json(weights);
  std::ostringstream text;
  text << "scheme: " << scheme << "\n";
  for (const auto& entry : weights.entries()) {
    text << "  " << entry.label << "  " << exact_and_decimal(entry.weight, options.decimals)
         << "\n";
  }
  if (!conditions.empty()) {
    Json condition_json = Json::array();
    for (const auto& c : conditions) {
      condition_json.push_back({{"name", c.name}, {"holds", c.holds}});
      text << "  condition " << c.name << ": " << (c.holds ? "holds" : "does not hold") << "\n";
    }
    result["conditions"] = std::move(condition_json);
  }
  emit(options, out, result, text.str());
  return 0;
}

// --- collapse-check -----------------------------------------------------------

std::optional<WeightVector> weights_from_flag(const std::string& flag,
                                              const std::vector<std::string>& labels) {
  if (flag.empty()) return std::nullopt;
  std::vector<Rational> values;
  std::string token;
  std::istringstream ss(flag);
  while (std::getline(ss, token, ',')) values.push_back(parse_rational(token));
  return WeightVector::from_values(labels, values);
}

void report_text(std::ostream& out, const CollapsibilityReport& report, int decimals) {
  out << "definition: "
      << (report.definition == CollapsibilityReport::Definition::Causal ? "causal"
                                                                        : "associational")
      << "\nkind: " << kind_name(report.kind) << "\n";
  for (size_t i = 0; i < report.stratum_values.size(); ++i) {
    const auto& v = report.stratum_values[i];
    out << "  " << v.label << "  value: ";
    if (v.defined()) {
      out << exact_and_decimal(*v.value, decimals);
    } else {
      out << "undefined (" << v.note << ")";
    }
    out << "  weight: " << format_rational(report.weights.entries()[i].weight) << "\n";
  }
  out << "weighted average: " << exact_and_decimal(report.weighted_average, decimals) << "\n";
  out << "marginal value:   " << exact_and_decimal(report.marginal_value, decimals) << "\n";
  out << "residual:         " << format_rational(report.residual) << "\n";
  out << "collapsible:      " << (report.collapsible ? "yes" : "no") << "\n";
}

int cmd_collapse_check(const GlobalOptions& options, const std::string& kind_text,
                       const std::string& definition, const std::string& weights_flag,
                       std::istream& in, std::ostream& out) {
  const AnyInput input = parse_input_text(read_input(options, in));
  const EffectMeasureKind kind = kind_from_name(kind_text);

  bool causal = true;
  if (definition == "associational") {
    causal = false;
  } else if (definition != "causal" && !definition.empty()) {
    fail(ErrorCode::InputMismatch, "--definition must be 'causal' or 'associational'");
  }
  if (input.table.has_value() && !input.scenario.has_value() && definition.empty()) {
    causal = false;  // a bare table only supports the associational definition
  }

  CollapsibilityReport report;
  std::string weights_source = "user";
  if (causal) {
    const CounterfactualPopulation& population = population_from_input(input);
    auto weights = weights_from_flag(weights_flag, population.labels());
    if (!weights.has_value()) {
      if (kind == EffectMeasureKind::OddsRatio) {
        // No universal scheme exists; fall back to covariate prevalences so
        // the non-collapsibility is visible in the report.
        std::vector<WeightVector::Entry> entries;
        for (const auto& s : population.strata()) {
          entries.push_back({s.label, s.prevalence.value()});
        }
        weights = WeightVector::validate(std::move(entries));
        weights_source = "prevalence-fallback";
      } else {
        weights_source = "canonical";
      }
    }
    report = check_causal_collapsibility(kind, population, std::move(weights));
  } else {
    const ObservationalTable table = table_from_input(input);
    auto weights = weights_from_flag(weights_flag, table.labels());
    if (!weights.has_value()) {
      weights = newman_weights(kind, table).weights;  // UnsupportedKind for the rest
      weights_source = "newman";
    }
    report = check_associational_collapsibility(kind, table, *weights);
  }

  Json result = collapsibility_report_to_json(report, options.decimals);
  result["weights_source"] = weights_source;
  std::ostringstream text;
  report_text(text, report, options.decimals);
  text << "weights source:   " << weights_source << "\n";
  emit(options, out, result, text.str());
  return 0;
}

// --- feasibility ---------------------------------------------------------------

int cmd_feasibility(const GlobalOptions& options, const std::string& kind_text, std::istream& in,
                    std::ostream& out) {
  const std::string text_input = read_input(options, in);

  std::vector<std::string> labels;
  std::vector<Rational> values;
  Json excluded = Json::array();
  Rational marginal;
  Json result{{"type", "feasibility"}};

  // Raw mode: {"values": [...], "marginal": "..."}
  const auto first = text_input.find_first_not_of(" \t\r\n");
  bool raw = false;
  if (first != std::string::npos && text_input[first] == '{') {
    Json j;
    try {
      j = Json::parse(text_input);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::ParseError, std::string("invalid json: ") + e.what());
    }
    if (j.contains("values") && j.contains("marginal")) {
      raw = true;
      size_t index = 0;
      for (const auto& v : j["values"]) {
        values.push_back(rational_from_json(v, "values"));
        labels.push_back(std::to_string(index++));
      }
      marginal = rational_from_json(j["marginal"], "marginal");
    }
  }

  if (!raw) {
    const AnyInput input = parse_input_text(text_input);
    const EffectMeasureKind kind = kind_from_name(kind_text.empty() ? "or" : kind_text);
    result["kind"] = kind_name(kind);
    std::vector<StratumValue> stratum_values;
    if (input.population.has_value()) {
      stratum_values = stratum_effects(kind, *input.population);
      marginal = marginal_effect(kind, *input.population);
    } else {
      const ObservationalTable table = table_from_input(input);
      for (const auto& row : table.strata()) {
        std::string note;
        std::optional<Rational> value;
        if (row.r0.has_value() && row.r1.has_value()) {
          value = try_effect_value(kind, RiskPair{*row.r0, *row.r1}, &note);
        } else {
          note = "absent cell";
        }
        stratum_values.push_back({row.label, value, note});
      }
      marginal = effect_value(kind, marginal_associational_risks(table));
    }
    for (const auto& v : stratum_values) {
      if (v.defined()) {
        labels.push_back(v.label);
        values.push_back(*v.value);
      } else {
        excluded.push_back({{"label", v.label}, {"reason", v.note}});
      }
    }
  }

  const FeasibilityResult feasibility = weight_feasibility(labels, values, marginal);
  Json feasibility_json = feasibility_result_to_json(feasibility);
  for (auto& [key, value] : feasibility_json.items()) result[key] = value;
  result["type"] = "feasibility-result";
  if (!excluded.empty()) result["excluded_strata"] = excluded;

  std::ostringstream text;
  text << "stratum values: ";
  for (size_t i = 0; i < values.size(); ++i) {
    text << (i > 0 ? ", " : "") << format_rational(values[i]);
  }
  text << "\nmarginal: " << exact_and_decimal(marginal, options.decimals) << "\n";
  text << "interval: [" << format_rational(feasibility.evidence.min_value) << ", "
       << format_rational(feasibility.evidence.max_value) << "]\n";
  text << "verdict: " << (feasibility.feasible ? "feasible" : "infeasible") << "\n";
  if (feasibility.witness.has_value()) {
    text << "witness:\n";
    for (const auto& entry : feasibility.witness->entries()) {
      text << "  " << entry.label << "  " << format_rational(entry.weight) << "\n";
    }
  }
  emit(options, out, result, text.str());
  return 0;
}

// --- standardize ----------------------------------------------------------------

int cmd_standardize(const GlobalOptions& options, const std::string& kind_text, std::istream& in,
                    std::ostream& out) {
  const AnyInput input = parse_input_text(read_input(options, in));
  const EffectMeasureKind kind = kind_from_name(kind_text);
  const ObservationalTable table = table_from_input(input);
  const RiskPair risks = standardized_risks(table);
  const Rational value = standardized_effect(kind, table);

  Json result{
      {"type", "standardized-effect"},
      {"kind", kind_name(kind)},
      {"standardized_risks",
       {{"r0", rational_json(risks.r0.value())}, {"r1", rational_json(risks.r1.value())}}},
      {"value", value_json(value, options.decimals)},
  };
  std::ostringstream text;
  text << "standardized risks: r0 = " << format_rational(risks.r0.value())
       << ", r1 = " << format_rational(risks.r1.value()) << "\n"
       << kind_name(kind) << ": " << exact_and_decimal(value, options.decimals) << "\n";
  emit(options, out, result, text.str());
  return 0;
}

// --- scenario --------------------------------------------------------------------

int cmd_scenario(const GlobalOptions& options, const std::string& name, std::ostream& out) {
  const ScenarioSpec spec = builtin_scenario(name);
  const Json result = scenario_to_json(spec);
  std::ostringstream text;
  text << "scenario: " << spec.name << "\n" << spec.description << "\n";
  for (const auto& s : spec.population.strata()) {
    const RiskPair risks = stratum_risks(s);
    text << "  " << s.label << "  prevalence " << format_rational(s.prevalence.value())
         << "  risk0 " << format_rational(risks.r0.value()) << "  risk1 "
         << format_rational(risks.r1.value()) << "\n";
  }
  emit(options, out, result, text.str());
  return 0;
}

// --- validate ---------------------------------------------------------------------

int cmd_validate(const GlobalOptions& options, std::istream& in, std::ostream& out) {
  const AnyInput input = parse_input_text(read_input(options, in));
  Json normalized;
  std::string what;
  if (input.scenario.has_value()) {
    what = "scenario";
    normalized = scenario_to_json(*input.scenario);
  } else if (input.population.has_value()) {
    what = "population";
    normalized = population_to_json(*input.population);
  } else if (input.table.has_value()) {
    what = "table";
    normalized = table_to_json(*input.table);
  } else if (input.mechanism.has_value()) {
    what = "mechanism";
    normalized = mechanism_to_json(*input.mechanism);
  } else if (input.outcome.has_value()) {
    what = "outcome strata";
    normalized = outcome_strata_to_json(*input.outcome);
  }
  Json result{{"type", "validated"},
              {"input", what},
              {"warnings", input.warnings},
              {"normalized", normalized}};
  std::ostringstream text;
  text << "ok: valid " << what << "\n";
  for (const auto& w : input.warnings) text << "warning: " << w << "\n";
  emit(options, out, result, text.str());
  return 0;
}

// --- simulate ---------------------------------------------------------------------

Json simulate_one(const GeneratorConfig& config, EffectMeasureKind kind, int decimals) {
  const CounterfactualPopulation population =
      random_population(config, PopulationConstraint::InteriorRisks);
  const AssignmentMechanism mechanism = random_mechanism(config, population);

  Json result{{"type", "simulation"},
              {"generator", kGeneratorAlgorithm},
              {"seed", config.seed},
              {"strata", config.stratum_count},
              {"denominator_bound", config.denominator_bound},
              {"confounded", config.confounded},
              {"kind", kind_name(kind)}};
  result["population"] = population_to_json(population);
  result["mechanism"] = mechanism_to_json(mechanism);

  std::string weights_source = "canonical";
  std::optional<WeightVector> weights;
  if (kind == EffectMeasureKind::OddsRatio) {
    std::vector<WeightVector::Entry> entries;
    for (const auto& s : population.strata()) entries.push_back({s.label, s.prevalence.value()});
    weights = WeightVector::validate(std::move(entries));
    weights_source = "prevalence-fallback";
  }
  const CollapsibilityReport causal_report =
      check_causal_collapsibility(kind, population, std::move(weights));
  result["causal_check"] = collapsibility_report_to_json(causal_report, decimals);
  result["causal_check"]["weights_source"] = weights_source;

  const ObservationalTable table = apply_assignment(population, mechanism);
  result["table"] = table_to_json(table);

  const WeightVector identified = identify_rr_minus_weights(table);
  const WeightVector causal = causal_weights(EffectMeasureKind::RiskRatio, population);
  result["identified_rr_minus_weights"] = weight_vector_to_json(identified);
  result["causal_rr_minus_weights"] = weight_vector_to_json(causal);
  result["weights_match"] = identified == causal;

  const Rational srr = miettinen_srr(table);
  const Rational causal_rr = marginal_effect(EffectMeasureKind::RiskRatio, population);
  result["miettinen_srr"] = rational_json(srr);
  result["causal_rr_minus"] = rational_json(causal_rr);
  result["srr_matches"] = srr == causal_rr;

  result["equivalence"] = def_equivalence_to_json(def_equivalence_check(population, mechanism));
  return result;
}

int cmd_simulate(const GlobalOptions& options, GeneratorConfig config,
                 const std::string& kind_text, int count, std::ostream& out) {
  if (count < 1) fail(ErrorCode::InvalidConfig, "--count must be >= 1");
  const EffectMeasureKind kind = kind_from_name(kind_text);

  // Core operations are pure, so independent seeds can run concurrently;
  // output stays ordered by seed.
  std::vector<std::future<Json>> futures;
  futures.reserve(static_cast<size_t>(count));
  const int decimals = options.decimals;
  for (int i = 0; i < count; ++i) {
    GeneratorConfig run = config;
    run.seed = config.seed + static_cast<std::uint64_t>(i);
    futures.push_back(std::async(count > 1 ? std::launch::async : std::launch::deferred,
                                 [run, kind, decimals] { return simulate_one(run, kind, decimals); }));
  }
  Json runs = Json::array();
  for (auto& future : futures) runs.push_back(future.get());

  const Json result = count == 1 ? runs.front() : Json{{"type", "simulation-batch"}, {"runs", runs}};
  std::ostringstream text;
  for (const auto& run : (count == 1 ? Json::array({result}) : result["runs"])) {
    text << "seed " << run["seed"] << "  kind " << run["kind"].get<std::string>()
         << "  residual " << run["causal_check"]["residual"].get<std::string>()
         << "  weights_match " << (run["weights_match"].get<bool>() ? "yes" : "no")
         << "  srr_matches " << (run["srr_matches"].get<bool>() ? "yes" : "no")
         << "  exchangeable "
         << (run["equivalence"]["fully_exchangeable"].get<bool>() ? "yes" : "no") << "\n";
  }
  emit(options, out, result, text.str());
  return 0;
}

}  // namespace

int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Exact collapsibility analysis for stratified binary-outcome populations"};
  app.require_subcommand(1);

  GlobalOptions options;
  options.format = default_format();
  app.add_option("--format", options.format, "Output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--decimals", options.decimals, "Decimal places for display rendering")
      ->check(CLI::Range(0, 60));
  app.add_option("--seed", options.seed, "Seed for generated objects");
  app.add_option("--input", options.input, "Input file, or '-' for stdin");

  std::string kind_text;
  std::string definition;
  std::string weights_flag;
  std::string scheme = "causal";
  std::string scenario_name;
  GeneratorConfig generator;
  int count = 1;

  auto* measures = app.add_subcommand("measures", "Stratum and marginal effects for all kinds");
  auto* weights = app.add_subcommand("weights", "Weight schemes: causal, newman, identify, ...");
  weights->add_option("--scheme", scheme,
                      "causal | newman | identify | miettinen | unexposed-target");
  weights->add_option("--kind", kind_text, "Effect measure kind");
  auto* collapse = app.add_subcommand("collapse-check", "Collapsibility report for one kind");
  collapse->add_option("--kind", kind_text, "Effect measure kind")->required();
  collapse->add_option("--definition", definition, "causal | associational");
  collapse->add_option("--weights", weights_flag, "Comma-separated weights, in strata order");
  auto* feasibility = app.add_subcommand("feasibility", "Decide whether collapsing weights exist");
  feasibility->add_option("--kind", kind_text, "Effect measure kind (default: or)");
  auto* standardize = app.add_subcommand("standardize", "Standardized risks and effect value");
  standardize->add_option("--kind", kind_text, "Effect measure kind")->required();
  auto* scenario = app.add_subcommand("scenario", "Print a built-in scenario");
  scenario->add_option("name", scenario_name, "table1 | no-effect-modification | confounded-demo")
      ->required();
  auto* simulate = app.add_subcommand("simulate", "Generate a population and run the pipeline");
  simulate->add_option("--strata", generator.stratum_count, "Number of strata")
      ->check(CLI::Range(1, 64));
  simulate->add_option("--denom-bound", generator.denominator_bound, "Denominator bound");
  simulate->add_flag("--confounded", generator.confounded, "Make assignment depend on y0");
  simulate->add_option("--kind", kind_text, "Effect measure kind");
  simulate->add_option("--count", count, "Number of consecutive seeds to run");
  auto* validate = app.add_subcommand("validate", "Validate and normalize an input object");

  for (auto* sub : {measures, weights, collapse, feasibility, standardize, scenario, simulate,
                    validate}) {
    sub->fallthrough();
  }

  std::reverse(args.begin(), args.end());  // CLI11 consumes the vector back to front
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  generator.seed = options.seed;

  try {
    if (measures->parsed()) return cmd_measures(options, in, out);
    if (weights->parsed()) return cmd_weights(options, scheme, kind_text, in, out);
    if (collapse->parsed()) {
      return cmd_collapse_check(options, kind_text, definition, weights_flag, in, out);
    }
    if (feasibility->parsed()) return cmd_feasibility(options, kind_text, in, out);
    if (standardize->parsed()) return cmd_standardize(options, kind_text, in, out);
    if (scenario->parsed()) return cmd_scenario(options, scenario_name, out);
    if (simulate->parsed()) {
      return cmd_simulate(options, generator, kind_text.empty() ? "rd" : kind_text, count, out);
    }
    if (validate->parsed()) return cmd_validate(options, in, out);
  } catch (const Error& e) {
    if (is_input_error(e.code())) {
      err << "error [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
      return 1;
    }
    // Mathematically undefined result: surface as the top-level output.
    const Json result{{"type", "undefined-result"},
                      {"code", error_code_name(e.code())},
                      {"message", e.what()}};
    std::ostringstream text;
    text << "undefined result [" << error_code_name(e.code()) << "]: " << e.what() << "\n";
    emit(options, out, result, text.str());
    return 2;
  }
  err << "error: no subcommand given\n";
  return 1;
}

}  // namespace collapsekit
