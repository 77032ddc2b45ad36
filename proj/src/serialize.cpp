#include "collapsekit/serialize.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

namespace collapsekit {

namespace {

const Json& require_field(const Json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) {
    fail(ErrorCode::ParseError, context + ": missing field '" + key + "'");
  }
  return *it;
}

std::string require_string(const Json& j, const char* key, const std::string& context) {
  const Json& field = require_field(j, key, context);
  if (!field.is_string()) {
    fail(ErrorCode::ParseError, context + ": field '" + key + "' must be a string");
  }
  return field.get<std::string>();
}

Probability probability_from_json(const Json& j, const char* key, const std::string& context) {
  return Probability(parse_rational(require_string(j, key, context)));
}

int bit_from_json(const Json& j, const char* key, const std::string& context) {
  const Json& field = require_field(j, key, context);
  if (!field.is_number_integer()) {
    fail(ErrorCode::ParseError, context + ": field '" + key + "' must be 0 or 1");
  }
  const int value = field.get<int>();
  if (value != 0 && value != 1) {
    fail(ErrorCode::ParseError, context + ": field '" + key + "' must be 0 or 1");
  }
  return value;
}

const Json& strata_array(const Json& j, const std::string& context) {
  const Json& strata = require_field(j, "strata", context);
  if (!strata.is_array() || strata.empty()) {
    fail(ErrorCode::ParseError, context + ": 'strata' must be a non-empty array");
  }
  return strata;
}

}  // namespace

Json rational_json(const Rational& value) { return Json(format_rational(value)); }

Rational rational_from_json(const Json& j, const std::string& context) {
  if (!j.is_string()) {
    fail(ErrorCode::ParseError,
         context + ": expected an exact rational string, got " + j.dump());
  }
  return parse_rational(j.get<std::string>());
}

Json population_to_json(const CounterfactualPopulation& population) {
  Json strata = Json::array();
  for (const auto& s : population.strata()) {
    strata.push_back({
        {"label", s.label},
        {"prevalence", rational_json(s.prevalence.value())},
        {"joint",
         {{"q00", rational_json(s.joint.q00.value())},
          {"q01", rational_json(s.joint.q01.value())},
          {"q10", rational_json(s.joint.q10.value())},
          {"q11", rational_json(s.joint.q11.value())}}},
    });
  }
  return Json{{"strata", std::move(strata)}};
}

CounterfactualPopulation population_from_json(const Json& j,
                                              std::vector<std::string>* warnings) {
  const std::string context = "population";
  std::vector<CounterfactualStratum> strata;
  for (const auto& row : strata_array(j, context)) {
    CounterfactualStratum s;
    s.label = require_string(row, "label", context);
    s.prevalence = probability_from_json(row, "prevalence", context);
    const bool has_joint = row.contains("joint");
    const bool has_risks = row.contains("risk0") || row.contains("risk1");
    if (has_joint == has_risks) {
      fail(ErrorCode::ParseError,
           context + ": stratum '" + s.label + "' needs either 'joint' or 'risk0'/'risk1'");
    }
    if (has_joint) {
      const Json& q = row["joint"];
      s.joint = JointDistribution{
          probability_from_json(q, "q00", context), probability_from_json(q, "q01", context),
          probability_from_json(q, "q10", context), probability_from_json(q, "q11", context)};
    } else {
      s.joint = JointDistribution::independent(probability_from_json(row, "risk0", context),
                                               probability_from_json(row, "risk1", context));
    }
    strata.push_back(std::move(s));
  }
  return CounterfactualPopulation::validate(std::move(strata), warnings);
}

Json table_to_json(const ObservationalTable& table) {
  Json strata = Json::array();
  for (const auto& s : table.strata()) {
    Json row{
        {"label", s.label},
        {"prevalence", rational_json(s.prevalence.value())},
        {"pA", rational_json(s.pA.value())},
    };
    row["r0"] = s.r0.has_value() ? rational_json(s.r0->value()) : Json(nullptr);
    row["r1"] = s.r1.has_value() ? rational_json(s.r1->value()) : Json(nullptr);
    strata.push_back(std::move(row));
  }
  return Json{{"strata", std::move(strata)}};
}

ObservationalTable table_from_json(const Json& j, std::vector<std::string>* warnings) {
  const std::string context = "table";
  std::vector<ObservationalStratum> strata;
  for (const auto& row : strata_array(j, context)) {
    ObservationalStratum s;
    s.label = require_string(row, "label", context);
    s.prevalence = probability_from_json(row, "prevalence", context);
    s.pA = probability_from_json(row, "pA", context);
    for (const char* key : {"r0", "r1"}) {
      auto it = row.find(key);
      if (it == row.end() || it->is_null()) continue;
      auto& slot = (std::string_view(key) == "r0") ? s.r0 : s.r1;
      slot = Probability(rational_from_json(*it, context));
    }
    strata.push_back(std::move(s));
  }
  return ObservationalTable::validate(std::move(strata), warnings);
}

Json mechanism_to_json(const AssignmentMechanism& mechanism) {
  if (mechanism.is_constant()) {
    return Json{{"pi", rational_json(mechanism.global_constant()->value())}};
  }
  Json entries = Json::array();
  for (const auto& [label, slots] : mechanism.entries()) {
    for (int y0 = 0; y0 <= 1; ++y0) {
      for (int y1 = 0; y1 <= 1; ++y1) {
        const auto& slot = slots[static_cast<size_t>(y0 * 2 + y1)];
        if (!slot.has_value()) continue;
        entries.push_back({{"label", label},
                           {"y0", y0},
                           {"y1", y1},
                           {"p", rational_json(slot->value())}});
      }
    }
  }
  Json out{{"pi", std::move(entries)}};
  if (mechanism.global_constant().has_value()) {
    out["default"] = rational_json(mechanism.global_constant()->value());
  }
  return out;
}

AssignmentMechanism mechanism_from_json(const Json& j) {
  const std::string context = "mechanism";
  const Json& pi = require_field(j, "pi", context);
  if (pi.is_string()) {
    return AssignmentMechanism::constant(Probability(parse_rational(pi.get<std::string>())));
  }
  if (!pi.is_array()) {
    fail(ErrorCode::ParseError, context + ": 'pi' must be a string or an array of entries");
  }
  AssignmentMechanism mechanism;
  if (auto it = j.find("default"); it != j.end() && !it->is_null()) {
    mechanism = AssignmentMechanism::constant(Probability(rational_from_json(*it, context)));
  }
  for (const auto& entry : pi) {
    const std::string label = require_string(entry, "label", context);
    const Probability p = probability_from_json(entry, "p", context);
    if (entry.contains("y0") || entry.contains("y1")) {
      const int y0 = bit_from_json(entry, "y0", context);
      const int y1 = bit_from_json(entry, "y1", context);
      mechanism.set(label, y0, y1, p);
    } else {
      mechanism.set_stratum_constant(label, p);
    }
  }
  return mechanism;
}

Json scenario_to_json(const ScenarioSpec& scenario) {
  return Json{
      {"name", scenario.name},
      {"description", scenario.description},
      {"population", population_to_json(scenario.population)},
      {"mechanism", mechanism_to_json(scenario.mechanism)},
  };
}

ScenarioSpec scenario_from_json(const Json& j) {
  const std::string context = "scenario";
  ScenarioSpec spec{
      j.value("name", std::string("scenario")),
      j.value("description", std::string()),
      population_from_json(require_field(j, "population", context)),
      mechanism_from_json(require_field(j, "mechanism", context)),
  };
  if (!spec.mechanism.covers(spec.population)) {
    fail(ErrorCode::MechanismDomainError,
         "scenario mechanism does not cover every population stratum");
  }
  return spec;
}

Json weight_vector_to_json(const WeightVector& weights) {
  Json out = Json::array();
  for (const auto& entry : weights.entries()) {
    out.push_back({{"label", entry.label}, {"weight", rational_json(entry.weight)}});
  }
  return out;
}

WeightVector weight_vector_from_json(const Json& j) {
  const std::string context = "weights";
  if (!j.is_array() || j.empty()) {
    fail(ErrorCode::ParseError, context + ": expected a non-empty array");
  }
  std::vector<WeightVector::Entry> entries;
  for (const auto& entry : j) {
    entries.push_back({require_string(entry, "label", context),
                       parse_rational(require_string(entry, "weight", context))});
  }
  return WeightVector::validate(std::move(entries));
}

namespace {

Json stratum_values_json(const std::vector<StratumValue>& values) {
  Json out = Json::array();
  for (const auto& v : values) {
    if (v.defined()) {
      out.push_back({{"label", v.label}, {"value", rational_json(*v.value)}});
    } else {
      out.push_back({{"label", v.label}, {"undefined", true}, {"reason", v.note}});
    }
  }
  return out;
}

std::vector<StratumValue> stratum_values_from_json(const Json& j, const std::string& context) {
  if (!j.is_array()) fail(ErrorCode::ParseError, context + ": expected an array");
  std::vector<StratumValue> out;
  for (const auto& entry : j) {
    StratumValue v;
    v.label = require_string(entry, "label", context);
    if (entry.contains("value")) {
      v.value = rational_from_json(entry["value"], context);
    } else {
      v.note = entry.value("reason", std::string());
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

Json collapsibility_report_to_json(const CollapsibilityReport& report, int decimals) {
  return Json{
      {"type", "collapsibility-report"},
      {"definition",
       report.definition == CollapsibilityReport::Definition::Causal ? "causal" : "associational"},
      {"kind", kind_name(report.kind)},
      {"stratum_values", stratum_values_json(report.stratum_values)},
      {"marginal_value", rational_json(report.marginal_value)},
      {"marginal_decimal", to_decimal_string(report.marginal_value, decimals)},
      {"weights", weight_vector_to_json(report.weights)},
      {"weighted_average", rational_json(report.weighted_average)},
      {"weighted_average_decimal", to_decimal_string(report.weighted_average, decimals)},
      {"residual", rational_json(report.residual)},
      {"collapsible", report.collapsible},
  };
}

CollapsibilityReport collapsibility_report_from_json(const Json& j) {
  const std::string context = "collapsibility-report";
  CollapsibilityReport report;
  const std::string definition = require_string(j, "definition", context);
  if (definition != "causal" && definition != "associational") {
    fail(ErrorCode::ParseError, context + ": unknown definition '" + definition + "'");
  }
  report.definition = definition == "causal" ? CollapsibilityReport::Definition::Causal
                                             : CollapsibilityReport::Definition::Associational;
  report.kind = kind_from_name(require_string(j, "kind", context));
  report.stratum_values = stratum_values_from_json(require_field(j, "stratum_values", context), context);
  report.marginal_value = rational_from_json(require_field(j, "marginal_value", context), context);
  report.weights = weight_vector_from_json(require_field(j, "weights", context));
  report.weighted_average =
      rational_from_json(require_field(j, "weighted_average", context), context);
  report.residual = rational_from_json(require_field(j, "residual", context), context);
  report.collapsible = report.residual == 0;
  return report;
}

Json feasibility_result_to_json(const FeasibilityResult& result) {
  Json out{
      {"type", "feasibility-result"},
      {"feasible", result.feasible},
      {"evidence",
       {{"min", rational_json(result.evidence.min_value)},
        {"max", rational_json(result.evidence.max_value)},
        {"marginal", rational_json(result.evidence.marginal)}}},
  };
  out["witness"] =
      result.witness.has_value() ? weight_vector_to_json(*result.witness) : Json(nullptr);
  return out;
}

FeasibilityResult feasibility_result_from_json(const Json& j) {
  const std::string context = "feasibility-result";
  FeasibilityResult result;
  const Json& feasible = require_field(j, "feasible", context);
  if (!feasible.is_boolean()) fail(ErrorCode::ParseError, context + ": 'feasible' must be a bool");
  result.feasible = feasible.get<bool>();
  const Json& evidence = require_field(j, "evidence", context);
  result.evidence.min_value = rational_from_json(require_field(evidence, "min", context), context);
  result.evidence.max_value = rational_from_json(require_field(evidence, "max", context), context);
  result.evidence.marginal =
      rational_from_json(require_field(evidence, "marginal", context), context);
  if (auto it = j.find("witness"); it != j.end() && !it->is_null()) {
    result.witness = weight_vector_from_json(*it);
  }
  return result;
}

Json newman_weights_to_json(const NewmanWeights& weights) {
  Json conditions = Json::array();
  for (const auto& c : weights.conditions) {
    conditions.push_back({{"name", c.name}, {"holds", c.holds}});
  }
  return Json{
      {"type", "newman-weights"},
      {"weights", weight_vector_to_json(weights.weights)},
      {"conditions", std::move(conditions)},
  };
}

NewmanWeights newman_weights_from_json(const Json& j) {
  const std::string context = "newman-weights";
  NewmanWeights out{weight_vector_from_json(require_field(j, "weights", context)), {}};
  for (const auto& c : require_field(j, "conditions", context)) {
    out.conditions.push_back(
        {require_string(c, "name", context), require_field(c, "holds", context).get<bool>()});
  }
  return out;
}

namespace {

const char* status_name(ComparisonStatus status) {
  switch (status) {
    case ComparisonStatus::Equal: return "equal";
    case ComparisonStatus::Differs: return "differs";
    case ComparisonStatus::Skipped: return "skipped";
  }
  return "?";
}

Json comparison_json(const ValueComparison& comparison) {
  Json out;
  out["causal"] = comparison.causal.has_value() ? rational_json(*comparison.causal) : Json(nullptr);
  out["associational"] =
      comparison.associational.has_value() ? rational_json(*comparison.associational) : Json(nullptr);
  out["status"] = status_name(comparison_status(comparison));
  return out;
}

ValueComparison comparison_from_json(const Json& j, const std::string& context) {
  ValueComparison out;
  if (auto it = j.find("causal"); it != j.end() && !it->is_null()) {
    out.causal = rational_from_json(*it, context);
  }
  if (auto it = j.find("associational"); it != j.end() && !it->is_null()) {
    out.associational = rational_from_json(*it, context);
  }
  return out;
}

Json flags_json(const ExchangeabilityFlags& flags) {
  return Json{{"a0", flags.a0}, {"a1", flags.a1}};
}

ExchangeabilityFlags flags_from_json(const Json& j, const std::string& context) {
  return ExchangeabilityFlags{require_field(j, "a0", context).get<bool>(),
                              require_field(j, "a1", context).get<bool>()};
}

}  // namespace

Json def_equivalence_to_json(const DefEquivalenceReport& report) {
  Json kinds = Json::array();
  for (const auto& kind : report.kinds) {
    Json strata = Json::array();
    for (const auto& s : kind.strata) {
      Json row = comparison_json(s.values);
      row["label"] = s.label;
      strata.push_back(std::move(row));
    }
    kinds.push_back({
        {"kind", kind_name(kind.kind)},
        {"strata", std::move(strata)},
        {"marginal", comparison_json(kind.marginal)},
        {"agrees", kind.agrees},
    });
  }
  return Json{
      {"type", "def-equivalence-report"},
      {"conditional_exchangeability", flags_json(report.conditional)},
      {"marginal_exchangeability", flags_json(report.marginal)},
      {"fully_exchangeable", report.fully_exchangeable},
      {"kinds", std::move(kinds)},
      {"agrees", report.agrees},
  };
}

DefEquivalenceReport def_equivalence_from_json(const Json& j) {
  const std::string context = "def-equivalence-report";
  DefEquivalenceReport report;
  report.conditional =
      flags_from_json(require_field(j, "conditional_exchangeability", context), context);
  report.marginal =
      flags_from_json(require_field(j, "marginal_exchangeability", context), context);
  report.fully_exchangeable = report.conditional.both() && report.marginal.both();
  report.agrees = true;
  for (const auto& kind_json : require_field(j, "kinds", context)) {
    KindComparison kind;
    kind.kind = kind_from_name(require_string(kind_json, "kind", context));
    kind.agrees = true;
    for (const auto& row : require_field(kind_json, "strata", context)) {
      StratumComparison sc{require_string(row, "label", context),
                           comparison_from_json(row, context)};
      if (comparison_status(sc.values) == ComparisonStatus::Differs) kind.agrees = false;
      kind.strata.push_back(std::move(sc));
    }
    kind.marginal = comparison_from_json(require_field(kind_json, "marginal", context), context);
    if (comparison_status(kind.marginal) == ComparisonStatus::Differs) kind.agrees = false;
    if (!kind.agrees) report.agrees = false;
    report.kinds.push_back(std::move(kind));
  }
  return report;
}

// --- CSV ---------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

struct CsvRows {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvRows read_csv(std::istream& in) {
  CsvRows csv;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    if (csv.header.empty()) {
      csv.header = std::move(fields);
    } else {
      if (fields.size() != csv.header.size()) {
        fail(ErrorCode::ParseError, "csv row has " + std::to_string(fields.size()) +
                                        " fields, header has " +
                                        std::to_string(csv.header.size()));
      }
      csv.rows.push_back(std::move(fields));
    }
  }
  if (csv.header.empty()) fail(ErrorCode::ParseError, "empty csv input");
  return csv;
}

void require_header(const CsvRows& csv, const std::vector<std::string>& expected) {
  if (csv.header != expected) {
    std::string want;
    for (const auto& h : expected) {
      if (!want.empty()) want += ',';
      want += h;
    }
    fail(ErrorCode::ParseError, "unexpected csv header (expected '" + want + "')");
  }
}

}  // namespace

CounterfactualPopulation population_from_csv(std::istream& in,
                                             std::vector<std::string>* warnings) {
  const CsvRows csv = read_csv(in);
  require_header(csv, {"label", "prevalence", "risk0", "risk1"});
  std::vector<CounterfactualStratum> strata;
  for (const auto& row : csv.rows) {
    strata.push_back(CounterfactualStratum{
        row[0], Probability(parse_rational(row[1])),
        JointDistribution::independent(Probability(parse_rational(row[2])),
                                       Probability(parse_rational(row[3])))});
  }
  return CounterfactualPopulation::validate(std::move(strata), warnings);
}

ObservationalTable table_from_csv(std::istream& in, std::vector<std::string>* warnings) {
  const CsvRows csv = read_csv(in);
  require_header(csv, {"label", "prevalence", "pA", "r0", "r1"});
  std::vector<ObservationalStratum> strata;
  for (const auto& row : csv.rows) {
    ObservationalStratum s;
    s.label = row[0];
    s.prevalence = Probability(parse_rational(row[1]));
    s.pA = Probability(parse_rational(row[2]));
    if (!row[3].empty()) s.r0 = Probability(parse_rational(row[3]));
    if (!row[4].empty()) s.r1 = Probability(parse_rational(row[4]));
    strata.push_back(std::move(s));
  }
  return ObservationalTable::validate(std::move(strata), warnings);
}

std::vector<OutcomeStratum> outcome_strata_from_csv(std::istream& in) {
  const CsvRows csv = read_csv(in);
  require_header(csv, {"label", "prevalence", "pY"});
  std::vector<OutcomeStratum> strata;
  for (const auto& row : csv.rows) {
    strata.push_back(OutcomeStratum{row[0], Probability(parse_rational(row[1])),
                                    Probability(parse_rational(row[2]))});
  }
  return strata;
}

Json outcome_strata_to_json(const std::vector<OutcomeStratum>& strata) {
  Json rows = Json::array();
  for (const auto& s : strata) {
    rows.push_back({{"label", s.label},
                    {"prevalence", rational_json(s.prevalence.value())},
                    {"pY", rational_json(s.event_probability.value())}});
  }
  return Json{{"strata", std::move(rows)}};
}

std::vector<OutcomeStratum> outcome_strata_from_json(const Json& j) {
  const std::string context = "outcome strata";
  std::vector<OutcomeStratum> strata;
  for (const auto& row : strata_array(j, context)) {
    strata.push_back(OutcomeStratum{require_string(row, "label", context),
                                    probability_from_json(row, "prevalence", context),
                                    probability_from_json(row, "pY", context)});
  }
  return strata;
}

AnyInput parse_input_text(const std::string& text) {
  AnyInput input;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(ErrorCode::ParseError, "empty input");

  if (text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      fail(ErrorCode::ParseError, std::string("invalid json: ") + e.what());
    }
    if (j.contains("population") && j.contains("mechanism")) {
      input.scenario = scenario_from_json(j);
      input.population = input.scenario->population;
      input.mechanism = input.scenario->mechanism;
    } else if (j.contains("pi")) {
      input.mechanism = mechanism_from_json(j);
    } else if (j.contains("strata")) {
      const Json& strata = j["strata"];
      if (!strata.is_array() || strata.empty()) {
        fail(ErrorCode::ParseError, "'strata' must be a non-empty array");
      }
      if (strata.front().contains("pA")) {
        input.table = table_from_json(j, &input.warnings);
      } else if (strata.front().contains("pY")) {
        input.outcome = outcome_strata_from_json(j);
      } else {
        input.population = population_from_json(j, &input.warnings);
      }
    } else {
      fail(ErrorCode::ParseError,
           "unrecognized input object (expected a population, table, mechanism, scenario, or "
           "outcome list)");
    }
    return input;
  }

  // CSV: detect by header.
  std::istringstream stream(text.substr(first));
  std::string header_line;
  std::getline(stream, header_line);
  const auto header = split_csv_line(header_line);
  stream.str(text.substr(first));
  stream.clear();
  if (header == std::vector<std::string>{"label", "prevalence", "risk0", "risk1"}) {
    input.population = population_from_csv(stream, &input.warnings);
  } else if (header == std::vector<std::string>{"label", "prevalence", "pA", "r0", "r1"}) {
    input.table = table_from_csv(stream, &input.warnings);
  } else if (header == std::vector<std::string>{"label", "prevalence", "pY"}) {
    input.outcome = outcome_strata_from_csv(stream);
  } else {
    fail(ErrorCode::ParseError, "unrecognized csv header '" + header_line + "'");
  }
  return input;
}

}  // namespace collapsekit
