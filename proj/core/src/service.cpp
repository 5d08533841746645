#include "fuzzyc/service.hpp"

#include <algorithm>
#include <mutex>

#include <json.hpp>

#include "fuzzyc/codegen.hpp"
#include "text.hpp"

namespace fuzzyc {

namespace {

using json = nlohmann::json;

HttpResponse json_response(int status, const json& body) {
  return {status, "application/json", body.dump()};
}

json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    json j{{"severity", d.severity == Severity::Error ? "error" : "warning"},
           {"message", d.message}};
    if (d.pos) {
      j["line"] = d.pos->line;
      j["column"] = d.pos->column;
    }
    out.push_back(std::move(j));
  }
  return out;
}

HttpResponse error_response(int status, const std::string& message,
                            const std::vector<Diagnostic>& diagnostics = {}) {
  return json_response(status, {{"error", message}, {"diagnostics", diagnostics_json(diagnostics)}});
}

Diagnostic to_diagnostic(const Error& e) {
  return {Severity::Error, e.position(), e.detail()};
}

json levels_json(const MembershipFunction& m) {
  json out = json::array();
  for (auto l : m) out.push_back(static_cast<int>(l));
  return out;
}

json signals_json(const std::vector<SignalDecl>& decls) {
  json out = json::array();
  for (const auto& d : decls) {
    out.push_back({{"name", d.name}, {"lo", d.universe.lo()}, {"hi", d.universe.hi()}});
  }
  return out;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<json> parse_body(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    parts.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
    i = j == std::string::npos ? path.size() : j;
  }
  return parts;
}

}  // namespace

Service::Service(Options options) : options_(std::move(options)) {
  if (!options_.dictionary_path.empty() && std::filesystem::exists(options_.dictionary_path)) {
    dictionary_ = dictionary_load(options_.dictionary_path);
  }
  if (options_.rule_dir.empty() || !std::filesystem::is_directory(options_.rule_dir)) return;

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(options_.rule_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".fzr") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const std::string name = path.stem().string();
    try {
      if (!is_valid_name(name)) {
        throw Error(ErrorCategory::Data, "file stem is not a valid chip name");
      }
      ChipSource source;
      std::vector<Diagnostic> diagnostics;
      auto chip = build_chip(name, ChipType::Minmax, detail::read_file(path.string()), source,
                             diagnostics);
      network_.add_chip(std::move(chip));
      sources_.emplace(name, std::move(source));
    } catch (const Error& e) {
      startup_.push_back({Severity::Error, e.position(), path.string() + ": " + e.detail()});
    }
  }
}

ChipObject Service::build_chip(const std::string& name, ChipType type, const std::string& text,
                               ChipSource& source, std::vector<Diagnostic>& diagnostics) const {
  RuleSet parsed = parse_rules(text, name);
  diagnostics = lint(parsed);
  source.written_rules = parsed.rules.size();
  source.normalized = normalize(std::move(parsed));
  return fuzzyc::create_chip(name, type, resolve(source.normalized, dictionary_));
}

HttpResponse Service::handle(const HttpRequest& request) {
  try {
    const auto parts = split_path(request.path);
    const auto& m = request.method;
    if (parts.size() < 2 || parts[0] != "api") return error_response(404, "no such route");

    if (parts[1] == "definitions") {
      if (parts.size() == 2) {
        if (m == "GET") return list_definitions();
        return error_response(405, "method not allowed");
      }
      if (parts.size() == 3) {
        if (m == "GET") return get_definition(parts[2]);
        if (m == "PUT") return put_definition(parts[2], request.body);
        return error_response(405, "method not allowed");
      }
    } else if (parts[1] == "chips") {
      if (parts.size() == 2) {
        if (m == "GET") return list_chips();
        if (m == "POST") return create_chip(request.body);
        return error_response(405, "method not allowed");
      }
      if (parts.size() == 4 && parts[3] == "infer") {
        if (m == "POST") return infer(parts[2], request.body);
        return error_response(405, "method not allowed");
      }
      if (parts.size() == 4 && parts[3] == "compile") {
        if (m == "POST") return compile(parts[2], request.body);
        return error_response(405, "method not allowed");
      }
    } else if (parts[1] == "network" && parts.size() == 3) {
      if (parts[2] == "connections") {
        if (m == "POST") return add_connection(request.body);
        return error_response(405, "method not allowed");
      }
      if (parts[2] == "propagate") {
        if (m == "POST") return propagate(request.body);
        return error_response(405, "method not allowed");
      }
    }
    return error_response(404, "no such route");
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

HttpResponse Service::list_definitions() const {
  std::shared_lock lock(mutex_);
  json defs = json::array();
  json names = json::array();
  for (const auto& [name, mf] : dictionary_.entries()) {
    names.push_back(name);
    defs.push_back({{"name", name}, {"levels", levels_json(mf)}});
  }
  return json_response(200, {{"names", names}, {"definitions", defs}});
}

HttpResponse Service::get_definition(const std::string& name) const {
  std::shared_lock lock(mutex_);
  auto it = dictionary_.entries().find(canonical_name(name));
  if (it == dictionary_.entries().end()) return error_response(404, "unknown definition " + name);
  return json_response(200, {{"name", it->first}, {"levels", levels_json(it->second)}});
}

HttpResponse Service::put_definition(const std::string& name, const std::string& body) {
  if (!is_valid_name(name)) return error_response(400, "invalid definition name '" + name + "'");
  if (is_reserved_definition(name)) {
    return error_response(400, canonical_name(name) + " is a reserved built-in definition");
  }
  const auto j = parse_body(body);
  if (!j || !j->contains("levels") || !(*j)["levels"].is_array()) {
    return error_response(400, "body must be {\"levels\": [16 integers 0..15]}");
  }
  std::vector<int> values;
  for (const auto& v : (*j)["levels"]) {
    if (!v.is_number_integer()) return error_response(400, "levels must be integers");
    values.push_back(v.get<int>());
  }

  std::unique_lock lock(mutex_);
  MembershipFunction mf;
  try {
    mf = MembershipFunction::from_values(values);
  } catch (const Error& e) {
    return error_response(400, e.detail());
  }

  // Build the whole next state before touching anything, so a failure leaves
  // the session unchanged and no reader sees a half-applied edit.
  FuzzyDictionary next_dict = dictionary_;
  next_dict.assign(name, mf);
  ChipNetwork next_network = network_;
  json updated = json::array();
  try {
    for (const auto& [chip_name, source] : sources_) {
      auto current = network_.find(chip_name);
      next_network.replace_chip(update_chip(*current, resolve(source.normalized, next_dict)));
      updated.push_back(chip_name);
    }
  } catch (const Error& e) {
    return error_response(409, "definition change breaks a chip: " + std::string(e.what()));
  }
  if (!options_.dictionary_path.empty()) dictionary_save(next_dict, options_.dictionary_path);
  dictionary_ = std::move(next_dict);
  network_ = std::move(next_network);

  return json_response(200, {{"name", canonical_name(name)},
                             {"levels", levels_json(mf)},
                             {"updatedChips", updated}});
}

HttpResponse Service::create_chip(const std::string& body) {
  const auto j = parse_body(body);
  if (!j || !j->contains("name") || !(*j)["name"].is_string() || !j->contains("ruleText") ||
      !(*j)["ruleText"].is_string()) {
    return error_response(400, "body must be {\"name\", \"type\", \"ruleText\"}");
  }
  const std::string name = (*j)["name"].get<std::string>();
  if (!is_valid_name(name)) return error_response(400, "invalid chip name '" + name + "'");
  ChipType type = ChipType::Minmax;
  if (j->contains("type")) {
    if (!(*j)["type"].is_string()) return error_response(400, "type must be a string");
    auto t = parse_chip_type((*j)["type"].get<std::string>());
    if (!t) return error_response(400, "type must be MINMAX or MULTIPLICATIVE");
    type = *t;
  }

  std::unique_lock lock(mutex_);
  if (network_.find(name)) return error_response(409, "chip " + name + " already exists");

  ChipSource source;
  std::vector<Diagnostic> diagnostics;
  try {
    auto chip = build_chip(name, type, (*j)["ruleText"].get<std::string>(), source, diagnostics);
    json summary{{"name", name},
                 {"type", std::string(to_string(type))},
                 {"inputs", signals_json(chip.compiled().inputs)},
                 {"outputs", signals_json(chip.compiled().outputs)},
                 {"ruleCount", source.written_rules},
                 {"normalizedRuleCount", chip.rule_count()},
                 {"diagnostics", diagnostics_json(diagnostics)}};
    network_.add_chip(std::move(chip));
    sources_.emplace(name, std::move(source));
    return json_response(201, summary);
  } catch (const Error& e) {
    return error_response(400, e.detail(), {to_diagnostic(e)});
  }
}

HttpResponse Service::list_chips() const {
  std::shared_lock lock(mutex_);
  json chips = json::array();
  for (const auto& [name, chip] : network_.chips()) {
    chips.push_back({{"name", name},
                     {"type", std::string(to_string(chip->type()))},
                     {"inputs", signals_json(chip->compiled().inputs)},
                     {"outputs", signals_json(chip->compiled().outputs)},
                     {"ruleCount", sources_.at(name).written_rules},
                     {"normalizedRuleCount", chip->rule_count()}});
  }
  return json_response(200, {{"chips", chips}});
}

HttpResponse Service::infer(const std::string& name, const std::string& body) const {
  ChipNetwork::ChipPtr chip;
  {
    std::shared_lock lock(mutex_);
    chip = network_.find(name);
  }
  if (!chip) return error_response(404, "unknown chip " + name);
  const auto j = parse_body(body);
  if (!j || !j->contains("inputs") || !(*j)["inputs"].is_array()) {
    return error_response(400, "body must be {\"inputs\": [numbers]}");
  }
  std::vector<double> inputs;
  for (const auto& v : (*j)["inputs"]) {
    if (!v.is_number()) return error_response(400, "inputs must be numbers");
    inputs.push_back(v.get<double>());
  }
  if (inputs.size() != chip->input_count()) {
    return error_response(400, "chip " + name + " expects " +
                                   std::to_string(chip->input_count()) + " inputs, got " +
                                   std::to_string(inputs.size()));
  }

  const auto result = assert_input(*chip, inputs);
  json outputs = json::array();
  for (const auto& y : result.outputs) outputs.push_back(optional_json(y));
  json memberships = json::array();
  for (std::size_t o = 0; o < result.membership.size(); ++o) {
    const auto values = result.membership.values(o);
    json row = json::array();
    for (double v : values) {
      if (chip->type() == ChipType::Minmax) {
        row.push_back(static_cast<int>(v));
      } else {
        row.push_back(v);
      }
    }
    memberships.push_back(std::move(row));
  }
  json alphas = json::array();
  for (std::size_t i = 0; i < result.activation.size(); ++i) {
    if (chip->type() == ChipType::Minmax) {
      alphas.push_back(static_cast<int>(result.activation.levels()[i]));
    } else {
      alphas.push_back(result.activation.strengths()[i]);
    }
  }
  return json_response(200, {{"outputs", outputs}, {"memberships", memberships}, {"alphas", alphas}});
}

HttpResponse Service::compile(const std::string& name, const std::string& body) const {
  ChipNetwork::ChipPtr chip;
  {
    std::shared_lock lock(mutex_);
    chip = network_.find(name);
  }
  if (!chip) return error_response(404, "unknown chip " + name);
  const auto j = parse_body(body);
  if (!j || !j->contains("target") || !(*j)["target"].is_string()) {
    return error_response(400, "body must be {\"target\": \"inference-chip\"|\"memory-chip\"}");
  }
  const std::string target = (*j)["target"].get<std::string>();
  try {
    if (target == "inference-chip") {
      const auto image = write_rule_image(*chip);
      return {200, "application/octet-stream",
              std::string(image.bytes.begin(), image.bytes.end())};
    }
    if (target != "memory-chip") return error_response(400, "unknown target " + target);

    int bytesize = 0;
    if (j->contains("bytesize")) {
      if (!(*j)["bytesize"].is_number_integer()) return error_response(400, "bytesize must be an integer");
      bytesize = (*j)["bytesize"].get<int>();
    }
    if (bytesize < 0 || bytesize > kMaxBytesize) {
      return error_response(400, "bytesize must be 0 (reals) or 1..16");
    }
    const auto table = gen_table(*chip, bytesize);
    if (j->value("format", std::string("json")) == "text") {
      return {200, "text/plain", emit_table(table)};
    }
    json rows = json::array();
    for (std::uint32_t a = 0; a < table.row_count(); ++a) {
      json outs = json::array();
      for (std::size_t o = 0; o < table.output_count; ++o) {
        if (bytesize == 0) {
          outs.push_back(table.output(a, o));
        } else {
          outs.push_back(static_cast<std::uint32_t>(table.output(a, o)));
        }
      }
      rows.push_back({{"address", a},
                      {"inputs", decode_address(a, table.input_count)},
                      {"outputs", outs}});
    }
    return json_response(200, {{"inputCount", table.input_count},
                               {"outputCount", table.output_count},
                               {"bytesize", bytesize},
                               {"rows", rows},
                               {"noActivation", table.no_activation}});
  } catch (const CapacityError& e) {
    return error_response(409, e.detail());
  } catch (const Error& e) {
    return error_response(400, e.detail());
  }
}

HttpResponse Service::add_connection(const std::string& body) {
  const auto j = parse_body(body);
  auto is_index = [&](const char* key) {
    return j->contains(key) && (*j)[key].is_number_integer() && (*j)[key].get<long long>() >= 0;
  };
  if (!j || !j->contains("src") || !(*j)["src"].is_string() || !j->contains("dst") ||
      !(*j)["dst"].is_string() || !is_index("srcOutput") || !is_index("dstInput")) {
    return error_response(400, "body must be {src, srcOutput, dst, dstInput}");
  }
  const Connection c{(*j)["src"].get<std::string>(), (*j)["srcOutput"].get<std::size_t>(),
                     (*j)["dst"].get<std::string>(), (*j)["dstInput"].get<std::size_t>()};

  std::unique_lock lock(mutex_);
  const auto src = network_.find(c.src);
  const auto dst = network_.find(c.dst);
  if (!src) return error_response(404, "unknown chip " + c.src);
  if (!dst) return error_response(404, "unknown chip " + c.dst);
  if (c.src_output >= src->output_count() || c.dst_input >= dst->input_count()) {
    return error_response(400, "connection position out of range");
  }
  try {
    const auto warnings = network_.connect(c);
    json conns = json::array();
    for (const auto& k : network_.connections()) {
      conns.push_back({{"src", k.src}, {"srcOutput", k.src_output}, {"dst", k.dst},
                       {"dstInput", k.dst_input}});
    }
    return json_response(201, {{"connections", conns}, {"warnings", diagnostics_json(warnings)}});
  } catch (const Error& e) {
    return error_response(409, e.detail());
  }
}

HttpResponse Service::propagate(const std::string& body) const {
  const auto j = parse_body(body);
  if (!j || !j->contains("inputs") || !(*j)["inputs"].is_array()) {
    return error_response(400, "body must be {\"inputs\": [{chip, input, value}]}");
  }
  std::map<PortRef, double> external;
  for (const auto& v : (*j)["inputs"]) {
    if (!v.is_object() || !v.contains("chip") || !v["chip"].is_string() || !v.contains("input") ||
        !v["input"].is_number_integer() || v["input"].get<long long>() < 0 ||
        !v.contains("value") || !v["value"].is_number()) {
      return error_response(400, "each input must be {chip, input, value}");
    }
    external[{v["chip"].get<std::string>(), v["input"].get<std::size_t>()}] =
        v["value"].get<double>();
  }

  ChipNetwork snapshot;
  {
    std::shared_lock lock(mutex_);
    snapshot = network_;
  }
  try {
    const auto result = snapshot.propagate(external);
    json outputs = json::array();
    for (const auto& [port, value] : result.outputs) {
      outputs.push_back({{"chip", port.first}, {"output", port.second}, {"value", optional_json(value)}});
    }
    return json_response(200, {{"outputs", outputs}, {"order", result.order}});
  } catch (const Error& e) {
    return error_response(400, e.detail());
  }
}

}  // namespace fuzzyc
