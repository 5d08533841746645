#include "fuzzyc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fuzzyc/codegen.hpp"
#include "fuzzyc/dictionary.hpp"
#include "fuzzyc/engine.hpp"
#include "fuzzyc/error.hpp"
#include "fuzzyc/rulelang.hpp"
#include "fuzzyc/service.hpp"

namespace fuzzyc::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
  std::string rules;
  std::string dict;
  std::string type = "minmax";
  std::string input;
  std::string batch;
  bool show_membership = false;
  bool show_alpha = false;
  std::string target;
  int bytesize = 0;
  std::string out_path;
  std::string def_name;
  int center = -1;
  int tail = -1;
  std::string rule_dir;
  std::string static_dir;
  std::string host = "127.0.0.1";
  int port = 8080;
};

// File the current step reads, for locating diagnostics.
thread_local std::string g_current_file;

/// Error raised for command-line problems (exit 1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::Data, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_bytes(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCategory::Data, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(ErrorCategory::Data, "failed writing " + path.string());
}

void print_diagnostic(std::ostream& err, const std::string& file, const Diagnostic& d) {
  err << file << ':';
  if (d.pos) err << d.pos->line << ':' << d.pos->column << ':';
  err << (d.severity == Severity::Error ? " error: " : " warning: ") << d.message << '\n';
}

struct Compiled {
  RuleSet parsed;
  RuleSet normalized;
  ChipObject chip;
};

Compiled build(const Options& opt, std::ostream& err) {
  if (opt.dict.empty()) throw UsageError("--dict is required");
  const auto type = parse_chip_type(opt.type);
  if (!type) throw UsageError("--type must be minmax or mult");
  g_current_file = opt.dict;
  const FuzzyDictionary dict = dictionary_load(opt.dict);
  g_current_file = opt.rules;
  RuleSet parsed = parse_rules(read_text(opt.rules), opt.rules);
  for (const auto& d : lint(parsed)) print_diagnostic(err, opt.rules, d);
  RuleSet normalized = normalize(parsed);
  CompiledRuleSet compiled = resolve(normalized, dict);
  const std::string name = fs::path(opt.rules).stem().string();
  return {std::move(parsed), std::move(normalized), create_chip(name, *type, std::move(compiled))};
}

std::string slot_text(const Clause* c, const char* padding) {
  if (!c) return padding;
  std::string s;
  for (auto a : c->adverbs) {
    s += to_string(a);
    s += ' ';
  }
  return s + c->adjective;
}

int cmd_check(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto c = build(opt, err);
  const auto& rs = c.normalized;
  out << opt.rules << ": " << rs.inputs.size() << " inputs, " << rs.outputs.size()
      << " outputs\n";
  out << c.parsed.rules.size() << " rules (" << rs.rules.size() << " after normalization)\n";
  for (std::size_t i = 0; i < rs.rules.size(); ++i) {
    const Rule& r = rs.rules[i];
    auto find = [](const Conjunction& conj, const std::string& sig) -> const Clause* {
      for (const auto& cl : conj) {
        if (cl.signal == sig) return &cl;
      }
      return nullptr;
    };
    out << "  rule " << (i + 1) << ":";
    for (const auto& d : rs.inputs) {
      out << ' ' << d.name << '=' << slot_text(find(r.antecedent.front(), d.name), "ANY");
    }
    out << " ->";
    for (const auto& d : rs.outputs) {
      out << ' ' << d.name << '=' << slot_text(find(r.consequent, d.name), "NULL");
    }
    out << '\n';
  }
  return kOk;
}

std::vector<double> parse_vector(const std::string& text, const std::string& where) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw Error(ErrorCategory::Data, where + ": empty field");
    const std::string trimmed = field.substr(b, e - b + 1);
    double v = 0;
    std::size_t used = 0;
    try {
      v = std::stod(trimmed, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != trimmed.size()) {
      throw Error(ErrorCategory::Data, where + ": '" + trimmed + "' is not a number");
    }
    values.push_back(v);
  }
  return values;
}

std::string format_output(const std::optional<double>& y) {
  return y ? format_real(*y) : std::string("NO-ACTIVATION");
}

void print_result(const ChipObject& chip, const InferenceResult& r, const Options& opt,
                  std::ostream& out) {
  for (std::size_t o = 0; o < r.outputs.size(); ++o) {
    if (o) out << ' ';
    out << format_output(r.outputs[o]);
  }
  out << '\n';
  const bool minmax = chip.type() == ChipType::Minmax;
  if (opt.show_alpha) {
    out << "  alpha:";
    for (std::size_t i = 0; i < r.activation.size(); ++i) {
      out << ' ' << (minmax ? std::to_string(r.activation.levels()[i])
                            : format_real(r.activation.strengths()[i]));
    }
    out << '\n';
  }
  if (opt.show_membership) {
    for (std::size_t o = 0; o < r.membership.size(); ++o) {
      out << "  B[" << chip.compiled().outputs[o].name << "]:";
      for (double v : r.membership.values(o)) {
        out << ' ' << (minmax ? std::to_string(static_cast<int>(v)) : format_real(v));
      }
      out << '\n';
    }
  }
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.input.empty() == opt.batch.empty()) {
    throw UsageError("give exactly one of --input or --batch");
  }
  const auto c = build(opt, err);
  std::vector<std::pair<std::string, std::vector<double>>> vectors;
  if (!opt.input.empty()) {
    g_current_file = "fuzzyc";
    vectors.emplace_back("--input", parse_vector(opt.input, "--input"));
  } else {
    std::istringstream lines(read_text(opt.batch));
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
      ++n;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      g_current_file = opt.batch;
      const std::string where = "line " + std::to_string(n);
      vectors.emplace_back(where, parse_vector(line, where));
    }
  }
  for (const auto& [where, xs] : vectors) {
    if (xs.size() != c.chip.input_count()) {
      throw Error(ErrorCategory::Data, where + ": expected " +
                                           std::to_string(c.chip.input_count()) +
                                           " inputs, got " + std::to_string(xs.size()));
    }
  }
  for (const auto& [where, xs] : vectors) print_result(c.chip, assert_input(c.chip, xs), opt, out);
  return kOk;
}

int cmd_compile(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.target != "inference-chip" && opt.target != "memory-chip") {
    throw UsageError("--target must be inference-chip or memory-chip");
  }
  const auto c = build(opt, err);
  fs::path base = opt.out_path.empty() ? fs::path(opt.rules).filename() : fs::path(opt.out_path);

  if (opt.target == "inference-chip") {
    const auto image = write_rule_image(c.chip);
    if (opt.out_path.empty()) base.replace_extension(".fzc");
    write_bytes(base, std::string(image.bytes.begin(), image.bytes.end()));
    out << "wrote " << base.string() << " (" << image.bytes.size() << " bytes, "
        << c.chip.rule_count() << " rules)\n";
    return kOk;
  }

  const auto table = gen_table(c.chip, opt.bytesize);
  fs::path tbl = base;
  tbl.replace_extension(".tbl");
  const std::string text = emit_table(table);
  write_bytes(tbl, text);
  out << "wrote " << tbl.string() << " (" << table.row_count() << " rows)\n";
  if (opt.bytesize >= 1) {
    fs::path bin = base;
    bin.replace_extension(".bin");
    const auto bytes = emit_table_binary(table);
    write_bytes(bin, std::string(bytes.begin(), bytes.end()));
    out << "wrote " << bin.string() << " (" << bytes.size() << " bytes)\n";
  }
  out << "NO-ACTIVATION addresses: " << table.no_activation.size() << '\n';
  if (!table.no_activation.empty()) {
    err << "warning: no rule fires at " << table.no_activation.size()
        << " addresses; the output universe midpoint was stored there:";
    for (std::size_t i = 0; i < table.no_activation.size() && i < 32; ++i) {
      err << ' ' << table.no_activation[i];
    }
    if (table.no_activation.size() > 32) err << " ...";
    err << '\n';
  }
  return kOk;
}

void render_bars(const MembershipFunction& m, std::ostream& out) {
  for (int t = kMaxTruth; t >= 0; --t) {
    out << (t < 10 ? " " : "") << t << " |";
    for (auto level : m) out << (level > 0 && level >= t ? " #" : " .");
    out << '\n';
  }
  out << "    ";
  for (std::size_t i = 0; i < kResolution; ++i) out << ' ' << std::hex << i << std::dec;
  out << '\n';
}

int cmd_defs(const std::string& sub, const Options& opt, std::ostream& out) {
  if (opt.dict.empty()) throw UsageError("--dict is required");
  g_current_file = opt.dict;
  if (sub == "list") {
    for (const auto& name : dictionary_load(opt.dict).names()) out << name << '\n';
    return kOk;
  }
  if (sub == "show") {
    const auto dict = dictionary_load(opt.dict);
    const auto m = dict.find(opt.def_name);
    if (!m) throw Error(ErrorCategory::Data, "unknown definition " + opt.def_name);
    out << canonical_name(opt.def_name) << '\n';
    render_bars(*m, out);
    return kOk;
  }

  // make-normal / make-triangle
  const auto m = sub == "make-normal" ? make_normal(opt.center, opt.tail)
                                      : make_triangle(opt.center, opt.tail);
  FuzzyDictionary dict;
  if (fs::exists(opt.dict)) dict = dictionary_load(opt.dict);
  dict.insert(opt.def_name, m);  // validates the name and rejects duplicates

  std::string existing = fs::exists(opt.dict) ? read_text(opt.dict) : std::string();
  std::ofstream file(opt.dict, std::ios::binary | std::ios::app);
  if (!file) throw Error(ErrorCategory::Data, "cannot write " + opt.dict);
  if (!existing.empty() && existing.back() != '\n') file << '\n';
  file << format_definition(opt.def_name, m) << '\n';
  out << format_definition(opt.def_name, m) << '\n';
  return kOk;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

int cmd_serve(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.dict.empty()) throw UsageError("--dict is required");
  Service service({opt.dict, opt.rule_dir});
  for (const auto& d : service.startup_diagnostics()) print_diagnostic(err, opt.rule_dir, d);

  HttpServer server(service, opt.static_dir);
  if (!server.bind(opt.host, opt.port)) {
    err << "error: cannot bind " << opt.host << ':' << opt.port << " (port in use?)\n";
    return kUsage;
  }
  out << "serving on http://" << opt.host << ':' << server.port() << std::endl;

  g_interrupted.store(false);
  auto previous_int = std::signal(SIGINT, on_interrupt);
  auto previous_term = std::signal(SIGTERM, on_interrupt);
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done.load()) {
      if (g_interrupted.load()) {
        server.stop();
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });
  server.listen();
  done.store(true);
  watcher.join();
  std::signal(SIGINT, previous_int);
  std::signal(SIGTERM, previous_term);
  out << "shut down" << std::endl;
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fuzzyc: compile fuzzy control rules to inference-chip and memory-chip images"};
  app.require_subcommand(1);
  Options opt;

  auto add_rule_inputs = [&](CLI::App* sub) {
    sub->add_option("rules", opt.rules, "Rule file (.fzr)")->required();
    sub->add_option("-d,--dict", opt.dict, "Definition dictionary (.fzd)")->required();
    sub->add_option("-t,--type", opt.type, "Chip type: minmax (default) or mult");
  };

  auto* check = app.add_subcommand("check", "Parse, normalize and resolve a rule file");
  add_rule_inputs(check);

  auto* simulate = app.add_subcommand("simulate", "Assert inputs on a chip and print outputs");
  add_rule_inputs(simulate);
  simulate->add_option("-i,--input", opt.input, "One input vector, comma-separated");
  simulate->add_option("-b,--batch", opt.batch, "CSV file, one input vector per line");
  simulate->add_flag("--show-membership", opt.show_membership, "Print output membership vectors");
  simulate->add_flag("--show-alpha", opt.show_alpha, "Print per-rule activations");

  auto* compile = app.add_subcommand("compile", "Emit an inference-chip image or memory-chip table");
  add_rule_inputs(compile);
  compile->add_option("--target", opt.target, "inference-chip or memory-chip")->required();
  compile->add_option("--bytesize", opt.bytesize, "Output bits for memory-chip (0 = reals)");
  compile->add_option("-o,--out", opt.out_path, "Output path");

  auto* defs = app.add_subcommand("defs", "Manage the definition dictionary");
  defs->require_subcommand(1);
  auto* defs_list = defs->add_subcommand("list", "List definition names");
  auto* defs_show = defs->add_subcommand("show", "Render a definition as bars");
  auto* defs_normal = defs->add_subcommand("make-normal", "Append a normal distribution");
  auto* defs_triangle = defs->add_subcommand("make-triangle", "Append a triangular distribution");
  for (auto* sub : {defs_list, defs_show, defs_normal, defs_triangle}) {
    sub->add_option("-d,--dict", opt.dict, "Definition dictionary (.fzd)")->required();
  }
  defs_show->add_option("name", opt.def_name, "Definition name")->required();
  for (auto* sub : {defs_normal, defs_triangle}) {
    sub->add_option("--name", opt.def_name, "Definition name")->required();
    sub->add_option("--center", opt.center, "Peak column 0-15")->required()->check(CLI::Range(0, 15));
    sub->add_option("--tail", opt.tail, "Tail column 0-15")->required()->check(CLI::Range(0, 15));
  }

  auto* serve = app.add_subcommand("serve", "Serve the workbench HTTP API");
  serve->add_option("-d,--dict", opt.dict, "Definition dictionary (.fzd)")->required();
  serve->add_option("-r,--rules", opt.rule_dir, "Directory of .fzr files to preload");
  serve->add_option("--static", opt.static_dir, "Directory of UI files served at /");
  serve->add_option("--host", opt.host, "Bind address");
  serve->add_option("-p,--port", opt.port, "Port (0 picks a free one)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  g_current_file.clear();
  try {
    if (check->parsed()) return cmd_check(opt, out, err);
    if (simulate->parsed()) return cmd_simulate(opt, out, err);
    if (compile->parsed()) return cmd_compile(opt, out, err);
    if (serve->parsed()) return cmd_serve(opt, out, err);
    if (defs_list->parsed()) return cmd_defs("list", opt, out);
    if (defs_show->parsed()) return cmd_defs("show", opt, out);
    if (defs_normal->parsed()) return cmd_defs("make-normal", opt, out);
    if (defs_triangle->parsed()) return cmd_defs("make-triangle", opt, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const CapacityError& e) {
    err << "error: " << e.detail() << '\n';
    return kCapacityError;
  } catch (const Error& e) {
    print_diagnostic(err, g_current_file.empty() ? std::string("fuzzyc") : g_current_file,
                     {Severity::Error, e.position(), e.detail()});
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  err << "error: no command\n";
  return kUsage;
}

}  // namespace fuzzyc::cli
