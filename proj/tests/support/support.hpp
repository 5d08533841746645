#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "fuzzyc/dictionary.hpp"
#include "fuzzyc/engine.hpp"
#include "fuzzyc/rulelang.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return FUZZYC_TEST_DATA; }
inline std::filesystem::path rules_dir() { return data_dir() / "rules"; }
inline std::filesystem::path defs_path() { return data_dir() / "defs.fzd"; }

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(rules_dir())) {
    if (e.path().extension() == ".fzr") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline const fuzzyc::FuzzyDictionary& defs() {
  static const fuzzyc::FuzzyDictionary d = fuzzyc::dictionary_load(defs_path());
  return d;
}

inline fuzzyc::ChipObject chip_from_file(const std::string& stem,
                                         fuzzyc::ChipType type = fuzzyc::ChipType::Minmax) {
  auto rs = fuzzyc::load_rules((rules_dir() / (stem + ".fzr")).string());
  return fuzzyc::create_chip(stem, type, fuzzyc::resolve(fuzzyc::normalize(rs), defs()));
}

// Scratch directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("fuzzyc-test-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline oracle::Fn to_fn(const fuzzyc::MembershipFunction& m) {
  oracle::Fn f{};
  for (int k = 0; k < 16; ++k) f[k] = m[k];
  return f;
}

inline fuzzyc::MembershipFunction from_fn(const oracle::Fn& f) {
  fuzzyc::MembershipFunction::Levels l{};
  for (int k = 0; k < 16; ++k) l[k] = static_cast<fuzzyc::TruthLevel>(f[k]);
  return fuzzyc::MembershipFunction(l);
}

inline std::vector<oracle::Rule> to_oracle(const fuzzyc::ChipObject& chip) {
  std::vector<oracle::Rule> rules;
  for (const auto& r : chip.compiled().rules) {
    oracle::Rule o;
    for (const auto& m : r.antecedent) o.ante.push_back(to_fn(m));
    for (const auto& m : r.consequent) o.cons.push_back(to_fn(m));
    rules.push_back(std::move(o));
  }
  return rules;
}

// Random function: mostly arbitrary vectors, sometimes ANY, NULL or a generator shape.
inline oracle::Fn random_fn(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 9), level(0, 15);
  oracle::Fn f{};
  switch (pick(rng)) {
    case 0:
      f.fill(15);
      break;
    case 1:
      break;
    case 2:
    case 3: {
      int c = level(rng), t = level(rng);
      if (t == c) t = (c + 3) % 16;
      f = oracle::triangle(c, t);
      break;
    }
    default:
      for (int& v : f) v = level(rng);
  }
  return f;
}

inline fuzzyc::SignalDecl signal(const std::string& name, double lo, double hi,
                                 fuzzyc::Direction dir, std::size_t position) {
  return {name, fuzzyc::Universe(lo, hi), dir, position, {}};
}

inline fuzzyc::CompiledRuleSet random_rules(std::mt19937_64& rng, std::size_t inputs,
                                            std::size_t outputs, std::size_t rules) {
  std::uniform_real_distribution<double> lo_d(-500.0, 500.0), w_d(0.01, 1000.0);
  fuzzyc::CompiledRuleSet c;
  for (std::size_t j = 0; j < inputs; ++j) {
    double lo = lo_d(rng);
    c.inputs.push_back(signal("X" + std::to_string(j + 1), lo, lo + w_d(rng),
                              fuzzyc::Direction::Input, j));
  }
  for (std::size_t o = 0; o < outputs; ++o) {
    double lo = lo_d(rng);
    c.outputs.push_back(signal("Y" + std::to_string(o + 1), lo, lo + w_d(rng),
                               fuzzyc::Direction::Output, o));
  }
  for (std::size_t i = 0; i < rules; ++i) {
    fuzzyc::CompiledRule r;
    for (std::size_t j = 0; j < inputs; ++j) r.antecedent.push_back(from_fn(random_fn(rng)));
    for (std::size_t o = 0; o < outputs; ++o) r.consequent.push_back(from_fn(random_fn(rng)));
    c.rules.push_back(std::move(r));
  }
  return c;
}

}  // namespace testsupport
