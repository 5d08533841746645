#include <fstream>
#include <iterator>
#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "fuzzyc/codegen.hpp"
#include "fuzzyc/dictionary.hpp"
#include "fuzzyc/engine.hpp"
#include "fuzzyc/rulelang.hpp"

namespace {

const std::string kData = FUZZYC_BENCH_DATA;

fuzzyc::ChipObject load_chip(const std::string& stem, fuzzyc::ChipType type) {
  static const auto dict = fuzzyc::dictionary_load(kData + "/defs.fzd");
  auto rs = fuzzyc::load_rules(kData + "/rules/" + stem + ".fzr");
  return fuzzyc::create_chip(stem, type, fuzzyc::resolve(fuzzyc::normalize(rs), dict));
}

std::vector<std::vector<double>> random_inputs(const fuzzyc::ChipObject& chip, std::size_t n) {
  std::mt19937_64 rng(42);
  std::vector<std::vector<double>> out(n);
  for (auto& xs : out) {
    for (const auto& d : chip.compiled().inputs) {
      std::uniform_real_distribution<double> x(d.universe.lo(), d.universe.hi());
      xs.push_back(x(rng));
    }
  }
  return out;
}

void BM_AssertInput(benchmark::State& state, const char* stem, fuzzyc::ChipType type) {
  const auto chip = load_chip(stem, type);
  const auto inputs = random_inputs(chip, 4096);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fuzzyc::assert_input(chip, inputs[i++ & 4095]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK_CAPTURE(BM_AssertInput, sixteen_rules_minmax, "four_inputs", fuzzyc::ChipType::Minmax);
BENCHMARK_CAPTURE(BM_AssertInput, sixteen_rules_mult, "four_inputs",
                  fuzzyc::ChipType::Multiplicative);
BENCHMARK_CAPTURE(BM_AssertInput, boiler_minmax, "boiler", fuzzyc::ChipType::Minmax);

void BM_GenTable(benchmark::State& state, const char* stem) {
  const auto chip = load_chip(stem, fuzzyc::ChipType::Minmax);
  for (auto _ : state) benchmark::DoNotOptimize(fuzzyc::gen_table(chip, 8));
}
BENCHMARK_CAPTURE(BM_GenTable, boiler, "boiler");
BENCHMARK_CAPTURE(BM_GenTable, four_inputs, "four_inputs")->Unit(benchmark::kMillisecond);

void BM_WriteRuleImage(benchmark::State& state) {
  const auto chip = load_chip("four_inputs", fuzzyc::ChipType::Minmax);
  for (auto _ : state) benchmark::DoNotOptimize(fuzzyc::write_rule_image(chip));
}
BENCHMARK(BM_WriteRuleImage);

void BM_ParseRules(benchmark::State& state) {
  std::string text;
  {
    std::ifstream in(kData + "/rules/four_inputs.fzr");
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fuzzyc::normalize(fuzzyc::parse_rules(text)));
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_ParseRules);

}  // namespace

BENCHMARK_MAIN();
