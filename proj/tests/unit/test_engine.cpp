#include <random>

#include "brute_force.hpp"
#include "doctest.h"
#include "fuzzyc/engine.hpp"
#include "fuzzyc/error.hpp"
#include "support.hpp"

using namespace fuzzyc;
using testsupport::signal;

namespace {

CompiledRuleSet one_rule(MembershipFunction ante, MembershipFunction cons,
                         Universe in = Universe(0, 16), Universe out = Universe(0, 16)) {
  CompiledRuleSet c;
  c.inputs.push_back(signal("X", in.lo(), in.hi(), Direction::Input, 0));
  c.outputs.push_back(signal("Y", out.lo(), out.hi(), Direction::Output, 0));
  c.rules.push_back({{ante}, {cons}});
  return c;
}

MembershipFunction single_bin(int k, int level = 15) {
  MembershipFunction::Levels l{};
  l[k] = static_cast<TruthLevel>(level);
  return MembershipFunction(l);
}

}  // namespace

TEST_CASE("chip creation") {
  auto chip = testsupport::chip_from_file("boiler");
  CHECK(chip.rule_count() == 2);
  CHECK(chip.input_count() == 2);
  CHECK(chip.output_count() == 2);
  auto mult = testsupport::chip_from_file("boiler", ChipType::Multiplicative);
  CHECK(mult.type() == ChipType::Multiplicative);
  CHECK(mult.compiled() == chip.compiled());

  auto empty = chip.compiled();
  empty.rules.clear();
  CHECK_THROWS_AS(create_chip("E", ChipType::Minmax, empty), Error);
  CHECK(parse_chip_type("MULT") == ChipType::Multiplicative);
  CHECK(parse_chip_type("minmax") == ChipType::Minmax);
  CHECK_FALSE(parse_chip_type("sum").has_value());
}

TEST_CASE("update keeps the interface") {
  auto chip = testsupport::chip_from_file("boiler");
  auto same = update_chip(chip, chip.compiled());
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      std::vector<int> l{a, b};
      CHECK(infer_levels(same, l).membership == infer_levels(chip, l).membership);
    }
  }
  auto fewer = chip.compiled();
  fewer.inputs.pop_back();
  for (auto& r : fewer.rules) r.antecedent.pop_back();
  CHECK_THROWS_AS(update_chip(chip, fewer), Error);
}

TEST_CASE("rule strength is the minimum over inputs") {
  CompiledRuleSet c;
  c.inputs = {signal("A", 0, 16, Direction::Input, 0), signal("B", 0, 16, Direction::Input, 1)};
  c.outputs = {signal("Y", 0, 16, Direction::Output, 0)};
  MembershipFunction::Levels a{}, b{};
  a[2] = 9;
  b[5] = 13;
  c.rules.push_back({{MembershipFunction(a), MembershipFunction(b)}, {single_bin(3)}});
  c.rules.push_back({{MembershipFunction(a), MembershipFunction::any()}, {single_bin(3)}});
  auto chip = create_chip("C", ChipType::Minmax, c);
  std::vector<int> l{2, 5};
  CHECK(rule_strength(chip, l).levels() == std::vector<TruthLevel>{9, 9});
  std::vector<int> other{2, 0};
  CHECK(rule_strength(chip, other).levels() == std::vector<TruthLevel>{0, 9});
  std::vector<int> zero{0, 0};
  CHECK(rule_strength(chip, zero).levels() == std::vector<TruthLevel>{0, 0});
  CHECK_THROWS_AS(rule_strength(chip, std::vector<int>{1}), Error);
  CHECK_THROWS_AS(rule_strength(chip, std::vector<int>{1, 16}), Error);
  CHECK_THROWS_AS(rule_strength(chip, l).strengths(), Error);

  auto mult = create_chip("M", ChipType::Multiplicative, c);
  CHECK(rule_strength(mult, l).strengths()[0] == doctest::Approx(9.0 / 15.0).epsilon(1e-15));
}

TEST_CASE("output membership") {
  CompiledRuleSet c;
  c.inputs = {signal("A", 0, 16, Direction::Input, 0)};
  c.outputs = {signal("Y", 0, 16, Direction::Output, 0)};
  auto c1 = make_triangle(4, 8), c2 = make_triangle(12, 8);
  c.rules.push_back({{MembershipFunction::any()}, {c1}});
  c.rules.push_back({{MembershipFunction::any()}, {c2}});
  auto chip = create_chip("C", ChipType::Minmax, c);
  CHECK(output_membership(chip, RuleActivation::minmax({15, 0})).levels()[0] == c1);

  auto seven = output_membership(chip, RuleActivation::minmax({7, 0})).levels()[0];
  CHECK(c1[4] == 15);
  CHECK(seven[4] == 7);
  CHECK(seven[0] == 0);

  auto mult = create_chip("M", ChipType::Multiplicative, c);
  auto half = output_membership(mult, RuleActivation::multiplicative({0.5, 0.0})).reals()[0];
  CHECK(half[4] == 0.5);
  CHECK_THROWS_AS(output_membership(chip, RuleActivation::minmax({1})), Error);
  CHECK_THROWS_AS(output_membership(chip, RuleActivation::multiplicative({1, 1})), Error);
  CHECK_THROWS_AS(RuleActivation::multiplicative({1.5}), Error);
}

TEST_CASE("defuzzify") {
  Universe u(0, 16);
  CHECK(defuzzify(single_bin(3), u) == 3.5);
  CHECK_FALSE(defuzzify(MembershipFunction::null(), u).has_value());
  Universe v(-3.7, 91.2);
  for (int k = 0; k < 16; ++k) {
    CHECK(defuzzify(single_bin(k, 1 + k % 15), v) == bin_center(k, v));
  }
  auto sym = MembershipFunction::from_values({1, 2, 3, 4, 5, 6, 7, 8, 8, 7, 6, 5, 4, 3, 2, 1});
  CHECK(std::abs(*defuzzify(sym, v) - v.midpoint()) < 1e-9);
  std::array<double, 16> zero{};
  CHECK_FALSE(defuzzify(zero, u).has_value());
  std::array<double, 16> tiny{};
  tiny[0] = 1e-300;
  CHECK(*defuzzify(tiny, u) == 0.5);
}

TEST_CASE("single bin consequent gives its center for every input") {
  for (int k = 0; k < 16; ++k) {
    auto chip = create_chip("S", ChipType::Minmax,
                            one_rule(MembershipFunction::any(), single_bin(k), Universe(0, 1),
                                     Universe(-5, 5)));
    for (double x : {0.0, 0.3, 0.99, 7.0}) {
      std::vector<double> in{x};
      CHECK(assert_input(chip, in).outputs[0] == bin_center(k, Universe(-5, 5)));
    }
  }
}

TEST_CASE("boiler at (150, 200) matches the brute-force evaluator") {
  for (auto type : {ChipType::Minmax, ChipType::Multiplicative}) {
    auto chip = testsupport::chip_from_file("boiler", type);
    auto rules = testsupport::to_oracle(chip);
    std::vector<double> in{150, 200};
    auto r = assert_input(chip, in);
    std::vector<int> levels{oracle::quantize(150, 0, 200), oracle::quantize(200, 0, 500)};
    for (int o = 0; o < 2; ++o) {
      std::optional<double> expect;
      if (type == ChipType::Minmax) {
        auto b = oracle::minmax_b(rules, levels, o);
        CHECK(testsupport::to_fn(r.membership.levels()[o]) == b);
        expect = oracle::centroid(b, 0, 10);
      } else {
        expect = oracle::centroid(oracle::product_b(rules, levels, o), 0, 10);
      }
      REQUIRE(r.outputs[o].has_value() == expect.has_value());
      if (expect) CHECK(*r.outputs[o] == doctest::Approx(*expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("inputs outside the universe clamp") {
  auto chip = testsupport::chip_from_file("boiler");
  std::vector<double> out{250, 200}, edge{200, 200};
  auto a = assert_input(chip, out), b = assert_input(chip, edge);
  CHECK(a.outputs == b.outputs);
  CHECK(a.membership == b.membership);
  CHECK_THROWS_AS(assert_input(chip, std::vector<double>{1.0}), Error);
}

TEST_CASE("engine properties on random chips") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    auto rules = testsupport::random_rules(rng, 2, 2, 1 + trial % 16);
    auto chip = create_chip("R", ChipType::Minmax, rules);
    auto mult = create_chip("M", ChipType::Multiplicative, rules);
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) {
        std::vector<int> l{a, b};
        auto r = infer_levels(chip, l);
        // monotonicity: raising one alpha never lowers B
        auto raised = r.activation.levels();
        raised[0] = static_cast<TruthLevel>(std::min(15, raised[0] + 3));
        auto up = output_membership(chip, RuleActivation::minmax(raised));
        for (std::size_t o = 0; o < 2; ++o) {
          for (int k = 0; k < 16; ++k) CHECK(up.levels()[o][k] >= r.membership.levels()[o][k]);
          if (r.outputs[o]) {
            const auto& u = rules.outputs[o].universe;
            CHECK(*r.outputs[o] >= u.lo() + u.width() / 32 - 1e-9);
            CHECK(*r.outputs[o] <= u.hi() - u.width() / 32 + 1e-9);
          }
        }
        auto m = infer_levels(mult, l);
        for (std::size_t o = 0; o < 2; ++o) {
          CHECK(m.outputs[o].has_value() == r.outputs[o].has_value());
        }
      }
    }
  }
}

TEST_CASE("multiplicative centroid does not depend on a positive alpha") {
  auto cons = make_normal(5, 9);
  CompiledRuleSet c = one_rule(MembershipFunction::any(), cons);
  auto chip = create_chip("M", ChipType::Multiplicative, c);
  auto ref = defuzzify(output_membership(chip, RuleActivation::multiplicative({1.0})).reals()[0],
                       Universe(0, 16));
  for (double a : {0.1, 0.25, 0.5, 14.0 / 15.0}) {
    auto y = defuzzify(output_membership(chip, RuleActivation::multiplicative({a})).reals()[0],
                       Universe(0, 16));
    CHECK(*y == doctest::Approx(*ref).epsilon(1e-12));
  }
}

TEST_CASE("assert_input is constant on each quantization cell") {
  auto chip = testsupport::chip_from_file("boiler");
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> frac(0.0, 0.999);
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      std::vector<double> x{(a + frac(rng)) * 200 / 16, (b + frac(rng)) * 500 / 16};
      std::vector<int> l{a, b};
      CHECK(assert_input(chip, x).outputs == infer_levels(chip, l).outputs);
    }
  }
}
