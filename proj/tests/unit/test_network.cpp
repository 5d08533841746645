#include <random>

#include "doctest.h"
#include "fuzzyc/error.hpp"
#include "fuzzyc/network.hpp"
#include "support.hpp"

using namespace fuzzyc;
using testsupport::signal;

namespace {

// One input on [0, 16); fires only when the input quantizes to level 0..3.
ChipObject low_only(const std::string& name, double out_lo = 0, double out_hi = 16) {
  CompiledRuleSet c;
  c.inputs = {signal("X", 0, 16, Direction::Input, 0)};
  c.outputs = {signal("Y", out_lo, out_hi, Direction::Output, 0)};
  c.rules.push_back({{make_triangle(0, 4)}, {make_triangle(8, 12)}});
  return create_chip(name, ChipType::Minmax, c);
}

std::string error_of(ChipNetwork& net, const Connection& c) {
  try {
    net.connect(c);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("fan-out, cycles and double drivers") {
  ChipNetwork net;
  net.add_chip(low_only("A"));
  net.add_chip(low_only("B"));
  net.add_chip(low_only("C"));
  CHECK_THROWS_AS(net.add_chip(low_only("A")), Error);

  CHECK(net.connect({"A", 0, "B", 0}).empty());
  CHECK(net.connect({"A", 0, "C", 0}).empty());
  CHECK(net.connections().size() == 2);

  CHECK(error_of(net, {"B", 0, "A", 0}).find("cycle") != std::string::npos);
  CHECK(error_of(net, {"C", 0, "B", 0}).find("already has a driver") != std::string::npos);
  CHECK(error_of(net, {"A", 0, "A", 0}).find("cycle") != std::string::npos);
  CHECK(error_of(net, {"Z", 0, "A", 0}).find("unknown chip") != std::string::npos);
  CHECK(error_of(net, {"A", 1, "B", 0}).find("no output") != std::string::npos);
  CHECK(error_of(net, {"B", 0, "A", 3}).find("no input") != std::string::npos);
  CHECK(net.connections().size() == 2);
}

TEST_CASE("universe mismatch gives a warning") {
  ChipNetwork net;
  net.add_chip(low_only("A", 0, 100));
  net.add_chip(low_only("B"));
  auto w = net.connect({"A", 0, "B", 0});
  REQUIRE(w.size() == 1);
  CHECK(w[0].severity == Severity::Warning);
}

TEST_CASE("single chip network equals assert_input") {
  auto chip = testsupport::chip_from_file("boiler");
  ChipNetwork net;
  net.add_chip(chip);
  auto ext = net.external_inputs();
  REQUIRE(ext.size() == 2);
  auto r = net.propagate({{{"boiler", 0}, 150.0}, {{"boiler", 1}, 200.0}});
  auto direct = assert_input(chip, std::vector<double>{150, 200}).outputs;
  CHECK(r.outputs.at({"boiler", 0}) == direct[0]);
  CHECK(r.outputs.at({"boiler", 1}) == direct[1]);
  CHECK(r.order == std::vector<std::string>{"boiler"});
}

TEST_CASE("missing and extra external inputs") {
  ChipNetwork net;
  net.add_chip(low_only("A"));
  net.add_chip(low_only("B"));
  net.connect({"A", 0, "B", 0});
  try {
    net.propagate({});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("A.in0") != std::string::npos);
  }
  CHECK_THROWS_AS(net.propagate({{{"A", 0}, 1.0}, {{"B", 0}, 1.0}}), Error);
  CHECK_THROWS_AS(net.propagate({{{"A", 0}, 1.0}, {{"Q", 0}, 1.0}}), Error);
}

TEST_CASE("cascade equals manual composition") {
  auto a = testsupport::chip_from_file("cascade_a");
  auto b = testsupport::chip_from_file("cascade_b");
  ChipNetwork net;
  net.add_chip(b);
  net.add_chip(a);
  CHECK(net.connect({"cascade_a", 0, "cascade_b", 0}).empty());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> t(0, 200), p(0, 500), f(0, 100);
  for (int i = 0; i < 200; ++i) {
    double x1 = t(rng), x2 = p(rng), x3 = f(rng);
    auto r = net.propagate({{{"cascade_a", 0}, x1}, {{"cascade_a", 1}, x2}, {{"cascade_b", 1}, x3}});
    auto mid = assert_input(a, std::vector<double>{x1, x2}).outputs[0];
    std::optional<double> expect;
    if (mid) expect = assert_input(b, std::vector<double>{*mid, x3}).outputs[0];
    CHECK(r.outputs.at({"cascade_b", 0}) == expect);
    CHECK(r.order == std::vector<std::string>{"cascade_a", "cascade_b"});
  }
}

TEST_CASE("NO-ACTIVATION is absorbing downstream and leaves other chips alone") {
  ChipNetwork net;
  net.add_chip(low_only("A"));
  net.add_chip(low_only("B"));
  net.add_chip(low_only("C"));
  net.connect({"A", 0, "B", 0});
  auto r = net.propagate({{{"A", 0}, 12.0}, {{"C", 0}, 1.0}});
  CHECK_FALSE(r.outputs.at({"A", 0}).has_value());
  CHECK_FALSE(r.outputs.at({"B", 0}).has_value());
  CHECK(r.outputs.at({"C", 0}).has_value());
  CHECK(r.order.size() == 3);
}

TEST_CASE("disconnect restores prior behaviour") {
  ChipNetwork net;
  net.add_chip(low_only("A"));
  net.add_chip(low_only("B"));
  auto before = net.propagate({{{"A", 0}, 1.0}, {{"B", 0}, 2.0}});
  net.connect({"A", 0, "B", 0});
  CHECK(net.disconnect({"A", 0, "B", 0}));
  CHECK_FALSE(net.disconnect({"A", 0, "B", 0}));
  CHECK(net.propagate({{{"A", 0}, 1.0}, {{"B", 0}, 2.0}}).outputs == before.outputs);
}

TEST_CASE("result does not depend on insertion order") {
  auto build = [](bool reversed) {
    ChipNetwork net;
    std::vector<std::string> names{"P", "Q", "R"};
    if (reversed) std::reverse(names.begin(), names.end());
    for (const auto& n : names) net.add_chip(low_only(n));
    net.connect({"P", 0, "Q", 0});
    net.connect({"Q", 0, "R", 0});
    return net.propagate({{{"P", 0}, 2.5}});
  };
  auto x = build(false), y = build(true);
  CHECK(x.outputs == y.outputs);
  CHECK(x.order == y.order);
}

TEST_CASE("replace_chip keeps connections and requires the same signature") {
  ChipNetwork net;
  net.add_chip(low_only("A"));
  net.add_chip(low_only("B"));
  net.connect({"A", 0, "B", 0});
  net.replace_chip(low_only("A"));
  CHECK(net.connections().size() == 1);
  CHECK_THROWS_AS(net.replace_chip(low_only("A", 0, 100)), Error);
  CHECK_THROWS_AS(net.replace_chip(low_only("Z")), Error);
}
