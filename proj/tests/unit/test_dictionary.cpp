#include "doctest.h"
#include "fuzzyc/dictionary.hpp"
#include "fuzzyc/error.hpp"
#include "support.hpp"

using namespace fuzzyc;

namespace {

ParseError parse_error(std::string_view text) {
  try {
    parse_dictionary(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("", {});
}

}  // namespace

TEST_CASE("names") {
  CHECK(is_valid_name("HIGH.TEMP"));
  CHECK(is_valid_name("x1_a-b"));
  CHECK_FALSE(is_valid_name("1X"));
  CHECK_FALSE(is_valid_name(""));
  CHECK_FALSE(is_valid_name("A B"));
  CHECK(canonical_name("high.temp") == "HIGH.TEMP");
  CHECK(is_reserved_definition("any"));
  CHECK(is_reserved_definition("Null"));
  CHECK_FALSE(is_reserved_definition("NS"));
}

TEST_CASE("insert, assign and lookup") {
  FuzzyDictionary d;
  d.insert("low", make_triangle(0, 4));
  CHECK(d.find("LOW") == make_triangle(0, 4));
  CHECK_THROWS_AS(d.insert("Low", make_triangle(0, 5)), Error);
  CHECK_THROWS_AS(d.insert("ANY", MembershipFunction::null()), Error);
  CHECK_THROWS_AS(d.assign("NULL", MembershipFunction::null()), Error);
  CHECK_THROWS_AS(d.assign("bad name", MembershipFunction::null()), Error);
  d.assign("LOW", make_triangle(0, 5));
  CHECK(d.find("low") == make_triangle(0, 5));
  CHECK(d.find("ANY") == MembershipFunction::any());
  CHECK(d.find("null") == MembershipFunction::null());
  CHECK_FALSE(d.find("MISSING").has_value());
  CHECK(d.size() == 1);
  CHECK(d.erase("low"));
  CHECK_FALSE(d.erase("low"));
  CHECK(d.empty());
}

TEST_CASE("save then load of a 3-entry dictionary") {
  FuzzyDictionary d;
  d.insert("LOW", make_triangle(0, 4));
  d.insert("MEDIUM", make_normal(8, 14));
  d.insert("HIGH.TEMP", make_triangle(15, 10));
  testsupport::TempDir tmp;
  dictionary_save(d, tmp / "defs.fzd");
  CHECK(dictionary_load(tmp / "defs.fzd") == d);
  CHECK(parse_dictionary(format_dictionary(d)) == d);
  CHECK_FALSE(std::filesystem::exists(tmp / "defs.fzd.tmp"));
}

TEST_CASE("format of one definition") {
  CHECK(format_definition("ns", MembershipFunction::from_values(
                                    {0, 0, 0, 5, 10, 15, 10, 5, 0, 0, 0, 0, 0, 0, 0, 0})) ==
        "(DEFINE NS (0 0 0 5 10 15 10 5 0 0 0 0 0 0 0 0))");
}

TEST_CASE("parser accepts comments, blank lines and lower case") {
  auto d = parse_dictionary(
      "(* header comment)\n\n"
      "  (define low (15 15 0 0 0 0 0 0 0 0 0 0 0 0 0 0))\n"
      "(DEFINE HIGH ( 0 0 0 0 0 0 0 0 0 0 0 0 0 0 15 15 ) )\n");
  CHECK(d.size() == 2);
  CHECK((*d.find("HIGH"))[15] == 15);
}

TEST_CASE("parser rejects malformed definitions with positions") {
  auto e = parse_error("(DEFINE A (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0))\n");
  CHECK(e.position()->line == 1);
  CHECK(std::string(e.what()).find("16 levels") != std::string::npos);

  e = parse_error("\n(DEFINE A (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 16))\n");
  CHECK(e.position()->line == 2);
  CHECK(std::string(e.what()).find("outside 0..15") != std::string::npos);

  e = parse_error(
      "(DEFINE A (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 1))\n"
      "(DEFINE a (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 2))\n");
  CHECK(e.position()->line == 2);
  CHECK(std::string(e.what()).find("duplicate") != std::string::npos);

  CHECK_THROWS_AS(parse_dictionary("(DEFINE ANY (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0))"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("(DEFINE A (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 x))"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("(DEFINE A (0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0)"), ParseError);
  CHECK_THROWS_AS(parse_dictionary("(* open comment"), ParseError);
}

TEST_CASE("test corpus dictionary loads") {
  const auto& d = testsupport::defs();
  CHECK(d.contains("NS"));
  CHECK(d.contains("HIGH.TEMP"));
  CHECK(d.size() >= 10);
  CHECK_THROWS_AS(dictionary_load("/nonexistent/defs.fzd"), Error);
}
