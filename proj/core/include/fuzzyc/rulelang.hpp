#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fuzzyc/dictionary.hpp"
#include "fuzzyc/error.hpp"
#include "fuzzyc/membership.hpp"

namespace fuzzyc {

enum class Direction { Input, Output };

struct SignalDecl {
  std::string name;  // upper-cased
  Universe universe;
  Direction direction = Direction::Input;
  std::size_t position = 0;  // ordinal within its direction
  SourcePos pos;

  friend bool operator==(const SignalDecl& a, const SignalDecl& b) {
    return a.name == b.name && a.universe == b.universe && a.direction == b.direction &&
           a.position == b.position;
  }
};

/// `SIGNAL IS [adverb...] ADJECTIVE`. Adverbs are kept in source order; the
/// one adjacent to the adjective applies first.
struct Clause {
  std::string signal;
  std::vector<Adverb> adverbs;
  std::string adjective;
  SourcePos pos;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.signal == b.signal && a.adverbs == b.adverbs && a.adjective == b.adjective;
  }
};

using Conjunction = std::vector<Clause>;

/// Antecedent in disjunctive normal form; a conjunctive rule has one disjunct.
struct Rule {
  std::vector<Conjunction> antecedent;
  Conjunction consequent;
  SourcePos pos;

  bool conjunctive() const noexcept { return antecedent.size() == 1; }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.antecedent == b.antecedent && a.consequent == b.consequent;
  }
};

struct RuleSet {
  std::vector<SignalDecl> inputs;
  std::vector<SignalDecl> outputs;
  std::vector<Rule> rules;
  std::string source_name;

  /// Declaration for a signal name (case-insensitive), or nullptr.
  const SignalDecl* find_signal(std::string_view name) const;
  std::size_t disjunct_count() const noexcept;

  /// Structural equality; the source name and positions are not compared.
  friend bool operator==(const RuleSet& a, const RuleSet& b) {
    return a.inputs == b.inputs && a.outputs == b.outputs && a.rules == b.rules;
  }
};

/// One conjunctive rule with every declared position filled.
struct CompiledRule {
  std::vector<MembershipFunction> antecedent;  // one per input position
  std::vector<MembershipFunction> consequent;  // one per output position

  friend bool operator==(const CompiledRule&, const CompiledRule&) = default;
};

struct CompiledRuleSet {
  std::vector<SignalDecl> inputs;
  std::vector<SignalDecl> outputs;
  std::vector<CompiledRule> rules;

  /// Same declarations (names, universes, order) as `other`.
  bool same_signature(const CompiledRuleSet& other) const {
    return inputs == other.inputs && outputs == other.outputs;
  }

  friend bool operator==(const CompiledRuleSet&, const CompiledRuleSet&) = default;
};

/// Parses rule-file text. Throws ParseError (with line/column) on lexical
/// errors, unbalanced parentheses, unknown or misdirected signals, duplicate
/// declarations and repeated signals within one conjunction.
RuleSet parse_rules(std::string_view text, std::string source_name = {});
RuleSet load_rules(const std::string& path);

/// Splits every disjunctive rule into one conjunctive rule per disjunct, in place.
RuleSet normalize(RuleSet rs);

/// Looks up adjectives and applies adverbs. Unmentioned inputs become ANY,
/// unmentioned outputs NULL. Requires a normalized rule set.
CompiledRuleSet resolve(const RuleSet& rs, const FuzzyDictionary& dict);

/// Canonical text: upper-case keywords, one rule per form, no comments.
std::string format_rules(const RuleSet& rs);

/// Non-fatal findings, e.g. declared signals no rule mentions.
std::vector<Diagnostic> lint(const RuleSet& rs);

}  // namespace fuzzyc
