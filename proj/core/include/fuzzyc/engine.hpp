#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyc/membership.hpp"
#include "fuzzyc/rulelang.hpp"

namespace fuzzyc {

/// How rule consequents are combined: max of min, or max of product.
enum class ChipType { Minmax, Multiplicative };

std::string_view to_string(ChipType t) noexcept;
/// Accepts "minmax", "mult", "multiplicative" (any case).
std::optional<ChipType> parse_chip_type(std::string_view s);

/// A named inference unit holding an immutable snapshot of compiled rules.
class ChipObject {
 public:
  /// Throws fuzzyc::Error if the rule set has no rules, no inputs or outputs,
  /// or rules whose slot counts disagree with the declarations.
  ChipObject(std::string name, ChipType type, CompiledRuleSet compiled);

  const std::string& name() const noexcept { return name_; }
  ChipType type() const noexcept { return type_; }
  const CompiledRuleSet& compiled() const noexcept { return compiled_; }
  std::size_t input_count() const noexcept { return compiled_.inputs.size(); }
  std::size_t output_count() const noexcept { return compiled_.outputs.size(); }
  std::size_t rule_count() const noexcept { return compiled_.rules.size(); }

 private:
  std::string name_;
  ChipType type_;
  CompiledRuleSet compiled_;
};

ChipObject create_chip(std::string name, ChipType type, CompiledRuleSet compiled);
/// Replacement snapshot with new rules; declarations must be unchanged.
ChipObject update_chip(const ChipObject& chip, CompiledRuleSet compiled);

/// Per-rule antecedent truth. Minmax chips keep the integer minimum;
/// multiplicative chips carry a real strength in [0, 1].
class RuleActivation {
 public:
  static RuleActivation minmax(std::vector<TruthLevel> alpha);
  static RuleActivation multiplicative(std::vector<double> alpha);

  ChipType type() const noexcept { return type_; }
  std::size_t size() const noexcept;
  const std::vector<TruthLevel>& levels() const;
  const std::vector<double>& strengths() const;
  /// Truth level (Minmax) or strength (Multiplicative) as a real.
  double value(std::size_t rule) const;

  friend bool operator==(const RuleActivation&, const RuleActivation&) = default;

 private:
  ChipType type_ = ChipType::Minmax;
  std::vector<TruthLevel> levels_;
  std::vector<double> strengths_;
};

/// Output membership functions B(y), one 16-column vector per output.
class OutputMembership {
 public:
  using Reals = std::array<double, kResolution>;

  static OutputMembership minmax(std::vector<MembershipFunction> outputs);
  static OutputMembership multiplicative(std::vector<Reals> outputs);

  ChipType type() const noexcept { return type_; }
  std::size_t size() const noexcept;
  const std::vector<MembershipFunction>& levels() const;
  const std::vector<Reals>& reals() const;
  /// Column values of one output as reals (truth units for Minmax, [0,1] otherwise).
  Reals values(std::size_t output) const;

  friend bool operator==(const OutputMembership&, const OutputMembership&) = default;

 private:
  ChipType type_ = ChipType::Minmax;
  std::vector<MembershipFunction> levels_;
  std::vector<Reals> reals_;
};

/// One crisp value per output; nullopt marks NO-ACTIVATION (no rule fired).
using CrispOutput = std::vector<std::optional<double>>;

struct InferenceResult {
  CrispOutput outputs;
  OutputMembership membership;
  RuleActivation activation;
};

/// Rule activations at quantized input levels (one 0..15 level per input).
RuleActivation rule_strength(const ChipObject& chip, std::span<const int> levels);
/// Combines consequents: max-min for Minmax, max-product for Multiplicative.
OutputMembership output_membership(const ChipObject& chip, const RuleActivation& act);

/// Discrete centroid over bin centers; nullopt when the function is all zero.
std::optional<double> defuzzify(const MembershipFunction& b, const Universe& u);
std::optional<double> defuzzify(std::span<const double, kResolution> b, const Universe& u);

InferenceResult infer_levels(const ChipObject& chip, std::span<const int> levels);
/// quantize -> rule_strength -> output_membership -> defuzzify for each output.
InferenceResult assert_input(const ChipObject& chip, std::span<const double> inputs);

}  // namespace fuzzyc
