#include "fuzzyc/engine.hpp"

#include <algorithm>

#include "fuzzyc/error.hpp"
#include "text.hpp"

namespace fuzzyc {

namespace {

[[noreturn]] void contract(const std::string& msg) { throw Error(ErrorCategory::Contract, msg); }

void check_levels(const ChipObject& chip, std::span<const int> levels) {
  if (levels.size() != chip.input_count()) {
    throw Error(ErrorCategory::Data, "chip " + chip.name() + " expects " +
                                         std::to_string(chip.input_count()) + " inputs, got " +
                                         std::to_string(levels.size()));
  }
  for (int l : levels) {
    if (l < 0 || l > kMaxTruth) {
      throw Error(ErrorCategory::Data, "input level " + std::to_string(l) + " outside 0..15");
    }
  }
}

// Column offset in bin units scaled back to the universe; shared with bin_center
// so a single-column function lands exactly on its bin center.
double place(double bins, const Universe& u) {
  return u.lo() + bins * u.width() / static_cast<double>(kResolution);
}

}  // namespace

std::string_view to_string(ChipType t) noexcept {
  return t == ChipType::Minmax ? "MINMAX" : "MULTIPLICATIVE";
}

std::optional<ChipType> parse_chip_type(std::string_view s) {
  if (detail::iequals(s, "minmax")) return ChipType::Minmax;
  if (detail::iequals(s, "mult") || detail::iequals(s, "multiplicative")) {
    return ChipType::Multiplicative;
  }
  return std::nullopt;
}

ChipObject::ChipObject(std::string name, ChipType type, CompiledRuleSet compiled)
    : name_(std::move(name)), type_(type), compiled_(std::move(compiled)) {
  if (compiled_.inputs.empty() || compiled_.outputs.empty()) {
    throw Error(ErrorCategory::Data, "chip " + name_ + " needs at least one input and one output");
  }
  if (compiled_.rules.empty()) {
    throw Error(ErrorCategory::Data, "chip " + name_ + " has no rules");
  }
  for (const auto& r : compiled_.rules) {
    if (r.antecedent.size() != compiled_.inputs.size() ||
        r.consequent.size() != compiled_.outputs.size()) {
      throw Error(ErrorCategory::Contract, "compiled rule slot count disagrees with declarations");
    }
  }
}

ChipObject create_chip(std::string name, ChipType type, CompiledRuleSet compiled) {
  return ChipObject(std::move(name), type, std::move(compiled));
}

ChipObject update_chip(const ChipObject& chip, CompiledRuleSet compiled) {
  if (!chip.compiled().same_signature(compiled)) {
    throw Error(ErrorCategory::Data,
                "chip " + chip.name() + ": updated rules change the input/output declarations");
  }
  return ChipObject(chip.name(), chip.type(), std::move(compiled));
}

RuleActivation RuleActivation::minmax(std::vector<TruthLevel> alpha) {
  for (auto a : alpha) {
    if (a > kMaxTruth) contract("activation level above 15");
  }
  RuleActivation r;
  r.type_ = ChipType::Minmax;
  r.levels_ = std::move(alpha);
  return r;
}

RuleActivation RuleActivation::multiplicative(std::vector<double> alpha) {
  for (double a : alpha) {
    if (!(a >= 0.0 && a <= 1.0)) contract("activation strength outside [0, 1]");
  }
  RuleActivation r;
  r.type_ = ChipType::Multiplicative;
  r.strengths_ = std::move(alpha);
  return r;
}

std::size_t RuleActivation::size() const noexcept {
  return type_ == ChipType::Minmax ? levels_.size() : strengths_.size();
}

const std::vector<TruthLevel>& RuleActivation::levels() const {
  if (type_ != ChipType::Minmax) contract("integer activations exist only for Minmax chips");
  return levels_;
}

const std::vector<double>& RuleActivation::strengths() const {
  if (type_ != ChipType::Multiplicative) {
    contract("real activations exist only for Multiplicative chips");
  }
  return strengths_;
}

double RuleActivation::value(std::size_t rule) const {
  return type_ == ChipType::Minmax ? levels_.at(rule) : strengths_.at(rule);
}

OutputMembership OutputMembership::minmax(std::vector<MembershipFunction> outputs) {
  OutputMembership m;
  m.type_ = ChipType::Minmax;
  m.levels_ = std::move(outputs);
  return m;
}

OutputMembership OutputMembership::multiplicative(std::vector<Reals> outputs) {
  OutputMembership m;
  m.type_ = ChipType::Multiplicative;
  m.reals_ = std::move(outputs);
  return m;
}

std::size_t OutputMembership::size() const noexcept {
  return type_ == ChipType::Minmax ? levels_.size() : reals_.size();
}

const std::vector<MembershipFunction>& OutputMembership::levels() const {
  if (type_ != ChipType::Minmax) contract("integer memberships exist only for Minmax chips");
  return levels_;
}

const std::vector<OutputMembership::Reals>& OutputMembership::reals() const {
  if (type_ != ChipType::Multiplicative) {
    contract("real memberships exist only for Multiplicative chips");
  }
  return reals_;
}

OutputMembership::Reals OutputMembership::values(std::size_t output) const {
  if (type_ == ChipType::Multiplicative) return reals_.at(output);
  Reals out{};
  const auto& m = levels_.at(output);
  for (std::size_t k = 0; k < kResolution; ++k) out[k] = m[k];
  return out;
}

RuleActivation rule_strength(const ChipObject& chip, std::span<const int> levels) {
  check_levels(chip, levels);
  const auto& rules = chip.compiled().rules;
  std::vector<TruthLevel> alpha(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    TruthLevel a = kMaxTruth;
    for (std::size_t j = 0; j < levels.size(); ++j) {
      a = std::min(a, rules[i].antecedent[j][static_cast<std::size_t>(levels[j])]);
    }
    alpha[i] = a;
  }
  if (chip.type() == ChipType::Minmax) return RuleActivation::minmax(std::move(alpha));

  std::vector<double> strengths(alpha.size());
  std::transform(alpha.begin(), alpha.end(), strengths.begin(),
                 [](TruthLevel a) { return a / static_cast<double>(kMaxTruth); });
  return RuleActivation::multiplicative(std::move(strengths));
}

OutputMembership output_membership(const ChipObject& chip, const RuleActivation& act) {
  const auto& rules = chip.compiled().rules;
  if (act.size() != rules.size()) {
    contract("activation has " + std::to_string(act.size()) + " entries for " +
             std::to_string(rules.size()) + " rules");
  }
  if (act.type() != chip.type()) contract("activation type does not match chip type");

  const std::size_t outputs = chip.output_count();
  if (chip.type() == ChipType::Minmax) {
    const auto& alpha = act.levels();
    std::vector<MembershipFunction> result;
    result.reserve(outputs);
    for (std::size_t o = 0; o < outputs; ++o) {
      MembershipFunction::Levels b{};
      for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& cons = rules[i].consequent[o];
        for (std::size_t k = 0; k < kResolution; ++k) {
          b[k] = std::max(b[k], std::min(alpha[i], cons[k]));
        }
      }
      result.emplace_back(b);
    }
    return OutputMembership::minmax(std::move(result));
  }

  const auto& alpha = act.strengths();
  std::vector<OutputMembership::Reals> result(outputs);
  for (std::size_t o = 0; o < outputs; ++o) {
    auto& b = result[o];
    b.fill(0.0);
    for (std::size_t i = 0; i < rules.size(); ++i) {
      const auto& cons = rules[i].consequent[o];
      for (std::size_t k = 0; k < kResolution; ++k) {
        b[k] = std::max(b[k], alpha[i] * (cons[k] / static_cast<double>(kMaxTruth)));
      }
    }
  }
  return OutputMembership::multiplicative(std::move(result));
}

std::optional<double> defuzzify(const MembershipFunction& b, const Universe& u) {
  // Exact integer moments: sum b_k (2k + 1) / (2 sum b_k) is the centroid in bin units.
  long long mass = 0;
  long long moment = 0;
  for (std::size_t k = 0; k < kResolution; ++k) {
    mass += b[k];
    moment += static_cast<long long>(b[k]) * static_cast<long long>(2 * k + 1);
  }
  if (mass == 0) return std::nullopt;
  return place(static_cast<double>(moment) / static_cast<double>(2 * mass), u);
}

std::optional<double> defuzzify(std::span<const double, kResolution> b, const Universe& u) {
  // Moments about the first nonzero bin, so a lone bin lands exactly on its center.
  std::size_t first = 0;
  while (first < kResolution && !(b[first] > 0.0)) ++first;
  if (first == kResolution) return std::nullopt;
  double mass = 0.0;
  double moment = 0.0;
  for (std::size_t k = first; k < kResolution; ++k) {
    mass += b[k];
    moment += b[k] * static_cast<double>(k - first);
  }
  const double bins = std::clamp(first + 0.5 + moment / mass, 0.5, kResolution - 0.5);
  return place(bins, u);
}

InferenceResult infer_levels(const ChipObject& chip, std::span<const int> levels) {
  RuleActivation act = rule_strength(chip, levels);
  OutputMembership membership = output_membership(chip, act);
  CrispOutput crisp(chip.output_count());
  for (std::size_t o = 0; o < crisp.size(); ++o) {
    const Universe& u = chip.compiled().outputs[o].universe;
    crisp[o] = chip.type() == ChipType::Minmax ? defuzzify(membership.levels()[o], u)
                                               : defuzzify(membership.reals()[o], u);
  }
  return {std::move(crisp), std::move(membership), std::move(act)};
}

InferenceResult assert_input(const ChipObject& chip, std::span<const double> inputs) {
  if (inputs.size() != chip.input_count()) {
    throw Error(ErrorCategory::Data, "chip " + chip.name() + " expects " +
                                         std::to_string(chip.input_count()) + " inputs, got " +
                                         std::to_string(inputs.size()));
  }
  std::vector<int> levels(inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    levels[j] = quantize(inputs[j], chip.compiled().inputs[j].universe);
  }
  return infer_levels(chip, levels);
}

}  // namespace fuzzyc
