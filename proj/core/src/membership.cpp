#include "fuzzyc/membership.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "fuzzyc/error.hpp"

namespace fuzzyc {

namespace {

void check_column(int column, const char* what) {
  if (column < 0 || column >= static_cast<int>(kResolution)) {
    throw Error(ErrorCategory::Data,
                std::string(what) + " column " + std::to_string(column) + " outside 0..15");
  }
}

void check_generator_args(int center, int tail) {
  check_column(center, "center");
  check_column(tail, "tail");
  if (center == tail) {
    throw Error(ErrorCategory::Data, "degenerate distribution: center and tail are both column " +
                                         std::to_string(center));
  }
}

TruthLevel clamp_truth(long value) {
  return static_cast<TruthLevel>(std::clamp<long>(value, 0, kMaxTruth));
}

}  // namespace

Universe::Universe(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw Error(ErrorCategory::Data, "invalid universe (" + std::to_string(lo) + " " +
                                         std::to_string(hi) + "): lower bound must be below upper");
  }
}

MembershipFunction::MembershipFunction(const Levels& levels) : levels_(levels) {
  for (auto level : levels_) {
    if (level > kMaxTruth) {
      throw Error(ErrorCategory::Data,
                  "truth level " + std::to_string(level) + " outside 0..15");
    }
  }
}

MembershipFunction MembershipFunction::from_values(std::span<const int> values) {
  if (values.size() != kResolution) {
    throw Error(ErrorCategory::Data, "membership function needs exactly 16 levels, got " +
                                         std::to_string(values.size()));
  }
  Levels levels{};
  for (std::size_t i = 0; i < kResolution; ++i) {
    if (values[i] < 0 || values[i] > kMaxTruth) {
      throw Error(ErrorCategory::Data,
                  "truth level " + std::to_string(values[i]) + " outside 0..15");
    }
    levels[i] = static_cast<TruthLevel>(values[i]);
  }
  return MembershipFunction(levels);
}

MembershipFunction MembershipFunction::from_values(std::initializer_list<int> values) {
  return from_values(std::span<const int>(values.begin(), values.size()));
}

TruthLevel MembershipFunction::max_level() const noexcept {
  return *std::max_element(levels_.begin(), levels_.end());
}

std::string_view to_string(Adverb a) noexcept {
  switch (a) {
    case Adverb::Very: return "VERY";
    case Adverb::Somewhat: return "SOMEWHAT";
    case Adverb::Above: return "ABOVE";
    case Adverb::Below: return "BELOW";
  }
  return "?";
}

int quantize(double x, const Universe& u) noexcept {
  if (std::isnan(x)) return 0;
  const double scaled = std::floor((x - u.lo()) / u.width() * static_cast<double>(kResolution));
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(kResolution - 1)));
}

double bin_center(int level, const Universe& u) {
  check_column(level, "level");
  return u.lo() + (level + 0.5) * u.width() / static_cast<double>(kResolution);
}

MembershipFunction make_normal(int center, int tail) {
  check_generator_args(center, tail);
  const double width = std::abs(tail - center);
  MembershipFunction::Levels levels{};
  for (int i = 0; i < static_cast<int>(kResolution); ++i) {
    const double d = i - center;
    // sigma = width / 3, so d^2 / (2 sigma^2) = 9 d^2 / (2 width^2)
    const double truth = kMaxTruth * std::exp(-9.0 * d * d / (2.0 * width * width));
    levels[i] = clamp_truth(std::lround(truth));
  }
  return MembershipFunction(levels);
}

MembershipFunction make_triangle(int center, int tail) {
  check_generator_args(center, tail);
  const int width = std::abs(tail - center);
  MembershipFunction::Levels levels{};
  for (int i = 0; i < static_cast<int>(kResolution); ++i) {
    const int remaining = width - std::abs(i - center);
    levels[i] = remaining <= 0 ? 0 : clamp_truth(round_ratio(kMaxTruth * remaining, width));
  }
  return MembershipFunction(levels);
}

MembershipFunction apply_adverb(Adverb a, const MembershipFunction& m) {
  MembershipFunction::Levels out{};
  switch (a) {
    case Adverb::Very:
      // 15 * (l / 15)^2 == l^2 / 15
      for (std::size_t i = 0; i < kResolution; ++i) {
        out[i] = clamp_truth(round_ratio(m[i] * m[i], kMaxTruth));
      }
      break;
    case Adverb::Somewhat:
      // 15 * sqrt(l / 15) == sqrt(15 l); never exactly on a half
      for (std::size_t i = 0; i < kResolution; ++i) {
        out[i] = clamp_truth(std::lround(std::sqrt(static_cast<double>(kMaxTruth * m[i]))));
      }
      break;
    case Adverb::Above: {
      const auto peak = static_cast<std::size_t>(
          std::max_element(m.begin(), m.end()) - m.begin());
      for (std::size_t i = peak + 1; i < kResolution; ++i) out[i] = kMaxTruth - m[i];
      break;
    }
    case Adverb::Below: {
      const auto rpeak = std::max_element(m.levels().rbegin(), m.levels().rend());
      const auto peak = kResolution - 1 - static_cast<std::size_t>(rpeak - m.levels().rbegin());
      for (std::size_t i = 0; i < peak; ++i) out[i] = kMaxTruth - m[i];
      break;
    }
  }
  return MembershipFunction(out);
}

}  // namespace fuzzyc
