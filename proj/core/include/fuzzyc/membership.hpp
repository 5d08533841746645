#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

namespace fuzzyc {

/// Number of discretization columns of a membership function.
inline constexpr std::size_t kResolution = 16;
/// Largest truth value a single column can hold (4-bit).
inline constexpr int kMaxTruth = 15;

using TruthLevel = std::uint8_t;

/// Closed real interval [lo, hi] a signal ranges over, in physical units.
class Universe {
 public:
  /// Throws fuzzyc::Error unless lo < hi and both are finite.
  Universe(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept { return lo_ + (hi_ - lo_) / 2.0; }
  bool contains(const Universe& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend bool operator==(const Universe&, const Universe&) = default;

 private:
  double lo_;
  double hi_;
};

/// 16 truth levels, each 0..15, indexed by discretization column.
class MembershipFunction {
 public:
  using Levels = std::array<TruthLevel, kResolution>;

  /// All-zero function (same as null()).
  constexpr MembershipFunction() noexcept : levels_{} {}

  /// Throws fuzzyc::Error if any level exceeds kMaxTruth.
  explicit MembershipFunction(const Levels& levels);
  /// Throws fuzzyc::Error unless exactly 16 values, each in 0..15.
  static MembershipFunction from_values(std::span<const int> values);
  static MembershipFunction from_values(std::initializer_list<int> values);

  /// ANY: every column at full truth; never lowers a rule's activation.
  static constexpr MembershipFunction any() noexcept {
    MembershipFunction m;
    m.levels_.fill(static_cast<TruthLevel>(kMaxTruth));
    return m;
  }
  /// NULL: every column at zero truth.
  static constexpr MembershipFunction null() noexcept { return {}; }

  TruthLevel operator[](std::size_t i) const noexcept { return levels_[i]; }
  const Levels& levels() const noexcept { return levels_; }
  auto begin() const noexcept { return levels_.begin(); }
  auto end() const noexcept { return levels_.end(); }
  static constexpr std::size_t size() noexcept { return kResolution; }

  TruthLevel max_level() const noexcept;

  friend bool operator==(const MembershipFunction&, const MembershipFunction&) = default;

 private:
  Levels levels_;
};

enum class Adverb { Very, Somewhat, Above, Below };

std::string_view to_string(Adverb a) noexcept;

/// Map a physical value to its discretization column with floor-and-clamp.
/// Values outside the universe clamp to column 0 or 15; NaN maps to 0.
int quantize(double x, const Universe& u) noexcept;

/// Center of column `level` in physical units. Throws fuzzyc::Error if level is not 0..15.
double bin_center(int level, const Universe& u);

/// Gaussian peaked at `center` with the tail column placed at three sigma.
/// Throws fuzzyc::Error when center == tail or either lies outside 0..15.
MembershipFunction make_normal(int center, int tail);

/// Symmetric triangle peaked at `center`, reaching zero at distance |tail - center|.
MembershipFunction make_triangle(int center, int tail);

/// VERY squares, SOMEWHAT takes the square root, ABOVE/BELOW complement the
/// function on the far side of its peak and zero everything up to it.
MembershipFunction apply_adverb(Adverb a, const MembershipFunction& m);

/// Round half away from zero of the non-negative rational num/den.
constexpr int round_ratio(long long num, long long den) noexcept {
  return static_cast<int>((2 * num + den) / (2 * den));
}

}  // namespace fuzzyc
