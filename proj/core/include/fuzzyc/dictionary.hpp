#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzyc/membership.hpp"

namespace fuzzyc {

/// Named fuzzy variables (HIGH.TEMP, PB, ...). Names are case-insensitive
/// and stored upper-cased; iteration is in name order.
///
/// ANY and NULL are reserved built-ins and cannot be defined.
class FuzzyDictionary {
 public:
  using Map = std::map<std::string, MembershipFunction>;

  /// Adds a definition. Throws fuzzyc::Error on an invalid, reserved or duplicate name.
  void insert(std::string_view name, const MembershipFunction& m);
  /// Adds or overwrites a definition.
  void assign(std::string_view name, const MembershipFunction& m);
  bool erase(std::string_view name);

  /// Dictionary entry, or ANY/NULL for the reserved names.
  std::optional<MembershipFunction> find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const Map& entries() const noexcept { return entries_; }
  std::vector<std::string> names() const;

  friend bool operator==(const FuzzyDictionary&, const FuzzyDictionary&) = default;

 private:
  Map entries_;
};

/// Valid definition/signal identifier: [A-Za-z][A-Za-z0-9._-]*.
bool is_valid_name(std::string_view name) noexcept;
std::string canonical_name(std::string_view name);
bool is_reserved_definition(std::string_view name);

/// Parses `.fzd` text: one `(DEFINE NAME (l0 ... l15))` per line, `(* ... )`
/// comment lines and blank lines allowed. Errors carry the line number.
FuzzyDictionary parse_dictionary(std::string_view text);
std::string format_dictionary(const FuzzyDictionary& dict);
/// One `(DEFINE ...)` line, no trailing newline.
std::string format_definition(std::string_view name, const MembershipFunction& m);

FuzzyDictionary dictionary_load(const std::filesystem::path& path);
void dictionary_save(const FuzzyDictionary& dict, const std::filesystem::path& path);

}  // namespace fuzzyc
