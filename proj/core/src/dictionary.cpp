#include "fuzzyc/dictionary.hpp"

#include <fstream>
#include <sstream>

#include "fuzzyc/error.hpp"
#include "text.hpp"

namespace fuzzyc {

namespace {

struct LineToken {
  std::string_view text;
  int column;
};

std::vector<LineToken> split_line(std::string_view line) {
  std::vector<LineToken> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      tokens.push_back({line.substr(i, 1), static_cast<int>(i) + 1});
      ++i;
    } else {
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
             line[i] != '(' && line[i] != ')') {
        ++i;
      }
      tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
  }
  return tokens;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

bool is_valid_name(std::string_view name) noexcept {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '_' && c != '-') {
      return false;
    }
  }
  return true;
}

std::string canonical_name(std::string_view name) { return detail::to_upper(name); }

bool is_reserved_definition(std::string_view name) {
  return detail::iequals(name, "ANY") || detail::iequals(name, "NULL");
}

void FuzzyDictionary::insert(std::string_view name, const MembershipFunction& m) {
  if (contains(name) && !is_reserved_definition(name)) {
    throw Error(ErrorCategory::Data, "duplicate definition " + canonical_name(name));
  }
  assign(name, m);
}

void FuzzyDictionary::assign(std::string_view name, const MembershipFunction& m) {
  if (!is_valid_name(name)) {
    throw Error(ErrorCategory::Data, "invalid definition name '" + std::string(name) + "'");
  }
  if (is_reserved_definition(name)) {
    throw Error(ErrorCategory::Data, canonical_name(name) + " is a reserved built-in definition");
  }
  entries_.insert_or_assign(canonical_name(name), m);
}

bool FuzzyDictionary::erase(std::string_view name) {
  return entries_.erase(canonical_name(name)) > 0;
}

std::optional<MembershipFunction> FuzzyDictionary::find(std::string_view name) const {
  if (detail::iequals(name, "ANY")) return MembershipFunction::any();
  if (detail::iequals(name, "NULL")) return MembershipFunction::null();
  auto it = entries_.find(canonical_name(name));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> FuzzyDictionary::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, m] : entries_) out.push_back(name);
  return out;
}

FuzzyDictionary parse_dictionary(std::string_view text) {
  FuzzyDictionary dict;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string_view raw =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.starts_with("(*")) {
      if (!line.ends_with(")")) {
        throw ParseError("unterminated comment", {line_no, 1});
      }
      continue;
    }

    const auto tokens = split_line(raw);
    auto fail = [&](std::size_t at, const std::string& msg) -> ParseError {
      const int col = at < tokens.size() ? tokens[at].column : static_cast<int>(raw.size()) + 1;
      return ParseError(msg, {line_no, col});
    };
    // ( DEFINE NAME ( l0 .. l15 ) )
    if (tokens.size() < 5 || tokens[0].text != "(" || !detail::iequals(tokens[1].text, "DEFINE")) {
      throw fail(0, "expected (DEFINE <name> (<16 levels>))");
    }
    const std::string_view name = tokens[2].text;
    if (!is_valid_name(name)) throw fail(2, "invalid definition name '" + std::string(name) + "'");
    if (is_reserved_definition(name)) throw fail(2, canonical_name(name) + " is reserved");
    if (tokens[3].text != "(") throw fail(3, "expected '(' before levels");

    std::vector<int> levels;
    std::size_t i = 4;
    for (; i < tokens.size() && tokens[i].text != ")"; ++i) {
      long long v = 0;
      if (!detail::parse_int(tokens[i].text, v)) {
        throw fail(i, "expected an integer truth level, got '" + std::string(tokens[i].text) + "'");
      }
      if (v < 0 || v > kMaxTruth) {
        throw fail(i, "truth level " + std::to_string(v) + " outside 0..15");
      }
      levels.push_back(static_cast<int>(v));
    }
    if (i >= tokens.size()) throw fail(i, "missing ')' after levels");
    if (levels.size() != kResolution) {
      throw fail(3, "expected exactly 16 levels, got " + std::to_string(levels.size()));
    }
    if (i + 1 >= tokens.size() || tokens[i + 1].text != ")") throw fail(i + 1, "missing closing ')'");
    if (i + 2 != tokens.size()) throw fail(i + 2, "unexpected text after definition");
    if (dict.contains(name)) throw fail(2, "duplicate definition " + canonical_name(name));

    dict.insert(name, MembershipFunction::from_values(levels));
  }
  return dict;
}

std::string format_definition(std::string_view name, const MembershipFunction& m) {
  std::string out = "(DEFINE " + canonical_name(name) + " (";
  for (std::size_t i = 0; i < kResolution; ++i) {
    if (i) out += ' ';
    out += std::to_string(m[i]);
  }
  out += "))";
  return out;
}

std::string format_dictionary(const FuzzyDictionary& dict) {
  std::string out;
  for (const auto& [name, m] : dict.entries()) {
    out += format_definition(name, m);
    out += '\n';
  }
  return out;
}

FuzzyDictionary dictionary_load(const std::filesystem::path& path) {
  return parse_dictionary(detail::read_file(path.string()));
}

void dictionary_save(const FuzzyDictionary& dict, const std::filesystem::path& path) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::Data, "cannot write " + tmp.string());
    out << format_dictionary(dict);
    if (!out) throw Error(ErrorCategory::Data, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace fuzzyc
