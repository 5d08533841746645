#include "fuzzyc/rulelang.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>

#include "lexer.hpp"
#include "text.hpp"

namespace fuzzyc {

namespace {

using detail::iequals;
using detail::Token;
using detail::TokenKind;

constexpr std::string_view kKeywords[] = {"IF", "THEN", "AND", "OR", "IS", "INPUT", "OUTPUT"};

bool is_keyword(std::string_view s) {
  return std::any_of(std::begin(kKeywords), std::end(kKeywords),
                     [&](std::string_view k) { return iequals(s, k); });
}

std::optional<Adverb> adverb_from(std::string_view s) {
  if (iequals(s, "VERY")) return Adverb::Very;
  if (iequals(s, "SOMEWHAT")) return Adverb::Somewhat;
  if (iequals(s, "ABOVE")) return Adverb::Above;
  if (iequals(s, "BELOW")) return Adverb::Below;
  return std::nullopt;
}

std::vector<Conjunction> conjoin(const std::vector<Conjunction>& a,
                                 const std::vector<Conjunction>& b) {
  std::vector<Conjunction> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      Conjunction c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
    }
  }
  return out;
}

void check_unique_signals(const Conjunction& conj, std::string_view where) {
  for (std::size_t i = 0; i < conj.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (conj[i].signal == conj[j].signal) {
        throw ParseError("signal " + conj[i].signal + " appears twice in one " +
                             std::string(where),
                         conj[i].pos);
      }
    }
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(detail::tokenize(text)) {}

  RuleSet parse_file() {
    RuleSet rs;
    rs_ = &rs;
    if (peek().kind == TokenKind::End) throw error("no rules: file has no declarations");
    parse_declaration(Direction::Input, "INPUT");
    parse_declaration(Direction::Output, "OUTPUT");
    while (peek().kind != TokenKind::End) {
      rs.rules.push_back(parse_rule());
    }
    if (rs.rules.empty()) throw error("no rules");
    return rs;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(i_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = tokens_[i_];
    if (i_ + 1 < tokens_.size()) ++i_;
    return t;
  }

  ParseError error(const std::string& msg) const { return ParseError(msg, peek().pos); }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::LParen: return "'('";
      case TokenKind::RParen: return "')'";
      case TokenKind::End: return "end of file";
      case TokenKind::Symbol: return "'" + std::string(t.text) + "'";
    }
    return "?";
  }

  void expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind) {
      throw error("expected " + std::string(what) + ", found " + describe(peek()));
    }
    next();
  }

  bool at_keyword(std::string_view kw, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Symbol && iequals(t.text, kw);
  }

  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) throw error("expected " + std::string(kw) + ", found " + describe(peek()));
    next();
  }

  const Token& expect_name(std::string_view what) {
    const Token& t = peek();
    if (t.kind != TokenKind::Symbol || is_keyword(t.text) || !is_valid_name(t.text)) {
      throw error("expected " + std::string(what) + ", found " + describe(t));
    }
    return next();
  }

  double expect_number() {
    const Token& t = peek();
    double v = 0;
    if (t.kind != TokenKind::Symbol || !detail::parse_real(t.text, v)) {
      throw error("expected a number, found " + describe(t));
    }
    next();
    return v;
  }

  void parse_declaration(Direction dir, std::string_view keyword) {
    expect(TokenKind::LParen, "'(' starting the " + std::string(keyword) + " declaration");
    expect_keyword(keyword);
    auto& list = dir == Direction::Input ? rs_->inputs : rs_->outputs;
    do {
      const Token& name_tok = expect_name("a signal name");
      const std::string name = canonical_name(name_tok.text);
      if (rs_->find_signal(name)) {
        throw ParseError("duplicate declaration of " + name, name_tok.pos);
      }
      expect(TokenKind::LParen, "'(' starting the universe of " + name);
      const SourcePos range_pos = peek().pos;
      const double lo = expect_number();
      const double hi = expect_number();
      expect(TokenKind::RParen, "')' closing the universe of " + name);
      if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw ParseError("universe of " + name + " must be finite with lower bound below upper",
                         range_pos);
      }
      list.push_back(SignalDecl{name, Universe(lo, hi), dir, list.size(), name_tok.pos});
    } while (peek().kind == TokenKind::Symbol);
    expect(TokenKind::RParen, "')' closing the " + std::string(keyword) + " declaration");
  }

  Rule parse_rule() {
    Rule rule;
    rule.pos = peek().pos;
    expect(TokenKind::LParen, "'(' starting a rule");
    if (at_keyword("INPUT") || at_keyword("OUTPUT")) {
      throw error("declarations must come before all rules, once each");
    }
    expect_keyword("IF");
    rule.antecedent = parse_or();
    for (const auto& d : rule.antecedent) check_unique_signals(d, "conjunction");
    expect_keyword("THEN");
    rule.consequent = parse_consequent();
    check_unique_signals(rule.consequent, "consequent");
    expect(TokenKind::RParen, "')' closing the rule");
    return rule;
  }

  // AND binds tighter than OR; the result is already in DNF.
  std::vector<Conjunction> parse_or() {
    auto dnf = parse_and();
    while (at_keyword("OR")) {
      next();
      auto rhs = parse_and();
      dnf.insert(dnf.end(), rhs.begin(), rhs.end());
    }
    return dnf;
  }

  std::vector<Conjunction> parse_and() {
    auto dnf = parse_factor();
    while (at_keyword("AND")) {
      next();
      dnf = conjoin(dnf, parse_factor());
    }
    return dnf;
  }

  std::vector<Conjunction> parse_factor() {
    if (peek().kind == TokenKind::LParen) {
      next();
      auto inner = parse_or();
      expect(TokenKind::RParen, "')' closing the group");
      return inner;
    }
    return {Conjunction{parse_clause(Direction::Input)}};
  }

  Conjunction parse_consequent() {
    Conjunction conj;
    conj.push_back(parse_clause(Direction::Output));
    while (at_keyword("AND")) {
      next();
      conj.push_back(parse_clause(Direction::Output));
    }
    if (at_keyword("OR")) throw error("OR is not allowed in a consequent");
    return conj;
  }

  Clause parse_clause(Direction dir) {
    Clause clause;
    clause.pos = peek().pos;
    const Token& sig_tok = expect_name("a signal name");
    clause.signal = canonical_name(sig_tok.text);
    const SignalDecl* decl = rs_->find_signal(clause.signal);
    if (!decl) throw ParseError("unknown signal " + clause.signal, sig_tok.pos);
    if (decl->direction != dir) {
      throw ParseError(dir == Direction::Input
                           ? "output signal " + clause.signal + " used in an antecedent"
                           : "input signal " + clause.signal + " used in a consequent",
                       sig_tok.pos);
    }
    expect_keyword("IS");

    std::vector<const Token*> words;
    while (peek().kind == TokenKind::Symbol && !is_keyword(peek().text)) {
      words.push_back(&next());
    }
    if (words.empty()) throw error("expected an adjective after IS, found " + describe(peek()));
    for (std::size_t w = 0; w + 1 < words.size(); ++w) {
      auto adverb = adverb_from(words[w]->text);
      if (!adverb) {
        throw ParseError("unknown adverb " + canonical_name(words[w]->text), words[w]->pos);
      }
      clause.adverbs.push_back(*adverb);
    }
    const Token& adj = *words.back();
    if (adverb_from(adj.text)) {
      throw ParseError("adverb " + canonical_name(adj.text) + " is missing its adjective",
                       adj.pos);
    }
    if (!is_valid_name(adj.text)) {
      throw ParseError("invalid adjective '" + std::string(adj.text) + "'", adj.pos);
    }
    clause.adjective = canonical_name(adj.text);
    return clause;
  }

  std::vector<Token> tokens_;
  std::size_t i_ = 0;
  RuleSet* rs_ = nullptr;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_clause(const Clause& c) {
  std::string out = c.signal + " IS ";
  for (auto a : c.adverbs) {
    out += to_string(a);
    out += ' ';
  }
  return out + c.adjective;
}

std::string format_conjunction(const Conjunction& conj) {
  std::string out;
  for (std::size_t i = 0; i < conj.size(); ++i) {
    if (i) out += " AND ";
    out += format_clause(conj[i]);
  }
  return out;
}

std::string format_declaration(std::string_view keyword, const std::vector<SignalDecl>& decls) {
  std::string out = "(" + std::string(keyword);
  for (const auto& d : decls) {
    out += ' ' + d.name + " (" + format_number(d.universe.lo()) + ' ' +
           format_number(d.universe.hi()) + ')';
  }
  return out + ")\n";
}

}  // namespace

const SignalDecl* RuleSet::find_signal(std::string_view name) const {
  for (const auto* list : {&inputs, &outputs}) {
    for (const auto& d : *list) {
      if (iequals(d.name, name)) return &d;
    }
  }
  return nullptr;
}

std::size_t RuleSet::disjunct_count() const noexcept {
  std::size_t n = 0;
  for (const auto& r : rules) n += r.antecedent.size();
  return n;
}

RuleSet parse_rules(std::string_view text, std::string source_name) {
  RuleSet rs = Parser(text).parse_file();
  rs.source_name = std::move(source_name);
  return rs;
}

RuleSet load_rules(const std::string& path) {
  return parse_rules(detail::read_file(path), path);
}

RuleSet normalize(RuleSet rs) {
  std::vector<Rule> out;
  out.reserve(rs.disjunct_count());
  for (auto& rule : rs.rules) {
    for (auto& disjunct : rule.antecedent) {
      out.push_back(Rule{{std::move(disjunct)}, rule.consequent, rule.pos});
    }
  }
  rs.rules = std::move(out);
  return rs;
}

CompiledRuleSet resolve(const RuleSet& rs, const FuzzyDictionary& dict) {
  CompiledRuleSet compiled{rs.inputs, rs.outputs, {}};
  compiled.rules.reserve(rs.rules.size());

  auto lookup = [&](const Clause& c) {
    auto base = dict.find(c.adjective);
    if (!base) {
      throw Error(ErrorCategory::Data,
                  "unknown adjective " + c.adjective + " in clause '" + format_clause(c) + "'",
                  c.pos);
    }
    MembershipFunction m = *base;
    for (auto it = c.adverbs.rbegin(); it != c.adverbs.rend(); ++it) m = apply_adverb(*it, m);
    return m;
  };

  for (const auto& rule : rs.rules) {
    if (!rule.conjunctive()) {
      throw Error(ErrorCategory::Contract,
                  "resolve requires a normalized (conjunctive) rule set", rule.pos);
    }
    CompiledRule cr{std::vector<MembershipFunction>(rs.inputs.size(), MembershipFunction::any()),
                    std::vector<MembershipFunction>(rs.outputs.size(), MembershipFunction::null())};
    for (const auto& c : rule.antecedent.front()) {
      cr.antecedent[rs.find_signal(c.signal)->position] = lookup(c);
    }
    for (const auto& c : rule.consequent) {
      cr.consequent[rs.find_signal(c.signal)->position] = lookup(c);
    }
    compiled.rules.push_back(std::move(cr));
  }
  return compiled;
}

std::string format_rules(const RuleSet& rs) {
  std::string out = format_declaration("INPUT", rs.inputs);
  out += format_declaration("OUTPUT", rs.outputs);
  for (const auto& rule : rs.rules) {
    out += "\n(IF ";
    if (rule.conjunctive()) {
      out += format_conjunction(rule.antecedent.front());
    } else {
      for (std::size_t d = 0; d < rule.antecedent.size(); ++d) {
        if (d) out += " OR ";
        out += "(" + format_conjunction(rule.antecedent[d]) + ")";
      }
    }
    out += "\n THEN " + format_conjunction(rule.consequent) + ")\n";
  }
  return out;
}

std::vector<Diagnostic> lint(const RuleSet& rs) {
  std::vector<Diagnostic> out;
  auto mentioned = [&](const std::string& name) {
    for (const auto& r : rs.rules) {
      for (const auto& d : r.antecedent) {
        for (const auto& c : d) {
          if (c.signal == name) return true;
        }
      }
      for (const auto& c : r.consequent) {
        if (c.signal == name) return true;
      }
    }
    return false;
  };
  for (const auto* list : {&rs.inputs, &rs.outputs}) {
    for (const auto& d : *list) {
      if (!mentioned(d.name)) {
        out.push_back({Severity::Warning, d.pos,
                       "signal " + d.name + " is declared but no rule mentions it"});
      }
    }
  }
  return out;
}

}  // namespace fuzzyc
