#include "cqrelax/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "cqrelax/error.hpp"

namespace cqrelax {
namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_lower_start(std::string_view s) {
  return !s.empty() && (std::islower(static_cast<unsigned char>(s.front())) || s.front() == '_');
}

enum class Tok { Ident, Quoted, Number, LParen, RParen, Comma, Amp, Colon, Arrow, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ >= s_.size()) {
        out.push_back({Tok::End, "", pos_});
        return out;
      }
      std::size_t start = pos_;
      char c = s_[pos_];
      if (ident_start(c)) {
        while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
        out.push_back({Tok::Ident, std::string(s_.substr(start, pos_ - start)), start});
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
        ++pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
          ++pos_;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        out.push_back({Tok::Number, std::string(s_.substr(start, pos_ - start)), start});
      } else if (c == '"') {
        out.push_back({Tok::Quoted, quoted(), start});
      } else if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
        pos_ += 2;
        out.push_back({Tok::Arrow, "->", start});
      } else {
        Tok k;
        switch (c) {
          case '(': k = Tok::LParen; break;
          case ')': k = Tok::RParen; break;
          case ',': k = Tok::Comma; break;
          case '&': k = Tok::Amp; break;
          case ':': k = Tok::Colon; break;
          default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        ++pos_;
        out.push_back({k, std::string(1, c), start});
      }
    }
  }

 private:
  std::string quoted() {
    std::size_t start = pos_++;
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out += s_[pos_++];
    }
    if (pos_ >= s_.size()) throw ParseError("unterminated quoted constant", start);
    ++pos_;
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  ConjunctiveQuery query() {
    ConjunctiveQuery q;
    std::vector<std::size_t> ex_pos;
    if (peek().kind == Tok::Ident && peek().text == "exists" && peek(1).kind != Tok::LParen) {
      next();
      do {
        const Token& v = expect(Tok::Ident, "variable");
        if (!is_lower_start(v.text)) throw ParseError("existential '" + v.text + "' is not a variable", v.pos);
        if (std::find(q.existential.begin(), q.existential.end(), v.text) != q.existential.end())
          throw ParseError("variable '" + v.text + "' quantified twice", v.pos);
        q.existential.push_back(v.text);
        ex_pos.push_back(v.pos);
      } while (accept(Tok::Comma));
      expect(Tok::Colon, "':'");
    }
    q.atoms = conjunction();
    expect(Tok::End, "end of query");
    auto used = variables_of(q.atoms);
    for (std::size_t i = 0; i < q.existential.size(); ++i)
      if (std::find(used.begin(), used.end(), q.existential[i]) == used.end())
        throw ParseError("existential variable '" + q.existential[i] + "' does not occur in the query", ex_pos[i]);
    return q;
  }

  Rule rule() {
    Rule r;
    r.body = conjunction();
    expect(Tok::Arrow, "'->'");
    r.head = atom();
    if (peek().kind == Tok::Amp) throw ParseError("rule head must be a single atom", peek().pos);
    expect(Tok::End, "end of rule");
    return r;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k) {
      std::string got = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", got " + got, peek().pos);
    }
    return next();
  }

  std::vector<Atom> conjunction() {
    if (peek().kind == Tok::End) throw ParseError("empty conjunction", peek().pos);
    std::vector<Atom> atoms;
    atoms.push_back(atom());
    while (accept(Tok::Amp)) atoms.push_back(atom());
    return atoms;
  }

  Atom atom() {
    Atom a;
    a.relation = expect(Tok::Ident, "relation name").text;
    expect(Tok::LParen, "'('");
    do a.args.push_back(term());
    while (accept(Tok::Comma));
    expect(Tok::RParen, "')'");
    return a;
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        next();
        if (is_lower_start(t.text)) return Variable{t.text};
        return Value(t.text);
      case Tok::Quoted:
        next();
        return Value(t.text);
      case Tok::Number: {
        next();
        auto r = Rational::parse(t.text);
        if (!r) throw ParseError("malformed number '" + t.text + "'", t.pos);
        return Value(*r);
      }
      default:
        throw ParseError("expected a term", t.pos);
    }
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

bool bare_constant(const std::string& s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(), ident_char);
}

}  // namespace

ConjunctiveQuery parse_query(std::string_view text) { return Parser(text).query(); }

Rule parse_rule(std::string_view text) {
  Rule r = Parser(text).rule();
  check_range_restricted(r);
  return r;
}

RuleBase parse_rules(std::string_view text) {
  RuleBase rules;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    try {
      rules.push_back(parse_rule(line));
    } catch (const ParseError& e) {
      throw ParseError("rules line " + std::to_string(line_no) + ": " + e.what(), e.position());
    } catch (const QueryError& e) {
      throw QueryError("rules line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rules;
}

std::vector<std::string> variables_of(const std::vector<Atom>& atoms) {
  std::vector<std::string> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (is_variable(t) && std::find(out.begin(), out.end(), variable_name(t)) == out.end())
        out.push_back(variable_name(t));
  return out;
}

std::vector<std::string> free_variables(const ConjunctiveQuery& q) {
  auto vars = variables_of(q.atoms);
  std::erase_if(vars, [&](const std::string& v) {
    return std::find(q.existential.begin(), q.existential.end(), v) != q.existential.end();
  });
  return vars;
}

void check_range_restricted(const Rule& rule) {
  auto body_vars = variables_of(rule.body);
  for (const auto& t : rule.head.args)
    if (is_variable(t) && std::find(body_vars.begin(), body_vars.end(), variable_name(t)) == body_vars.end())
      throw QueryError("rule " + to_string(rule) + ": head variable " + variable_name(t) +
                       " is not range-restricted (absent from body)");
}

std::string constant_literal(const Value& v) {
  if (v.is_numeric()) return v.numeric().str();
  const std::string& s = v.symbolic();
  if (bare_constant(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string to_string(const Term& t) {
  return is_variable(t) ? variable_name(t) : constant_literal(constant_value(t));
}

std::string to_string(const Atom& a) {
  std::string out = a.relation + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    out += to_string(a.args[i]);
  }
  return out + ")";
}

namespace {
std::string conj(const std::vector<Atom>& atoms) {
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += " & ";
    out += to_string(atoms[i]);
  }
  return out;
}
}  // namespace

std::string to_string(const ConjunctiveQuery& q) {
  std::string out;
  if (!q.existential.empty()) {
    out = "exists ";
    for (std::size_t i = 0; i < q.existential.size(); ++i) {
      if (i) out += ", ";
      out += q.existential[i];
    }
    out += ": ";
  }
  return out + conj(q.atoms);
}

std::string to_string(const Rule& r) { return conj(r.body) + " -> " + to_string(r.head); }

}  // namespace cqrelax
