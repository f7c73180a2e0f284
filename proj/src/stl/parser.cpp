#include "rf/stl/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>

namespace rf::stl {

ParseError::ParseError(Kind kind, int line, int column, std::vector<std::string> expected,
                       const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Plus,
  Minus,
  Star,
  Bang,
  AndAnd,
  OrOr,
  Cmp,
  BadCmp,
  Always,
  Eventually,
  Until,
  Unknown,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  double number = 0.0;
  Comparator cmp = Comparator::Less;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t = next();
      const bool done = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (done) return out;
    }
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token make(Tok kind, std::size_t start, int line, int col) {
    return Token{kind, std::string(src_.substr(start, pos_ - start)), line, col};
  }

  Token next() {
    const int line = line_, col = col_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) return Token{Tok::End, "", line, col};
    const char c = src_[pos_];

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      Token t = make(Tok::Ident, start, line, col);
      if (t.text == "G" || t.text == "A") t.kind = Tok::Always;
      if (t.text == "F" || t.text == "E") t.kind = Tok::Eventually;
      if (t.text == "U") t.kind = Tok::Until;
      return t;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(start, line, col);

    // Runs of comparator characters are lexed greedily so that "==" or "=<"
    // are reported as unknown comparators rather than stray symbols.
    auto is_cmp_char = [](char ch) { return ch == '<' || ch == '>' || ch == '='; };
    if (is_cmp_char(c) || (c == '!' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '=')) {
      advance();
      while (pos_ < src_.size() && is_cmp_char(src_[pos_])) advance();
      Token t = make(Tok::BadCmp, start, line, col);
      if (t.text == "<") t = cmp_token(t, Comparator::Less);
      else if (t.text == "<=") t = cmp_token(t, Comparator::LessEqual);
      else if (t.text == ">") t = cmp_token(t, Comparator::Greater);
      else if (t.text == ">=") t = cmp_token(t, Comparator::GreaterEqual);
      return t;
    }

    if (c == '&' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '&') {
      advance();
      advance();
      return make(Tok::AndAnd, start, line, col);
    }
    if (c == '|' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '|') {
      advance();
      advance();
      return make(Tok::OrOr, start, line, col);
    }

    advance();
    switch (c) {
      case '(': return make(Tok::LParen, start, line, col);
      case ')': return make(Tok::RParen, start, line, col);
      case '[': return make(Tok::LBracket, start, line, col);
      case ']': return make(Tok::RBracket, start, line, col);
      case ',': return make(Tok::Comma, start, line, col);
      case '+': return make(Tok::Plus, start, line, col);
      case '-': return make(Tok::Minus, start, line, col);
      case '*': return make(Tok::Star, start, line, col);
      case '!': return make(Tok::Bang, start, line, col);
      default: return make(Tok::Unknown, start, line, col);
    }
  }

  static Token cmp_token(Token t, Comparator op) {
    t.kind = Tok::Cmp;
    t.cmp = op;
    return t;
  }

  Token number(std::size_t start, int line, int col) {
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        while (pos_ < look) advance();
        digits();
      }
    }
    Token t = make(Tok::Number, start, line, col);
    const char* first = src_.data() + start;
    const char* last = src_.data() + pos_;
    auto res = std::from_chars(first, last, t.number);
    if (res.ec != std::errc() || res.ptr != last) t.kind = Tok::Unknown;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  FormulaPtr parse() {
    FormulaPtr f = parse_or();
    if (peek().kind != Tok::End) syntax({"'&&'", "'||'", "'U'", "end of input"});
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void syntax(std::vector<std::string> expected) const {
    const Token& t = peek();
    std::string msg = "unexpected " + describe(t) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? ", " : "") + expected[i];
    throw ParseError(ParseError::Kind::Syntax, t.line, t.column, std::move(expected), msg);
  }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) syntax({what});
    ++pos_;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (peek().kind == Tok::OrOr) {
      ++pos_;
      lhs = disjunction(lhs, parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_until();
    while (peek().kind == Tok::AndAnd) {
      ++pos_;
      lhs = conjunction(lhs, parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (peek().kind != Tok::Until) return lhs;
    ++pos_;
    Interval w = parse_window();
    return until(w, lhs, parse_until());
  }

  FormulaPtr parse_unary() {
    switch (peek().kind) {
      case Tok::Bang:
        ++pos_;
        return negation(parse_unary());
      case Tok::Always: {
        ++pos_;
        Interval w = parse_window();
        return always(w, parse_unary());
      }
      case Tok::Eventually: {
        ++pos_;
        Interval w = parse_window();
        return eventually(w, parse_unary());
      }
      case Tok::LParen: {
        ++pos_;
        FormulaPtr f = parse_or();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Ident:
      case Tok::Number:
      case Tok::Minus:
        return parse_predicate();
      default:
        syntax({"'('", "'!'", "'G'", "'F'", "identifier", "number"});
    }
  }

  Interval parse_window() {
    if (peek().kind != Tok::LBracket) return Interval::unbounded();
    const Token open = take();
    const double lo = parse_bound();
    expect(Tok::Comma, "','");
    const double hi = parse_bound();
    expect(Tok::RBracket, "']'");
    if (hi < lo) {
      throw ParseError(ParseError::Kind::BadInterval, open.line, open.column, {},
                       "reversed interval bounds [" + format_number(lo) + "," + format_number(hi) + "]");
    }
    return Interval::bounded(lo, hi);
  }

  double parse_bound() {
    const Token& t = peek();
    if (t.kind == Tok::Minus) {
      throw ParseError(ParseError::Kind::BadInterval, t.line, t.column, {}, "negative interval bound");
    }
    if (t.kind != Tok::Number) syntax({"number"});
    ++pos_;
    if (!std::isfinite(t.number)) {
      throw ParseError(ParseError::Kind::BadInterval, t.line, t.column, {}, "non-finite interval bound");
    }
    return t.number;
  }

  FormulaPtr parse_predicate() {
    SignalExpr lhs;
    bool negative = false;
    if (peek().kind == Tok::Minus) {
      ++pos_;
      negative = true;
    }
    parse_term(lhs, negative);
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      negative = take().kind == Tok::Minus;
      parse_term(lhs, negative);
    }

    const Token& op = peek();
    if (op.kind == Tok::BadCmp) {
      throw ParseError(ParseError::Kind::UnknownComparator, op.line, op.column, {"'<'", "'<='", "'>'", "'>='"},
                       "unknown comparator '" + op.text + "'");
    }
    if (op.kind != Tok::Cmp) syntax({"'+'", "'-'", "'<'", "'<='", "'>'", "'>='"});
    ++pos_;

    bool neg_rhs = false;
    if (peek().kind == Tok::Minus) {
      ++pos_;
      neg_rhs = true;
    }
    if (peek().kind != Tok::Number) syntax({"number"});
    const double rhs = take().number;
    return predicate(std::move(lhs), op.cmp, neg_rhs ? -rhs : rhs);
  }

  void parse_term(SignalExpr& e, bool negative) {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      ++pos_;
      e.terms.push_back(Term{negative ? -1.0 : 1.0, t.text});
      return;
    }
    if (t.kind != Tok::Number) syntax({"identifier", "number"});
    ++pos_;
    const double v = negative ? -t.number : t.number;
    if (peek().kind == Tok::Star) {
      ++pos_;
      if (peek().kind != Tok::Ident) syntax({"identifier"});
      e.terms.push_back(Term{v, take().text});
      return;
    }
    e.offset += v;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(Lexer(text).run()).parse(); }

}  // namespace rf::stl
