#include "fermirep/expression.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <variant>
#include <vector>

#include "fermirep/errors.hpp"

namespace fermirep {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class TokenKind { number, identifier, plus, minus, star, slash, lparen, rparen, quote, end };

struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t column;
  double number = 0.0;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    const std::size_t start = pos;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      }
      // Exponent only when followed by digits, so "2e" is not swallowed.
      if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        std::size_t look = pos + 1;
        if (look < text.size() && (text[look] == '+' || text[look] == '-')) ++look;
        if (look < text.size() && std::isdigit(static_cast<unsigned char>(text[look]))) {
          pos = look;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
      }
      Token t{TokenKind::number, text.substr(start, pos - start), start};
      auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
      if (ec != std::errc() || end != t.text.data() + t.text.size()) {
        throw ParseError("malformed number '" + std::string(t.text) + "'", start);
      }
      tokens.push_back(t);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
        ++pos;
      }
      tokens.push_back({TokenKind::identifier, text.substr(start, pos - start), start});
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '+': kind = TokenKind::plus; break;
      case '-': kind = TokenKind::minus; break;
      case '*': kind = TokenKind::star; break;
      case '/': kind = TokenKind::slash; break;
      case '(': kind = TokenKind::lparen; break;
      case ')': kind = TokenKind::rparen; break;
      case '\'': kind = TokenKind::quote; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
    tokens.push_back({kind, text.substr(start, 1), start});
    ++pos;
  }
  tokens.push_back({TokenKind::end, {}, text.size()});
  return tokens;
}

// ---------------------------------------------------------------------------
// Parser

ExprPtr make(NodeKind kind, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
  return std::make_shared<const ExprNode>(ExprNode{kind, 0.0, 0, std::move(lhs), std::move(rhs)});
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  ExprPtr parse() {
    if (peek().kind == TokenKind::end) {
      throw ParseError("empty expression", peek().column);
    }
    auto node = expr();
    if (peek().kind != TokenKind::end) {
      throw ParseError("unexpected '" + std::string(peek().text) + "'", peek().column);
    }
    return node;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  void expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) {
      throw ParseError(std::string("expected ") + what, peek().column);
    }
    ++pos_;
  }

  ExprPtr expr() {
    auto node = term();
    while (peek().kind == TokenKind::plus || peek().kind == TokenKind::minus) {
      const auto kind = advance().kind == TokenKind::plus ? NodeKind::sum : NodeKind::difference;
      node = make(kind, node, term());
    }
    return node;
  }

  ExprPtr term() {
    auto node = unary();
    while (peek().kind == TokenKind::star || peek().kind == TokenKind::slash) {
      const auto kind = advance().kind == TokenKind::star ? NodeKind::product : NodeKind::quotient;
      node = make(kind, node, unary());
    }
    return node;
  }

  ExprPtr unary() {
    if (peek().kind == TokenKind::minus) {
      advance();
      return make(NodeKind::negate, unary());
    }
    return scaled();
  }

  bool starts_primary(std::size_t ahead = 0) const {
    const auto& t = tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    return t.kind == TokenKind::identifier || t.kind == TokenKind::lparen;
  }

  ExprPtr scaled() {
    if (peek().kind == TokenKind::number) {
      const auto literal = number_node(advance());
      if (starts_primary()) {
        return make(NodeKind::scalar_product, literal, postfix());
      }
      return daggers(literal);
    }
    // "i a(1)" scales by the imaginary unit the same way "2 a(1)" does
    if (peek().kind == TokenKind::identifier && peek().text == "i" && starts_primary(1)) {
      advance();
      return make(NodeKind::scalar_product, make(NodeKind::imaginary_unit), postfix());
    }
    return postfix();
  }

  ExprPtr postfix() { return daggers(primary()); }

  ExprPtr daggers(ExprPtr node) {
    while (peek().kind == TokenKind::quote) {
      advance();
      node = make(NodeKind::dagger, node);
    }
    return node;
  }

  static ExprPtr number_node(const Token& t) {
    return std::make_shared<const ExprNode>(ExprNode{NodeKind::number, t.number, 0, nullptr, nullptr});
  }

  int mode_argument() {
    expect(TokenKind::lparen, "'('");
    const Token& t = peek();
    if (t.kind != TokenKind::number || t.number != std::floor(t.number) || t.number < 0 ||
        t.number > 1e6 || t.text.find_first_not_of("0123456789") != std::string_view::npos) {
      throw ParseError("expected a mode index", t.column);
    }
    advance();
    expect(TokenKind::rparen, "')'");
    return static_cast<int>(t.number);
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::number:
        advance();
        return number_node(t);
      case TokenKind::lparen: {
        advance();
        auto inner = expr();
        expect(TokenKind::rparen, "')'");
        return inner;
      }
      case TokenKind::identifier: {
        advance();
        if (t.text == "i") {
          return make(NodeKind::imaginary_unit);
        }
        if (t.text == "a" || t.text == "adag") {
          const int mode = mode_argument();
          return std::make_shared<const ExprNode>(ExprNode{
              t.text == "a" ? NodeKind::annihilate : NodeKind::create, 0.0, mode, nullptr, nullptr});
        }
        if (t.text == "N") {
          if (peek().kind != TokenKind::lparen) {
            return make(NodeKind::total_number);
          }
          const int mode = mode_argument();
          return std::make_shared<const ExprNode>(
              ExprNode{NodeKind::mode_number, 0.0, mode, nullptr, nullptr});
        }
        if (t.text == "sqrt") {
          expect(TokenKind::lparen, "'('");
          auto inner = expr();
          expect(TokenKind::rparen, "')'");
          return make(NodeKind::square_root, inner);
        }
        throw ParseError("unknown name '" + std::string(t.text) + "'", t.column);
      }
      case TokenKind::end:
        throw ParseError("unexpected end of expression", t.column);
      default:
        throw ParseError("unexpected '" + std::string(t.text) + "'", t.column);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

int level(NodeKind kind) {
  switch (kind) {
    case NodeKind::sum:
    case NodeKind::difference:
      return 1;
    case NodeKind::product:
    case NodeKind::quotient:
      return 2;
    case NodeKind::negate:
      return 3;
    case NodeKind::scalar_product:
      return 4;
    case NodeKind::dagger:
      return 5;
    default:
      return 6;
  }
}

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string render(const ExprNode& node, int min_level);

std::string render_raw(const ExprNode& node) {
  switch (node.kind) {
    case NodeKind::number:
      return format_number(node.value);
    case NodeKind::imaginary_unit:
      return "i";
    case NodeKind::annihilate:
      return "a(" + std::to_string(node.mode) + ")";
    case NodeKind::create:
      return "adag(" + std::to_string(node.mode) + ")";
    case NodeKind::mode_number:
      return "N(" + std::to_string(node.mode) + ")";
    case NodeKind::total_number:
      return "N";
    case NodeKind::sum:
      return render(*node.lhs, 1) + " + " + render(*node.rhs, 2);
    case NodeKind::difference:
      return render(*node.lhs, 1) + " - " + render(*node.rhs, 2);
    case NodeKind::product:
      return render(*node.lhs, 2) + "*" + render(*node.rhs, 3);
    case NodeKind::quotient:
      return render(*node.lhs, 2) + "/" + render(*node.rhs, 3);
    case NodeKind::negate:
      return "-" + render(*node.lhs, 3);
    case NodeKind::scalar_product: {
      // "2 3" would not re-parse; a numeric operand needs parentheses.
      auto rhs = render(*node.rhs, 5);
      if (std::isdigit(static_cast<unsigned char>(rhs.front())) || rhs.front() == '.') {
        rhs = "(" + rhs + ")";
      }
      return render_raw(*node.lhs) + " " + rhs;
    }
    case NodeKind::dagger:
      // A bare number followed by ' would re-parse fine, but a scalar
      // product would not, so only primaries and daggers go unwrapped.
      return render(*node.lhs, 5) + "'";
    case NodeKind::square_root:
      return "sqrt(" + render(*node.lhs, 1) + ")";
  }
  return {};
}

std::string render(const ExprNode& node, int min_level) {
  auto text = render_raw(node);
  return level(node.kind) < min_level ? "(" + text + ")" : text;
}

int max_mode_of(const ExprNode& node) {
  int best = node.mode;
  if (node.lhs) best = std::max(best, max_mode_of(*node.lhs));
  if (node.rhs) best = std::max(best, max_mode_of(*node.rhs));
  return best;
}

// ---------------------------------------------------------------------------
// Evaluation

using Value = std::variant<Complex, FockOperator>;

FockOperator as_operator(const Value& v, int modes) {
  if (const auto* s = std::get_if<Complex>(&v)) {
    return *s * FockOperator::identity(modes);
  }
  return std::get<FockOperator>(v);
}

Value evaluate_node(const ExprNode& node, const LadderSet& ladders) {
  const int n = ladders.modes();
  auto mode_ok = [&](int mode) {
    if (mode < 1 || mode > n) {
      throw ArgumentError("mode index " + std::to_string(mode) + " outside [1, " +
                          std::to_string(n) + "]");
    }
    return mode;
  };
  switch (node.kind) {
    case NodeKind::number:
      return Complex(node.value, 0.0);
    case NodeKind::imaginary_unit:
      return Complex(0.0, 1.0);
    case NodeKind::annihilate:
      return ladders.annihilator(mode_ok(node.mode));
    case NodeKind::create:
      return ladders.creator(mode_ok(node.mode));
    case NodeKind::mode_number:
      return ladders.number(mode_ok(node.mode));
    case NodeKind::total_number:
      return ladders.total_number();
    case NodeKind::sum:
    case NodeKind::difference: {
      const Value l = evaluate_node(*node.lhs, ladders);
      const Value r = evaluate_node(*node.rhs, ladders);
      const double sign = node.kind == NodeKind::sum ? 1.0 : -1.0;
      if (std::holds_alternative<Complex>(l) && std::holds_alternative<Complex>(r)) {
        return std::get<Complex>(l) + sign * std::get<Complex>(r);
      }
      return as_operator(l, n) + Complex(sign) * as_operator(r, n);
    }
    case NodeKind::product:
    case NodeKind::scalar_product: {
      const Value l = evaluate_node(*node.lhs, ladders);
      const Value r = evaluate_node(*node.rhs, ladders);
      if (const auto* ls = std::get_if<Complex>(&l)) {
        if (const auto* rs = std::get_if<Complex>(&r)) {
          return *ls * *rs;
        }
        return *ls * std::get<FockOperator>(r);
      }
      if (const auto* rs = std::get_if<Complex>(&r)) {
        return std::get<FockOperator>(l) * *rs;
      }
      return std::get<FockOperator>(l) * std::get<FockOperator>(r);
    }
    case NodeKind::quotient: {
      const Value l = evaluate_node(*node.lhs, ladders);
      const Value r = evaluate_node(*node.rhs, ladders);
      const auto* divisor = std::get_if<Complex>(&r);
      if (divisor == nullptr) {
        throw ArgumentError("division by an operator is not supported");
      }
      if (*divisor == Complex(0.0)) {
        throw ArgumentError("division by zero");
      }
      if (const auto* ls = std::get_if<Complex>(&l)) {
        return *ls / *divisor;
      }
      return std::get<FockOperator>(l) * (Complex(1.0) / *divisor);
    }
    case NodeKind::negate: {
      const Value v = evaluate_node(*node.lhs, ladders);
      if (const auto* s = std::get_if<Complex>(&v)) {
        return -*s;
      }
      return -std::get<FockOperator>(v);
    }
    case NodeKind::dagger: {
      const Value v = evaluate_node(*node.lhs, ladders);
      if (const auto* s = std::get_if<Complex>(&v)) {
        return std::conj(*s);
      }
      return std::get<FockOperator>(v).adjoint();
    }
    case NodeKind::square_root: {
      const Value v = evaluate_node(*node.lhs, ladders);
      const auto* s = std::get_if<Complex>(&v);
      if (s == nullptr) {
        throw ArgumentError("sqrt takes a scalar argument");
      }
      return std::sqrt(*s);
    }
  }
  throw ArgumentError("unknown expression node");
}

}  // namespace

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind || a.mode != b.mode) {
    return false;
  }
  if (a.kind == NodeKind::number && a.value != b.value) {
    return false;
  }
  if (static_cast<bool>(a.lhs) != static_cast<bool>(b.lhs) ||
      static_cast<bool>(a.rhs) != static_cast<bool>(b.rhs)) {
    return false;
  }
  return (!a.lhs || same_tree(*a.lhs, *b.lhs)) && (!a.rhs || same_tree(*a.rhs, *b.rhs));
}

OperatorExpression::OperatorExpression(ExprPtr root) : root_(std::move(root)) {
  if (!root_) {
    throw ArgumentError("expression tree is empty");
  }
}

OperatorExpression OperatorExpression::parse(std::string_view text) {
  return OperatorExpression(Parser(text).parse());
}

std::string OperatorExpression::to_string() const { return render(*root_, 1); }

int OperatorExpression::max_mode() const { return max_mode_of(*root_); }

FockOperator OperatorExpression::evaluate(const LadderSet& ladders) const {
  return as_operator(evaluate_node(*root_, ladders), ladders.modes());
}

FockOperator OperatorExpression::evaluate(int n) const { return evaluate(LadderSet(n)); }

}  // namespace fermirep
