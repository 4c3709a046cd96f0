#include "diffgram/expr.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <vector>

namespace diffgram::expr {
namespace {

enum class TokenKind { kNumber, kVariable, kPlus, kMinus, kStar, kSlash, kCaret, kLParen, kRParen, kEnd };

struct Token {
  TokenKind kind;
  std::size_t offset;
  std::string_view text;
  double number = 0.0;
  int index = 0;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto single = [&](TokenKind kind) {
      tokens.push_back({kind, start, text.substr(start, 1)});
      ++i;
    };
    switch (c) {
      case '+': single(TokenKind::kPlus); continue;
      case '-': single(TokenKind::kMinus); continue;
      case '*': single(TokenKind::kStar); continue;
      case '/': single(TokenKind::kSlash); continue;
      case '^': single(TokenKind::kCaret); continue;
      case '(': single(TokenKind::kLParen); continue;
      case ')': single(TokenKind::kRParen); continue;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      // digits [. digits] [e [+-] digits]
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < text.size() && (text[j] == '+' || text[j] == '-')) ++j;
        if (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
          i = j;
          while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        }
      }
      const std::string_view lexeme = text.substr(start, i - start);
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
      if (ec != std::errc() || ptr != lexeme.data() + lexeme.size()) {
        throw ParseError("malformed number '" + std::string(lexeme) + "'", start);
      }
      tokens.push_back({TokenKind::kNumber, start, lexeme, value});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      const std::string_view lexeme = text.substr(start, i - start);
      bool positional = lexeme.size() >= 2 && lexeme[0] == 'x';
      for (std::size_t k = 1; positional && k < lexeme.size(); ++k) {
        positional = std::isdigit(static_cast<unsigned char>(lexeme[k])) != 0;
      }
      int index = 0;
      if (positional) {
        auto [ptr, ec] = std::from_chars(lexeme.data() + 1, lexeme.data() + lexeme.size(), index);
        positional = ec == std::errc() && index >= 1;
      }
      if (!positional) {
        throw ParseError("unknown token '" + std::string(lexeme) + "'", start);
      }
      tokens.push_back({TokenKind::kVariable, start, lexeme, 0.0, index});
      continue;
    }
    throw ParseError("unknown token '" + std::string(1, c) + "'", start);
  }
  tokens.push_back({TokenKind::kEnd, text.size(), {}});
  return tokens;
}

std::shared_ptr<const Node> make_node(Op op, std::shared_ptr<const Node> lhs,
                                      std::shared_ptr<const Node> rhs = nullptr) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->lhs = std::move(lhs);
  node->rhs = std::move(rhs);
  return node;
}

// Binding powers: add/sub < mul/div < unary minus < pow.
constexpr int kAdditive = 10;
constexpr int kMultiplicative = 20;
constexpr int kUnary = 30;
constexpr int kPower = 40;

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  std::shared_ptr<const Node> parse() {
    auto node = parse_expression(0);
    if (peek().kind != TokenKind::kEnd) fail_unexpected(peek());
    return node;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] static void fail_unexpected(const Token& t) {
    if (t.kind == TokenKind::kEnd) throw ParseError("unexpected end of input", t.offset);
    throw ParseError("syntax error: unexpected '" + std::string(t.text) + "'", t.offset);
  }

  static int infix_power(TokenKind kind) {
    switch (kind) {
      case TokenKind::kPlus:
      case TokenKind::kMinus: return kAdditive;
      case TokenKind::kStar:
      case TokenKind::kSlash: return kMultiplicative;
      case TokenKind::kCaret: return kPower;
      default: return -1;
    }
  }

  std::shared_ptr<const Node> parse_prefix() {
    const Token& t = next();
    switch (t.kind) {
      case TokenKind::kNumber: {
        auto node = std::make_shared<Node>();
        node->op = Op::kConstant;
        node->constant = t.number;
        return node;
      }
      case TokenKind::kVariable: {
        auto node = std::make_shared<Node>();
        node->op = Op::kVariable;
        node->index = t.index;
        return node;
      }
      case TokenKind::kMinus:
        return make_node(Op::kNeg, parse_expression(kUnary));
      case TokenKind::kLParen: {
        auto inner = parse_expression(0);
        if (peek().kind != TokenKind::kRParen) fail_unexpected(peek());
        next();
        return inner;
      }
      default:
        fail_unexpected(t);
    }
  }

  std::shared_ptr<const Node> parse_expression(int min_power) {
    auto lhs = parse_prefix();
    while (true) {
      const Token& op = peek();
      const int power = infix_power(op.kind);
      // All binary operators are left-associative: stop on equal power.
      if (power < 0 || power <= min_power) break;
      next();
      if (op.kind == TokenKind::kCaret) {
        const Token& exponent = next();
        if (exponent.kind != TokenKind::kNumber || exponent.number < 0 ||
            std::floor(exponent.number) != exponent.number || exponent.number > 1024) {
          throw ParseError("exponent must be a non-negative integer literal", exponent.offset);
        }
        auto node = std::make_shared<Node>();
        node->op = Op::kPow;
        node->index = static_cast<int>(exponent.number);
        node->lhs = lhs;
        lhs = node;
        continue;
      }
      auto rhs = parse_expression(power);
      Op kind = Op::kAdd;
      switch (op.kind) {
        case TokenKind::kPlus: kind = Op::kAdd; break;
        case TokenKind::kMinus: kind = Op::kSub; break;
        case TokenKind::kStar: kind = Op::kMul; break;
        case TokenKind::kSlash: kind = Op::kDiv; break;
        default: break;
      }
      lhs = make_node(kind, lhs, rhs);
    }
    return lhs;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

int max_index(const Node& node) {
  switch (node.op) {
    case Op::kConstant: return 0;
    case Op::kVariable: return node.index;
    case Op::kNeg:
    case Op::kPow: return max_index(*node.lhs);
    default: return std::max(max_index(*node.lhs), max_index(*node.rhs));
  }
}

bool equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::kConstant: return a.constant == b.constant;
    case Op::kVariable: return a.index == b.index;
    case Op::kNeg: return equal(*a.lhs, *b.lhs);
    case Op::kPow: return a.index == b.index && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

void print(const Node& node, std::string& out) {
  switch (node.op) {
    case Op::kConstant: {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", node.constant);
      out += buf;
      return;
    }
    case Op::kVariable:
      out += "x" + std::to_string(node.index);
      return;
    case Op::kNeg:
      out += "(-";
      print(*node.lhs, out);
      out += ")";
      return;
    case Op::kPow:
      out += "(";
      print(*node.lhs, out);
      out += "^" + std::to_string(node.index) + ")";
      return;
    default: {
      const char* sym = node.op == Op::kAdd ? " + "
                        : node.op == Op::kSub ? " - "
                        : node.op == Op::kMul ? " * "
                                              : " / ";
      out += "(";
      print(*node.lhs, out);
      out += sym;
      print(*node.rhs, out);
      out += ")";
      return;
    }
  }
}

}  // namespace

Expression::Expression() : root_(std::make_shared<Node>()) {}

Expression::Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

Expression Expression::constant(double value) {
  auto node = std::make_shared<Node>();
  node->constant = value;
  return Expression(std::move(node));
}

int Expression::max_variable_index() const { return max_index(*root_); }

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

Expression parse_expression(std::string_view text) {
  bool blank = true;
  for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
  if (blank) throw ParseError("empty expression", 0);
  Parser parser(tokenize(text));
  return Expression(parser.parse());
}

}  // namespace diffgram::expr
