#include "lkoethe/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "lkoethe/errors.hpp"

namespace lkoethe {

struct Expression::Node {
  enum class Op { kConst, kVar, kNeg, kAdd, kSub, kMul, kDiv, kPow, kCall };
  Op op = Op::kConst;
  double value = 0.0;
  std::size_t var = 0;
  std::string fn;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = std::move(args);
  return n;
}

struct FunctionInfo {
  std::string_view name;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"ln", 1},   {"log", 1},   {"log2", 1}, {"log10", 1}, {"exp", 1}, {"sqrt", 1},
    {"abs", 1},  {"floor", 1}, {"ceil", 1}, {"min", 2},   {"max", 2}, {"pow", 2},
};

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& variables)
      : text_(text), variables_(variables) {}

  NodePtr parse() {
    auto root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw InvalidInput("expression '" + std::string(text_) + "' at offset " +
                       std::to_string(pos_) + ": " + message);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expression() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Node::Op::kAdd, {lhs, term()});
      } else if (accept('-')) {
        lhs = make(Node::Op::kSub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Node::Op::kMul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make(Node::Op::kDiv, {lhs, unary()});
      } else if (const char c = peek(); std::isalpha(static_cast<unsigned char>(c)) || c == '(') {
        lhs = make(Node::Op::kMul, {lhs, power()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::kNeg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return make(Node::Op::kPow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (accept('(')) {
      auto inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    // Parse only digits, '.', and an exponent so that "2k" stops at 'k'.
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && std::isdigit(static_cast<unsigned char>(text_[look]))) {
        pos_ = look;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || end != text_.data() + pos_) fail("malformed number");
    auto n = std::make_shared<Node>();
    n->op = Node::Op::kConst;
    n->value = value;
    return n;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));

    if (peek() == '(') {
      const auto* info = std::find_if(std::begin(kFunctions), std::end(kFunctions),
                                      [&](const FunctionInfo& f) { return f.name == name; });
      if (info == std::end(kFunctions)) fail("unknown function '" + name + "'");
      accept('(');
      std::vector<NodePtr> args;
      if (!accept(')')) {
        do {
          args.push_back(expression());
        } while (accept(','));
        if (!accept(')')) fail("expected ')' after arguments of '" + name + "'");
      }
      if (args.size() != info->arity) {
        fail("function '" + name + "' takes " + std::to_string(info->arity) + " argument(s)");
      }
      auto call = std::make_shared<Node>();
      call->op = Node::Op::kCall;
      call->fn = name;
      call->args = std::move(args);
      return call;
    }

    const auto var = std::find(variables_.begin(), variables_.end(), name);
    auto n = std::make_shared<Node>();
    if (var != variables_.end()) {
      n->op = Node::Op::kVar;
      n->var = static_cast<std::size_t>(var - variables_.begin());
    } else if (name == "pi") {
      n->value = std::numbers::pi;
    } else if (name == "e") {
      n->value = std::numbers::e;
    } else {
      fail("unknown identifier '" + name + "'");
    }
    return n;
  }

  std::string_view text_;
  const std::vector<std::string>& variables_;
  std::size_t pos_ = 0;
};

double call(const std::string& fn, double a, double b) {
  if (fn == "ln" || fn == "log") return std::log(a);
  if (fn == "log2") return std::log2(a);
  if (fn == "log10") return std::log10(a);
  if (fn == "exp") return std::exp(a);
  if (fn == "sqrt") return std::sqrt(a);
  if (fn == "abs") return std::fabs(a);
  if (fn == "floor") return std::floor(a);
  if (fn == "ceil") return std::ceil(a);
  if (fn == "min") return std::min(a, b);
  if (fn == "max") return std::max(a, b);
  return std::pow(a, b);
}

double eval(const Node& n, std::span<const double> values) {
  switch (n.op) {
    case Node::Op::kConst:
      return n.value;
    case Node::Op::kVar:
      return values[n.var];
    case Node::Op::kNeg:
      return -eval(*n.args[0], values);
    case Node::Op::kAdd:
      return eval(*n.args[0], values) + eval(*n.args[1], values);
    case Node::Op::kSub:
      return eval(*n.args[0], values) - eval(*n.args[1], values);
    case Node::Op::kMul:
      return eval(*n.args[0], values) * eval(*n.args[1], values);
    case Node::Op::kDiv:
      return eval(*n.args[0], values) / eval(*n.args[1], values);
    case Node::Op::kPow:
      return std::pow(eval(*n.args[0], values), eval(*n.args[1], values));
    case Node::Op::kCall: {
      const double a = eval(*n.args[0], values);
      const double b = n.args.size() > 1 ? eval(*n.args[1], values) : 0.0;
      return call(n.fn, a, b);
    }
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view text, std::vector<std::string> variables) {
  Expression e;
  e.text_ = std::string(text);
  e.variables_ = std::move(variables);
  e.root_ = Parser(e.text_, e.variables_).parse();
  return e;
}

double Expression::evaluate(std::span<const double> values) const {
  if (values.size() != variables_.size()) {
    throw InvalidInput("expression '" + text_ + "' expects " + std::to_string(variables_.size()) +
                       " variable value(s)");
  }
  return eval(*root_, values);
}

}  // namespace lkoethe
