#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lkoethe {

// Arithmetic formula over named real variables, compiled once and evaluated
// many times. Supports + - * / ^, unary minus, implicit multiplication by a
// numeric literal ("2k"), the constants pi and e, and the functions
// ln log log2 log10 exp sqrt abs floor ceil min max pow.
class Expression {
 public:
  // Throws InvalidInput naming the offending position.
  static Expression parse(std::string_view text, std::vector<std::string> variables);

  // `values` follow the order of the variable list given to parse().
  double evaluate(std::span<const double> values) const;

  const std::string& text() const noexcept { return text_; }
  const std::vector<std::string>& variables() const noexcept { return variables_; }

  struct Node;

 private:
  Expression() = default;

  std::string text_;
  std::vector<std::string> variables_;
  std::shared_ptr<const Node> root_;
};

}  // namespace lkoethe
