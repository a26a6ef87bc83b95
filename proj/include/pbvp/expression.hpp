#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace pbvp {

/// Parse failure; position is the byte offset into the source text.
class ExprError : public std::runtime_error {
public:
    ExprError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"),
          position(pos) {}
    size_t position;
};

/// Compiled arithmetic expression in the variables t, x, y.
class Expression {
public:
    struct Node;
    Expression() = default;
    double eval(double t, double x, double y) const;
    bool valid() const { return root_ != nullptr; }
    const std::string& source() const { return src_; }

private:
    friend Expression parse_expression(const std::string&);
    std::shared_ptr<const Node> root_;
    std::string src_;
};

/// Grammar: sums of products of signed right-associative powers.
/// Functions: sin cos exp log sqrt abs (unary), pow min max (binary).
/// Constant pi.  Unknown names, arity mismatches, and trailing input
/// raise ExprError.
Expression parse_expression(const std::string& text);

}  // namespace pbvp
