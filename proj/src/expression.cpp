#include "pbvp/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace pbvp {

struct Expression::Node {
    enum class Op {
        konst,
        var_t,
        var_x,
        var_y,
        add,
        sub,
        mul,
        div,
        pow_op,
        neg,
        fn_sin,
        fn_cos,
        fn_exp,
        fn_log,
        fn_sqrt,
        fn_abs,
        fn_min,
        fn_max
    };
    Op op;
    double value = 0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = Node::Op;

NodePtr leaf(Op op, double v = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = v;
    return n;
}

NodePtr branch(Op op, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ < s_.size()) throw ExprError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr left = term();
        for (;;) {
            if (eat('+'))
                left = branch(Op::add, left, term());
            else if (eat('-'))
                left = branch(Op::sub, left, term());
            else
                return left;
        }
    }

    NodePtr term() {
        NodePtr left = unary();
        for (;;) {
            if (eat('*'))
                left = branch(Op::mul, left, unary());
            else if (eat('/'))
                left = branch(Op::div, left, unary());
            else
                return left;
        }
    }

    NodePtr unary() {
        if (eat('-')) return branch(Op::neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return branch(Op::pow_op, base, unary());  // right associative
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ExprError("unexpected end of expression", pos_);
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) throw ExprError("missing ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        throw ExprError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) throw ExprError("malformed number", pos_);
        pos_ += static_cast<size_t>(end - begin);
        return leaf(Op::konst, v);
    }

    NodePtr ident() {
        const size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "t") return leaf(Op::var_t);
        if (name == "x") return leaf(Op::var_x);
        if (name == "y") return leaf(Op::var_y);
        if (name == "pi") return leaf(Op::konst, 3.14159265358979323846);

        static const std::map<std::string, std::pair<Op, int>> fns = {
            {"sin", {Op::fn_sin, 1}},  {"cos", {Op::fn_cos, 1}},
            {"exp", {Op::fn_exp, 1}},  {"log", {Op::fn_log, 1}},
            {"sqrt", {Op::fn_sqrt, 1}}, {"abs", {Op::fn_abs, 1}},
            {"pow", {Op::pow_op, 2}},  {"min", {Op::fn_min, 2}},
            {"max", {Op::fn_max, 2}}};
        const auto it = fns.find(name);
        if (it == fns.end()) throw ExprError("unknown name '" + name + "'", start);
        if (!eat('(')) throw ExprError("'" + name + "' needs an argument list", pos_);
        NodePtr first = expr();
        NodePtr second;
        if (it->second.second == 2) {
            if (!eat(',')) throw ExprError("'" + name + "' takes two arguments", pos_);
            second = expr();
        }
        if (!eat(')')) throw ExprError("missing ')'", pos_);
        return branch(it->second.first, first, second);
    }
};

double eval_node(const Node& n, double t, double x, double y) {
    switch (n.op) {
        case Op::konst: return n.value;
        case Op::var_t: return t;
        case Op::var_x: return x;
        case Op::var_y: return y;
        case Op::add: return eval_node(*n.a, t, x, y) + eval_node(*n.b, t, x, y);
        case Op::sub: return eval_node(*n.a, t, x, y) - eval_node(*n.b, t, x, y);
        case Op::mul: return eval_node(*n.a, t, x, y) * eval_node(*n.b, t, x, y);
        case Op::div: return eval_node(*n.a, t, x, y) / eval_node(*n.b, t, x, y);
        case Op::pow_op: return std::pow(eval_node(*n.a, t, x, y), eval_node(*n.b, t, x, y));
        case Op::neg: return -eval_node(*n.a, t, x, y);
        case Op::fn_sin: return std::sin(eval_node(*n.a, t, x, y));
        case Op::fn_cos: return std::cos(eval_node(*n.a, t, x, y));
        case Op::fn_exp: return std::exp(eval_node(*n.a, t, x, y));
        case Op::fn_log: return std::log(eval_node(*n.a, t, x, y));
        case Op::fn_sqrt: return std::sqrt(eval_node(*n.a, t, x, y));
        case Op::fn_abs: return std::fabs(eval_node(*n.a, t, x, y));
        case Op::fn_min:
            return std::min(eval_node(*n.a, t, x, y), eval_node(*n.b, t, x, y));
        case Op::fn_max:
            return std::max(eval_node(*n.a, t, x, y), eval_node(*n.b, t, x, y));
    }
    return 0;  // unreachable
}

}  // namespace

double Expression::eval(double t, double x, double y) const {
    if (!root_) throw std::logic_error("Expression::eval on an empty expression");
    return eval_node(*root_, t, x, y);
}

Expression parse_expression(const std::string& text) {
    Expression e;
    e.src_ = text;
    e.root_ = Parser(text).run();
    return e;
}

}  // namespace pbvp
