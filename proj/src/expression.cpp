#include "addfunc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "addfunc/errors.hpp"

namespace addfunc {

struct Expression::Node {
    enum class Op { constant, variable, add, sub, mul, div, pow, neg, abs, log, exp };
    Op op = Op::constant;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;

    double eval(double t) const {
        switch (op) {
            case Op::constant: return value;
            case Op::variable: return t;
            case Op::add: return lhs->eval(t) + rhs->eval(t);
            case Op::sub: return lhs->eval(t) - rhs->eval(t);
            case Op::mul: return lhs->eval(t) * rhs->eval(t);
            case Op::div: return lhs->eval(t) / rhs->eval(t);
            case Op::pow: return std::pow(lhs->eval(t), rhs->eval(t));
            case Op::neg: return -lhs->eval(t);
            case Op::abs: return std::fabs(lhs->eval(t));
            case Op::log: return std::log(lhs->eval(t));
            case Op::exp: return std::exp(lhs->eval(t));
        }
        return std::nan("");
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    NodePtr parse() {
        auto e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    std::string_view s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw PreconditionError("expression: " + what + " at column " + std::to_string(pos_ + 1) +
                                " in '" + std::string(s_) + "'");
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (eat('+')) lhs = make(Op::add, lhs, term());
            else if (eat('-')) lhs = make(Op::sub, lhs, term());
            else return lhs;
        }
    }

    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            if (eat('*')) lhs = make(Op::mul, lhs, unary());
            else if (eat('/')) lhs = make(Op::div, lhs, unary());
            else return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = atom();
        if (eat('^')) return make(Op::pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const std::string rest(s_.substr(pos_));
            char* end = nullptr;
            const double v = std::strtod(rest.c_str(), &end);
            if (end == rest.c_str()) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - rest.c_str());
            return make(Op::constant, nullptr, nullptr, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            if (name == "t") return make(Op::variable);
            Op op;
            if (name == "abs") op = Op::abs;
            else if (name == "log") op = Op::log;
            else if (name == "exp") op = Op::exp;
            else {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'");
            }
            if (!eat('(')) fail("expected '(' after function name");
            auto arg = expr();
            if (!eat(')')) fail("expected ')'");
            return make(op, arg);
        }
        fail("unexpected character");
    }
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = std::string(text);
    return e;
}

double Expression::operator()(double t) const { return root_->eval(t); }

}  // namespace addfunc
