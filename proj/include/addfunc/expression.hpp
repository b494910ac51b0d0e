#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace addfunc {

/// A parsed scalar expression in one variable `t`.
///
/// Grammar (usual precedence, `^` right-associative and binding tighter than
/// unary minus, so `-t^2` is `-(t^2)`):
///
///     expr   := term (('+' | '-') term)*
///     term   := unary (('*' | '/') unary)*
///     unary  := '-' unary | '+' unary | power
///     power  := atom ('^' unary)?
///     atom   := number | 't' | func '(' expr ')' | '(' expr ')'
///     func   := abs | log | exp
///
/// Parsing failures throw PreconditionError with the offending column.
class Expression {
public:
    struct Node;

    static Expression parse(std::string_view text);

    double operator()(double t) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace addfunc
