#ifndef TRANSQUAD_EXPR_HPP
#define TRANSQUAD_EXPR_HPP

#include <map>
#include <memory>
#include <string>

namespace transquad {

/// Small arithmetic expression grammar for value formulas in spec files:
/// +, -, *, /, ^ (right associative), unary minus, parentheses, numbers,
/// named variables (e.g. n0, n1, n, i, t), constants pi and e, and the
/// functions cos, sin, tan, atan, exp, log, sqrt, abs, floor, ceil, upfloor,
/// pow, min, max. `upfloor(x)` is the integer m with m-1 < x <= m.
class Expr {
public:
    struct Node;

    static Expr parse(const std::string& text);
    double eval(const std::map<std::string, double>& env) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

} // namespace transquad

#endif
