#include "transquad/expr.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <vector>

#include "transquad/errors.hpp"

namespace transquad {

struct Expr::Node {
    enum class Op {
        num, var, add, sub, mul, div, pow, neg,
        cos, sin, tan, atan, exp, log, sqrt, abs, floor, ceil, upfloor,
        min, max
    };
    Op op;
    double value = 0.0;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    explicit Parser(const std::string& text) : s(text) {}

    void skip() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip();
        return pos < s.size() ? s[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw BadSpec("expression error at offset " + std::to_string(pos) + ": " + msg);
    }

    NodePtr make(Node::Op op, NodePtr l = nullptr, NodePtr r = nullptr) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr() {
        NodePtr n = term();
        while (true) {
            if (eat('+'))
                n = make(Node::Op::add, n, term());
            else if (eat('-'))
                n = make(Node::Op::sub, n, term());
            else
                return n;
        }
    }

    NodePtr term() {
        NodePtr n = factor();
        while (true) {
            if (eat('*'))
                n = make(Node::Op::mul, n, factor());
            else if (eat('/'))
                n = make(Node::Op::div, n, factor());
            else
                return n;
        }
    }

    NodePtr factor() {
        // A leading minus applies to the whole power: -2^2 is -(2^2).
        if (eat('-')) return make(Node::Op::neg, factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Node::Op::pow, base, factor());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos >= s.size()) fail("unexpected end of input");
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
        if (eat('(')) {
            NodePtr n = expr();
            if (!eat(')')) fail("expected ')'");
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr number() {
        std::size_t end = pos;
        while (end < s.size() &&
               (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                s[end] == 'e' || s[end] == 'E' ||
                ((s[end] == '+' || s[end] == '-') && end > pos &&
                 (s[end - 1] == 'e' || s[end - 1] == 'E'))))
            ++end;
        auto n = std::make_shared<Node>();
        n->op = Node::Op::num;
        try {
            n->value = std::stod(s.substr(pos, end - pos));
        } catch (...) {
            fail("bad number");
        }
        pos = end;
        return n;
    }

    NodePtr ident() {
        std::size_t end = pos;
        while (end < s.size() && (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_'))
            ++end;
        std::string name = s.substr(pos, end - pos);
        pos = end;
        if (name == "pi") {
            auto n = std::make_shared<Node>();
            n->op = Node::Op::num;
            n->value = M_PI;
            return n;
        }
        static const std::map<std::string, Node::Op> unary_fns = {
            {"cos", Node::Op::cos},     {"sin", Node::Op::sin},   {"tan", Node::Op::tan},
            {"atan", Node::Op::atan},   {"exp", Node::Op::exp},   {"log", Node::Op::log},
            {"sqrt", Node::Op::sqrt},   {"abs", Node::Op::abs},   {"floor", Node::Op::floor},
            {"ceil", Node::Op::ceil},   {"upfloor", Node::Op::upfloor}};
        static const std::map<std::string, Node::Op> binary_fns = {
            {"pow", Node::Op::pow}, {"min", Node::Op::min}, {"max", Node::Op::max}};
        if (auto it = unary_fns.find(name); it != unary_fns.end()) {
            if (!eat('(')) fail(name + " expects '('");
            NodePtr arg = expr();
            if (!eat(')')) fail("expected ')'");
            return make(it->second, arg);
        }
        if (auto it = binary_fns.find(name); it != binary_fns.end()) {
            if (!eat('(')) fail(name + " expects '('");
            NodePtr a = expr();
            if (!eat(',')) fail("expected ','");
            NodePtr b = expr();
            if (!eat(')')) fail("expected ')'");
            return make(it->second, a, b);
        }
        if (peek() == '(') fail("unknown function: " + name);
        auto n = std::make_shared<Node>();
        n->op = Node::Op::var;
        n->name = name;
        return n;
    }
};

double eval_node(const Node& n, const std::map<std::string, double>& env) {
    auto L = [&]() { return eval_node(*n.lhs, env); };
    auto R = [&]() { return eval_node(*n.rhs, env); };
    switch (n.op) {
    case Node::Op::num: return n.value;
    case Node::Op::var: {
        if (n.name == "e" && !env.count("e")) return M_E;
        auto it = env.find(n.name);
        if (it == env.end()) throw BadSpec("unbound variable: " + n.name);
        return it->second;
    }
    case Node::Op::add: return L() + R();
    case Node::Op::sub: return L() - R();
    case Node::Op::mul: return L() * R();
    case Node::Op::div: return L() / R();
    case Node::Op::pow: return std::pow(L(), R());
    case Node::Op::neg: return -L();
    case Node::Op::cos: return std::cos(L());
    case Node::Op::sin: return std::sin(L());
    case Node::Op::tan: return std::tan(L());
    case Node::Op::atan: return std::atan(L());
    case Node::Op::exp: return std::exp(L());
    case Node::Op::log: return std::log(L());
    case Node::Op::sqrt: return std::sqrt(L());
    case Node::Op::abs: return std::abs(L());
    case Node::Op::floor: return std::floor(L());
    case Node::Op::ceil: return std::ceil(L());
    case Node::Op::upfloor: return std::ceil(L());
    case Node::Op::min: return std::min(L(), R());
    case Node::Op::max: return std::max(L(), R());
    }
    throw Error("unreachable expression node");
}

} // namespace

Expr Expr::parse(const std::string& text) {
    Parser p(text);
    Expr e;
    e.root_ = p.expr();
    p.skip();
    if (p.pos != text.size()) p.fail("trailing input");
    e.text_ = text;
    return e;
}

double Expr::eval(const std::map<std::string, double>& env) const {
    if (!root_) throw Error("empty expression");
    return eval_node(*root_, env);
}

} // namespace transquad
