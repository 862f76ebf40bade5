#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/jet.hpp"

namespace liouville {

// Grammar (whitespace-insensitive, no implicit multiplication):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] integer)?
//   primary := number | 't' | '(' expr ')' | name '(' expr ')'
//   name    := 'exp' | 'sin' | 'cos' | 'log'
//
// '^' binds tighter than unary minus, which binds tighter than '*' and '/'.
// Exponents are integer literals only.

enum class ExprKind { Number, Var, Add, Sub, Mul, Div, Neg, Pow, Call };
enum class CallFunc { Exp, Sin, Cos, Log };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    ExprKind kind;
    double number = 0.0;          // Number
    long long exponent = 0;       // Pow
    CallFunc func = CallFunc::Exp;  // Call
    ExprPtr lhs, rhs;             // binary: both; Neg/Pow/Call: lhs only

    static ExprPtr make_number(double v) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Number;
        e->number = v;
        return e;
    }
    static ExprPtr make_var() {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Var;
        return e;
    }
    static ExprPtr make_binary(ExprKind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
    static ExprPtr make_neg(ExprPtr a) {
        // unary minus on a literal folds into the literal, so the printer
        // can emit "-2" and reparse to an identical tree
        if (a->kind == ExprKind::Number) return make_number(-a->number);
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Neg;
        e->lhs = std::move(a);
        return e;
    }
    static ExprPtr make_pow(ExprPtr base, long long exponent) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Pow;
        e->lhs = std::move(base);
        e->exponent = exponent;
        return e;
    }
    static ExprPtr make_call(CallFunc f, ExprPtr a) {
        auto e = std::make_shared<Expr>();
        e->kind = ExprKind::Call;
        e->func = f;
        e->lhs = std::move(a);
        return e;
    }
};

inline bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprKind::Number: return a->number == b->number;
        case ExprKind::Var: return true;
        case ExprKind::Neg: return equal(a->lhs, b->lhs);
        case ExprKind::Pow: return a->exponent == b->exponent && equal(a->lhs, b->lhs);
        case ExprKind::Call: return a->func == b->func && equal(a->lhs, b->lhs);
        default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
    }
}

namespace detail {

class Parser {
  public:
    explicit Parser(const std::string& src) : s_(src) {}

    ExprPtr parse() {
        ExprPtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr expr() {
        ExprPtr e = term();
        for (;;) {
            if (consume('+'))
                e = Expr::make_binary(ExprKind::Add, e, term());
            else if (consume('-'))
                e = Expr::make_binary(ExprKind::Sub, e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        for (;;) {
            if (consume('*'))
                e = Expr::make_binary(ExprKind::Mul, e, unary());
            else if (consume('/'))
                e = Expr::make_binary(ExprKind::Div, e, unary());
            else
                return e;
        }
    }

    ExprPtr unary() {
        if (consume('-')) return Expr::make_neg(unary());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (consume('^')) {
            skip_ws();
            bool negative = false;
            if (pos_ < s_.size() && s_[pos_] == '-') {
                negative = true;
                ++pos_;
            }
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                fail("expected integer exponent after '^'");
            long long e = 0;
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                e = e * 10 + (s_[pos_] - '0');
                ++pos_;
            }
            if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E')) {
                pos_ = start;
                throw Error(ErrorKind::non_integer_exponent,
                            "exponent must be an integer literal (at offset " +
                                std::to_string(start) + ")");
            }
            return Expr::make_pow(base, negative ? -e : e);
        }
        return base;
    }

    ExprPtr primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            ExprPtr e = expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail("expected number, 't', function call, or '('");
    }

    ExprPtr number() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && s_[start] == '.')) fail("malformed number");
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                pos_ = mark;
                fail("malformed exponent in number");
            }
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        return Expr::make_number(std::strtod(s_.c_str() + start, nullptr));
    }

    ExprPtr identifier() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "t") return Expr::make_var();
        CallFunc f;
        if (name == "exp")
            f = CallFunc::Exp;
        else if (name == "sin")
            f = CallFunc::Sin;
        else if (name == "cos")
            f = CallFunc::Cos;
        else if (name == "log")
            f = CallFunc::Log;
        else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!consume('(')) fail("expected '(' after function name");
        ExprPtr arg = expr();
        if (!consume(')')) fail("expected ')'");
        return Expr::make_call(f, arg);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

// Operator precedence used by both the parser (implicitly, through the
// grammar) and the printer. Negative literals print with a leading '-', so
// they share the precedence of unary minus.
inline int precedence(const Expr& e) {
    switch (e.kind) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Neg: return 3;
        case ExprKind::Pow: return 4;
        case ExprKind::Number: return e.number < 0 ? 3 : 5;
        default: return 5;
    }
}

inline void print_to(const Expr& e, std::string& out);

inline void print_child(const ExprPtr& child, int min_prec, std::string& out) {
    if (precedence(*child) < min_prec) {
        out += '(';
        print_to(*child, out);
        out += ')';
    } else {
        print_to(*child, out);
    }
}

inline void print_to(const Expr& e, std::string& out) {
    switch (e.kind) {
        case ExprKind::Number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", e.number);
            out += buf;
            break;
        }
        case ExprKind::Var:
            out += 't';
            break;
        case ExprKind::Add:
            print_child(e.lhs, 1, out);
            out += " + ";
            print_child(e.rhs, 2, out);
            break;
        case ExprKind::Sub:
            print_child(e.lhs, 1, out);
            out += " - ";
            print_child(e.rhs, 2, out);
            break;
        case ExprKind::Mul:
            print_child(e.lhs, 2, out);
            out += "*";
            print_child(e.rhs, 3, out);
            break;
        case ExprKind::Div:
            print_child(e.lhs, 2, out);
            out += "/";
            print_child(e.rhs, 3, out);
            break;
        case ExprKind::Neg:
            out += '-';
            print_child(e.lhs, 3, out);
            break;
        case ExprKind::Pow:
            print_child(e.lhs, 5, out);
            out += '^';
            out += std::to_string(e.exponent);
            break;
        case ExprKind::Call:
            switch (e.func) {
                case CallFunc::Exp: out += "exp"; break;
                case CallFunc::Sin: out += "sin"; break;
                case CallFunc::Cos: out += "cos"; break;
                case CallFunc::Log: out += "log"; break;
            }
            out += '(';
            print_to(*e.lhs, out);
            out += ')';
            break;
    }
}

inline Jet eval_node(const Expr& e, const Jet& t) {
    switch (e.kind) {
        case ExprKind::Number: return Jet::constant(t.basepoint(), t.order(), e.number);
        case ExprKind::Var: return t;
        case ExprKind::Add: return eval_node(*e.lhs, t) + eval_node(*e.rhs, t);
        case ExprKind::Sub: return eval_node(*e.lhs, t) - eval_node(*e.rhs, t);
        case ExprKind::Mul: return eval_node(*e.lhs, t) * eval_node(*e.rhs, t);
        case ExprKind::Div: return eval_node(*e.lhs, t) / eval_node(*e.rhs, t);
        case ExprKind::Neg: return -eval_node(*e.lhs, t);
        case ExprKind::Pow: return pow(eval_node(*e.lhs, t), e.exponent);
        case ExprKind::Call: {
            Jet u = eval_node(*e.lhs, t);
            switch (e.func) {
                case CallFunc::Exp: return exp(u);
                case CallFunc::Sin: return sin(u);
                case CallFunc::Cos: return cos(u);
                case CallFunc::Log: return log(u);
            }
        }
    }
    throw Error(ErrorKind::domain_violation, "unreachable expression node");
}

}  // namespace detail

/// A parsed scalar function of t, evaluable to a jet at any basepoint.
class FunctionSpec {
  public:
    explicit FunctionSpec(const std::string& source)
        : source_(source), ast_(detail::Parser(source).parse()) {}

    static FunctionSpec from_ast(ExprPtr ast) { return FunctionSpec(std::move(ast)); }

    const std::string& source() const { return source_; }
    const ExprPtr& ast() const { return ast_; }

    std::string printed() const {
        std::string out;
        detail::print_to(*ast_, out);
        return out;
    }

    Jet eval_jet(double t0, int order) const {
        Jet result = detail::eval_node(*ast_, Jet::variable(t0, order));
        for (int i = 0; i <= order; ++i)
            if (!std::isfinite(result.coeff(i)))
                throw Error(ErrorKind::domain_violation,
                            "'" + (source_.empty() ? printed() : source_) +
                                "' is not finite at t0 = " + std::to_string(t0));
        return result;
    }

    double eval(double t0) const { return eval_jet(t0, 0).value(); }

  private:
    explicit FunctionSpec(ExprPtr ast) : ast_(std::move(ast)) {}

    std::string source_;
    ExprPtr ast_;
};

inline FunctionSpec parse(const std::string& source) { return FunctionSpec(source); }

/// Interval hint for choosing sample points; either end may be infinite.
struct DomainHint {
    double lo = -1.0;
    double hi = 1.0;
};

/// n parsed component functions sharing one variable.
struct VectorFunctionSpec {
    std::vector<FunctionSpec> components;
    DomainHint domain;

    VectorFunctionSpec(std::vector<FunctionSpec> comps, DomainHint dom = {})
        : components(std::move(comps)), domain(dom) {
        if (components.empty())
            throw Error(ErrorKind::dimension_mismatch, "vector function needs at least one component");
    }

    static VectorFunctionSpec parse_all(const std::vector<std::string>& sources, DomainHint dom = {}) {
        std::vector<FunctionSpec> comps;
        comps.reserve(sources.size());
        for (const auto& s : sources) comps.emplace_back(s);
        return VectorFunctionSpec(std::move(comps), dom);
    }

    int dimension() const { return static_cast<int>(components.size()); }
};

}  // namespace liouville
