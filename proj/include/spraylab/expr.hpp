// Arithmetic expression mini-language used by scene configs.
//
// Grammar (loosest binding first):
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?          -- right associative
//   primary:= number | ident | ident '(' expr ')' | '(' expr ')'
//
// Variables: x, y, r (= sqrt(x^2+y^2)), theta.  Constant: pi.
// Functions: sin cos tan exp log sqrt atan abs.
// Unknown identifiers are rejected at parse time, with a 1-based position.
#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace spraylab {

struct ExprError : std::runtime_error {
    size_t position;  // 1-based offset into the source text
    ExprError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

struct EvalEnv {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

class Expression {
  public:
    double eval(const EvalEnv& env) const { return eval_node(root_, env); }
    double eval(double x, double y, double theta = 0.0) const { return eval({x, y, theta}); }
    const std::string& source() const { return source_; }

    static Expression parse(const std::string& text);

  private:
    enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Var { X, Y, R, Theta };
    enum class Fn { Sin, Cos, Tan, Exp, Log, Sqrt, Atan, Abs };

    struct Node {
        Op op;
        double num = 0.0;
        Var var = Var::X;
        Fn fn = Fn::Sin;
        int a = -1, b = -1;
    };

    static double eval_fn(Fn f, double v) {
        switch (f) {
            case Fn::Sin: return std::sin(v);
            case Fn::Cos: return std::cos(v);
            case Fn::Tan: return std::tan(v);
            case Fn::Exp: return std::exp(v);
            case Fn::Log: return std::log(v);
            case Fn::Sqrt: return std::sqrt(v);
            case Fn::Atan: return std::atan(v);
            case Fn::Abs: return std::fabs(v);
        }
        return 0.0;
    }

    double eval_node(int id, const EvalEnv& env) const {
        const Node& n = nodes_[id];
        switch (n.op) {
            case Op::Num: return n.num;
            case Op::Var:
                switch (n.var) {
                    case Var::X: return env.x;
                    case Var::Y: return env.y;
                    case Var::R: return std::hypot(env.x, env.y);
                    case Var::Theta: return env.theta;
                }
                return 0.0;
            case Op::Neg: return -eval_node(n.a, env);
            case Op::Add: return eval_node(n.a, env) + eval_node(n.b, env);
            case Op::Sub: return eval_node(n.a, env) - eval_node(n.b, env);
            case Op::Mul: return eval_node(n.a, env) * eval_node(n.b, env);
            case Op::Div: return eval_node(n.a, env) / eval_node(n.b, env);
            case Op::Pow: return std::pow(eval_node(n.a, env), eval_node(n.b, env));
            case Op::Call: return eval_fn(n.fn, eval_node(n.a, env));
        }
        return 0.0;
    }

    class Parser;
    friend class Parser;

    std::vector<Node> nodes_;
    int root_ = -1;
    std::string source_;
};

class Expression::Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    Expression run() {
        Expression e;
        e.source_ = text_;
        out_ = &e;
        skip_ws();
        e.root_ = parse_expr();
        skip_ws();
        if (pos_ < text_.size()) fail("unexpected trailing input");
        if (e.root_ < 0) fail("empty expression");
        return e;
    }

  private:
    int add(Node n) {
        out_->nodes_.push_back(n);
        return static_cast<int>(out_->nodes_.size()) - 1;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ExprError(msg, pos_ + 1); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            if (eat('+')) {
                int rhs = parse_term();
                lhs = add({Op::Add, 0, Var::X, Fn::Sin, lhs, rhs});
            } else if (eat('-')) {
                int rhs = parse_term();
                lhs = add({Op::Sub, 0, Var::X, Fn::Sin, lhs, rhs});
            } else {
                return lhs;
            }
        }
    }

    int parse_term() {
        int lhs = parse_unary();
        for (;;) {
            if (eat('*')) {
                int rhs = parse_unary();
                lhs = add({Op::Mul, 0, Var::X, Fn::Sin, lhs, rhs});
            } else if (eat('/')) {
                int rhs = parse_unary();
                lhs = add({Op::Div, 0, Var::X, Fn::Sin, lhs, rhs});
            } else {
                return lhs;
            }
        }
    }

    int parse_unary() {
        if (eat('-')) {
            int a = parse_unary();
            return add({Op::Neg, 0, Var::X, Fn::Sin, a, -1});
        }
        return parse_power();
    }

    int parse_power() {
        int base = parse_primary();
        if (eat('^')) {
            int exp = parse_unary();  // right associative, exponent may be signed
            return add({Op::Pow, 0, Var::X, Fn::Sin, base, exp});
        }
        return base;
    }

    int parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        if (c == '(') {
            ++pos_;
            int e = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    int parse_number() {
        const char* begin = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<size_t>(end - begin);
        return add({Op::Num, v, Var::X, Fn::Sin, -1, -1});
    }

    int parse_ident() {
        const size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string id = text_.substr(start, pos_ - start);

        if (id == "pi") return add({Op::Num, M_PI, Var::X, Fn::Sin, -1, -1});
        if (id == "x") return add({Op::Var, 0, Var::X, Fn::Sin, -1, -1});
        if (id == "y") return add({Op::Var, 0, Var::Y, Fn::Sin, -1, -1});
        if (id == "r") return add({Op::Var, 0, Var::R, Fn::Sin, -1, -1});
        if (id == "theta") return add({Op::Var, 0, Var::Theta, Fn::Sin, -1, -1});

        Fn fn;
        if (id == "sin") fn = Fn::Sin;
        else if (id == "cos") fn = Fn::Cos;
        else if (id == "tan") fn = Fn::Tan;
        else if (id == "exp") fn = Fn::Exp;
        else if (id == "log") fn = Fn::Log;
        else if (id == "sqrt") fn = Fn::Sqrt;
        else if (id == "atan") fn = Fn::Atan;
        else if (id == "abs") fn = Fn::Abs;
        else {
            pos_ = start;
            fail("unknown identifier '" + id + "'");
        }
        if (!eat('(')) fail("expected '(' after function name");
        int arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return add({Op::Call, 0, Var::X, fn, arg, -1});
    }

    const std::string& text_;
    size_t pos_ = 0;
    Expression* out_ = nullptr;
};

inline Expression Expression::parse(const std::string& text) { return Parser(text).run(); }

}  // namespace spraylab
