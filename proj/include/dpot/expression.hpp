#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "dpot/errors.hpp"

namespace dpot {

/*
 * Small arithmetic expressions over one free variable, used wherever a
 * config file supplies a density, a scale function or a grid function:
 *
 *   expr    := term (('+'|'-') term)*
 *   term    := factor (('*'|'/') factor)*
 *   factor  := unary ('^' factor)?            right-associative power
 *   unary   := ('-'|'+') unary | primary
 *   primary := number | 'pi' | var | fn '(' expr {',' expr} ')' | '(' expr ')'
 *
 * Functions: exp, log, abs, min, max.  The free variable may be written
 * `x` or `y`; both name the same argument.  No user-defined functions.
 *
 * Expressions compile to a postfix program evaluated on a small stack,
 * so they are cheap enough for quadrature and simulation inner loops.
 */
class Expression {
  public:
    Expression() = default;

    static Expression parse(const std::string& text) {
        Expression e;
        e.source_ = text;
        Parser p{text, 0, &e.code_};
        p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size()) p.fail("unexpected trailing input");
        if (e.code_.empty()) p.fail("empty expression");
        return e;
    }

    double operator()(double x) const {
        double stack[64];
        int top = -1;
        for (const Op& op : code_) {
            switch (op.kind) {
                case OpKind::Const: stack[++top] = op.value; break;
                case OpKind::Var: stack[++top] = x; break;
                case OpKind::Neg: stack[top] = -stack[top]; break;
                case OpKind::Add: --top; stack[top] += stack[top + 1]; break;
                case OpKind::Sub: --top; stack[top] -= stack[top + 1]; break;
                case OpKind::Mul: --top; stack[top] *= stack[top + 1]; break;
                case OpKind::Div: --top; stack[top] /= stack[top + 1]; break;
                case OpKind::Pow: --top; stack[top] = std::pow(stack[top], stack[top + 1]); break;
                case OpKind::Exp: stack[top] = std::exp(stack[top]); break;
                case OpKind::Log: stack[top] = std::log(stack[top]); break;
                case OpKind::Abs: stack[top] = std::fabs(stack[top]); break;
                case OpKind::Min: --top; stack[top] = std::fmin(stack[top], stack[top + 1]); break;
                case OpKind::Max: --top; stack[top] = std::fmax(stack[top], stack[top + 1]); break;
            }
        }
        return stack[0];
    }

    bool empty() const { return code_.empty(); }
    const std::string& source() const { return source_; }

  private:
    enum class OpKind : std::uint8_t {
        Const, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Log, Abs, Min, Max
    };
    struct Op {
        OpKind kind;
        double value = 0.0;
    };

    struct Parser {
        const std::string& text;
        std::size_t pos;
        std::vector<Op>* out;

        [[noreturn]] void fail(const std::string& msg) const {
            throw ConfigError("expression error at column " + std::to_string(pos + 1) + ": " +
                              msg + " in \"" + text + "\"");
        }
        void skip_ws() {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < text.size() && text[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!eat(c)) fail(std::string("expected '") + c + "'");
        }

        void parse_expr() {
            parse_term();
            for (;;) {
                if (eat('+')) {
                    parse_term();
                    out->push_back({OpKind::Add});
                } else if (eat('-')) {
                    parse_term();
                    out->push_back({OpKind::Sub});
                } else {
                    return;
                }
            }
        }
        void parse_term() {
            parse_factor();
            for (;;) {
                if (eat('*')) {
                    parse_factor();
                    out->push_back({OpKind::Mul});
                } else if (eat('/')) {
                    parse_factor();
                    out->push_back({OpKind::Div});
                } else {
                    return;
                }
            }
        }
        // Unary minus binds more loosely than '^', so -x^2 is -(x^2).
        void parse_factor() {
            skip_ws();
            if (eat('-')) {
                parse_factor();
                out->push_back({OpKind::Neg});
                return;
            }
            if (eat('+')) {
                parse_factor();
                return;
            }
            parse_primary();
            if (eat('^')) {
                parse_factor();
                out->push_back({OpKind::Pow});
            }
        }
        void parse_primary() {
            skip_ws();
            if (pos >= text.size()) fail("unexpected end of expression");
            char c = text[pos];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double v;
                try {
                    v = std::stod(text.substr(pos), &used);
                } catch (const std::exception&) {
                    fail("malformed number");
                }
                pos += used;
                out->push_back({OpKind::Const, v});
                return;
            }
            if (c == '(') {
                ++pos;
                parse_expr();
                expect(')');
                return;
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < text.size() &&
                       std::isalnum(static_cast<unsigned char>(text[pos])))
                    ++pos;
                std::string name = text.substr(start, pos - start);
                if (name == "x" || name == "y") {
                    out->push_back({OpKind::Var});
                    return;
                }
                if (name == "pi") {
                    out->push_back({OpKind::Const, std::numbers::pi});
                    return;
                }
                if (name == "exp" || name == "log" || name == "abs") {
                    expect('(');
                    parse_expr();
                    expect(')');
                    out->push_back({name == "exp"   ? Op{OpKind::Exp}
                                    : name == "log" ? Op{OpKind::Log}
                                                    : Op{OpKind::Abs}});
                    return;
                }
                if (name == "min" || name == "max") {
                    expect('(');
                    parse_expr();
                    expect(',');
                    parse_expr();
                    expect(')');
                    out->push_back({name == "min" ? Op{OpKind::Min} : Op{OpKind::Max}});
                    return;
                }
                fail("unknown identifier '" + name + "'");
            }
            fail("unexpected character");
        }
    };

    std::vector<Op> code_;
    std::string source_;
};

}  // namespace dpot
