// Minimal arithmetic grammar over the radius variable r, used for
// "expression" initial data in scenario configs:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := unary ('^' factor)?
//   unary  := '-'* primary
//   primary:= number | 'r' | name '(' expr ')' | '(' expr ')'
// with the functions exp, cosh, sinh, sech, tanh.
#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <string>

#include "yflow/errors.hpp"

namespace yflow {

class Expression {
public:
    /// Parses the expression or throws config_error with the offending
    /// position in the message.
    static Expression parse(const std::string& text) {
        Parser p{text, 0};
        Node root = p.parse_expr();
        p.skip_ws();
        if (p.pos != text.size())
            throw config_error("expression: unexpected '" + std::string(1, text[p.pos]) +
                               "' at position " + std::to_string(p.pos));
        return Expression(std::move(root));
    }

    double operator()(double r) const { return eval_(r); }

private:
    using Node = std::function<double(double)>;

    explicit Expression(Node n) : eval_(std::move(n)) {}

    struct Parser {
        const std::string& s;
        std::size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }

        Node parse_expr() {
            Node lhs = parse_term();
            for (;;) {
                if (eat('+')) {
                    Node rhs = parse_term();
                    lhs = [l = std::move(lhs), r = std::move(rhs)](double x) { return l(x) + r(x); };
                } else if (eat('-')) {
                    Node rhs = parse_term();
                    lhs = [l = std::move(lhs), r = std::move(rhs)](double x) { return l(x) - r(x); };
                } else {
                    return lhs;
                }
            }
        }
        Node parse_term() {
            Node lhs = parse_factor();
            for (;;) {
                if (eat('*')) {
                    Node rhs = parse_factor();
                    lhs = [l = std::move(lhs), r = std::move(rhs)](double x) { return l(x) * r(x); };
                } else if (eat('/')) {
                    Node rhs = parse_factor();
                    lhs = [l = std::move(lhs), r = std::move(rhs)](double x) { return l(x) / r(x); };
                } else {
                    return lhs;
                }
            }
        }
        Node parse_factor() {
            Node base = parse_unary();
            if (eat('^')) {
                Node expo = parse_factor(); // right associative
                return [b = std::move(base), e = std::move(expo)](double x) {
                    return std::pow(b(x), e(x));
                };
            }
            return base;
        }
        Node parse_unary() {
            if (eat('-')) {
                Node inner = parse_unary();
                return [i = std::move(inner)](double x) { return -i(x); };
            }
            return parse_primary();
        }
        Node parse_primary() {
            skip_ws();
            if (pos >= s.size()) throw config_error("expression: unexpected end of input");
            const char c = s[pos];
            if (c == '(') {
                ++pos;
                Node inner = parse_expr();
                if (!eat(')')) throw config_error("expression: missing ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                std::size_t used = 0;
                double value = 0.0;
                try {
                    value = std::stod(s.substr(pos), &used);
                } catch (const std::exception&) {
                    throw config_error("expression: bad number at position " + std::to_string(pos));
                }
                pos += used;
                return [value](double) { return value; };
            }
            if (std::isalpha(static_cast<unsigned char>(c))) {
                std::size_t end = pos;
                while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
                const std::string name = s.substr(pos, end - pos);
                pos = end;
                if (name == "r") return [](double x) { return x; };
                if (!eat('('))
                    throw config_error("expression: '" + name + "' must be followed by '('");
                Node arg = parse_expr();
                if (!eat(')')) throw config_error("expression: missing ')' after " + name);
                if (name == "exp")
                    return [a = std::move(arg)](double x) { return std::exp(a(x)); };
                if (name == "cosh")
                    return [a = std::move(arg)](double x) { return std::cosh(a(x)); };
                if (name == "sinh")
                    return [a = std::move(arg)](double x) { return std::sinh(a(x)); };
                if (name == "sech")
                    return [a = std::move(arg)](double x) { return 1.0 / std::cosh(a(x)); };
                if (name == "tanh")
                    return [a = std::move(arg)](double x) { return std::tanh(a(x)); };
                throw config_error("expression: unknown function '" + name + "'");
            }
            throw config_error("expression: unexpected '" + std::string(1, c) +
                               "' at position " + std::to_string(pos));
        }
    };

    Node eval_;
};

} // namespace yflow
