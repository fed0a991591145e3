#include "dquad/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>
#include <variant>
#include <vector>

namespace dquad::expr {

struct Expression::Node {
    struct Constant {
        double value;
    };
    struct Variable {
        Var which;
    };
    struct Pi {};
    struct Unary {
        UnaryOp op;
        std::shared_ptr<const Node> operand;
    };
    struct Binary {
        BinaryOp op;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    std::variant<Constant, Variable, Pi, Unary, Binary> data;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::Negate: return "negate";
        case UnaryOp::Sin: return "sin";
        case UnaryOp::Cos: return "cos";
        case UnaryOp::Exp: return "exp";
        case UnaryOp::Abs: return "abs";
        case UnaryOp::Sqrt: return "sqrt";
    }
    return "?";
}

const char* binary_symbol(BinaryOp op) {
    switch (op) {
        case BinaryOp::Add: return "+";
        case BinaryOp::Sub: return "-";
        case BinaryOp::Mul: return "*";
        case BinaryOp::Div: return "/";
        case BinaryOp::Pow: return "^";
    }
    return "?";
}

double require_finite(double v, const char* kind) {
    if (!std::isfinite(v)) {
        throw EvalDomainError(std::string(kind) + ": result is not finite",
                              kind);
    }
    return v;
}

double eval_node(const Expression::Node& n, double x, double y);

double eval_unary(UnaryOp op, double v) {
    switch (op) {
        case UnaryOp::Negate: return -v;
        case UnaryOp::Sin: return std::sin(v);
        case UnaryOp::Cos: return std::cos(v);
        case UnaryOp::Exp: return require_finite(std::exp(v), "exp");
        case UnaryOp::Abs: return std::fabs(v);
        case UnaryOp::Sqrt:
            if (v < 0.0) {
                throw EvalDomainError("sqrt: negative argument", "sqrt");
            }
            return std::sqrt(v);
    }
    return 0.0;
}

double eval_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return require_finite(a + b, "add");
        case BinaryOp::Sub: return require_finite(a - b, "sub");
        case BinaryOp::Mul: return require_finite(a * b, "mul");
        case BinaryOp::Div:
            if (b == 0.0) {
                throw EvalDomainError("div: division by zero", "div");
            }
            return require_finite(a / b, "div");
        case BinaryOp::Pow:
            if (a < 0.0 && std::rint(b) != b) {
                throw EvalDomainError(
                    "pow: negative base with non-integer exponent", "pow");
            }
            if (a == 0.0 && b < 0.0) {
                throw EvalDomainError("pow: zero base with negative exponent",
                                      "pow");
            }
            return require_finite(std::pow(a, b), "pow");
    }
    return 0.0;
}

double eval_node(const Expression::Node& n, double x, double y) {
    return std::visit(
        Overloaded{
            [](const Expression::Node::Constant& c) { return c.value; },
            [&](const Expression::Node::Variable& v) {
                return v.which == Var::X ? x : y;
            },
            [](const Expression::Node::Pi&) { return std::numbers::pi; },
            [&](const Expression::Node::Unary& u) {
                return eval_unary(u.op, eval_node(*u.operand, x, y));
            },
            [&](const Expression::Node::Binary& b) {
                double lhs = eval_node(*b.lhs, x, y);
                double rhs = eval_node(*b.rhs, x, y);
                return eval_binary(b.op, lhs, rhs);
            },
        },
        n.data);
}

void collect_vars(const Expression::Node& n, std::set<Var>& out) {
    std::visit(Overloaded{
                   [](const Expression::Node::Constant&) {},
                   [&](const Expression::Node::Variable& v) {
                       out.insert(v.which);
                   },
                   [](const Expression::Node::Pi&) {},
                   [&](const Expression::Node::Unary& u) {
                       collect_vars(*u.operand, out);
                   },
                   [&](const Expression::Node::Binary& b) {
                       collect_vars(*b.lhs, out);
                       collect_vars(*b.rhs, out);
                   },
               },
               n.data);
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void print_node(const Expression::Node& n, std::string& out) {
    std::visit(
        Overloaded{
            [&](const Expression::Node::Constant& c) {
                out += format_double(c.value);
            },
            [&](const Expression::Node::Variable& v) {
                out += (v.which == Var::X ? 'x' : 'y');
            },
            [&](const Expression::Node::Pi&) { out += "pi"; },
            [&](const Expression::Node::Unary& u) {
                if (u.op == UnaryOp::Negate) {
                    out += "(-";
                    print_node(*u.operand, out);
                    out += ')';
                } else {
                    out += unary_name(u.op);
                    out += '(';
                    print_node(*u.operand, out);
                    out += ')';
                }
            },
            [&](const Expression::Node::Binary& b) {
                out += '(';
                print_node(*b.lhs, out);
                out += binary_symbol(b.op);
                print_node(*b.rhs, out);
                out += ')';
            },
        },
        n.data);
}

bool nodes_equal(const Expression::Node& a, const Expression::Node& b) {
    if (a.data.index() != b.data.index()) return false;
    return std::visit(
        Overloaded{
            [&](const Expression::Node::Constant& ca) {
                const auto& cb =
                    std::get<Expression::Node::Constant>(b.data);
                return ca.value == cb.value;
            },
            [&](const Expression::Node::Variable& va) {
                const auto& vb =
                    std::get<Expression::Node::Variable>(b.data);
                return va.which == vb.which;
            },
            [&](const Expression::Node::Pi&) { return true; },
            [&](const Expression::Node::Unary& ua) {
                const auto& ub = std::get<Expression::Node::Unary>(b.data);
                return ua.op == ub.op && nodes_equal(*ua.operand, *ub.operand);
            },
            [&](const Expression::Node::Binary& ba) {
                const auto& bb = std::get<Expression::Node::Binary>(b.data);
                return ba.op == bb.op && nodes_equal(*ba.lhs, *bb.lhs) &&
                       nodes_equal(*ba.rhs, *bb.rhs);
            },
        },
        a.data);
}

NodePtr make_constant(double v) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Expression::Node::Constant{v}});
}
NodePtr make_variable(Var v) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Expression::Node::Variable{v}});
}
NodePtr make_pi() {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Expression::Node::Pi{}});
}
NodePtr make_unary(UnaryOp op, NodePtr operand) {
    return std::make_shared<const Expression::Node>(
        Expression::Node{Expression::Node::Unary{op, std::move(operand)}});
}
NodePtr make_binary(BinaryOp op, NodePtr lhs, NodePtr rhs) {
    return std::make_shared<const Expression::Node>(Expression::Node{
        Expression::Node::Binary{op, std::move(lhs), std::move(rhs)}});
}

enum class TokKind {
    Number,
    Ident,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
};

struct Token {
    TokKind kind;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && is_space(src_[pos_])) ++pos_;
        std::size_t start = pos_;
        if (pos_ >= src_.size()) return {TokKind::End, 0.0, "", start};

        char c = src_[pos_];
        switch (c) {
            case '+': ++pos_; return {TokKind::Plus, 0.0, "+", start};
            case '-': ++pos_; return {TokKind::Minus, 0.0, "-", start};
            case '*': ++pos_; return {TokKind::Star, 0.0, "*", start};
            case '/': ++pos_; return {TokKind::Slash, 0.0, "/", start};
            case '^': ++pos_; return {TokKind::Caret, 0.0, "^", start};
            case '(': ++pos_; return {TokKind::LParen, 0.0, "(", start};
            case ')': ++pos_; return {TokKind::RParen, 0.0, ")", start};
            default: break;
        }
        if (is_digit(c) || c == '.') return lex_number(start);
        if (is_alpha(c)) {
            while (pos_ < src_.size() && is_alpha(src_[pos_])) ++pos_;
            return {TokKind::Ident, 0.0,
                    std::string(src_.substr(start, pos_ - start)), start};
        }
        throw ParseError(std::string("unexpected character '") + c + "'",
                         start);
    }

  private:
    static bool is_space(char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
    }
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    }

    // digits ["." digits] [("e"|"E") [sign] digits], or ".5" style.
    Token lex_number(std::size_t start) {
        std::size_t p = pos_;
        while (p < src_.size() && is_digit(src_[p])) ++p;
        bool int_digits = p > pos_;
        if (p < src_.size() && src_[p] == '.') {
            ++p;
            std::size_t frac_start = p;
            while (p < src_.size() && is_digit(src_[p])) ++p;
            if (!int_digits && p == frac_start) {
                throw ParseError("malformed number", start);
            }
        } else if (!int_digits) {
            throw ParseError("malformed number", start);
        }
        if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
            std::size_t q = p + 1;
            if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
            std::size_t exp_start = q;
            while (q < src_.size() && is_digit(src_[q])) ++q;
            if (q == exp_start) throw ParseError("malformed exponent", start);
            p = q;
        }
        double value = 0.0;
        auto res = std::from_chars(src_.data() + start, src_.data() + p, value);
        if (res.ec == std::errc::result_out_of_range || !std::isfinite(value)) {
            throw ParseError("number out of range", start);
        }
        if (res.ec != std::errc() || res.ptr != src_.data() + p) {
            throw ParseError("malformed number", start);
        }
        pos_ = p;
        return {TokKind::Number, value,
                std::string(src_.substr(start, p - start)), start};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

class Parser {
  public:
    explicit Parser(std::string_view src) : lexer_(src) { advance(); }

    NodePtr parse() {
        if (cur_.kind == TokKind::End) {
            throw ParseError("empty input", cur_.offset);
        }
        NodePtr n = parse_expr();
        if (cur_.kind != TokKind::End) {
            throw ParseError("unexpected token '" + cur_.text + "'",
                             cur_.offset);
        }
        return n;
    }

  private:
    static constexpr int kMaxDepth = 1024;

    void advance() { cur_ = lexer_.next(); }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : parser(p) {
            if (++parser.depth_ > kMaxDepth) {
                throw ParseError("nesting too deep", parser.cur_.offset);
            }
        }
        ~DepthGuard() { --parser.depth_; }
        Parser& parser;
    };

    NodePtr parse_expr() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_term();
        while (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
            BinaryOp op = cur_.kind == TokKind::Plus ? BinaryOp::Add
                                                     : BinaryOp::Sub;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_term());
        }
        return lhs;
    }

    NodePtr parse_term() {
        DepthGuard guard(*this);
        NodePtr lhs = parse_unary();
        while (cur_.kind == TokKind::Star || cur_.kind == TokKind::Slash) {
            BinaryOp op = cur_.kind == TokKind::Star ? BinaryOp::Mul
                                                     : BinaryOp::Div;
            advance();
            lhs = make_binary(op, std::move(lhs), parse_unary());
        }
        return lhs;
    }

    NodePtr parse_unary() {
        DepthGuard guard(*this);
        if (cur_.kind == TokKind::Minus) {
            advance();
            return make_unary(UnaryOp::Negate, parse_unary());
        }
        return parse_power();
    }

    // Exponent re-enters parse_unary so "2^-3" works and "^" is
    // right-associative.
    NodePtr parse_power() {
        DepthGuard guard(*this);
        NodePtr base = parse_primary();
        if (cur_.kind == TokKind::Caret) {
            advance();
            return make_binary(BinaryOp::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    NodePtr parse_primary() {
        DepthGuard guard(*this);
        switch (cur_.kind) {
            case TokKind::Number: {
                double v = cur_.number;
                advance();
                return make_constant(v);
            }
            case TokKind::Ident: {
                Token tok = cur_;
                advance();
                if (tok.text == "x") return make_variable(Var::X);
                if (tok.text == "y") return make_variable(Var::Y);
                if (tok.text == "pi") return make_pi();
                UnaryOp op;
                if (tok.text == "sin") op = UnaryOp::Sin;
                else if (tok.text == "cos") op = UnaryOp::Cos;
                else if (tok.text == "exp") op = UnaryOp::Exp;
                else if (tok.text == "abs") op = UnaryOp::Abs;
                else if (tok.text == "sqrt") op = UnaryOp::Sqrt;
                else {
                    throw ParseError("unknown identifier '" + tok.text + "'",
                                     tok.offset);
                }
                expect(TokKind::LParen, "expected '(' after function name");
                NodePtr arg = parse_expr();
                expect(TokKind::RParen, "expected ')'");
                return make_unary(op, std::move(arg));
            }
            case TokKind::LParen: {
                advance();
                NodePtr inner = parse_expr();
                expect(TokKind::RParen, "expected ')'");
                return inner;
            }
            case TokKind::End:
                throw ParseError("unexpected end of input", cur_.offset);
            default:
                throw ParseError("unexpected token '" + cur_.text + "'",
                                 cur_.offset);
        }
    }

    void expect(TokKind kind, const char* message) {
        if (cur_.kind != kind) throw ParseError(message, cur_.offset);
        advance();
    }

    Lexer lexer_;
    Token cur_;
    int depth_ = 0;
};

}  // namespace

Expression::Expression(std::shared_ptr<const Node> root)
    : root_(std::move(root)) {}

Expression Expression::parse(std::string_view source) {
    Parser parser(source);
    return Expression(parser.parse());
}

Expression Expression::constant(double value) {
    return Expression(make_constant(value));
}

Expression Expression::variable(Var v) {
    return Expression(make_variable(v));
}

Expression Expression::pi() { return Expression(make_pi()); }

Expression Expression::unary(UnaryOp op, Expression operand) {
    return Expression(make_unary(op, std::move(operand.root_)));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
    return Expression(
        make_binary(op, std::move(lhs.root_), std::move(rhs.root_)));
}

double Expression::evaluate(double x, double y) const {
    return eval_node(*root_, x, y);
}

std::set<Var> Expression::free_variables() const {
    std::set<Var> vars;
    collect_vars(*root_, vars);
    return vars;
}

std::string Expression::to_string() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

bool operator==(const Expression& a, const Expression& b) {
    return nodes_equal(*a.root_, *b.root_);
}

}  // namespace dquad::expr
