#include "minface/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

#include <fmt/format.h>

#include "minface/error.hpp"

namespace minface {

std::string_view to_string(Func fn) {
    switch (fn) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Atan: return "atan";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    }
    return "?";
}

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

constexpr int kMaxDepth = 200;
constexpr int kMaxExponent = 1 << 16;

std::optional<Func> lookup_function(std::string_view name) {
    static constexpr std::pair<std::string_view, Func> table[] = {
        {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},
        {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
        {"atan", Func::Atan}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
    };
    for (const auto& [n, f] : table) {
        if (n == name) return f;
    }
    return std::nullopt;
}

std::optional<double> lookup_constant(std::string_view name) {
    if (name == "pi") return std::numbers::pi;
    if (name == "e") return std::numbers::e;
    return std::nullopt;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t offset = 0;
    std::string_view text;
};

std::string_view describe(Tok t) {
    switch (t) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::End: return "end of input";
    }
    return "token";
}

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_digit = [&](std::size_t k) {
        return k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]));
    };
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (is_digit(i) || (c == '.' && is_digit(i + 1))) {
            while (is_digit(i)) ++i;
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (is_digit(i)) ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t k = i + 1;
                if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
                if (is_digit(k)) {
                    i = k;
                    while (is_digit(i)) ++i;
                }
            }
            out.push_back({Tok::Number, start, s.substr(start, i - start)});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
                ++i;
            }
            out.push_back({Tok::Ident, start, s.substr(start, i - start)});
            continue;
        }
        Tok k;
        switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default:
            throw Error(ErrorKind::Syntax,
                        fmt::format("unexpected character '{}' at offset {}", c, start), start);
        }
        out.push_back({k, start, s.substr(start, 1)});
        ++i;
    }
    out.push_back({Tok::End, s.size(), {}});
    return out;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src), toks_(lex(src)) {}

    NodePtr parse_all() {
        NodePtr root = expr(0);
        if (peek().kind != Tok::End) {
            fail(fmt::format("expected operator or end of input, found {}", describe(peek().kind)));
        }
        return root;
    }

    std::optional<std::string> variable() const { return variable_; }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& take() { return toks_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        const std::size_t off = peek().offset;
        throw Error(ErrorKind::Syntax, fmt::format("{} at offset {}", msg, off), off);
    }

    void enter(int depth) const {
        if (depth > kMaxDepth) fail("expression nested too deeply");
    }

    static Span join(const Span& a, const Span& b) {
        return {a.offset, b.offset + b.length - a.offset};
    }

    NodePtr expr(int depth) {
        enter(depth);
        NodePtr lhs = term(depth + 1);
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            const char op = take().kind == Tok::Plus ? '+' : '-';
            NodePtr rhs = term(depth + 1);
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr term(int depth) {
        enter(depth);
        NodePtr lhs = factor(depth + 1);
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            const char op = take().kind == Tok::Star ? '*' : '/';
            NodePtr rhs = factor(depth + 1);
            lhs = binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    NodePtr factor(int depth) {
        enter(depth);
        if (peek().kind == Tok::Minus) {
            const std::size_t start = take().offset;
            NodePtr operand = factor(depth + 1);
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Negate;
            n->span = join({start, 1}, operand->span);
            n->lhs = std::move(operand);
            return n;
        }
        return power(depth + 1);
    }

    NodePtr power(int depth) {
        enter(depth);
        NodePtr base = atom(depth + 1);
        if (peek().kind != Tok::Caret) return base;
        // Right associativity over integer literals folds to one exponent.
        std::vector<std::pair<long long, Span>> exps;
        while (peek().kind == Tok::Caret) {
            take();
            exps.push_back(integer_literal());
        }
        long long e = exps.back().first;
        for (std::size_t k = exps.size() - 1; k-- > 0;) {
            const long long b = exps[k].first;
            if (e < 0) {
                if (b != 1 && b != -1) {
                    throw Error(ErrorKind::NonIntegerExponent,
                                fmt::format("exponent {}^{} is not an integer", b, e),
                                exps[k].second.offset);
                }
                e = (b == -1 && (e % 2 != 0)) ? -1 : 1;
                continue;
            }
            long long r = 1;
            for (long long i = 0; i < e; ++i) {
                r *= b;
                if (r > kMaxExponent || r < -kMaxExponent) {
                    throw Error(ErrorKind::Syntax, "exponent too large", exps[k].second.offset);
                }
            }
            e = r;
        }
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Pow;
        n->exponent = static_cast<int>(e);
        n->span = join(base->span, exps.back().second);
        n->lhs = std::move(base);
        return n;
    }

    std::pair<long long, Span> integer_literal() {
        std::size_t start = peek().offset;
        bool negative = false;
        if (peek().kind == Tok::Minus) {
            negative = true;
            take();
        }
        const Token& t = peek();
        if (t.kind != Tok::Number) {
            throw Error(ErrorKind::NonIntegerExponent,
                        fmt::format("exponent must be an integer literal at offset {}", t.offset),
                        t.offset);
        }
        for (char c : t.text) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw Error(ErrorKind::NonIntegerExponent,
                            fmt::format("exponent '{}' is not an integer at offset {}", t.text,
                                        t.offset),
                            t.offset);
            }
        }
        long long v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || v > kMaxExponent) {
            throw Error(ErrorKind::Syntax, "exponent too large", t.offset);
        }
        take();
        return {negative ? -v : v, Span{start, t.offset + t.text.size() - start}};
    }

    NodePtr atom(int depth) {
        enter(depth);
        const Token t = peek();
        switch (t.kind) {
        case Tok::Number: {
            take();
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc() || !std::isfinite(v)) {
                throw Error(ErrorKind::Syntax,
                            fmt::format("invalid number '{}' at offset {}", t.text, t.offset),
                            t.offset);
            }
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::Constant;
            n->value = v;
            n->span = {t.offset, t.text.size()};
            return n;
        }
        case Tok::Ident: {
            take();
            if (peek().kind == Tok::LParen) {
                auto fn = lookup_function(t.text);
                if (!fn) {
                    throw Error(ErrorKind::Syntax,
                                fmt::format("unknown function '{}' at offset {}", t.text, t.offset),
                                t.offset);
                }
                take();
                NodePtr arg = expr(depth + 1);
                if (peek().kind != Tok::RParen) fail("expected ')'");
                const Token& close = take();
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::Call;
                n->fn = *fn;
                n->lhs = std::move(arg);
                n->span = {t.offset, close.offset + 1 - t.offset};
                return n;
            }
            if (lookup_function(t.text)) {
                fail(fmt::format("expected '(' after function '{}'", t.text));
            }
            auto n = std::make_shared<Node>();
            n->span = {t.offset, t.text.size()};
            n->name = std::string(t.text);
            if (auto c = lookup_constant(t.text)) {
                n->kind = Node::Kind::Constant;
                n->value = *c;
                return n;
            }
            n->kind = Node::Kind::Variable;
            if (variable_ && *variable_ != t.text) {
                throw Error(ErrorKind::MultipleVariables,
                            fmt::format("second variable '{}' (already using '{}') at offset {}",
                                        t.text, *variable_, t.offset),
                            t.offset);
            }
            variable_ = std::string(t.text);
            return n;
        }
        case Tok::LParen: {
            take();
            NodePtr inner = expr(depth + 1);
            if (peek().kind != Tok::RParen) fail("expected ')'");
            take();
            return inner;
        }
        default:
            fail(fmt::format("expected number, identifier or '(', found {}", describe(t.kind)));
        }
    }

    static NodePtr binary(char op, NodePtr lhs, NodePtr rhs) {
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::Binary;
        n->op = op;
        n->span = join(lhs->span, rhs->span);
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::optional<std::string> variable_;
};

Jet3 apply(Func fn, const Jet3& a) {
    switch (fn) {
    case Func::Sin: return sin(a);
    case Func::Cos: return cos(a);
    case Func::Tan: return tan(a);
    case Func::Exp: return exp(a);
    case Func::Log: return log(a);
    case Func::Sqrt: return sqrt(a);
    case Func::Atan: return atan(a);
    case Func::Sinh: return sinh(a);
    case Func::Cosh: return cosh(a);
    }
    return a;
}

template <class F>
auto with_span(const Node& n, F&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& err) {
        if (err.offset()) throw;
        throw Error(err.kind(),
                    fmt::format("{} (at offset {}, length {})", err.what(), n.span.offset,
                                n.span.length),
                    n.span.offset, err.location());
    }
}

Jet3 eval_node(const Node& n, const Jet3& at) {
    switch (n.kind) {
    case Node::Kind::Constant: return Jet3::constant(n.value);
    case Node::Kind::Variable: return at;
    case Node::Kind::Negate: return -eval_node(*n.lhs, at);
    case Node::Kind::Binary: {
        const Jet3 a = eval_node(*n.lhs, at);
        const Jet3 b = eval_node(*n.rhs, at);
        return with_span(n, [&] {
            switch (n.op) {
            case '+': return a + b;
            case '-': return a - b;
            case '*': return a * b;
            default: return a / b;
            }
        });
    }
    case Node::Kind::Pow: {
        const Jet3 a = eval_node(*n.lhs, at);
        return with_span(n, [&] { return pow_int(a, n.exponent); });
    }
    case Node::Kind::Call: {
        const Jet3 a = eval_node(*n.lhs, at);
        return with_span(n, [&] { return apply(n.fn, a); });
    }
    }
    return at;
}

bool nodes_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case Node::Kind::Constant: return a.value == b.value;
    case Node::Kind::Variable: return a.name == b.name;
    case Node::Kind::Negate: return nodes_equal(*a.lhs, *b.lhs);
    case Node::Kind::Binary:
        return a.op == b.op && nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
    case Node::Kind::Pow: return a.exponent == b.exponent && nodes_equal(*a.lhs, *b.lhs);
    case Node::Kind::Call: return a.fn == b.fn && nodes_equal(*a.lhs, *b.lhs);
    }
    return false;
}

int precedence(char op) {
    return (op == '+' || op == '-') ? 1 : 2;
}

void print(const Node& n, std::string& out) {
    switch (n.kind) {
    case Node::Kind::Constant:
        if (!n.name.empty()) {
            out += n.name;
        } else {
            out += fmt::format("{}", n.value);
        }
        return;
    case Node::Kind::Variable: out += n.name; return;
    case Node::Kind::Negate: {
        out += '-';
        const bool paren = n.lhs->kind == Node::Kind::Binary;
        if (paren) out += '(';
        print(*n.lhs, out);
        if (paren) out += ')';
        return;
    }
    case Node::Kind::Binary: {
        const int p = precedence(n.op);
        const bool lp = n.lhs->kind == Node::Kind::Binary && precedence(n.lhs->op) < p;
        const bool rp = n.rhs->kind == Node::Kind::Binary && precedence(n.rhs->op) <= p;
        if (lp) out += '(';
        print(*n.lhs, out);
        if (lp) out += ')';
        out += n.op;
        if (rp) out += '(';
        print(*n.rhs, out);
        if (rp) out += ')';
        return;
    }
    case Node::Kind::Pow: {
        const auto k = n.lhs->kind;
        const bool bare =
            k == Node::Kind::Variable || k == Node::Kind::Call || k == Node::Kind::Constant;
        if (!bare) out += '(';
        print(*n.lhs, out);
        if (!bare) out += ')';
        out += fmt::format("^{}", n.exponent);
        return;
    }
    case Node::Kind::Call:
        out += to_string(n.fn);
        out += '(';
        print(*n.lhs, out);
        out += ')';
        return;
    }
}

}  // namespace

Expression Expression::parse(std::string_view text) {
    Parser p(text);
    NodePtr root = p.parse_all();
    return Expression(std::move(root), p.variable(), std::string(text));
}

Expression Expression::constant(double c) {
    if (!std::isfinite(c)) throw Error(ErrorKind::Domain, "non-finite constant");
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->value = std::abs(c);
    Expression e(std::move(n), std::nullopt, {});
    if (std::signbit(c)) return e.negated();
    e.source_ = e.to_string();
    return e;
}

Expression Expression::negated() const {
    if (root_->kind == Node::Kind::Negate) {
        Expression e(root_->lhs, variable_, {});
        e.source_ = e.to_string();
        return e;
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Negate;
    n->lhs = root_;
    n->span = root_->span;
    Expression e(std::move(n), variable_, {});
    e.source_ = e.to_string();
    return e;
}

Jet3 Expression::eval_jet(const Jet3& at) const {
    return eval_node(*root_, at);
}

double Expression::eval(double at) const {
    return eval_node(*root_, Jet3::constant(at)).value;
}

std::string Expression::to_string() const {
    std::string out;
    print(*root_, out);
    return out;
}

bool operator==(const Expression& a, const Expression& b) {
    return nodes_equal(*a.root_, *b.root_);
}

}  // namespace minface
