#include "perpconj/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "perpconj/error.hpp"

namespace perpconj {

namespace {

constexpr std::array<std::pair<std::string_view, UnaryOp>, 7> kFunctions{{
    {"sqrt", UnaryOp::Sqrt},
    {"sin", UnaryOp::Sin},
    {"cos", UnaryOp::Cos},
    {"exp", UnaryOp::Exp},
    {"log", UnaryOp::Log},
    {"abs", UnaryOp::Abs},
    {"sign", UnaryOp::Sign},
}};

std::optional<UnaryOp> lookup_function(std::string_view name) {
    for (const auto& [fname, op] : kFunctions) {
        if (fname == name) return op;
    }
    return std::nullopt;
}

double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite result in ") + what);
    return v;
}

double integer_power(double base, double exponent) {
    if (std::abs(exponent) > 1024.0) return std::pow(base, exponent);
    auto n = static_cast<long>(std::abs(exponent));
    double result = 1.0;
    double factor = base;
    while (n > 0) {
        if (n & 1) result *= factor;
        n >>= 1;
        if (n > 0) factor *= factor;
    }
    if (exponent < 0.0) {
        if (result == 0.0) throw DomainError("zero raised to a negative power");
        result = 1.0 / result;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Lexer / parser

struct Token {
    enum class Type { Number, Identifier, Op, End } type = Type::End;
    std::string_view text;
    double number = 0.0;
    std::size_t offset = 0;
};

class Parser {
public:
    Parser(std::string_view src, const Scope& scope) : src_(src), scope_(scope) { advance(); }

    Expression parse() {
        if (current_.type == Token::Type::End) throw SyntaxError("empty expression", 0);
        Expression e = parse_sum();
        if (current_.type != Token::Type::End) {
            throw SyntaxError("unexpected '" + std::string(current_.text) + "'", current_.offset);
        }
        return e;
    }

private:
    bool at_op(char c) const {
        return current_.type == Token::Type::Op && current_.text.size() == 1 && current_.text[0] == c;
    }

    void expect(char c) {
        if (!at_op(c)) {
            std::string got = current_.type == Token::Type::End ? "end of input" : "'" + std::string(current_.text) + "'";
            throw SyntaxError(std::string("expected '") + c + "' but found " + got, current_.offset);
        }
        advance();
    }

    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_ = Token{};
        current_.offset = pos_;
        if (pos_ >= src_.size()) return;

        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_ + 1;
            while (end < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
                ++end;
            }
            current_.type = Token::Type::Identifier;
            current_.text = src_.substr(pos_, end - pos_);
            pos_ = end;
            return;
        }
        if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
            current_.type = Token::Type::Op;
            current_.text = src_.substr(pos_, 1);
            ++pos_;
            return;
        }
        throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
    }

    void lex_number() {
        std::size_t end = pos_;
        auto digits = [&] {
            std::size_t start = end;
            while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) ++end;
            return end - start;
        };
        std::size_t mantissa = digits();
        if (end < src_.size() && src_[end] == '.') {
            ++end;
            mantissa += digits();
        }
        if (mantissa == 0) throw SyntaxError("malformed number", pos_);
        if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
            std::size_t exp_start = end;
            ++end;
            if (end < src_.size() && (src_[end] == '+' || src_[end] == '-')) ++end;
            if (digits() == 0) throw SyntaxError("malformed exponent", exp_start);
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, value);
        if (ec != std::errc() || ptr != src_.data() + end || !std::isfinite(value)) {
            throw SyntaxError("number out of range", pos_);
        }
        current_.type = Token::Type::Number;
        current_.text = src_.substr(pos_, end - pos_);
        current_.number = value;
        pos_ = end;
    }

    Expression parse_sum() {
        Expression lhs = parse_product();
        while (at_op('+') || at_op('-')) {
            BinaryOp op = at_op('+') ? BinaryOp::Add : BinaryOp::Sub;
            advance();
            lhs = Expression::binary(op, lhs, parse_product());
        }
        return lhs;
    }

    Expression parse_product() {
        Expression lhs = parse_unary();
        while (at_op('*') || at_op('/')) {
            BinaryOp op = at_op('*') ? BinaryOp::Mul : BinaryOp::Div;
            advance();
            lhs = Expression::binary(op, lhs, parse_unary());
        }
        return lhs;
    }

    Expression parse_unary() {
        if (at_op('-')) {
            advance();
            return Expression::unary(UnaryOp::Neg, parse_unary());
        }
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        if (at_op('^')) {
            advance();
            return Expression::binary(BinaryOp::Pow, base, parse_unary());
        }
        return base;
    }

    Expression parse_primary() {
        if (current_.type == Token::Type::Number) {
            double v = current_.number;
            advance();
            return Expression::constant(v);
        }
        if (current_.type == Token::Type::Identifier) {
            const std::string name(current_.text);
            const std::size_t offset = current_.offset;
            advance();
            if (auto fn = lookup_function(name)) {
                expect('(');
                Expression arg = parse_sum();
                expect(')');
                return Expression::unary(*fn, arg);
            }
            if (auto slot = scope_.state_slot(name)) return Expression::variable(name, *slot);
            if (scope_.has_parameter(name)) return Expression::parameter(name);
            throw UnknownIdentifier(name, offset);
        }
        if (at_op('(')) {
            advance();
            Expression inner = parse_sum();
            expect(')');
            return inner;
        }
        if (current_.type == Token::Type::End) throw SyntaxError("unexpected end of input", current_.offset);
        throw SyntaxError("unexpected '" + std::string(current_.text) + "'", current_.offset);
    }

    std::string_view src_;
    const Scope& scope_;
    std::size_t pos_ = 0;
    Token current_;
};

// ---------------------------------------------------------------------------
// Printer

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPower = 4;
constexpr int kPrecAtom = 5;

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

int precedence(const ExprNode& n) {
    switch (n.kind) {
        case ExprKind::Constant: return std::signbit(n.value) ? kPrecUnary : kPrecAtom;
        case ExprKind::Variable:
        case ExprKind::Parameter: return kPrecAtom;
        case ExprKind::Unary: return n.unary_op == UnaryOp::Neg ? kPrecUnary : kPrecAtom;
        case ExprKind::Binary:
            switch (n.binary_op) {
                case BinaryOp::Add:
                case BinaryOp::Sub: return kPrecSum;
                case BinaryOp::Mul:
                case BinaryOp::Div: return kPrecProduct;
                case BinaryOp::Pow: return kPrecPower;
            }
    }
    return kPrecAtom;
}

void print(const ExprNode& n, int min_prec, std::string& out) {
    const bool paren = precedence(n) < min_prec;
    if (paren) out += '(';
    switch (n.kind) {
        case ExprKind::Constant:
            if (std::signbit(n.value)) out += '-';
            out += format_number(std::abs(n.value));
            break;
        case ExprKind::Variable:
        case ExprKind::Parameter: out += n.name; break;
        case ExprKind::Unary:
            if (n.unary_op == UnaryOp::Neg) {
                out += '-';
                print(*n.lhs, kPrecUnary, out);
            } else {
                out += function_name(n.unary_op);
                out += '(';
                print(*n.lhs, kPrecSum, out);
                out += ')';
            }
            break;
        case ExprKind::Binary:
            switch (n.binary_op) {
                case BinaryOp::Add:
                case BinaryOp::Sub:
                    print(*n.lhs, kPrecSum, out);
                    out += n.binary_op == BinaryOp::Add ? " + " : " - ";
                    print(*n.rhs, kPrecProduct, out);
                    break;
                case BinaryOp::Mul:
                case BinaryOp::Div:
                    print(*n.lhs, kPrecProduct, out);
                    out += n.binary_op == BinaryOp::Mul ? '*' : '/';
                    print(*n.rhs, kPrecUnary, out);
                    break;
                case BinaryOp::Pow:
                    print(*n.lhs, kPrecAtom, out);
                    out += '^';
                    print(*n.rhs, kPrecUnary, out);
                    break;
            }
            break;
    }
    if (paren) out += ')';
}

// ---------------------------------------------------------------------------
// Derivatives

bool is_integer_literal(const Expression& e) {
    return e.is_constant() && std::trunc(e.value()) == e.value();
}

class Differentiator {
public:
    explicit Differentiator(std::string_view wrt) : wrt_(wrt) {}

    Expression operator()(const Expression& e) {
        if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
        Expression d = derive(e);
        memo_.emplace(e.node(), d);
        return d;
    }

private:
    Expression derive(const Expression& e) {
        using namespace algebra;
        switch (e.kind()) {
            case ExprKind::Constant:
            case ExprKind::Parameter: return Expression::constant(0.0);
            case ExprKind::Variable: return Expression::constant(e.name() == wrt_ ? 1.0 : 0.0);
            case ExprKind::Unary: {
                const Expression u = e.lhs();
                const Expression du = (*this)(u);
                if (du.is_constant(0.0)) return du;
                switch (e.unary_op()) {
                    case UnaryOp::Neg: return negate(du);
                    case UnaryOp::Sqrt:
                        return quotient(du, product(Expression::constant(2.0), e));
                    case UnaryOp::Sin: return product(apply(UnaryOp::Cos, u), du);
                    case UnaryOp::Cos: return product(negate(apply(UnaryOp::Sin, u)), du);
                    case UnaryOp::Exp: return product(e, du);
                    case UnaryOp::Log: return quotient(du, u);
                    case UnaryOp::Abs: return product(apply(UnaryOp::Sign, u), du);
                    case UnaryOp::Sign: return Expression::constant(0.0);
                }
                break;
            }
            case ExprKind::Binary: {
                const Expression u = e.lhs();
                const Expression v = e.rhs();
                const Expression du = (*this)(u);
                const Expression dv = (*this)(v);
                switch (e.binary_op()) {
                    case BinaryOp::Add: return sum(du, dv);
                    case BinaryOp::Sub: return difference(du, dv);
                    case BinaryOp::Mul: return sum(product(du, v), product(u, dv));
                    case BinaryOp::Div:
                        if (dv.is_constant(0.0)) return quotient(du, v);
                        return quotient(difference(product(du, v), product(u, dv)), product(v, v));
                    case BinaryOp::Pow:
                        if (is_integer_literal(v)) {
                            if (du.is_constant(0.0)) return du;
                            const double n = v.value();
                            return product(product(v, power(u, Expression::constant(n - 1.0))), du);
                        }
                        // u^v = exp(v log u); shares its domain restriction u > 0.
                        {
                            Expression inner = sum(product(dv, apply(UnaryOp::Log, u)), product(v, quotient(du, u)));
                            return product(e, inner);
                        }
                }
                break;
            }
        }
        return Expression::constant(0.0);
    }

    std::string_view wrt_;
    std::unordered_map<const ExprNode*, Expression> memo_;
};

template <typename Leaf>
class Rewriter {
public:
    Rewriter(Leaf leaf, bool fold) : leaf_(std::move(leaf)), fold_(fold) {}

    Expression operator()(const Expression& e) {
        if (auto it = memo_.find(e.node()); it != memo_.end()) return it->second;
        Expression out = rewrite(e);
        memo_.emplace(e.node(), out);
        return out;
    }

private:
    Expression rewrite(const Expression& e) {
        switch (e.kind()) {
            case ExprKind::Constant: return e;
            case ExprKind::Variable:
            case ExprKind::Parameter: return leaf_(e);
            case ExprKind::Unary: {
                Expression u = (*this)(e.lhs());
                if (u.node() == e.lhs().node()) return e;
                return fold_ ? algebra::apply(e.unary_op(), u) : Expression::unary(e.unary_op(), u);
            }
            case ExprKind::Binary: {
                Expression a = (*this)(e.lhs());
                Expression b = (*this)(e.rhs());
                if (a.node() == e.lhs().node() && b.node() == e.rhs().node()) return e;
                // x^2 with x := sqrt(u) becomes u
                if (e.binary_op() == BinaryOp::Pow && b.is_constant(2.0) && a.kind() == ExprKind::Unary &&
                    a.unary_op() == UnaryOp::Sqrt && a.node() != e.lhs().node()) {
                    return a.lhs();
                }
                if (!fold_) return Expression::binary(e.binary_op(), a, b);
                if (a.is_constant() && b.is_constant()) {
                    try {
                        return Expression::constant(apply_binary(e.binary_op(), a.value(), b.value()));
                    } catch (const DomainError&) {
                    }
                }
                return Expression::binary(e.binary_op(), a, b);
            }
        }
        return e;
    }

    Leaf leaf_;
    bool fold_;
    std::unordered_map<const ExprNode*, Expression> memo_;
};

}  // namespace

// ---------------------------------------------------------------------------

Expression::Expression() : Expression(constant(0.0)) {}

Expression Expression::constant(double value) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Constant;
    n->value = value;
    return Expression(std::move(n));
}

Expression Expression::variable(std::string name, std::size_t slot) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Variable;
    n->name = std::move(name);
    n->slot = slot;
    return Expression(std::move(n));
}

Expression Expression::parameter(std::string name) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Parameter;
    n->name = std::move(name);
    return Expression(std::move(n));
}

Expression Expression::unary(UnaryOp op, Expression operand) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Unary;
    n->unary_op = op;
    n->lhs = operand.shared_node();
    return Expression(std::move(n));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::Binary;
    n->binary_op = op;
    n->lhs = lhs.shared_node();
    n->rhs = rhs.shared_node();
    return Expression(std::move(n));
}

std::optional<std::size_t> Scope::state_slot(std::string_view name) const {
    for (std::size_t i = 0; i < state.size(); ++i) {
        if (state[i] == name) return i;
    }
    return std::nullopt;
}

bool Scope::has_parameter(std::string_view name) const {
    return std::find(parameters.begin(), parameters.end(), name) != parameters.end();
}

bool is_function_name(std::string_view name) { return lookup_function(name).has_value(); }

bool is_identifier(std::string_view name) {
    if (name.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(name[0])) && name[0] != '_') return false;
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

std::string_view function_name(UnaryOp op) {
    for (const auto& [fname, fop] : kFunctions) {
        if (fop == op) return fname;
    }
    return "-";
}

double apply_unary(UnaryOp op, double a) {
    switch (op) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of a negative number");
            return std::sqrt(a);
        case UnaryOp::Sin: return std::sin(a);
        case UnaryOp::Cos: return std::cos(a);
        case UnaryOp::Exp: return checked(std::exp(a), "exp");
        case UnaryOp::Log:
            if (a <= 0.0) throw DomainError("log of a non-positive number");
            return std::log(a);
        case UnaryOp::Abs: return std::abs(a);
        case UnaryOp::Sign: return a > 0.0 ? 1.0 : (a < 0.0 ? -1.0 : 0.0);
    }
    return 0.0;
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::Add: return checked(a + b, "addition");
        case BinaryOp::Sub: return checked(a - b, "subtraction");
        case BinaryOp::Mul: return checked(a * b, "multiplication");
        case BinaryOp::Div:
            if (b == 0.0) throw DomainError("division by zero");
            return checked(a / b, "division");
        case BinaryOp::Pow:
            if (std::trunc(b) == b) return checked(integer_power(a, b), "power");
            if (a <= 0.0) throw DomainError("non-integer power of a non-positive base");
            return checked(std::pow(a, b), "power");
    }
    return 0.0;
}

Expression parse_expression(std::string_view source, const Scope& scope) {
    return Parser(source, scope).parse();
}

double evaluate(const Expression& e, std::span<const double> point, const ParameterSet& params) {
    switch (e.kind()) {
        case ExprKind::Constant: return e.value();
        case ExprKind::Variable:
            if (e.slot() >= point.size()) {
                throw ValidationError("point has no coordinate for variable '" + e.name() + "'");
            }
            return point[e.slot()];
        case ExprKind::Parameter: {
            auto it = params.find(e.name());
            if (it == params.end()) throw ValidationError("no value for parameter '" + e.name() + "'");
            return it->second;
        }
        case ExprKind::Unary: return apply_unary(e.unary_op(), evaluate(e.lhs(), point, params));
        case ExprKind::Binary: {
            const double a = evaluate(e.lhs(), point, params);
            const double b = evaluate(e.rhs(), point, params);
            return apply_binary(e.binary_op(), a, b);
        }
    }
    return 0.0;
}

Expression differentiate(const Expression& e, std::string_view wrt) { return Differentiator(wrt)(e); }

std::set<std::string> free_variables(const Expression& e) {
    std::set<std::string> names;
    std::vector<const ExprNode*> stack{e.node()};
    std::set<const ExprNode*> seen;
    while (!stack.empty()) {
        const ExprNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        if (n->kind == ExprKind::Variable || n->kind == ExprKind::Parameter) names.insert(n->name);
        if (n->lhs) stack.push_back(n->lhs.get());
        if (n->rhs) stack.push_back(n->rhs.get());
    }
    return names;
}

std::string to_string(const Expression& e) {
    std::string out;
    print(*e.node(), kPrecSum, out);
    return out;
}

Expression substitute(const Expression& e, std::span<const Expression> replacements) {
    auto leaf = [&](const Expression& n) {
        if (n.kind() != ExprKind::Variable) return n;
        if (n.slot() >= replacements.size()) {
            throw ValidationError("no replacement for variable '" + n.name() + "'");
        }
        return replacements[n.slot()];
    };
    return Rewriter<decltype(leaf)>(leaf, false)(e);
}

Expression bind_parameters(const Expression& e, const ParameterSet& params) {
    auto leaf = [&](const Expression& n) {
        if (n.kind() != ExprKind::Parameter) return n;
        auto it = params.find(n.name());
        if (it == params.end()) throw ValidationError("no value for parameter '" + n.name() + "'");
        return Expression::constant(it->second);
    };
    return Rewriter<decltype(leaf)>(leaf, true)(e);
}

bool structurally_equal(const Expression& a, const Expression& b) {
    const ExprNode& x = *a.node();
    const ExprNode& y = *b.node();
    if (&x == &y) return true;
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case ExprKind::Constant: return x.value == y.value && std::signbit(x.value) == std::signbit(y.value);
        case ExprKind::Variable: return x.name == y.name && x.slot == y.slot;
        case ExprKind::Parameter: return x.name == y.name;
        case ExprKind::Unary: return x.unary_op == y.unary_op && structurally_equal(a.lhs(), b.lhs());
        case ExprKind::Binary:
            return x.binary_op == y.binary_op && structurally_equal(a.lhs(), b.lhs()) &&
                   structurally_equal(a.rhs(), b.rhs());
    }
    return false;
}

std::size_t node_count(const Expression& e) {
    std::size_t count = 0;
    std::vector<const ExprNode*> stack{e.node()};
    std::set<const ExprNode*> seen;
    while (!stack.empty()) {
        const ExprNode* n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second) continue;
        ++count;
        if (n->lhs) stack.push_back(n->lhs.get());
        if (n->rhs) stack.push_back(n->rhs.get());
    }
    return count;
}

namespace algebra {

namespace {
std::optional<Expression> fold(BinaryOp op, const Expression& a, const Expression& b) {
    if (!a.is_constant() || !b.is_constant()) return std::nullopt;
    try {
        return Expression::constant(apply_binary(op, a.value(), b.value()));
    } catch (const DomainError&) {
        return std::nullopt;
    }
}
}  // namespace

Expression sum(const Expression& a, const Expression& b) {
    if (auto c = fold(BinaryOp::Add, a, b)) return *c;
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return Expression::binary(BinaryOp::Add, a, b);
}

Expression difference(const Expression& a, const Expression& b) {
    if (auto c = fold(BinaryOp::Sub, a, b)) return *c;
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return negate(b);
    return Expression::binary(BinaryOp::Sub, a, b);
}

Expression product(const Expression& a, const Expression& b) {
    if (auto c = fold(BinaryOp::Mul, a, b)) return *c;
    if (a.is_constant(0.0) || b.is_constant(0.0)) return Expression::constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    return Expression::binary(BinaryOp::Mul, a, b);
}

Expression quotient(const Expression& a, const Expression& b) {
    if (auto c = fold(BinaryOp::Div, a, b)) return *c;
    if (a.is_constant(0.0)) return a;
    if (b.is_constant(1.0)) return a;
    return Expression::binary(BinaryOp::Div, a, b);
}

Expression power(const Expression& a, const Expression& b) {
    if (auto c = fold(BinaryOp::Pow, a, b)) return *c;
    if (b.is_constant(1.0)) return a;
    if (b.is_constant(0.0)) return Expression::constant(1.0);
    return Expression::binary(BinaryOp::Pow, a, b);
}

Expression negate(const Expression& a) {
    if (a.is_constant()) return Expression::constant(a.value() == 0.0 ? 0.0 : -a.value());
    return Expression::unary(UnaryOp::Neg, a);
}

Expression apply(UnaryOp op, const Expression& a) {
    if (a.is_constant()) {
        try {
            return Expression::constant(apply_unary(op, a.value()));
        } catch (const DomainError&) {
        }
    }
    return Expression::unary(op, a);
}

}  // namespace algebra

}  // namespace perpconj
