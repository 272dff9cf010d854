#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace perpconj {

/// Named real parameters (A, alpha, beta, ...).
using ParameterSet = std::map<std::string, double, std::less<>>;

enum class UnaryOp { Neg, Sqrt, Sin, Cos, Exp, Log, Abs, Sign };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

enum class ExprKind { Constant, Variable, Parameter, Unary, Binary };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind = ExprKind::Constant;
    double value = 0.0;     // Constant
    std::string name;       // Variable, Parameter
    std::size_t slot = 0;   // Variable: index into the state vector
    UnaryOp unary_op = UnaryOp::Neg;
    BinaryOp binary_op = BinaryOp::Add;
    ExprNodePtr lhs;        // Unary operand, Binary left
    ExprNodePtr rhs;        // Binary right
};

/// Immutable expression tree. Copies share nodes; subtrees may be shared
/// between expressions (derivatives reuse the nodes of their source).
class Expression {
public:
    Expression();  // the constant 0

    static Expression constant(double value);
    static Expression variable(std::string name, std::size_t slot);
    static Expression parameter(std::string name);
    static Expression unary(UnaryOp op, Expression operand);
    static Expression binary(BinaryOp op, Expression lhs, Expression rhs);

    ExprKind kind() const noexcept { return node_->kind; }
    double value() const noexcept { return node_->value; }
    const std::string& name() const noexcept { return node_->name; }
    std::size_t slot() const noexcept { return node_->slot; }
    UnaryOp unary_op() const noexcept { return node_->unary_op; }
    BinaryOp binary_op() const noexcept { return node_->binary_op; }
    Expression lhs() const { return Expression(node_->lhs); }
    Expression rhs() const { return Expression(node_->rhs); }

    bool is_constant() const noexcept { return node_->kind == ExprKind::Constant; }
    bool is_constant(double v) const noexcept { return is_constant() && node_->value == v; }

    const ExprNode* node() const noexcept { return node_.get(); }
    const ExprNodePtr& shared_node() const noexcept { return node_; }

    explicit Expression(ExprNodePtr node) : node_(std::move(node)) {}

private:
    ExprNodePtr node_;
};

/// Names an expression may reference: state variables (ordered, indexed by
/// slot) and parameters.
struct Scope {
    std::vector<std::string> state;
    std::vector<std::string> parameters;

    std::optional<std::size_t> state_slot(std::string_view name) const;
    bool has_parameter(std::string_view name) const;
};

/// Reserved function names; they can't be used as identifiers.
bool is_function_name(std::string_view name);
bool is_identifier(std::string_view name);

/// Parses infix source. Grammar: `+ -` < `* /` < unary `-` < `^` (right
/// associative), parentheses, calls `sqrt sin cos exp log abs sign`, decimal
/// literals with optional exponent.
/// Throws SyntaxError or UnknownIdentifier.
Expression parse_expression(std::string_view source, const Scope& scope);

/// Tree-walking evaluation. Parameters are looked up by name in `params`.
/// Throws DomainError; never returns a non-finite value.
double evaluate(const Expression& e, std::span<const double> point, const ParameterSet& params);

/// Exact symbolic partial derivative with respect to the state variable `wrt`.
Expression differentiate(const Expression& e, std::string_view wrt);

/// Names of every variable and parameter appearing in the tree.
std::set<std::string> free_variables(const Expression& e);

/// Infix text that parses back to an expression evaluating identically.
std::string to_string(const Expression& e);

/// Replaces each state variable with slot i by `replacements[i]`.
Expression substitute(const Expression& e, std::span<const Expression> replacements);

/// Replaces parameters by their values and folds the literal subtrees this creates.
Expression bind_parameters(const Expression& e, const ParameterSet& params);

/// Node-for-node equality (constants compared bitwise-equal as doubles).
bool structurally_equal(const Expression& a, const Expression& b);

std::size_t node_count(const Expression& e);

/// Scalar kernels shared by every evaluator. Throw DomainError.
double apply_unary(UnaryOp op, double a);
double apply_binary(BinaryOp op, double a, double b);

std::string_view function_name(UnaryOp op);

/// Constructors that fold literal subtrees and drop additive zeros and
/// multiplicative ones. Used for derivative construction.
namespace algebra {
Expression sum(const Expression& a, const Expression& b);
Expression difference(const Expression& a, const Expression& b);
Expression product(const Expression& a, const Expression& b);
Expression quotient(const Expression& a, const Expression& b);
Expression power(const Expression& a, const Expression& b);
Expression negate(const Expression& a);
Expression apply(UnaryOp op, const Expression& a);
}  // namespace algebra

}  // namespace perpconj
