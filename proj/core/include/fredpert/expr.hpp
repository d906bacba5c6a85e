#ifndef FREDPERT_EXPR_HPP
#define FREDPERT_EXPR_HPP

#include <memory>
#include <optional>
#include <string>

namespace fredpert {

// The four variables an expression may reference: x and y are kernel
// arguments, z is the solution value inside a nonlinearity, eps is the
// perturbation parameter.
enum class Var { X, Y, Z, Eps };

const char *var_name(Var v);

struct EvalPoint {
	std::optional<double> x{};
	std::optional<double> y{};
	std::optional<double> z{};
	std::optional<double> eps{};

	std::optional<double> get(Var v) const;
};

namespace detail {
struct Node;
using NodePtr = std::shared_ptr<const Node>;
} // namespace detail

/*
 * Immutable scalar expression over x, y, z, eps.
 *
 * Grammar (binary ^ is right associative and binds tighter than unary minus):
 *
 *   expr    :=  term  (('+'|'-') term)*
 *   term    :=  unary (('*'|'/') unary)*
 *   unary   :=  '-' unary | power
 *   power   :=  primary ('^' unary)?
 *   primary :=  number | 'pi' | variable | fn '(' expr ')' | '(' expr ')'
 *   fn      :=  sin | cos | exp | log | sqrt
 *
 * Constant subexpressions fold at construction (0*u -> 0, u^1 -> u, ...),
 * so algebraically trivial plumbing like "z + 0" costs nothing downstream.
 * Differentiation is symbolic and also folds; a result whose tree size
 * exceeds 10^6 nodes throws ExpressionTooLarge rather than degrading into
 * an effectively unusable object.  Shared subtrees count at full tree size.
 */
class Expression {
  public:
	// the zero literal
	Expression();

	static Expression parse(const std::string &text);
	static Expression number(double v);
	static Expression variable(Var v);

	// Throws EvalError when a referenced variable is unbound, for log/sqrt
	// outside their domain, for division by exactly zero, and for a pow
	// whose result is not finite while its operands were.
	double evaluate(const EvalPoint &at) const;

	Expression derivative(Var v) const;

	std::string to_string() const;

	bool is_zero() const;            // literal 0 after folding
	bool is_variable(Var v) const;   // exactly the single variable v
	bool uses(Var v) const;
	double tree_size() const;        // node count with shared subtrees expanded

	friend Expression operator+(const Expression &a, const Expression &b);
	friend Expression operator-(const Expression &a, const Expression &b);
	friend Expression operator*(const Expression &a, const Expression &b);
	friend Expression operator*(double c, const Expression &e);

  private:
	explicit Expression(detail::NodePtr root);
	detail::NodePtr root_;
};

} // namespace fredpert

#endif
