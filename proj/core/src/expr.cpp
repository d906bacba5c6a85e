#include "fredpert/expr.hpp"
#include "fredpert/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace fredpert {

const char *var_name(Var v) {
	switch (v) {
	case Var::X:
		return "x";
	case Var::Y:
		return "y";
	case Var::Z:
		return "z";
	case Var::Eps:
		return "eps";
	}
	return "?";
}

std::optional<double> EvalPoint::get(Var v) const {
	switch (v) {
	case Var::X:
		return x;
	case Var::Y:
		return y;
	case Var::Z:
		return z;
	case Var::Eps:
		return eps;
	}
	return {};
}

namespace detail {

enum class Op {
	Num,
	Variable,
	Neg,
	Add,
	Sub,
	Mul,
	Div,
	Pow,
	Sin,
	Cos,
	Exp,
	Log,
	Sqrt,
};

struct Node {
	Op op;
	double value = 0.0; // Num only
	Var var = Var::X;   // Variable only
	NodePtr a, b;
	// tree-expanded node count; double because shared subtrees can make
	// this astronomically larger than the DAG actually allocated
	double size = 1.0;
};

namespace {

constexpr double kSizeCap = 1e6;

NodePtr mk(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
	auto n = std::make_shared<Node>();
	n->op = op;
	n->a = std::move(a);
	n->b = std::move(b);
	n->size = 1.0 + (n->a ? n->a->size : 0.0) + (n->b ? n->b->size : 0.0);
	return n;
}

NodePtr num(double v) {
	auto n = std::make_shared<Node>();
	n->op = Op::Num;
	n->value = v;
	return n;
}

NodePtr variable(Var v) {
	auto n = std::make_shared<Node>();
	n->op = Op::Variable;
	n->var = v;
	return n;
}

bool is_num(const NodePtr &n, double v) { return n->op == Op::Num && n->value == v; }
bool is_num(const NodePtr &n) { return n->op == Op::Num; }

NodePtr neg(NodePtr a) {
	if (is_num(a))
		return num(-a->value);
	if (a->op == Op::Neg)
		return a->a;
	return mk(Op::Neg, std::move(a));
}

NodePtr add(NodePtr a, NodePtr b) {
	if (is_num(a) && is_num(b))
		return num(a->value + b->value);
	if (is_num(a, 0.0))
		return b;
	if (is_num(b, 0.0))
		return a;
	return mk(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
	if (is_num(a) && is_num(b))
		return num(a->value - b->value);
	if (is_num(b, 0.0))
		return a;
	if (is_num(a, 0.0))
		return neg(std::move(b));
	return mk(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
	if (is_num(a) && is_num(b))
		return num(a->value * b->value);
	if (is_num(a, 0.0) || is_num(b, 0.0))
		return num(0.0);
	if (is_num(a, 1.0))
		return b;
	if (is_num(b, 1.0))
		return a;
	return mk(Op::Mul, std::move(a), std::move(b));
}

NodePtr divide(NodePtr a, NodePtr b) {
	// no fold when b == 0: that stays a node and faults at evaluation
	if (is_num(a) && is_num(b) && b->value != 0.0)
		return num(a->value / b->value);
	if (is_num(a, 0.0))
		return num(0.0);
	if (is_num(b, 1.0))
		return a;
	return mk(Op::Div, std::move(a), std::move(b));
}

NodePtr pow_(NodePtr a, NodePtr b) {
	if (is_num(b, 1.0))
		return a;
	if (is_num(b, 0.0))
		return num(1.0); // 0^0 folds to 1 by the usual convention
	if (is_num(a) && is_num(b)) {
		double v = std::pow(a->value, b->value);
		if (std::isfinite(v))
			return num(v);
	}
	return mk(Op::Pow, std::move(a), std::move(b));
}

NodePtr call(Op op, NodePtr a) {
	if (is_num(a)) {
		double u = a->value;
		switch (op) {
		case Op::Sin:
			return num(std::sin(u));
		case Op::Cos:
			return num(std::cos(u));
		case Op::Exp:
			return num(std::exp(u));
		case Op::Log:
			if (u > 0.0)
				return num(std::log(u));
			break; // out of domain: keep the node, fault later
		case Op::Sqrt:
			if (u >= 0.0)
				return num(std::sqrt(u));
			break;
		default:
			break;
		}
	}
	return mk(op, std::move(a));
}

/*
 * Recursive descent parser.  Positions in error messages are 0-based byte
 * offsets into the input.
 */
class Parser {
  public:
	explicit Parser(const std::string &text) : s_(text) {}

	NodePtr run() {
		NodePtr e = expr();
		skip_ws();
		if (pos_ != s_.size())
			fail("unexpected trailing input");
		return e;
	}

  private:
	const std::string &s_;
	size_t pos_ = 0;

	[[noreturn]] void fail(const std::string &what) const {
		throw ConfigError("expression syntax error at position " + std::to_string(pos_) + ": " + what);
	}

	void skip_ws() {
		while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
			++pos_;
	}

	bool eat(char c) {
		skip_ws();
		if (pos_ < s_.size() && s_[pos_] == c) {
			++pos_;
			return true;
		}
		return false;
	}

	char peek() {
		skip_ws();
		return pos_ < s_.size() ? s_[pos_] : '\0';
	}

	NodePtr expr() {
		NodePtr e = term();
		for (;;) {
			if (eat('+'))
				e = add(e, term());
			else if (eat('-'))
				e = sub(e, term());
			else
				return e;
		}
	}

	NodePtr term() {
		NodePtr e = unary();
		for (;;) {
			if (eat('*'))
				e = mul(e, unary());
			else if (eat('/'))
				e = divide(e, unary());
			else
				return e;
		}
	}

	NodePtr unary() {
		if (eat('-'))
			return neg(unary());
		return power();
	}

	NodePtr power() {
		NodePtr base = primary();
		if (eat('^'))
			return pow_(base, unary());
		return base;
	}

	NodePtr primary() {
		skip_ws();
		if (pos_ >= s_.size())
			fail("unexpected end of input");
		char c = s_[pos_];
		if (c == '(') {
			++pos_;
			NodePtr e = expr();
			if (!eat(')'))
				fail("expected ')'");
			return e;
		}
		if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
			return number_token();
		if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
			return ident_token();
		fail(std::string("unexpected character '") + c + "'");
	}

	NodePtr number_token() {
		double v = 0.0;
		auto [end, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
		if (ec != std::errc())
			fail("malformed number");
		pos_ = static_cast<size_t>(end - s_.data());
		return num(v);
	}

	NodePtr ident_token() {
		size_t start = pos_;
		while (pos_ < s_.size() &&
		       (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
			++pos_;
		std::string name = s_.substr(start, pos_ - start);
		if (name == "x")
			return variable(Var::X);
		if (name == "y")
			return variable(Var::Y);
		if (name == "z")
			return variable(Var::Z);
		if (name == "eps")
			return variable(Var::Eps);
		if (name == "pi")
			return num(M_PI);
		Op op;
		if (name == "sin")
			op = Op::Sin;
		else if (name == "cos")
			op = Op::Cos;
		else if (name == "exp")
			op = Op::Exp;
		else if (name == "log")
			op = Op::Log;
		else if (name == "sqrt")
			op = Op::Sqrt;
		else {
			pos_ = start;
			fail("unknown identifier '" + name + "'");
		}
		if (!eat('('))
			fail("expected '(' after function name");
		NodePtr arg = expr();
		if (!eat(')'))
			fail("expected ')'");
		return call(op, arg);
	}
};

double eval(const Node *n, const EvalPoint &at) {
	switch (n->op) {
	case Op::Num:
		return n->value;
	case Op::Variable: {
		auto v = at.get(n->var);
		if (!v)
			throw EvalError(std::string("unbound variable '") + var_name(n->var) + "'");
		return *v;
	}
	case Op::Neg:
		return -eval(n->a.get(), at);
	case Op::Add:
		return eval(n->a.get(), at) + eval(n->b.get(), at);
	case Op::Sub:
		return eval(n->a.get(), at) - eval(n->b.get(), at);
	case Op::Mul:
		return eval(n->a.get(), at) * eval(n->b.get(), at);
	case Op::Div: {
		double d = eval(n->b.get(), at);
		if (d == 0.0)
			throw EvalError("division by zero");
		return eval(n->a.get(), at) / d;
	}
	case Op::Pow: {
		double base = eval(n->a.get(), at), ex = eval(n->b.get(), at);
		double v = std::pow(base, ex);
		if (!std::isfinite(v) && std::isfinite(base) && std::isfinite(ex))
			throw EvalError("pow out of domain");
		return v;
	}
	case Op::Sin:
		return std::sin(eval(n->a.get(), at));
	case Op::Cos:
		return std::cos(eval(n->a.get(), at));
	case Op::Exp:
		return std::exp(eval(n->a.get(), at));
	case Op::Log: {
		double u = eval(n->a.get(), at);
		if (u <= 0.0)
			throw EvalError("log of a non-positive value");
		return std::log(u);
	}
	case Op::Sqrt: {
		double u = eval(n->a.get(), at);
		if (u < 0.0)
			throw EvalError("sqrt of a negative value");
		return std::sqrt(u);
	}
	}
	throw EvalError("corrupt expression node");
}

NodePtr diff(const NodePtr &n, Var v) {
	switch (n->op) {
	case Op::Num:
		return num(0.0);
	case Op::Variable:
		return num(n->var == v ? 1.0 : 0.0);
	case Op::Neg:
		return neg(diff(n->a, v));
	case Op::Add:
		return add(diff(n->a, v), diff(n->b, v));
	case Op::Sub:
		return sub(diff(n->a, v), diff(n->b, v));
	case Op::Mul:
		return add(mul(diff(n->a, v), n->b), mul(n->a, diff(n->b, v)));
	case Op::Div:
		return divide(sub(mul(diff(n->a, v), n->b), mul(n->a, diff(n->b, v))),
		              pow_(n->b, num(2.0)));
	case Op::Pow:
		if (is_num(n->b)) {
			// d/dv u^c = c u^(c-1) u'
			double c = n->b->value;
			return mul(mul(num(c), pow_(n->a, num(c - 1.0))), diff(n->a, v));
		}
		// d/dv u^w = u^w ( w' log u + w u' / u )
		return mul(n, add(mul(diff(n->b, v), call(Op::Log, n->a)),
		                  mul(n->b, divide(diff(n->a, v), n->a))));
	case Op::Sin:
		return mul(call(Op::Cos, n->a), diff(n->a, v));
	case Op::Cos:
		return neg(mul(call(Op::Sin, n->a), diff(n->a, v)));
	case Op::Exp:
		return mul(call(Op::Exp, n->a), diff(n->a, v));
	case Op::Log:
		return divide(diff(n->a, v), n->a);
	case Op::Sqrt:
		return divide(diff(n->a, v), mul(num(2.0), call(Op::Sqrt, n->a)));
	}
	throw EvalError("corrupt expression node");
}

bool uses_var(const Node *n, Var v) {
	if (n->op == Op::Variable)
		return n->var == v;
	if (n->a && uses_var(n->a.get(), v))
		return true;
	return n->b && uses_var(n->b.get(), v);
}

int prec(const Node *n) {
	switch (n->op) {
	case Op::Add:
	case Op::Sub:
		return 1;
	case Op::Mul:
	case Op::Div:
		return 2;
	case Op::Neg:
		return 3;
	case Op::Pow:
		return 4;
	case Op::Num:
		return n->value < 0.0 ? 3 : 6;
	default:
		return 6;
	}
}

void print(const Node *n, int min_prec, std::string &out) {
	auto wrap = [&](const Node *child, int need) {
		if (prec(child) < need) {
			out += '(';
			print(child, 0, out);
			out += ')';
		} else {
			print(child, need, out);
		}
	};
	bool parens = prec(n) < min_prec;
	if (parens)
		out += '(';
	switch (n->op) {
	case Op::Num: {
		char buf[40];
		std::snprintf(buf, sizeof buf, "%.17g", n->value);
		out += buf;
		break;
	}
	case Op::Variable:
		out += var_name(n->var);
		break;
	case Op::Neg:
		out += '-';
		wrap(n->a.get(), 4);
		break;
	case Op::Add:
		print(n->a.get(), 1, out);
		out += " + ";
		wrap(n->b.get(), 2);
		break;
	case Op::Sub:
		print(n->a.get(), 1, out);
		out += " - ";
		wrap(n->b.get(), 2);
		break;
	case Op::Mul:
		print(n->a.get(), 2, out);
		out += '*';
		wrap(n->b.get(), 3);
		break;
	case Op::Div:
		print(n->a.get(), 2, out);
		out += '/';
		wrap(n->b.get(), 3);
		break;
	case Op::Pow:
		wrap(n->a.get(), 5);
		out += '^';
		wrap(n->b.get(), 4);
		break;
	case Op::Sin:
	case Op::Cos:
	case Op::Exp:
	case Op::Log:
	case Op::Sqrt: {
		const char *name = n->op == Op::Sin   ? "sin"
		                   : n->op == Op::Cos ? "cos"
		                   : n->op == Op::Exp ? "exp"
		                   : n->op == Op::Log ? "log"
		                                      : "sqrt";
		out += name;
		out += '(';
		print(n->a.get(), 0, out);
		out += ')';
		break;
	}
	}
	if (parens)
		out += ')';
}

} // namespace
} // namespace detail

using detail::NodePtr;

Expression::Expression() : root_(detail::num(0.0)) {}
Expression::Expression(NodePtr root) : root_(std::move(root)) {}

Expression Expression::parse(const std::string &text) {
	detail::Parser p(text);
	Expression e(p.run());
	if (e.tree_size() > detail::kSizeCap)
		throw ExpressionTooLarge("parsed expression exceeds the node cap");
	return e;
}

Expression Expression::number(double v) { return Expression(detail::num(v)); }
Expression Expression::variable(Var v) { return Expression(detail::variable(v)); }

double Expression::evaluate(const EvalPoint &at) const { return detail::eval(root_.get(), at); }

Expression Expression::derivative(Var v) const {
	NodePtr d = detail::diff(root_, v);
	if (d->size > detail::kSizeCap)
		throw ExpressionTooLarge("derivative exceeds the node cap (" +
		                         std::to_string(static_cast<long long>(detail::kSizeCap)) +
		                         " nodes)");
	return Expression(std::move(d));
}

std::string Expression::to_string() const {
	std::string out;
	detail::print(root_.get(), 0, out);
	return out;
}

bool Expression::is_zero() const { return detail::is_num(root_, 0.0); }
bool Expression::is_variable(Var v) const {
	return root_->op == detail::Op::Variable && root_->var == v;
}
bool Expression::uses(Var v) const { return detail::uses_var(root_.get(), v); }
double Expression::tree_size() const { return root_->size; }

Expression operator+(const Expression &a, const Expression &b) {
	return Expression(detail::add(a.root_, b.root_));
}
Expression operator-(const Expression &a, const Expression &b) {
	return Expression(detail::sub(a.root_, b.root_));
}
Expression operator*(const Expression &a, const Expression &b) {
	return Expression(detail::mul(a.root_, b.root_));
}
Expression operator*(double c, const Expression &e) {
	return Expression(detail::mul(detail::num(c), e.root_));
}

} // namespace fredpert
