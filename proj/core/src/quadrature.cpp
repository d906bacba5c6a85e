#include "fredpert/quadrature.hpp"
#include "fredpert/errors.hpp"

#include <cmath>

namespace fredpert {

double QuadratureRule::integrate(const std::function<double(double)> &g) const {
	double acc = 0.0;
	for (Eigen::Index j = 0; j < nodes_.size(); ++j)
		acc += weights_[j] * g(nodes_[j]);
	return acc;
}

double QuadratureRule::integrate(const Eigen::VectorXd &values_at_nodes) const {
	if (values_at_nodes.size() != nodes_.size())
		throw ConfigError("integrate: value vector does not match rule size");
	return weights_.dot(values_at_nodes);
}

namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
// (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
void legendre(int n, double x, double &p, double &dp) {
	double p0 = 1.0, p1 = x;
	if (n == 0) {
		p = 1.0;
		dp = 0.0;
		return;
	}
	for (int k = 1; k < n; ++k) {
		double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
		p0 = p1;
		p1 = p2;
	}
	p = p1;
	// derivative from P_n and P_{n-1}:  (1-x^2) P_n' = n ( P_{n-1} - x P_n )
	dp = n * (p0 - x * p1) / (1.0 - x * x);
}

RulePtr build_gauss(int n) {
	Eigen::VectorXd x(n), w(n);
	// Nodes come in +/- pairs on [-1,1]; solve for the first half by Newton
	// from the Chebyshev-like initial guess, then mirror.
	for (int i = 0; i < (n + 1) / 2; ++i) {
		double xk = std::cos(M_PI * (i + 0.75) / (n + 0.5));
		double p, dp;
		for (int it = 0; it < 100; ++it) {
			legendre(n, xk, p, dp);
			double step = p / dp;
			xk -= step;
			if (std::abs(step) < 1e-15)
				break;
		}
		// one polishing step after convergence
		legendre(n, xk, p, dp);
		xk -= p / dp;
		legendre(n, xk, p, dp);
		double wk = 2.0 / ((1.0 - xk * xk) * dp * dp);
		// map [-1,1] -> [0,1]; the mirrored node picks up the same weight
		x[i] = (1.0 - xk) / 2.0;
		x[n - 1 - i] = (1.0 + xk) / 2.0;
		w[i] = wk / 2.0;
		w[n - 1 - i] = wk / 2.0;
	}
	return std::make_shared<QuadratureRule>(RuleKind::Gauss, std::move(x), std::move(w));
}

RulePtr build_trapezoid(int n) {
	Eigen::VectorXd x(n), w(n);
	double h = 1.0 / (n - 1);
	for (int i = 0; i < n; ++i) {
		x[i] = i * h;
		w[i] = (i == 0 || i == n - 1) ? h / 2.0 : h;
	}
	return std::make_shared<QuadratureRule>(RuleKind::Trapezoid, std::move(x), std::move(w));
}

} // namespace

RulePtr build_rule(RuleKind kind, int n) {
	switch (kind) {
	case RuleKind::Gauss:
		if (n < 1)
			throw ConfigError("build_rule: gauss rule needs n >= 1");
		return build_gauss(n);
	case RuleKind::Trapezoid:
		if (n < 2)
			throw ConfigError("build_rule: trapezoid rule needs n >= 2");
		return build_trapezoid(n);
	}
	throw ConfigError("build_rule: unknown rule kind");
}

RuleKind rule_kind_from_name(const std::string &name) {
	if (name == "gauss")
		return RuleKind::Gauss;
	if (name == "trapezoid")
		return RuleKind::Trapezoid;
	throw ConfigError("unknown quadrature rule '" + name + "' (expected gauss or trapezoid)");
}

} // namespace fredpert
