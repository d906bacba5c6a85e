#include "fredpert/series.hpp"

#include <algorithm>
#include <cmath>

#include "fredpert/bounds.hpp"
#include "fredpert/errors.hpp"
#include "fredpert/linear_solver.hpp"
#include "fredpert/nonlinear.hpp"

namespace fredpert {

namespace {

OrderReport order_report(int j, const GridFunction &a) {
	return {j, a.norm_sup(), a.norm_l2(), a.norm_l1(), false, 0, 0.0};
}

// max_j ||a_j||^( 1/j ) over j >= 1, NaN when there is no usable term
double empirical_growth(const std::vector<GridFunction> &a, NormKind kind) {
	double best = std::numeric_limits<double>::quiet_NaN();
	for (size_t j = 1; j < a.size(); ++j) {
		double nj = a[j].norm(kind);
		if (nj <= 0.0)
			continue;
		double g = std::pow(nj, 1.0 / static_cast<double>(j));
		if (std::isnan(best) || g > best)
			best = g;
	}
	return best;
}

double radius_from_growth(double growth) {
	if (std::isnan(growth))
		return std::numeric_limits<double>::infinity(); // no growing terms at all
	return growth > 0.0 ? 1.0 / growth : std::numeric_limits<double>::infinity();
}

} // namespace

SeriesSolution linear_series_terms(const ProblemSpec &p, int N, double base_epsilon) {
	if (!p.is_linear())
		throw ConfigError("linear_series_terms needs psi0 = z and psi1 = 0");
	if (N < 0)
		throw ConfigError("series order must be nonnegative");

	RulePtr rule = p.make_rule();
	DiscreteKernel K0 = p.discretize0(rule);
	DiscreteKernel K1 = p.discretize1(rule);
	ResolventOperator R(K0, p.omega);

	SeriesSolution s;
	s.base_epsilon = base_epsilon;
	s.truncation = N;
	s.coefficients.reserve(N + 1);

	GridFunction f = sample_forcing(p.forcing, rule);
	s.coefficients.push_back(R.solve(f));
	s.diagnostics.orders.push_back(order_report(0, s.coefficients[0]));

	for (int j = 1; j <= N; ++j) {
		GridFunction rhs = apply_kernel(K1, s.coefficients[j - 1]);
		rhs.values *= p.omega;
		s.coefficients.push_back(R.solve(rhs));
		s.diagnostics.orders.push_back(order_report(j, s.coefficients[j]));
	}

	s.diagnostics.empirical_growth = empirical_growth(s.coefficients, p.norm_kind);

	KernelNorms n0 = kernel_norms(K0), n1 = kernel_norms(K1);
	auto rho = rho_linear(p.omega, n0.matching(p.norm_kind), n1.matching(p.norm_kind));
	if (rho)
		s.radius_estimate = *rho > 0.0 ? 1.0 / *rho : std::numeric_limits<double>::infinity();
	else
		s.radius_estimate = std::numeric_limits<double>::quiet_NaN();
	return s;
}

SeriesSolution hammerstein_series_terms(const ProblemSpec &p, int N, double base_epsilon,
                                        const GridFunction *newton_seed) {
	if (N < 0)
		throw ConfigError("series order must be nonnegative");

	RulePtr rule = p.make_rule();
	DiscreteKernel K0 = p.discretize0(rule);
	DiscreteKernel K1 = p.discretize1(rule);
	bool have_k1 = !p.kernel1.is_zero();
	bool have_psi1 = !p.psi1.is_zero();

	SeriesSolution s;
	s.base_epsilon = base_epsilon;
	s.truncation = N;

	// base solve: a_0 = f + omega K0 psi0( a_0 )
	GridFunction f = sample_forcing(p.forcing, rule);
	GridFunction a0{rule, Eigen::VectorXd::Zero(rule->size())};
	bool homogeneous_identity = p.forcing.is_zero() && p.psi0.is_variable(Var::Z);
	if (homogeneous_identity && !newton_seed) {
		if (auto base = resonant_base(p.kernel0, K0, p.omega, p.base_scale)) {
			a0 = std::move(*base);
			s.diagnostics.eigen_base = true;
		}
		// non-resonant homogeneous linear base: a_0 = 0 already
	} else {
		GridFunction seed = newton_seed ? *newton_seed : f;
		NewtonReport rep;
		a0 = hammerstein_newton(K0, p.omega, p.psi0, f, seed, &rep);
		s.diagnostics.newton_iterations = rep.iterations;
	}
	s.coefficients.push_back(a0);
	s.diagnostics.orders.push_back(order_report(0, a0));

	// linearization at the base; every order solves against the same J
	Expression dpsi0 = p.psi0.derivative(Var::Z);
	Eigen::VectorXd slope = sample_pointwise(dpsi0, *rule, a0.values);
	DiscreteKernel Keff{rule, K0.M * slope.asDiagonal(), 0};
	ResolventOperator J(Keff, p.omega);
	bool resonant = J.near_singular();

	// delta carries the known coefficients, zeros above; compose_series
	// then yields order-nu right sides that only read finished orders
	CoeffSeries delta = CoeffSeries::zeros(rule, N);

	for (int nu = 1; nu <= N; ++nu) {
		CoeffSeries u = compose_series(p.psi0, a0, delta, nu);
		Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rule->size());

		// order-nu coefficient of omega ( K0 + eps K1 )( u + eps v ),
		// with the a_nu-dependent part of u_nu moved into J
		rhs += p.omega * (K0.M * rule->weights().cwiseProduct(u.coeff[nu]));
		if (have_k1)
			rhs += p.omega * (K1.M * rule->weights().cwiseProduct(u.coeff[nu - 1]));
		if (have_psi1) {
			CoeffSeries v = compose_series(p.psi1, a0, delta, nu);
			rhs += p.omega * (K0.M * rule->weights().cwiseProduct(v.coeff[nu - 1]));
			if (have_k1 && nu >= 2)
				rhs += p.omega * (K1.M * rule->weights().cwiseProduct(v.coeff[nu - 2]));
		}

		GridFunction g{rule, std::move(rhs)};
		// a right side at roundoff scale is pinned to zero; the resonant
		// solvability test would otherwise read pure noise as a forbidden
		// component and abort an order that vanishes analytically
		if (g.norm_sup() <= 1e-13 * std::max(1.0, a0.norm_sup()))
			g.values.setZero();
		OrderReport rep;
		GridFunction anu{rule, Eigen::VectorXd::Zero(rule->size())};
		if (!resonant) {
			anu = J.solve(g);
		} else {
			SingularSolveResult sr = singular_solve(Keff, p.omega, g, 1e-8);
			rep.resonant = true;
			rep.null_dimension = sr.null_dimension;
			rep.residual_projection = sr.residual_projection;
			if (!sr.solvable) {
				s.diagnostics.aborted_order = nu;
				s.diagnostics.abort_reason =
				    "resonant order " + std::to_string(nu) + " unsolvable";
				break;
			}
			anu = std::move(sr.phi);
		}

		if (nu <= delta.order())
			delta.coeff[nu] = anu.values;
		double sup = anu.norm_sup(), l2 = anu.norm_l2(), l1 = anu.norm_l1();
		rep.order = nu;
		rep.norm_sup = sup;
		rep.norm_l2 = l2;
		rep.norm_l1 = l1;
		s.coefficients.push_back(std::move(anu));
		s.diagnostics.orders.push_back(rep);
	}

	s.diagnostics.empirical_growth = empirical_growth(s.coefficients, p.norm_kind);
	s.radius_estimate = radius_from_growth(s.diagnostics.empirical_growth);
	return s;
}

SeriesSolution series_terms(const ProblemSpec &p, int N, double base_epsilon,
                            const GridFunction *newton_seed) {
	if (p.is_linear() && !newton_seed)
		return linear_series_terms(p, N, base_epsilon);
	return hammerstein_series_terms(p, N, base_epsilon, newton_seed);
}

GridFunction evaluate_series(const SeriesSolution &s, double eps, std::optional<int> M,
                             bool *outside_radius) {
	if (s.coefficients.empty())
		throw ConfigError("evaluate_series: empty series");
	int top = M.value_or(s.computed_order());
	if (top < 0 || top > s.computed_order())
		throw ConfigError("evaluate_series: order out of range");
	double d = eps - s.base_epsilon;
	if (d < 0.0)
		throw ConfigError("evaluate_series: eps below the expansion base");
	if (outside_radius)
		*outside_radius = !std::isnan(s.radius_estimate) && d >= s.radius_estimate;

	GridFunction acc = s.coefficients[top];
	for (int j = top - 1; j >= 0; --j)
		acc.values = acc.values * d + s.coefficients[j].values;
	return acc;
}

SeriesSolution derivative_series_terms(const ProblemSpec &p, const SeriesSolution &s) {
	if (!p.is_linear())
		throw ConfigError("derivative_series_terms covers linear problems only");
	if (s.coefficients.empty())
		throw ConfigError("derivative_series_terms: empty series");

	RulePtr rule = s.coefficients[0].rule;
	DiscreteKernel K0x = discretize_kernel(p.kernel0.derivative(Var::X), rule, p.clamp);
	DiscreteKernel K1x = discretize_kernel(p.kernel1.derivative(Var::X), rule, p.clamp);
	GridFunction fx = sample_forcing(p.forcing.derivative(Var::X), rule);

	SeriesSolution d;
	d.base_epsilon = s.base_epsilon;
	d.truncation = s.truncation;
	d.radius_estimate = s.radius_estimate;

	for (int j = 0; j <= s.computed_order(); ++j) {
		GridFunction dj = apply_kernel(K0x, s.coefficients[j]);
		dj.values *= p.omega;
		if (j == 0)
			dj.values += fx.values;
		else {
			GridFunction prev = apply_kernel(K1x, s.coefficients[j - 1]);
			dj.values += p.omega * prev.values;
		}
		d.diagnostics.orders.push_back(order_report(j, dj));
		d.coefficients.push_back(std::move(dj));
	}
	d.diagnostics.empirical_growth = empirical_growth(d.coefficients, p.norm_kind);
	return d;
}

double tail_bound(const SeriesSolution &s, double eps, const BoundsReport &b) {
	double d = eps - s.base_epsilon;
	if (d < 0.0)
		throw ConfigError("tail_bound: eps below the expansion base");
	if (!b.rho)
		return std::numeric_limits<double>::infinity();
	double q = *b.rho * d;
	if (q == 0.0)
		return 0.0;
	if (q >= 1.0)
		return std::numeric_limits<double>::infinity();
	double a0 = s.coefficients.empty() ? 0.0 : s.coefficients[0].norm(b.norm_kind);
	return a0 * std::pow(q, s.truncation + 1) / (1.0 - q);
}

} // namespace fredpert
