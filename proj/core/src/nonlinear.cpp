#include "fredpert/nonlinear.hpp"
#include "fredpert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fredpert {

namespace {

Eigen::VectorXd residual(const DiscreteKernel &K, double omega, const Expression &psi,
                         const GridFunction &f, const Eigen::VectorXd &phi) {
	Eigen::VectorXd g = sample_pointwise(psi, *K.rule, phi);
	return phi - omega * (K.M * K.rule->weights().cwiseProduct(g)) - f.values;
}

} // namespace

GridFunction hammerstein_newton(const DiscreteKernel &K, double omega, const Expression &psi,
                                const GridFunction &f, const GridFunction &seed,
                                NewtonReport *report) {
	if (seed.values.size() != K.size() || f.values.size() != K.size())
		throw ConfigError("hammerstein_newton: grid sizes do not match the kernel rule");

	Expression dpsi = psi.derivative(Var::Z);
	Eigen::VectorXd phi = seed.values;
	Eigen::VectorXd r = residual(K, omega, psi, f, phi);
	bool singular_steps = false;
	int it = 0;

	auto done = [&](const Eigen::VectorXd &res, const Eigen::VectorXd &val) {
		return res.lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + val.lpNorm<Eigen::Infinity>());
	};

	for (; it < 100; ++it) {
		if (done(r, phi))
			break;

		// J = I - omega K diag( psi'( phi ) ), realized by scaling kernel columns
		Eigen::VectorXd slope = sample_pointwise(dpsi, *K.rule, phi);
		DiscreteKernel Keff{K.rule, K.M * slope.asDiagonal(), 0};
		ResolventOperator J(Keff, omega);

		Eigen::VectorXd step;
		if (!J.near_singular()) {
			step = -J.solve({K.rule, r}).values;
		} else {
			// singular Jacobian away from a solution: take the minimal-norm
			// least-squares direction and keep iterating
			singular_steps = true;
			GridFunction negr{K.rule, -r};
			step = singular_solve(Keff, omega, negr, 1e-8).phi.values;
		}

		double rnorm = r.lpNorm<Eigen::Infinity>();
		double lambda = 1.0;
		bool accepted = false;
		for (int halving = 0; halving < 40; ++halving) {
			Eigen::VectorXd trial = phi + lambda * step;
			Eigen::VectorXd rt = residual(K, omega, psi, f, trial);
			if (rt.lpNorm<Eigen::Infinity>() < rnorm) {
				phi = std::move(trial);
				r = std::move(rt);
				accepted = true;
				break;
			}
			lambda /= 2.0;
		}
		if (!accepted)
			throw NewtonDivergenceError("newton step stalled at residual " + std::to_string(rnorm));
	}

	if (!done(r, phi))
		throw NewtonDivergenceError("newton did not converge in 100 iterations (residual " +
		                            std::to_string(r.lpNorm<Eigen::Infinity>()) + ")");
	if (report) {
		report->iterations = it;
		report->residual = r.lpNorm<Eigen::Infinity>();
		report->singular_steps = singular_steps;
	}
	return {K.rule, std::move(phi)};
}

std::optional<GridFunction> resonant_base(const Expression &kernel, const DiscreteKernel &K,
                                          double omega, double scale) {
	EigenSystem es = eigendecompose(K);
	int best = -1;
	double best_gap = std::numeric_limits<double>::infinity();
	for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) {
		double gap = std::abs(1.0 - omega * es.eigenvalues[j]);
		if (gap < best_gap) {
			best_gap = gap;
			best = static_cast<int>(j);
		}
	}
	if (best < 0 || best_gap > 1e-8)
		return {};
	Eigen::VectorXd u = es.eigenfunctions.col(best);
	double mu = es.eigenvalues[best];

	/*
	 * Normalize against the sup of the eigenfunction's continuous Nystrom
	 * extension  e( x ) = ( 1 / mu ) Sum_j w_j G( x, y_j ) u_j,  sampled
	 * densely: the grid nodes exclude the endpoints, so the bare node sup
	 * under-reads peaks that sit on or near the boundary.
	 */
	const Eigen::VectorXd &y = es.rule->nodes();
	const Eigen::VectorXd &w = es.rule->weights();
	double sup = u.lpNorm<Eigen::Infinity>();
	for (int i = 0; i <= 1000; ++i) {
		double x = i / 1000.0;
		double e = 0.0;
		for (Eigen::Index j = 0; j < y.size(); ++j)
			e += w[j] * kernel.evaluate(EvalPoint{.x = x, .y = y[j]}) * u[j];
		sup = std::max(sup, std::abs(e / mu));
	}
	return GridFunction{es.rule, (scale / sup) * u};
}

} // namespace fredpert
