#include "fredpert/linear_solver.hpp"
#include "fredpert/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace fredpert {

ResolventOperator::ResolventOperator(const DiscreteKernel &K, double omega) : rule_(K.rule) {
	Eigen::Index n = K.size();
	A_ = Eigen::MatrixXd::Identity(n, n) - omega * K.M * rule_->weights().asDiagonal();
	lu_.compute(A_);
	rcond_ = lu_.rcond();
}

GridFunction ResolventOperator::solve(const GridFunction &f) const {
	if (near_singular())
		throw SingularSystemError("fredholm system is singular or nearly so (rcond " +
		                          std::to_string(rcond_) + "); omega sits at a characteristic value");
	if (f.values.size() != A_.rows())
		throw ConfigError("solve: grid function does not match operator rule");
	Eigen::VectorXd phi = lu_.solve(f.values);
	// refinement loop; plain LU backward error grows with cond(A), and the
	// residual contract is absolute in ||f||
	double target = 1e-10 * (1.0 + f.values.lpNorm<Eigen::Infinity>());
	for (int pass = 0; pass < 4; ++pass) {
		Eigen::VectorXd r = f.values - A_ * phi;
		if (r.lpNorm<Eigen::Infinity>() <= target)
			return {rule_, std::move(phi)};
		phi += lu_.solve(r);
	}
	Eigen::VectorXd r = f.values - A_ * phi;
	if (r.lpNorm<Eigen::Infinity>() <= target)
		return {rule_, std::move(phi)};
	throw NumericalError("fredholm solve could not reach the residual tolerance");
}

GridFunction solve_fredholm2(const DiscreteKernel &K, double omega, const GridFunction &f) {
	return ResolventOperator(K, omega).solve(f);
}

double nystrom_interpolate(const Expression &kernel, const Expression &forcing,
                           const QuadratureRule &rule, double omega,
                           const Eigen::VectorXd &phi_at_nodes, double x) {
	const auto &y = rule.nodes();
	const auto &w = rule.weights();
	double acc = 0.0;
	for (Eigen::Index j = 0; j < y.size(); ++j)
		acc += w[j] * kernel.evaluate({.x = x, .y = y[j]}) * phi_at_nodes[j];
	return forcing.evaluate({.x = x}) + omega * acc;
}

namespace {

// D^1/2 and D^-1/2 as vectors; weights of both rule kinds are positive
Eigen::VectorXd sqrt_weights(const QuadratureRule &rule) {
	return rule.weights().cwiseSqrt();
}

} // namespace

EigenSystem eigendecompose(const DiscreteKernel &K) {
	double scale = std::max(1.0, K.M.size() ? K.M.cwiseAbs().maxCoeff() : 0.0);
	if ((K.M - K.M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
		throw ConfigError("eigendecompose needs a symmetric kernel");

	Eigen::VectorXd ds = sqrt_weights(*K.rule);
	Eigen::MatrixXd S = ds.asDiagonal() * K.M * ds.asDiagonal();
	S = 0.5 * (S + S.transpose().eval()); // kill rounding asymmetry
	Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
	if (solver.info() != Eigen::Success)
		throw NumericalError("symmetric eigendecomposition failed");

	Eigen::Index n = K.size();
	std::vector<int> order(n);
	for (Eigen::Index i = 0; i < n; ++i)
		order[i] = static_cast<int>(i);
	const auto &mu = solver.eigenvalues();
	std::sort(order.begin(), order.end(), [&](int i, int j) {
		double ai = std::abs(mu[i]), aj = std::abs(mu[j]);
		if (ai != aj)
			return ai > aj;
		return mu[i] > mu[j];
	});

	EigenSystem es{K.rule, Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
	for (Eigen::Index j = 0; j < n; ++j) {
		es.eigenvalues[j] = mu[order[j]];
		Eigen::VectorXd u = solver.eigenvectors().col(order[j]).cwiseQuotient(ds);
		// deterministic sign: first entry of sizable magnitude is positive
		double big = u.cwiseAbs().maxCoeff();
		for (Eigen::Index i = 0; i < n; ++i)
			if (std::abs(u[i]) > 1e-8 * big) {
				if (u[i] < 0.0)
					u = -u;
				break;
			}
		es.eigenfunctions.col(j) = u;
	}
	return es;
}

GridFunction spectral_resolvent_solve(const EigenSystem &es, double omega,
                                      const GridFunction &f) {
	if (f.values.size() != es.eigenvalues.size())
		throw ConfigError("spectral_resolvent_solve: grid function does not match eigensystem");
	const Eigen::VectorXd &w = es.rule->weights();
	Eigen::VectorXd phi = f.values;
	for (Eigen::Index j = 0; j < es.eigenvalues.size(); ++j) {
		double mu = es.eigenvalues[j];
		double denom = 1.0 - omega * mu;
		if (std::abs(denom) <= 1e-10)
			continue; // resonant mode, excluded from the bounded part
		double proj = w.dot(f.values.cwiseProduct(es.eigenfunctions.col(j)));
		phi += (omega * mu / denom * proj) * es.eigenfunctions.col(j);
	}
	return {es.rule, std::move(phi)};
}

SingularSolveResult singular_solve(const DiscreteKernel &K, double omega,
                                   const GridFunction &f, double tol) {
	Eigen::Index n = K.size();
	Eigen::VectorXd ds = sqrt_weights(*K.rule);
	// weighted similarity keeps minimal-Euclidean-norm = minimal w-l2-norm
	Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - omega * K.M * K.rule->weights().asDiagonal();
	Eigen::MatrixXd At = ds.asDiagonal() * A * ds.cwiseInverse().asDiagonal();
	Eigen::VectorXd ft = ds.cwiseProduct(f.values);

	Eigen::JacobiSVD<Eigen::MatrixXd> svd(At, Eigen::ComputeFullU | Eigen::ComputeFullV);
	const auto &sigma = svd.singularValues();
	double cut = sigma.size() ? 1e-10 * sigma[0] : 0.0;

	double proj_sq = 0.0;
	int null_dim = 0;
	Eigen::VectorXd xt = Eigen::VectorXd::Zero(n);
	for (Eigen::Index i = 0; i < sigma.size(); ++i) {
		double c = svd.matrixU().col(i).dot(ft);
		if (sigma[i] <= cut) {
			++null_dim;
			proj_sq += c * c;
		} else {
			xt += (c / sigma[i]) * svd.matrixV().col(i);
		}
	}

	double proj = std::sqrt(proj_sq);
	double fnorm = ft.norm();
	SingularSolveResult r{
	    {K.rule, xt.cwiseQuotient(ds)},
	    proj <= tol * fnorm || fnorm == 0.0,
	    proj,
	    null_dim,
	};
	return r;
}

} // namespace fredpert
