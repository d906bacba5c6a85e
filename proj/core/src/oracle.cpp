#include "fredpert/oracle.hpp"

#include <cmath>
#include <vector>

#include "fredpert/bounds.hpp"
#include "fredpert/errors.hpp"
#include "fredpert/linear_solver.hpp"
#include "fredpert/nonlinear.hpp"

namespace fredpert {

namespace {

struct FrozenProblem {
	RulePtr rule;
	DiscreteKernel K;
	Expression psi;
	GridFunction f;
	bool linear;
};

/* Fold the epsilon-dependence into a single unperturbed problem. */
FrozenProblem freeze_at(const ProblemSpec &p, double eps) {
	RulePtr rule = p.make_rule();
	DiscreteKernel K0 = p.discretize0(rule);
	DiscreteKernel K1 = p.discretize1(rule);
	DiscreteKernel K{rule, K0.M + eps * K1.M, K0.clamped_entries + K1.clamped_entries};
	Expression psi = p.psi0 + Expression::number(eps) * p.psi1;
	GridFunction f = sample_forcing(p.forcing, rule, eps);
	// branch on the declared form, not the frozen psi: a nonlinear problem
	// frozen at eps = 0 may degenerate to psi = z yet still owns the eigen
	// branch when the resolvent is singular there
	bool linear = p.is_linear();
	return FrozenProblem{rule, std::move(K), std::move(psi), std::move(f), linear};
}

/*
 * Full Newton corrections applied after the driver's residual contract is
 * met.  The driver stops near 1e-12; a difference quotient of order k
 * divides solver noise by h^k, so stencil solves must sit at the machine
 * floor instead.  Steps are accepted only while the residual decreases.
 */
GridFunction polish(const FrozenProblem &fp, double omega, GridFunction phi) {
	Expression dpsi = fp.psi.derivative(Var::Z);
	auto residual = [&](const GridFunction &v) {
		Eigen::VectorXd psiv = sample_pointwise(fp.psi, *fp.rule, v.values);
		GridFunction kpsi = apply_kernel(fp.K, GridFunction{fp.rule, psiv});
		return Eigen::VectorXd(v.values - omega * kpsi.values - fp.f.values);
	};
	Eigen::VectorXd r = residual(phi);
	for (int step = 0; step < 2; ++step) {
		Eigen::VectorXd slope = sample_pointwise(dpsi, *fp.rule, phi.values);
		DiscreteKernel Keff{fp.rule, fp.K.M * slope.asDiagonal(), 0};
		ResolventOperator J(Keff, omega);
		if (J.near_singular())
			break;
		GridFunction delta = J.solve(GridFunction{fp.rule, r});
		GridFunction next{fp.rule, phi.values - delta.values};
		Eigen::VectorXd rn = residual(next);
		if (rn.lpNorm<Eigen::Infinity>() >= r.lpNorm<Eigen::Infinity>())
			break;
		phi = std::move(next);
		r = std::move(rn);
	}
	return phi;
}

GridFunction solve_frozen(const ProblemSpec &p, const FrozenProblem &fp,
                          const GridFunction *seed) {
	if (fp.linear)
		return solve_fredholm2(fp.K, p.omega, fp.f);

	GridFunction start = fp.f;
	if (seed) {
		start = *seed;
	} else if (fp.f.values.lpNorm<Eigen::Infinity>() == 0.0 &&
	           p.psi0.is_variable(Var::Z)) {
		DiscreteKernel K0 = p.discretize0(fp.rule);
		if (auto base = resonant_base(p.kernel0, K0, p.omega, p.base_scale))
			start = *base;
	}
	return polish(fp, p.omega,
	              hammerstein_newton(fp.K, p.omega, fp.psi, fp.f, start));
}

} // namespace

GridFunction direct_solve_at(const ProblemSpec &p, double eps,
                             const GridFunction *seed) {
	FrozenProblem fp = freeze_at(p, eps);
	return solve_frozen(p, fp, seed);
}

GridFunction fd_coefficients(const ProblemSpec &p, int k,
                             std::optional<double> h) {
	if (k < 0)
		throw ConfigError("finite-difference order must be nonnegative");
	if (k == 0)
		return direct_solve_at(p, 0.0);

	double step;
	if (h) {
		step = *h;
		if (!(step > 0.0))
			throw ConfigError("finite-difference step must be positive");
	} else {
		// the extrapolated quotient truncates at O(h^2) while solver
		// noise is amplified by h^-k; this step balances the two for
		// solves polished to the machine floor
		double scale = 1.0;
		if (p.is_linear()) {
			// the kernel contraction ratio prices coefficient decay
			// for linear problems only; nonlinear branch points are
			// invisible to the kernel norms, so the step stays put
			RulePtr rule = p.make_rule();
			KernelNorms n0 = kernel_norms(p.discretize0(rule));
			KernelNorms n1 = kernel_norms(p.discretize1(rule));
			auto rho = rho_linear(p.omega, n0.matching(p.norm_kind),
			                      n1.matching(p.norm_kind));
			if (rho && *rho > 0.0)
				scale = std::max(scale, 1.0 / *rho);
		}
		step = scale * std::pow(1e-14, 1.0 / (k + 2));
	}

	/*
	 * Forward stencil at {0, h, .., k h}.  Newton at each node is seeded
	 * by the previous node's solution, so the whole stencil stays on the
	 * branch the base solution selects.
	 */
	auto stencil = [&](double hh) {
		std::vector<GridFunction> phi;
		phi.reserve(k + 1);
		for (int i = 0; i <= k; ++i) {
			const GridFunction *seed = phi.empty() ? nullptr : &phi.back();
			phi.push_back(direct_solve_at(p, i * hh, seed));
		}
		Eigen::VectorXd acc = Eigen::VectorXd::Zero(phi[0].values.size());
		double binom = 1.0;
		for (int i = 0; i <= k; ++i) {
			double sign = ((k - i) % 2 == 0) ? 1.0 : -1.0;
			acc += sign * binom * phi[i].values;
			binom = binom * (k - i) / (i + 1);
		}
		double denom = 1.0;
		for (int i = 1; i <= k; ++i)
			denom *= i * hh;
		return GridFunction{phi[0].rule, acc / denom};
	};

	GridFunction coarse = stencil(step);
	GridFunction fine = stencil(step / 2.0);
	return GridFunction{coarse.rule, 2.0 * fine.values - coarse.values};
}

std::function<GridFunction(double)>
separable_closed_form(const ProblemSpec &p, const SeparableFactors &factors) {
	RulePtr rule = p.make_rule();

	auto sample_x = [&](const Expression &e) {
		Eigen::VectorXd v(rule->size());
		for (Eigen::Index i = 0; i < v.size(); ++i)
			v[i] = e.evaluate(EvalPoint{.x = rule->nodes()[i]});
		return v;
	};
	auto sample_y = [&](const Expression &e) {
		Eigen::VectorXd v(rule->size());
		for (Eigen::Index i = 0; i < v.size(); ++i)
			v[i] = e.evaluate(EvalPoint{.y = rule->nodes()[i]});
		return v;
	};

	Eigen::VectorXd g = sample_x(factors.gx);
	Eigen::VectorXd u = sample_x(factors.ux);
	Eigen::VectorXd hv = sample_y(factors.hy);
	Eigen::VectorXd vv = sample_y(factors.vy);
	Eigen::VectorXd w = rule->weights();

	/* Moments of the separable factors against the forcing and each other. */
	auto moment = [&](const Eigen::VectorXd &row, const Eigen::VectorXd &col) {
		return row.dot(w.cwiseProduct(col));
	};

	GridFunction f0 = sample_forcing(p.forcing, rule);
	double hg = moment(hv, g);
	double hu = moment(hv, u);
	double vg = moment(vv, g);
	double vu = moment(vv, u);
	double hf = moment(hv, f0.values);
	double vf = moment(vv, f0.values);
	double omega = p.omega;

	return [=](double eps) {
		Eigen::Matrix2d A;
		A << 1.0 - omega * hg, -eps * omega * hu,
		    -omega * vg, 1.0 - eps * omega * vu;
		double det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
		double scale = std::max({std::abs(A(0, 0)), std::abs(A(0, 1)),
		                         std::abs(A(1, 0)), std::abs(A(1, 1)), 1.0});
		if (std::abs(det) <= 1e-14 * scale * scale)
			throw SingularSystemError("separable moment system is singular");
		Eigen::Vector2d rhs(hf, vf);
		Eigen::Vector2d ab = A.inverse() * rhs;
		Eigen::VectorXd phi =
		    f0.values + omega * ab[0] * g + eps * omega * ab[1] * u;
		return GridFunction{rule, phi};
	};
}

} // namespace fredpert
