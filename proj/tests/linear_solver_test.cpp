#include <cmath>

#include <doctest.h>

#include "fredpert/errors.hpp"
#include "fredpert/linear_solver.hpp"
#include "fredpert/problem.hpp"

#include "support.hpp"

using namespace fredpert;

TEST_CASE("separable base equation reproduces its closed form") {
	ProblemSpec p = testsup::t1_problem();
	RulePtr rule = p.make_rule();
	DiscreteKernel K = p.discretize0(rule);
	GridFunction f = sample_forcing(p.forcing, rule);

	GridFunction phi = solve_fredholm2(K, p.omega, f);
	for (int i = 0; i < rule->size(); ++i)
		CHECK(phi.values[i] ==
		      doctest::Approx(1.2 * rule->nodes()[i]).epsilon(1e-12));
}

TEST_CASE("solves meet the residual contract") {
	for (std::uint64_t seed : {11ull, 22ull, 33ull, 44ull}) {
		ProblemSpec p = testsup::battery_problem(seed);
		RulePtr rule = p.make_rule();
		DiscreteKernel K = p.discretize0(rule);
		GridFunction f = sample_forcing(p.forcing, rule);

		ResolventOperator R(K, p.omega);
		GridFunction phi = R.solve(f);
		Eigen::VectorXd r = R.matrix() * phi.values - f.values;
		CHECK(r.cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + f.norm_sup()));
	}
}

TEST_CASE("contractive couplings obey the Neumann bound") {
	for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull, 6ull}) {
		ProblemSpec p = testsup::battery_problem(seed);
		RulePtr rule = p.make_rule();
		DiscreteKernel K = p.discretize0(rule);
		KernelNorms n = kernel_norms(K);
		REQUIRE(std::abs(p.omega) * n.n_inf < 1.0);

		GridFunction f = sample_forcing(p.forcing, rule);
		GridFunction phi = solve_fredholm2(K, p.omega, f);
		double bound = f.norm_sup() / (1.0 - std::abs(p.omega) * n.n_inf);
		CHECK(phi.norm_sup() <= bound + 1e-10);
	}
}

TEST_CASE("a characteristic coupling is flagged singular") {
	ProblemSpec p = testsup::resonant_problem(); // omega mu = 2 * 1/2 = 1
	RulePtr rule = p.make_rule();
	DiscreteKernel K = p.discretize0(rule);

	ResolventOperator R(K, p.omega);
	CHECK(R.near_singular());
	GridFunction f = sample_forcing(Expression::parse("1"), rule);
	CHECK_THROWS_AS(R.solve(f), SingularSystemError);
}

TEST_CASE("node interpolation extends the solution off the grid") {
	ProblemSpec p = testsup::t1_problem();
	RulePtr rule = p.make_rule();
	GridFunction phi =
	    solve_fredholm2(p.discretize0(rule), p.omega, sample_forcing(p.forcing, rule));

	for (int i : {0, 7, 31}) {
		double at_node = nystrom_interpolate(p.kernel0, p.forcing, *rule, p.omega,
		                                     phi.values, rule->nodes()[i]);
		CHECK(at_node == doctest::Approx(phi.values[i]).epsilon(1e-12));
	}
	// phi( x ) = 1.2 x exactly, so the midpoint value is known
	double mid = nystrom_interpolate(p.kernel0, p.forcing, *rule, p.omega,
	                                 phi.values, 0.5);
	CHECK(mid == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("eigendecomposition of a rank-one symmetric kernel") {
	auto rule = build_rule(RuleKind::Gauss, 32);
	DiscreteKernel K = discretize_kernel(Expression::parse("cos(pi*x)*cos(pi*y)"), rule);
	EigenSystem es = eigendecompose(K);

	// the only nonzero eigenvalue is integral cos^2( pi y ) dy = 1/2
	CHECK(es.eigenvalues[0] == doctest::Approx(0.5).epsilon(1e-12));
	CHECK(std::abs(es.eigenvalues[1]) <= 1e-12);

	// ordering by descending magnitude
	for (int j = 0; j + 1 < es.eigenvalues.size(); ++j)
		CHECK(std::abs(es.eigenvalues[j]) >= std::abs(es.eigenvalues[j + 1]) - 1e-15);

	// eigenpair relation K u = mu u for the leading mode
	GridFunction u{rule, es.eigenfunctions.col(0)};
	GridFunction Ku = apply_kernel(K, u);
	CHECK((Ku.values - es.eigenvalues[0] * u.values).cwiseAbs().maxCoeff() <= 1e-12);

	// w-orthonormality of the full basis
	Eigen::MatrixXd gram = es.eigenfunctions.transpose() *
	                       rule->weights().asDiagonal() * es.eigenfunctions;
	CHECK((gram - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff() <= 1e-10);

	// sign convention: leading mode tracks +cos( pi x ), positive at the left
	CHECK(u.values[0] > 0.0);
	// and it is the cosine up to the w-normalization constant sqrt(2)
	for (int i = 0; i < 32; ++i)
		CHECK(u.values[i] == doctest::Approx(std::sqrt(2.0) *
		                                     std::cos(M_PI * rule->nodes()[i]))
		                         .epsilon(1e-10));
}

TEST_CASE("asymmetric kernels are rejected by the eigenpath") {
	auto rule = build_rule(RuleKind::Gauss, 16);
	DiscreteKernel K = discretize_kernel(Expression::parse("x*y^2"), rule);
	CHECK_THROWS_AS(eigendecompose(K), ConfigError);
}

TEST_CASE("spectral resolvent agrees with the direct solve away from resonance") {
	auto rule = build_rule(RuleKind::Gauss, 32);
	DiscreteKernel K = discretize_kernel(Expression::parse("cos(pi*x)*cos(pi*y)"), rule);
	GridFunction f = sample_forcing(Expression::parse("1+x"), rule);

	double omega = 0.7; // 1 - omega mu = 0.65, well conditioned
	GridFunction lu = solve_fredholm2(K, omega, f);
	GridFunction spec = spectral_resolvent_solve(eigendecompose(K), omega, f);
	CHECK((lu.values - spec.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("singular solve realizes the solvability alternative") {
	ProblemSpec p = testsup::resonant_problem();
	RulePtr rule = p.make_rule();
	DiscreteKernel K = p.discretize0(rule);

	SUBCASE("right side orthogonal to the forbidden direction") {
		GridFunction f = sample_forcing(Expression::parse("cos(2*pi*x)"), rule);
		SingularSolveResult r = singular_solve(K, p.omega, f, 1e-8);
		CHECK(r.solvable);
		CHECK(r.null_dimension == 1);
		// K annihilates cos( 2 pi x ), so phi = f is the minimal solution
		CHECK((r.phi.values - f.values).cwiseAbs().maxCoeff() <= 1e-8);
	}

	SUBCASE("right side inside the forbidden direction") {
		GridFunction f = sample_forcing(Expression::parse("cos(pi*x)"), rule);
		SingularSolveResult r = singular_solve(K, p.omega, f, 1e-8);
		CHECK(!r.solvable);
		CHECK(r.null_dimension == 1);
		CHECK(r.residual_projection == doctest::Approx(f.norm_l2()).epsilon(1e-8));
	}

	SUBCASE("nonsingular systems reduce to the regular solve") {
		ProblemSpec q = testsup::t1_problem();
		RulePtr qr = q.make_rule();
		DiscreteKernel KQ = q.discretize0(qr);
		GridFunction f = sample_forcing(q.forcing, qr);
		SingularSolveResult r = singular_solve(KQ, q.omega, f, 1e-8);
		CHECK(r.solvable);
		CHECK(r.null_dimension == 0);
		GridFunction direct = solve_fredholm2(KQ, q.omega, f);
		CHECK((r.phi.values - direct.values).cwiseAbs().maxCoeff() <= 1e-9);
	}
}
