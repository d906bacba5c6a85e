#ifndef FREDPERT_TESTS_SUPPORT_HPP
#define FREDPERT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "fredpert/problem.hpp"

namespace testsup {

/*
 * SplitMix64: tiny, stateless-seedable generator so every property test
 * pins its own sequence.  Doubles come out in [0,1).
 */
struct Rng {
	std::uint64_t state;

	explicit Rng(std::uint64_t seed) : state(seed) {}

	std::uint64_t next_u64() {
		std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
		z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
		z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
		return z ^ (z >> 31);
	}

	double uniform() {
		return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
	}

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline std::string num(double v) {
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

// kernel perturbation pair with every coupling admissible: |omega| times
// each operator norm of kernel0 stays at or below one half
inline fredpert::ProblemSpec battery_problem(std::uint64_t seed) {
	using namespace fredpert;
	Rng rng(seed);
	auto c = [&] { return num(rng.uniform(-1.0, 1.0)); };

	ProblemSpec p;
	p.kernel0 = Expression::parse(c() + "+" + c() + "*x*y+" + c() +
	                              "*sin(pi*x)*cos(pi*y)");
	p.kernel1 = Expression::parse(c() + "+" + c() + "*y+" + c() +
	                              "*cos(pi*x)*sin(pi*y)");
	p.forcing = Expression::parse(c() + "+" + c() + "*x+" + c() + "*sin(pi*x)");
	p.nodes = 24;

	RulePtr rule = p.make_rule();
	KernelNorms n0 = kernel_norms(p.discretize0(rule));
	double nmax = std::max({n0.n_inf, n0.n_2, n0.n_1});
	double theta = rng.uniform(0.5, 0.9);
	double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
	p.omega = sign * 0.5 * theta / nmax;
	return p;
}

inline fredpert::ProblemSpec t1_problem() {
	using namespace fredpert;
	ProblemSpec p;
	p.kernel0 = Expression::parse("x*y");
	p.kernel1 = Expression::parse("x");
	p.forcing = Expression::parse("x");
	p.omega = 0.5;
	p.nodes = 32;
	return p;
}

// closed form of the t1 solution: phi( eps, x ) = 12 x / ( 10 - 3 eps )
inline double t1_alpha(double eps) { return 12.0 / (10.0 - 3.0 * eps); }

inline fredpert::ProblemSpec quadratic_problem() {
	using namespace fredpert;
	ProblemSpec p;
	p.kernel0 = Expression::parse("x*y");
	p.kernel1 = Expression::parse("x");
	p.forcing = Expression::parse("1");
	p.psi0 = Expression::parse("z^2");
	p.omega = 0.25;
	p.nodes = 32;
	return p;
}

// base amplitude of the quadratic problem: a0 = 1 + c x with
// c^2/16 - 5 c/6 + 1/8 = 0, smaller root
inline double quadratic_base_slope() {
	double a = 1.0 / 16.0, b = -5.0 / 6.0, c = 1.0 / 8.0;
	return (-b - std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

inline fredpert::ProblemSpec resonant_problem() {
	using namespace fredpert;
	ProblemSpec p;
	p.kernel0 = Expression::parse("cos(pi*x)*cos(pi*y)");
	p.forcing = Expression::parse("0");
	p.psi1 = Expression::parse("z^2");
	p.omega = 2.0;
	p.nodes = 32;
	return p;
}

// same resonant kernel, cubic perturbation: the order-one right side has a
// nonzero forbidden component, so the series must abort there
inline fredpert::ProblemSpec resonant_cubic_problem() {
	fredpert::ProblemSpec p = resonant_problem();
	p.psi1 = fredpert::Expression::parse("z^3");
	return p;
}

inline fredpert::ProblemSpec trig_problem() {
	using namespace fredpert;
	ProblemSpec p;
	p.kernel0 = Expression::parse("cos(pi*x)*cos(pi*y)");
	p.kernel1 = Expression::parse("sin(pi*x)*sin(pi*y)");
	p.forcing = Expression::parse("1");
	p.omega = 0.5;
	p.nodes = 32;
	return p;
}

} // namespace testsup

#endif
