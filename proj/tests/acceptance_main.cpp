/*
 * Acceptance gate: one self-contained check per shipped guarantee, each
 * printed as a single PASS or FAIL line.  The process exit code is the
 * number of failed checks, so the harness doubles as a ctest entry.
 */
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fredpert/bounds.hpp"
#include "fredpert/composition.hpp"
#include "fredpert/continuation.hpp"
#include "fredpert/oracle.hpp"
#include "fredpert/problem_io.hpp"
#include "fredpert/series.hpp"

#include "support.hpp"

using namespace fredpert;

namespace {

std::string catalog(const char *name) {
	return std::string(FREDPERT_CATALOG_DIR) + "/" + name;
}

// largest deviation of a grid function from a reference curve at the nodes
double sup_against(const GridFunction &g, const std::function<double(double)> &ref) {
	double worst = 0.0;
	const Eigen::VectorXd &x = g.rule->nodes();
	for (Eigen::Index i = 0; i < x.size(); ++i)
		worst = std::max(worst, std::abs(g.values[i] - ref(x[i])));
	return worst;
}

std::string exceeds(const char *what, double got, double limit) {
	return std::string(what) + " = " + testsup::num(got) + " exceeds " +
	       testsup::num(limit);
}

/*
 *      /\  separable benchmark: phi - (eps/2) K phi = x with the kernel
 *     /  \ x ( y + eps ), whose solution is 12 x / ( 10 - 3 eps ) and
 *    /____\ whose expansion is 1.2 x Sum ( 0.3 eps )^j.
 */
std::string check_separable_series() {
	ProblemSpec p = testsup::t1_problem();
	SeriesSolution s = series_terms(p, 30);

	GridFunction value = evaluate_series(s, 1.0);
	double err = sup_against(value, [](double x) { return 12.0 / 7.0 * x; });
	if (err > 1e-9)
		return exceeds("series value error at full coupling", err, 1e-9);

	const double slope[3] = {1.2, 0.36, 0.108};
	for (int j = 0; j < 3; ++j) {
		double cj = slope[j];
		double gap = sup_against(s.coefficients[j],
		                         [cj](double x) { return cj * x; });
		if (gap > 1e-10)
			return exceeds("coefficient error", gap, 1e-10);
	}
	return {};
}

struct BatterySeries {
	ProblemSpec problem;
	SeriesSolution series;
};

std::vector<BatterySeries> &battery() {
	static std::vector<BatterySeries> runs = [] {
		std::vector<BatterySeries> v;
		for (std::uint64_t seed = 1; seed <= 10; ++seed) {
			ProblemSpec p = testsup::battery_problem(seed);
			SeriesSolution s = series_terms(p, 40);
			v.push_back({std::move(p), std::move(s)});
		}
		return v;
	}();
	return runs;
}

std::string check_battery_values() {
	for (const auto &run : battery()) {
		const ProblemSpec &p = run.problem;
		RulePtr rule = p.make_rule();
		KernelNorms n0 = kernel_norms(p.discretize0(rule));
		KernelNorms n1 = kernel_norms(p.discretize1(rule));

		double nmax = std::max({n0.n_inf, n0.n_2, n0.n_1});
		if (std::abs(p.omega) * nmax > 0.5)
			return "battery problem breaks its own coupling budget";

		auto rho = rho_linear(p.omega, n0.n_inf, n1.n_inf);
		if (!rho || !(*rho > 0.0))
			return "battery problem has no contraction ratio";

		double eps = 0.5 / *rho;
		GridFunction sv = evaluate_series(run.series, eps);
		GridFunction dv = direct_solve_at(p, eps, &sv);
		double rel = (sv.values - dv.values).lpNorm<Eigen::Infinity>() /
		             dv.values.lpNorm<Eigen::Infinity>();
		if (rel > 1e-8)
			return exceeds("relative error at half the contraction radius", rel, 1e-8);
	}
	return {};
}

std::string check_battery_coefficient_bound() {
	const NormKind kinds[] = {NormKind::Sup, NormKind::L2, NormKind::L1};
	for (const auto &run : battery()) {
		const ProblemSpec &p = run.problem;
		RulePtr rule = p.make_rule();
		KernelNorms n0 = kernel_norms(p.discretize0(rule));
		KernelNorms n1 = kernel_norms(p.discretize1(rule));

		for (NormKind kind : kinds) {
			auto rho = rho_linear(p.omega, n0.matching(kind), n1.matching(kind));
			if (!rho)
				return "battery problem has no contraction ratio";
			double bound = run.series.coefficients[0].norm(kind);
			for (int j = 1; j <= 20; ++j) {
				bound *= *rho;
				double nj = run.series.coefficients[j].norm(kind);
				if (nj > bound + 1e-10)
					return exceeds("coefficient norm over the geometric bound",
					               nj - bound, 1e-10);
			}
		}
	}
	return {};
}

std::string check_quadratic_against_difference_quotients() {
	ProblemSpec p = load_problem_file(catalog("hammerstein_quadratic.json"));
	SeriesSolution s = series_terms(p, 8);
	for (int j = 0; j <= 4; ++j) {
		GridFunction fd = fd_coefficients(p, j);
		double gap = (s.coefficients[j].values - fd.values).lpNorm<Eigen::Infinity>();
		double budget = 1e-4 * (1.0 + s.coefficients[j].norm_sup());
		if (gap > budget)
			return exceeds("difference-quotient disagreement", gap, budget);
	}
	return {};
}

std::string check_resonant_series() {
	ProblemSpec p = load_problem_file(catalog("resonant_cos.json"));
	SeriesSolution s = series_terms(p, 10);

	double base_err = sup_against(s.coefficients[0],
	                              [](double x) { return std::cos(M_PI * x); });
	if (base_err > 1e-10)
		return exceeds("eigenfunction base error", base_err, 1e-10);
	for (int j = 1; j <= 10; ++j) {
		double nj = s.coefficients[j].norm_sup();
		if (nj > 1e-10)
			return exceeds("nonzero correction on a self-sustaining base", nj, 1e-10);
	}

	GridFunction direct = direct_solve_at(p, 0.2);
	double derr = sup_against(direct, [](double x) { return std::cos(M_PI * x); });
	if (derr > 1e-8)
		return exceeds("direct resonant solve error", derr, 1e-8);
	return {};
}

// series as plain coefficient stacks for the composition cross-check
using Stack = std::vector<Eigen::VectorXd>;

Stack stack_product(const Stack &a, const Stack &b) {
	Stack c(a.size(), Eigen::VectorXd::Zero(a[0].size()));
	for (std::size_t k = 0; k < c.size(); ++k)
		for (std::size_t i = 0; i <= k; ++i)
			c[k] += a[i].cwiseProduct(b[k - i]);
	return c;
}

long long enumerate_product_sum_tuples(int n, int k) {
	if (n == 0 && k == 0)
		return 1;
	if (n <= 0 || k <= 0)
		return 0;
	long long total = 0;
	for (int r = 1; r <= n; ++r)
		for (int s = 1; r * s <= n; ++s)
			total += enumerate_product_sum_tuples(n - r * s, k - 1);
	return total;
}

double binom(int n, int k) {
	double v = 1.0;
	for (int i = 1; i <= k; ++i)
		v *= static_cast<double>(n - k + i) / i;
	return v;
}

std::string check_composition_identities() {
	// polynomial composition against the literally expanded powers
	auto rule = build_rule(RuleKind::Gauss, 12);
	const Eigen::Index n = rule->size();
	const int order = 8;

	Expression psi = Expression::parse(
	    "0.5-1*z+0.75*z^2+0.3*z^3-0.2*z^4+0.1*z^5");
	GridFunction base{rule, Eigen::VectorXd::NullaryExpr(n, [&](Eigen::Index i) {
		                  return 1.0 + 0.5 * rule->nodes()[i];
	                  })};
	CoeffSeries delta = CoeffSeries::zeros(rule, order);
	testsup::Rng rng(0x1dea5eedULL);
	for (int k = 1; k <= order; ++k)
		for (Eigen::Index i = 0; i < n; ++i)
			delta.coeff[k][i] = rng.uniform(-0.5, 0.5);

	CoeffSeries got = compose_series(psi, base, delta, order);

	Stack arg(order + 1);
	arg[0] = base.values;
	for (int k = 1; k <= order; ++k)
		arg[k] = delta.coeff[k];
	Stack power(order + 1, Eigen::VectorXd::Zero(n));
	power[0] = Eigen::VectorXd::Ones(n);
	const double c[6] = {0.5, -1.0, 0.75, 0.3, -0.2, 0.1};
	Stack want(order + 1, Eigen::VectorXd::Zero(n));
	for (int k = 0; k <= order; ++k)
		want[k] += c[0] * power[k];
	for (int m = 1; m <= 5; ++m) {
		power = stack_product(power, arg);
		for (int k = 0; k <= order; ++k)
			want[k] += c[m] * power[k];
	}
	for (int k = 0; k <= order; ++k) {
		double gap = (got.coeff[k] - want[k]).lpNorm<Eigen::Infinity>();
		if (gap > 1e-12)
			return exceeds("composed coefficient error", gap, 1e-12);
	}

	// tuple counts against exhaustive enumeration and the binomial cap
	for (int nn = 1; nn <= 8; ++nn)
		for (int k = 1; k <= 8; ++k)
			if (count_product_sum_tuples(nn, k) != enumerate_product_sum_tuples(nn, k))
				return "tuple count disagrees with exhaustive enumeration";
	for (int nn = 1; nn <= 12; ++nn) {
		double cap = binom(2 * nn - 1, nn - 1);
		if (static_cast<double>(count_product_sum_tuples(nn, nn)) > cap)
			return "tuple count breaks the binomial cap";
	}

	// Bell polynomial rows summed at unit arguments against the Bell triangle
	std::vector<double> bell = {1.0};
	{
		std::vector<double> row = {1.0};
		for (int nn = 1; nn <= 10; ++nn) {
			std::vector<double> next(row.size() + 1);
			next[0] = row.back();
			for (std::size_t i = 0; i + 1 < next.size(); ++i)
				next[i + 1] = next[i] + row[i];
			bell.push_back(next[0]);
			row = std::move(next);
		}
	}
	for (int nn = 1; nn <= 10; ++nn) {
		std::vector<double> ones(static_cast<std::size_t>(nn), 1.0);
		double sum = 0.0;
		for (int k = 1; k <= nn; ++k)
			sum += bell_partial(nn, k, ones);
		if (std::abs(sum - bell[static_cast<std::size_t>(nn)]) > 1e-6)
			return "Bell polynomial row sum misses the Bell number";
	}
	return {};
}

std::string check_admissibility_roots() {
	OmegaRoots roots = g_pm(1.0, 1.0, 1.0);
	if (!roots.g_minus || !roots.g_plus)
		return "admissibility quadratic lost a real root";
	if (std::abs(*roots.g_minus - 1.0 / 3.0) > 1e-12 ||
	    std::abs(*roots.g_plus - 1.0) > 1e-12)
		return "admissibility roots off the closed form (1/3, 1)";

	// ( d c1 + 2 c0^2 ) g^2 - ( 2 d c0 + c0 + c1 ) g + 1 at both roots
	for (double g : {*roots.g_minus, *roots.g_plus}) {
		double res = 3.0 * g * g - 4.0 * g + 1.0;
		if (std::abs(res) > 1e-10)
			return exceeds("quadratic residual at a root", std::abs(res), 1e-10);
	}

	if (envelope(EnvelopeKind::Hammerstein, 0.5, 1.0) != 2.0)
		return "nonlinear growth envelope missed the exact value 2";
	return {};
}

std::string check_empirical_radius() {
	const char *files[] = {"t1_separable.json", "resonant_cos.json",
	                       "hammerstein_quadratic.json", "trig_linear.json"};
	for (const char *file : files) {
		ProblemSpec p = load_problem_file(catalog(file));
		if (!p.is_linear())
			continue;
		RulePtr rule = p.make_rule();
		KernelNorms n0 = kernel_norms(p.discretize0(rule));
		KernelNorms n1 = kernel_norms(p.discretize1(rule));
		auto rho = rho_linear(p.omega, n0.matching(p.norm_kind),
		                      n1.matching(p.norm_kind));
		if (!rho)
			return "catalog problem has no contraction ratio";

		SeriesSolution s = series_terms(p, 30);
		EmpiricalRadius r = empirical_radius(p, s, 1e-9);
		if (r.unbounded)
			return "empirical radius claims an entire function";
		if (r.value < 1.0 / *rho - 1e-6)
			return exceeds("contraction radius over the empirical one",
			               1.0 / *rho - r.value, 1e-6);

		if (std::string(file) == "t1_separable.json" &&
		    (r.value < 3.2 || r.value > 3.5))
			return "separable benchmark radius " + testsup::num(r.value) +
			       " outside [3.2, 3.5]";
	}
	return {};
}

std::string check_continuation() {
	ProblemSpec p = testsup::t1_problem();

	ContinuationResult ok = continue_to(p, 3.0);
	if (!ok.reached_target)
		return "walk to a reachable coupling did not arrive";
	if (ok.partition.points.size() < 2)
		return "reachable walk took no intermediate step";
	double err = sup_against(ok.solution, [](double x) { return 12.0 * x; });
	if (err > 1e-6)
		return exceeds("continued solution error", err, 1e-6);

	ContinuationResult blocked = continue_to(p, 4.0);
	if (blocked.reached_target)
		return "walk past the pole claims to have arrived";
	if (!(blocked.max_epsilon > 3.2 && blocked.max_epsilon <= 10.0 / 3.0 + 1e-12))
		return "collapse point " + testsup::num(blocked.max_epsilon) +
		       " outside (3.2, 10/3]";
	return {};
}

std::string check_variation() {
	auto uniform = [](int n) {
		Partition P;
		for (int i = 0; i <= n; ++i)
			P.points.push_back(static_cast<double>(i) / n);
		return P;
	};
	auto sample = [](const Partition &P, const std::function<double(double)> &f) {
		std::vector<double> v;
		for (double x : P.points)
			v.push_back(f(x));
		return v;
	};

	auto square = [](double x) { return x * x; };
	for (int n : {1, 2, 7, 32}) {
		Partition P = uniform(n);
		double V = variation(P, sample(P, square));
		if (std::abs(V - 1.0) > 1e-12)
			return exceeds("monotone square variation error", std::abs(V - 1.0), 1e-12);
	}
	Partition uneven{{0.0, 0.15, 0.2, 0.55, 0.8, 1.0}};
	double Vu = variation(uneven, sample(uneven, square));
	if (std::abs(Vu - 1.0) > 1e-12)
		return exceeds("uneven square variation error", std::abs(Vu - 1.0), 1e-12);

	Partition mid{{0.0, 0.5, 1.0}};
	auto vee = [](double x) { return (x - 0.5) * (x - 0.5); };
	if (variation(mid, sample(mid, vee)) != 0.5)
		return "vertex-split parabola variation is not exactly 1/2";

	auto wave = [](double x) { return std::sin(2.0 * M_PI * x); };
	double prev = 0.0;
	double last = 0.0;
	for (int n : {8, 16, 32, 64}) {
		Partition P = uniform(n);
		double V = variation(P, sample(P, wave));
		if (V < prev - 1e-12)
			return "refined wave variation decreased";
		if (V > 4.0 + 1e-12)
			return exceeds("wave variation over the true variation", V - 4.0, 1e-12);
		prev = V;
		last = V;
	}
	if (std::abs(last - 4.0) > 1e-9)
		return exceeds("refined wave variation gap to 4", std::abs(last - 4.0), 1e-9);
	return {};
}

std::string check_derivative_series() {
	ProblemSpec p = testsup::t1_problem();
	SeriesSolution s = series_terms(p, 12);
	SeriesSolution d = derivative_series_terms(p, s);

	double e0 = sup_against(d.coefficients[0], [](double) { return 1.2; });
	double e1 = sup_against(d.coefficients[1], [](double) { return 0.36; });
	if (e0 > 1e-9)
		return exceeds("slope stream order 0 error", e0, 1e-9);
	if (e1 > 1e-9)
		return exceeds("slope stream order 1 error", e1, 1e-9);
	return {};
}

std::string slurp(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	std::ostringstream buf;
	buf << in.rdbuf();
	return buf.str();
}

std::string check_sweep_determinism() {
	auto run = [](const std::string &out) {
		std::string cmd = std::string("\"") + FREDPERT_CLI_PATH +
		                  "\" sweep --problem " + catalog("t1_separable.json") +
		                  " --omega 0.25:0.65:5 --epsilon 0:1.4:5 --order 16 --out " +
		                  out + " >/dev/null 2>&1";
		return std::system(cmd.c_str());
	};
	std::string a = "acceptance_sweep_a.csv";
	std::string b = "acceptance_sweep_b.csv";
	if (run(a) != 0 || run(b) != 0)
		return "sweep run did not exit cleanly";
	std::string ca = slurp(a);
	std::string cb = slurp(b);
	std::remove(a.c_str());
	std::remove(b.c_str());
	if (ca.empty())
		return "sweep produced no output";
	if (ca != cb)
		return "two identical sweep invocations differ byte for byte";
	return {};
}

} // namespace

int main() {
	struct Check {
		const char *label;
		std::function<std::string()> run;
	};
	const Check checks[] = {
	    {"separable benchmark series and leading coefficients", check_separable_series},
	    {"randomized battery series against direct solves", check_battery_values},
	    {"randomized battery geometric coefficient bound", check_battery_coefficient_bound},
	    {"quadratic nonlinearity against difference quotients", check_quadratic_against_difference_quotients},
	    {"resonant kernel rides its eigenfunction base", check_resonant_series},
	    {"composition identities and combinatorial caps", check_composition_identities},
	    {"admissibility roots and growth envelope", check_admissibility_roots},
	    {"empirical radius dominates the contraction estimate", check_empirical_radius},
	    {"continuation reaches 3 and collapses before 4", check_continuation},
	    {"discrete variation functional", check_variation},
	    {"derivative coefficient stream", check_derivative_series},
	    {"sweep atlas is byte-deterministic", check_sweep_determinism},
	};

	int failures = 0;
	for (const Check &c : checks) {
		std::string detail;
		try {
			detail = c.run();
		} catch (const std::exception &e) {
			detail = std::string("exception: ") + e.what();
		}
		if (detail.empty()) {
			std::printf("PASS: %s\n", c.label);
		} else {
			std::printf("FAIL: %s (%s)\n", c.label, detail.c_str());
			++failures;
		}
	}
	return failures;
}
