#include "fredpert/composition.hpp"
#include "fredpert/errors.hpp"

#include <cmath>
#include <map>

namespace fredpert {

CoeffSeries CoeffSeries::zeros(const RulePtr &rule, int order) {
	CoeffSeries s{rule, {}};
	s.coeff.assign(order + 1, Eigen::VectorXd::Zero(rule->size()));
	return s;
}

namespace {

void check_compatible(const CoeffSeries &a, const CoeffSeries &b) {
	if (a.rule != b.rule)
		throw ConfigError("series operands live on different rules");
	if (a.order() != b.order())
		throw ConfigError("series operands have different truncation orders");
}

} // namespace

CoeffSeries operator+(const CoeffSeries &a, const CoeffSeries &b) {
	check_compatible(a, b);
	CoeffSeries c{a.rule, a.coeff};
	for (size_t k = 0; k < c.coeff.size(); ++k)
		c.coeff[k] += b.coeff[k];
	return c;
}

CoeffSeries cauchy_product(const CoeffSeries &a, const CoeffSeries &b) {
	check_compatible(a, b);
	int N = a.order();
	CoeffSeries c = CoeffSeries::zeros(a.rule, N);
	for (int k = 0; k <= N; ++k)
		for (int i = 0; i <= k; ++i)
			c.coeff[k] += a.coeff[i].cwiseProduct(b.coeff[k - i]);
	return c;
}

CoeffSeries compose_series(const Expression &psi, const GridFunction &base,
                           const CoeffSeries &delta, int order) {
	if (delta.rule != base.rule)
		throw ConfigError("compose_series: delta and base live on different rules");
	if (delta.coeff.empty() || delta.coeff[0].cwiseAbs().maxCoeff() != 0.0)
		throw ConfigError("compose_series: delta must have a zero constant term");

	const QuadratureRule &rule = *base.rule;
	CoeffSeries u = CoeffSeries::zeros(base.rule, order);
	u.coeff[0] = sample_pointwise(psi, rule, base.values);

	// pad or cut delta to the target order; powers stay at that order
	CoeffSeries d = CoeffSeries::zeros(base.rule, order);
	for (int k = 1; k <= std::min(order, delta.order()); ++k)
		d.coeff[k] = delta.coeff[k];

	Expression dz = psi;
	CoeffSeries power = d;
	double m_fact = 1.0;
	for (int m = 1; m <= order; ++m) {
		dz = dz.derivative(Var::Z);
		m_fact *= m;
		Eigen::VectorXd scale = sample_pointwise(dz, rule, base.values) / m_fact;
		// [ delta^m ]_k vanishes below k = m since delta( 0 ) = 0
		for (int k = m; k <= order; ++k)
			u.coeff[k] += scale.cwiseProduct(power.coeff[k]);
		if (m < order)
			power = cauchy_product(power, d);
	}
	return u;
}

double bell_partial(int n, int k, const std::vector<double> &x) {
	if (k < 1 || k > n)
		throw ConfigError("bell_partial needs 1 <= k <= n");
	if (static_cast<int>(x.size()) < n - k + 1)
		throw ConfigError("bell_partial: argument list too short");

	// binomials up to n via the Pascal row recurrence
	std::vector<std::vector<double>> C(n + 1, std::vector<double>(n + 1, 0.0));
	for (int i = 0; i <= n; ++i) {
		C[i][0] = 1.0;
		for (int j = 1; j <= i; ++j)
			C[i][j] = C[i - 1][j - 1] + (j <= i - 1 ? C[i - 1][j] : 0.0);
	}

	// B[m][l] = B_{m,l}
	std::vector<std::vector<double>> B(n + 1, std::vector<double>(k + 1, 0.0));
	B[0][0] = 1.0;
	for (int m = 1; m <= n; ++m)
		for (int l = 1; l <= std::min(m, k); ++l) {
			double acc = 0.0;
			for (int i = 1; i <= m - l + 1; ++i)
				acc += C[m - 1][i - 1] * x[i - 1] * B[m - i][l - 1];
			B[m][l] = acc;
		}
	return B[n][k];
}

namespace {

long long count_tuples_memo(int n, int k, std::map<std::pair<int, int>, long long> &memo) {
	if (k == 0)
		return n == 0 ? 1 : 0;
	if (n < k)
		return 0; // every pair contributes at least 1
	auto it = memo.find({n, k});
	if (it != memo.end())
		return it->second;
	long long acc = 0;
	// enumerate the leading pair ( r, s ); the rest must sum to n - r s
	for (int r = 1; r <= n - (k - 1); ++r)
		for (int s = 1; r * s <= n - (k - 1); ++s)
			acc += count_tuples_memo(n - r * s, k - 1, memo);
	memo[{n, k}] = acc;
	return acc;
}

} // namespace

long long count_product_sum_tuples(int n, int k) {
	if (n < 1 || k < 1)
		throw ConfigError("count_product_sum_tuples needs n >= 1, k >= 1");
	std::map<std::pair<int, int>, long long> memo;
	return count_tuples_memo(n, k, memo);
}

GridFunction partition_product_sum(const std::vector<GridFunction> &terms, int nu) {
	if (nu < 2)
		throw ConfigError("partition_product_sum needs nu >= 2");
	if (static_cast<int>(terms.size()) < nu)
		throw ConfigError("partition_product_sum: needs terms up to order nu - 1");

	const RulePtr &rule = terms[0].rule;
	Eigen::Index n = rule->size();
	int target = nu - 1;

	double fact = 1.0;
	for (int i = 2; i <= target; ++i)
		fact *= i;
	std::vector<double> s_factorial(target + 1, 1.0);
	for (int s = 2; s <= target; ++s)
		s_factorial[s] = s_factorial[s - 1] * s;

	Eigen::VectorXd total = Eigen::VectorXd::Zero(n);

	// depth-first over ordered pair tuples; carries the running pointwise
	// product and the denominator Prod ( s_j! )^{ r_j }
	struct Walker {
		const std::vector<GridFunction> &terms;
		const std::vector<double> &s_factorial;
		Eigen::VectorXd &total;
		double numerator;

		void walk(int remaining, const Eigen::VectorXd &product, double denom) {
			if (remaining == 0) {
				total += (numerator / denom) * product;
				return;
			}
			for (int s = 1; s <= remaining; ++s)
				for (int r = 1; r * s <= remaining; ++r) {
					Eigen::VectorXd p = product;
					for (int q = 0; q < r; ++q)
						p = p.cwiseProduct(terms[s].values);
					walk(remaining - r * s, p, denom * std::pow(s_factorial[s], r));
				}
		}
	};

	Walker w{terms, s_factorial, total, fact};
	w.walk(target, Eigen::VectorXd::Ones(n), 1.0);
	return {rule, std::move(total)};
}

} // namespace fredpert
