#include "fredpert/operators.hpp"
#include "fredpert/errors.hpp"

#include <cmath>

namespace fredpert {

NormKind norm_kind_from_name(const std::string &name) {
	if (name == "sup")
		return NormKind::Sup;
	if (name == "l2")
		return NormKind::L2;
	if (name == "l1")
		return NormKind::L1;
	throw ConfigError("unknown norm kind '" + name + "' (expected sup, l2 or l1)");
}

const char *norm_kind_name(NormKind k) {
	switch (k) {
	case NormKind::Sup:
		return "sup";
	case NormKind::L2:
		return "l2";
	case NormKind::L1:
		return "l1";
	}
	return "?";
}

double GridFunction::norm_sup() const { return values.size() ? values.lpNorm<Eigen::Infinity>() : 0.0; }

double GridFunction::norm_l2() const {
	return std::sqrt(rule->weights().dot(values.cwiseProduct(values)));
}

double GridFunction::norm_l1() const { return rule->weights().dot(values.cwiseAbs()); }

double GridFunction::norm(NormKind k) const {
	switch (k) {
	case NormKind::Sup:
		return norm_sup();
	case NormKind::L2:
		return norm_l2();
	case NormKind::L1:
		return norm_l1();
	}
	return 0.0;
}

GridFunction sample_forcing(const Expression &f, const RulePtr &rule, std::optional<double> eps) {
	const auto &x = rule->nodes();
	Eigen::VectorXd v(x.size());
	for (Eigen::Index i = 0; i < x.size(); ++i)
		v[i] = f.evaluate({.x = x[i], .eps = eps});
	return {rule, std::move(v)};
}

Eigen::VectorXd sample_pointwise(const Expression &psi, const QuadratureRule &rule,
                                 const Eigen::VectorXd &z) {
	const auto &y = rule.nodes();
	if (z.size() != y.size())
		throw ConfigError("sample_pointwise: value vector does not match rule size");
	Eigen::VectorXd v(y.size());
	for (Eigen::Index i = 0; i < y.size(); ++i)
		v[i] = psi.evaluate({.y = y[i], .z = z[i]});
	return v;
}

DiscreteKernel discretize_kernel(const Expression &kernel, const RulePtr &rule,
                                 std::optional<double> clamp) {
	const auto &x = rule->nodes();
	Eigen::Index n = x.size();
	DiscreteKernel K{rule, Eigen::MatrixXd(n, n), 0};
	for (Eigen::Index i = 0; i < n; ++i)
		for (Eigen::Index j = 0; j < n; ++j) {
			double v = kernel.evaluate({.x = x[i], .y = x[j]});
			if (clamp && std::abs(v) > *clamp) {
				v = std::copysign(*clamp, v);
				++K.clamped_entries;
			}
			K.M(i, j) = v;
		}
	return K;
}

GridFunction apply_kernel(const DiscreteKernel &K, const GridFunction &g) {
	if (g.values.size() != K.size())
		throw ConfigError("apply_kernel: grid function does not match kernel rule");
	return {K.rule, K.M * K.rule->weights().cwiseProduct(g.values)};
}

KernelNorms kernel_norms(const DiscreteKernel &K) {
	const Eigen::VectorXd &w = K.rule->weights();
	Eigen::MatrixXd absM = K.M.cwiseAbs();
	KernelNorms r{};
	r.c_sup = absM.size() ? absM.maxCoeff() : 0.0;
	r.n_inf = (absM * w).maxCoeff();
	r.n_1 = (w.transpose() * absM).maxCoeff();
	r.n_2 = std::sqrt(w.dot(K.M.cwiseProduct(K.M) * w));
	return r;
}

double KernelNorms::matching(NormKind k) const {
	switch (k) {
	case NormKind::Sup:
		return n_inf;
	case NormKind::L2:
		return n_2;
	case NormKind::L1:
		return n_1;
	}
	return 0.0;
}

} // namespace fredpert
