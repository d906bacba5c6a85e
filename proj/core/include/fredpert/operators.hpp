#ifndef FREDPERT_OPERATORS_HPP
#define FREDPERT_OPERATORS_HPP

#include <Eigen/Core>
#include <optional>
#include <string>

#include "fredpert/expr.hpp"
#include "fredpert/quadrature.hpp"

namespace fredpert {

enum class NormKind { Sup, L2, L1 };

NormKind norm_kind_from_name(const std::string &name); // "sup" | "l2" | "l1"
const char *norm_kind_name(NormKind k);

/*
 * A function known by its values on the nodes of a quadrature rule.  The
 * l2 and l1 norms are the rule-weighted ones, so they approximate the
 * continuous L2[0,1] / L1[0,1] norms rather than the bare vector norms:
 *
 *   ||g||_sup = max_i |g_i|,   ||g||_2^2 = Sum_i w_i g_i^2,
 *   ||g||_1 = Sum_i w_i |g_i|
 */
struct GridFunction {
	RulePtr rule;
	Eigen::VectorXd values;

	double norm_sup() const;
	double norm_l2() const;
	double norm_l1() const;
	double norm(NormKind k) const;
};

// f(x) sampled at the rule nodes (x bound to the node, eps optionally bound).
GridFunction sample_forcing(const Expression &f, const RulePtr &rule,
                            std::optional<double> eps = {});

// psi(y, z) with y bound to the i-th node and z to z[i], entrywise.
Eigen::VectorXd sample_pointwise(const Expression &psi, const QuadratureRule &rule,
                                 const Eigen::VectorXd &z);

/*
 * Nystrom discretization of the integral operator with kernel G(x,y):
 *
 *   (K g)( x_i )  =  Sum_j  w_j G( x_i, y_j ) g_j,      M_ij = G( x_i, y_j )
 *
 * Entries exceeding the configured clamp bound are truncated to the bound
 * and counted; the count is never dropped silently (the CLI reports it).
 */
struct DiscreteKernel {
	RulePtr rule;
	Eigen::MatrixXd M;
	long clamped_entries = 0;

	Eigen::Index size() const { return M.rows(); }
};

DiscreteKernel discretize_kernel(const Expression &kernel, const RulePtr &rule,
                                 std::optional<double> clamp = {});

GridFunction apply_kernel(const DiscreteKernel &K, const GridFunction &g);

/*
 * Operator norm surrogates for the discretized kernel.  n_inf and n_1 are
 * the exact discrete operator norms on the weighted sup / l1 grid norms;
 * n_2 is the weighted Hilbert-Schmidt norm, an upper bound for the
 * operator norm on the weighted l2 norm.  c_sup is the plain entry bound.
 *
 *   n_inf = max_i Sum_j w_j |M_ij|        n_1 = max_j Sum_i w_i |M_ij|
 *   n_2   = sqrt( Sum_ij w_i w_j M_ij^2 )  c_sup = max_ij |M_ij|
 */
struct KernelNorms {
	double c_sup;
	double n_inf;
	double n_2;
	double n_1;

	double matching(NormKind k) const; // n_inf / n_2 / n_1 for sup / l2 / l1
};

KernelNorms kernel_norms(const DiscreteKernel &K);

} // namespace fredpert

#endif
