#ifndef FREDPERT_COMPOSITION_HPP
#define FREDPERT_COMPOSITION_HPP

#include <vector>

#include "fredpert/operators.hpp"

namespace fredpert {

/*
 * Truncated power series with grid-function coefficients,
 *
 *   s( eps ) = Sum_{j=0..N} coeff[j] ( eps - base )^j ,
 *
 * the container for solution expansions and composed nonlinearities.
 * Plain coefficients throughout: no factorial scaling is folded in.
 */
struct CoeffSeries {
	RulePtr rule;
	std::vector<Eigen::VectorXd> coeff;

	int order() const { return static_cast<int>(coeff.size()) - 1; }

	static CoeffSeries zeros(const RulePtr &rule, int order);
};

// Same truncation order and rule required; both close over that order.
CoeffSeries operator+(const CoeffSeries &a, const CoeffSeries &b);

// c_k = Sum_{i+j=k} a_i .* b_j (pointwise grid products), truncated at the
// common order N.  Throws ConfigError on order or rule mismatch.
CoeffSeries cauchy_product(const CoeffSeries &a, const CoeffSeries &b);

/*
 * Composition of a nonlinearity with a perturbed argument: the expansion of
 *
 *   psi( y, base( y ) + delta( eps, y ) ),    delta( 0 ) = 0,
 *
 * to the requested order, in the numerically benign derivative form
 *
 *   u_0 = psi( base ),
 *   u_k = Sum_{m=1..k} ( d^m psi / dz^m )( y, base ) / m!  .*  [ delta^m ]_k ,
 *
 * with [ delta^m ]_k the order-k coefficient of the m-th Cauchy power.
 * delta must have a vanishing constant term; z-derivatives are symbolic
 * and sampled at ( y_i, base_i ).
 */
CoeffSeries compose_series(const Expression &psi, const GridFunction &base,
                           const CoeffSeries &delta, int order);

/*
 * Partial exponential Bell polynomial B_{n,k}( x_1, ..., x_{n-k+1} ) by
 *
 *   B_{n,k} = Sum_{i=1..n-k+1} C( n-1, i-1 ) x_i B_{n-i,k-1} ,
 *
 * B_{0,0} = 1, B_{n,0} = B_{0,k} = 0 otherwise.  Needs 1 <= k <= n and at
 * least n-k+1 arguments.  Summing over k at x = (1,1,...) gives the Bell
 * numbers.
 */
double bell_partial(int n, int k, const std::vector<double> &x);

/*
 * Number of ordered k-tuples of pairs ( r_j, s_j ), every entry >= 1, with
 * Sum_j r_j s_j = n.  Exhaustive enumeration of the leading pair with a
 * memo table on ( n, k ).  The count obeys  count <= C( 2n-1, n-1 ).
 */
long long count_product_sum_tuples(int n, int k);

/*
 * Literal product-sum term of the nonlinear recursion at order nu >= 2:
 *
 *   P_nu = Sum  ( nu-1 )! / Prod_j ( s_j! )^{ r_j }  Prod_j terms[ s_j ]^{ r_j }
 *
 * summed over ordered tuples of pairs ( r_j >= 1, s_j >= 1 ) of any length
 * with Sum_j r_j s_j = nu - 1, products taken pointwise on the grid.
 * terms[ 0 ] never enters a product.  Exposed for inspection and
 * cross-checks only; the solve path composes through compose_series,
 * whose normalization is the one the finite-difference oracle confirms.
 */
GridFunction partition_product_sum(const std::vector<GridFunction> &terms, int nu);

} // namespace fredpert

#endif
