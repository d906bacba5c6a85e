#ifndef FREDPERT_SERIES_HPP
#define FREDPERT_SERIES_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fredpert/composition.hpp"
#include "fredpert/problem.hpp"

namespace fredpert {

struct BoundsReport;

struct OrderReport {
	int order = 0;
	double norm_sup = 0.0;
	double norm_l2 = 0.0;
	double norm_l1 = 0.0;
	bool resonant = false;           // solved through the singular path
	int null_dimension = 0;
	double residual_projection = 0.0;
};

struct SeriesDiagnostics {
	std::vector<OrderReport> orders;
	int newton_iterations = 0;
	bool eigen_base = false;         // base taken as base_scale times an eigenfunction
	std::optional<int> aborted_order{};
	std::string abort_reason;
	// max over j >= 1 of ||a_j||^( 1/j ) in the problem norm; the reciprocal
	// is the empirical radius surrogate for nonlinear problems
	double empirical_growth = std::numeric_limits<double>::quiet_NaN();
};

/*
 * Truncated expansion of the solution around base_epsilon:
 *
 *   phi( eps, x )  ~=  Sum_{j=0..N}  a_j( x ) ( eps - base_epsilon )^j
 *
 * Plain coefficients: the recursion, the geometric coefficient bound
 * ||a_j|| <= rho^j ||a_0||, and the direct-solve oracle are consistent
 * exactly in this convention (no 1/j! in the sum).  radius_estimate is
 * 1/rho for linear problems (infinite when the perturbing kernel vanishes,
 * NaN when rho is undefined) and the reciprocal of the empirical growth
 * constant otherwise.  An unsolvable resonant order truncates coefficients
 * early; diagnostics carry the failing order and reason.
 */
struct SeriesSolution {
	double base_epsilon = 0.0;
	std::vector<GridFunction> coefficients;
	int truncation = 0;
	double radius_estimate = std::numeric_limits<double>::quiet_NaN();
	SeriesDiagnostics diagnostics;

	int computed_order() const { return static_cast<int>(coefficients.size()) - 1; }
};

/*
 * Linear path (psi0 = z, psi1 = 0):
 *
 *   a_0 = R f,   a_j = R ( omega K1 a_{j-1} ),   R = ( I - omega K0 )^-1
 *
 * One factorization serves every order.  Throws SingularSystemError when
 * omega sits at a characteristic value of K0.
 */
SeriesSolution linear_series_terms(const ProblemSpec &p, int N, double base_epsilon = 0.0);

/*
 * General path.  The base a_0 solves a_0 = f + omega K0 psi0( a_0 ): by
 * damped Newton seeded with f, except for the homogeneous resonant case
 * ( f = 0, psi0 = z, omega at a characteristic value ) where the base is
 * base_scale times the sup-normalized resonant eigenfunction.  Higher
 * orders collect the order-nu coefficient of the composed right side and
 * solve against the linearization J = I - omega K0 diag( psi0'( a_0 ) ),
 * falling back to the minimal-norm singular solve when J is resonant; an
 * order whose resonant system is unsolvable aborts the series there.
 * newton_seed overrides the Newton initial iterate (continuation hands the
 * previous step's solution across).
 */
SeriesSolution hammerstein_series_terms(const ProblemSpec &p, int N, double base_epsilon = 0.0,
                                        const GridFunction *newton_seed = nullptr);

// Dispatches on is_linear().
SeriesSolution series_terms(const ProblemSpec &p, int N, double base_epsilon = 0.0,
                            const GridFunction *newton_seed = nullptr);

// Horner evaluation of the first M+1 coefficients at eps (default: all).
// outside_radius, when given, is set when ( eps - base ) reaches past the
// series' radius estimate.
GridFunction evaluate_series(const SeriesSolution &s, double eps, std::optional<int> M = {},
                             bool *outside_radius = nullptr);

/*
 * x-derivative series of a linear solution, by postprocessing only:
 *
 *   d_j( x_i ) = f'( x_i ) [ j = 0 ] + omega ( K0x a_j + K1x a_{j-1} )( x_i )
 *
 * with K0x, K1x the discretizations of the x-differentiated kernels.
 */
SeriesSolution derivative_series_terms(const ProblemSpec &p, const SeriesSolution &s);

// Geometric tail bound ||a_0|| ( rho d )^( M+1 ) / ( 1 - rho d ) with
// d = eps - base and M the truncation order; +infinity when rho d >= 1 or
// rho is undefined.
double tail_bound(const SeriesSolution &s, double eps, const BoundsReport &b);

} // namespace fredpert

#endif
