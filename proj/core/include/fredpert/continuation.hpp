#ifndef FREDPERT_CONTINUATION_HPP
#define FREDPERT_CONTINUATION_HPP

#include <vector>

#include "fredpert/problem.hpp"
#include "fredpert/series.hpp"

namespace fredpert {

/*
 * Expansion bases visited by the continuation driver, epsilon_0 < .. <
 * epsilon_m.  Also the grid type for the variation functionals.
 */
struct Partition {
	std::vector<double> points;

	double span() const { return points.back() - points.front(); }
};

/*
 * Sharp counterpart of the a-priori radius 1/rho.  `value` is the smaller
 * of two independent estimates: the reciprocal median of the last few
 * coefficient norm ratios, and the deviation point of the truncated series
 * against the direct solver mapped back through the geometric tail model
 * n0 t^(N+1)/(1-t) = tol.  `unbounded` marks series whose perturbation
 * coefficients all vanish (the radius is then infinite).
 * `lower_bound_only` is set when the probe never failed inside the probe
 * cap, or failed only because the direct solver gave out before the
 * tolerance was genuinely exceeded.
 */
struct EmpiricalRadius {
	double value = 0.0;
	bool unbounded = false;
	bool lower_bound_only = false;
	double ratio_estimate = 0.0;
	double deviation_point = 0.0;
};

/*
 * s must be the series of p, computed to order >= 10.  Distances are
 * local: the probe compares evaluate_series(s, base + d) against the
 * direct solve of p at eps = d, which is the arrangement continue_to
 * maintains when it re-poses the problem at each base.  tol is the
 * absolute sup-norm deviation that defines the usable range.
 */
EmpiricalRadius empirical_radius(const ProblemSpec &p, const SeriesSolution &s,
                                 double tol);

/*
 * One continuation run.  step_series[k] is the expansion at
 * partition.points[k]; the step from base k used step_radii[k].  On
 * success the last base is the target itself and `solution` is the base
 * solve there (so the answer never leans on an outer series evaluation).
 * On radius collapse or an aborted series, reached_target is false and
 * max_epsilon is the last base that was solved.
 */
struct ContinuationResult {
	Partition partition;
	GridFunction solution;
	std::vector<SeriesSolution> step_series;
	std::vector<double> step_radii;
	bool reached_target = false;
	double max_epsilon = 0.0;
};

/*
 * Walk from eps = 0 to eps_target by re-expanding at successive bases:
 * the perturbation accrued so far is absorbed into the unperturbed part
 * (kernel0 += base*kernel1, psi0 += base*psi1) and the next base solve is
 * seeded with the series value carried across, so Newton stays on the
 * branch the initial base selects.  Steps take step_fraction of the
 * empirical radius; a step below 1e-6 stops the walk (radius collapse).
 * The forcing must not depend on eps.
 */
ContinuationResult continue_to(const ProblemSpec &p, double eps_target,
                               double step_fraction = 0.5, int N = 20,
                               double tol = 1e-9);

/*
 * Per-segment convexity bookkeeping carried alongside a partition.  The
 * variation sum itself is segmentation independent; the flags only label
 * the monotone pieces a caller has identified.
 */
enum class SegmentShape { Convex, Concave };

/*
 * Total variation of the values over the partition:
 *
 *   V  =  Sum_j | f( x_{j+1} ) - f( x_j ) |
 *
 * For continuously differentiable f this converges to the integral of
 * |f'| under refinement, and for monotone f it telescopes to
 * | f(b) - f(a) | on every partition.  segments, when nonempty, must hold
 * one flag per segment.
 */
double variation(const Partition &P, const std::vector<double> &values,
                 const std::vector<SegmentShape> &segments = {});

// Literal difference-quotient sum  Sum_j | ( f_{j+1} - f_j ) / ( x_{j+1} -
// x_j ) |  kept for inspection; it grows like n avg|f'| under uniform
// refinement instead of converging, which is why `variation` drops the
// denominator.
double variation_difference_quotient(const Partition &P,
                                     const std::vector<double> &values);

/*
 * Lexicographic partition order: smaller span precedes; on equal spans the
 * LARGER variation precedes (a finer sampling of the same range counts as
 * further along).  Comparisons are exact.
 */
enum class PartitionOrder { Precedes, Equal, Follows };

PartitionOrder partition_compare(const Partition &P, const std::vector<double> &values_p,
                                 const Partition &Q, const std::vector<double> &values_q);

} // namespace fredpert

#endif
