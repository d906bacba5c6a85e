#ifndef FREDPERT_ORACLE_HPP
#define FREDPERT_ORACLE_HPP

#include <functional>
#include <optional>

#include "fredpert/expr.hpp"
#include "fredpert/operators.hpp"
#include "fredpert/problem.hpp"

namespace fredpert {

/*
 * Independent checks for the series engine.  Everything here solves the
 * perturbed problem without expanding in epsilon, so agreement with the
 * series is evidence rather than tautology.
 */

/*
 * Solve the problem at a fixed epsilon by folding the perturbations into
 * an unperturbed problem: kernel M0 + eps*M1, nonlinearity psi0 + eps*psi1.
 * Linear problems go through the resolvent; nonlinear ones through Newton,
 * seeded with `seed` when given, else with the resonant eigenfunction for
 * homogeneous resonant problems, else with the forcing.
 */
GridFunction direct_solve_at(const ProblemSpec &p, double eps,
                             const GridFunction *seed = nullptr);

/*
 * Extract the k-th series coefficient by finite differences in epsilon.
 * Uses the forward difference of order k at 0 with one Richardson step,
 * so the result is a_k + O(h^2).  The default h is scaled by the linear
 * convergence radius when one exists.  k = 0 is the direct solve at 0.
 */
GridFunction fd_coefficients(const ProblemSpec &p, int k,
                             std::optional<double> h = {});

/*
 * Rank-one-plus-rank-one separable problem
 *   kernel0 = g(x) h(y),  kernel1 = u(x) v(y),
 * whose solution is f + omega*A*g + eps*omega*B*u with (A, B) from a 2x2
 * moment system.  The returned callable evaluates the closed form on the
 * problem's quadrature grid at any epsilon.
 */
struct SeparableFactors {
	Expression gx;
	Expression hy;
	Expression ux;
	Expression vy;
};

std::function<GridFunction(double)>
separable_closed_form(const ProblemSpec &p, const SeparableFactors &factors);

} // namespace fredpert

#endif
