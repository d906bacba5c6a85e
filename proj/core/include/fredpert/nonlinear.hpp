#ifndef FREDPERT_NONLINEAR_HPP
#define FREDPERT_NONLINEAR_HPP

#include <optional>

#include "fredpert/linear_solver.hpp"
#include "fredpert/operators.hpp"

namespace fredpert {

struct NewtonReport {
	int iterations = 0;
	double residual = 0.0;
	bool singular_steps = false; // some steps fell back to the least-squares solve
};

/*
 * Damped Newton iteration for the discretized fixed-epsilon equation
 *
 *   phi - omega K psi( phi ) - f  =  0 ,
 *
 * K already combined across the perturbation (M0 + eps M1) and psi the
 * combined nonlinearity.  The residual is tested before the first step, so
 * a seed that already solves the equation returns immediately even when
 * the Jacobian is singular there (the resonant base sits exactly on a
 * characteristic value).  Steps are damped by halving until the residual
 * decreases; convergence means ||r||_sup <= 1e-12 ( 1 + ||phi||_sup ).
 * Throws NewtonDivergenceError after 100 iterations or a dead-end step.
 */
GridFunction hammerstein_newton(const DiscreteKernel &K, double omega, const Expression &psi,
                                const GridFunction &f, const GridFunction &seed,
                                NewtonReport *report = nullptr);

/*
 * Base of a homogeneous identity-nonlinearity problem when omega sits at a
 * characteristic value of K (within 1e-8 of 1/mu for some eigenvalue):
 * scale times the resonant eigenfunction, normalized so the sup of its
 * continuous Nystrom extension is one (the node sup alone under-reads
 * peaks at the interval ends), sign fixed by eigendecompose.  Empty when
 * no eigenvalue resonates, in which case the only base solution is zero.
 * kernel must be the expression K was discretized from, and symmetric.
 */
std::optional<GridFunction> resonant_base(const Expression &kernel, const DiscreteKernel &K,
                                          double omega, double scale);

} // namespace fredpert

#endif
