#ifndef FREDPERT_LINEAR_SOLVER_HPP
#define FREDPERT_LINEAR_SOLVER_HPP

#include <Eigen/Dense>

#include "fredpert/operators.hpp"

namespace fredpert {

/*
 * Factorization of the Nystrom system for the second-kind equation
 *
 *   phi( x ) - omega | G( x, y ) phi( y ) dy = f( x )
 *                    /
 *
 * i.e. A = I - omega M W with W = diag( w ).  The factorization is reused
 * across solves (the perturbation recursion solves against the same A once
 * per order).  Solves run iterative refinement until the residual meets
 * ||A phi - f||_sup <= 1e-10 ( 1 + ||f||_sup ), so the contract holds even
 * for admissible-but-ill-conditioned systems.
 */
class ResolventOperator {
  public:
	ResolventOperator(const DiscreteKernel &K, double omega);

	// reciprocal condition estimate of A; the system counts as singular
	// below 1e-12 (condition estimate above 1e12)
	double rcond() const { return rcond_; }
	bool near_singular() const { return !(rcond_ > 1e-12); }

	// Throws SingularSystemError when near_singular(); throws
	// NumericalError if refinement cannot reach the residual contract.
	GridFunction solve(const GridFunction &f) const;

	const Eigen::MatrixXd &matrix() const { return A_; }
	const RulePtr &rule() const { return rule_; }

  private:
	RulePtr rule_;
	Eigen::MatrixXd A_;
	Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
	double rcond_;
};

// One-shot convenience wrapper around ResolventOperator.
GridFunction solve_fredholm2(const DiscreteKernel &K, double omega, const GridFunction &f);

// Nystrom interpolation of a node solution to an off-node point:
//   phi( x ) = f( x ) + omega Sum_j w_j G( x, y_j ) phi_j
double nystrom_interpolate(const Expression &kernel, const Expression &forcing,
                           const QuadratureRule &rule, double omega,
                           const Eigen::VectorXd &phi_at_nodes, double x);

/*
 * Eigendecomposition of the discretized operator for a symmetric kernel.
 * The discrete problem M W u = mu u is symmetrized as
 *
 *   ( D^1/2 M D^1/2 ) v = mu v,        v = D^1/2 u,   D = diag( w )
 *
 * so eigenvalues are real and eigenfunctions come out w-orthonormal:
 * Sum_i w_i u_j( i ) u_k( i ) = delta_jk.  Columns are ordered by
 * descending |mu| and signed so the first entry of sizable magnitude is
 * positive, which keeps runs reproducible.
 */
struct EigenSystem {
	RulePtr rule;
	Eigen::VectorXd eigenvalues;     // descending |mu|
	Eigen::MatrixXd eigenfunctions;  // column j pairs with eigenvalues[j]
};

// Throws ConfigError when the kernel matrix is not symmetric
// (||M - M^T||_max > 1e-12 max(1, ||M||_max)).
EigenSystem eigendecompose(const DiscreteKernel &K);

// Resolvent evaluated through the spectral sum,
//   phi = f + omega Sum_j mu_j / ( 1 - omega mu_j ) ( f, u_j )_w u_j ,
// omitting modes with |1 - omega mu_j| <= 1e-10.  For a nonsingular
// symmetric system this agrees with solve_fredholm2; at a characteristic
// value it realizes the bounded part of the resolvent.
GridFunction spectral_resolvent_solve(const EigenSystem &es, double omega,
                                      const GridFunction &f);

/*
 * Least-squares / Fredholm-alternative solve for (I - omega M W) phi = f
 * when the system is singular or nearly so.  Computed from the SVD of the
 * symmetrized matrix; singular values below 1e-10 sigma_max count as null.
 * solvable reports whether f is orthogonal to the adjoint nullspace within
 * tol ||f||; phi is the minimal w-weighted-l2-norm solution (the null
 * component is omitted).
 */
struct SingularSolveResult {
	GridFunction phi;
	bool solvable;
	double residual_projection; // l2 norm of f's component in the adjoint nullspace
	int null_dimension;
};

SingularSolveResult singular_solve(const DiscreteKernel &K, double omega,
                                   const GridFunction &f, double tol);

} // namespace fredpert

#endif
