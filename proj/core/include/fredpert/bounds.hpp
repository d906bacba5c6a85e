#ifndef FREDPERT_BOUNDS_HPP
#define FREDPERT_BOUNDS_HPP

#include <optional>

#include "fredpert/problem.hpp"

namespace fredpert {

/*
 * Closed-form convergence and admissibility constants for a problem.
 *
 * rho is the per-order contraction ratio of the linear recursion in the
 * problem's own norm,  rho = |omega| N( G1 ) / ( 1 - |omega| N( G0 ) ),
 * with N the discrete operator norm matching that norm kind; rho0 is the
 * same ratio on the sup-norm chain.  Both are undefined (empty) when the
 * denominator is not positive.  The admissibility quadratic in omega,
 *
 *   ( D C1 + 2 C0^2 ) w^2 - ( 2 D C0 + C0 + C1 ) w + 1  =  0 ,
 *
 * has roots g_minus <= g_plus when its discriminant is nonnegative;
 * couplings up to g_minus are always safe, and a negative discriminant
 * means no coupling is excluded.
 */
struct BoundsReport {
	NormKind norm_kind = NormKind::Sup;
	double omega = 0.0;

	double kernel0_sup = 0.0;       // C0: max |G0| over the grid
	double kernel1_sup = 0.0;       // C1
	double kernel0_dx_sup = 0.0;    // sup bounds of the x-derivative kernels
	double kernel1_dx_sup = 0.0;
	KernelNorms norms0{};           // full operator norm set of G0
	KernelNorms norms1{};

	std::optional<double> rho{};    // matched-norm contraction ratio
	std::optional<double> rho0{};   // sup-chain contraction ratio

	std::optional<double> D{};      // per-order growth constant (declared or empirical)
	bool D_declared = false;
	std::optional<double> b{};      // declared z-derivative scale of psi
	std::optional<bool> b_check{};  // sampled |d^nu psi/dz^nu| <= b^nu, nu <= 6

	double discriminant = 0.0;
	std::optional<double> g_minus{};   // empty when Delta < 0: all omega admissible
	std::optional<double> g_plus{};
	std::optional<double> omega_max{}; // = g_minus, empty means unbounded
	std::optional<double> epsilon_max{}; // = 1/D when D is known

	std::optional<double> radius_rho{}; // 1/rho
	std::optional<double> radius_D{};   // 1/D
};

// |omega| N1 / ( 1 - |omega| N0 ); empty when |omega| N0 >= 1.
std::optional<double> rho_linear(double omega, double n0, double n1);

// Delta( C0, C1, D ) = ( 2 D C0 + C0 + C1 )^2 - 4 ( D C1 + 2 C0^2 )
double discriminant(double c0, double c1, double d);

struct OmegaRoots {
	std::optional<double> g_minus; // both empty when Delta < 0
	std::optional<double> g_plus;
};

// Roots of the admissibility quadratic.  Throws ConfigError when the
// leading coefficient D C1 + 2 C0^2 vanishes.
OmegaRoots g_pm(double c0, double c1, double d);

enum class EnvelopeKind { Exp, Geometric, Hammerstein };

/*
 * Growth envelopes for truncated-series error control:
 *   exp:          base * e^( rho eps )
 *   geometric:    base / ( 1 - rho eps ),  rho eps < 1
 *   hammerstein:  1 / ( 1 - D eps ),       D eps < 1
 * The first parameter is rho for the first two kinds and D for the third.
 * Out-of-range eps throws ConfigError.
 */
double envelope(EnvelopeKind kind, double rho_or_d, double eps, double base = 1.0);

struct AdmissibleRegion {
	std::optional<double> omega_max; // g_minus; empty = no coupling excluded
	double epsilon_max;              // 1/D
};

AdmissibleRegion admissible_region(double c0, double c1, double d);

/*
 * Assemble the full report for a problem.  D is taken from declared_D when
 * given; otherwise the caller passes the empirical growth constant from a
 * computed series (or nothing, leaving D-dependent entries empty).  The b
 * check samples d^nu psi / dz^nu for nu <= 6 of both nonlinearities on a
 * 10 x 10 grid of ( y, z ) in [0,1] x [-1,1] against b^nu.
 */
BoundsReport compute_bounds_report(const ProblemSpec &p,
                                   std::optional<double> declared_D = {},
                                   std::optional<double> empirical_D = {},
                                   std::optional<double> declared_b = {});

} // namespace fredpert

#endif
