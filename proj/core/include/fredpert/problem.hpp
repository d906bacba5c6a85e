#ifndef FREDPERT_PROBLEM_HPP
#define FREDPERT_PROBLEM_HPP

#include <optional>

#include "fredpert/expr.hpp"
#include "fredpert/operators.hpp"
#include "fredpert/quadrature.hpp"

namespace fredpert {

/*
 * One perturbed integral equation on [0,1] in the unified form
 *
 *                        / 1
 *   phi( x )  =  f( x ) + |  dy  omega ( G0( x, y ) + eps G1( x, y ) )
 *                        / 0
 *                            [ psi0( y, phi( y ) ) + eps psi1( y, phi( y ) ) ]
 *
 * Specializations: psi0 = z, psi1 = 0 gives the linear kernel-perturbed
 * equation; kernel1 = 0, psi0 = z, f = 0 gives the homogeneous equation
 * with a nonlinear perturbation around an eigenfunction base, whose scale
 * is fixed by base_scale.
 */
struct ProblemSpec {
	Expression kernel0;                  // G0( x, y )
	Expression kernel1;                  // G1( x, y ), may be 0
	Expression forcing;                  // f( x ), may be 0
	Expression psi0 = Expression::variable(Var::Z);
	Expression psi1;                     // defaults to 0
	double omega = 1.0;
	NormKind norm_kind = NormKind::Sup;
	RuleKind rule_kind = RuleKind::Gauss;
	int nodes = 32;
	double base_scale = 1.0;             // eigenfunction scale for f = 0, psi0 = z bases
	std::optional<double> clamp{};       // kernel entry bound, reported when it bites

	bool is_linear() const { return psi0.is_variable(Var::Z) && psi1.is_zero(); }
	RulePtr make_rule() const { return build_rule(rule_kind, nodes); }
	DiscreteKernel discretize0(const RulePtr &r) const { return discretize_kernel(kernel0, r, clamp); }
	DiscreteKernel discretize1(const RulePtr &r) const { return discretize_kernel(kernel1, r, clamp); }
};

} // namespace fredpert

#endif
