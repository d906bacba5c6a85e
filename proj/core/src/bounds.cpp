#include "fredpert/bounds.hpp"
#include "fredpert/errors.hpp"

#include <cmath>

namespace fredpert {

std::optional<double> rho_linear(double omega, double n0, double n1) {
	double denom = 1.0 - std::abs(omega) * n0;
	if (denom <= 0.0)
		return {};
	return std::abs(omega) * n1 / denom;
}

double discriminant(double c0, double c1, double d) {
	double s = 2.0 * d * c0 + c0 + c1;
	return s * s - 4.0 * (d * c1 + 2.0 * c0 * c0);
}

OmegaRoots g_pm(double c0, double c1, double d) {
	double lead = d * c1 + 2.0 * c0 * c0;
	if (lead == 0.0)
		throw ConfigError("g_pm: degenerate admissibility quadratic (D C1 + 2 C0^2 = 0)");
	double delta = discriminant(c0, c1, d);
	if (delta < 0.0)
		return {};
	double s = 2.0 * d * c0 + c0 + c1;
	double root = std::sqrt(delta);
	return {(s - root) / (2.0 * lead), (s + root) / (2.0 * lead)};
}

double envelope(EnvelopeKind kind, double rho_or_d, double eps, double base) {
	switch (kind) {
	case EnvelopeKind::Exp:
		return base * std::exp(rho_or_d * eps);
	case EnvelopeKind::Geometric:
		if (rho_or_d * eps >= 1.0)
			throw ConfigError("geometric envelope needs rho eps < 1");
		return base / (1.0 - rho_or_d * eps);
	case EnvelopeKind::Hammerstein:
		if (rho_or_d * eps >= 1.0)
			throw ConfigError("hammerstein envelope needs D eps < 1");
		return 1.0 / (1.0 - rho_or_d * eps);
	}
	throw ConfigError("unknown envelope kind");
}

AdmissibleRegion admissible_region(double c0, double c1, double d) {
	OmegaRoots roots = g_pm(c0, c1, d);
	return {roots.g_minus, 1.0 / d};
}

namespace {

// sampled sup of |d^nu psi/dz^nu| against b^nu for nu <= 6, over a 10x10
// grid of ( y, z ) in [0,1] x [-1,1]; a cheap sanity screen, not a proof
bool psi_derivative_bound_holds(const Expression &psi, double b) {
	Expression d = psi;
	for (int nu = 1; nu <= 6; ++nu) {
		d = d.derivative(Var::Z);
		double cap = std::pow(b, nu) * (1.0 + 1e-12);
		for (int i = 0; i < 10; ++i)
			for (int j = 0; j < 10; ++j) {
				double y = (i + 0.5) / 10.0;
				double z = -1.0 + (j + 0.5) / 5.0;
				if (std::abs(d.evaluate({.y = y, .z = z})) > cap)
					return false;
			}
	}
	return true;
}

} // namespace

BoundsReport compute_bounds_report(const ProblemSpec &p, std::optional<double> declared_D,
                                   std::optional<double> empirical_D,
                                   std::optional<double> declared_b) {
	BoundsReport r;
	r.norm_kind = p.norm_kind;
	r.omega = p.omega;

	RulePtr rule = p.make_rule();
	DiscreteKernel K0 = p.discretize0(rule);
	DiscreteKernel K1 = p.discretize1(rule);
	r.norms0 = kernel_norms(K0);
	r.norms1 = kernel_norms(K1);
	r.kernel0_sup = r.norms0.c_sup;
	r.kernel1_sup = r.norms1.c_sup;
	r.kernel0_dx_sup = kernel_norms(discretize_kernel(p.kernel0.derivative(Var::X), rule)).c_sup;
	r.kernel1_dx_sup = kernel_norms(discretize_kernel(p.kernel1.derivative(Var::X), rule)).c_sup;

	r.rho = rho_linear(p.omega, r.norms0.matching(p.norm_kind), r.norms1.matching(p.norm_kind));
	r.rho0 = rho_linear(p.omega, r.norms0.n_inf, r.norms1.n_inf);
	if (r.rho && *r.rho > 0.0)
		r.radius_rho = 1.0 / *r.rho;

	r.D = declared_D ? declared_D : empirical_D;
	r.D_declared = declared_D.has_value();
	if (r.D && *r.D > 0.0) {
		r.radius_D = 1.0 / *r.D;
		r.epsilon_max = 1.0 / *r.D;
	}

	r.b = declared_b;
	if (declared_b)
		r.b_check = psi_derivative_bound_holds(p.psi0, *declared_b) &&
		            psi_derivative_bound_holds(p.psi1, *declared_b);

	if (r.D) {
		double lead = *r.D * r.kernel1_sup + 2.0 * r.kernel0_sup * r.kernel0_sup;
		r.discriminant = discriminant(r.kernel0_sup, r.kernel1_sup, *r.D);
		if (lead != 0.0) {
			OmegaRoots roots = g_pm(r.kernel0_sup, r.kernel1_sup, *r.D);
			r.g_minus = roots.g_minus;
			r.g_plus = roots.g_plus;
			r.omega_max = roots.g_minus;
		}
	}
	return r;
}

} // namespace fredpert
