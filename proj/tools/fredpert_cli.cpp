#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fredpert/bounds.hpp"
#include "fredpert/continuation.hpp"
#include "fredpert/errors.hpp"
#include "fredpert/oracle.hpp"
#include "fredpert/problem_io.hpp"
#include "fredpert/series.hpp"

namespace {

using namespace fredpert;

/*
 * All numeric CSV cells use 17 significant digits so equal inputs give
 * byte-identical files; NaN is normalized because its sign bit is not
 * meaningful output.
 */
std::string fmt(double v) {
	if (std::isnan(v))
		return "nan";
	char buf[40];
	std::snprintf(buf, sizeof buf, "%.17g", v);
	return buf;
}

std::string fmt(std::optional<double> v) { return v ? fmt(*v) : std::string(); }

void write_out(const std::string &text, const std::string &out_path) {
	if (out_path.empty()) {
		std::cout << text;
		return;
	}
	std::ofstream out(out_path, std::ios::binary);
	if (!out)
		throw ConfigError("cannot open output file '" + out_path + "'");
	out << text;
}

// A truncated series is unusable past its failing order; surface the
// engine's reason as a numerical failure.
void require_complete(const SeriesSolution &s) {
	if (s.diagnostics.aborted_order)
		throw NumericalError(s.diagnostics.abort_reason);
}

void report_clamped(const ProblemSpec &p) {
	if (!p.clamp)
		return;
	RulePtr rule = p.make_rule();
	long c0 = p.discretize0(rule).clamped_entries;
	long c1 = p.discretize1(rule).clamped_entries;
	if (c0 + c1 > 0)
		std::cerr << "clamped " << c0 << " kernel0 and " << c1
		          << " kernel1 entries to the configured bound\n";
}

struct GridSpec {
	double lo = 0.0;
	double hi = 0.0;
	int count = 0;

	double at(int i) const {
		return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
	}
};

GridSpec parse_grid(const std::string &text) {
	GridSpec g;
	char tail;
	if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.count, &tail) != 3 ||
	    g.count < 1)
		throw ConfigError("grid must be start:stop:count with count >= 1, got '" +
		                  text + "'");
	return g;
}

int cmd_solve(const std::string &problem, double eps, int order,
              const std::string &out) {
	ProblemSpec p = load_problem_file(problem);
	report_clamped(p);
	SeriesSolution s = series_terms(p, order);
	require_complete(s);
	GridFunction series = evaluate_series(s, eps);
	GridFunction direct = direct_solve_at(p, eps, &series);

	std::ostringstream csv;
	csv << "x,phi_series,phi_direct,abs_err\n";
	const Eigen::VectorXd &x = series.rule->nodes();
	for (Eigen::Index i = 0; i < x.size(); ++i)
		csv << fmt(x[i]) << ',' << fmt(series.values[i]) << ','
		    << fmt(direct.values[i]) << ','
		    << fmt(std::abs(series.values[i] - direct.values[i])) << '\n';
	write_out(csv.str(), out);
	return 0;
}

int cmd_terms(const std::string &problem, int order, const std::string &out) {
	ProblemSpec p = load_problem_file(problem);
	SeriesSolution s = series_terms(p, order);
	require_complete(s);

	std::ostringstream csv;
	csv << "order,sup,l2,ratio\n";
	double prev = 0.0;
	for (int j = 0; j <= s.computed_order(); ++j) {
		double sup = s.coefficients[j].norm_sup();
		double ratio = j == 0 ? std::nan("") : sup / prev;
		csv << j << ',' << fmt(sup) << ',' << fmt(s.coefficients[j].norm_l2())
		    << ',' << fmt(ratio) << '\n';
		prev = sup;
	}
	write_out(csv.str(), out);
	return 0;
}

int cmd_bounds(const std::string &problem, std::optional<double> D,
               std::optional<double> b, bool as_json, const std::string &out) {
	ProblemSpec p = load_problem_file(problem);
	report_clamped(p);

	std::optional<double> empirical;
	if (!D) {
		SeriesSolution s = series_terms(p, 12);
		double g = s.diagnostics.empirical_growth;
		if (!std::isnan(g))
			empirical = g;
	}
	BoundsReport r = compute_bounds_report(p, D, empirical, b);

	std::vector<std::pair<std::string, std::string>> rows = {
	    {"norm_kind", norm_kind_name(r.norm_kind)},
	    {"omega", fmt(r.omega)},
	    {"kernel0_sup", fmt(r.kernel0_sup)},
	    {"kernel1_sup", fmt(r.kernel1_sup)},
	    {"kernel0_dx_sup", fmt(r.kernel0_dx_sup)},
	    {"kernel1_dx_sup", fmt(r.kernel1_dx_sup)},
	    {"norms0.c_sup", fmt(r.norms0.c_sup)},
	    {"norms0.n_inf", fmt(r.norms0.n_inf)},
	    {"norms0.n_2", fmt(r.norms0.n_2)},
	    {"norms0.n_1", fmt(r.norms0.n_1)},
	    {"norms1.c_sup", fmt(r.norms1.c_sup)},
	    {"norms1.n_inf", fmt(r.norms1.n_inf)},
	    {"norms1.n_2", fmt(r.norms1.n_2)},
	    {"norms1.n_1", fmt(r.norms1.n_1)},
	    {"rho", fmt(r.rho)},
	    {"rho0", fmt(r.rho0)},
	    {"D", fmt(r.D)},
	    {"D_declared", r.D_declared ? "1" : "0"},
	    {"b", fmt(r.b)},
	    {"b_check", r.b_check ? (*r.b_check ? "1" : "0") : ""},
	    {"discriminant", fmt(r.discriminant)},
	    {"g_minus", fmt(r.g_minus)},
	    {"g_plus", fmt(r.g_plus)},
	    {"omega_max", fmt(r.omega_max)},
	    {"epsilon_max", fmt(r.epsilon_max)},
	    {"radius_rho", fmt(r.radius_rho)},
	    {"radius_D", fmt(r.radius_D)},
	};

	std::ostringstream body;
	if (as_json) {
		body << "{\n";
		for (size_t i = 0; i < rows.size(); ++i) {
			const auto &[k, v] = rows[i];
			body << "  \"" << k << "\": ";
			if (v.empty())
				body << "null";
			else if (k == "norm_kind")
				body << '"' << v << '"';
			else
				body << v;
			body << (i + 1 < rows.size() ? ",\n" : "\n");
		}
		body << "}\n";
	} else {
		body << "key,value\n";
		for (const auto &[k, v] : rows)
			body << k << ',' << v << '\n';
	}
	write_out(body.str(), out);
	return 0;
}

int cmd_sweep(const std::string &problem, const std::string &omega_grid,
              const std::string &eps_grid, int order, double tol,
              std::optional<double> D, const std::string &out) {
	ProblemSpec p = load_problem_file(problem);
	GridSpec wg = parse_grid(omega_grid);
	GridSpec eg = parse_grid(eps_grid);

	RulePtr rule = p.make_rule();
	double n0 = kernel_norms(p.discretize0(rule)).matching(p.norm_kind);
	double n1 = kernel_norms(p.discretize1(rule)).matching(p.norm_kind);

	// admissibility threshold: quadratic root when the nonlinear growth
	// constant is declared, otherwise the resolvent (Neumann) threshold
	double omega_max = n0 > 0.0 ? 1.0 / n0 : std::numeric_limits<double>::infinity();
	if (D) {
		double c0 = kernel_norms(p.discretize0(rule)).c_sup;
		double c1 = kernel_norms(p.discretize1(rule)).c_sup;
		OmegaRoots roots = g_pm(c0, c1, *D);
		if (roots.g_minus)
			omega_max = *roots.g_minus;
	}

	std::ostringstream csv;
	csv << "omega,epsilon,rho,rho_eps,within_rho,omega_max,within_omega,"
	       "converged,sup_err\n";
	for (int i = 0; i < wg.count; ++i) {
		ProblemSpec q = p;
		q.omega = wg.at(i);
		std::optional<double> rho = rho_linear(q.omega, n0, n1);

		std::optional<SeriesSolution> s;
		try {
			SeriesSolution cand = series_terms(q, order);
			if (!cand.diagnostics.aborted_order)
				s = std::move(cand);
		} catch (const NumericalError &) {
		}

		for (int j = 0; j < eg.count; ++j) {
			double eps = eg.at(j);
			double err = std::nan("");
			if (s) {
				try {
					GridFunction sv = evaluate_series(*s, eps);
					GridFunction dv = direct_solve_at(q, eps, &sv);
					err = (sv.values - dv.values).lpNorm<Eigen::Infinity>();
				} catch (const NumericalError &) {
				}
			}
			bool within_rho = rho && *rho * eps < 1.0;
			bool converged = std::isfinite(err) && err <= tol;
			csv << fmt(q.omega) << ',' << fmt(eps) << ',' << fmt(rho) << ','
			    << (rho ? fmt(*rho * eps) : std::string()) << ','
			    << (within_rho ? 1 : 0) << ',' << fmt(omega_max) << ','
			    << (std::abs(q.omega) < omega_max ? 1 : 0) << ','
			    << (converged ? 1 : 0) << ',' << fmt(err) << '\n';
		}
	}
	write_out(csv.str(), out);
	return 0;
}

int cmd_continue(const std::string &problem, double target, double step,
                 int order, double tol, const std::string &out) {
	ProblemSpec p = load_problem_file(problem);
	ContinuationResult r = continue_to(p, target, step, order, tol);

	double final_err = std::nan("");
	try {
		GridFunction direct = direct_solve_at(p, r.max_epsilon, &r.solution);
		final_err = (r.solution.values - direct.values).lpNorm<Eigen::Infinity>();
	} catch (const NumericalError &) {
	}

	std::ostringstream csv;
	csv << "step,base_epsilon,empirical_radius,step_size,max_epsilon,final_error\n";
	for (size_t k = 0; k < r.partition.points.size(); ++k) {
		double radius = k < r.step_radii.size() ? r.step_radii[k] : std::nan("");
		double size = k + 1 < r.partition.points.size()
		                  ? r.partition.points[k + 1] - r.partition.points[k]
		                  : 0.0;
		csv << k << ',' << fmt(r.partition.points[k]) << ',' << fmt(radius) << ','
		    << fmt(size) << ',' << fmt(r.max_epsilon) << ',' << fmt(final_err)
		    << '\n';
	}
	write_out(csv.str(), out);

	if (!r.reached_target) {
		const SeriesSolution &last = r.step_series.back();
		if (last.diagnostics.aborted_order)
			std::cerr << last.diagnostics.abort_reason << '\n';
		else
			std::cerr << "radius collapse at eps = " << fmt(r.max_epsilon) << '\n';
		return 3;
	}
	return 0;
}

int cmd_variation(const std::string &fn, int grid, const std::string &out) {
	if (grid < 1)
		throw ConfigError("grid must be at least 1 segment");
	Expression f = Expression::parse(fn);
	for (Var v : {Var::Y, Var::Z, Var::Eps})
		if (f.uses(v))
			throw ConfigError(std::string("variation function must not use '") +
			                  var_name(v) + "'");

	Partition P;
	std::vector<double> values;
	for (int i = 0; i <= grid; ++i) {
		double x = static_cast<double>(i) / grid;
		P.points.push_back(x);
		values.push_back(f.evaluate(EvalPoint{.x = x}));
	}
	double V = variation(P, values);

	Expression df = f.derivative(Var::X);
	RulePtr quad = build_rule(RuleKind::Gauss, 128);
	double integral = quad->integrate(
	    [&](double x) { return std::abs(df.evaluate(EvalPoint{.x = x})); });

	std::ostringstream csv;
	csv << "n,variation,integral\n";
	csv << grid << ',' << fmt(V) << ',' << fmt(integral) << '\n';
	write_out(csv.str(), out);
	return 0;
}

} // namespace

int main(int argc, char **argv) {
	CLI::App app{"perturbation series for kernel- and nonlinearity-perturbed "
	             "Fredholm and Hammerstein equations"};
	app.require_subcommand(1);

	std::string problem, out, omega_grid, eps_grid, fn;
	double eps = 0.0, target = 0.0, step = 0.5, tol = 1e-8, ctol = 1e-9;
	int order = 20, grid = 16;
	std::optional<double> D, b;
	bool as_json = false;

	CLI::App *solve = app.add_subcommand("solve", "series and direct solution at one epsilon");
	solve->add_option("--problem", problem, "problem file")->required();
	solve->add_option("--epsilon", eps, "perturbation magnitude")->required();
	solve->add_option("--order", order, "series truncation order");
	solve->add_option("--out", out, "output CSV path (default stdout)");

	CLI::App *terms = app.add_subcommand("terms", "per-order coefficient norms");
	terms->add_option("--problem", problem, "problem file")->required();
	terms->add_option("--order", order, "series truncation order");
	terms->add_option("--out", out, "output CSV path (default stdout)");

	CLI::App *bounds = app.add_subcommand("bounds", "convergence and admissibility report");
	bounds->add_option("--problem", problem, "problem file")->required();
	bounds->add_option("--D", D, "declare the nonlinear growth constant");
	bounds->add_option("--b", b, "declare the z-derivative scale of psi");
	bounds->add_flag("--json", as_json, "emit JSON instead of CSV");
	bounds->add_option("--out", out, "output path (default stdout)");

	CLI::App *sweep = app.add_subcommand("sweep", "convergence atlas over omega x epsilon");
	sweep->add_option("--problem", problem, "problem file")->required();
	sweep->add_option("--omega", omega_grid, "omega grid start:stop:count")->required();
	sweep->add_option("--epsilon", eps_grid, "epsilon grid start:stop:count")->required();
	sweep->add_option("--order", order, "series truncation order");
	sweep->add_option("--tol", tol, "convergence tolerance");
	sweep->add_option("--D", D, "growth constant for the omega threshold");
	sweep->add_option("--out", out, "output CSV path (default stdout)");

	CLI::App *cont = app.add_subcommand("continue", "series continuation to a target epsilon");
	cont->add_option("--problem", problem, "problem file")->required();
	cont->add_option("--target", target, "target epsilon")->required();
	cont->add_option("--step", step, "fraction of the radius per step");
	cont->add_option("--order", order, "series truncation order");
	cont->add_option("--tol", ctol, "per-step deviation tolerance");
	cont->add_option("--out", out, "output CSV path (default stdout)");

	CLI::App *var = app.add_subcommand("variation", "variation functional of an expression");
	var->add_option("--fn", fn, "expression in x")->required();
	var->add_option("--grid", grid, "number of uniform segments");
	var->add_option("--out", out, "output CSV path (default stdout)");

	try {
		app.parse(argc, argv);
	} catch (const CLI::ParseError &e) {
		if (e.get_exit_code() == 0)
			return app.exit(e);
		std::cerr << e.what() << '\n';
		return 2;
	}

	try {
		if (solve->parsed())
			return cmd_solve(problem, eps, order, out);
		if (terms->parsed())
			return cmd_terms(problem, order, out);
		if (bounds->parsed())
			return cmd_bounds(problem, D, b, as_json, out);
		if (sweep->parsed())
			return cmd_sweep(problem, omega_grid, eps_grid, order, tol, D, out);
		if (cont->parsed())
			return cmd_continue(problem, target, step, order, ctol, out);
		if (var->parsed())
			return cmd_variation(fn, grid, out);
	} catch (const NumericalError &e) {
		std::cerr << "error: " << e.what() << '\n';
		return 3;
	} catch (const Error &e) {
		std::cerr << "error: " << e.what() << '\n';
		return 2;
	}
	return 2;
}
