#include "fredpert/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "fredpert/errors.hpp"
#include "fredpert/oracle.hpp"

namespace fredpert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double median(std::vector<double> v) {
	std::sort(v.begin(), v.end());
	size_t n = v.size();
	return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Invert scale t^(N+1)/(1-t) = tol for t in (0,1); the left side is
// increasing, so plain bisection suffices.
double tail_model_t(double scale, int N, double tol) {
	auto g = [&](double t) {
		return scale * std::pow(t, N + 1) / (1.0 - t) - tol;
	};
	double lo = 0.0, hi = 1.0 - 1e-16;
	if (g(hi) <= 0.0)
		return hi;
	for (int i = 0; i < 200; ++i) {
		double mid = 0.5 * (lo + hi);
		(g(mid) <= 0.0 ? lo : hi) = mid;
	}
	return 0.5 * (lo + hi);
}

enum class Probe { Ok, Exceeded, SolverFailed };

} // namespace

EmpiricalRadius empirical_radius(const ProblemSpec &p, const SeriesSolution &s,
                                 double tol) {
	if (s.computed_order() < 10)
		throw ConfigError("empirical_radius needs a series of order >= 10");
	if (!(tol > 0.0))
		throw ConfigError("empirical_radius tolerance must be positive");

	int order = s.computed_order();
	std::vector<double> n(order + 1);
	for (int j = 0; j <= order; ++j)
		n[j] = s.coefficients[j].norm_sup();
	double tiny = 1e-13 * std::max(1.0, n[0]);

	bool perturbed = false;
	for (int j = 1; j <= order; ++j)
		perturbed = perturbed || n[j] > tiny;
	if (!perturbed)
		return {kInf, true, false, kInf, kInf};

	// ratio estimate from up to the last five consecutive nonzero pairs;
	// the growth-rate fallback covers sparse coefficient patterns
	std::vector<double> ratios;
	for (int j = 1; j <= order; ++j)
		if (n[j - 1] > tiny && n[j] > tiny)
			ratios.push_back(n[j] / n[j - 1]);
	double ratio_estimate;
	if (!ratios.empty()) {
		if (ratios.size() > 5)
			ratios.erase(ratios.begin(), ratios.end() - 5);
		double q = median(std::move(ratios));
		ratio_estimate = q > 0.0 ? 1.0 / q : kInf;
	} else {
		double growth = 0.0;
		for (int j = 1; j <= order; ++j)
			if (n[j] > tiny)
				growth = std::max(growth, std::pow(n[j], 1.0 / j));
		ratio_estimate = growth > 0.0 ? 1.0 / growth : kInf;
	}

	// deviation probe: series prediction seeds the direct solve so a
	// nonlinear probe converges on the series' own branch
	bool saw_exceed = false;
	auto probe = [&](double d) {
		GridFunction predicted = evaluate_series(s, s.base_epsilon + d);
		try {
			GridFunction direct = direct_solve_at(p, d, &predicted);
			double err = (predicted.values - direct.values)
			                 .lpNorm<Eigen::Infinity>();
			if (!(err <= tol)) {
				saw_exceed = true;
				return Probe::Exceeded;
			}
			return Probe::Ok;
		} catch (const NumericalError &) {
			return Probe::SolverFailed;
		}
	};

	double cap = std::isfinite(ratio_estimate) ? 4.0 * ratio_estimate : 1e6;
	double lo = 0.0, hi = 0.0;
	bool cap_clean = false;
	double d = std::isfinite(ratio_estimate) ? ratio_estimate / 8.0 : 1.0;
	for (int i = 0; i < 80; ++i) {
		if (probe(d) == Probe::Ok) {
			lo = d;
			d *= 2.0;
			if (d > cap) {
				cap_clean = true;
				break;
			}
		} else {
			hi = d;
			break;
		}
	}
	if (!cap_clean && hi == 0.0)
		cap_clean = true; // expansion budget exhausted while still ok

	if (!cap_clean && lo == 0.0) {
		// first probe already deviated
		d = hi / 2.0;
		for (int i = 0; i < 60 && d > 1e-14; ++i, d /= 2.0)
			if (probe(d) == Probe::Ok) {
				lo = d;
				break;
			}
	}
	if (!cap_clean && lo > 0.0)
		for (int i = 0; i < 40; ++i) {
			double mid = 0.5 * (lo + hi);
			(probe(mid) == Probe::Ok ? lo : hi) = mid;
		}

	EmpiricalRadius r;
	r.unbounded = false;
	r.ratio_estimate = ratio_estimate;
	r.deviation_point = lo;
	r.lower_bound_only = cap_clean || !saw_exceed;

	double scale = *std::max_element(n.begin(), n.end());
	double t = tail_model_t(scale, order, tol);
	double model = r.deviation_point / t;
	r.value = std::min(ratio_estimate, model);
	return r;
}

namespace {

ProblemSpec repose(const ProblemSpec &p, double base) {
	ProblemSpec local = p;
	if (base != 0.0) {
		Expression shift = Expression::number(base);
		local.kernel0 = p.kernel0 + shift * p.kernel1;
		local.psi0 = p.psi0 + shift * p.psi1;
	}
	return local;
}

} // namespace

ContinuationResult continue_to(const ProblemSpec &p, double eps_target,
                               double step_fraction, int N, double tol) {
	if (!(eps_target >= 0.0))
		throw ConfigError("continuation target must be nonnegative");
	if (!(step_fraction > 0.0) || step_fraction > 1.0)
		throw ConfigError("continuation step fraction must lie in (0, 1]");
	if (N < 10)
		throw ConfigError("continuation needs series order >= 10");
	if (!(tol > 0.0))
		throw ConfigError("continuation tolerance must be positive");

	ContinuationResult out;
	out.partition.points.push_back(0.0);

	double base = 0.0;
	GridFunction carried;
	bool have_carried = false;

	for (int step = 0; step < 200; ++step) {
		ProblemSpec local = repose(p, base);
		SeriesSolution s =
		    series_terms(local, N, base, have_carried ? &carried : nullptr);
		bool aborted = s.diagnostics.aborted_order.has_value();
		out.step_series.push_back(std::move(s));
		const SeriesSolution &sk = out.step_series.back();
		if (aborted) {
			out.solution = evaluate_series(sk, base);
			out.reached_target = false;
			out.max_epsilon = base;
			return out;
		}

		EmpiricalRadius rad = empirical_radius(local, sk, tol);
		out.step_radii.push_back(rad.value);

		double remaining = eps_target - base;
		if (remaining <= 1e-15 * std::max(1.0, eps_target)) {
			out.solution = evaluate_series(sk, base);
			out.reached_target = true;
			out.max_epsilon = base;
			return out;
		}

		double delta = std::min(step_fraction * rad.value, remaining);
		if (delta < 1e-6) {
			out.solution = evaluate_series(sk, base);
			out.reached_target = false;
			out.max_epsilon = base;
			return out;
		}

		double next = base + delta;
		carried = evaluate_series(sk, next);
		have_carried = true;
		out.partition.points.push_back(next);
		base = next;
	}

	out.solution = evaluate_series(out.step_series.back(), base);
	out.reached_target = false;
	out.max_epsilon = base;
	return out;
}

namespace {

void check_partition(const Partition &P, const std::vector<double> &values,
                     size_t segment_flags) {
	if (P.points.empty())
		throw ConfigError("partition must hold at least one point");
	if (values.size() != P.points.size())
		throw ConfigError("one value per partition point required");
	for (size_t i = 0; i < P.points.size(); ++i) {
		if (!std::isfinite(P.points[i]) || !std::isfinite(values[i]))
			throw ConfigError("partition points and values must be finite");
		if (i > 0 && !(P.points[i - 1] < P.points[i]))
			throw ConfigError("partition points must be strictly increasing");
	}
	if (segment_flags != 0 && segment_flags != P.points.size() - 1)
		throw ConfigError("segment flags must cover every segment or none");
}

} // namespace

double variation(const Partition &P, const std::vector<double> &values,
                 const std::vector<SegmentShape> &segments) {
	check_partition(P, values, segments.size());
	double v = 0.0;
	for (size_t i = 1; i < values.size(); ++i)
		v += std::abs(values[i] - values[i - 1]);
	return v;
}

double variation_difference_quotient(const Partition &P,
                                     const std::vector<double> &values) {
	check_partition(P, values, 0);
	double v = 0.0;
	for (size_t i = 1; i < values.size(); ++i)
		v += std::abs((values[i] - values[i - 1]) /
		              (P.points[i] - P.points[i - 1]));
	return v;
}

PartitionOrder partition_compare(const Partition &P, const std::vector<double> &values_p,
                                 const Partition &Q, const std::vector<double> &values_q) {
	check_partition(P, values_p, 0);
	check_partition(Q, values_q, 0);
	double sp = P.span(), sq = Q.span();
	if (sp < sq)
		return PartitionOrder::Precedes;
	if (sp > sq)
		return PartitionOrder::Follows;
	double vp = variation(P, values_p), vq = variation(Q, values_q);
	if (vp > vq)
		return PartitionOrder::Precedes;
	if (vp < vq)
		return PartitionOrder::Follows;
	return PartitionOrder::Equal;
}

} // namespace fredpert
