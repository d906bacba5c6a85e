#include "fredpert/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fredpert/errors.hpp"

namespace fredpert {

namespace {

using nlohmann::json;

Expression parse_field(const json &doc, const char *key, const char *fallback,
                       std::initializer_list<Var> allowed) {
	std::string text = fallback;
	if (doc.contains(key)) {
		if (!doc[key].is_string())
			throw ConfigError(std::string(key) + " must be an expression string");
		text = doc[key].get<std::string>();
	}
	Expression e = Expression::parse(text);
	for (Var v : {Var::X, Var::Y, Var::Z, Var::Eps}) {
		bool ok = false;
		for (Var a : allowed)
			ok = ok || a == v;
		if (!ok && e.uses(v))
			throw ConfigError(std::string(key) + " must not use variable '" +
			                  var_name(v) + "'");
	}
	return e;
}

double number_field(const json &doc, const char *key, double fallback) {
	if (!doc.contains(key))
		return fallback;
	if (!doc[key].is_number())
		throw ConfigError(std::string(key) + " must be a number");
	return doc[key].get<double>();
}

} // namespace

ProblemSpec parse_problem_text(const std::string &text) {
	json doc;
	try {
		doc = json::parse(text);
	} catch (const json::exception &e) {
		throw ConfigError(std::string("problem file is not valid JSON: ") + e.what());
	}
	if (!doc.is_object())
		throw ConfigError("problem file must hold a single JSON object");

	static const char *known[] = {"kernel0", "kernel1", "forcing",    "psi0",
	                              "psi1",    "omega",   "norm",       "rule",
	                              "nodes",   "base_scale", "clamp"};
	for (auto it = doc.begin(); it != doc.end(); ++it) {
		bool ok = false;
		for (const char *k : known)
			ok = ok || it.key() == k;
		if (!ok)
			throw ConfigError("unknown problem file key '" + it.key() + "'");
	}
	if (!doc.contains("kernel0"))
		throw ConfigError("problem file must declare kernel0");

	ProblemSpec p;
	p.kernel0 = parse_field(doc, "kernel0", "0", {Var::X, Var::Y});
	p.kernel1 = parse_field(doc, "kernel1", "0", {Var::X, Var::Y});
	p.forcing = parse_field(doc, "forcing", "0", {Var::X});
	p.psi0 = parse_field(doc, "psi0", "z", {Var::Y, Var::Z});
	p.psi1 = parse_field(doc, "psi1", "0", {Var::Y, Var::Z});

	p.omega = number_field(doc, "omega", 1.0);
	if (!std::isfinite(p.omega))
		throw ConfigError("omega must be finite");

	if (doc.contains("norm")) {
		if (!doc["norm"].is_string())
			throw ConfigError("norm must be \"sup\", \"l2\" or \"l1\"");
		p.norm_kind = norm_kind_from_name(doc["norm"].get<std::string>());
	}
	if (doc.contains("rule")) {
		if (!doc["rule"].is_string())
			throw ConfigError("rule must be \"gauss\" or \"trapezoid\"");
		p.rule_kind = rule_kind_from_name(doc["rule"].get<std::string>());
	}

	if (doc.contains("nodes")) {
		if (!doc["nodes"].is_number_integer())
			throw ConfigError("nodes must be an integer");
		long long n = doc["nodes"].get<long long>();
		if (n < 2 || n > 100000)
			throw ConfigError("nodes must lie in [2, 100000]");
		p.nodes = static_cast<int>(n);
	}

	p.base_scale = number_field(doc, "base_scale", 1.0);
	if (!std::isfinite(p.base_scale))
		throw ConfigError("base_scale must be finite");

	if (doc.contains("clamp")) {
		double c = number_field(doc, "clamp", 0.0);
		if (!(c > 0.0) || !std::isfinite(c))
			throw ConfigError("clamp must be a positive number");
		p.clamp = c;
	}
	return p;
}

ProblemSpec load_problem_file(const std::string &path) {
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw ConfigError("cannot open problem file '" + path + "'");
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_problem_text(buf.str());
}

} // namespace fredpert
