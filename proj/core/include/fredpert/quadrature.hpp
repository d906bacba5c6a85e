#ifndef FREDPERT_QUADRATURE_HPP
#define FREDPERT_QUADRATURE_HPP

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>

namespace fredpert {

enum class RuleKind { Gauss, Trapezoid };

/*
 * Quadrature rule on [0,1]:
 *
 *    / 1
 *    |   g( y ) dy  ~=  Sum_j w_j g( y_j )
 *    / 0
 *
 * Gauss rules are Gauss-Legendre nodes mapped from [-1,1]; trapezoid rules
 * use the n equispaced nodes 0, 1/(n-1), ..., 1 (n >= 2).  Weights of every
 * rule sum to 1 up to rounding.  Rules are immutable once built and shared
 * by const pointer between grid objects living on the same node set.
 */
class QuadratureRule {
  public:
	QuadratureRule(RuleKind kind, Eigen::VectorXd nodes, Eigen::VectorXd weights)
	    : kind_(kind), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

	RuleKind kind() const { return kind_; }
	Eigen::Index size() const { return nodes_.size(); }
	const Eigen::VectorXd &nodes() const { return nodes_; }
	const Eigen::VectorXd &weights() const { return weights_; }

	double integrate(const std::function<double(double)> &g) const;
	double integrate(const Eigen::VectorXd &values_at_nodes) const;

  private:
	RuleKind kind_;
	Eigen::VectorXd nodes_;
	Eigen::VectorXd weights_;
};

using RulePtr = std::shared_ptr<const QuadratureRule>;

// Throws ConfigError for n < 1 (Gauss) or n < 2 (trapezoid).
RulePtr build_rule(RuleKind kind, int n);

RuleKind rule_kind_from_name(const std::string &name); // "gauss" | "trapezoid"

} // namespace fredpert

#endif
