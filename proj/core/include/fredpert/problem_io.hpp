#ifndef FREDPERT_PROBLEM_IO_HPP
#define FREDPERT_PROBLEM_IO_HPP

#include <string>

#include "fredpert/problem.hpp"

namespace fredpert {

/*
 * Problem files are single flat JSON documents:
 *
 *   {
 *     "kernel0": "x*y",        required; variables x, y
 *     "kernel1": "x",          default "0"; variables x, y
 *     "forcing": "x",          default "0"; variable x
 *     "psi0": "z",             default "z"; variables y, z
 *     "psi1": "0",             default "0"; variables y, z
 *     "omega": 0.5,            default 1; finite
 *     "norm": "sup",           sup | l2 | l1
 *     "rule": "gauss",         gauss | trapezoid
 *     "nodes": 32,             >= 2
 *     "base_scale": 1.0,
 *     "clamp": 1e6             optional; positive
 *   }
 *
 * Unknown keys are rejected so typos fail loudly.  All violations throw
 * ConfigError with the offending key or parse position in the message.
 */
ProblemSpec parse_problem_text(const std::string &text);

ProblemSpec load_problem_file(const std::string &path);

} // namespace fredpert

#endif
