#pragma once

// Closed-form solutions u = a(t) prod_i cos(pi xhat_i), xhat_i = (x_i - low_i)/L_i,
// with the source chosen so the equation holds exactly:
//
//   cos_decay        a = exp(-t),                 h = u_t  - Phi(u)
//   cos_oscillation  a = cos(t) + sin(t)/2,       h = u_tt - Phi(u)
//
// Both satisfy the zero-flux condition on every box face.

#include <string>
#include <vector>

#include "plap/problem.hpp"

namespace plap {

struct Manufactured {
  std::string name;
  Source::Fn u;    // exact solution
  Source::Fn u_t;  // its time derivative
  Source h;
};

Manufactured manufactured(const std::string& name, double p, const GridPtr& grid);
std::vector<std::string> manufactured_names();

/// Sets u0, u1 and h of `spec` from the named solution (grid and p taken from spec).
void apply_manufactured(ProblemSpec& spec, const std::string& name);

}  // namespace plap
