#pragma once

#include <vector>

namespace cachenet {

// minimize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
// Dense tableau with a slack starting basis (valid because b >= 0) and
// Bland's anti-cycling rule. Sized for the desk-scale programs in this
// project (hundreds of rows/columns).
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;            // num_vars
  std::vector<std::vector<double>> rows;    // each num_vars wide
  std::vector<double> rhs;                  // one per row, non-negative
};

struct SimplexResult {
  bool optimal = false;   // false only if the iteration guard tripped
  double objective = 0.0;
  std::vector<double> x;  // a vertex of the feasible polyhedron
};

SimplexResult solve_simplex(const LinearProgram& lp);

}  // namespace cachenet
