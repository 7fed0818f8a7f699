#pragma once

#include "cachenet/brute_force.hpp"
#include "cachenet/instance.hpp"

namespace cachenet {

// The three constraint families of the joint placement/routing program over
// z = (x, p): routing sums <= 1, cache capacities, and the coupling rows
// p_ijm - x_jm <= 0 for connected pairs. Entries are in {-1, 0, 1}.
struct ConstraintMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int8_t> a;  // row-major
  std::vector<int> b;

  int at(int r, int c) const { return a[size_t(r) * cols + c]; }
};

ConstraintMatrix build_constraint_matrix(const ProblemInstance& inst);

struct TuResult {
  bool totally_unimodular = false;
  std::vector<int> witness_rows;  // a row subset with no valid +-1 signing
};

// Ghouila-Houri test: the matrix is totally unimodular iff every row subset
// admits a +-1 signing whose signed column sums stay in {-1, 0, 1}. Exact
// exponential search; throws above 22 rows.
TuResult tu_check(const ConstraintMatrix& matrix, bool parallel = true);

// A chordless-or-not simple cycle in the bipartite user-cache graph,
// alternating users[0], caches[0], users[1], caches[1], ...
struct BadCycle {
  std::vector<int> users;
  std::vector<int> caches;
};

// Simple cycles of edge length 4k+2 (k >= 1) in the user-cache adjacency
// graph: the cycles with an odd number of users and caches. Throws when the
// enumeration exceeds `max_cycles` simple cycles of any length.
std::vector<BadCycle> find_bad_cycles(const ProblemInstance& inst,
                                      long long max_cycles = 100000);

// LP relaxation of the congestion-insensitive program (0 <= x <= 1); returns
// the optimal average delay.
double lp_relaxation_value(const ProblemInstance& inst);

struct RelaxationGap {
  double ilp_value = 0.0;
  double lp_value = 0.0;
  double gap = 0.0;
};

// Compares the exhaustive binary optimum with the LP relaxation.
RelaxationGap relaxation_gap(const ProblemInstance& inst, const BruteForceOptions& opts = {});

// Two-cache polynomial optimum: solves the LP relaxation, asserts the
// placement variables come out integral (throws std::runtime_error loudly if
// not, since that would contradict total unimodularity), rounds, and
// re-derives the routing. Requires the congestion-insensitive model and
// exactly two caches.
SolveResult solve_two_cache_lp(const ProblemInstance& inst);

}  // namespace cachenet
