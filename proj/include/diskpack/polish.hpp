#pragma once

// Newton refinement of a jammed packing onto its contact equations:
//   |c_i - c_j| = m   for every disk-disk bond,
//   x = 0, x = 1, y = 0, y = 1   for every wall bond,
// with solid-disk coordinates and m as unknowns and rattlers frozen.

#include <vector>

#include "diskpack/analysis.hpp"
#include "diskpack/core.hpp"

namespace diskpack {

struct PolishOptions {
  double residual_tol_rel = 1e-14;  // max |residual| / m at convergence
  int max_iterations = 40;
  double max_m_change = 1e-9;
  bool recenter_rattlers = true;
};

struct PolishReport {
  int iterations = 0;
  std::vector<double> residual_history;  // max |residual| / m before each step
  double m_before = 0.0;
  double m_after = 0.0;
  int unknowns = 0;
  int equations = 0;
  int rank = 0;
};

/// Throws SingularSystem when m is not pinned by the bonds and
/// ContactMismatch when the bonds cannot all hold at once, when m moves more
/// than max_m_change, or when a non-bonded pair ends up overlapping.
Packing polish(const Packing& p, const ContactGraph& contacts, const PolishOptions& options = {},
               PolishReport* report = nullptr);

struct RefineResult {
  Packing packing;
  ContactGraph contacts;  // recomputed at the standard 1e-12 m bond tolerance
  double detection_tol = 0.0;
  PolishReport report;
};

/// Detects the contacts of a nearly jammed simulation output with a looser
/// tolerance ladder (1e-10 m ... 1e-5 m) and polishes it; the first rung that
/// polishes cleanly and yields a well-formed gap with the largest m wins.
RefineResult refine_jammed(const Packing& p, const PolishOptions& options = {});

/// Moves rattlers to the middle of their cages without touching solid disks.
void recenter_rattlers(Packing& p, const std::vector<DiskRole>& roles);

}  // namespace diskpack
