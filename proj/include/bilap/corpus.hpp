#pragma once
#include <vector>

#include "bilap/solutions.hpp"

namespace bilap {

struct CorpusMember {
  std::string id;
  ScalarField u;
  ScalarField w;
  double m_bound = 0;   // recorded ||W||_inf (0 for biharmonic members)
  bool analytic = true;
  SolveReport solve;    // meaningful for bvp members
};

/// The frozen 16-member verification corpus: 8 analytic families plus 8 boundary-value
/// solves on [-1,1]^2 whose boundary data comes from a seeded generator.  Deterministic for
/// a fixed (seed, resolutions) pair; resolutions are scaled together for refinement studies.
struct CorpusConfig {
  int analytic_resolution = 257;
  int bvp_resolution = 129;
  uint64_t seed = 20240817;
};

std::vector<CorpusMember> standard_corpus(const CorpusConfig& cfg = {});

}  // namespace bilap
