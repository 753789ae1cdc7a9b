#pragma once

#include "effdom/kernel.hpp"

// Standard kernel families used by the demos and the test suites.
namespace effdom::families {

StationaryDistribution uniform(std::size_t n);

/// Two states, uniform target, switch with probability p.
TransitionKernel two_state_flip(double p);

/// Lazy nearest-neighbour walk on an n-cycle: beta*I + (1-beta)*(left+right)/2.
TransitionKernel cycle_walk(std::size_t n, double beta);

/// Peaked target on n states: pi_x proportional to exp(-|x - c| / width),
/// c the midpoint.
StationaryDistribution peaked_target(std::size_t n, double width = 1.5);

/// Nearest-neighbour proposal on a path; the missing neighbour at each end
/// becomes a self-proposal.
TransitionKernel local_proposal(std::size_t n);

/// Uniform proposal over all states.
TransitionKernel uniform_proposal(std::size_t n);

}  // namespace effdom::families
