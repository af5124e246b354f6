// SPDX-License-Identifier: Apache-2.0
#ifndef STRMOR_GENERATORS_HPP
#define STRMOR_GENERATORS_HPP

#include <vector>

#include "strmor/structured_system.hpp"

namespace strmor {

/// Heated rod on the unit domain with homogeneous Dirichlet boundaries,
/// distributed control over m contiguous sections, sectionwise average
/// temperature outputs over p sections, and delayed feedback cooling:
///   E = I, A0 = (n+1)^2 tridiag(1, -2, 1), Ad = -gain I, delay tau.
StructuredSystem generate_heated_rod(Index n, double tau, double gain, Index m, Index p);

/// Input/output placement for the mass-spring-damper chain: unit force
/// inputs and position outputs at the listed zero-based masses.
struct IOSpec
{
  std::vector<Index> inputs;
  std::vector<Index> outputs;
};

/// Chain of k masses with nearest-neighbor springs fixed at both ends:
/// M = mass I, K = stiffness tridiag(-1, 2, -1), and stiffness-proportional
/// Rayleigh damping calibrated to damping_ratio at the first mode.
StructuredSystem generate_msd_chain(Index k_masses, double mass, double stiffness,
                                    double damping_ratio, const IOSpec& io_spec);

}  // namespace strmor

#endif  // STRMOR_GENERATORS_HPP
