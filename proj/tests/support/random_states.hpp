#pragma once

#include <array>

#include "qit/rng.hpp"
#include "qit/states.hpp"

namespace qit::testsupport {

/// Uniform direction, radius biased to fill the ball, norm <= max_norm.
Vector3 random_bloch(SplitMix64& g, double max_norm = 0.9);

/// Normalized Gaussian 4-vector: Haar-distributed pure two-qubit state.
std::array<cdouble, 4> random_pure2(SplitMix64& g);

/// Convex mixture of `terms` random pure states; generically full rank
/// for terms >= 4.
DensityState random_channel(SplitMix64& g, int terms = 4);

/// Resamples random_channel until the correlation matrix has rank 4.
DensityState random_full_rank_channel(SplitMix64& g);

/// Mixed single-qubit state strictly inside the Bloch ball.
DensityState random_input(SplitMix64& g);

/// rho_a (x) rho_b with random mixed factors.
DensityState random_product_channel(SplitMix64& g);

/// Haar-ish random 2x2 unitary (Gaussian matrix, Gram-Schmidt columns).
ComplexMatrix random_unitary2(SplitMix64& g);

}  // namespace qit::testsupport
