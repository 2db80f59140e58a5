#pragma once

#include <array>

#include "qit/states.hpp"

namespace qit {

/// Von Neumann entropy in bits; 0 log 0 reads as 0.
double entropy(const DensityState& rho);

/// S(A) + S(B) - S(AB) for a two-qubit state.
double mutual_information(const DensityState& rho_ab);

struct ConcurrenceResult {
    double concurrence = 0.0;
    std::array<double, 4> spin_flip_eigs{};  // sqrt-eigenvalues, descending
};

/// Two-qubit concurrence via the spin-flipped product
/// sqrt(rho) (sy (x) sy) rho* (sy (x) sy) sqrt(rho), which keeps every
/// intermediate Hermitian.
ConcurrenceResult concurrence(const DensityState& rho_ab);

enum class MeasuredSide { A, B };

struct DiscordResult {
    double discord = 0.0;
    double classical_correlation = 0.0;
    double mutual_information = 0.0;
    double theta = 0.0;  // optimal measurement direction, polar angle
    double phi = 0.0;    // and azimuth
    int optimizer_evals = 0;
};

/// Quantum discord with a projective measurement on the chosen side
/// (default A). The conditional entropy is minimized over measurement
/// directions by a 64x32 grid scan refined with Nelder-Mead (at most 200
/// further evaluations); accurate to tol::opt bits. Tiny negative results
/// from that tolerance are clamped to zero.
DiscordResult discord(const DensityState& rho_ab, MeasuredSide side = MeasuredSide::A);

}  // namespace qit
