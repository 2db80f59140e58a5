#pragma once

#include <array>
#include <cstdint>

#include "qit/protocol.hpp"
#include "qit/rng.hpp"

namespace qit {

/// Outcome counts of repeated sigma_axis measurements on one qubit.
/// Deterministic in (state, axis, shots, seed): the generator is SplitMix64
/// seeded with derive_stream(seed, axis).
struct ShotRecord {
    int axis = 0;  // 1..3
    std::uint64_t shots = 0;
    std::uint64_t plus_counts = 0;
    std::uint64_t seed = 0;  // caller's seed, before stream derivation
};

ShotRecord sample_pauli(const DensityState& rho, int axis, std::uint64_t shots,
                        std::uint64_t seed);

struct BlochEstimate {
    Vector3 s_hat{};     // 2 p_hat - 1, clipped to [-1, 1]
    Vector3 s_stderr{};  // 2 sqrt(p_hat (1 - p_hat) / shots)
};

/// Combines one record per axis (any order) into a Bloch estimate.
BlochEstimate estimate_bloch(const std::array<ShotRecord, 3>& records);

struct TomographyEstimate {
    std::array<ShotRecord, 3> records;  // axes 1, 2, 3
    Vector3 s_hat{};
    Vector3 s_stderr{};
    Vector3 c_hat{};   // reconstructed sender vector; unclipped, may leave the ball
    Matrix3 c_cov{};   // T^-1 diag(stderr^2) T^-T, symmetric PSD
    double probability = 0.0;  // of the conditioning outcome
    double cond = 0.0;         // of the estimated coefficient matrix
};

/// Simulates the receiving end: collapse onto the given outcome, finite-shot
/// Pauli sampling of the conditional state (shots split evenly across the
/// three axes, remainder to the lower axes), then inversion of the estimated
/// coefficient system with error propagation. Requires a full-rank channel
/// and outcome probability > tol::rank.
TomographyEstimate remote_tomography(const DensityState& rho_c, const DensityState& rho_ab,
                                     const BellOutcome& outcome, std::uint64_t shots,
                                     std::uint64_t seed);

}  // namespace qit
