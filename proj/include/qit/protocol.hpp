#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qit/states.hpp"

namespace qit {

/// Joint measurement outcome (m, n), each 0 or 1, indexing the Bell vector
/// |b_mn> = (|0, n> + (-1)^m |1, 1-n>) / sqrt(2).
struct BellOutcome {
    int m = 0;
    int n = 0;

    static BellOutcome from_index(int idx);  // idx = 2m + n
    int index() const { return 2 * m + n; }
};

/// Amplitudes of |b_mn> in the computational basis |00>, |01>, |10>, |11>.
std::array<cdouble, 4> bell_ket(const BellOutcome& o);

DensityState bell_state(const BellOutcome& o);

/// Outcome-dependent signs eps_j = (-1)^{phi_j} tau_j with tau = (+1, -1, +1)
/// and phi = (m, m + n, n): the eigenvalue of sigma_j (x) sigma_j on |b_mn>
/// carries tau_j, and the projection flips it per outcome.
Vector3 bell_signs(const BellOutcome& o);

struct CollapseResult {
    BellOutcome outcome;
    double probability = 0.0;
    Vector3 s{};          // Bloch vector of the conditional remote state
    DensityState rho_b;   // that state itself
};

/// Projects sender qubit + channel qubit A onto |b_mn> and normalizes what is
/// left on B. Direct 8x8 computation, no closed forms. Throws
/// UndefinedCollapseError when the outcome probability is <= tol::rank.
CollapseResult collapse(const DensityState& rho_c, const DensityState& rho_ab,
                        const BellOutcome& o);

/// Closed form for the conditional Bloch vector:
///   s_k = (r_0k + sum_j eps_j r_jk c_j) / (1 + sum_j eps_j r_j0 c_j).
/// Agrees with collapse() to numerical precision. Throws
/// UndefinedCollapseError when the denominator is <= tol::rank in magnitude.
Vector3 s_vector_analytic(const CorrelationMatrix& r, const PauliVector& c,
                          const BellOutcome& o);

/// The 3x3 system the receiver inverts: T[k][j] = eps_j (r_jk - r_j0 s_k),
/// so that T c = s - (r_01, r_02, r_03).
Matrix3 coefficient_matrix(const CorrelationMatrix& r, const Vector3& s,
                           const BellOutcome& o);

/// Rank of the correlation matrix and the geometry it induces: the set of
/// reachable conditional Bloch vectors spans an affine subspace of dimension
/// rank - 1 (point, line, plane, full ball interior).
struct RankClassification {
    int rank = 0;
    int affine_dim = 0;
    std::array<double, 4> singular_values{};
    PseudoMixture basis;
};

RankClassification rank_classify(const CorrelationMatrix& r);

struct Reconstruction {
    PauliVector c;
    double cond = 0.0;                 // sigma_max / sigma_min of T
    double noise_amplification = 0.0;  // 1 / sigma_min of T: growth factor of s-errors
};

/// Thrown when the coefficient matrix is singular: reconstruction is
/// underdetermined. Carries the channel-rank diagnosis, the minimum-norm
/// least-squares solution, and (when the true input is known to be pure and
/// the solution family meets the unit sphere) the candidate pure inputs.
class RankDeficientError : public Error {
  public:
    RankDeficientError(RankClassification classification, Vector3 min_norm,
                       std::vector<Vector3> unit_norm_candidates);

    const RankClassification& classification() const { return classification_; }
    const Vector3& min_norm_solution() const { return min_norm_; }
    const std::vector<Vector3>& unit_norm_candidates() const { return candidates_; }

  private:
    RankClassification classification_;
    Vector3 min_norm_{};
    std::vector<Vector3> candidates_;
};

/// Inverts the coefficient system to recover the sender's Bloch vector from
/// the observed s. Throws RankDeficientError when T is singular.
Reconstruction reconstruct(const CorrelationMatrix& r, const Vector3& s,
                           const BellOutcome& o);

enum class OutcomeStatus { ok, zero_probability, rank_deficient };

struct OutcomeRecord {
    BellOutcome outcome;
    OutcomeStatus status = OutcomeStatus::ok;
    double probability = 0.0;
    std::optional<CollapseResult> collapse;
    std::optional<Reconstruction> reconstruction;

    // Filled on the rank-deficient path instead of `reconstruction`.
    std::optional<Vector3> min_norm_solution;
    std::vector<Vector3> unit_norm_candidates;

    // det T and the relative residual of  (4 p) det T + det R = 0;
    // defined whenever the collapse is.
    std::optional<double> det_t;
    std::optional<double> det_identity_residual;
};

struct TransmissionRecord {
    std::array<OutcomeRecord, 4> outcomes;  // indexed by 2m + n
    double det_r = 0.0;
    int rank = 0;
    double probability_sum = 0.0;
};

/// Runs all four outcomes of the protocol: collapse, reconstruction, and the
/// determinant identity check. Degrades per outcome instead of throwing:
/// statuses record zero-probability outcomes and rank-deficient channels.
TransmissionRecord transmit(const DensityState& rho_c, const DensityState& rho_ab);

}  // namespace qit
