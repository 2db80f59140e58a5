#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qit/linalg.hpp"

namespace qit {

/// The 2x2 Pauli matrix sigma_i; index 0 is the identity.
const ComplexMatrix& pauli(std::size_t i);

/// Bloch expansion of a single-qubit state: rho = (1/2) sum_i c_i sigma_i,
/// with c_0 fixed to 1 and (c_1, c_2, c_3) inside the closed unit ball.
class PauliVector {
  public:
    /// Throws UnphysicalStateError when the vector leaves the unit ball by
    /// more than tol::hermitian.
    PauliVector(double c1, double c2, double c3);

    /// c(0) == 1 always.
    double c(std::size_t i) const { return c_[i]; }

    Vector3 bloch() const { return {c_[1], c_[2], c_[3]}; }
    double bloch_norm() const;

  private:
    std::array<double, 4> c_;
};

/// Validated density matrix of one or two qubits. Construction enforces
/// Hermiticity (tol::hermitian), unit trace (tol::hermitian) and positivity
/// (eigenvalues >= -tol::psd).
class DensityState {
  public:
    DensityState(ComplexMatrix rho, int qubits);

    const ComplexMatrix& matrix() const { return rho_; }
    int qubits() const { return qubits_; }

    double purity() const;

    /// Smallest eigenvalue, cached from the construction-time check.
    double min_eigenvalue() const { return min_eig_; }

  private:
    ComplexMatrix rho_;
    int qubits_;
    double min_eig_;
};

/// Two-qubit correlation matrix r_ij = Tr(rho sigma_i (x) sigma_j), i,j in
/// 0..3. Construction requires r_00 = 1 (within tol::hermitian, then stored
/// exactly), all entries in [-1, 1] (tol::hermitian slack) and the rebuilt
/// density matrix to be positive semidefinite.
class CorrelationMatrix {
  public:
    explicit CorrelationMatrix(const RealMatrix4& r);

    double at(std::size_t i, std::size_t j) const { return r_.at(i, j); }
    const RealMatrix4& matrix() const { return r_; }

  private:
    RealMatrix4 r_;
};

DensityState qubit_from_bloch(double c1, double c2, double c3);

/// Bloch coefficients of a single-qubit state.
PauliVector bloch_from_state(const DensityState& rho);

/// rho = (1/4) sum_ij r_ij sigma_i (x) sigma_j.
DensityState channel_from_correlation(const CorrelationMatrix& r);

CorrelationMatrix correlation_from_channel(const DensityState& rho);

/// x |b00><b00| + (1 - x) I/4 for x in [0, 1], where |b00> is the Bell state
/// (|00> + |11>)/sqrt(2). Correlation matrix diag(1, x, -x, x).
DensityState werner(double x);

/// True iff both single-qubit marginals carry no local polarization on the
/// sender side, i.e. r_j0 = 0 for j = 1..3 within tol::hermitian. Exactly
/// these channels give outcome probabilities of 1/4 for every input.
bool is_security_form(const DensityState& rho);

/// One term of the singular-value expansion of a correlation matrix,
/// r = sum_i d_i u_i w_i^T, read as a weighted product operator
/// p_i * mu_a (x) mu_b with mu = (1/2) sum_j theta_j sigma_j.
///
/// When the leading component theta_0 of a factor vanishes the term cannot be
/// scaled to a unit-trace operator; such terms keep the raw singular vectors
/// and are flagged normalized = false.
struct PseudoMixtureTerm {
    double singular_value = 0.0;      // d_i
    double weight = 0.0;              // p_i; the weights always sum to 1
    std::array<double, 4> theta_a{};  // normalized: (1, alpha); raw: the u_i column
    std::array<double, 4> theta_b{};
    bool normalized = false;
    bool physical_a = false;  // sum alpha^2 <= 1; always false for raw terms
    bool physical_b = false;
};

struct PseudoMixture {
    std::vector<PseudoMixtureTerm> terms;
    int raw_terms = 0;  // count of terms with normalized == false

    /// Reassembles (1/4) sum d_i sum_jk theta_a_j theta_b_k sigma_j (x) sigma_k;
    /// equals the channel matrix up to SVD accuracy.
    ComplexMatrix rebuild() const;

    double weight_sum() const;
};

/// Expands a channel into at most four product terms. Terms with
/// d_i <= tol::rank * d_max are dropped. Individual weights may be negative;
/// a term is a physical state exactly when its flag says so.
PseudoMixture pseudo_mixture(const CorrelationMatrix& r);

}  // namespace qit
