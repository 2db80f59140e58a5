#include "qit/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace qit {

namespace {

void check_outcome(const BellOutcome& o) {
    if ((o.m != 0 && o.m != 1) || (o.n != 0 && o.n != 1)) {
        throw DomainError("Bell outcome labels must be 0 or 1");
    }
}

constexpr double kTau[3] = {1.0, -1.0, 1.0};  // <b_mn| sigma_j (x) sigma_j |b_mn> at m = n = 0

}  // namespace

BellOutcome BellOutcome::from_index(int idx) {
    if (idx < 0 || idx > 3) throw DomainError("Bell outcome index must be 0..3");
    return BellOutcome{idx / 2, idx % 2};
}

std::array<cdouble, 4> bell_ket(const BellOutcome& o) {
    check_outcome(o);
    const double inv = 1.0 / std::sqrt(2.0);
    std::array<cdouble, 4> k{};
    k[o.n] = inv;                                   // |0, n>
    k[2 + (1 - o.n)] = (o.m == 0) ? inv : -inv;     // (-1)^m |1, 1-n>
    return k;
}

DensityState bell_state(const BellOutcome& o) {
    const std::array<cdouble, 4> k = bell_ket(o);
    ComplexMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = k[i] * std::conj(k[j]);
    return DensityState(m, 2);
}

Vector3 bell_signs(const BellOutcome& o) {
    check_outcome(o);
    const int phi[3] = {o.m, o.m + o.n, o.n};
    Vector3 eps;
    for (std::size_t j = 0; j < 3; ++j) eps[j] = (phi[j] % 2 == 0 ? 1.0 : -1.0) * kTau[j];
    return eps;
}

CollapseResult collapse(const DensityState& rho_c, const DensityState& rho_ab,
                        const BellOutcome& o) {
    if (rho_c.qubits() != 1 || rho_ab.qubits() != 2) {
        throw DimensionError("collapse needs a single-qubit input and a two-qubit channel");
    }
    const std::array<cdouble, 4> beta = bell_ket(o);
    const ComplexMatrix rho3 = kron(rho_c.matrix(), rho_ab.matrix());

    // M[b][b'] = <b_mn (x) b| rho3 |b_mn (x) b'>, the unnormalized conditional
    // operator on qubit B. Index layout: |p, b> -> 2 p + b with p over (C, A).
    ComplexMatrix m(2);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t b2 = 0; b2 < 2; ++b2) {
            cdouble sum = 0.0;
            for (std::size_t p = 0; p < 4; ++p)
                for (std::size_t q = 0; q < 4; ++q)
                    sum += std::conj(beta[p]) * rho3.at(2 * p + b, 2 * q + b2) * beta[q];
            m.at(b, b2) = sum;
        }

    const double prob = m.trace().real();
    if (prob <= tol::rank) {
        throw UndefinedCollapseError("collapse: outcome (" + std::to_string(o.m) + ", " +
                                         std::to_string(o.n) +
                                         ") has vanishing probability " + std::to_string(prob),
                                     prob);
    }
    m *= 1.0 / prob;

    Vector3 s;
    for (std::size_t k = 0; k < 3; ++k) s[k] = (m * pauli(k + 1)).trace().real();
    return CollapseResult{o, prob, s, DensityState(m, 1)};
}

Vector3 s_vector_analytic(const CorrelationMatrix& r, const PauliVector& c,
                          const BellOutcome& o) {
    const Vector3 eps = bell_signs(o);
    double denom = 1.0;
    for (std::size_t j = 0; j < 3; ++j) denom += eps[j] * r.at(j + 1, 0) * c.c(j + 1);
    if (std::abs(denom) <= tol::rank) {
        throw UndefinedCollapseError(
            "conditional state undefined: outcome probability vanishes", denom / 4.0);
    }
    Vector3 s;
    for (std::size_t k = 0; k < 3; ++k) {
        double num = r.at(0, k + 1);
        for (std::size_t j = 0; j < 3; ++j) num += eps[j] * r.at(j + 1, k + 1) * c.c(j + 1);
        s[k] = num / denom;
    }
    return s;
}

Matrix3 coefficient_matrix(const CorrelationMatrix& r, const Vector3& s,
                           const BellOutcome& o) {
    const Vector3 eps = bell_signs(o);
    Matrix3 t;
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t j = 0; j < 3; ++j)
            t[k][j] = eps[j] * (r.at(j + 1, k + 1) - r.at(j + 1, 0) * s[k]);
    return t;
}

RankClassification rank_classify(const CorrelationMatrix& r) {
    const Svd4 s = svd4(r.matrix());
    RankClassification out;
    out.singular_values = s.d;
    const double d_max = s.d[0];
    for (double d : s.d)
        if (d > tol::rank * d_max) ++out.rank;
    out.affine_dim = out.rank - 1;
    out.basis = pseudo_mixture(r);
    return out;
}

RankDeficientError::RankDeficientError(RankClassification classification, Vector3 min_norm,
                                       std::vector<Vector3> unit_norm_candidates)
    : Error("reconstruction is underdetermined: channel rank " +
            std::to_string(classification.rank) + " leaves a " +
            std::to_string(4 - classification.rank) + "-dimensional solution family"),
      classification_(std::move(classification)),
      min_norm_(min_norm),
      candidates_(std::move(unit_norm_candidates)) {}

Reconstruction reconstruct(const CorrelationMatrix& r, const Vector3& s,
                           const BellOutcome& o) {
    const Matrix3 t = coefficient_matrix(r, s, o);
    Vector3 b;
    for (std::size_t k = 0; k < 3; ++k) b[k] = s[k] - r.at(0, k + 1);

    // T is invertible exactly when the channel has full correlation rank (the
    // determinant identity ties det T to det R), so classify before solving:
    // a rank-deficient channel leaves T entries that are pure roundoff, which
    // must not be mistaken for an invertible system.
    const RankClassification cls = rank_classify(r);
    if (cls.rank == 4) {
        try {
            const Solve3 sol = solve3(t, b);
            const Svd3 sv = svd3(t);
            const double amp = sv.d[2] > 0.0 ? 1.0 / sv.d[2]
                                             : std::numeric_limits<double>::infinity();
            Vector3 x = sol.x;
            const double x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            if (x2 > 1.0 && x2 <= 1.0 + tol::solve * std::max(1.0, sol.cond)) {
                // roundoff of a poorly conditioned solve can push the vector
                // marginally outside the ball; pull it back
                const double scale = 1.0 / std::sqrt(x2);
                for (double& v : x) v *= scale;
            }
            return Reconstruction{PauliVector(x[0], x[1], x[2]), sol.cond, amp};
        } catch (const SingularSystemError&) {
            // numerically singular despite nominal full rank: diagnose below
        }
    }

    // Degradation payload: minimum-norm least-squares solution plus, if the
    // solution family crosses the unit sphere, the pure inputs consistent
    // with the observation. The cutoff gets an absolute floor so that
    // roundoff in an exactly-zero T does not masquerade as signal.
    const Svd3 sv = svd3(t);
    const double cutoff =
        std::max(tol::rank * sv.d[0], 1024 * std::numeric_limits<double>::epsilon());
    Vector3 x{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!(sv.d[i] > cutoff)) continue;
        double ub = 0.0;
        for (std::size_t k = 0; k < 3; ++k) ub += sv.u[k][i] * b[k];
        const double coef = ub / sv.d[i];
        for (std::size_t k = 0; k < 3; ++k) x[k] += coef * sv.w[k][i];
    }

    std::vector<Vector3> candidates;
    int rank_t = 0;
    for (double d : sv.d)
        if (d > cutoff) ++rank_t;
    if (rank_t == 2) {
        // One-dimensional null space: solutions x + t * n meet the unit
        // sphere at t = +-sqrt(1 - |x|^2) since x is orthogonal to n.
        const double x2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        if (x2 <= 1.0 + tol::solve) {
            const double tt = std::sqrt(std::max(0.0, 1.0 - x2));
            const Vector3 n = {sv.w[0][2], sv.w[1][2], sv.w[2][2]};
            candidates.push_back({x[0] + tt * n[0], x[1] + tt * n[1], x[2] + tt * n[2]});
            if (tt > tol::solve) {
                candidates.push_back({x[0] - tt * n[0], x[1] - tt * n[1], x[2] - tt * n[2]});
            }
        }
    }
    throw RankDeficientError(cls, x, std::move(candidates));
}

TransmissionRecord transmit(const DensityState& rho_c, const DensityState& rho_ab) {
    const CorrelationMatrix r = correlation_from_channel(rho_ab);
    const PauliVector c = bloch_from_state(rho_c);

    TransmissionRecord rec;
    rec.det_r = det4(r.matrix());
    rec.rank = rank_classify(r).rank;

    for (int idx = 0; idx < 4; ++idx) {
        const BellOutcome o = BellOutcome::from_index(idx);
        OutcomeRecord& out = rec.outcomes[idx];
        out.outcome = o;

        const Vector3 eps = bell_signs(o);
        double denom = 1.0;
        for (std::size_t j = 0; j < 3; ++j) denom += eps[j] * r.at(j + 1, 0) * c.c(j + 1);
        out.probability = denom / 4.0;
        rec.probability_sum += out.probability;

        if (out.probability <= tol::rank) {
            out.status = OutcomeStatus::zero_probability;
            continue;
        }

        // The projection recomputes the probability; near the cutoff the two
        // estimates may straddle it, so treat a refusal as zero probability.
        try {
            out.collapse = collapse(rho_c, rho_ab, o);
        } catch (const UndefinedCollapseError&) {
            out.status = OutcomeStatus::zero_probability;
            continue;
        }
        const Matrix3 t = coefficient_matrix(r, out.collapse->s, o);
        const double dt = det3(t);
        out.det_t = dt;
        const double lhs = 4.0 * out.probability * dt;
        out.det_identity_residual =
            std::abs(lhs + rec.det_r) /
            std::max({std::abs(rec.det_r), std::abs(lhs), 1e-30});

        try {
            out.reconstruction = reconstruct(r, out.collapse->s, o);
            out.status = OutcomeStatus::ok;
        } catch (const RankDeficientError& e) {
            out.status = OutcomeStatus::rank_deficient;
            out.min_norm_solution = e.min_norm_solution();
            out.unit_norm_candidates = e.unit_norm_candidates();
        }
    }
    return rec;
}

}  // namespace qit
