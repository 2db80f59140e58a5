#include "qit/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qit {

namespace {

Matrix3 inverse3(const Matrix3& m, double det) {
    Matrix3 inv;
    inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
    inv[0][1] = -(m[0][1] * m[2][2] - m[0][2] * m[2][1]) / det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
    inv[1][0] = -(m[1][0] * m[2][2] - m[1][2] * m[2][0]) / det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
    inv[1][2] = -(m[0][0] * m[1][2] - m[0][2] * m[1][0]) / det;
    inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
    inv[2][1] = -(m[0][0] * m[2][1] - m[0][1] * m[2][0]) / det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    return inv;
}

}  // namespace

ShotRecord sample_pauli(const DensityState& rho, int axis, std::uint64_t shots,
                        std::uint64_t seed) {
    if (axis < 1 || axis > 3) throw DomainError("measurement axis must be 1, 2, or 3");
    if (shots == 0) throw DomainError("shot count must be positive");
    if (rho.qubits() != 1) throw DimensionError("sample_pauli needs a single-qubit state");

    const double bloch = (rho.matrix() * pauli(static_cast<std::size_t>(axis))).trace().real();
    const double p_plus = std::clamp(0.5 * (1.0 + bloch), 0.0, 1.0);

    SplitMix64 gen(derive_stream(seed, static_cast<std::uint64_t>(axis)));
    std::uint64_t plus = 0;
    for (std::uint64_t i = 0; i < shots; ++i) {
        if (gen.next_double() < p_plus) ++plus;
    }
    return ShotRecord{axis, shots, plus, seed};
}

BlochEstimate estimate_bloch(const std::array<ShotRecord, 3>& records) {
    bool seen[4] = {};
    for (const ShotRecord& rec : records) {
        if (rec.axis < 1 || rec.axis > 3 || seen[rec.axis]) {
            throw DomainError("estimate_bloch needs exactly one record per axis 1..3");
        }
        if (rec.shots == 0) throw DomainError("estimate_bloch: record has zero shots");
        if (rec.plus_counts > rec.shots) {
            throw DomainError("estimate_bloch: plus counts exceed shots");
        }
        seen[rec.axis] = true;
    }
    BlochEstimate out;
    for (const ShotRecord& rec : records) {
        const double p = static_cast<double>(rec.plus_counts) / static_cast<double>(rec.shots);
        const std::size_t k = static_cast<std::size_t>(rec.axis) - 1;
        out.s_hat[k] = std::clamp(2.0 * p - 1.0, -1.0, 1.0);
        out.s_stderr[k] = 2.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(rec.shots));
    }
    return out;
}

TomographyEstimate remote_tomography(const DensityState& rho_c, const DensityState& rho_ab,
                                     const BellOutcome& outcome, std::uint64_t shots,
                                     std::uint64_t seed) {
    if (shots < 3) throw DomainError("remote tomography needs at least one shot per axis");

    const CorrelationMatrix r = correlation_from_channel(rho_ab);
    RankClassification cls = rank_classify(r);
    if (cls.rank < 4) {
        throw RankDeficientError(std::move(cls), Vector3{}, {});
    }

    const CollapseResult col = collapse(rho_c, rho_ab, outcome);

    // Even three-way split; the remainder goes to the lower axes.
    const std::uint64_t base = shots / 3;
    const std::uint64_t rem = shots % 3;
    TomographyEstimate out;
    for (int axis = 1; axis <= 3; ++axis) {
        const std::uint64_t n = base + (static_cast<std::uint64_t>(axis) <= rem ? 1 : 0);
        out.records[axis - 1] = sample_pauli(col.rho_b, axis, n, seed);
    }

    const BlochEstimate est = estimate_bloch(out.records);
    out.s_hat = est.s_hat;
    out.s_stderr = est.s_stderr;
    out.probability = col.probability;

    const Matrix3 t = coefficient_matrix(r, est.s_hat, outcome);
    Vector3 b;
    for (std::size_t k = 0; k < 3; ++k) b[k] = est.s_hat[k] - r.at(0, k + 1);
    const Solve3 sol = solve3(t, b);
    out.c_hat = sol.x;
    out.cond = sol.cond;

    // First-order error propagation: c = T^-1 (s - r0.), so
    // cov(c) = T^-1 diag(stderr^2) T^-T.
    const Matrix3 tinv = inverse3(t, det3(t));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < 3; ++k)
                sum += tinv[i][k] * est.s_stderr[k] * est.s_stderr[k] * tinv[j][k];
            out.c_cov[i][j] = sum;
            out.c_cov[j][i] = sum;
        }
    return out;
}

}  // namespace qit
