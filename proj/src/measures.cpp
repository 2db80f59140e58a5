#include "qit/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

namespace qit {

namespace {

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// Binary entropy, tolerant of arguments a few ulp outside [0, 1].
double h2(double p) {
    p = std::clamp(p, 0.0, 1.0);
    return -xlog2x(p) - xlog2x(1.0 - p);
}

// Entropy of a qubit with Bloch norm v.
double qubit_entropy(double v) { return h2(0.5 * (1.0 + std::min(v, 1.0))); }

double norm3(const Vector3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

}  // namespace

double entropy(const DensityState& rho) {
    double s = 0.0;
    for (double lambda : hermitian_eig(rho.matrix()).values) s -= xlog2x(lambda);
    return s;
}

double mutual_information(const DensityState& rho_ab) {
    if (rho_ab.qubits() != 2) throw DimensionError("mutual_information needs two qubits");
    static constexpr std::size_t dims[2] = {2, 2};
    const DensityState a(partial_trace(rho_ab.matrix(), 0, dims), 1);
    const DensityState b(partial_trace(rho_ab.matrix(), 1, dims), 1);
    return entropy(a) + entropy(b) - entropy(rho_ab);
}

ConcurrenceResult concurrence(const DensityState& rho_ab) {
    if (rho_ab.qubits() != 2) throw DimensionError("concurrence needs two qubits");

    // Factor rho = L L^+ from its eigensystem. The spin-flip numbers are the
    // singular values of B = L^T (sy x sy) L: a zero eigenvalue of rho makes a
    // whole column of L small and its error enters B only quadratically, so
    // pure and rank-deficient states keep full precision, where the textbook
    // sqrt(eig(sqrt(rho) flip(rho) sqrt(rho))) form loses half of it.
    const HermitianEig eig_rho = hermitian_eig(rho_ab.matrix());
    ComplexMatrix l(4);
    for (std::size_t k = 0; k < 4; ++k) {
        const double rt = std::sqrt(std::max(0.0, eig_rho.values[k]));
        for (std::size_t i = 0; i < 4; ++i) l.at(i, k) = rt * eig_rho.vectors.at(i, k);
    }
    const ComplexMatrix yy = kron(pauli(2), pauli(2));
    // conj(L)^+ is L^T, so b = L^T (sy x sy) L; b is complex symmetric.
    const ComplexMatrix b = l.conjugate().adjoint() * yy * l;

    // Singular values without squaring: the Hermitian embedding
    // [[0, b], [b^+, 0]] has spectrum {+sigma_i, -sigma_i}.
    ComplexMatrix emb(8);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            emb.at(i, 4 + j) = b.at(i, j);
            emb.at(4 + j, i) = std::conj(b.at(i, j));
        }
    }
    const HermitianEig eig_emb = hermitian_eig(emb);

    ConcurrenceResult out;
    for (std::size_t k = 0; k < 4; ++k) {
        // embedding values are ascending; the top half are the descending sigmas
        out.spin_flip_eigs[k] = std::max(0.0, eig_emb.values[7 - k]);
    }
    out.concurrence = std::max(0.0, out.spin_flip_eigs[0] - out.spin_flip_eigs[1] -
                                        out.spin_flip_eigs[2] - out.spin_flip_eigs[3]);
    return out;
}

namespace {

// Average post-measurement entropy of the remote qubit when the measured
// qubit is projected along n = (sin t cos f, sin t sin f, cos t). r is
// oriented with the measured side first.
double conditional_entropy(const RealMatrix4& r, double theta, double phi) {
    const Vector3 n = {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
                       std::cos(theta)};
    double na = 0.0;
    for (std::size_t j = 0; j < 3; ++j) na += n[j] * r.at(j + 1, 0);

    double total = 0.0;
    for (int sign = -1; sign <= 1; sign += 2) {
        const double q = 0.5 * (1.0 + sign * na);
        if (q < 1e-15) continue;
        Vector3 s;
        for (std::size_t k = 0; k < 3; ++k) {
            double acc = r.at(0, k + 1);
            for (std::size_t j = 0; j < 3; ++j) acc += sign * n[j] * r.at(j + 1, k + 1);
            s[k] = acc / (2.0 * q);
        }
        total += q * qubit_entropy(norm3(s));
    }
    return total;
}

struct MinimizeResult {
    double value = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    int evals = 0;
};

// Coarse grid scan followed by Nelder-Mead refinement (at most max_refine
// further evaluations). Accuracy target is tol::opt on the value.
MinimizeResult minimize_direction(const std::function<double(double, double)>& f) {
    constexpr int kThetaPoints = 64;
    constexpr int kPhiPoints = 32;
    constexpr int kMaxRefine = 200;
    constexpr double kPi = 3.14159265358979323846;

    MinimizeResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < kThetaPoints; ++i) {
        const double theta = kPi * i / (kThetaPoints - 1);
        for (int j = 0; j < kPhiPoints; ++j) {
            const double phi = 2.0 * kPi * j / kPhiPoints;
            const double v = f(theta, phi);
            ++best.evals;
            if (v < best.value) {
                best.value = v;
                best.theta = theta;
                best.phi = phi;
            }
        }
    }

    // Nelder-Mead on the unconstrained (theta, phi) plane; the objective is
    // smooth and periodic so wandering outside the box is harmless.
    struct Vertex {
        double t, p, v;
    };
    int evals = 0;
    auto eval = [&](double t, double p) {
        ++evals;
        return f(t, p);
    };
    std::array<Vertex, 3> vx{
        Vertex{best.theta, best.phi, best.value},
        Vertex{best.theta + kPi / (kThetaPoints - 1), best.phi, 0.0},
        Vertex{best.theta, best.phi + 2.0 * kPi / kPhiPoints, 0.0},
    };
    vx[1].v = eval(vx[1].t, vx[1].p);
    vx[2].v = eval(vx[2].t, vx[2].p);

    while (evals < kMaxRefine) {
        std::sort(vx.begin(), vx.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
        if (vx[2].v - vx[0].v < 1e-12) break;

        const double ct = 0.5 * (vx[0].t + vx[1].t);
        const double cp = 0.5 * (vx[0].p + vx[1].p);
        const Vertex refl{ct + (ct - vx[2].t), cp + (cp - vx[2].p), 0.0};
        const double rv = eval(refl.t, refl.p);

        if (rv < vx[0].v) {
            const Vertex wide{ct + 2.0 * (ct - vx[2].t), cp + 2.0 * (cp - vx[2].p), 0.0};
            const double ev = eval(wide.t, wide.p);
            vx[2] = ev < rv ? Vertex{wide.t, wide.p, ev} : Vertex{refl.t, refl.p, rv};
        } else if (rv < vx[1].v) {
            vx[2] = Vertex{refl.t, refl.p, rv};
        } else {
            const Vertex con{ct + 0.5 * (vx[2].t - ct), cp + 0.5 * (vx[2].p - cp), 0.0};
            const double cv = eval(con.t, con.p);
            if (cv < vx[2].v) {
                vx[2] = Vertex{con.t, con.p, cv};
            } else {
                for (int i = 1; i < 3; ++i) {
                    vx[i].t = vx[0].t + 0.5 * (vx[i].t - vx[0].t);
                    vx[i].p = vx[0].p + 0.5 * (vx[i].p - vx[0].p);
                    vx[i].v = eval(vx[i].t, vx[i].p);
                }
            }
        }
    }

    std::sort(vx.begin(), vx.end(), [](const Vertex& a, const Vertex& b) { return a.v < b.v; });
    if (vx[0].v < best.value) {
        best.value = vx[0].v;
        best.theta = vx[0].t;
        best.phi = vx[0].p;
    }
    best.evals += evals;

    // Fold the reported direction back into [0, pi] x [0, 2 pi).
    best.theta = std::fmod(best.theta, 2.0 * kPi);
    if (best.theta < 0.0) best.theta += 2.0 * kPi;
    if (best.theta > kPi) {
        best.theta = 2.0 * kPi - best.theta;
        best.phi += kPi;
    }
    best.phi = std::fmod(best.phi, 2.0 * kPi);
    if (best.phi < 0.0) best.phi += 2.0 * kPi;
    return best;
}

}  // namespace

DiscordResult discord(const DensityState& rho_ab, MeasuredSide side) {
    const CorrelationMatrix corr = correlation_from_channel(rho_ab);
    // Orient the correlation matrix with the measured qubit first; measuring
    // B on r is measuring A on r^T.
    const RealMatrix4 r =
        side == MeasuredSide::A ? corr.matrix() : corr.matrix().transposed();

    Vector3 a, b;
    for (std::size_t j = 0; j < 3; ++j) {
        a[j] = r.at(j + 1, 0);
        b[j] = r.at(0, j + 1);
    }
    const double s_meas = qubit_entropy(norm3(a));
    const double s_rem = qubit_entropy(norm3(b));
    const double s_ab = entropy(rho_ab);

    const MinimizeResult opt = minimize_direction(
        [&](double theta, double phi) { return conditional_entropy(r, theta, phi); });

    DiscordResult out;
    out.mutual_information = s_meas + s_rem - s_ab;
    out.classical_correlation = s_rem - opt.value;
    out.discord = s_meas - s_ab + opt.value;
    if (out.discord < 0.0 && out.discord >= -tol::opt) out.discord = 0.0;
    out.theta = opt.theta;
    out.phi = opt.phi;
    out.optimizer_evals = opt.evals;
    return out;
}

}  // namespace qit
