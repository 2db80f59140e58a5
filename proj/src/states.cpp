#include "qit/states.hpp"

#include <cmath>
#include <string>

namespace qit {

const ComplexMatrix& pauli(std::size_t i) {
    static const std::array<ComplexMatrix, 4> sigma = [] {
        std::array<ComplexMatrix, 4> s{ComplexMatrix(2), ComplexMatrix(2), ComplexMatrix(2),
                                       ComplexMatrix(2)};
        s[0].at(0, 0) = 1.0;
        s[0].at(1, 1) = 1.0;
        s[1].at(0, 1) = 1.0;
        s[1].at(1, 0) = 1.0;
        s[2].at(0, 1) = cdouble(0.0, -1.0);
        s[2].at(1, 0) = cdouble(0.0, 1.0);
        s[3].at(0, 0) = 1.0;
        s[3].at(1, 1) = -1.0;
        return s;
    }();
    if (i > 3) throw DimensionError("pauli index must be 0..3");
    return sigma[i];
}

PauliVector::PauliVector(double c1, double c2, double c3) : c_{1.0, c1, c2, c3} {
    const double n2 = c1 * c1 + c2 * c2 + c3 * c3;
    if (!std::isfinite(n2) || n2 > 1.0 + tol::hermitian) {
        throw UnphysicalStateError("Bloch vector leaves the unit ball: |c|^2 = " +
                                   std::to_string(n2));
    }
}

double PauliVector::bloch_norm() const {
    return std::sqrt(c_[1] * c_[1] + c_[2] * c_[2] + c_[3] * c_[3]);
}

DensityState::DensityState(ComplexMatrix rho, int qubits)
    : rho_(std::move(rho)), qubits_(qubits), min_eig_(0.0) {
    const std::size_t want = qubits == 1 ? 2 : qubits == 2 ? 4 : 0;
    if (want == 0 || rho_.dim() != want) {
        throw DimensionError("density matrix dimension does not match qubit count");
    }
    if (!rho_.is_finite()) throw UnphysicalStateError("density matrix has non-finite entries");
    const double defect = rho_.hermiticity_defect();
    if (!(defect <= tol::hermitian)) {
        throw NonHermitianError("density matrix is not Hermitian (defect " +
                                    std::to_string(defect) + ")",
                                defect);
    }
    const cdouble tr = rho_.trace();
    if (std::abs(tr - 1.0) > tol::hermitian) {
        throw UnphysicalStateError("density matrix trace is not 1: " + std::to_string(tr.real()));
    }
    min_eig_ = hermitian_eig(rho_).values.front();
    if (min_eig_ < -tol::psd) {
        throw UnphysicalStateError("density matrix has a negative eigenvalue", min_eig_);
    }
}

double DensityState::purity() const { return (rho_ * rho_).trace().real(); }

DensityState qubit_from_bloch(double c1, double c2, double c3) {
    const PauliVector c(c1, c2, c3);  // ball check
    ComplexMatrix m(2);
    for (std::size_t i = 0; i < 4; ++i) {
        ComplexMatrix term = pauli(i);
        term *= 0.5 * c.c(i);
        m += term;
    }
    return DensityState(m, 1);
}

PauliVector bloch_from_state(const DensityState& rho) {
    if (rho.qubits() != 1) throw DimensionError("bloch_from_state needs a single-qubit state");
    double c[4];
    for (std::size_t i = 1; i < 4; ++i) c[i] = (rho.matrix() * pauli(i)).trace().real();
    return PauliVector(c[1], c[2], c[3]);
}

namespace {

ComplexMatrix build_channel_matrix(const RealMatrix4& r) {
    ComplexMatrix m(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (r.at(i, j) == 0.0) continue;
            ComplexMatrix term = kron(pauli(i), pauli(j));
            term *= 0.25 * r.at(i, j);
            m += term;
        }
    return m;
}

}  // namespace

CorrelationMatrix::CorrelationMatrix(const RealMatrix4& r) : r_(r) {
    for (double v : r_.e) {
        if (!std::isfinite(v)) throw UnphysicalStateError("correlation matrix has non-finite entries");
        if (std::abs(v) > 1.0 + tol::hermitian) {
            throw UnphysicalStateError("correlation entry outside [-1, 1]: " + std::to_string(v));
        }
    }
    if (std::abs(r_.at(0, 0) - 1.0) > tol::hermitian) {
        throw UnphysicalStateError("correlation matrix must have r_00 = 1, got " +
                                   std::to_string(r_.at(0, 0)));
    }
    r_.at(0, 0) = 1.0;
    const double min_eig = hermitian_eig(build_channel_matrix(r_)).values.front();
    if (min_eig < -tol::psd) {
        throw UnphysicalStateError("correlation matrix does not describe a physical state",
                                   min_eig);
    }
}

DensityState channel_from_correlation(const CorrelationMatrix& r) {
    return DensityState(build_channel_matrix(r.matrix()), 2);
}

CorrelationMatrix correlation_from_channel(const DensityState& rho) {
    if (rho.qubits() != 2) throw DimensionError("correlation_from_channel needs two qubits");
    RealMatrix4 r;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            r.at(i, j) = (rho.matrix() * kron(pauli(i), pauli(j))).trace().real();
    r.at(0, 0) = 1.0;  // trace was validated; pin the invariant exactly
    return CorrelationMatrix(r);
}

DensityState werner(double x) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
        throw DomainError("werner mixing weight must lie in [0, 1], got " + std::to_string(x));
    }
    // x |b00><b00| + (1 - x) I / 4 with |b00> = (|00> + |11>) / sqrt(2).
    ComplexMatrix m(4);
    const double half = 0.5 * x;
    m.at(0, 0) = half;
    m.at(0, 3) = half;
    m.at(3, 0) = half;
    m.at(3, 3) = half;
    const double rest = (1.0 - x) / 4.0;
    for (std::size_t i = 0; i < 4; ++i) m.at(i, i) += rest;
    return DensityState(m, 2);
}

bool is_security_form(const DensityState& rho) {
    const CorrelationMatrix r = correlation_from_channel(rho);
    for (std::size_t j = 1; j < 4; ++j) {
        if (std::abs(r.at(j, 0)) > tol::hermitian) return false;
    }
    return true;
}

ComplexMatrix PseudoMixture::rebuild() const {
    ComplexMatrix m(4);
    for (const PseudoMixtureTerm& t : terms) {
        // Both branches are d_i * u_i w_i^T written in the Pauli basis; for
        // normalized terms theta carries 1/theta_0 of the singular vector, and
        // the weight absorbs the difference.
        const double coef = t.normalized ? t.weight : t.singular_value;
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = 0; k < 4; ++k) {
                const double v = coef * t.theta_a[j] * t.theta_b[k];
                if (v == 0.0) continue;
                ComplexMatrix term = kron(pauli(j), pauli(k));
                term *= 0.25 * v;
                m += term;
            }
    }
    return m;
}

double PseudoMixture::weight_sum() const {
    double s = 0.0;
    for (const PseudoMixtureTerm& t : terms) s += t.weight;
    return s;
}

PseudoMixture pseudo_mixture(const CorrelationMatrix& r) {
    const Svd4 s = svd4(r.matrix());
    const double d_max = s.d[0];

    PseudoMixture out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!(s.d[i] > tol::rank * d_max)) continue;

        PseudoMixtureTerm t;
        t.singular_value = s.d[i];
        const double u0 = s.u.at(0, i);
        const double w0 = s.w.at(0, i);
        t.weight = s.d[i] * u0 * w0;
        if (std::abs(u0) < tol::rank || std::abs(w0) < tol::rank) {
            // No unit-trace scaling exists; keep the raw singular vectors.
            t.normalized = false;
            for (std::size_t k = 0; k < 4; ++k) {
                t.theta_a[k] = s.u.at(k, i);
                t.theta_b[k] = s.w.at(k, i);
            }
        } else {
            t.normalized = true;
            double na = 0.0, nb = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                t.theta_a[k] = s.u.at(k, i) / u0;
                t.theta_b[k] = s.w.at(k, i) / w0;
                if (k > 0) {
                    na += t.theta_a[k] * t.theta_a[k];
                    nb += t.theta_b[k] * t.theta_b[k];
                }
            }
            t.physical_a = na <= 1.0 + tol::hermitian;
            t.physical_b = nb <= 1.0 + tol::hermitian;
        }
        if (!t.normalized) ++out.raw_terms;
        out.terms.push_back(t);
    }
    return out;
}

}  // namespace qit
