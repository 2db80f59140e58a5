#include "qit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace qit {

namespace {

bool valid_dim(std::size_t d) { return d == 2 || d == 4 || d == 8; }

double sgn_or_one(double x) { return x < 0.0 ? -1.0 : 1.0; }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) {
    if (!valid_dim(dim)) {
        throw DimensionError("matrix dimension must be 2, 4, or 8, got " + std::to_string(dim));
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m.at(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m.at(i, j) = std::conj(at(j, i));
    return m;
}

ComplexMatrix ComplexMatrix::conjugate() const {
    ComplexMatrix m(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) m.at(i, j) = std::conj(at(i, j));
    return m;
}

cdouble ComplexMatrix::trace() const {
    cdouble t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += at(i, i);
    return t;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < dim_ * dim_; ++i) m = std::max(m, std::abs(e_[i]));
    return m;
}

double ComplexMatrix::hermiticity_defect() const {
    double d = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = i; j < dim_; ++j)
            d = std::max(d, std::abs(at(i, j) - std::conj(at(j, i))));
    return d;
}

bool ComplexMatrix::is_finite() const {
    for (std::size_t i = 0; i < dim_ * dim_; ++i)
        if (!std::isfinite(e_[i].real()) || !std::isfinite(e_[i].imag())) return false;
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw DimensionError("matrix addition dimension mismatch");
    for (std::size_t i = 0; i < dim_ * dim_; ++i) e_[i] += o.e_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (o.dim_ != dim_) throw DimensionError("matrix subtraction dimension mismatch");
    for (std::size_t i = 0; i < dim_ * dim_; ++i) e_[i] -= o.e_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble z) {
    for (std::size_t i = 0; i < dim_ * dim_; ++i) e_[i] *= z;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionError("matrix product dimension mismatch");
    ComplexMatrix out(a.dim_);
    for (std::size_t i = 0; i < a.dim_; ++i)
        for (std::size_t k = 0; k < a.dim_; ++k) {
            const cdouble aik = a.at(i, k);
            if (aik == cdouble{}) continue;
            for (std::size_t j = 0; j < a.dim_; ++j) out.at(i, j) += aik * b.at(k, j);
        }
    return out;
}

RealMatrix4 RealMatrix4::identity() {
    RealMatrix4 m;
    for (std::size_t i = 0; i < 4; ++i) m.at(i, i) = 1.0;
    return m;
}

RealMatrix4 RealMatrix4::transposed() const {
    RealMatrix4 m;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = at(j, i);
    return m;
}

double RealMatrix4::max_abs() const {
    double m = 0.0;
    for (double v : e) m = std::max(m, std::abs(v));
    return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t da = a.dim(), db = b.dim();
    if (!valid_dim(da * db)) {
        throw DimensionError("kron result dimension " + std::to_string(da * db) +
                             " is not supported");
    }
    ComplexMatrix out(da * db);
    for (std::size_t i = 0; i < da; ++i)
        for (std::size_t j = 0; j < da; ++j) {
            const cdouble aij = a.at(i, j);
            for (std::size_t k = 0; k < db; ++k)
                for (std::size_t l = 0; l < db; ++l)
                    out.at(i * db + k, j * db + l) = aij * b.at(k, l);
        }
    return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t keep,
                            std::span<const std::size_t> dims) {
    const std::size_t n = dims.size();
    if (n == 0 || keep >= n) throw DimensionError("partial_trace: bad subsystem index");
    std::size_t prod = 1;
    for (std::size_t d : dims) prod *= d;
    if (prod != rho.dim()) {
        throw DimensionError("partial_trace: factor dimensions do not multiply to " +
                             std::to_string(rho.dim()));
    }
    const std::size_t dk = dims[keep];
    if (!valid_dim(dk)) throw DimensionError("partial_trace: kept factor has unsupported size");

    // Big-endian digit weights matching kron's layout.
    std::array<std::size_t, 8> weight{};
    {
        std::size_t w = 1;
        for (std::size_t p = n; p-- > 0;) {
            weight[p] = w;
            w *= dims[p];
        }
    }
    const std::size_t rest = prod / dk;
    auto compose = [&](std::size_t kept_digit, std::size_t rest_code) {
        std::size_t idx = kept_digit * weight[keep];
        for (std::size_t p = n; p-- > 0;) {
            if (p == keep) continue;
            idx += (rest_code % dims[p]) * weight[p];
            rest_code /= dims[p];
        }
        return idx;
    };

    ComplexMatrix out(dk);
    for (std::size_t i = 0; i < dk; ++i)
        for (std::size_t j = 0; j < dk; ++j) {
            cdouble sum = 0.0;
            for (std::size_t t = 0; t < rest; ++t) sum += rho.at(compose(i, t), compose(j, t));
            out.at(i, j) = sum;
        }
    return out;
}

namespace {

// One cyclic sweep of complex Jacobi rotations; returns the largest
// off-diagonal magnitude seen before rotating.
double jacobi_sweep(ComplexMatrix& a, ComplexMatrix& v) {
    const std::size_t n = a.dim();
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            const cdouble h = a.at(p, q);
            const double habs = std::abs(h);
            off = std::max(off, habs);
            if (habs == 0.0) continue;

            const double app = a.at(p, p).real();
            const double aqq = a.at(q, q).real();
            const double tau = (aqq - app) / (2.0 * habs);
            const double t = sgn_or_one(tau) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            const double c = 1.0 / std::sqrt(1.0 + t * t);
            const double s = t * c;
            const cdouble phase = h / habs;  // e^{i alpha}

            // A <- J^dagger A J with J_pp = c, J_pq = s e^{i a},
            // J_qp = -s e^{-i a}, J_qq = c; this zeroes a_pq.
            for (std::size_t k = 0; k < n; ++k) {
                if (k == p || k == q) continue;
                const cdouble akp = a.at(k, p), akq = a.at(k, q);
                a.at(k, p) = c * akp - s * std::conj(phase) * akq;
                a.at(k, q) = s * phase * akp + c * akq;
                a.at(p, k) = std::conj(a.at(k, p));
                a.at(q, k) = std::conj(a.at(k, q));
            }
            const double app2 = app * c * c + aqq * s * s - 2.0 * s * c * habs;
            const double aqq2 = app * s * s + aqq * c * c + 2.0 * s * c * habs;
            a.at(p, p) = app2;
            a.at(q, q) = aqq2;
            a.at(p, q) = 0.0;
            a.at(q, p) = 0.0;

            for (std::size_t k = 0; k < n; ++k) {
                const cdouble vkp = v.at(k, p), vkq = v.at(k, q);
                v.at(k, p) = c * vkp - s * std::conj(phase) * vkq;
                v.at(k, q) = s * phase * vkp + c * vkq;
            }
        }
    }
    return off;
}

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& h) {
    const double defect = h.hermiticity_defect();
    if (!(defect <= tol::hermitian)) {
        throw NonHermitianError("hermitian_eig: input is not Hermitian (defect " +
                                    std::to_string(defect) + ")",
                                defect);
    }
    const std::size_t n = h.dim();

    // Symmetrize exactly so rotations act on clean data.
    ComplexMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.at(i, i) = h.at(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const cdouble m = 0.5 * (h.at(i, j) + std::conj(h.at(j, i)));
            a.at(i, j) = m;
            a.at(j, i) = std::conj(m);
        }
    }

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(a.max_abs(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        if (jacobi_sweep(a, v) <= 1e-15 * scale) break;
    }

    HermitianEig out{std::vector<double>(n), ComplexMatrix(n)};
    std::array<std::size_t, 8> order{};
    std::iota(order.begin(), order.begin() + n, std::size_t{0});
    std::sort(order.begin(), order.begin() + n,
              [&](std::size_t x, std::size_t y) { return a.at(x, x).real() < a.at(y, y).real(); });
    for (std::size_t c = 0; c < n; ++c) {
        out.values[c] = a.at(order[c], order[c]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors.at(r, c) = v.at(r, order[c]);
    }
    return out;
}

namespace {

// One-sided Jacobi on the columns of a; w accumulates the right rotations so
// that (original a) = (final a) * w^T. N is 3 or 4.
template <std::size_t N>
struct SmallSvd {
    double u[N][N];
    double d[N];
    double w[N][N];
};

template <std::size_t N>
SmallSvd<N> onesided_jacobi(const double (&m)[N][N]) {
    double a[N][N], w[N][N];
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) {
            a[i][j] = m[i][j];
            w[i][j] = (i == j) ? 1.0 : 0.0;
        }

    for (int sweep = 0; sweep < 60; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = i + 1; j < N; ++j) {
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t k = 0; k < N; ++k) {
                    alpha += a[k][i] * a[k][i];
                    beta += a[k][j] * a[k][j];
                    gamma += a[k][i] * a[k][j];
                }
                if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || gamma == 0.0) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = sgn_or_one(zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < N; ++k) {
                    const double x = a[k][i], y = a[k][j];
                    a[k][i] = c * x - s * y;
                    a[k][j] = s * x + c * y;
                    const double wx = w[k][i], wy = w[k][j];
                    w[k][i] = c * wx - s * wy;
                    w[k][j] = s * wx + c * wy;
                }
            }
        }
        if (!rotated) break;
    }

    SmallSvd<N> out{};
    double norms[N];
    std::size_t order[N];
    for (std::size_t i = 0; i < N; ++i) {
        double n2 = 0.0;
        for (std::size_t k = 0; k < N; ++k) n2 += a[k][i] * a[k][i];
        norms[i] = std::sqrt(n2);
        order[i] = i;
    }
    std::sort(order, order + N, [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    const double sigma_max = norms[order[0]];
    bool null_col[N];
    for (std::size_t c = 0; c < N; ++c) {
        const std::size_t src = order[c];
        out.d[c] = norms[src];
        null_col[c] = !(norms[src] > sigma_max * 1e-15) || sigma_max == 0.0;
        for (std::size_t r = 0; r < N; ++r) {
            out.w[r][c] = w[r][src];
            out.u[r][c] = null_col[c] ? 0.0 : a[r][src] / norms[src];
        }
    }

    // Complete null columns of u to an orthonormal basis (Gram-Schmidt over
    // the best-conditioned coordinate axes).
    for (std::size_t c = 0; c < N; ++c) {
        if (!null_col[c]) continue;
        double best[N] = {};
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < N; ++cand) {
            double v[N] = {};
            v[cand] = 1.0;
            for (std::size_t c2 = 0; c2 < N; ++c2) {
                if (c2 == c || null_col[c2]) continue;  // only project onto filled columns
                double dot = 0.0;
                for (std::size_t r = 0; r < N; ++r) dot += out.u[r][c2] * v[r];
                for (std::size_t r = 0; r < N; ++r) v[r] -= dot * out.u[r][c2];
            }
            double n2 = 0.0;
            for (std::size_t r = 0; r < N; ++r) n2 += v[r] * v[r];
            if (n2 > best_norm) {
                best_norm = n2;
                for (std::size_t r = 0; r < N; ++r) best[r] = v[r];
            }
        }
        const double inv = 1.0 / std::sqrt(best_norm);
        for (std::size_t r = 0; r < N; ++r) out.u[r][c] = best[r] * inv;
        null_col[c] = false;
    }
    return out;
}

}  // namespace

Svd4 svd4(const RealMatrix4& m) {
    double a[4][4];
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) a[i][j] = m.at(i, j);
    const SmallSvd<4> s = onesided_jacobi<4>(a);
    Svd4 out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.d[i] = s.d[i];
        for (std::size_t j = 0; j < 4; ++j) {
            out.u.at(i, j) = s.u[i][j];
            out.w.at(i, j) = s.w[i][j];
        }
    }
    return out;
}

Svd3 svd3(const Matrix3& m) {
    double a[3][3];
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) a[i][j] = m[i][j];
    const SmallSvd<3> s = onesided_jacobi<3>(a);
    Svd3 out;
    for (std::size_t i = 0; i < 3; ++i) {
        out.d[i] = s.d[i];
        for (std::size_t j = 0; j < 3; ++j) {
            out.u[i][j] = s.u[i][j];
            out.w[i][j] = s.w[i][j];
        }
    }
    return out;
}

double det3(const Matrix3& a) {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

double det4(const RealMatrix4& m) {
    double det = 0.0;
    for (std::size_t col = 0; col < 4; ++col) {
        Matrix3 minor{};
        for (std::size_t i = 1; i < 4; ++i) {
            std::size_t jj = 0;
            for (std::size_t j = 0; j < 4; ++j) {
                if (j == col) continue;
                minor[i - 1][jj++] = m.at(i, j);
            }
        }
        const double term = m.at(0, col) * det3(minor);
        det += (col % 2 == 0) ? term : -term;
    }
    return det;
}

Solve3 solve3(const Matrix3& a, const Vector3& b) {
    const Svd3 s = svd3(a);
    const double sigma_max = s.d[0];
    const double sigma_min = s.d[2];
    const double det = det3(a);
    const double cond = sigma_min > 0.0 ? sigma_max / sigma_min
                                        : std::numeric_limits<double>::infinity();

    if (sigma_max == 0.0 || std::abs(det) < tol::rank * sigma_max * sigma_max * sigma_max) {
        int rank = 0;
        for (double d : s.d)
            if (d > tol::rank * sigma_max) ++rank;
        throw SingularSystemError("solve3: system is singular to working precision (rank " +
                                      std::to_string(rank) + ")",
                                  rank, cond);
    }

    // Partial-pivot Gaussian elimination on the augmented system.
    double m[3][4];
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) m[i][j] = a[i][j];
        m[i][3] = b[i];
    }
    for (std::size_t col = 0; col < 3; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        if (piv != col)
            for (std::size_t j = 0; j < 4; ++j) std::swap(m[col][j], m[piv][j]);
        for (std::size_t r = col + 1; r < 3; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t j = col; j < 4; ++j) m[r][j] -= f * m[col][j];
        }
    }
    Solve3 out;
    out.cond = cond;
    for (std::size_t i = 3; i-- > 0;) {
        double sum = m[i][3];
        for (std::size_t j = i + 1; j < 3; ++j) sum -= m[i][j] * out.x[j];
        out.x[i] = sum / m[i][i];
    }
    return out;
}

}  // namespace qit
