#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qit/errors.hpp"
#include "qit/tolerances.hpp"

namespace qit {

using cdouble = std::complex<double>;

/// Dense complex matrix of fixed small dimension (2, 4, or 8), row-major.
/// Storage is a flat inline array sized for the largest case, so instances
/// are cheap to copy and never allocate.
class ComplexMatrix {
  public:
    static constexpr std::size_t kMaxDim = 8;

    /// Zero matrix. dim must be 2, 4, or 8.
    explicit ComplexMatrix(std::size_t dim);

    static ComplexMatrix identity(std::size_t dim);

    std::size_t dim() const { return dim_; }

    cdouble& at(std::size_t i, std::size_t j) { return e_[i * dim_ + j]; }
    const cdouble& at(std::size_t i, std::size_t j) const { return e_[i * dim_ + j]; }

    ComplexMatrix adjoint() const;
    ComplexMatrix conjugate() const;
    cdouble trace() const;

    /// Largest |entry|.
    double max_abs() const;

    /// max_ij |a_ij - conj(a_ji)|.
    double hermiticity_defect() const;

    bool is_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cdouble z);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cdouble z, ComplexMatrix a) { return a *= z; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

  private:
    std::size_t dim_;
    std::array<cdouble, kMaxDim * kMaxDim> e_{};
};

/// Real 4x4 matrix, row-major. Indices run 0..3.
struct RealMatrix4 {
    std::array<double, 16> e{};

    double& at(std::size_t i, std::size_t j) { return e[i * 4 + j]; }
    const double& at(std::size_t i, std::size_t j) const { return e[i * 4 + j]; }

    static RealMatrix4 identity();
    RealMatrix4 transposed() const;
    double max_abs() const;
};

using Vector3 = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Kronecker product; result dimension is dim(a)*dim(b) and must fit in 8.
/// Row/column index of the result decomposes big-endian: the left factor is
/// the most significant digit.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out every tensor factor except `keep` (0-based, ordered as in the
/// kron chain). dims lists each factor's dimension; their product must equal
/// rho's dimension.
ComplexMatrix partial_trace(const ComplexMatrix& rho, std::size_t keep,
                            std::span<const std::size_t> dims);

/// Eigenvalues ascending; `vectors` holds the corresponding orthonormal
/// eigenvectors as columns.
struct HermitianEig {
    std::vector<double> values;
    ComplexMatrix vectors;
};

/// Cyclic complex Jacobi. Throws NonHermitianError if the input's
/// Hermiticity defect exceeds tol::hermitian.
HermitianEig hermitian_eig(const ComplexMatrix& h);

/// m = u * diag(d) * w^T with u, w orthogonal and d descending, d >= 0.
struct Svd4 {
    RealMatrix4 u;
    std::array<double, 4> d{};
    RealMatrix4 w;
};

/// One-sided Jacobi SVD of a real 4x4 matrix.
Svd4 svd4(const RealMatrix4& m);

struct Svd3 {
    Matrix3 u;
    std::array<double, 3> d{};
    Matrix3 w;
};

Svd3 svd3(const Matrix3& m);

struct Solve3 {
    Vector3 x{};
    double cond = 0.0;  // sigma_max / sigma_min of a
};

/// Solves a x = b by Gaussian elimination with partial pivoting.
/// Throws SingularSystemError (carrying estimated rank and cond) when
/// |det a| < tol::rank * sigma_max^3.
Solve3 solve3(const Matrix3& a, const Vector3& b);

double det3(const Matrix3& a);
double det4(const RealMatrix4& m);

}  // namespace qit
