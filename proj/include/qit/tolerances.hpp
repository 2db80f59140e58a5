#pragma once

namespace qit::tol {

// One pinned constant per numerical contract. Absolute unless noted.

inline constexpr double hermitian = 1e-9;  // max-entry Hermiticity / trace defect
inline constexpr double eig = 1e-10;       // eigendecomposition residual
inline constexpr double svd = 1e-10;       // SVD residual and orthogonality defect
inline constexpr double solve = 1e-9;      // linear-solve residual
inline constexpr double rank = 1e-8;       // rank cutoff, relative to largest singular value
inline constexpr double psd = 1e-8;        // most negative eigenvalue tolerated in a state
inline constexpr double opt = 1e-4;        // optimizer accuracy for entropic quantities, in bits

}  // namespace qit::tol
