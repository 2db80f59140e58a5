#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace qit {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A parameter is outside its mathematical domain (e.g. mixing weight not in [0,1]).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// Matrix or state dimensions do not match what an operation requires.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// A matrix that must be Hermitian is not, beyond tolerance.
class NonHermitianError : public Error {
  public:
    NonHermitianError(const std::string& what, double defect)
        : Error(what), defect_(defect) {}

    /// Largest entry of |A - A^dagger|.
    double defect() const { return defect_; }

  private:
    double defect_ = 0.0;
};

/// A state fails a physicality requirement (trace, positivity, Bloch ball).
class UnphysicalStateError : public Error {
  public:
    explicit UnphysicalStateError(const std::string& what) : Error(what) {}
    UnphysicalStateError(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue_(min_eigenvalue) {}

    /// Most negative eigenvalue found, when positivity was the failure.
    std::optional<double> min_eigenvalue() const { return min_eigenvalue_; }

  private:
    std::optional<double> min_eigenvalue_;
};

/// A linear system is singular to working precision.
class SingularSystemError : public Error {
  public:
    SingularSystemError(const std::string& what, int estimated_rank, double cond)
        : Error(what), estimated_rank_(estimated_rank), cond_(cond) {}

    int estimated_rank() const { return estimated_rank_; }

    /// sigma_max / sigma_min; infinite when sigma_min underflows to zero.
    double cond() const { return cond_; }

  private:
    int estimated_rank_ = 0;
    double cond_ = 0.0;
};

/// A conditional state is requested for an outcome of (numerically) zero probability.
class UndefinedCollapseError : public Error {
  public:
    UndefinedCollapseError(const std::string& what, double probability)
        : Error(what), probability_(probability) {}

    double probability() const { return probability_; }

  private:
    double probability_ = 0.0;
};

/// Malformed input text (JSON syntax or schema violations).
class FormatError : public Error {
  public:
    using Error::Error;
};

}  // namespace qit
