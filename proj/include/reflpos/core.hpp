#pragma once
// Shared types, error codes and the seeded generator.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace reflpos {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-10;

enum class ErrorCode {
  DimensionMismatch,
  SingularMetric,
  NotHermitian,
  NotPsd,
  OutsideDisk,
  IllConditionedBasis,
  NotReflectionSymmetric,
  NotReflectionPositive,
  IncompatibleRealizations,
  NotPositive,
  DegenerateProjection,
  NotContractive,
  NotDissipative,
  NotClassifiable,
  TruncationOverflow,
  InvalidSymbol,
  ParameterOutOfRange,
  QuadratureUnderresolved,
  InvalidMeasure,
  InsufficientSymbol,
  BoundaryAtom,
  DuplicateNodes,
  TruncationUnderresolved,
  NotAKernel,
  DegenerateGrid,
};

inline const char* to_string(ErrorCode c) {
  switch (c) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPsd: return "NotPsd";
    case ErrorCode::OutsideDisk: return "OutsideDisk";
    case ErrorCode::IllConditionedBasis: return "IllConditionedBasis";
    case ErrorCode::NotReflectionSymmetric: return "NotReflectionSymmetric";
    case ErrorCode::NotReflectionPositive: return "NotReflectionPositive";
    case ErrorCode::IncompatibleRealizations: return "IncompatibleRealizations";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::NotContractive: return "NotContractive";
    case ErrorCode::NotDissipative: return "NotDissipative";
    case ErrorCode::NotClassifiable: return "NotClassifiable";
    case ErrorCode::TruncationOverflow: return "TruncationOverflow";
    case ErrorCode::InvalidSymbol: return "InvalidSymbol";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorCode::QuadratureUnderresolved: return "QuadratureUnderresolved";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::InsufficientSymbol: return "InsufficientSymbol";
    case ErrorCode::BoundaryAtom: return "BoundaryAtom";
    case ErrorCode::DuplicateNodes: return "DuplicateNodes";
    case ErrorCode::TruncationUnderresolved: return "TruncationUnderresolved";
    case ErrorCode::NotAKernel: return "NotAKernel";
    case ErrorCode::DegenerateGrid: return "DegenerateGrid";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

/// Spectral (operator 2-) norm.
template <class Derived>
double opnorm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  if (a.cols() == 1 || a.rows() == 1) return a.norm();
  using Plain = typename Derived::PlainObject;
  Eigen::JacobiSVD<Plain> svd(a.eval());
  return svd.singularValues()(0);
}

/// Counter-based generator: output k is splitmix64(seed, k). Any stream can be
/// re-derived from (seed, stream id) without shared state.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return mix(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>((*this)() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double normal() {
    // Box-Muller keeps the stream layout independent of the standard library.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  cplx cnormal() { return {normal() / std::sqrt(2.0), normal() / std::sqrt(2.0)}; }

  Matrix cmatrix(Eigen::Index r, Eigen::Index c) {
    Matrix m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cnormal();
    return m;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace reflpos
