#pragma once
// Quad-precision real scalar for Eigen (Boost.Multiprecision float128, needs libquadmath).

#include <boost/multiprecision/float128.hpp>

#include <Eigen/Core>

#include <limits>

namespace reflpos {
using float128 = boost::multiprecision::float128;
}

namespace Eigen {
template <>
struct NumTraits<reflpos::float128> : GenericNumTraits<reflpos::float128> {
  using Real = reflpos::float128;
  using NonInteger = Real;
  using Literal = Real;
  using Nested = Real;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return Real(1e-28); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return -(std::numeric_limits<Real>::max)(); }
  static int digits10() { return std::numeric_limits<Real>::digits10; }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
};
}  // namespace Eigen
