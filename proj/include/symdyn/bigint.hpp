#ifndef SYMDYN_BIGINT_HPP
#define SYMDYN_BIGINT_HPP

#include <boost/multiprecision/cpp_int.hpp>

namespace symdyn {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Natural log of a nonnegative big integer (-inf for zero).
double log_big(const BigInt& x);

}  // namespace symdyn

#endif
