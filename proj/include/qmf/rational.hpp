#ifndef QMF_RATIONAL_HPP
#define QMF_RATIONAL_HPP

#include <gmpxx.h>
#include <cstdint>
#include <numeric>
#include <string>

#include "qmf/errors.hpp"

namespace qmf {

// Exact arbitrary-precision rational. mpq arithmetic keeps values reduced
// with positive denominator; raw (num, den) construction must canonicalize.
using Rational = mpq_class;
using Integer  = mpz_class;

inline Rational rat(long num, long den = 1)
{
    if (den == 0) fail(ErrorKind::DivisionByZero, "rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rat(const Integer& num, const Integer& den)
{
    if (den == 0) fail(ErrorKind::DivisionByZero, "rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Accepts "p", "p/q", with optional sign.
inline Rational rat_from_string(const std::string& s)
{
    Rational r;
    if (r.set_str(s, 10) != 0)
        fail(ErrorKind::Internal, "unparsable rational: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r)
{
    return r.get_str();
}

inline bool is_integer(const Rational& r)
{
    return r.get_den() == 1;
}

inline long lcm_long(long a, long b)
{
    return std::lcm(a, b);
}

} // namespace qmf

#endif
