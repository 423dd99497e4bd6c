// Exact-count and floating-point numeric primitives shared by the whole
// library: arbitrary-precision integers and rationals (GMP), binomial
// coefficients in three flavors, the Gaussian tail function, and a
// compensated summation helper.
#pragma once

#include <gmpxx.h>

#include <vector>

namespace bchdtp {

using BigCount = mpz_class;  // exact nonnegative configuration counts
using Rational = mpq_class;  // exact probabilities

// C(n, k). Arguments outside 0 <= k <= n give 0, so sums over flip
// configurations can index freely without range guards at every call site.
BigCount binomial(long n, long k);

// C(n, k) as a double. Computed exactly first, then converted once, so the
// only error is the final rounding (at most 1 ulp of truncation).
double binomial_d(long n, long k);

// ln C(n, k). Throws std::domain_error when k is outside [0, n].
double log_binomial(long n, long k);

// Gaussian tail Q(x) = P(N(0,1) > x).
double q_function(double x);

// Neumaier-compensated sum, taken in the order given.
double stable_sum(const std::vector<double>& xs);

// num/den reduced to lowest terms (mpq_class's fraction constructor does not
// canonicalize on its own).
Rational make_ratio(const BigCount& num, const BigCount& den);

double to_double(const Rational& q);

// BigCount -> computation type: exact for Rational, one rounding for double.
template <class S>
S from_count(const BigCount& c);
template <>
inline Rational from_count<Rational>(const BigCount& c) {
    return Rational(c);
}
template <>
inline double from_count<double>(const BigCount& c) {
    return c.get_d();
}

// Integer power with an exact type (exponent >= 0).
template <class S>
S spow(S base, long n) {
    S acc{1};
    for (long i = 0; i < n; ++i) acc *= base;
    return acc;
}
template <>
inline double spow<double>(double base, long n) {
    double r = 1.0, b = base;
    for (long e = n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

}  // namespace bchdtp
