#include "bchdtp/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace bchdtp {

BigCount binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n) return BigCount(0);
    BigCount r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n),
                 static_cast<unsigned long>(k));
    return r;
}

double binomial_d(long n, long k) {
    if (n < 0 || k < 0 || k > n) return 0.0;
    const BigCount b = binomial(n, k);
    // mpz_get_d truncates toward zero; values wider than the mantissa go
    // through a decimal string so they round to nearest instead
    if (mpz_sizeinbase(b.get_mpz_t(), 2) <= 53) return b.get_d();
    try {
        return std::stod(b.get_str());
    } catch (const std::out_of_range&) {
        return std::numeric_limits<double>::infinity();
    }
}

double log_binomial(long n, long k) {
    if (n < 0 || k < 0 || k > n)
        throw std::domain_error("log_binomial: k outside [0, n]");
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

double q_function(double x) {
    // 0.5 erfc(x / sqrt(2)). Double erfc underflows to 0 near x ~ 38.6/sqrt(2)
    // of its own argument, i.e. for x beyond roughly 38.5 here; long double
    // extends the usable tail to the deepest values a double can hold.
    if (std::abs(x) <= 30.0) return 0.5 * std::erfc(x / 1.4142135623730951);
    long double v = 0.5L * erfcl(static_cast<long double>(x) *
                                 0.70710678118654752440L);
    return static_cast<double>(v);
}

double stable_sum(const std::vector<double>& xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

Rational make_ratio(const BigCount& num, const BigCount& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

}  // namespace bchdtp
