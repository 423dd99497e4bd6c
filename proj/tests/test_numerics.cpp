#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "bchdtp/numerics.hpp"

using namespace bchdtp;

TEST_CASE("binomial exact values and out-of-range behavior") {
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(255, 5) == BigCount("8637487551"));
    CHECK(binomial(255, 0) == 1);
    CHECK(binomial(255, 255) == 1);
    // out-of-range arguments give 0 rather than throwing
    CHECK(binomial(5, 6) == 0);
    CHECK(binomial(5, -1) == 0);
    CHECK(binomial(-3, 0) == 0);
}

TEST_CASE("binomial satisfies the Pascal identity on random arguments") {
    std::mt19937 gen(12345);
    std::uniform_int_distribution<int> ndist(1, 300);
    for (int trial = 0; trial < 200; ++trial) {
        int n = ndist(gen);
        std::uniform_int_distribution<int> kdist(0, n);
        int k = kdist(gen);
        CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
        CHECK(binomial(n, k) == binomial(n, n - k));
    }
}

TEST_CASE("binomial_d rounds the exact value to nearest") {
    CHECK(binomial_d(255, 5) == 8637487551.0);
    CHECK(binomial_d(10, 3) == 120.0);
    CHECK(binomial_d(5, 9) == 0.0);
    // wide values round to nearest, unlike the truncating mpz conversion;
    // the correctly rounded double is never below the truncated one and at
    // most one step above it
    for (auto [n, k] : {std::pair<long, long>{1023, 511}, {700, 350},
                        {255, 127}, {64, 13}}) {
        const double truncated = binomial(n, k).get_d();
        const double rounded = binomial_d(n, k);
        CHECK(rounded >= truncated);
        CHECK(rounded <= std::nextafter(truncated, HUGE_VAL));
        // round-trip through the exact integer stays within one part in 2^52
        Rational err = make_ratio(BigCount(Rational(rounded).get_num()),
                                  binomial(n, k)) -
                       1;
        CHECK(to_double(err) == doctest::Approx(0.0).epsilon(1e-15));
    }
    // C(1023, 511) is close to the double range; C(2100, 1050) is beyond it
    CHECK(std::isinf(binomial_d(2100, 1050)));
}

TEST_CASE("log_binomial agrees with the exact logarithm") {
    // reference logarithm from the exact integer via mantissa + exponent
    auto ref_log = [](long n, long k) {
        BigCount c = binomial(n, k);
        long exp2 = 0;
        double m = mpz_get_d_2exp(&exp2, c.get_mpz_t());
        return std::log(m) + static_cast<double>(exp2) * 0.6931471805599453;
    };
    std::mt19937 gen(777);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<long> ndist(1, 4096);
        long n = ndist(gen);
        std::uniform_int_distribution<long> kdist(0, n);
        long k = kdist(gen);
        double got = log_binomial(n, k);
        double want = ref_log(n, k);
        if (want == 0.0) {
            CHECK(std::abs(got) < 1e-12);
        } else {
            CHECK(std::abs(got - want) / std::abs(want) < 1e-12);
        }
    }
    CHECK_THROWS_AS(log_binomial(5, 6), std::domain_error);
    CHECK_THROWS_AS(log_binomial(5, -1), std::domain_error);
}

TEST_CASE("exp(log_binomial) tracks binomial_d") {
    for (long n : {16L, 255L, 1023L, 4096L}) {
        for (long k = 0; k <= n; k += std::max(1L, n / 17)) {
            double lb = log_binomial(n, k);
            if (lb > 700.0) continue;  // beyond double range, both sides overflow
            double a = std::exp(lb);
            double b = binomial_d(n, k);
            CHECK(a == doctest::Approx(b).epsilon(1e-10));
        }
    }
}

TEST_CASE("q_function reference values") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(q_function(0.5) == doctest::Approx(0.3085375387259869).epsilon(1e-12));
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-12));
    CHECK(q_function(2.0) == doctest::Approx(0.022750131948179207).epsilon(1e-12));
    CHECK(q_function(5.0) == doctest::Approx(2.8665157187919391e-7).epsilon(1e-12));
    CHECK(q_function(10.0) == doctest::Approx(7.619853024160526e-24).epsilon(1e-12));
    CHECK(q_function(20.0) == doctest::Approx(2.7536241186062337e-89).epsilon(1e-12));
    CHECK(q_function(30.0) == doctest::Approx(4.906713927148187e-198).epsilon(1e-12));
    CHECK(q_function(37.0) == doctest::Approx(5.725571222524577e-300).epsilon(1e-12));
    CHECK(q_function(-3.0) == doctest::Approx(0.9986501019683699).epsilon(1e-12));
}

TEST_CASE("q_function is strictly decreasing and complementary") {
    // double saturation limits where strict decrease is observable: below
    // x ~ -8.2 the value rounds to exactly 1, beyond x ~ 38.5 the true tail
    // falls under the smallest positive double
    double prev = 2.0;
    for (double x = -8.0; x <= 37.0; x += 0.25) {
        double v = q_function(x);
        CHECK(v < prev);
        CHECK(v > 0.0);
        prev = v;
    }
    prev = 2.0;
    for (double x = -40.0; x <= 37.0; x += 0.25) {
        double v = q_function(x);
        CHECK(v <= prev);
        prev = v;
    }
    for (double x = 0.0; x <= 10.0; x += 0.5) {
        CHECK(std::abs(q_function(x) + q_function(-x) - 1.0) < 1e-14);
    }
}

TEST_CASE("stable_sum recovers catastrophic cancellation") {
    CHECK(stable_sum({1.0, 1e100, 1.0, -1e100}) == 2.0);
    // many small terms against one large one
    std::vector<double> xs(100001, 1e-12);
    xs[0] = 1.0;
    double got = stable_sum(xs);
    CHECK(got == doctest::Approx(1.0 + 1e-7).epsilon(1e-15));
    CHECK(stable_sum({}) == 0.0);
}

TEST_CASE("make_ratio canonicalizes") {
    Rational half = make_ratio(2, 4);
    CHECK(half == Rational(1, 2));
    CHECK(half.get_num() == 1);
    CHECK(half.get_den() == 2);
    CHECK(to_double(half) == 0.5);
}

TEST_CASE("spow matches repeated multiplication") {
    CHECK(spow(Rational(3, 4), 3) == Rational(27, 64));
    CHECK(spow(Rational(1, 2), 0) == Rational(1));
    CHECK(spow(0.5, 10) == doctest::Approx(std::pow(0.5, 10)).epsilon(1e-15));
    CHECK(spow(0.97, 57) == doctest::Approx(std::pow(0.97, 57)).epsilon(1e-14));
}
