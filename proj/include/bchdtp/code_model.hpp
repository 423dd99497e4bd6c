// Code parameters and weight enumerators. A CodeSpec describes a binary
// primitive narrow-sense BCH code (possibly shortened); a WeightEnumerator
// carries the codeword weight distribution A_w, either exact or as the
// standard binomial approximation A_w ~ 2^(-bt) C(n, w).
#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bchdtp/numerics.hpp"

namespace bchdtp {

struct EnumeratorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// file could not be read as an enumerator at all
struct ParseError : EnumeratorError {
    using EnumeratorError::EnumeratorError;
};
// file parsed but its content is inconsistent (bad totals, weights below
// the design distance, mismatched code parameters, ...)
struct InvariantViolation : EnumeratorError {
    using EnumeratorError::EnumeratorError;
};

struct CodeSpec {
    int n = 0;       // block length (after shortening)
    int k = 0;       // information bits (after shortening)
    int d_des = 0;   // design distance
    int t = 0;       // guaranteed correction radius, (d_des - 1) / 2
    int b = 0;       // field degree of the parent code, parent n = 2^b - 1
    int n_short = 0; // bits removed from the parent code
    int d_min = 0;   // true minimum distance if known, else 0 (use d_des)

    int distance() const { return d_min > 0 ? d_min : d_des; }
    bool shortened() const { return n_short > 0; }
    double shortened_fraction() const {
        return static_cast<double>(n_short) / (n + n_short);
    }
};

// Full-length primitive BCH code with n = 2^b - 1. Throws
// std::invalid_argument when n is not of that form or parameters are absurd.
CodeSpec make_bch_spec(int n, int k, int d_des);

// Same code with n_short leading information bits forced to zero and removed.
// Requires 0 <= n_short < k.
CodeSpec shorten(const CodeSpec& parent, int n_short);

enum class EnumeratorMode { exact, binomial_approx };

struct WeightEnumerator {
    int n = 0;
    int k = 0;
    EnumeratorMode mode = EnumeratorMode::exact;
    std::map<int, Rational> weights;  // w -> A_w, absent means 0

    Rational at(int w) const {
        auto it = weights.find(w);
        return it == weights.end() ? Rational(0) : it->second;
    }
    template <class S>
    std::map<int, S> as() const;
};

template <>
inline std::map<int, Rational> WeightEnumerator::as<Rational>() const {
    return weights;
}
template <>
inline std::map<int, double> WeightEnumerator::as<double>() const {
    std::map<int, double> out;
    for (const auto& [w, a] : weights) out[w] = to_double(a);
    return out;
}

// A_0 = A_n = 1, A_w = 2^(-bt) C(n, w) for d_des <= w <= n - d_des, else 0.
// Defined only for the full-length code; throws std::invalid_argument when
// the spec is shortened.
WeightEnumerator approx_weight_enumerator(const CodeSpec& spec);

// Exact distribution by enumerating all 2^k codewords from generator matrix
// rows (each row packed little-endian into 64-bit blocks, bit i of block j is
// position 64 j + i). Practical for k <= 24.
WeightEnumerator exact_weight_enumerator_by_enumeration(
    const CodeSpec& spec, const std::vector<std::vector<std::uint64_t>>& rows);

// Generator matrix of the cyclic code with generator polynomial g (packed
// GF(2) coefficients, lowest degree in bit 0) and block length n <= 64:
// row i is x^i g(x).
std::vector<std::vector<std::uint64_t>> cyclic_generator_rows(std::uint64_t g,
                                                              int n);

// Reads the on-disk format: header lines "n <int>", "k <int>",
// "mode exact|binomial-approx", then one "w,A_w" line per weight (A_w as an
// integer or fraction). '#' starts a comment. Throws ParseError on malformed
// input and InvariantViolation on inconsistent content (for exact mode the
// weights must be integers summing to 2^k; A_0 must be 1).
WeightEnumerator load_weight_enumerator(const std::string& path);

// Same, additionally cross-checked against a code spec: n and k must match
// and no weight may fall strictly between 0 and d_des.
WeightEnumerator load_weight_enumerator(const std::string& path,
                                        const CodeSpec& spec);

void save_weight_enumerator(const std::string& path,
                            const WeightEnumerator& we);

}  // namespace bchdtp
