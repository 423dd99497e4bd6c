// Closed-form decoding transition probabilities for bounded-distance
// decoding: given u channel errors, the probability that the decoder
// succeeds, fails (residual stays at u), or miscorrects to a wrong codeword
// at Hamming distance r from the transmitted one. Works in exact rational
// arithmetic or in doubles; anchored variants weight each configuration by
// the probability that no anchored bit contradicts the chosen codeword.
#pragma once

#include <iosfwd>
#include <map>
#include <vector>

#include "bchdtp/channel_model.hpp"
#include "bchdtp/code_model.hpp"
#include "bchdtp/numerics.hpp"

namespace bchdtp {

// What counts as a success when the decoder lands on the transmitted word:
// anchor_gated charges the event that some flipped bit was anchored (such a
// frame can never settle on the transmitted word), `always` does not.
enum class SuccessAcceptance { anchor_gated, always };

template <class S>
struct BddRow {
    S p_succ{};
    S p_fail{};
    std::map<int, S> p_mc;  // wrong-codeword weight r -> probability

    S mc_total() const {
        S s{};
        for (const auto& [r, v] : p_mc) s += v;
        return s;
    }
    S total() const { return p_succ + p_fail + mc_total(); }
    // marginal residual-error distribution, keyed by 2r so that half-integer
    // residuals elsewhere share one key scheme; failure keeps r = u
    std::map<int, S> residual_twice(int u) const {
        std::map<int, S> out;
        if (p_succ != S{}) out[0] += p_succ;
        if (p_fail != S{}) out[2 * u] += p_fail;
        for (const auto& [r, v] : p_mc) out[2 * r] += v;
        return out;
    }
};

template <class S>
struct BddDtp {
    CodeSpec spec;
    EnumeratorMode enum_mode = EnumeratorMode::exact;
    AnchorProbs anchors{};
    SuccessAcceptance success = SuccessAcceptance::anchor_gated;
    std::vector<BddRow<S>> rows;  // index u = 0 .. u_max

    int u_max() const { return static_cast<int>(rows.size()) - 1; }
    const BddRow<S>& row(int u) const { return rows.at(u); }
};

// One conditional row P(. | U = u); pca/pwa are the anchor probabilities as
// the computation type (0 for the plain decoder).
template <class S>
BddRow<S> bdd_row(const CodeSpec& spec, const std::map<int, S>& A, int u,
                  const S& pca, const S& pwa,
                  SuccessAcceptance success = SuccessAcceptance::anchor_gated);

// Plain decoder, exact arithmetic.
BddDtp<Rational> bdd_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                         int u_max);

// Anchored decoder, double arithmetic.
BddDtp<double> bdd_a_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                         const AnchorProbs& anchors, int u_max,
                         SuccessAcceptance success = SuccessAcceptance::anchor_gated);

// Rows as "u,outcome,r,probability" CSV with a schema header line.
template <class S>
void write_bdd_csv(std::ostream& os, const BddDtp<S>& dtp);

}  // namespace bchdtp
