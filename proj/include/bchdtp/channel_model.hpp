// Channel abstractions: BPSK over AWGN quantized to three levels by a
// threshold T (T = 0 degenerates to a binary symmetric channel), the induced
// error/erasure probabilities, anchor reliability probabilities from a second
// threshold T_a, and the joint distribution of error and erasure counts
// across a block.
#pragma once

#include <map>
#include <utility>

namespace bchdtp {

// Noise scale for BPSK at a given Eb/N0 (dB) and code rate.
double sigma_from_ebn0_db(double ebn0_db, double rate);

struct EaEChannelParams {
    double delta_c = 0.0;    // P(bit flips)
    double epsilon_c = 0.0;  // P(bit erased)
    double ok() const { return 1.0 - delta_c - epsilon_c; }
};

// Three-level quantization of y = +1 + noise with erasure zone [-T, T]:
// delta = Q((T+1)/sigma), epsilon = 1 - Q((T-1)/sigma) - delta.  T = 0 gives
// the hard-decision channel {Q(1/sigma), 0} directly.  Throws
// std::domain_error for sigma <= 0, T < 0, or an infeasible T (epsilon < 0).
EaEChannelParams quantize(double sigma, double T);

struct AnchorProbs {
    double p_ca = 0.0;  // P(correct bit is anchored)
    double p_wa = 0.0;  // P(flipped bit is anchored)
    bool any() const { return p_ca != 0.0 || p_wa != 0.0; }
};

// Anchor probabilities for the hard-decision channel: bits with |y| > T_a are
// anchored; conditioning is on the bit being correct resp. flipped.
// Requires T_a > 0.
AnchorProbs anchor_probs_bsc(double sigma, double T_a);

// Same for the three-level channel (conditioning excludes erasures).
// Requires T_a > T.
AnchorProbs anchor_probs_eae(double sigma, double T, double T_a);

// Joint distribution of (#errors u, #erasures e) over n independent uses.
// Keeps entries with probability >= tail; truncation keeps the stored total
// within ~n * tail of 1.
struct JointUE {
    int n = 0;
    std::map<std::pair<int, int>, double> p;
    double total() const;
};
JointUE joint_ue_distribution(int n, const EaEChannelParams& ch,
                              double tail = 1e-15);

// Smallest e_cap with P(E >= e_cap) < tail.
int default_e_max(int n, const EaEChannelParams& ch, double tail = 1e-15);

// Hard-decision bit error rate with no decoding, at the noise scale the coded
// system sees (the rate enters the Eb/N0 conversion).
double uncoded_ber(double ebn0_db, double rate);

}  // namespace bchdtp
