// Closed-form decoding transition probabilities for error-and-erasure
// decoding. Conditioned on u errors and e erasures, the decoder runs twice
// with the erasures filled by complementary patterns (e1 ones in the first,
// e - e1 in the second), keeps the candidates each run accepts, and picks the
// one closer to the received word on the non-erased positions (ties by fair
// coin; no candidate at all resolves each erasure by an independent coin,
// leaving a possibly half-integer expected residual). Anchored variants
// weight acceptance by the probability that no anchored bit contradicts the
// candidate.
//
// Per fill split e1 the analysis falls into one of three regimes:
//   L: the first pattern is within the guaranteed radius (its run returns
//      the transmitted word) while the second may land on a wrong codeword;
//      counted exactly.
//   R: the mirror image (second pattern light).
//   M: neither pattern is guaranteed; the two runs are treated as
//      independent, the one approximation in the model.
// Cells with 2u + e below the code distance short-circuit: both runs' spheres
// cannot both contain codewords, so the outcome splits exactly.
#pragma once

#include <iosfwd>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "bchdtp/dtp_bdd.hpp"

namespace bchdtp {

// residual error counts can be half-integers (unresolved erasures filled by
// coin flips contribute 1/2 each); stored as twice the value
struct HalfInt {
    int twice = 0;
    bool is_integer() const { return (twice & 1) == 0; }
    double value() const { return 0.5 * twice; }
    auto operator<=>(const HalfInt&) const = default;
};

enum class FillRegion { L, M, R };

// Regime of one fill split; the short-circuit regime is a property of the
// whole cell (2u + e < d) and is not part of this classification.
FillRegion classify_region(int u, int e, int e1, int t);

// P(E1 = e1) = C(e, e1) / 2^e for the uniform random fill.
std::vector<Rational> e1_distribution(int e);

// Exact configuration counts for a region-L split (first pattern light).
// Each configuration is classified by who wins the distance contest when
// both decoder runs produce their candidate.
struct RegionCounts {
    std::map<int, BigCount> L11;  // wrong codeword (weight r) wins
    std::map<int, BigCount> L12;  // transmitted word wins
    std::map<int, BigCount> L13;  // distance tie, fair coin
    BigCount L2{0};               // heavy pattern yields no candidate
    BigCount theta{0};            // all of C(n,u) C(n-u,e) C(e,e1)
    BigCount classified_total() const;
    bool consistent() const;  // classified + L2 == theta
};
RegionCounts region_L_counts(const CodeSpec& spec, const WeightEnumerator& we,
                             int u, int e, int e1);

// One term of the region-L count: configurations with a flips toward and b
// flips away from the wrong codeword, lambda fill-ones of the first pattern
// off its support, gamma fill-ones of the heavy pattern inside the b flips.
BigCount v_count(int r, int u, int e, int e1, int a, int b, int lambda,
                 int gamma, const CodeSpec& spec,
                 const std::map<int, BigCount>& A);

template <class S>
struct EaedCell {
    int u = 0;
    int e = 0;
    S p_succ{};
    S p_fail{};
    std::map<int, S> p_mc;  // integer residual r -> probability

    HalfInt fail_residual() const { return HalfInt{2 * u + e}; }
    S mc_total() const {
        S s{};
        for (const auto& [r, v] : p_mc) s += v;
        return s;
    }
    S total() const { return p_succ + p_fail + mc_total(); }
    std::map<int, S> residual_twice() const {
        std::map<int, S> out;
        if (p_succ != S{}) out[0] += p_succ;
        if (p_fail != S{}) out[2 * u + e] += p_fail;
        for (const auto& [r, v] : p_mc) out[2 * r] += v;
        return out;
    }
};

// How region M models the second decoder run when anchors are active:
// single_pattern keeps per-configuration anchor acceptance (slower, default),
// anchored_row reuses the anchored error-only row at the fill weight.
enum class RegionMKernel { single_pattern, anchored_row };

template <class S>
struct DtpOptions {
    S pca{};  // anchor probability for a correct bit
    S pwa{};  // anchor probability for a flipped bit
    SuccessAcceptance success = SuccessAcceptance::anchor_gated;
    RegionMKernel m_kernel = RegionMKernel::single_pattern;
};

// The computation engine. Caches error-only rows, single-pattern analyses,
// and finished cells; S is Rational for exact arithmetic or double.
template <class S>
class DtpCalculator {
public:
    DtpCalculator(const CodeSpec& spec, const WeightEnumerator& we,
                  DtpOptions<S> opt = {});

    const CodeSpec& spec() const { return spec_; }
    const DtpOptions<S>& options() const { return opt_; }
    EnumeratorMode enum_mode() const { return mode_; }
    bool anchored() const { return opt_.pca != S{} || opt_.pwa != S{}; }

    // Error-only row at u flips; with_anchors = false forces the plain row
    // (used by the unanchored region-M kernel inside an anchored engine).
    const BddRow<S>& bdd_row_for(int u, bool with_anchors);

    // Miscorrection profile of one decoder run whose filled word has weight
    // u + f (must exceed t): map r -> probability plus its total.
    const std::pair<std::map<int, S>, S>& single_pattern(int u, int e, int f);

    // Exact split analysis when the first pattern is light: u + e1 <= t and
    // u + (e - e1) > t.
    EaedCell<S> region_L(int u, int e, int e1);

    // Independent-runs approximation for one split.
    EaedCell<S> region_M(int u, int e, int e1);

    // One fill split, dispatched to the applicable regime.
    EaedCell<S> fill_cell(int u, int e, int e1);

    // Full cell: binomial mixture over the fill split (cached).
    const EaedCell<S>& cell(int u, int e);

private:
    CodeSpec spec_;
    EnumeratorMode mode_;
    DtpOptions<S> opt_;
    std::map<int, S> A_;
    std::map<std::pair<int, bool>, BddRow<S>> bdd_cache_;
    std::map<std::tuple<int, int, int>, std::pair<std::map<int, S>, S>> sp_cache_;
    std::map<std::pair<int, int>, EaedCell<S>> cell_cache_;
};

extern template class DtpCalculator<Rational>;
extern template class DtpCalculator<double>;

template <class S>
struct EaedDtp {
    CodeSpec spec;
    EnumeratorMode enum_mode = EnumeratorMode::exact;
    AnchorProbs anchors{};
    SuccessAcceptance success = SuccessAcceptance::anchor_gated;
    RegionMKernel m_kernel = RegionMKernel::single_pattern;
    int u_max = 0;
    int e_max = 0;  // grid bound; larger e is treated as certain failure
    std::map<std::pair<int, int>, EaedCell<S>> cells;

    const EaedCell<S>& cell(int u, int e) const { return cells.at({u, e}); }
    // beyond the grid's erasure bound the decoder is modeled as failing
    EaedCell<S> cell_or_truncated(int u, int e) const {
        auto it = cells.find({u, e});
        if (it != cells.end()) return it->second;
        EaedCell<S> out;
        out.u = u;
        out.e = e;
        out.p_fail = S(1);
        return out;
    }
};

// Plain decoder, exact arithmetic.
EaedDtp<Rational> eaed_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                           int e_max, int u_max);

// Anchored decoder, double arithmetic.
EaedDtp<double> eaed_a_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                           const AnchorProbs& anchors, int e_max, int u_max,
                           SuccessAcceptance success = SuccessAcceptance::anchor_gated,
                           RegionMKernel m_kernel = RegionMKernel::single_pattern);

// Standalone exact region-L cell (plain decoder).
EaedCell<Rational> region_L_dtp(const CodeSpec& spec,
                                const WeightEnumerator& we, int u, int e,
                                int e1);

// Standalone region-M cell (plain decoder) combining two rows of a
// precomputed error-only grid.
EaedCell<Rational> region_M_dtp(int u, int e, int e1,
                                const CodeSpec& spec,
                                const BddDtp<Rational>& bdd);

// Standalone anchored single-pattern profile.
std::pair<std::map<int, double>, double> single_pattern_anchored_dtp(
    int u, int e, int f, const CodeSpec& spec, const WeightEnumerator& we,
    const AnchorProbs& anchors);

// "u,e,outcome,2r,probability,region_flags" CSV with a schema header.
template <class S>
void write_eaed_csv(std::ostream& os, const EaedDtp<S>& dtp);

// JSON sidecar describing how the grid was produced.
template <class S>
void write_eaed_meta_json(std::ostream& os, const EaedDtp<S>& dtp);

}  // namespace bchdtp
