// Post-decoding error-rate metrics: analytic BER/FER/miscorrection-BER over
// an Eb/N0 sweep built from the closed-form transition tables, grid search
// for decoder thresholds, and a frame-error model for a concatenated scheme
// of interleaved Reed-Solomon words over shortened BCH inner blocks.
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bchdtp/channel_model.hpp"
#include "bchdtp/code_model.hpp"
#include "bchdtp/decoder_sim.hpp"
#include "bchdtp/dtp_bdd.hpp"
#include "bchdtp/dtp_eaed.hpp"

namespace bchdtp {

struct MetricsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// channel mass fell on cells a finite transition table does not cover
struct CoverageError : MetricsError {
    using MetricsError::MetricsError;
};
// inconsistent metric / concatenation setup
struct MetricsConfigError : MetricsError {
    using MetricsError::MetricsError;
};

// Knobs for turning transition tables plus a channel into error rates.
// Defaults evaluate the model faithfully; the optional caps reproduce the
// cheaper conventions behind the published curves (see figure_mode_options).
struct CurveOptions {
    // drop channel cells with probability below this when building the joint
    // (u, e) distribution
    double joint_tail = 1e-20;
    // skip cells with more than this many erasures entirely
    std::optional<int> e_limit;
    // count only residuals with 2r <= cap toward the bit-error rate
    std::optional<int> residual_cap2;
    // how region M models the second decoder run when anchors are active
    RegionMKernel m_kernel = RegionMKernel::single_pattern;
    // largest channel mass allowed to fall outside a finite table before
    // ber_fer_from_dtp raises CoverageError (out-of-table cells are counted
    // as decoding failures up to this tolerance)
    double coverage_tol = 1e-9;
};

// Cap set reproducing the published computed curves for each decoder kind:
// error-only decoding caps counted residuals at the minimum distance, the
// erasure decoders cap the erasure count at 10, and the anchored erasure
// decoder additionally swaps the region-M kernel for the anchored row.
CurveOptions figure_mode_options(DecoderKind kind);

// One evaluated channel point.
struct SweepPoint {
    double ebn0_db = 0.0;
    double ber = 0.0;     // expected residual bit errors per code bit
    double fer = 0.0;     // probability the block leaves decoding in error
    double mc_ber = 0.0;  // miscorrection share of ber
    double T = 0.0;
    std::optional<double> Ta;
};

struct RateTriple {
    double ber = 0.0;
    double fer = 0.0;
    double mc_ber = 0.0;
};

// Error rates from a prebuilt erasure-decoder table against a joint error /
// erasure weight distribution. Channel mass on cells beyond the table is
// treated as certain failure; CoverageError if that mass exceeds
// opts.coverage_tol. MetricsConfigError if block lengths disagree.
template <class S>
RateTriple ber_fer_from_dtp(const EaedDtp<S>& dtp, const JointUE& joint,
                            const CurveOptions& opts = {});

// Same for an error-only table; the joint distribution must not carry
// erasure mass.
template <class S>
RateTriple ber_fer_from_dtp(const BddDtp<S>& dtp, const JointUE& joint,
                            const CurveOptions& opts = {});

// Evaluate one Eb/N0 point from scratch: derive the channel, anchor
// probabilities (for anchored kinds Ta is required, otherwise it must be
// absent), and the needed transition cells on demand. T must be 0 for the
// hard-decision kinds.
SweepPoint evaluate_point(const CodeSpec& spec, const WeightEnumerator& we,
                          DecoderKind kind, double ebn0_db, double T,
                          std::optional<double> Ta = std::nullopt,
                          const CurveOptions& opts = {});

// One SweepPoint per grid value. Cell tables are channel-independent for the
// un-anchored kinds and shared across the whole grid; anchored kinds get one
// table per point keyed exactly by (sigma, T, Ta).
std::vector<SweepPoint> sweep(const CodeSpec& spec, const WeightEnumerator& we,
                              DecoderKind kind,
                              const std::vector<double>& ebn0_grid, double T,
                              std::optional<double> Ta = std::nullopt,
                              const CurveOptions& opts = {});

// "# schema bchdtp.sweep.v1" header plus one ebn0_db,ber,fer,mc_ber,T,Ta row
// per point (Ta column empty for un-anchored kinds).
void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points,
                     DecoderKind kind);

struct ThresholdChoice {
    double T = 0.0;
    std::optional<double> Ta;
    double objective = 0.0;            // minimized value at the chosen point
    std::vector<SweepPoint> scanned;   // every feasible grid combination
};

// Grid-search argmin of BER at one reference Eb/N0; ties break toward the
// smaller T (then the smaller Ta). Anchored kinds require Ta_grid and skip
// infeasible combinations (Ta <= T); MetricsConfigError when nothing on the
// grid is feasible.
ThresholdChoice optimize_thresholds(
    const CodeSpec& spec, const WeightEnumerator& we, DecoderKind kind,
    double ebn0_ref, const std::vector<double>& T_grid,
    const std::optional<std::vector<double>>& Ta_grid = std::nullopt,
    const CurveOptions& opts = {});

// How residual bit errors of one inner block spread over outer symbols:
// uniform_spread throws each residual bit error at an independent uniform
// symbol of the block and thins the hit symbols over the interleaved words;
// same_word sends every hit symbol to one word (depth-1 interleaving).
enum class SymbolMapping { uniform_spread, same_word };

struct RsParams {
    int n_rs = 0;        // symbols per word
    int k_rs = 0;        // information symbols
    int t_rs = 0;        // symbol correction radius, (n_rs - k_rs) / 2
    int symbol_bits = 0; // bits per symbol
};

// Structure of the concatenated scheme: num_outer interleaved RS words over
// num_inner shortened BCH blocks, each block touching syms_per_block
// distinct symbols of every word.
struct ConcatConfig {
    RsParams outer{544, 514, 15, 10};
    CodeSpec inner;                 // shortened inner code
    int num_outer = 8;
    int num_inner = 64;
    int syms_per_block = 68;
    SymbolMapping mapping = SymbolMapping::uniform_spread;
    RegionMKernel m_kernel = RegionMKernel::single_pattern;
    double joint_tail = 1e-22;
    int strike_w_max = 96;          // residual weights above this saturate

    // info bits over transmitted bits of the whole scheme
    double rate() const;
    // parent of the inner code (shortening folds into anchors)
    CodeSpec inner_parent() const;
};

// Per-word symbol-error probability vector induced by w residual bit errors
// in one block: index m < t_rs + 1 is P(m symbols of the word in error),
// index t_rs + 1 collects P(more than t_rs). Built from a distinct-symbol
// occupancy walk plus per-word thinning (uniform_spread) or kept on one word
// (same_word).
class SymbolStrikeModel {
public:
    SymbolStrikeModel(const ConcatConfig& cfg);
    const std::vector<double>& pmf(int w) const;

private:
    int syms_;
    int words_;
    int w_max_;
    int cap_;  // t_rs + 1
    SymbolMapping mapping_;
    std::vector<std::vector<double>> occupancy_;  // [w][d] distinct symbols
    mutable std::map<int, std::vector<double>> cache_;
};

// Scheme frame-error rate from a prebuilt inner-parent table (shortened
// positions folded in as always-correct anchors) and the per-bit channel of
// the transmitted positions. Out-of-table channel mass counts as failure.
double concat_fer(const ConcatConfig& cfg, const EaedDtp<double>& dtp_inner,
                  const EaEChannelParams& channel);

// Full driver for one Eb/N0 point: derives the channel at the scheme rate,
// folds the shortened fraction into the anchor acceptance, builds inner
// cells on demand, and returns the scheme frame-error rate. T = 0 with no Ta
// gives the hard-decision inner decoder, T > 0 requires Ta.
double concat_fer_at(const ConcatConfig& cfg, double ebn0_db, double T,
                     std::optional<double> Ta);

// Grid-search argmin of the concatenated frame-error rate at one reference
// Eb/N0; ties break toward the smaller T, then the smaller Ta. Infeasible
// combinations (Ta <= T) are skipped.
ThresholdChoice optimize_thresholds_concat(const ConcatConfig& cfg,
                                           double ebn0_ref,
                                           const std::vector<double>& T_grid,
                                           const std::vector<double>& Ta_grid);

// "# schema bchdtp.concat.v1" header plus one ebn0_db,fer,T,Ta row per point.
void write_concat_csv(std::ostream& os, const std::vector<SweepPoint>& points);

}  // namespace bchdtp
