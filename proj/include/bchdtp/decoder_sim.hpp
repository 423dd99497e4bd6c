#pragma once
// Executable decoders and their validation harnesses.
//
// Three layers live here:
//   1. Finite-field machinery (FieldContext) and an algebraic bounded-distance
//      decoder: syndromes, Berlekamp-Massey, Chien search.  A locator is
//      accepted only when its degree equals the number of distinct in-range
//      roots; for binary BCH codes with a full 2t syndrome window this makes
//      the decoder semantically identical to nearest-codeword sphere decoding,
//      which the tests assert exhaustively on small codes.
//   2. The two-pattern erasure decoder and a Monte-Carlo frame simulator with
//      a counter-based RNG, reproducible bit-for-bit from (seed, frame).
//   3. Exhaustive rational-arithmetic oracles for tiny codes that replay every
//      error/erasure/fill configuration, used to validate the closed forms.
//
// Per-frame draw layout of the counter RNG (n = code length):
//   draws [0, 2n)    Gaussian noise, bit i uses the pair (2i, 2i+1)
//   draws [2n, 3n)   first-pattern fill coin for erased position i at 2n+i
//   draw  3n         candidate tie-break coin
//   draws [3n+1, 4n+1) failure-path erasure resolution coin for position i
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "bchdtp/code_model.hpp"
#include "bchdtp/dtp_eaed.hpp"

namespace bchdtp {

// GF(2^b) with log/antilog tables over a primitive polynomial.
class FieldContext {
  public:
    // Standard primitive polynomials for b in {3, 4, 8, 10}.
    static FieldContext make(int b);
    static FieldContext make(int b, uint32_t primitive_poly);

    int degree() const { return b_; }
    int order() const { return q1_; }  // multiplicative order, 2^b - 1
    uint32_t primitive_poly() const { return poly_; }

    uint16_t mul(uint16_t a, uint16_t b) const {
        if (a == 0 || b == 0) return 0;
        return alog_[log_[a] + log_[b]];
    }
    uint16_t inv(uint16_t a) const;
    // alpha^e for any integer exponent (reduced mod 2^b - 1).
    uint16_t pow_alpha(long e) const {
        long r = e % q1_;
        if (r < 0) r += q1_;
        return alog_[r];
    }
    uint16_t log(uint16_t a) const;

  private:
    FieldContext(int b, uint32_t poly);
    int b_;
    uint32_t poly_;
    int q1_;
    std::vector<uint16_t> log_;   // index 1..2^b-1
    std::vector<uint16_t> alog_;  // doubled: index 0..2(2^b-1)-1
};

// Carry-less product of GF(2)[x] polynomials packed as bitmasks.
uint64_t poly_mul_gf2(uint64_t a, uint64_t b);

// Generator polynomial of the narrow-sense code: least common multiple of the
// minimal polynomials of alpha^1..alpha^(d_des-1).  Requires n - k <= 63.
// Throws InvariantViolation if the resulting degree differs from n - k.
uint64_t bch_generator_poly(const CodeSpec& spec, const FieldContext& field);

enum class Symbol : uint8_t { zero = 0, one = 1, erased = 2 };

// Received word over {0, 1, ?} with an optional high-reliability position set.
struct TernaryWord {
    std::vector<Symbol> symbols;
    std::vector<uint8_t> anchor;  // empty, or 0/1 flag per position

    int length() const { return static_cast<int>(symbols.size()); }
    bool anchored() const;
    // Anchored positions must not be erased.
    void validate() const;
};

enum class OutcomeKind { success, failure, miscorrection };

// Decoder verdict under the all-zero-transmission convention: the estimate is
// exactly the residual error pattern, so success means estimate == 0.
struct DecodeOutcome {
    OutcomeKind kind;
    std::vector<uint8_t> estimate;

    int residual() const;               // Hamming weight of the estimate
    int residual_prefix(int k) const;   // weight over the first k positions
};

// Finds the <= t error positions of y (given as the support of its ones) if a
// codeword within distance t exists; returns false otherwise.
bool bdd_locate(const std::vector<int>& support, const CodeSpec& spec,
                const FieldContext& field, std::vector<int>& flips);

DecodeOutcome bdd_decode(const std::vector<uint8_t>& y, const CodeSpec& spec,
                         const FieldContext& field);

// Deterministic per-frame randomness: value(draw) = mix(mix(mix(seed) + frame)
// + draw) with the splitmix64 finalizer, so any draw is addressable without
// sequencing and frames are independent of thread layout.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t frame);
    uint64_t raw(uint64_t draw) const;
    bool coin(uint64_t draw) const { return raw(draw) & 1; }
    double uniform(uint64_t draw) const;         // open interval (0, 1)
    double gaussian(uint64_t pair_index) const;  // Box-Muller on draws 2i, 2i+1

  private:
    uint64_t h_;
};

// Two-pattern erasure decoder.  Erasures are filled with a random pattern and
// its complement, each filled word goes through bounded-distance decoding, and
// the two branches are merged: a lone surviving candidate wins, two distinct
// candidates are ranked by distance to the received word over the non-erased
// positions (ties broken by coin), and a joint failure resolves each erasure
// with an independent fair coin so the reported residual is realized.  When
// the word carries anchors, any candidate that flips an anchored position is
// demoted to failure before the merge.  More erasures than e_max fail
// immediately.
DecodeOutcome eaed_decode(const TernaryWord& y, const CodeSpec& spec,
                          const FieldContext& field, const CounterRng& rng,
                          int e_max = -1);

// Anchored variant; requires a present (possibly all-zero) anchor set.
DecodeOutcome eaed_a_decode(const TernaryWord& y, const CodeSpec& spec,
                            const FieldContext& field, const CounterRng& rng,
                            int e_max = -1);

enum class DecoderKind { bdd, bdd_anchor, eaed, eaed_anchor };

const char* to_string(DecoderKind kind);
std::optional<DecoderKind> decoder_from_string(const std::string& name);
bool decoder_uses_anchors(DecoderKind kind);
bool decoder_uses_erasures(DecoderKind kind);

struct SimConfig {
    CodeSpec spec;
    double ebn0_db = 0.0;
    double T = 0.0;                 // erasure threshold; 0 for the hard channel
    std::optional<double> Ta;       // anchor threshold, required when anchored
    DecoderKind decoder = DecoderKind::bdd;
    long frames = 0;
    uint64_t seed = 1;
    int e_max = -1;                 // cap on erasures per word; -1 = n
};

struct SimResult {
    long frames = 0;
    long bit_errors = 0;       // residual weight, all n positions
    long info_bit_errors = 0;  // residual weight over the first k positions
    long mc_bit_errors = 0;
    long mc_info_bit_errors = 0;
    long frame_errors = 0;
    long mc_frames = 0;
    double ber = 0.0;       // per information bit
    double ber_code = 0.0;  // per codeword bit
    double fer = 0.0;
    double mc_ber = 0.0;    // per information bit, miscorrections only
    double se_ber = 0.0;    // standard error of ber
    double se_fer = 0.0;
    uint64_t seed = 0;
};

// Transmits the all-zero codeword over quantized AWGN and tallies residual
// errors.  Deterministic given (seed, frame index).  Frames are error frames
// when the decoder verdict is not success; bit tallies use realized residuals.
SimResult simulate_frames(const SimConfig& config, const FieldContext& field);

void write_sim_csv(std::ostream& os, const SimConfig& config,
                   const SimResult& result);

// Exhaustive machinery for tiny codes (n <= 20): a full nearest-codeword
// sphere table and rational-arithmetic replays of the erasure decoder.
struct TinyCode {
    int n = 0, k = 0, t = 0, d_min = 0;
    uint32_t g = 0;
    std::vector<uint32_t> words;
    std::vector<int32_t> decode;  // sphere decoder: codeword mask or -1

    static TinyCode make(const CodeSpec& spec, const FieldContext& field);
};

// Error-only exhaustive tally over all weight-u patterns.
struct BruteBddRow {
    Rational p_succ, p_fail;
    std::map<int, Rational> p_mc;
};
BruteBddRow brute_bdd(const TinyCode& code, int u);

// Two candidate-acceptance couplings for the anchored decoder: 'independent'
// draws one acceptance event per distinct candidate (the idealization the
// closed forms use); 'shared' derives both from one per-position anchor
// realization and differs only in the joint-acceptance cross term.
enum class AcceptanceCoupling { independent, shared };

// Exhaustive per-fill-weight tallies for one (u, e) cell.
class BruteCell {
  public:
    explicit BruteCell(int e);
    // Exact cell conditioned on the first pattern having fill weight e1.
    EaedCell<Rational> cell(int e1) const;
    // Binomial mixture over fill weights: the quantity the closed form models.
    EaedCell<Rational> mixed() const;
    long configs(int e1) const { return by_fill_[e1].count; }

    struct Bucket {
        Rational succ, fail;
        std::map<int, Rational> mc;
        long count = 0;
    };
    std::vector<Bucket>& buckets() { return by_fill_; }

  private:
    int e_;
    int u_ = 0;
    std::vector<Bucket> by_fill_;
    friend BruteCell brute_eaed_cell(const TinyCode&, int, int, const Rational&,
                                     const Rational&, AcceptanceCoupling);
};

BruteCell brute_eaed_cell(const TinyCode& code, int u, int e,
                          const Rational& pca = Rational(0),
                          const Rational& pwa = Rational(0),
                          AcceptanceCoupling mode =
                              AcceptanceCoupling::independent);

// Decode only the first filled pattern (fill weight e1), acceptance-gated;
// returns ({r: mc}, mc_total).  Requires u + e1 > t.
std::pair<std::map<int, Rational>, Rational> brute_single_pattern(
    const TinyCode& code, int u, int e, int e1, const Rational& pca,
    const Rational& pwa);

// Exact transition table from exhaustive replay, mixed over fills.  Each cell
// must satisfy C(n,u) * C(n-u,e) * 2^e <= 1e8.
EaedDtp<Rational> brute_force_dtp(const TinyCode& code, const CodeSpec& spec,
                                  int u_max, int e_max,
                                  const Rational& pca = Rational(0),
                                  const Rational& pwa = Rational(0));

}  // namespace bchdtp
