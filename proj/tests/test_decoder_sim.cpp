#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>
#include <numeric>
#include <random>
#include <sstream>

#include "bchdtp/channel_model.hpp"
#include "bchdtp/decoder_sim.hpp"
#include "bchdtp/dtp_bdd.hpp"
#include "bchdtp/dtp_eaed.hpp"

using namespace bchdtp;

namespace {

const CodeSpec& spec_743() {
    static CodeSpec s = make_bch_spec(7, 4, 3);
    return s;
}
const CodeSpec& spec_1575() {
    static CodeSpec s = make_bch_spec(15, 7, 5);
    return s;
}
const CodeSpec& spec_255() {
    static CodeSpec s = make_bch_spec(255, 239, 5);
    return s;
}
const FieldContext& f3() {
    static FieldContext f = FieldContext::make(3);
    return f;
}
const FieldContext& f4() {
    static FieldContext f = FieldContext::make(4);
    return f;
}
const FieldContext& f8() {
    static FieldContext f = FieldContext::make(8);
    return f;
}
const TinyCode& tiny_743() {
    static TinyCode c = TinyCode::make(spec_743(), f3());
    return c;
}
const TinyCode& tiny_1575() {
    static TinyCode c = TinyCode::make(spec_1575(), f4());
    return c;
}
const WeightEnumerator& we_1575() {
    static WeightEnumerator we =
        load_weight_enumerator("data/we_15_7_5.txt", spec_1575());
    return we;
}

std::vector<uint8_t> word_from_mask(uint32_t mask, int n) {
    std::vector<uint8_t> w(n, 0);
    for (int i = 0; i < n; ++i) w[i] = (mask >> i) & 1;
    return w;
}

// x^n mod g over GF(2), g given as a bitmask with leading term set
uint64_t x_pow_mod(int n, uint64_t g) {
    int deg = 63 - std::countl_zero(g);
    uint64_t rem = 1;
    for (int i = 0; i < n; ++i) {
        rem <<= 1;
        if ((rem >> deg) & 1) rem ^= g;
    }
    return rem;
}

}  // namespace

TEST_CASE("field tables are consistent") {
    for (int b : {3, 4, 8, 10}) {
        FieldContext f = FieldContext::make(b);
        CHECK(f.order() == (1 << b) - 1);
        for (int a = 1; a < (1 << b); ++a) {
            auto x = static_cast<uint16_t>(a);
            CHECK(f.pow_alpha(f.log(x)) == x);
            CHECK(f.mul(x, f.inv(x)) == 1);
        }
        CHECK(f.pow_alpha(f.order()) == 1);
        CHECK(f.mul(f.pow_alpha(-1), f.pow_alpha(1)) == 1);
        CHECK(f.mul(0, 5) == 0);
    }
    // x^2 + x + 1 is irreducible but the check demands a primitive degree-b poly
    CHECK_THROWS_AS(FieldContext::make(4, 0x1F), std::invalid_argument);
    CHECK_THROWS_AS(FieldContext::make(5), std::invalid_argument);
}

TEST_CASE("generator polynomials") {
    CHECK(poly_mul_gf2(0b10011, 0b11111) == 0x1D1);
    CHECK(bch_generator_poly(spec_743(), f3()) == 0xB);
    CHECK(bch_generator_poly(spec_1575(), f4()) == 0x1D1);
    CHECK(bch_generator_poly(make_bch_spec(15, 11, 3), f4()) == 0x13);

    uint64_t g255 = bch_generator_poly(spec_255(), f8());
    CHECK(63 - std::countl_zero(g255) == 16);
    CHECK(x_pow_mod(255, g255) == 1);  // g | x^255 + 1

    FieldContext f10 = FieldContext::make(10);
    uint64_t g1023 = bch_generator_poly(make_bch_spec(1023, 1003, 5), f10);
    CHECK(63 - std::countl_zero(g1023) == 20);
    CHECK(x_pow_mod(1023, g1023) == 1);
}

TEST_CASE("tiny-code sphere tables") {
    const TinyCode& c7 = tiny_743();
    CHECK(c7.words.size() == 16);
    CHECK(c7.g == 0xB);
    int undecodable = 0;
    for (int32_t d : c7.decode) undecodable += (d < 0);
    CHECK(undecodable == 0);  // perfect code

    const TinyCode& c15 = tiny_1575();
    CHECK(c15.words.size() == 128);
    int fails = 0;
    for (int32_t d : c15.decode) fails += (d < 0);
    // 2^15 minus the 128 disjoint radius-2 spheres
    CHECK(fails == (1 << 15) - 128 * (1 + 15 + 105));
    int min_w = 99;
    for (uint32_t w : c15.words)
        if (w) min_w = std::min(min_w, std::popcount(w));
    CHECK(min_w == 5);
}

TEST_CASE("algebraic decoder equals sphere decoding, exhaustively") {
    const TinyCode& c15 = tiny_1575();
    std::vector<int> supp, flips;
    for (uint32_t yw = 0; yw < (uint32_t{1} << 15); ++yw) {
        supp.clear();
        for (int i = 0; i < 15; ++i)
            if ((yw >> i) & 1) supp.push_back(i);
        bool ok = bdd_locate(supp, spec_1575(), f4(), flips);
        int32_t ref = c15.decode[yw];
        if (!ok) {
            REQUIRE(ref < 0);
        } else {
            uint32_t cw = yw;
            for (int i : flips) cw ^= uint32_t{1} << i;
            REQUIRE(ref >= 0);
            REQUIRE(cw == static_cast<uint32_t>(ref));
        }
    }
    const TinyCode& c7 = tiny_743();
    for (uint32_t yw = 0; yw < (uint32_t{1} << 7); ++yw) {
        supp.clear();
        for (int i = 0; i < 7; ++i)
            if ((yw >> i) & 1) supp.push_back(i);
        bool ok = bdd_locate(supp, spec_743(), f3(), flips);
        REQUIRE(ok);  // perfect code decodes everything
        uint32_t cw = yw;
        for (int i : flips) cw ^= uint32_t{1} << i;
        CHECK(cw == static_cast<uint32_t>(c7.decode[yw]));
    }
}

TEST_CASE("bounded-distance decoding on the long code") {
    std::mt19937 gen(42);
    std::vector<int> pos(255);
    std::iota(pos.begin(), pos.end(), 0);
    for (int u = 0; u <= 2; ++u) {
        for (int trial = 0; trial < 50; ++trial) {
            std::shuffle(pos.begin(), pos.end(), gen);
            std::vector<uint8_t> y(255, 0);
            for (int i = 0; i < u; ++i) y[pos[i]] = 1;
            DecodeOutcome out = bdd_decode(y, spec_255(), f8());
            CHECK(out.kind == OutcomeKind::success);
            CHECK(out.residual() == 0);
        }
    }
    int mc_seen = 0, fail_seen = 0;
    std::vector<int> flips;
    for (int trial = 0; trial < 300; ++trial) {
        std::shuffle(pos.begin(), pos.end(), gen);
        std::vector<uint8_t> y(255, 0);
        for (int i = 0; i < 3; ++i) y[pos[i]] = 1;
        DecodeOutcome out = bdd_decode(y, spec_255(), f8());
        CHECK(out.kind != OutcomeKind::success);
        if (out.kind == OutcomeKind::miscorrection) {
            ++mc_seen;
            // the estimate differs from y in at most t places and is a codeword
            int d = 0;
            std::vector<int> supp;
            for (int i = 0; i < 255; ++i) {
                d += out.estimate[i] != y[i];
                if (out.estimate[i]) supp.push_back(i);
            }
            CHECK(d <= 2);
            CHECK(bdd_locate(supp, spec_255(), f8(), flips));
            CHECK(flips.empty());
        } else {
            ++fail_seen;
        }
    }
    // closed form says roughly half of weight-3 patterns miscorrect
    CHECK(mc_seen > 50);
    CHECK(fail_seen > 50);
}

TEST_CASE("ternary word validation") {
    TernaryWord w;
    w.symbols = {Symbol::zero, Symbol::erased, Symbol::one};
    w.validate();
    w.anchor = {1, 0, 0};
    w.validate();
    w.anchor = {0, 1, 0};
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
    w.anchor = {0, 1};
    CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}

TEST_CASE("counter rng") {
    CounterRng a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    CHECK(a.raw(0) == b.raw(0));
    CHECK(a.raw(5) == b.raw(5));
    CHECK(a.raw(0) != c.raw(0));
    CHECK(a.raw(0) != d.raw(0));
    double mean = 0, var = 0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        double u = a.uniform(i);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        double g = CounterRng(11, i).gaussian(0);
        mean += g;
        var += g * g;
    }
    mean /= N;
    var = var / N - mean * mean;
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("erasure decoding without erasures is plain decoding") {
    std::mt19937 gen(9);
    CounterRng rng(1, 0);
    for (int trial = 0; trial < 300; ++trial) {
        uint32_t mask = gen() & 0x7FFF;
        std::vector<uint8_t> y = word_from_mask(mask, 15);
        TernaryWord w;
        for (uint8_t bit : y)
            w.symbols.push_back(bit ? Symbol::one : Symbol::zero);
        DecodeOutcome a = eaed_decode(w, spec_1575(), f4(), rng);
        DecodeOutcome b = bdd_decode(y, spec_1575(), f4());
        CHECK(a.kind == b.kind);
        CHECK(a.estimate == b.estimate);
    }
}

TEST_CASE("few enough errors and erasures always decode") {
    // 2u + e below the distance: success for every filling pattern
    std::mt19937 gen(13);
    std::vector<int> pos(15);
    std::iota(pos.begin(), pos.end(), 0);
    for (auto [u, e] : std::vector<std::pair<int, int>>{
             {0, 4}, {1, 2}, {2, 0}, {1, 1}, {0, 2}}) {
        for (int trial = 0; trial < 60; ++trial) {
            std::shuffle(pos.begin(), pos.end(), gen);
            TernaryWord w;
            w.symbols.assign(15, Symbol::zero);
            for (int i = 0; i < u; ++i) w.symbols[pos[i]] = Symbol::one;
            for (int i = u; i < u + e; ++i) w.symbols[pos[i]] = Symbol::erased;
            CounterRng rng(99, trial);
            DecodeOutcome out = eaed_decode(w, spec_1575(), f4(), rng);
            CHECK(out.kind == OutcomeKind::success);
            CHECK(out.residual() == 0);
        }
    }
}

TEST_CASE("erasure cap forces failure") {
    TernaryWord w;
    w.symbols.assign(15, Symbol::zero);
    w.symbols[2] = w.symbols[5] = w.symbols[9] = Symbol::erased;
    CounterRng rng(4, 0);
    DecodeOutcome capped = eaed_decode(w, spec_1575(), f4(), rng, 2);
    CHECK(capped.kind == OutcomeKind::failure);
    // erased positions are coin-resolved, the rest stay received
    for (int i : {0, 1, 3, 4, 6, 7, 8, 10, 11, 12, 13, 14})
        CHECK(capped.estimate[i] == 0);
    DecodeOutcome uncapped = eaed_decode(w, spec_1575(), f4(), rng, 3);
    CHECK(uncapped.kind == OutcomeKind::success);
}

TEST_CASE("anchored candidates that flip anchors fail") {
    // single error at an anchored position: the only candidate flips it
    TernaryWord w;
    w.symbols.assign(15, Symbol::zero);
    w.symbols[6] = Symbol::one;
    w.anchor.assign(15, 0);
    w.anchor[6] = 1;
    CounterRng rng(21, 0);
    DecodeOutcome out = eaed_a_decode(w, spec_1575(), f4(), rng);
    CHECK(out.kind == OutcomeKind::failure);
    CHECK(out.estimate == word_from_mask(uint32_t{1} << 6, 15));
    // anchor elsewhere: decodes normally
    w.anchor[6] = 0;
    w.anchor[3] = 1;
    out = eaed_a_decode(w, spec_1575(), f4(), rng);
    CHECK(out.kind == OutcomeKind::success);
    TernaryWord no_anchor = w;
    no_anchor.anchor.clear();
    CHECK_THROWS_AS(eaed_a_decode(no_anchor, spec_1575(), f4(), rng),
                    std::invalid_argument);
}

TEST_CASE("exhaustive error-only tallies match the closed form") {
    BddDtp<Rational> closed = bdd_dtp(spec_1575(), we_1575(), 5);
    for (int u = 0; u <= 5; ++u) {
        BruteBddRow bf = brute_bdd(tiny_1575(), u);
        const BddRow<Rational>& row = closed.row(u);
        CHECK(bf.p_succ == row.p_succ);
        CHECK(bf.p_fail == row.p_fail);
        CHECK(bf.p_mc == row.p_mc);
    }
}

TEST_CASE("exhaustive erasure cells match the closed form where exact") {
    DtpCalculator<Rational> calc(spec_1575(), we_1575());
    // no heavy-pattern approximation enters these cells
    BruteCell b13 = brute_eaed_cell(tiny_1575(), 1, 3);
    EaedCell<Rational> mixed = b13.mixed();
    const EaedCell<Rational>& closed = calc.cell(1, 3);
    CHECK(mixed.p_succ == closed.p_succ);
    CHECK(mixed.p_fail == closed.p_fail);
    CHECK(mixed.p_mc == closed.p_mc);
    CHECK(mixed.p_succ == Rational(88, 91));
    for (int e1 = 0; e1 <= 1; ++e1) {
        EaedCell<Rational> per_fill = b13.cell(e1);
        EaedCell<Rational> cl = region_L_dtp(spec_1575(), we_1575(), 1, 3, e1);
        CHECK(per_fill.p_succ == cl.p_succ);
        CHECK(per_fill.p_fail == cl.p_fail);
        CHECK(per_fill.p_mc == cl.p_mc);
    }
    // the [7,4,3] mixture happens to be exact as well
    BruteCell b12 = brute_eaed_cell(tiny_743(), 1, 2);
    EaedCell<Rational> m12 = b12.mixed();
    CHECK(m12.p_succ == Rational(1, 5));
    CHECK(m12.p_fail == 0);
    CHECK(m12.p_mc.at(3) == Rational(3, 5));
    CHECK(m12.p_mc.at(4) == Rational(1, 5));
}

TEST_CASE("exhaustive anchored cells match the closed form where exact") {
    DtpOptions<Rational> opt;
    opt.pca = Rational(1, 4);
    opt.pwa = Rational(1, 16);
    DtpCalculator<Rational> calc(spec_1575(), we_1575(), opt);
    BruteCell b13 = brute_eaed_cell(tiny_1575(), 1, 3, Rational(1, 4),
                                    Rational(1, 16));
    EaedCell<Rational> mixed = b13.mixed();
    const EaedCell<Rational>& closed = calc.cell(1, 3);
    CHECK(mixed.p_succ == closed.p_succ);
    CHECK(mixed.p_fail == closed.p_fail);
    CHECK(mixed.p_mc == closed.p_mc);
    CHECK(mixed.p_succ == Rational(5325, 5824));
    CHECK(mixed.p_fail == Rational(557, 11648));
    EaedCell<Rational> fill1 = b13.cell(1);
    CHECK(fill1.p_mc.at(5) == Rational(63, 1664));

    auto [mc, tot] = brute_single_pattern(tiny_1575(), 1, 2, 2, Rational(1, 4),
                                          Rational(1, 16));
    CHECK(tot == Rational(81, 364));
    CHECK(mc.at(5) == Rational(81, 364));
    const auto& [cmc, ctot] = calc.single_pattern(1, 2, 2);
    CHECK(tot == ctot);
    CHECK(mc == cmc);
}

TEST_CASE("exhaustive transition table") {
    EaedDtp<Rational> dtp =
        brute_force_dtp(tiny_743(), spec_743(), 2, 2);
    CHECK(dtp.cells.size() == 9);
    CHECK(dtp.cell(0, 0).p_succ == 1);
    CHECK(dtp.cell(1, 2).p_succ == Rational(1, 5));
    for (const auto& [ue, cell] : dtp.cells) CHECK(cell.total() == 1);
}

TEST_CASE("decoder trials reproduce the exhaustive cell") {
    // random (u,e) = (2,2) placements on [15,7,5]; the exhaustive replay is
    // the exact law of the executable decoder
    EaedCell<Rational> ref = brute_eaed_cell(tiny_1575(), 2, 2).mixed();
    const long N = 150000;
    std::mt19937 gen(2024);
    std::vector<int> pos(15);
    std::iota(pos.begin(), pos.end(), 0);
    long n_succ = 0, n_fail = 0, n_mc5 = 0;
    for (long trial = 0; trial < N; ++trial) {
        std::shuffle(pos.begin(), pos.end(), gen);
        TernaryWord w;
        w.symbols.assign(15, Symbol::zero);
        w.symbols[pos[0]] = w.symbols[pos[1]] = Symbol::one;
        w.symbols[pos[2]] = w.symbols[pos[3]] = Symbol::erased;
        CounterRng rng(777, trial);
        DecodeOutcome out = eaed_decode(w, spec_1575(), f4(), rng);
        if (out.kind == OutcomeKind::success) ++n_succ;
        if (out.kind == OutcomeKind::failure) ++n_fail;
        if (out.kind == OutcomeKind::miscorrection && out.residual() == 5)
            ++n_mc5;
    }
    auto near_exact = [&](long count, const Rational& p_exact) {
        double p = to_double(p_exact);
        double se = std::sqrt(p * (1 - p) / N);
        CHECK(std::abs(count / double(N) - p) < 4 * se + 1e-9);
    };
    near_exact(n_succ, ref.p_succ);
    near_exact(n_fail, ref.p_fail);
    near_exact(n_mc5, ref.p_mc.at(5));
}

TEST_CASE("frame simulation basics") {
    SimConfig cfg;
    cfg.spec = spec_255();
    cfg.ebn0_db = 60.0;
    cfg.decoder = DecoderKind::bdd;
    cfg.frames = 200;
    cfg.seed = 5;
    const FieldContext& f = f8();
    SimResult clean = simulate_frames(cfg, f);
    CHECK(clean.ber == 0.0);
    CHECK(clean.fer == 0.0);

    cfg.ebn0_db = 5.0;
    cfg.frames = 2000;
    SimResult a = simulate_frames(cfg, f);
    SimResult b = simulate_frames(cfg, f);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.frame_errors == b.frame_errors);
    cfg.seed = 6;
    SimResult c = simulate_frames(cfg, f);
    CHECK(a.bit_errors != c.bit_errors);

    SimConfig bad = cfg;
    bad.T = 0.1;
    CHECK_THROWS_AS(simulate_frames(bad, f), std::invalid_argument);
    bad = cfg;
    bad.decoder = DecoderKind::eaed_anchor;
    bad.T = 0.13;
    CHECK_THROWS_AS(simulate_frames(bad, f), std::invalid_argument);
    bad.Ta = 0.10;
    CHECK_THROWS_AS(simulate_frames(bad, f), std::invalid_argument);
    bad = cfg;
    bad.frames = 0;
    CHECK_THROWS_AS(simulate_frames(bad, f), std::invalid_argument);
}

TEST_CASE("simulated rates agree with the analytic tables") {
    const FieldContext& f = f8();
    SimConfig cfg;
    cfg.spec = spec_255();
    cfg.ebn0_db = 5.0;
    cfg.frames = 20000;
    cfg.seed = 20240501;

    cfg.decoder = DecoderKind::bdd;
    cfg.T = 0.0;
    SimResult bdd = simulate_frames(cfg, f);
    CHECK(bdd.ber == doctest::Approx(0.005352198096856719).epsilon(0.10));
    CHECK(bdd.fer == doctest::Approx(0.2962652225182218).epsilon(0.06));
    CHECK(bdd.mc_ber <= bdd.ber);
    CHECK(bdd.mc_ber > 0);

    cfg.decoder = DecoderKind::eaed;
    cfg.T = 0.16;
    SimResult eaed = simulate_frames(cfg, f);
    CHECK(eaed.ber == doctest::Approx(0.007735535603230719).epsilon(0.10));
    CHECK(eaed.fer == doctest::Approx(0.34686216698847355).epsilon(0.06));

    cfg.decoder = DecoderKind::eaed_anchor;
    cfg.T = 0.13;
    cfg.Ta = 0.75;
    cfg.frames = 30000;
    SimResult ea = simulate_frames(cfg, f);
    CHECK(ea.ber == doctest::Approx(0.004499129087048889).epsilon(0.12));
    CHECK(ea.fer == doctest::Approx(0.2728878774233095).epsilon(0.06));
    CHECK(ea.mc_ber < eaed.mc_ber);  // anchors suppress miscorrections

    std::ostringstream csv;
    write_sim_csv(csv, cfg, ea);
    CHECK(csv.str().find("# schema bchdtp.sim.v1\n") == 0);
    CHECK(csv.str().find("eaed-a") != std::string::npos);
}
