#include "bchdtp/decoder_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "bchdtp/channel_model.hpp"
#include "bchdtp/numerics.hpp"

namespace bchdtp {

namespace {

// Standard primitive polynomials (leading term included).
uint32_t standard_primitive_poly(int b) {
    switch (b) {
        case 3: return 0xB;     // x^3 + x + 1
        case 4: return 0x13;    // x^4 + x + 1
        case 8: return 0x11D;   // x^8 + x^4 + x^3 + x^2 + 1
        case 10: return 0x409;  // x^10 + x^3 + 1
        default:
            throw std::invalid_argument(
                "no standard primitive polynomial for degree " +
                std::to_string(b) + "; pass one explicitly");
    }
}

}  // namespace

FieldContext FieldContext::make(int b) {
    return FieldContext(b, standard_primitive_poly(b));
}

FieldContext FieldContext::make(int b, uint32_t primitive_poly) {
    return FieldContext(b, primitive_poly);
}

FieldContext::FieldContext(int b, uint32_t poly)
    : b_(b), poly_(poly), q1_((1 << b) - 1) {
    if (b < 2 || b > 15)
        throw std::invalid_argument("field degree out of range");
    if ((poly >> b) != 1)
        throw std::invalid_argument("primitive polynomial has wrong degree");
    log_.assign(1 << b, 0);
    alog_.assign(2 * q1_, 0);
    std::vector<uint8_t> seen(1 << b, 0);
    uint32_t x = 1;
    for (int i = 0; i < q1_; ++i) {
        if (seen[x])
            throw std::invalid_argument("polynomial is not primitive");
        seen[x] = 1;
        alog_[i] = static_cast<uint16_t>(x);
        alog_[i + q1_] = static_cast<uint16_t>(x);
        log_[x] = static_cast<uint16_t>(i);
        x <<= 1;
        if (x >> b) x ^= poly;
    }
    if (x != 1)
        throw std::invalid_argument("polynomial is not primitive");
}

uint16_t FieldContext::inv(uint16_t a) const {
    if (a == 0) throw std::invalid_argument("inverse of zero");
    int l = log_[a];
    return alog_[l == 0 ? 0 : q1_ - l];
}

uint16_t FieldContext::log(uint16_t a) const {
    if (a == 0) throw std::invalid_argument("log of zero");
    return log_[a];
}

uint64_t poly_mul_gf2(uint64_t a, uint64_t b) {
    uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        a <<= 1;
        b >>= 1;
    }
    return r;
}

uint64_t bch_generator_poly(const CodeSpec& spec, const FieldContext& field) {
    const int parity = spec.n - spec.k;
    if (parity > 63)
        throw std::invalid_argument("generator polynomial exceeds 63 bits");
    const int q1 = field.order();
    std::set<int> seen;
    uint64_t g = 1;
    for (int s = 1; s <= spec.d_des - 1; ++s) {
        // conjugacy class of alpha^s under squaring
        std::vector<int> cls;
        int m = s % q1;
        while (true) {
            cls.push_back(m);
            m = (2 * m) % q1;
            if (m == s % q1) break;
        }
        int rep = *std::min_element(cls.begin(), cls.end());
        if (!seen.insert(rep).second) continue;
        // minimal polynomial: product of (x + alpha^m) over the class
        std::vector<uint16_t> p{1};
        for (int mm : cls) {
            uint16_t root = field.pow_alpha(mm);
            std::vector<uint16_t> q(p.size() + 1, 0);
            for (size_t i = 0; i < p.size(); ++i) {
                q[i + 1] ^= p[i];
                q[i] ^= field.mul(p[i], root);
            }
            p = std::move(q);
        }
        uint64_t mask = 0;
        for (size_t i = 0; i < p.size(); ++i) {
            if (p[i] > 1)
                throw InvariantViolation(
                    "minimal polynomial has a coefficient outside GF(2)");
            if (p[i]) mask |= uint64_t{1} << i;
        }
        g = poly_mul_gf2(g, mask);
    }
    int deg = 63 - std::countl_zero(g);
    if (deg != parity)
        throw InvariantViolation(
            "generator degree " + std::to_string(deg) +
            " does not match n - k = " + std::to_string(parity));
    return g;
}

bool TernaryWord::anchored() const { return !anchor.empty(); }

void TernaryWord::validate() const {
    if (!anchor.empty() && anchor.size() != symbols.size())
        throw std::invalid_argument("anchor flags have wrong length");
    for (size_t i = 0; i < anchor.size(); ++i)
        if (anchor[i] && symbols[i] == Symbol::erased)
            throw std::invalid_argument("anchored position is erased");
}

int DecodeOutcome::residual() const {
    int w = 0;
    for (uint8_t b : estimate) w += b;
    return w;
}

int DecodeOutcome::residual_prefix(int k) const {
    int w = 0;
    for (int i = 0; i < k && i < static_cast<int>(estimate.size()); ++i)
        w += estimate[i];
    return w;
}

bool bdd_locate(const std::vector<int>& support, const CodeSpec& spec,
                const FieldContext& field, std::vector<int>& flips) {
    flips.clear();
    const int t = spec.t;
    const int m = 2 * t;
    std::vector<uint16_t> S(m, 0);
    bool all_zero = true;
    for (int j = 1; j <= m; ++j) {
        uint16_t s = 0;
        for (int i : support) s ^= field.pow_alpha(static_cast<long>(i) * j);
        S[j - 1] = s;
        if (s) all_zero = false;
    }
    if (all_zero) return true;  // already a codeword

    // Berlekamp-Massey over GF(2^b)
    std::vector<uint16_t> C{1}, B{1};
    int L = 0, gap = 1;
    uint16_t bb = 1;
    for (int nn = 0; nn < m; ++nn) {
        uint16_t d = S[nn];
        for (int i = 1; i <= L && i < static_cast<int>(C.size()); ++i)
            if (C[i]) d ^= field.mul(C[i], S[nn - i]);
        if (d == 0) {
            ++gap;
            continue;
        }
        uint16_t coef = field.mul(d, field.inv(bb));
        std::vector<uint16_t> prev = C;
        if (C.size() < B.size() + gap) C.resize(B.size() + gap, 0);
        for (size_t i = 0; i < B.size(); ++i)
            if (B[i]) C[i + gap] ^= field.mul(coef, B[i]);
        if (2 * L <= nn) {
            L = nn + 1 - L;
            B = std::move(prev);
            bb = d;
            gap = 1;
        } else {
            ++gap;
        }
    }
    if (L > t) return false;
    int deg = static_cast<int>(C.size()) - 1;
    while (deg > 0 && C[deg] == 0) --deg;
    if (deg != L) return false;

    // Chien search over the word positions; x = alpha^{-i}
    std::vector<uint16_t> term(C.begin(), C.begin() + L + 1);
    std::vector<uint16_t> step(L + 1);
    for (int j = 0; j <= L; ++j) step[j] = field.pow_alpha(-j);
    for (int i = 0; i < spec.n; ++i) {
        uint16_t v = 0;
        for (int j = 0; j <= L; ++j) v ^= term[j];
        if (v == 0) flips.push_back(i);
        for (int j = 1; j <= L; ++j) term[j] = field.mul(term[j], step[j]);
    }
    // the locator must split over the word's positions with distinct roots
    if (static_cast<int>(flips.size()) != L) {
        flips.clear();
        return false;
    }
    return true;
}

DecodeOutcome bdd_decode(const std::vector<uint8_t>& y, const CodeSpec& spec,
                         const FieldContext& field) {
    if (static_cast<int>(y.size()) != spec.n)
        throw std::invalid_argument("word length does not match n");
    std::vector<int> supp, flips;
    for (int i = 0; i < spec.n; ++i)
        if (y[i]) supp.push_back(i);
    if (!bdd_locate(supp, spec, field, flips))
        return {OutcomeKind::failure, y};
    std::vector<uint8_t> w = y;
    for (int i : flips) w[i] ^= 1;
    bool zero = std::all_of(w.begin(), w.end(), [](uint8_t b) { return !b; });
    return {zero ? OutcomeKind::success : OutcomeKind::miscorrection,
            std::move(w)};
}

namespace {

uint64_t mix64(uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(uint64_t seed, uint64_t frame)
    : h_(mix64(mix64(seed) + frame)) {}

uint64_t CounterRng::raw(uint64_t draw) const { return mix64(h_ + draw); }

double CounterRng::uniform(uint64_t draw) const {
    return (static_cast<double>(raw(draw) >> 11) + 0.5) * 0x1p-53;
}

double CounterRng::gaussian(uint64_t pair_index) const {
    double u1 = uniform(2 * pair_index);
    double u2 = uniform(2 * pair_index + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925287 * u2);
}

DecodeOutcome eaed_decode(const TernaryWord& y, const CodeSpec& spec,
                          const FieldContext& field, const CounterRng& rng,
                          int e_max) {
    y.validate();
    const int n = y.length();
    if (n != spec.n)
        throw std::invalid_argument("word length does not match n");
    if (e_max < 0) e_max = n;
    const uint64_t un = static_cast<uint64_t>(n);

    std::vector<int> era;
    std::vector<uint8_t> hard(n, 0);
    for (int i = 0; i < n; ++i) {
        if (y.symbols[i] == Symbol::erased)
            era.push_back(i);
        else
            hard[i] = (y.symbols[i] == Symbol::one);
    }

    auto fail_outcome = [&]() {
        DecodeOutcome out{OutcomeKind::failure, hard};
        for (int i : era)
            out.estimate[i] = rng.coin(3 * un + 1 + static_cast<uint64_t>(i));
        return out;
    };
    if (static_cast<int>(era.size()) > e_max) return fail_outcome();

    std::vector<uint8_t> y1 = hard, y2 = hard;
    for (int i : era) {
        bool b = rng.coin(2 * un + static_cast<uint64_t>(i));
        y1[i] = b;
        y2[i] = !b;
    }

    struct Cand {
        std::vector<uint8_t> word;
        int dist;  // to the received word over non-erased positions
    };
    std::vector<Cand> cands;
    auto try_branch = [&](const std::vector<uint8_t>& yb) {
        std::vector<int> supp, flips;
        for (int i = 0; i < n; ++i)
            if (yb[i]) supp.push_back(i);
        if (!bdd_locate(supp, spec, field, flips)) return;
        if (y.anchored()) {
            for (int i : flips)
                if (y.anchor[i]) return;  // flips a high-reliability bit
        }
        std::vector<uint8_t> w = yb;
        int d = 0;
        for (int i : flips) {
            w[i] ^= 1;
            if (y.symbols[i] != Symbol::erased) ++d;
        }
        cands.push_back({std::move(w), d});
    };
    try_branch(y1);
    try_branch(y2);
    if (cands.size() == 2 && cands[0].word == cands[1].word) cands.pop_back();
    if (cands.empty()) return fail_outcome();

    const Cand* pick = &cands[0];
    if (cands.size() == 2) {
        if (cands[1].dist < cands[0].dist)
            pick = &cands[1];
        else if (cands[1].dist == cands[0].dist && rng.coin(3 * un))
            pick = &cands[1];
    }
    bool zero = std::all_of(pick->word.begin(), pick->word.end(),
                            [](uint8_t b) { return !b; });
    return {zero ? OutcomeKind::success : OutcomeKind::miscorrection,
            pick->word};
}

DecodeOutcome eaed_a_decode(const TernaryWord& y, const CodeSpec& spec,
                            const FieldContext& field, const CounterRng& rng,
                            int e_max) {
    if (y.anchor.empty())
        throw std::invalid_argument("anchored decoding needs anchor flags");
    return eaed_decode(y, spec, field, rng, e_max);
}

const char* to_string(DecoderKind kind) {
    switch (kind) {
        case DecoderKind::bdd: return "bdd";
        case DecoderKind::bdd_anchor: return "bdd-a";
        case DecoderKind::eaed: return "eaed";
        case DecoderKind::eaed_anchor: return "eaed-a";
    }
    return "?";
}

std::optional<DecoderKind> decoder_from_string(const std::string& name) {
    if (name == "bdd") return DecoderKind::bdd;
    if (name == "bdd-a") return DecoderKind::bdd_anchor;
    if (name == "eaed") return DecoderKind::eaed;
    if (name == "eaed-a") return DecoderKind::eaed_anchor;
    return std::nullopt;
}

bool decoder_uses_anchors(DecoderKind kind) {
    return kind == DecoderKind::bdd_anchor || kind == DecoderKind::eaed_anchor;
}

bool decoder_uses_erasures(DecoderKind kind) {
    return kind == DecoderKind::eaed || kind == DecoderKind::eaed_anchor;
}

SimResult simulate_frames(const SimConfig& config, const FieldContext& field) {
    const CodeSpec& spec = config.spec;
    const int n = spec.n, k = spec.k;
    if (config.frames < 1) throw std::invalid_argument("frames must be >= 1");
    if (!decoder_uses_erasures(config.decoder) && config.T != 0.0)
        throw std::invalid_argument("hard-decision decoding requires T = 0");
    if (config.T < 0) throw std::invalid_argument("negative threshold");
    const bool anchored = decoder_uses_anchors(config.decoder);
    if (anchored) {
        if (!config.Ta)
            throw std::invalid_argument("anchored decoding requires Ta");
        if (*config.Ta <= config.T)
            throw std::invalid_argument("Ta must exceed T");
    }
    const double sigma =
        sigma_from_ebn0_db(config.ebn0_db,
                           static_cast<double>(k) / static_cast<double>(n));
    const double Ta = anchored ? *config.Ta : 0.0;
    const int e_max = config.e_max < 0 ? n : config.e_max;

    SimResult res;
    res.frames = config.frames;
    res.seed = config.seed;
    double sum_x = 0.0, sum_x2 = 0.0;

    TernaryWord word;
    word.symbols.resize(n);
    if (anchored) word.anchor.resize(n);
    std::vector<uint8_t> hard(n);

    for (long f = 0; f < config.frames; ++f) {
        CounterRng rng(config.seed, static_cast<uint64_t>(f));
        for (int i = 0; i < n; ++i) {
            double z = 1.0 + sigma * rng.gaussian(static_cast<uint64_t>(i));
            bool erased = config.T > 0 && std::abs(z) <= config.T;
            word.symbols[i] = erased          ? Symbol::erased
                              : (z < 0)       ? Symbol::one
                                              : Symbol::zero;
            if (anchored) word.anchor[i] = std::abs(z) >= Ta;
        }

        DecodeOutcome out{OutcomeKind::failure, {}};
        if (decoder_uses_erasures(config.decoder)) {
            out = eaed_decode(word, spec, field, rng, e_max);
        } else {
            for (int i = 0; i < n; ++i)
                hard[i] = (word.symbols[i] == Symbol::one);
            out = bdd_decode(hard, spec, field);
            if (anchored && out.kind != OutcomeKind::failure) {
                for (int i = 0; i < n && out.kind != OutcomeKind::failure; ++i)
                    if (word.anchor[i] && out.estimate[i] != hard[i])
                        out = DecodeOutcome{OutcomeKind::failure, hard};
            }
        }

        int r = out.residual();
        int rk = out.residual_prefix(k);
        res.bit_errors += r;
        res.info_bit_errors += rk;
        if (out.kind != OutcomeKind::success) ++res.frame_errors;
        if (out.kind == OutcomeKind::miscorrection) {
            ++res.mc_frames;
            res.mc_bit_errors += r;
            res.mc_info_bit_errors += rk;
        }
        double x = static_cast<double>(rk) / k;
        sum_x += x;
        sum_x2 += x * x;
    }

    const double F = static_cast<double>(res.frames);
    res.ber = static_cast<double>(res.info_bit_errors) / (F * k);
    res.ber_code = static_cast<double>(res.bit_errors) / (F * n);
    res.fer = static_cast<double>(res.frame_errors) / F;
    res.mc_ber = static_cast<double>(res.mc_info_bit_errors) / (F * k);
    if (res.frames > 1) {
        double var_x =
            std::max(0.0, (sum_x2 - sum_x * sum_x / F) / (F - 1.0));
        res.se_ber = std::sqrt(var_x / F);
        double pf = res.fer;
        res.se_fer = std::sqrt(std::max(0.0, pf * (1.0 - pf)) / F);
    }
    return res;
}

void write_sim_csv(std::ostream& os, const SimConfig& config,
                   const SimResult& result) {
    os << "# schema bchdtp.sim.v1\n";
    os << "ebn0_db,decoder,T,Ta,frames,seed,ber,ber_code,fer,mc_ber,se_ber,"
          "se_fer\n";
    os.precision(17);
    os << config.ebn0_db << "," << to_string(config.decoder) << "," << config.T
       << ",";
    if (config.Ta) os << *config.Ta;
    os << "," << result.frames << "," << result.seed << "," << result.ber
       << "," << result.ber_code << "," << result.fer << "," << result.mc_ber
       << "," << result.se_ber << "," << result.se_fer << "\n";
}

TinyCode TinyCode::make(const CodeSpec& spec, const FieldContext& field) {
    if (spec.n > 20)
        throw std::invalid_argument("exhaustive table limited to n <= 20");
    if (spec.shortened())
        throw std::invalid_argument("exhaustive table needs the parent code");
    TinyCode code;
    code.n = spec.n;
    code.k = spec.k;
    code.t = spec.t;
    code.d_min = spec.distance();
    code.g = static_cast<uint32_t>(bch_generator_poly(spec, field));
    code.words.reserve(size_t{1} << spec.k);
    for (uint32_t m = 0; m < (uint32_t{1} << spec.k); ++m)
        code.words.push_back(
            static_cast<uint32_t>(poly_mul_gf2(m, code.g)));
    code.decode.assign(size_t{1} << spec.n, -1);
    for (uint32_t yw = 0; yw < (uint32_t{1} << spec.n); ++yw) {
        for (uint32_t c : code.words) {
            if (std::popcount(yw ^ c) <= spec.t) {
                code.decode[yw] = static_cast<int32_t>(c);
                break;
            }
        }
    }
    return code;
}

namespace {

// Lexicographic successor of an r-combination out of [0, n); false at the end.
bool next_combination(std::vector<int>& idx, int n) {
    int r = static_cast<int>(idx.size());
    for (int i = r - 1; i >= 0; --i) {
        if (idx[i] < n - r + i) {
            ++idx[i];
            for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<int> first_combination(int r) {
    std::vector<int> idx(r);
    for (int i = 0; i < r; ++i) idx[i] = i;
    return idx;
}

uint32_t bits_of(const std::vector<int>& idx) {
    uint32_t m = 0;
    for (int i : idx) m |= uint32_t{1} << i;
    return m;
}

}  // namespace

BruteBddRow brute_bdd(const TinyCode& code, int u) {
    BruteBddRow row{Rational(0), Rational(0), {}};
    long succ = 0, fail = 0, total = 0;
    std::map<int, long> mc;
    auto idx = first_combination(u);
    do {
        uint32_t yw = bits_of(idx);
        ++total;
        int32_t c = code.decode[yw];
        if (c < 0)
            ++fail;
        else if (c == 0)
            ++succ;
        else
            ++mc[std::popcount(static_cast<uint32_t>(c))];
    } while (next_combination(idx, code.n));
    row.p_succ = make_ratio(succ, total);
    row.p_fail = make_ratio(fail, total);
    for (const auto& [r, v] : mc) row.p_mc[r] = make_ratio(v, total);
    return row;
}

BruteCell::BruteCell(int e) : e_(e), by_fill_(e + 1) {}

EaedCell<Rational> BruteCell::cell(int e1) const {
    const Bucket& b = by_fill_.at(e1);
    if (b.count == 0) throw std::logic_error("empty fill bucket");
    EaedCell<Rational> out;
    out.u = u_;
    out.e = e_;
    Rational tot(static_cast<long>(b.count));
    out.p_succ = b.succ / tot;
    out.p_fail = b.fail / tot;
    for (const auto& [r, v] : b.mc)
        if (v != 0) out.p_mc[r] = v / tot;
    return out;
}

EaedCell<Rational> BruteCell::mixed() const {
    EaedCell<Rational> out;
    out.u = u_;
    out.e = e_;
    out.p_succ = Rational(0);
    out.p_fail = Rational(0);
    for (int e1 = 0; e1 <= e_; ++e1) {
        const Bucket& b = by_fill_[e1];
        if (b.count == 0) continue;
        Rational wgt = from_count<Rational>(binomial(e_, e1)) /
                       (Rational(static_cast<long>(b.count)) *
                        spow<Rational>(Rational(2), e_));
        out.p_succ += b.succ * wgt;
        out.p_fail += b.fail * wgt;
        for (const auto& [r, v] : b.mc) {
            Rational add = v * wgt;
            if (add != 0) out.p_mc[r] += add;
        }
    }
    return out;
}

BruteCell brute_eaed_cell(const TinyCode& code, int u, int e,
                          const Rational& pca, const Rational& pwa,
                          AcceptanceCoupling mode) {
    const int n = code.n;
    const bool anchored = pca != 0 || pwa != 0;
    BruteCell out(e);
    out.u_ = u;

    // acceptance factor tables: (1-pca)^j and (1-pwa)^j
    std::vector<Rational> pow_ca(n + 1), pow_wa(n + 1);
    pow_ca[0] = pow_wa[0] = Rational(1);
    for (int j = 1; j <= n; ++j) {
        pow_ca[j] = pow_ca[j - 1] * (Rational(1) - pca);
        pow_wa[j] = pow_wa[j - 1] * (Rational(1) - pwa);
    }
    auto acceptance = [&](uint32_t flips, uint32_t S_bits,
                          uint32_t E_bits) -> Rational {
        int n_ca = std::popcount(flips & ~S_bits & ~E_bits);
        int n_wa = std::popcount(flips & ~S_bits & E_bits);
        return pow_ca[n_ca] * pow_wa[n_wa];
    };
    auto add = [](BruteCell::Bucket& b, uint32_t c, const Rational& p) {
        if (p == 0) return;
        if (c == 0)
            b.succ += p;
        else
            b.mc[std::popcount(c)] += p;
    };
    const Rational half = make_ratio(1, 2);

    auto err_idx = first_combination(u);
    do {
        uint32_t E_bits = bits_of(err_idx);
        std::vector<int> rest;
        rest.reserve(n - u);
        for (int i = 0; i < n; ++i)
            if (!((E_bits >> i) & 1)) rest.push_back(i);
        auto ers_idx = first_combination(e);
        do {
            std::vector<int> ers(e);
            uint32_t S_bits = 0;
            for (int j = 0; j < e; ++j) {
                ers[j] = rest[ers_idx[j]];
                S_bits |= uint32_t{1} << ers[j];
            }
            for (uint32_t fmask = 0; fmask < (uint32_t{1} << e); ++fmask) {
                uint32_t F_bits = 0;
                for (int j = 0; j < e; ++j)
                    if ((fmask >> j) & 1) F_bits |= uint32_t{1} << ers[j];
                BruteCell::Bucket& bkt = out.by_fill_[std::popcount(fmask)];
                ++bkt.count;
                uint32_t y1 = E_bits | F_bits;
                uint32_t y2 = E_bits | (S_bits ^ F_bits);
                int32_t c1 = code.decode[y1];
                int32_t c2 = code.decode[y2];
                if (c1 < 0 && c2 < 0) {
                    bkt.fail += 1;
                    continue;
                }
                struct C {
                    uint32_t word, flips;
                };
                std::vector<C> cands;
                if (c1 >= 0)
                    cands.push_back({static_cast<uint32_t>(c1),
                                     static_cast<uint32_t>(c1) ^ y1});
                if (c2 >= 0)
                    cands.push_back({static_cast<uint32_t>(c2),
                                     static_cast<uint32_t>(c2) ^ y2});
                if (cands.size() == 2 && cands[0].word == cands[1].word)
                    cands.pop_back();  // one shared acceptance event
                auto dist = [&](uint32_t c) {
                    return std::popcount((c ^ E_bits) & ~S_bits);
                };
                if (!anchored) {
                    if (cands.size() == 1) {
                        add(bkt, cands[0].word, Rational(1));
                    } else {
                        int d1 = dist(cands[0].word), d2 = dist(cands[1].word);
                        if (d1 < d2)
                            add(bkt, cands[0].word, Rational(1));
                        else if (d2 < d1)
                            add(bkt, cands[1].word, Rational(1));
                        else {
                            add(bkt, cands[0].word, half);
                            add(bkt, cands[1].word, half);
                        }
                    }
                    continue;
                }
                if (cands.size() == 1) {
                    Rational A1 = acceptance(cands[0].flips, S_bits, E_bits);
                    add(bkt, cands[0].word, A1);
                    bkt.fail += Rational(1) - A1;
                    continue;
                }
                Rational Aa = acceptance(cands[0].flips, S_bits, E_bits);
                Rational Ab = acceptance(cands[1].flips, S_bits, E_bits);
                Rational p_both =
                    mode == AcceptanceCoupling::independent
                        ? Aa * Ab
                        : acceptance(cands[0].flips | cands[1].flips, S_bits,
                                     E_bits);
                add(bkt, cands[0].word, Aa - p_both);
                add(bkt, cands[1].word, Ab - p_both);
                bkt.fail += Rational(1) - Aa - Ab + p_both;
                int da = dist(cands[0].word), db = dist(cands[1].word);
                if (da < db)
                    add(bkt, cands[0].word, p_both);
                else if (db < da)
                    add(bkt, cands[1].word, p_both);
                else {
                    add(bkt, cands[0].word, p_both * half);
                    add(bkt, cands[1].word, p_both * half);
                }
            }
        } while (next_combination(ers_idx, n - u));
    } while (next_combination(err_idx, n));
    return out;
}

std::pair<std::map<int, Rational>, Rational> brute_single_pattern(
    const TinyCode& code, int u, int e, int e1, const Rational& pca,
    const Rational& pwa) {
    if (u + e1 <= code.t)
        throw std::invalid_argument("pattern weight must exceed t");
    const int n = code.n;
    std::vector<Rational> pow_ca(n + 1), pow_wa(n + 1);
    pow_ca[0] = pow_wa[0] = Rational(1);
    for (int j = 1; j <= n; ++j) {
        pow_ca[j] = pow_ca[j - 1] * (Rational(1) - pca);
        pow_wa[j] = pow_wa[j - 1] * (Rational(1) - pwa);
    }
    std::map<int, Rational> mc;
    Rational tot(0);
    long nconf = 0;
    auto err_idx = first_combination(u);
    do {
        uint32_t E_bits = bits_of(err_idx);
        std::vector<int> rest;
        for (int i = 0; i < n; ++i)
            if (!((E_bits >> i) & 1)) rest.push_back(i);
        auto ers_idx = first_combination(e);
        do {
            std::vector<int> ers(e);
            uint32_t S_bits = 0;
            for (int j = 0; j < e; ++j) {
                ers[j] = rest[ers_idx[j]];
                S_bits |= uint32_t{1} << ers[j];
            }
            for (uint32_t fmask = 0; fmask < (uint32_t{1} << e); ++fmask) {
                if (std::popcount(fmask) != e1) continue;
                ++nconf;
                uint32_t F_bits = 0;
                for (int j = 0; j < e; ++j)
                    if ((fmask >> j) & 1) F_bits |= uint32_t{1} << ers[j];
                uint32_t y1 = E_bits | F_bits;
                int32_t c = code.decode[y1];
                if (c < 0) continue;
                if (c == 0)
                    throw std::logic_error(
                        "pattern heavier than t decoded to the origin");
                uint32_t flips = static_cast<uint32_t>(c) ^ y1;
                int n_ca = std::popcount(flips & ~S_bits & ~E_bits);
                int n_wa = std::popcount(flips & ~S_bits & E_bits);
                Rational A1 = pow_ca[n_ca] * pow_wa[n_wa];
                if (A1 == 0) continue;
                mc[std::popcount(static_cast<uint32_t>(c))] += A1;
                tot += A1;
            }
        } while (next_combination(ers_idx, n - u));
    } while (next_combination(err_idx, n));
    std::map<int, Rational> norm;
    Rational nc(static_cast<long>(nconf));
    for (const auto& [r, v] : mc) norm[r] = v / nc;
    return {std::move(norm), tot / nc};
}

EaedDtp<Rational> brute_force_dtp(const TinyCode& code, const CodeSpec& spec,
                                  int u_max, int e_max, const Rational& pca,
                                  const Rational& pwa) {
    EaedDtp<Rational> dtp;
    dtp.spec = spec;
    dtp.enum_mode = EnumeratorMode::exact;
    dtp.anchors = AnchorProbs{to_double(pca), to_double(pwa)};
    dtp.success = SuccessAcceptance::anchor_gated;
    dtp.m_kernel = RegionMKernel::single_pattern;
    dtp.u_max = u_max;
    dtp.e_max = e_max;
    for (int u = 0; u <= u_max; ++u) {
        for (int e = 0; e <= e_max && u + e <= spec.n; ++e) {
            double size = binomial_d(spec.n, u) * binomial_d(spec.n - u, e) *
                          std::ldexp(1.0, e);
            if (size > 1e8)
                throw std::invalid_argument(
                    "cell enumeration exceeds the 1e8 configuration cap");
            BruteCell cell = brute_eaed_cell(code, u, e, pca, pwa);
            dtp.cells[{u, e}] = cell.mixed();
        }
    }
    return dtp;
}

}  // namespace bchdtp
