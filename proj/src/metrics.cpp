#include "bchdtp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <tuple>
#include <utility>

namespace bchdtp {

namespace {

double as_double(double v) { return v; }
double as_double(const Rational& v) { return to_double(v); }

// Residual-error contribution of one cell: a failure keeps the u errors plus
// one half of each erasure (coin-flip fills), a miscorrection keeps its
// wrong-codeword distance r. The optional cap drops residuals with 2r above
// it from the bit-error count (published-curve convention), never from the
// frame-error count.
template <class Cell>
void accumulate_cell(const Cell& cell, double p, const CurveOptions& opts,
                     double& ber, double& mc_ber, double& fer) {
    double er = 0.0;
    if (!opts.residual_cap2 || 2 * cell.u + cell.e <= *opts.residual_cap2)
        er = as_double(cell.p_fail) * (cell.u + 0.5 * cell.e);
    double emc = 0.0;
    for (const auto& [r, m] : cell.p_mc)
        if (!opts.residual_cap2 || 2 * r <= *opts.residual_cap2)
            emc += as_double(m) * r;
    ber += p * (er + emc);
    mc_ber += p * emc;
    fer += p * (1.0 - as_double(cell.p_succ));
}

// BddRow carries no (u, e); wrap it so accumulate_cell sees one shape.
template <class S>
struct RowView {
    int u;
    int e;
    const S& p_succ;
    const S& p_fail;
    const std::map<int, S>& p_mc;
};

void check_joint(int table_n, const JointUE& joint) {
    if (joint.n != table_n)
        throw MetricsConfigError("joint distribution is over " +
                                 std::to_string(joint.n) +
                                 " bits but the table is for " +
                                 std::to_string(table_n));
}

void check_coverage(double uncovered, const CurveOptions& opts) {
    if (uncovered > opts.coverage_tol) {
        std::ostringstream msg;
        msg << "channel mass " << uncovered
            << " falls outside the transition table (tolerance "
            << opts.coverage_tol << ")";
        throw CoverageError(msg.str());
    }
}

void check_point_args(DecoderKind kind, double T,
                      const std::optional<double>& Ta) {
    if (decoder_uses_anchors(kind) != Ta.has_value())
        throw MetricsConfigError(
            "anchored decoder kinds take Ta and plain kinds must not");
    if (!decoder_uses_erasures(kind) && T != 0.0)
        throw MetricsConfigError("hard-decision decoder kinds need T = 0");
    if (T < 0.0) throw MetricsConfigError("negative erasure threshold");
}

AnchorProbs anchors_for(double sigma, double T,
                        const std::optional<double>& Ta) {
    if (!Ta) return {};
    return T == 0.0 ? anchor_probs_bsc(sigma, *Ta)
                    : anchor_probs_eae(sigma, T, *Ta);
}

// One channel point against a calculator that already carries the matching
// anchor probabilities.
SweepPoint evaluate_with(DtpCalculator<double>& calc, double ebn0_db,
                         const EaEChannelParams& ch, double T,
                         const std::optional<double>& Ta,
                         const CurveOptions& opts) {
    const CodeSpec& spec = calc.spec();
    const JointUE joint = joint_ue_distribution(spec.n, ch, opts.joint_tail);
    double ber = 0.0, mc_ber = 0.0, fer = 0.0;
    for (const auto& [ue, p] : joint.p) {
        const auto [u, e] = ue;
        if (opts.e_limit && e > *opts.e_limit) continue;
        accumulate_cell(calc.cell(u, e), p, opts, ber, mc_ber, fer);
    }
    SweepPoint out;
    out.ebn0_db = ebn0_db;
    out.ber = ber / spec.n;
    out.fer = fer;
    out.mc_ber = mc_ber / spec.n;
    out.T = T;
    out.Ta = Ta;
    return out;
}

}  // namespace

CurveOptions figure_mode_options(DecoderKind kind) {
    CurveOptions opts;
    switch (kind) {
        case DecoderKind::bdd:
        case DecoderKind::bdd_anchor:
            opts.residual_cap2 = 10;
            break;
        case DecoderKind::eaed:
            opts.e_limit = 10;
            break;
        case DecoderKind::eaed_anchor:
            opts.e_limit = 10;
            opts.m_kernel = RegionMKernel::anchored_row;
            break;
    }
    return opts;
}

template <class S>
RateTriple ber_fer_from_dtp(const EaedDtp<S>& dtp, const JointUE& joint,
                            const CurveOptions& opts) {
    check_joint(dtp.spec.n, joint);
    double ber = 0.0, mc_ber = 0.0, fer = 0.0, uncovered = 0.0;
    for (const auto& [ue, p] : joint.p) {
        const auto [u, e] = ue;
        if (opts.e_limit && e > *opts.e_limit) continue;
        auto it = dtp.cells.find({u, e});
        if (it == dtp.cells.end()) {
            uncovered += p;
            accumulate_cell(dtp.cell_or_truncated(u, e), p, opts, ber, mc_ber,
                            fer);
        } else {
            accumulate_cell(it->second, p, opts, ber, mc_ber, fer);
        }
    }
    check_coverage(uncovered, opts);
    return {ber / joint.n, fer, mc_ber / joint.n};
}

template <class S>
RateTriple ber_fer_from_dtp(const BddDtp<S>& dtp, const JointUE& joint,
                            const CurveOptions& opts) {
    check_joint(dtp.spec.n, joint);
    double ber = 0.0, mc_ber = 0.0, fer = 0.0, uncovered = 0.0;
    static const std::map<int, S> no_mc;
    static const S zero{};
    static const S one = S(1);
    for (const auto& [ue, p] : joint.p) {
        const auto [u, e] = ue;
        if (e != 0)
            throw MetricsConfigError(
                "error-only table cannot absorb erasure mass");
        if (u > dtp.u_max()) {
            uncovered += p;
            accumulate_cell(RowView<S>{u, 0, zero, one, no_mc}, p, opts, ber,
                            mc_ber, fer);
            continue;
        }
        const BddRow<S>& row = dtp.row(u);
        accumulate_cell(RowView<S>{u, 0, row.p_succ, row.p_fail, row.p_mc}, p,
                        opts, ber, mc_ber, fer);
    }
    check_coverage(uncovered, opts);
    return {ber / joint.n, fer, mc_ber / joint.n};
}

template RateTriple ber_fer_from_dtp<Rational>(const EaedDtp<Rational>&,
                                               const JointUE&,
                                               const CurveOptions&);
template RateTriple ber_fer_from_dtp<double>(const EaedDtp<double>&,
                                             const JointUE&,
                                             const CurveOptions&);
template RateTriple ber_fer_from_dtp<Rational>(const BddDtp<Rational>&,
                                               const JointUE&,
                                               const CurveOptions&);
template RateTriple ber_fer_from_dtp<double>(const BddDtp<double>&,
                                             const JointUE&,
                                             const CurveOptions&);

SweepPoint evaluate_point(const CodeSpec& spec, const WeightEnumerator& we,
                          DecoderKind kind, double ebn0_db, double T,
                          std::optional<double> Ta, const CurveOptions& opts) {
    check_point_args(kind, T, Ta);
    const double rate = static_cast<double>(spec.k) / spec.n;
    const double sigma = sigma_from_ebn0_db(ebn0_db, rate);
    const EaEChannelParams ch = quantize(sigma, T);
    const AnchorProbs anchors = anchors_for(sigma, T, Ta);
    DtpOptions<double> opt;
    opt.pca = anchors.p_ca;
    opt.pwa = anchors.p_wa;
    opt.m_kernel = opts.m_kernel;
    DtpCalculator<double> calc(spec, we, opt);
    return evaluate_with(calc, ebn0_db, ch, T, Ta, opts);
}

std::vector<SweepPoint> sweep(const CodeSpec& spec, const WeightEnumerator& we,
                              DecoderKind kind,
                              const std::vector<double>& ebn0_grid, double T,
                              std::optional<double> Ta,
                              const CurveOptions& opts) {
    if (ebn0_grid.empty()) throw MetricsConfigError("empty Eb/N0 grid");
    check_point_args(kind, T, Ta);
    const double rate = static_cast<double>(spec.k) / spec.n;
    // anchored tables depend on sigma and are keyed exactly; un-anchored
    // tables collapse onto one shared key
    std::map<std::tuple<double, double, double>,
             std::unique_ptr<DtpCalculator<double>>>
        calculators;
    std::vector<SweepPoint> out;
    out.reserve(ebn0_grid.size());
    for (double ebn0_db : ebn0_grid) {
        const double sigma = sigma_from_ebn0_db(ebn0_db, rate);
        const EaEChannelParams ch = quantize(sigma, T);
        const AnchorProbs anchors = anchors_for(sigma, T, Ta);
        const auto key = Ta ? std::make_tuple(sigma, T, *Ta)
                            : std::make_tuple(0.0, T, 0.0);
        auto it = calculators.find(key);
        if (it == calculators.end()) {
            DtpOptions<double> opt;
            opt.pca = anchors.p_ca;
            opt.pwa = anchors.p_wa;
            opt.m_kernel = opts.m_kernel;
            it = calculators
                     .emplace(key, std::make_unique<DtpCalculator<double>>(
                                       spec, we, opt))
                     .first;
        }
        out.push_back(evaluate_with(*it->second, ebn0_db, ch, T, Ta, opts));
    }
    return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points,
                     DecoderKind kind) {
    os << "# schema bchdtp.sweep.v1\n";
    os << "# decoder " << to_string(kind) << "\n";
    os << "ebn0_db,ber,fer,mc_ber,T,Ta\n";
    os.precision(17);
    for (const SweepPoint& p : points) {
        os << p.ebn0_db << "," << p.ber << "," << p.fer << "," << p.mc_ber
           << "," << p.T << ",";
        if (p.Ta) os << *p.Ta;
        os << "\n";
    }
}

ThresholdChoice optimize_thresholds(
    const CodeSpec& spec, const WeightEnumerator& we, DecoderKind kind,
    double ebn0_ref, const std::vector<double>& T_grid,
    const std::optional<std::vector<double>>& Ta_grid,
    const CurveOptions& opts) {
    if (T_grid.empty()) throw MetricsConfigError("empty T grid");
    const bool anchored = decoder_uses_anchors(kind);
    if (anchored && (!Ta_grid || Ta_grid->empty()))
        throw MetricsConfigError("anchored decoder kinds need a Ta grid");
    std::vector<double> Ts = T_grid;
    std::sort(Ts.begin(), Ts.end());
    std::vector<double> Tas;
    if (anchored) {
        Tas = *Ta_grid;
        std::sort(Tas.begin(), Tas.end());
    }
    ThresholdChoice best;
    bool found = false;
    // ascending scan with strict improvement: ties stay at the smaller T,
    // then the smaller Ta
    for (double T : Ts) {
        if (!decoder_uses_erasures(kind) && T != 0.0) continue;
        const int ta_count = anchored ? static_cast<int>(Tas.size()) : 1;
        for (int i = 0; i < ta_count; ++i) {
            std::optional<double> Ta;
            if (anchored) {
                if (Tas[i] <= T) continue;
                Ta = Tas[i];
            }
            SweepPoint p = evaluate_point(spec, we, kind, ebn0_ref, T, Ta,
                                          opts);
            best.scanned.push_back(p);
            if (!found || p.ber < best.objective) {
                best.T = T;
                best.Ta = Ta;
                best.objective = p.ber;
                found = true;
            }
        }
    }
    if (!found)
        throw MetricsConfigError("no feasible point on the threshold grid");
    return best;
}

double ConcatConfig::rate() const {
    return static_cast<double>(num_outer) * outer.k_rs * outer.symbol_bits /
           (static_cast<double>(num_inner) * inner.n);
}

CodeSpec ConcatConfig::inner_parent() const {
    if (!inner.shortened()) return inner;
    return make_bch_spec(inner.n + inner.n_short, inner.k + inner.n_short,
                         inner.d_des);
}

namespace {

void validate_concat(const ConcatConfig& cfg) {
    // k_rs == n_rs is the degenerate outer code with no correction power
    if (cfg.outer.n_rs <= 0 || cfg.outer.k_rs <= 0 ||
        cfg.outer.k_rs > cfg.outer.n_rs || cfg.outer.symbol_bits <= 0)
        throw MetricsConfigError("bad outer code parameters");
    if ((cfg.outer.n_rs - cfg.outer.k_rs) % 2 != 0 ||
        cfg.outer.t_rs != (cfg.outer.n_rs - cfg.outer.k_rs) / 2)
        throw MetricsConfigError(
            "outer correction radius must be (n_rs - k_rs) / 2");
    if (cfg.inner.n <= 0) throw MetricsConfigError("missing inner code");
    if (cfg.num_outer <= 0 || cfg.num_inner <= 0 || cfg.syms_per_block <= 0)
        throw MetricsConfigError("bad scheme shape");
    if (cfg.syms_per_block > cfg.outer.n_rs)
        throw MetricsConfigError(
            "a block cannot touch more symbols than a word has");
    if (cfg.mapping == SymbolMapping::same_word &&
        cfg.num_inner % cfg.num_outer != 0)
        throw MetricsConfigError(
            "same-word mapping needs the blocks to split evenly over words");
    if (cfg.strike_w_max <= 0) throw MetricsConfigError("bad strike bound");
}

// Convolution of two capped count vectors; indexes 0..cap-1 stay exact and
// the cap slot collects everything that spills past it. Overflow is
// accumulated term by term (never via 1 - sum) so values far below the
// rounding noise of the bulk mass stay accurate.
std::vector<double> conv_capped(const std::vector<double>& a,
                                const std::vector<double>& b, int cap) {
    std::vector<double> out(cap + 1, 0.0);
    double of = a[cap] + b[cap] - a[cap] * b[cap];
    for (int i = 0; i < cap; ++i) {
        if (a[i] == 0.0) continue;
        for (int j = 0; j < cap - i; ++j) out[i + j] += a[i] * b[j];
        for (int j = cap - i; j < cap; ++j) of += a[i] * b[j];
    }
    out[cap] = of;
    return out;
}

// Per-block, per-word symbol-error pmf: success leaves the word untouched,
// failures keep the errors plus coin-flip erasure fills, miscorrections keep
// their residual weight; each residual weight then strikes symbols through
// the occupancy model.
template <class CellFn>
std::vector<double> block_word_pmf(const JointUE& joint, CellFn&& cell_of,
                                   const SymbolStrikeModel& strike, int cap) {
    std::vector<double> acc(cap + 1, 0.0);
    double covered = 0.0;
    for (const auto& [ue, p] : joint.p) {
        const auto [u, e] = ue;
        auto&& cell = cell_of(u, e);
        covered += p;
        acc[0] += p * cell.p_succ;
        if (cell.p_fail != 0.0) {
            const double half = std::pow(0.5, e);
            for (int j = 0; j <= e; ++j) {
                const double pj = cell.p_fail * binomial_d(e, j) * half;
                const std::vector<double>& v = strike.pmf(u + j);
                for (int m = 0; m <= cap; ++m) acc[m] += p * pj * v[m];
            }
        }
        for (const auto& [r, pm] : cell.p_mc) {
            const std::vector<double>& v = strike.pmf(r);
            for (int m = 0; m <= cap; ++m) acc[m] += p * pm * v[m];
        }
    }
    // channel mass never evaluated counts as overflow (pessimistic)
    acc[cap] += std::max(0.0, 1.0 - covered);
    return acc;
}

std::vector<double> pmf_power(std::vector<double> pmf, int blocks, int cap) {
    if (blocks == 1) return pmf;
    if ((blocks & (blocks - 1)) == 0) {
        for (int m = 1; m < blocks; m <<= 1) pmf = conv_capped(pmf, pmf, cap);
        return pmf;
    }
    std::vector<double> result;
    bool have = false;
    for (int m = blocks; m > 0; m >>= 1) {
        if (m & 1) {
            result = have ? conv_capped(result, pmf, cap) : pmf;
            have = true;
        }
        if (m > 1) pmf = conv_capped(pmf, pmf, cap);
    }
    return result;
}

template <class CellFn>
double scheme_fer(const ConcatConfig& cfg, const EaEChannelParams& channel,
                  CellFn&& cell_of) {
    const int cap = cfg.outer.t_rs + 1;
    SymbolStrikeModel strike(cfg);
    const JointUE joint =
        joint_ue_distribution(cfg.inner.n, channel, cfg.joint_tail);
    std::vector<double> pmf = block_word_pmf(
        joint, std::forward<CellFn>(cell_of), strike, cap);
    const int blocks = cfg.mapping == SymbolMapping::same_word
                           ? cfg.num_inner / cfg.num_outer
                           : cfg.num_inner;
    pmf = pmf_power(std::move(pmf), blocks, cap);
    const double fer_word = pmf[cap];
    return -std::expm1(cfg.num_outer * std::log1p(-fer_word));
}

}  // namespace

SymbolStrikeModel::SymbolStrikeModel(const ConcatConfig& cfg)
    : syms_(cfg.syms_per_block),
      words_(cfg.num_outer),
      w_max_(cfg.strike_w_max),
      cap_(cfg.outer.t_rs + 1),
      mapping_(cfg.mapping) {
    validate_concat(cfg);
    // occupancy walk: each further bit error hits a fresh symbol of the
    // block with probability 1 - d / syms
    occupancy_.reserve(w_max_ + 1);
    std::vector<double> row(syms_ + 1, 0.0);
    row[0] = 1.0;
    occupancy_.push_back(std::move(row));
    for (int w = 0; w < w_max_; ++w) {
        const std::vector<double>& prev = occupancy_.back();
        std::vector<double> nxt(syms_ + 1, 0.0);
        for (int d = 0; d <= syms_; ++d) {
            const double p = prev[d];
            if (p == 0.0) continue;
            nxt[d] += p * (static_cast<double>(d) / syms_);
            if (d < syms_) nxt[d + 1] += p * (1.0 - static_cast<double>(d) / syms_);
        }
        occupancy_.push_back(std::move(nxt));
    }
}

const std::vector<double>& SymbolStrikeModel::pmf(int w) const {
    w = std::min(w, w_max_);
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    std::vector<double> out(cap_ + 1, 0.0);
    const double q = 1.0 / words_;
    for (int d = 0; d <= syms_; ++d) {
        const double pd = occupancy_[w][d];
        if (pd <= 0.0) continue;
        if (mapping_ == SymbolMapping::same_word) {
            out[std::min(d, cap_)] += pd;
            continue;
        }
        // each distinct hit symbol belongs to the considered word w.p. 1/words
        for (int m = 0; m <= d; ++m) {
            const double pm = pd * binomial_d(d, m) * std::pow(q, m) *
                              std::pow(1.0 - q, d - m);
            out[std::min(m, cap_)] += pm;
        }
    }
    return cache_.emplace(w, std::move(out)).first->second;
}

double concat_fer(const ConcatConfig& cfg, const EaedDtp<double>& dtp_inner,
                  const EaEChannelParams& channel) {
    validate_concat(cfg);
    if (dtp_inner.spec.n != cfg.inner_parent().n)
        throw MetricsConfigError(
            "inner table must live on the parent of the shortened code");
    return scheme_fer(cfg, channel, [&](int u, int e) {
        return dtp_inner.cell_or_truncated(u, e);
    });
}

double concat_fer_at(const ConcatConfig& cfg, double ebn0_db, double T,
                     std::optional<double> Ta) {
    validate_concat(cfg);
    if (T < 0.0) throw MetricsConfigError("negative erasure threshold");
    if (T > 0.0 && !Ta)
        throw MetricsConfigError(
            "erasure decoding of the inner code here runs anchored; give Ta");
    const CodeSpec parent = cfg.inner_parent();
    const WeightEnumerator we = approx_weight_enumerator(parent);
    const double sigma = sigma_from_ebn0_db(ebn0_db, cfg.rate());
    const EaEChannelParams ch = quantize(sigma, T);
    // shortened positions are known-correct anchors; transmitted positions
    // add the channel-measured anchors on top
    const double n_parent = parent.n;
    DtpOptions<double> opt;
    opt.m_kernel = cfg.m_kernel;
    opt.pca = cfg.inner.n_short / n_parent;
    opt.pwa = 0.0;
    if (Ta) {
        const AnchorProbs an = anchors_for(sigma, T, Ta);
        opt.pca += cfg.inner.n / n_parent * an.p_ca;
        opt.pwa = an.p_wa;
    }
    DtpCalculator<double> calc(parent, we, opt);
    return scheme_fer(cfg, ch, [&](int u, int e) -> const EaedCell<double>& {
        return calc.cell(u, e);
    });
}

ThresholdChoice optimize_thresholds_concat(const ConcatConfig& cfg,
                                           double ebn0_ref,
                                           const std::vector<double>& T_grid,
                                           const std::vector<double>& Ta_grid) {
    if (T_grid.empty() || Ta_grid.empty())
        throw MetricsConfigError("empty threshold grid");
    std::vector<double> Ts = T_grid;
    std::sort(Ts.begin(), Ts.end());
    std::vector<double> Tas = Ta_grid;
    std::sort(Tas.begin(), Tas.end());
    ThresholdChoice best;
    bool found = false;
    for (double T : Ts) {
        for (double Ta : Tas) {
            if (Ta <= T) continue;
            SweepPoint p;
            p.ebn0_db = ebn0_ref;
            p.T = T;
            p.Ta = Ta;
            p.fer = concat_fer_at(cfg, ebn0_ref, T, Ta);
            best.scanned.push_back(p);
            if (!found || p.fer < best.objective) {
                best.T = T;
                best.Ta = Ta;
                best.objective = p.fer;
                found = true;
            }
        }
    }
    if (!found)
        throw MetricsConfigError("no feasible point on the threshold grid");
    return best;
}

void write_concat_csv(std::ostream& os,
                      const std::vector<SweepPoint>& points) {
    os << "# schema bchdtp.concat.v1\n";
    os << "ebn0_db,fer,T,Ta\n";
    os.precision(17);
    for (const SweepPoint& p : points) {
        os << p.ebn0_db << "," << p.fer << "," << p.T << ",";
        if (p.Ta) os << *p.Ta;
        os << "\n";
    }
}

}  // namespace bchdtp
