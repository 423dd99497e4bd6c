#include "bchdtp/dtp_eaed.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bchdtp {

namespace {

// fill split probability C(e, e1) / 2^e in the computation type
template <class S>
S mix_weight(int e, int e1);
template <>
Rational mix_weight<Rational>(int e, int e1) {
    return make_ratio(binomial(e, e1), BigCount(1) << e);
}
template <>
double mix_weight<double>(int e, int e1) {
    return binomial_d(e, e1) * std::ldexp(1.0, -e);
}

// Region M: the two runs are independent; a run with no accepted candidate
// fails, two candidates split the contest evenly.
template <class S>
EaedCell<S> combine_independent(int u, int e, const std::map<int, S>& m1,
                                const S& tot1, const std::map<int, S>& m2,
                                const S& tot2) {
    EaedCell<S> out;
    out.u = u;
    out.e = e;
    out.p_fail = (S(1) - tot1) * (S(1) - tot2);
    for (const auto& [r, p] : m1) out.p_mc[r] += p * (S(1) - tot2) + p * tot2 / 2;
    for (const auto& [r, p] : m2) out.p_mc[r] += p * (S(1) - tot1) + p * tot1 / 2;
    return out;
}

// Branches that only carry mass when anchors are on can leave exact-zero
// buckets behind; drop them so maps compare cleanly and CSVs stay minimal.
template <class S>
void prune_zero_entries(std::map<int, S>& m) {
    for (auto it = m.begin(); it != m.end();)
        it = (it->second == S(0)) ? m.erase(it) : std::next(it);
}

}  // namespace

FillRegion classify_region(int u, int e, int e1, int t) {
    if (u > t) return FillRegion::M;
    if (e1 <= t - u) return FillRegion::L;
    if (e1 >= u + e - t) return FillRegion::R;
    return FillRegion::M;
}

std::vector<Rational> e1_distribution(int e) {
    if (e < 0) throw std::invalid_argument("e1_distribution: e < 0");
    std::vector<Rational> out;
    out.reserve(e + 1);
    for (int e1 = 0; e1 <= e; ++e1) out.push_back(mix_weight<Rational>(e, e1));
    return out;
}

BigCount RegionCounts::classified_total() const {
    BigCount s = 0;
    for (const auto& [r, c] : L11) s += c;
    for (const auto& [r, c] : L12) s += c;
    for (const auto& [r, c] : L13) s += c;
    return s;
}

bool RegionCounts::consistent() const {
    return classified_total() + L2 == theta;
}

BigCount v_count(int r, int u, int e, int e1, int a, int b, int lambda,
                 int gamma, const CodeSpec& spec,
                 const std::map<int, BigCount>& A) {
    const int n = spec.n;
    const int e2 = e - e1;
    auto it = A.find(r);
    if (it == A.end()) return 0;
    (void)u;
    return it->second * binomial(r, a) * binomial(n - r, b) *
           binomial(n - r - b, lambda) * binomial(a, e1 - lambda) *
           binomial(b, gamma) * binomial(r - a, e2 - gamma);
}

RegionCounts region_L_counts(const CodeSpec& spec, const WeightEnumerator& we,
                             int u, int e, int e1) {
    const int t = spec.t, n = spec.n;
    const int e2 = e - e1;
    if (u + e1 > t || u + e2 <= t)
        throw std::invalid_argument(
            "region_L_counts: needs u + e1 <= t < u + (e - e1)");
    std::map<int, BigCount> A;
    for (const auto& [w, a] : we.weights) {
        if (a.get_den() != 1)
            throw std::invalid_argument(
                "region_L_counts: needs an integer weight enumerator");
        A[w] = a.get_num();
    }

    RegionCounts out;
    out.theta = binomial(n, u) * binomial(n - u, e) * binomial(e, e1);
    BigCount counted = 0;
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; a + b <= t; ++b) {
            int r = u + e2 + a - b;
            if (r < 0 || r > n) continue;
            if (!A.count(r) || A.at(r) == 0) continue;
            for (int lam = std::max(0, e1 - a);
                 lam <= std::min(n - r - b, e1); ++lam) {
                for (int gam = std::max(0, e2 - (r - a));
                     gam <= std::min(b, e2); ++gam) {
                    BigCount V = v_count(r, u, e, e1, a, b, lam, gam, spec, A);
                    if (V == 0) continue;
                    counted += V;
                    // who wins the distance contest on non-erased positions
                    int lhs = lam - gam;
                    int rhs = u + e1 - a - b;
                    if (lhs < rhs)
                        out.L11[r] += V;
                    else if (lhs > rhs)
                        out.L12[r] += V;
                    else
                        out.L13[r] += V;
                }
            }
        }
    }
    out.L2 = out.theta - counted;
    return out;
}

template <class S>
DtpCalculator<S>::DtpCalculator(const CodeSpec& spec,
                                const WeightEnumerator& we, DtpOptions<S> opt)
    : spec_(spec), mode_(we.mode), opt_(std::move(opt)), A_(we.template as<S>()) {
    if (we.n != spec.n || we.k != spec.k)
        throw std::invalid_argument(
            "DtpCalculator: enumerator does not match the code");
}

template <class S>
const BddRow<S>& DtpCalculator<S>::bdd_row_for(int u, bool with_anchors) {
    auto key = std::pair(u, with_anchors);
    auto it = bdd_cache_.find(key);
    if (it != bdd_cache_.end()) return it->second;
    S pca = with_anchors ? opt_.pca : S{};
    S pwa = with_anchors ? opt_.pwa : S{};
    BddRow<S> row = bdd_row<S>(spec_, A_, u, pca, pwa, opt_.success);
    return bdd_cache_.emplace(key, std::move(row)).first->second;
}

template <class S>
const std::pair<std::map<int, S>, S>& DtpCalculator<S>::single_pattern(int u,
                                                                       int e,
                                                                       int f) {
    auto key = std::tuple(u, e, f);
    auto it = sp_cache_.find(key);
    if (it != sp_cache_.end()) return it->second;

    const int t = spec_.t, n = spec_.n;
    const int W = u + f;
    if (u < 0 || e < 0 || f < 0 || f > e || u + e > n)
        throw std::invalid_argument("single_pattern: bad (u, e, f)");
    if (W <= t)
        throw std::invalid_argument(
            "single_pattern: filled weight must exceed t");

    S denom = from_count<S>(binomial(n, u) * binomial(n - u, e) *
                            binomial(e, f));
    S keep_c = S(1) - opt_.pca;
    S keep_w = S(1) - opt_.pwa;
    std::map<int, S> mc;
    S tot{};
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; a + b <= t; ++b) {
            int r = W + a - b;
            if (r < 0 || r > n) continue;
            auto itA = A_.find(r);
            if (itA == A_.end() || itA->second == S{}) continue;
            S base = itA->second * from_count<S>(binomial(r, a)) *
                     from_count<S>(binomial(n - r, b));
            if (base == S{}) continue;
            // n_wa of the b outward flips were real errors (anchorable);
            // c1 fill-ones sit on the candidate's support
            for (int n_wa = 0; n_wa <= b; ++n_wa) {
                int c1 = f - (b - n_wa);
                if (c1 < 0 || c1 > r - a) continue;
                S w1 = from_count<S>(binomial(b, n_wa) * binomial(r - a, c1));
                // n_ca of the a inward flips were correct bits (anchorable);
                // d1 zero-filled erasures lie off support among the rest
                for (int n_ca = 0; n_ca <= a; ++n_ca) {
                    int d1 = (e - f) - (a - n_ca);
                    if (d1 < 0 || d1 > n - r - b) continue;
                    S w2 = from_count<S>(binomial(a, n_ca) *
                                         binomial(n - r - b, d1));
                    S cnt = base * w1 * w2;
                    if (cnt == S{}) continue;
                    S p = cnt / denom * spow<S>(keep_c, n_ca) *
                          spow<S>(keep_w, n_wa);
                    mc[r] += p;
                    tot += p;
                }
            }
        }
    }
    prune_zero_entries(mc);
    return sp_cache_.emplace(key, std::pair(std::move(mc), tot)).first->second;
}

template <class S>
EaedCell<S> DtpCalculator<S>::region_L(int u, int e, int e1) {
    const int t = spec_.t, n = spec_.n;
    const int e2 = e - e1;
    if (u + e1 > t || u + e2 <= t)
        throw std::invalid_argument("region_L: needs u + e1 <= t < u + (e - e1)");

    const S one{1};
    S P0 = spow<S>(one - opt_.pwa, u);
    S keep_c = one - opt_.pca;
    S keep_w = one - opt_.pwa;
    S theta = from_count<S>(binomial(n, u) * binomial(n - u, e) *
                            binomial(e, e1));
    S succ{}, fail{}, counted{};
    std::map<int, S> mc;
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; a + b <= t; ++b) {
            int r = u + e2 + a - b;
            if (r < 0 || r > n) continue;
            auto itA = A_.find(r);
            if (itA == A_.end() || itA->second == S{}) continue;
            S base = itA->second * from_count<S>(binomial(r, a)) *
                     from_count<S>(binomial(n - r, b));
            for (int lam = std::max(0, e1 - a);
                 lam <= std::min(n - r - b, e1); ++lam) {
                S wl = from_count<S>(binomial(n - r - b, lam) *
                                     binomial(a, e1 - lam));
                for (int gam = std::max(0, e2 - (r - a));
                     gam <= std::min(b, e2); ++gam) {
                    S V = base * wl *
                          from_count<S>(binomial(b, gam) *
                                        binomial(r - a, e2 - gam));
                    if (V == S{}) continue;
                    counted += V;
                    // acceptance of the wrong word: its a inward flips and
                    // b - gam outward real errors must all be unanchored
                    // (fill-ones among them were erasures, never anchored)
                    S Pc = spow<S>(keep_c, a - (e1 - lam)) *
                           spow<S>(keep_w, b - gam);
                    int lhs = lam - gam;
                    int rhs = u + e1 - a - b;
                    if (lhs < rhs) {
                        // wrong word closer on the non-erased positions
                        mc[r] += V * Pc;
                        succ += V * P0 * (one - Pc);
                    } else if (lhs > rhs) {
                        succ += V * P0;
                        mc[r] += V * (one - P0) * Pc;
                    } else {
                        mc[r] += V * ((one - P0) * Pc + P0 * Pc / 2);
                        succ += V * (P0 * (one - Pc) + P0 * Pc / 2);
                    }
                    fail += V * (one - P0) * (one - Pc);
                }
            }
        }
    }
    // configurations whose heavy pattern produced no candidate
    S L2 = theta - counted;
    succ += L2 * P0;
    fail += L2 * (one - P0);

    EaedCell<S> out;
    out.u = u;
    out.e = e;
    out.p_succ = succ / theta;
    out.p_fail = fail / theta;
    for (auto& [r, v] : mc) out.p_mc[r] = v / theta;
    prune_zero_entries(out.p_mc);
    return out;
}

template <class S>
EaedCell<S> DtpCalculator<S>::region_M(int u, int e, int e1) {
    const int e2 = e - e1;
    bool use_sp = anchored() && opt_.m_kernel == RegionMKernel::single_pattern;
    if (use_sp) {
        const auto& [m1, tot1] = single_pattern(u, e, e1);
        // copies: the cache reference can move on the second lookup
        std::map<int, S> m1c = m1;
        S tot1c = tot1;
        const auto& [m2, tot2] = single_pattern(u, e, e2);
        return combine_independent(u, e, m1c, tot1c, m2, tot2);
    }
    const BddRow<S>& r1 = bdd_row_for(u + e1, anchored());
    std::map<int, S> m1 = r1.p_mc;
    S tot1 = r1.mc_total();
    const BddRow<S>& r2 = bdd_row_for(u + e2, anchored());
    return combine_independent(u, e, m1, tot1, r2.p_mc, r2.mc_total());
}

template <class S>
EaedCell<S> DtpCalculator<S>::fill_cell(int u, int e, int e1) {
    const int t = spec_.t;
    const int d = spec_.distance();
    const int e2 = e - e1;
    const int w1 = u + e1, w2 = u + e2;
    if (u < 0 || e < 0 || e1 < 0 || e1 > e || u + e > spec_.n)
        throw std::invalid_argument("fill_cell: bad (u, e, e1)");

    const S one{1};
    S P0 = spow<S>(one - opt_.pwa, u);
    EaedCell<S> out;
    out.u = u;
    out.e = e;
    if (2 * u + e < d) {
        // short cell: the two filled words are close enough that codeword
        // spheres cannot capture both runs; outcomes split exactly
        bool dec1 = w1 <= t, dec2 = w2 <= t;
        bool can1 = w1 >= d - t, can2 = w2 >= d - t;
        if ((dec1 && !can2) || (dec2 && !can1)) {
            out.p_succ = P0;
            out.p_fail = one - P0;
        } else if (dec1 && can2) {
            const auto& [mc, tot] = single_pattern(u, e, e2);
            out.p_succ = P0;
            out.p_fail = (one - P0) * (one - tot);
            for (const auto& [r, v] : mc) out.p_mc[r] = (one - P0) * v;
        } else if (dec2 && can1) {
            const auto& [mc, tot] = single_pattern(u, e, e1);
            out.p_succ = P0;
            out.p_fail = (one - P0) * (one - tot);
            for (const auto& [r, v] : mc) out.p_mc[r] = (one - P0) * v;
        } else {
            // unreachable for odd-distance codes: both runs undecodable
            // forces 2u + e >= d + 1
            out.p_fail = one;
        }
        return out;
    }
    if (w1 <= t) return region_L(u, e, e1);
    if (w2 <= t) return region_L(u, e, e2);
    return region_M(u, e, e1);
}

template <class S>
const EaedCell<S>& DtpCalculator<S>::cell(int u, int e) {
    auto key = std::pair(u, e);
    auto it = cell_cache_.find(key);
    if (it != cell_cache_.end()) return it->second;

    EaedCell<S> out;
    out.u = u;
    out.e = e;
    if (e == 0) {
        const BddRow<S>& row = bdd_row_for(u, true);
        out.p_succ = row.p_succ;
        out.p_fail = row.p_fail;
        out.p_mc = row.p_mc;
    } else {
        for (int e1 = 0; e1 <= e; ++e1) {
            S w = mix_weight<S>(e, e1);
            EaedCell<S> part = fill_cell(u, e, e1);
            out.p_succ += w * part.p_succ;
            out.p_fail += w * part.p_fail;
            for (const auto& [r, v] : part.p_mc) out.p_mc[r] += w * v;
        }
    }
    return cell_cache_.emplace(key, std::move(out)).first->second;
}

template class DtpCalculator<Rational>;
template class DtpCalculator<double>;

EaedDtp<Rational> eaed_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                           int e_max, int u_max) {
    DtpCalculator<Rational> calc(spec, we);
    EaedDtp<Rational> dtp;
    dtp.spec = spec;
    dtp.enum_mode = we.mode;
    dtp.u_max = u_max;
    dtp.e_max = e_max;
    for (int u = 0; u <= u_max; ++u)
        for (int e = 0; e <= e_max && u + e <= spec.n; ++e)
            dtp.cells.emplace(std::pair(u, e), calc.cell(u, e));
    return dtp;
}

EaedDtp<double> eaed_a_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                           const AnchorProbs& anchors, int e_max, int u_max,
                           SuccessAcceptance success, RegionMKernel m_kernel) {
    DtpOptions<double> opt{anchors.p_ca, anchors.p_wa, success, m_kernel};
    DtpCalculator<double> calc(spec, we, opt);
    EaedDtp<double> dtp;
    dtp.spec = spec;
    dtp.enum_mode = we.mode;
    dtp.anchors = anchors;
    dtp.success = success;
    dtp.m_kernel = m_kernel;
    dtp.u_max = u_max;
    dtp.e_max = e_max;
    for (int u = 0; u <= u_max; ++u)
        for (int e = 0; e <= e_max && u + e <= spec.n; ++e)
            dtp.cells.emplace(std::pair(u, e), calc.cell(u, e));
    return dtp;
}

EaedCell<Rational> region_L_dtp(const CodeSpec& spec,
                                const WeightEnumerator& we, int u, int e,
                                int e1) {
    DtpCalculator<Rational> calc(spec, we);
    return calc.region_L(u, e, e1);
}

EaedCell<Rational> region_M_dtp(int u, int e, int e1, const CodeSpec& spec,
                                const BddDtp<Rational>& bdd) {
    const int e2 = e - e1;
    if (u + e1 <= spec.t || u + e2 <= spec.t)
        throw std::invalid_argument(
            "region_M_dtp: both filled weights must exceed t");
    const BddRow<Rational>& r1 = bdd.row(u + e1);
    const BddRow<Rational>& r2 = bdd.row(u + e2);
    return combine_independent(u, e, r1.p_mc, r1.mc_total(), r2.p_mc,
                               r2.mc_total());
}

std::pair<std::map<int, double>, double> single_pattern_anchored_dtp(
    int u, int e, int f, const CodeSpec& spec, const WeightEnumerator& we,
    const AnchorProbs& anchors) {
    DtpOptions<double> opt{anchors.p_ca, anchors.p_wa,
                           SuccessAcceptance::anchor_gated,
                           RegionMKernel::single_pattern};
    DtpCalculator<double> calc(spec, we, opt);
    return calc.single_pattern(u, e, f);
}

namespace {

std::string region_flags(const CodeSpec& spec, int u, int e) {
    if (e == 0) return "B";
    if (2 * u + e < spec.distance()) return "S";
    bool L = false, M = false, R = false;
    for (int e1 = 0; e1 <= e; ++e1) {
        switch (classify_region(u, e, e1, spec.t)) {
            case FillRegion::L: L = true; break;
            case FillRegion::M: M = true; break;
            case FillRegion::R: R = true; break;
        }
    }
    std::string out;
    if (L) out += 'L';
    if (M) out += 'M';
    if (R) out += 'R';
    return out;
}

template <class S>
double as_double(const S& v) {
    if constexpr (std::is_same_v<S, Rational>)
        return to_double(v);
    else
        return v;
}

}  // namespace

template <class S>
void write_eaed_csv(std::ostream& os, const EaedDtp<S>& dtp) {
    os << "# schema bchdtp.dtp.eaed.v1\n";
    os << "u,e,outcome,2r,probability,region_flags\n";
    os.precision(17);
    for (const auto& [ue, cell] : dtp.cells) {
        auto [u, e] = ue;
        std::string flags = region_flags(dtp.spec, u, e);
        os << u << "," << e << ",success,0," << as_double(cell.p_succ) << ","
           << flags << "\n";
        os << u << "," << e << ",failure," << (2 * u + e) << ","
           << as_double(cell.p_fail) << "," << flags << "\n";
        for (const auto& [r, v] : cell.p_mc)
            os << u << "," << e << ",miscorrection," << 2 * r << ","
               << as_double(v) << "," << flags << "\n";
    }
}

template void write_eaed_csv(std::ostream&, const EaedDtp<Rational>&);
template void write_eaed_csv(std::ostream&, const EaedDtp<double>&);

template <class S>
void write_eaed_meta_json(std::ostream& os, const EaedDtp<S>& dtp) {
    nlohmann::json j;
    j["schema"] = "bchdtp.dtp.eaed.v1";
    j["code"] = {{"n", dtp.spec.n},
                 {"k", dtp.spec.k},
                 {"d_des", dtp.spec.d_des},
                 {"t", dtp.spec.t},
                 {"n_short", dtp.spec.n_short}};
    j["enumerator"] = dtp.enum_mode == EnumeratorMode::exact
                          ? "exact"
                          : "binomial-approx";
    j["arithmetic"] = std::is_same_v<S, Rational> ? "rational" : "double";
    j["anchors"] = {{"p_ca", dtp.anchors.p_ca}, {"p_wa", dtp.anchors.p_wa}};
    j["success"] = dtp.success == SuccessAcceptance::anchor_gated
                       ? "anchor_gated"
                       : "always";
    j["region_m_kernel"] = dtp.m_kernel == RegionMKernel::single_pattern
                               ? "single_pattern"
                               : "anchored_row";
    j["u_max"] = dtp.u_max;
    j["e_max"] = dtp.e_max;
    os << j.dump(2) << "\n";
}

template void write_eaed_meta_json(std::ostream&, const EaedDtp<Rational>&);
template void write_eaed_meta_json(std::ostream&, const EaedDtp<double>&);

}  // namespace bchdtp
