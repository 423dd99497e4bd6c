#include "bchdtp/dtp_bdd.hpp"

#include <ostream>
#include <stdexcept>

namespace bchdtp {

template <class S>
BddRow<S> bdd_row(const CodeSpec& spec, const std::map<int, S>& A, int u,
                  const S& pca, const S& pwa, SuccessAcceptance success) {
    const int t = spec.t, n = spec.n;
    if (u < 0 || u > n)
        throw std::invalid_argument("bdd_row: u outside [0, n]");
    BddRow<S> row;
    if (u <= t) {
        // within the guaranteed radius the decoder reaches the transmitted
        // word; an anchored flipped bit blocks acceptance of it
        S succ = (success == SuccessAcceptance::anchor_gated)
                     ? spow<S>(S(1) - pwa, u)
                     : S(1);
        row.p_succ = succ;
        row.p_fail = S(1) - succ;
        return row;
    }
    // a flips inside the wrong codeword's support move toward it, b flips
    // outside move away; a + b <= t keeps the received word in its sphere
    S denom = from_count<S>(binomial(n, u));
    S keep_c = S(1) - pca;  // a corrected-to-one bit must not be anchored
    S keep_w = S(1) - pwa;  // same for a bit flipped back to zero
    S mc_tot{};
    for (int a = 0; a <= t; ++a) {
        for (int b = 0; a + b <= t; ++b) {
            int r = u + a - b;
            if (r < 0 || r > n) continue;
            auto it = A.find(r);
            if (it == A.end() || it->second == S{}) continue;
            S cnt = it->second * from_count<S>(binomial(r, a)) *
                    from_count<S>(binomial(n - r, b)) / denom;
            if (cnt == S{}) continue;
            S p = cnt * spow<S>(keep_c, a) * spow<S>(keep_w, b);
            row.p_mc[r] += p;
            mc_tot += p;
        }
    }
    row.p_fail = S(1) - mc_tot;
    // an all-anchored payout can zero a bucket; keep only live entries
    for (auto it = row.p_mc.begin(); it != row.p_mc.end();)
        it = (it->second == S{}) ? row.p_mc.erase(it) : std::next(it);
    return row;
}

template BddRow<Rational> bdd_row(const CodeSpec&, const std::map<int, Rational>&,
                                  int, const Rational&, const Rational&,
                                  SuccessAcceptance);
template BddRow<double> bdd_row(const CodeSpec&, const std::map<int, double>&,
                                int, const double&, const double&,
                                SuccessAcceptance);

BddDtp<Rational> bdd_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                         int u_max) {
    BddDtp<Rational> dtp;
    dtp.spec = spec;
    dtp.enum_mode = we.mode;
    auto A = we.as<Rational>();
    for (int u = 0; u <= u_max; ++u)
        dtp.rows.push_back(
            bdd_row<Rational>(spec, A, u, Rational(0), Rational(0),
                              SuccessAcceptance::anchor_gated));
    return dtp;
}

BddDtp<double> bdd_a_dtp(const CodeSpec& spec, const WeightEnumerator& we,
                         const AnchorProbs& anchors, int u_max,
                         SuccessAcceptance success) {
    BddDtp<double> dtp;
    dtp.spec = spec;
    dtp.enum_mode = we.mode;
    dtp.anchors = anchors;
    dtp.success = success;
    auto A = we.as<double>();
    for (int u = 0; u <= u_max; ++u)
        dtp.rows.push_back(
            bdd_row<double>(spec, A, u, anchors.p_ca, anchors.p_wa, success));
    return dtp;
}

template <class S>
void write_bdd_csv(std::ostream& os, const BddDtp<S>& dtp) {
    os << "# schema bchdtp.dtp.bdd.v1\n";
    os << "u,outcome,r,probability\n";
    os.precision(17);
    auto val = [](const S& v) {
        if constexpr (std::is_same_v<S, Rational>)
            return to_double(v);
        else
            return v;
    };
    for (int u = 0; u <= dtp.u_max(); ++u) {
        const BddRow<S>& row = dtp.row(u);
        os << u << ",success,0," << val(row.p_succ) << "\n";
        os << u << ",failure," << u << "," << val(row.p_fail) << "\n";
        for (const auto& [r, v] : row.p_mc)
            os << u << ",miscorrection," << r << "," << val(v) << "\n";
    }
}

template void write_bdd_csv(std::ostream&, const BddDtp<Rational>&);
template void write_bdd_csv(std::ostream&, const BddDtp<double>&);

}  // namespace bchdtp
