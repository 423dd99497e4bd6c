#include "bchdtp/channel_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bchdtp/numerics.hpp"

namespace bchdtp {

double sigma_from_ebn0_db(double ebn0_db, double rate) {
    if (rate <= 0.0 || rate > 1.0)
        throw std::domain_error("sigma_from_ebn0_db: rate outside (0, 1]");
    return 1.0 / std::sqrt(2.0 * rate * std::pow(10.0, ebn0_db / 10.0));
}

EaEChannelParams quantize(double sigma, double T) {
    if (sigma <= 0.0) throw std::domain_error("quantize: sigma <= 0");
    if (T < 0.0) throw std::domain_error("quantize: T < 0");
    if (T == 0.0) return {q_function(1.0 / sigma), 0.0};
    double delta = q_function((T + 1.0) / sigma);
    double eps = 1.0 - q_function((T - 1.0) / sigma) - delta;
    if (eps < 0.0) {
        std::ostringstream os;
        os << "quantize: erasure zone has negative mass (sigma=" << sigma
           << ", T=" << T << ", eps=" << eps << ")";
        throw std::domain_error(os.str());
    }
    return {delta, eps};
}

AnchorProbs anchor_probs_bsc(double sigma, double T_a) {
    if (T_a <= 0.0)
        throw std::invalid_argument("anchor_probs_bsc: need T_a > 0");
    double delta = q_function(1.0 / sigma);
    AnchorProbs a;
    a.p_ca = q_function((T_a - 1.0) / sigma) / (1.0 - delta);
    a.p_wa = q_function((T_a + 1.0) / sigma) / delta;
    return a;
}

AnchorProbs anchor_probs_eae(double sigma, double T, double T_a) {
    if (T_a <= T)
        throw std::invalid_argument("anchor_probs_eae: need T_a > T");
    EaEChannelParams ch = quantize(sigma, T);
    AnchorProbs a;
    a.p_ca = q_function((T_a - 1.0) / sigma) / ch.ok();
    a.p_wa = q_function((T_a + 1.0) / sigma) / ch.delta_c;
    return a;
}

double JointUE::total() const {
    double s = 0.0;
    for (const auto& [ue, v] : p) s += v;
    return s;
}

JointUE joint_ue_distribution(int n, const EaEChannelParams& ch, double tail) {
    const double delta = ch.delta_c;
    const double eps = ch.epsilon_c;
    const double ok = ch.ok();
    JointUE out;
    out.n = n;
    for (int u = 0; u <= n; ++u) {
        double pu = binomial_d(n, u) * std::pow(delta, u);
        if (!std::isfinite(pu) || (pu == 0.0 && u > 0 && delta > 0.0)) {
            // C(n,u) overflowed or delta^u underflowed; recombine in logs
            pu = (delta > 0.0)
                     ? std::exp(log_binomial(n, u) + u * std::log(delta))
                     : 0.0;
        }
        if (pu == 0.0 && u > 0) break;
        double row_best = 0.0;
        for (int e = 0; e <= n - u; ++e) {
            double p = pu * binomial_d(n - u, e) * std::pow(eps, e) *
                       std::pow(ok, n - u - e);
            if (!std::isfinite(p)) {
                p = (eps > 0.0 && ok > 0.0)
                        ? std::exp(log_binomial(n, u) + u * std::log(delta) +
                                   log_binomial(n - u, e) + e * std::log(eps) +
                                   (n - u - e) * std::log(ok))
                        : 0.0;
            }
            row_best = std::max(row_best, p);
            if (p >= tail) {
                out.p[{u, e}] = p;
            } else if (e > eps * n + 8) {
                break;
            }
        }
        if (row_best < tail && u > delta * n + 8) break;
    }
    return out;
}

int default_e_max(int n, const EaEChannelParams& ch, double tail) {
    double eps = ch.epsilon_c;
    std::vector<double> pmf(n + 1, 0.0);
    if (eps <= 0.0) {
        pmf[0] = 1.0;
    } else {
        for (int e = 0; e <= n; ++e) {
            double p = binomial_d(n, e) * std::pow(eps, e) *
                       std::pow(1.0 - eps, n - e);
            if (!std::isfinite(p))
                p = std::exp(log_binomial(n, e) + e * std::log(eps) +
                             (n - e) * std::log1p(-eps));
            pmf[e] = p;
        }
    }
    // suffix[e] = P(E >= e); return the first e where it drops under the tail
    double suffix = 0.0;
    std::vector<double> survivor(n + 2, 0.0);
    for (int e = n; e >= 0; --e) {
        suffix += pmf[e];
        survivor[e] = suffix;
    }
    for (int e = 0; e <= n + 1; ++e)
        if (survivor[e] < tail) return e;
    return n + 1;
}

double uncoded_ber(double ebn0_db, double rate) {
    return q_function(1.0 / sigma_from_ebn0_db(ebn0_db, rate));
}

}  // namespace bchdtp
