#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "bchdtp/channel_model.hpp"

using namespace bchdtp;

namespace {
constexpr double kRate = 239.0 / 255.0;
}

TEST_CASE("sigma from Eb/N0") {
    CHECK(sigma_from_ebn0_db(7.0, kRate) ==
          doctest::Approx(0.3262542230500063).epsilon(1e-14));
    CHECK(sigma_from_ebn0_db(6.0, kRate) ==
          doctest::Approx(0.366063259056056).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_from_ebn0_db(7.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(sigma_from_ebn0_db(7.0, 1.5), std::domain_error);
}

TEST_CASE("quantize at T = 0 is the hard-decision channel") {
    double sigma = sigma_from_ebn0_db(6.0, kRate);
    EaEChannelParams ch = quantize(sigma, 0.0);
    CHECK(ch.delta_c == doctest::Approx(0.003149771469079612).epsilon(1e-12));
    CHECK(ch.epsilon_c == 0.0);
    CHECK(ch.ok() == doctest::Approx(1.0 - 0.003149771469079612).epsilon(1e-12));
}

TEST_CASE("quantize with an erasure zone") {
    double sigma = sigma_from_ebn0_db(7.0, kRate);
    EaEChannelParams a = quantize(sigma, 0.16);
    CHECK(a.delta_c == doctest::Approx(0.0001886236330962069).epsilon(1e-12));
    CHECK(a.epsilon_c == doctest::Approx(0.0048280295333669515).epsilon(1e-12));

    EaEChannelParams b = quantize(sigma, 0.13);
    CHECK(b.delta_c == doctest::Approx(0.0002665421170571338).epsilon(1e-12));
    CHECK(b.epsilon_c == doctest::Approx(0.0035642318291142392).epsilon(1e-12));
}

TEST_CASE("quantize rejects infeasible parameters") {
    CHECK_THROWS_AS(quantize(-0.3, 0.1), std::domain_error);
    CHECK_THROWS_AS(quantize(0.3, -0.1), std::domain_error);
    // a vanishingly thin erasure zone at low noise rounds to negative mass
    CHECK_THROWS_AS(quantize(0.05, 1e-13), std::domain_error);
}

TEST_CASE("anchor probabilities, three-level channel") {
    double sigma = sigma_from_ebn0_db(7.0, kRate);
    AnchorProbs a = anchor_probs_eae(sigma, 0.13, 0.75);
    CHECK(a.p_ca == doctest::Approx(0.7812359786187855).epsilon(1e-12));
    CHECK(a.p_wa == doctest::Approx(0.00015276596697349733).epsilon(1e-12));
    CHECK(a.p_wa < a.p_ca);
    CHECK(a.p_ca < 1.0);
    CHECK(a.any());
    CHECK_FALSE(AnchorProbs{}.any());
    CHECK_THROWS_AS(anchor_probs_eae(sigma, 0.16, 0.10), std::invalid_argument);
    CHECK_THROWS_AS(anchor_probs_eae(sigma, 0.16, 0.16), std::invalid_argument);
}

TEST_CASE("anchor probabilities, hard-decision channel") {
    double sigma = sigma_from_ebn0_db(6.0, kRate);
    AnchorProbs a = anchor_probs_bsc(sigma, 0.75);
    CHECK(a.p_ca == doctest::Approx(0.7550565312141826).epsilon(1e-12));
    CHECK(a.p_wa == doctest::Approx(0.00027744486682582933).epsilon(1e-12));
    CHECK_THROWS_AS(anchor_probs_bsc(sigma, 0.0), std::invalid_argument);
}

TEST_CASE("joint error/erasure distribution") {
    double sigma = sigma_from_ebn0_db(7.0, kRate);
    EaEChannelParams ch = quantize(sigma, 0.16);
    JointUE joint = joint_ue_distribution(255, ch);
    CHECK(joint.n == 255);
    CHECK(joint.p.size() == 102);
    CHECK(joint.total() == doctest::Approx(0.9999999999999947).epsilon(1e-14));
    CHECK(joint.p.at({0, 0}) ==
          doctest::Approx(0.2773524780857154).epsilon(1e-12));
    CHECK(joint.p.at({2, 1}) ==
          doctest::Approx(0.00039628822336232317).epsilon(1e-12));
    // every kept entry respects the tail cutoff
    for (const auto& [ue, v] : joint.p) CHECK(v >= 1e-15);
}

TEST_CASE("joint distribution degenerates correctly for T = 0") {
    double sigma = sigma_from_ebn0_db(6.0, kRate);
    EaEChannelParams ch = quantize(sigma, 0.0);
    JointUE joint = joint_ue_distribution(255, ch);
    for (const auto& [ue, v] : joint.p) CHECK(ue.second == 0);
    CHECK(joint.total() == doctest::Approx(1.0).epsilon(1e-12));
    // binomial marginal spot check at u = 1
    double want = 255.0 * ch.delta_c * std::pow(1.0 - ch.delta_c, 254);
    CHECK(joint.p.at({1, 0}) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("joint distribution handles huge blocks via log fallback") {
    EaEChannelParams ch{1e-4, 5e-3};
    JointUE joint = joint_ue_distribution(1023, ch, 1e-22);
    CHECK(joint.total() == doctest::Approx(1.0).epsilon(1e-9));
    for (const auto& [ue, v] : joint.p) {
        CHECK(std::isfinite(v));
        CHECK(v >= 1e-22);
    }
}

TEST_CASE("default erasure cap") {
    double sigma = sigma_from_ebn0_db(7.0, kRate);
    EaEChannelParams ch = quantize(sigma, 0.16);
    CHECK(default_e_max(255, ch) == 19);
    // no erasure channel needs no erasure rows beyond the trivial one
    CHECK(default_e_max(255, quantize(sigma, 0.0)) == 1);
    // looser tail, smaller cap
    CHECK(default_e_max(255, ch, 1e-6) < 19);
}

TEST_CASE("uncoded reference curve") {
    CHECK(uncoded_ber(7.0, kRate) ==
          doctest::Approx(0.0010880064266665702).epsilon(1e-12));
}
