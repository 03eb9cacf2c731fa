#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaplab/models.hpp"
#include "gaplab/skcert.hpp"
#include "gaplab/stats.hpp"

using namespace gaplab;
using namespace gaplab::skcert;

TEST_CASE("brute force: dimension one and the aligned all-ones matrix") {
    SymMatrix w1(1);
    w1.set(0, 0, -0.7);
    CHECK(sk_bruteforce(w1).value == doctest::Approx(-0.7));

    // W = J/n: value 1 at the aligned configuration
    const std::size_t n = 4;
    SymMatrix j(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) j.set(a, b, 1.0 / n);
    const auto res = sk_bruteforce(j);
    CHECK(res.value == doctest::Approx(1.0));
    for (std::size_t i = 1; i < n; ++i) CHECK(res.argmax[i] == res.argmax[0]);

    SymMatrix big(23);
    CHECK_THROWS_AS(sk_bruteforce(big), std::invalid_argument);
}

TEST_CASE("brute force: exhaustive reference on random matrices") {
    for (int d = 0; d < 10; ++d) {
        Rng rng(3, d);
        auto w = models::sample_goe(8, models::GoeScale::normalized, rng);
        // direct reference maximization
        double best = -1e100;
        for (std::size_t mask = 0; mask < 256; ++mask) {
            std::vector<double> x(8);
            for (std::size_t i = 0; i < 8; ++i) x[i] = (mask >> i) & 1 ? -1.0 : 1.0;
            best = std::max(best, w.quad_form(x) / 8.0);
        }
        CHECK(sk_bruteforce(w).value == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("brute window: mean value at n = 18 sits in the oracle-frozen band") {
    // finite-size values approach the 1.5264 limit from below; the measured
    // mean at n = 18 is 1.35 +- 0.02, frozen as [1.25, 1.45]
    RunningStat stat;
    for (int d = 0; d < 30; ++d) {
        Rng rng(5, d);
        auto w = models::sample_goe(18, models::GoeScale::normalized, rng);
        stat.add(sk_bruteforce(w).value);
    }
    CHECK(stat.mean() >= 1.25);
    CHECK(stat.mean() <= 1.45);
}

TEST_CASE("certificates dominate the exact optimum") {
    for (int d = 0; d < 50; ++d) {
        Rng rng(7, d);
        auto w = models::sample_goe(16, models::GoeScale::normalized, rng);
        const double exact = sk_bruteforce(w).value;
        CHECK(abssum_cert(w).value >= exact);
        CHECK(spectral_cert(w).value >= exact);
        CHECK(sign_rounding_search(w).value <= exact);
    }
}

TEST_CASE("abssum: zero matrix and the n^{3/2} growth constant") {
    SymMatrix zero(5);
    CHECK(abssum_cert(zero).value == 0.0);

    // E AbsSum / n^{3/2} ~ sqrt(2/pi) for normalized entries
    Rng rng(11, 0);
    const std::size_t n = 600;
    auto w = models::sample_goe(n, models::GoeScale::normalized, rng);
    const double ratio = abssum_cert(w).value / std::pow(static_cast<double>(n), 1.5);
    CHECK(ratio == doctest::Approx(std::sqrt(2.0 / M_PI)).epsilon(0.05));
}

TEST_CASE("spectral certificate: identity is tight") {
    SymMatrix eye(6);
    for (std::size_t i = 0; i < 6; ++i) eye.set(i, i, 1.0);
    CHECK(spectral_cert(eye).value == doctest::Approx(1.0));
    CHECK(sk_bruteforce(eye).value == doctest::Approx(1.0));
}

TEST_CASE("sign rounding on the identity gives value 1") {
    SymMatrix eye(6);
    for (std::size_t i = 0; i < 6; ++i) eye.set(i, i, 1.0);
    CHECK(sign_rounding_search(eye).value == doctest::Approx(1.0));
}

TEST_CASE("slepian: constant, ordering, and concentration") {
    CHECK(slepian_bound_constant() == doctest::Approx(1.5957691216057308).epsilon(1e-12));
    // Parisi-type value < Slepian < spectral edge
    CHECK(1.5264 < slepian_bound_constant());
    CHECK(slepian_bound_constant() < 2.0);

    Rng rng(13, 0);
    CHECK(slepian_mc_check(2000, 50, rng) ==
          doctest::Approx(slepian_bound_constant()).epsilon(0.02));

    // brute optimum at n = 18 rarely exceeds the constant plus finite-n slack
    int within = 0;
    for (int d = 0; d < 30; ++d) {
        Rng r2(17, d);
        auto w = models::sample_goe(18, models::GoeScale::normalized, r2);
        if (sk_bruteforce(w).value <= slepian_bound_constant() + 0.15) ++within;
    }
    CHECK(within >= 27);
}

TEST_CASE("quiet planting: auc ordering across planting strengths (desk scale)") {
    Rng rng(19, 0);
    const auto points = quiet_planting_experiment(300, {0.0, 0.5, 1.5}, 60, rng);
    CHECK(std::abs(points[0].auc - 0.5) < 0.2);
    CHECK(points[2].auc > 0.9);
    CHECK(points[2].auc > points[1].auc);
    // the planted configuration certifies a value near c
    CHECK(points[2].mean_planted_value == doctest::Approx(1.5).epsilon(0.15));
}

TEST_CASE("sdp certificate stub records the definition") {
    SymMatrix w(4);
    CHECK_THROWS_AS(sdp_cert(w), std::runtime_error);
    CHECK(std::string(SdpCertificate::definition).find("PSD") != std::string::npos);
}
