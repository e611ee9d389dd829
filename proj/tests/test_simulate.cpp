#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "psq/errors.hpp"
#include "psq/model.hpp"
#include "psq/simulate.hpp"
#include "psq/time_domain.hpp"
#include "psq/transform.hpp"

using psq::ModelParams;

namespace {

struct MeanErr {
    double mean;
    double sigma; // standard error of the mean
};

MeanErr mean_err(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / (static_cast<double>(xs.size()) - 1.0);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

} // namespace

TEST_CASE("single place: sojourn is a unit exponential") {
    const auto run = psq::simulate_conditional(ModelParams(0.9, 1), 0, 40000, 11);
    const auto m = mean_err(run.samples);
    CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.sigma);
    for (double v : run.samples) CHECK(v > 0.0);
}

TEST_CASE("two places at unit load: conditional mean 5/3") {
    const auto run = psq::simulate_conditional(ModelParams(1.0, 2), 1, 40000, 12);
    const auto m = mean_err(run.samples);
    CHECK(std::abs(m.mean - 5.0 / 3.0) <= 3.0 * m.sigma);
    CHECK(m.sigma < 0.02);
}

TEST_CASE("empirical transform matches the solver") {
    const ModelParams params(0.8, 10);
    const auto run = psq::simulate_conditional(params, 3, 40000, 13);
    for (const double theta : {0.25, 1.0}) {
        std::vector<double> weights(run.samples.size());
        for (std::size_t i = 0; i < run.samples.size(); ++i)
            weights[i] = std::exp(-theta * run.samples[i]);
        const auto m = mean_err(weights);
        const double want = psq::resolvent_solve(params, theta).values[3].real();
        CHECK(std::abs(m.mean - want) <= 3.0 * m.sigma);
    }
}

TEST_CASE("samples are a pure function of the seed, not the thread count") {
    const ModelParams params(1.2, 6);
    const auto one = psq::simulate_conditional(params, 2, 10000, 99, 1);
    const auto eight = psq::simulate_conditional(params, 2, 10000, 99, 8);
    REQUIRE(one.samples.size() == eight.samples.size());
    for (std::size_t i = 0; i < one.samples.size(); ++i)
        CHECK(one.samples[i] == eight.samples[i]);

    const auto other = psq::simulate_conditional(params, 2, 10000, 100, 1);
    std::size_t differing = 0;
    for (std::size_t i = 0; i < other.samples.size(); ++i)
        if (other.samples[i] != one.samples[i]) ++differing;
    CHECK(differing > 9000);
}

TEST_CASE("conditional run rejects out-of-range occupancy") {
    CHECK_THROWS_AS(psq::simulate_conditional(ModelParams(1.0, 5), 5, 10, 1),
                    psq::DomainError);
    CHECK_THROWS_AS(psq::simulate_conditional(ModelParams(1.0, 5), -1, 10, 1),
                    psq::DomainError);
}

TEST_CASE("stationary runs reproduce the arrival-seen distribution") {
    SUBCASE("unit load: seen occupancy uniform") {
        const auto run = psq::simulate_stationary(ModelParams(1.0, 5), 20000, 21);
        REQUIRE(run.initial_states.size() == run.samples.size());
        REQUIRE(run.stationary);
        std::vector<double> counts(5, 0.0);
        for (int s : run.initial_states) {
            REQUIRE(s >= 0);
            REQUIRE(s < 5);
            counts[static_cast<std::size_t>(s)] += 1.0;
        }
        const double expected = 20000.0 / 5.0;
        double chi2 = 0.0;
        for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
        CHECK(chi2 < 9.488); // 5% critical value, 4 degrees of freedom
    }
    SUBCASE("light load: geometric seen weights and blocking fraction") {
        const ModelParams params(0.5, 3);
        const auto run = psq::simulate_stationary(params, 20000, 22);
        std::vector<double> counts(3, 0.0);
        for (int s : run.initial_states) counts[static_cast<std::size_t>(s)] += 1.0;
        const double weights[] = {4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0};
        double chi2 = 0.0;
        for (int j = 0; j < 3; ++j) {
            const double expected = 20000.0 * weights[j];
            chi2 += (counts[static_cast<std::size_t>(j)] - expected) *
                    (counts[static_cast<std::size_t>(j)] - expected) / expected;
        }
        CHECK(chi2 < 5.991); // 5% critical value, 2 degrees of freedom

        // An arrival is refused exactly when it sees a full system; that
        // state holds weight rho^K (1-rho)/(1-rho^(K+1)) = 1/15 here.
        const double total =
            static_cast<double>(run.blocked_count) + static_cast<double>(run.samples.size());
        const double fraction = static_cast<double>(run.blocked_count) / total;
        CHECK(std::abs(fraction - 1.0 / 15.0) <= 0.01);

        // Unconditional mean = seen-weight mix of the conditional means.
        const auto m1 = psq::conditional_moments(params, 1);
        double want = 0.0;
        for (int j = 0; j < 3; ++j) want += weights[j] * m1[static_cast<std::size_t>(j)];
        const auto m = mean_err(run.samples);
        CHECK(std::abs(m.mean - want) <= 3.0 * m.sigma);
    }
    SUBCASE("stationary runs are seed-deterministic") {
        const ModelParams params(0.5, 3);
        const auto a = psq::simulate_stationary(params, 500, 7);
        const auto b = psq::simulate_stationary(params, 500, 7);
        REQUIRE(a.samples.size() == b.samples.size());
        for (std::size_t i = 0; i < a.samples.size(); ++i) {
            CHECK(a.samples[i] == b.samples[i]);
            CHECK(a.initial_states[i] == b.initial_states[i]);
        }
        CHECK(a.blocked_count == b.blocked_count);
    }
}

TEST_CASE("sample distribution matches the computed law") {
    // One-sample Kolmogorov-Smirnov against the survival from the
    // eigen-expansion, using the Stephens small-sample form.
    const ModelParams params(1.0, 5);
    const std::size_t count = 5000;
    auto run = psq::simulate_conditional(params, 2, count, 31);
    std::sort(run.samples.begin(), run.samples.end());
    for (std::size_t i = 1; i < run.samples.size(); ++i)
        REQUIRE(run.samples[i] > run.samples[i - 1]);

    const auto sol = psq::spectral_expand(params, run.samples);
    double d_stat = 0.0;
    const double n = static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double cdf = 1.0 - sol.survival[i][2];
        const double hi = (static_cast<double>(i) + 1.0) / n - cdf;
        const double lo = cdf - static_cast<double>(i) / n;
        d_stat = std::max({d_stat, hi, lo});
    }
    const double scaled = d_stat * (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n));
    CHECK(scaled < 1.628); // 1% critical value
}
