#include <cmath>
#include <vector>

#include "doctest.h"
#include "psq/errors.hpp"
#include "psq/rng.hpp"
#include "psq/special_functions.hpp"

namespace {

// Reference values computed with 50-digit arbitrary-precision arithmetic
// and rounded to double.
struct AiryRef {
    double x;
    double ai;
    double ai_prime;
};

const std::vector<AiryRef> kAiryGrid = {
    {-20.0, -0.17640612707798468959, 0.8928628567364712384},
    {-12.0, -0.066555175054373129474, 1.0231104533679707299},
    {-9.5, 0.31910324771912820138, -0.108095318811871239},
    {-9.0, -0.022133721547341403674, -0.97566398092633159471},
    {-7.0, 0.18428083525050563728, -0.77100816841012654773},
    {-5.0, 0.35076100902411431979, 0.32719281855444313679},
    {-2.0, 0.22740742820168557599, 0.61825902074169104141},
    {-1.0, 0.5355608832923521188, -0.010160567116645209395},
    {0.0, 0.35502805388781723926, -0.25881940379280679841},
    {1.0, 0.13529241631288141552, -0.15914744129679321279},
    {2.0, 0.034924130423274379135, -0.053090384433653631704},
    {2.5, 0.015725923380470489995, -0.026250881035903230365},
    {5.0, 0.00010834442813607441735, -0.000247413890868462476},
    {9.0, 2.4711684308724898433e-09, -7.4806413896589464128e-09},
    {9.5, 5.3302637046174916266e-10, -1.6566394593740666263e-09},
    {12.0, 1.393184688875360839e-13, -4.854736554985308463e-13},
    {15.0, 2.164962520737992299e-18, -8.4205679540177727661e-18},
    {20.0, 1.6916728686705403136e-27, -7.5863916257483549605e-27},
};

} // namespace

TEST_CASE("Airy values across the supported range") {
    for (const auto& ref : kAiryGrid) {
        const auto v = psq::airy(ref.x);
        CHECK(v.ai == doctest::Approx(ref.ai).epsilon(1e-10));
        CHECK(v.ai_prime == doctest::Approx(ref.ai_prime).epsilon(1e-10));
    }
}

TEST_CASE("Airy rejects arguments outside the supported range") {
    CHECK_THROWS_AS(psq::airy(20.5), psq::DomainError);
    CHECK_THROWS_AS(psq::airy(-20.5), psq::DomainError);
}

TEST_CASE("Airy decay ratio Ai(5)/Ai(2)") {
    const double ratio = psq::airy(5.0).ai / psq::airy(2.0).ai;
    CHECK(ratio == doctest::Approx(0.0031022799085606088).epsilon(1e-9));
    CHECK(ratio < 1e-2);
    CHECK(ratio > 0.0);
}

TEST_CASE("Airy derivative is consistent with a centered difference") {
    for (const double x : {-2.0, 0.0, 1.0}) {
        const double h = 1e-5;
        const double fd = (psq::airy(x + h).ai - psq::airy(x - h).ai) / (2.0 * h);
        CHECK(psq::airy(x).ai_prime == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("Airy satisfies its defining equation across a fine grid") {
    // Five-point second derivative of Ai, compared against x Ai(x).
    const double h = 1e-3;
    double worst = 0.0;
    for (double x = -5.0; x <= 2.0 + 1e-12; x += h) {
        const double fm2 = psq::airy(x - 2 * h).ai;
        const double fm1 = psq::airy(x - h).ai;
        const double f0 = psq::airy(x).ai;
        const double fp1 = psq::airy(x + h).ai;
        const double fp2 = psq::airy(x + 2 * h).ai;
        const double second = (-fm2 + 16 * fm1 - 30 * f0 + 16 * fp1 - fp2) / (12 * h * h);
        worst = std::max(worst, std::abs(second - x * f0));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("largest Airy zeros") {
    CHECK(psq::airy_max_root() == doctest::Approx(-2.3381074104597670385).epsilon(1e-12));
    CHECK(psq::airy_prime_max_root() == doctest::Approx(-1.018792971647471089).epsilon(1e-12));
    CHECK(std::abs(psq::airy(psq::airy_max_root()).ai) < 1e-13);
    CHECK(std::abs(psq::airy(psq::airy_prime_max_root()).ai_prime) < 1e-13);
}

TEST_CASE("gamma function") {
    CHECK(psq::gamma_fn(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-14));
    CHECK(psq::gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(psq::gamma_fn(5.0) == doctest::Approx(24.0).epsilon(1e-14));
    CHECK_THROWS_AS(psq::gamma_fn(0.0), psq::DomainError);
    CHECK_THROWS_AS(psq::gamma_fn(-1.5), psq::DomainError);

    // Functional equation Gamma(x+1) = x Gamma(x) over random draws.
    psq::CounterRng rng(0x9a3fULL, 0);
    for (int i = 0; i < 1000; ++i) {
        const double x = 0.1 + 9.9 * rng.next_unit();
        const double lhs = psq::gamma_fn(x + 1.0);
        const double rhs = x * psq::gamma_fn(x);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("spectral root condition solver") {
    // Frozen references from a 50-digit bisection of
    // Ai'(r + eta^2/4) + (eta/2) Ai(r + eta^2/4) = 0 (largest root).
    CHECK(psq::solve_r1(0.0) == doctest::Approx(-1.018792971647471089).epsilon(1e-10));
    CHECK(psq::solve_r1(-2.0) == doctest::Approx(-2.6476194134893577899).epsilon(1e-10));
    CHECK(psq::solve_r1(-1.0) == doctest::Approx(-1.6574443672726858047).epsilon(1e-10));
    CHECK(psq::solve_r1(1.0) == doctest::Approx(-0.64288640216075311088).epsilon(1e-10));
    CHECK(psq::solve_r1(2.0) == doctest::Approx(-0.43310852896776682119).epsilon(1e-10));
    CHECK(psq::solve_r1(5.0) == doctest::Approx(-0.19702566075469148237).epsilon(1e-10));
}

TEST_CASE("spectral root condition residual") {
    for (const double eta : {-2.0, 1.0, 5.0}) {
        const double r = psq::solve_r1(eta);
        const double u = r + eta * eta / 4.0;
        const auto v = psq::airy(u);
        CHECK(std::abs(v.ai_prime + 0.5 * eta * v.ai) < 1e-9);
    }
}

TEST_CASE("spectral root window and monotonicity") {
    // For |eta| <= 2 the shifted argument u = r1 + eta^2/4 stays strictly
    // right of the largest Ai zero (the log-derivative's pole), stays below
    // 1, and increases with eta.
    double prev_u = -1e300;
    for (double eta = -2.0; eta <= 2.0 + 1e-12; eta += 0.25) {
        const double u = psq::solve_r1(eta) + eta * eta / 4.0;
        CHECK(u > psq::airy_max_root());
        CHECK(u < 1.0);
        CHECK(u > prev_u);
        prev_u = u;
    }
}

TEST_CASE("spectral root solver rejects far-out arguments") {
    CHECK_THROWS_AS(psq::solve_r1(51.0), psq::DomainError);
}
