#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mrdm/mra_core.hpp"
#include "mrdm/wavelet_bank.hpp"

using namespace mrdm;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Length-4 scaling filter with a double zero at z = -1 and sum sqrt(2):
//   g0 - g1 + g2 - g3 = 0, -g1 + 2g2 - 3g3 = 0, sum = sqrt(2).
// With t = g3 these give g0 = sqrt(2)/4 - t, g1 = sqrt(2)/2 - t, g2 = sqrt(2)/4 + t,
// and unit norm leaves 4t^2 - sqrt(2)t - 1/4 = 0. Keep the root whose
// even shifts are orthogonal.
std::array<double, 4> solve_db4_closed_form() {
    const double r2 = std::numbers::sqrt2;
    const double disc = std::sqrt(2.0 + 4.0);
    std::array<double, 4> best{};
    double best_resid = 1e300;
    for (double t : {(r2 + disc) / 8.0, (r2 - disc) / 8.0}) {
        const std::array<double, 4> g{r2 / 4 - t, r2 / 2 - t, r2 / 4 + t, t};
        const double resid = std::abs(g[0] * g[2] + g[1] * g[3]);
        if (resid < best_resid) {
            best_resid = resid;
            best = g;
        }
    }
    return best;
}

} // namespace

TEST(WaveletBank, HaarCoefficients) {
    const auto haar = make_wavelet_system("haar");
    ASSERT_EQ(haar.g.size(), 2u);
    EXPECT_DOUBLE_EQ(haar.g[0], kInvSqrt2);
    EXPECT_DOUBLE_EQ(haar.g[1], kInvSqrt2);
    EXPECT_DOUBLE_EQ(haar.h[0], kInvSqrt2);
    EXPECT_DOUBLE_EQ(haar.h[1], -kInvSqrt2);
}

TEST(WaveletBank, Db4MatchesClosedFormSolution) {
    const auto db4 = make_wavelet_system("db4");
    const auto oracle = solve_db4_closed_form();
    ASSERT_EQ(db4.g.size(), 4u);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(db4.g[i], oracle[i], 1e-12) << i;

    const double expected[] = {0.48296291, 0.83651630, 0.22414387, -0.12940952};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(db4.g[i], expected[i], 5e-9);
}

TEST(WaveletBank, Db4WaveletIsFlip) {
    const auto db4 = make_wavelet_system("db4");
    const double expected[] = {-0.12940952, -0.22414387, 0.83651630, -0.48296291};
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(db4.h[i], expected[i], 5e-9);
}

TEST(WaveletBank, BuiltinsMeetTightTolerance) {
    for (const char* name : {"haar", "db4"}) {
        EXPECT_TRUE(check_orthonormality(make_wavelet_system(name), 1e-12).empty()) << name;
    }
}

TEST(WaveletBank, UnknownWavelet) {
    try {
        make_wavelet_system("sym8");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnknownWavelet);
    }
}

TEST(WaveletBank, RawNonOrthonormalRejected) {
    const double g[] = {1.0, 1.0};
    try {
        make_wavelet_system(g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotOrthonormal);
    }
}

TEST(WaveletBank, RawOddLengthRejected) {
    const double g[] = {0.5, 0.5, 0.4142135623730950};
    try {
        make_wavelet_system(g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OddLength);
    }
}

TEST(WaveletBank, RawCoefficientsAccepted) {
    const auto db4 = make_wavelet_system("db4");
    const auto pair = make_wavelet_system(db4.g, "mine");
    EXPECT_EQ(pair.name, "mine");
    EXPECT_EQ(pair.h, db4.h);
}

TEST(WaveletBank, DeriveFilterHaar) {
    const double g[] = {kInvSqrt2, kInvSqrt2};
    const auto h = derive_wavelet_filter(g);
    ASSERT_EQ(h.size(), 2u);
    EXPECT_EQ(h[0], kInvSqrt2);
    EXPECT_EQ(h[1], -kInvSqrt2);
}

TEST(WaveletBank, DeriveFilterOddLength) {
    const double g[] = {1.0};
    EXPECT_THROW(derive_wavelet_filter(g), Error);
    EXPECT_THROW(derive_wavelet_filter(std::span<const double>{}), Error);
}

TEST(WaveletBank, ReportNamesSumRuleResidual) {
    const double g[] = {0.9, 0.5};
    FilterPair pair{"bad", {0.9, 0.5}, derive_wavelet_filter(g)};
    const auto report = check_orthonormality(pair);
    ASSERT_FALSE(report.empty());
    bool found = false;
    for (const auto& v : report) {
        if (v.constraint == "sum_rule") {
            found = true;
            EXPECT_NEAR(v.residual, std::abs(1.4 - std::numbers::sqrt2), 1e-15);
        }
    }
    EXPECT_TRUE(found);
}

TEST(WaveletBank, ReportFlagsForeignWaveletFilter) {
    auto pair = make_wavelet_system("db4");
    pair.h[1] += 1e-3;
    const auto report = check_orthonormality(pair);
    ASSERT_FALSE(report.empty());
    EXPECT_EQ(report.front().constraint, "alternating_flip");
}

TEST(WaveletBank, CoefficientCsvRoundTrip) {
    const auto db4 = make_wavelet_system("db4");
    const auto text = format_coefficients(db4.g);
    EXPECT_EQ(parse_coefficients(text), db4.g);
    EXPECT_EQ(parse_coefficients(" 1.5 , -2e-3\n"), (std::vector<double>{1.5, -2e-3}));
    EXPECT_THROW(parse_coefficients("1.0,abc"), Error);
    EXPECT_THROW(parse_coefficients("1.0,,2.0"), Error);
}

// Rotation-angle parameterization of length-4 orthonormal filters: every
// member must be accepted and obey the derived-filter properties.
TEST(WaveletBankProperty, ParameterizedLength4Family) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = angle(rng);
        const double c = std::cos(a), s = std::sin(a);
        // Daubechies/Pollen family: g = [(1-c+s), (1+c+s), (1+c-s), (1-c-s)] / (2√2)
        const double d = 2.0 * std::numbers::sqrt2;
        const double g[] = {(1 - c + s) / d, (1 + c + s) / d, (1 + c - s) / d, (1 - c - s) / d};
        const auto pair = make_wavelet_system(g);
        ASSERT_TRUE(check_orthonormality(pair).empty()) << "angle " << a;

        double sum_h = 0.0;
        for (double v : pair.h) sum_h += v;
        EXPECT_NEAR(sum_h, 0.0, 1e-12);
        for (int k = -1; k <= 1; ++k) {
            EXPECT_NEAR(detail::shifted_inner(pair.g, pair.h, 2 * k), 0.0, 1e-12);
        }

        std::vector<double> x(16);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : x) v = u(rng);
        const auto back = synthesize_level(analyze_level(x, pair), pair);
        for (std::size_t i = 0; i < x.size(); ++i) ASSERT_NEAR(back[i], x[i], 1e-10);
    }
}
