#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mrdm/mra_core.hpp"
#include "oracles.hpp"

using namespace mrdm;

namespace {

const double kSqrt2 = std::numbers::sqrt2;

std::vector<double> random_signal(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void expect_near(const std::vector<double>& got, const std::vector<double>& want, double tol = 1e-14) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], tol) << "index " << i;
}

class MraCore : public ::testing::Test {
protected:
    FilterPair haar = make_wavelet_system("haar");
    FilterPair db4 = make_wavelet_system("db4");
};

} // namespace

TEST_F(MraCore, AnalyzeLevelConstant) {
    const std::vector<double> x{1, 1};
    const auto lp = analyze_level(x, haar);
    expect_near(lp.approx, {kSqrt2});
    expect_near(lp.detail, {0.0});
}

TEST_F(MraCore, AnalyzeLevelImpulse) {
    const std::vector<double> x{1, 0, 0, 0};
    const auto lp = analyze_level(x, haar);
    expect_near(lp.approx, {1 / kSqrt2, 0});
    expect_near(lp.detail, {1 / kSqrt2, 0});
}

TEST_F(MraCore, AnalyzeLevelHandExample) {
    const std::vector<double> x{3, 1, 2, 2};
    const auto lp = analyze_level(x, haar);
    expect_near(lp.approx, {2 * kSqrt2, 2 * kSqrt2});
    expect_near(lp.detail, {kSqrt2, 0});
}

TEST_F(MraCore, AnalyzeLevelOddLength) {
    const std::vector<double> x{1, 2, 3};
    try {
        analyze_level(x, haar);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OddLength);
    }
}

TEST_F(MraCore, SynthesizeLevelExamples) {
    expect_near(synthesize_level(LevelPair{{kSqrt2}, {0.0}}, haar), {1, 1});
    expect_near(synthesize_level(LevelPair{{2 * kSqrt2, 2 * kSqrt2}, {kSqrt2, 0}}, haar), {3, 1, 2, 2});
    expect_near(synthesize_level(LevelPair{{0, 0, 0}, {0, 0, 0}}, db4), {0, 0, 0, 0, 0, 0});
}

TEST_F(MraCore, SynthesizeLevelLengthMismatch) {
    try {
        synthesize_level(LevelPair{{1, 2}, {1}}, haar);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
    }
}

// db4 is longer than the shortest periodic inputs; wrap-around must still
// invert exactly.
TEST_F(MraCore, ShortPeriodicInputsInvert) {
    std::mt19937_64 rng(3);
    for (std::size_t M : {2u, 4u}) {
        const auto x = random_signal(rng, M);
        EXPECT_LE(max_abs_diff(synthesize_level(analyze_level(x, db4), db4), x), 1e-14) << M;
    }
}

TEST_F(MraCore, AnalyzeConstantDepth2) {
    const std::vector<double> x{1, 1, 1, 1};
    const auto f = analyze(x, 2, haar);
    ASSERT_EQ(f.depth(), 2u);
    expect_near(f.detail(1), {0, 0});
    expect_near(f.detail(2), {0});
    expect_near(f.approx, {2});
}

TEST_F(MraCore, AnalyzeHalfConstant) {
    const std::vector<double> x{0.5, 0.5, 0.5, 0.5};
    const auto f = analyze(x, 2, haar);
    expect_near(f.approx, {1});
    expect_near(f.detail(1), {0, 0});
    expect_near(f.detail(2), {0});
}

TEST_F(MraCore, AnalyzeDepthOneIsLevel) {
    std::mt19937_64 rng(5);
    const auto x = random_signal(rng, 32);
    const auto f = analyze(x, 1, db4);
    const auto lp = analyze_level(x, db4);
    EXPECT_EQ(f.approx, lp.approx);
    EXPECT_EQ(f.detail(1), lp.detail);
}

TEST_F(MraCore, AnalyzeBadDepth) {
    const std::vector<double> x(12, 0.0);
    try {
        analyze(x, 3, haar);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BadDepth);
    }
    EXPECT_THROW(analyze(x, 0, haar), Error);
}

TEST_F(MraCore, SynthesizeHandExamples) {
    CoefficientFrame f = make_frame(4, 2);
    f.approx = {1};
    expect_near(synthesize(f, haar), {0.5, 0.5, 0.5, 0.5});

    f.approx = {0};
    f.detail(2) = {1};
    expect_near(synthesize(f, haar), {0.5, 0.5, -0.5, -0.5});
}

TEST_F(MraCore, SynthesizeMalformed) {
    CoefficientFrame f;
    f.details = {{1, 2, 3}, {1}};
    f.approx = {1};
    try {
        synthesize(f, haar);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MalformedFrame);
    }
}

TEST_F(MraCore, MatchesClosedFormHaarBasis) {
    std::mt19937_64 rng(11);
    for (std::size_t N : {2u, 4u, 8u, 16u}) {
        for (std::size_t d = 1; (std::size_t{1} << d) <= N; ++d) {
            const auto cols = oracle::haar_synthesis_matrix(N, d);
            const auto c = random_signal(rng, N);
            CoefficientFrame f = make_frame(N, d);
            std::size_t i = 0;
            for (auto& v : f.approx) v = c[i++];
            for (std::size_t j = d; j >= 1; --j)
                for (auto& v : f.detail(j)) v = c[i++];
            EXPECT_LE(max_abs_diff(synthesize(f, haar), oracle::apply_columns(cols, c)), 1e-12);
        }
    }
}

TEST_F(MraCore, PerfectReconstructionProperty) {
    std::mt19937_64 rng(42);
    for (const auto* pair : {&haar, &db4}) {
        for (std::size_t N : {8u, 64u, 512u, 4096u}) {
            for (std::size_t d = 1; d <= 6 && (std::size_t{1} << d) <= N; ++d) {
                const auto x = random_signal(rng, N);
                EXPECT_LE(max_abs_diff(synthesize(analyze(x, d, *pair), *pair), x), 1e-10)
                    << pair->name << " N=" << N << " d=" << d;
            }
        }
    }
}

TEST_F(MraCore, EnergyConservationProperty) {
    std::mt19937_64 rng(43);
    for (const auto* pair : {&haar, &db4}) {
        for (int trial = 0; trial < 50; ++trial) {
            const auto x = random_signal(rng, 256);
            const auto f = analyze(x, 1 + trial % 7, *pair);
            const double ex = sum_of_squares(x);
            EXPECT_NEAR(sum_of_squares(f), ex, 1e-9 * ex);
            EXPECT_EQ(f.size(), x.size());
        }
    }
}

TEST_F(MraCore, LinearityProperty) {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = random_signal(rng, 128);
        const auto y = random_signal(rng, 128);
        const double a = coef(rng), b = coef(rng);
        std::vector<double> z(128);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
        const auto fx = analyze(x, 4, db4), fy = analyze(y, 4, db4), fz = analyze(z, 4, db4);
        for (std::size_t k = 0; k < fz.approx.size(); ++k)
            EXPECT_NEAR(fz.approx[k], a * fx.approx[k] + b * fy.approx[k], 1e-10);
        for (std::size_t j = 1; j <= 4; ++j)
            for (std::size_t k = 0; k < fz.detail(j).size(); ++k)
                EXPECT_NEAR(fz.detail(j)[k], a * fx.detail(j)[k] + b * fy.detail(j)[k], 1e-10);
    }
}
