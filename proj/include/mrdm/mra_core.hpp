#pragma once

// Mallat analysis/synthesis with periodic (circular) boundaries.
//
// Index convention, frozen for interop between mux and demux:
//   analysis   approx[k] = Σ_n g[n]·x[(2k+n) mod M],  detail[k] likewise with h
//   synthesis  x[(2k+n) mod M] += g[n]·approx[k] + h[n]·detail[k]
// Synthesis is the transpose of analysis, hence its inverse for orthonormal pairs.
//
// Levels are numbered finest-first: level 1 carries N/2 detail coefficients.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mrdm/error.hpp"
#include "mrdm/wavelet_bank.hpp"

namespace mrdm {

struct LevelPair {
    std::vector<double> approx;
    std::vector<double> detail;
};

/// Coefficients of one frame. details[j-1] holds level j (length N/2^j);
/// approx holds the deepest approximation (length N/2^depth).
struct CoefficientFrame {
    std::vector<std::vector<double>> details;
    std::vector<double> approx;

    std::size_t depth() const noexcept { return details.size(); }

    std::size_t size() const noexcept {
        std::size_t total = approx.size();
        for (const auto& d : details) total += d.size();
        return total;
    }

    std::vector<double>& detail(std::size_t level) { return details.at(level - 1); }
    const std::vector<double>& detail(std::size_t level) const { return details.at(level - 1); }

    bool operator==(const CoefficientFrame&) const = default;
};

/// An all-zero frame of the given shape.
inline CoefficientFrame make_frame(std::size_t N, std::size_t depth) {
    if (depth < 1 || depth >= 8 * sizeof(std::size_t) || N == 0 || N % (std::size_t{1} << depth) != 0) {
        throw Error(ErrorCode::BadDepth,
                    "N=" + std::to_string(N) + " is not divisible by 2^" + std::to_string(depth));
    }
    CoefficientFrame frame;
    std::size_t len = N;
    for (std::size_t j = 1; j <= depth; ++j) {
        len /= 2;
        frame.details.emplace_back(len, 0.0);
    }
    frame.approx.assign(len, 0.0);
    return frame;
}

inline bool well_formed(const CoefficientFrame& frame) noexcept {
    if (frame.details.empty() || frame.details.front().empty()) return false;
    for (std::size_t j = 1; j < frame.details.size(); ++j) {
        if (frame.details[j - 1].size() != 2 * frame.details[j].size()) return false;
    }
    return frame.approx.size() == frame.details.back().size();
}

inline LevelPair analyze_level(std::span<const double> x, const FilterPair& pair) {
    const std::size_t M = x.size();
    if (M < 2 || M % 2 != 0) {
        throw Error(ErrorCode::OddLength, "analysis input length " + std::to_string(M) + " is not even");
    }
    const std::size_t L = pair.g.size();
    const std::size_t half = M / 2;
    LevelPair out{std::vector<double>(half), std::vector<double>(half)};
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0;
        double d = 0.0;
        std::size_t pos = 2 * k;
        for (std::size_t n = 0; n < L; ++n, ++pos) {
            if (pos >= M) pos -= M;
            a += pair.g[n] * x[pos];
            d += pair.h[n] * x[pos];
        }
        out.approx[k] = a;
        out.detail[k] = d;
    }
    return out;
}

inline std::vector<double> synthesize_level(std::span<const double> approx, std::span<const double> detail,
                                            const FilterPair& pair) {
    if (approx.size() != detail.size()) {
        throw Error(ErrorCode::LengthMismatch, "approx length " + std::to_string(approx.size()) +
                                                   " != detail length " + std::to_string(detail.size()));
    }
    if (approx.empty()) throw Error(ErrorCode::LengthMismatch, "empty level");
    const std::size_t M = 2 * approx.size();
    const std::size_t L = pair.g.size();
    std::vector<double> x(M, 0.0);
    for (std::size_t k = 0; k < approx.size(); ++k) {
        const double a = approx[k];
        const double d = detail[k];
        std::size_t pos = 2 * k;
        for (std::size_t n = 0; n < L; ++n, ++pos) {
            if (pos >= M) pos -= M;
            x[pos] += pair.g[n] * a + pair.h[n] * d;
        }
    }
    return x;
}

inline std::vector<double> synthesize_level(const LevelPair& lp, const FilterPair& pair) {
    return synthesize_level(lp.approx, lp.detail, pair);
}

/// Cascaded analysis down to `depth` levels.
inline CoefficientFrame analyze(std::span<const double> x, std::size_t depth, const FilterPair& pair) {
    if (depth < 1 || depth >= 8 * sizeof(std::size_t) || x.empty() ||
        x.size() % (std::size_t{1} << depth) != 0) {
        throw Error(ErrorCode::BadDepth,
                    "N=" + std::to_string(x.size()) + " is not divisible by 2^" + std::to_string(depth));
    }
    CoefficientFrame frame;
    frame.details.reserve(depth);
    std::vector<double> running(x.begin(), x.end());
    for (std::size_t j = 1; j <= depth; ++j) {
        LevelPair lp = analyze_level(running, pair);
        frame.details.push_back(std::move(lp.detail));
        running = std::move(lp.approx);
    }
    frame.approx = std::move(running);
    return frame;
}

/// Inverse of analyze: synthesizes from the deepest node outward.
inline std::vector<double> synthesize(const CoefficientFrame& frame, const FilterPair& pair) {
    if (!well_formed(frame)) throw Error(ErrorCode::MalformedFrame, "coefficient arrays do not halve per level");
    std::vector<double> running = frame.approx;
    for (std::size_t j = frame.depth(); j >= 1; --j) {
        running = synthesize_level(running, frame.detail(j), pair);
    }
    return running;
}

inline double sum_of_squares(std::span<const double> v) noexcept {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return acc;
}

inline double sum_of_squares(const CoefficientFrame& frame) noexcept {
    double acc = sum_of_squares(frame.approx);
    for (const auto& d : frame.details) acc += sum_of_squares(d);
    return acc;
}

} // namespace mrdm
