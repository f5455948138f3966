#pragma once

// Orthonormal two-channel filter pairs: scaling (lowpass) filter g and
// wavelet (highpass) filter h, with h the alternating flip of g.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mrdm/error.hpp"

namespace mrdm {

inline constexpr double kOrthonormalityTolerance = 1e-10;

struct FilterPair {
    std::string name;
    std::vector<double> g;
    std::vector<double> h;

    std::size_t length() const noexcept { return g.size(); }
};

/// h[n] = (-1)^n g[L-1-n].
inline std::vector<double> derive_wavelet_filter(std::span<const double> g) {
    if (g.empty() || g.size() % 2 != 0) {
        throw Error(ErrorCode::OddLength,
                    "scaling filter length " + std::to_string(g.size()) + " is not even and positive");
    }
    const std::size_t L = g.size();
    std::vector<double> h(L);
    for (std::size_t n = 0; n < L; ++n) {
        const double v = g[L - 1 - n];
        h[n] = (n % 2 == 0) ? v : -v;
    }
    return h;
}

struct Violation {
    std::string constraint;
    double residual;
};

using ValidationReport = std::vector<Violation>;

namespace detail {

// Σ_n a[n]·b[n+shift], zero outside the support.
inline double shifted_inner(std::span<const double> a, std::span<const double> b, std::ptrdiff_t shift) {
    double acc = 0.0;
    const auto La = static_cast<std::ptrdiff_t>(a.size());
    const auto Lb = static_cast<std::ptrdiff_t>(b.size());
    for (std::ptrdiff_t n = 0; n < La; ++n) {
        const std::ptrdiff_t m = n + shift;
        if (m >= 0 && m < Lb) acc += a[n] * b[m];
    }
    return acc;
}

} // namespace detail

/// Lists every violated FilterPair invariant together with its residual.
/// An empty report means the pair is orthonormal within `tol`.
inline ValidationReport check_orthonormality(const FilterPair& pair, double tol = kOrthonormalityTolerance) {
    ValidationReport report;
    const std::size_t L = pair.g.size();
    if (L < 2 || L % 2 != 0) {
        report.push_back({"even_length", static_cast<double>(L)});
        return report;
    }
    if (pair.h.size() != L) {
        report.push_back({"wavelet_length", std::abs(static_cast<double>(pair.h.size()) - static_cast<double>(L))});
        return report;
    }

    auto flag = [&](std::string constraint, double residual) {
        if (!(residual <= tol)) report.push_back({std::move(constraint), residual});
    };

    double sum_g = 0.0;
    double sum_h = 0.0;
    for (std::size_t n = 0; n < L; ++n) {
        sum_g += pair.g[n];
        sum_h += pair.h[n];
    }
    flag("sum_rule", std::abs(sum_g - std::numbers::sqrt2));

    const auto half = static_cast<std::ptrdiff_t>(L / 2);
    for (std::ptrdiff_t k = 0; k < half; ++k) {
        const double expected = (k == 0) ? 1.0 : 0.0;
        flag("double_shift[" + std::to_string(k) + "]",
             std::abs(detail::shifted_inner(pair.g, pair.g, 2 * k) - expected));
    }

    double flip_residual = 0.0;
    for (std::size_t n = 0; n < L; ++n) {
        const double v = pair.g[L - 1 - n];
        flip_residual = std::max(flip_residual, std::abs(pair.h[n] - ((n % 2 == 0) ? v : -v)));
    }
    // The flip is exact by construction; any nonzero residual is a foreign h.
    if (flip_residual != 0.0) report.push_back({"alternating_flip", flip_residual});

    flag("wavelet_sum", std::abs(sum_h));
    for (std::ptrdiff_t k = -(half - 1); k < half; ++k) {
        flag("cross_orthogonality[" + std::to_string(k) + "]",
             std::abs(detail::shifted_inner(pair.g, pair.h, 2 * k)));
    }
    return report;
}

/// Builds a pair from raw scaling coefficients; h is derived.
inline FilterPair make_wavelet_system(std::span<const double> g, std::string name = "custom") {
    FilterPair pair{std::move(name), std::vector<double>(g.begin(), g.end()), derive_wavelet_filter(g)};
    for (const auto& v : check_orthonormality(pair)) {
        if (v.constraint == "sum_rule" || v.constraint.starts_with("double_shift")) {
            std::ostringstream msg;
            msg << v.constraint << " violated, residual " << v.residual;
            throw Error(ErrorCode::NotOrthonormal, msg.str());
        }
    }
    return pair;
}

inline FilterPair make_wavelet_system(std::string_view builtin) {
    if (builtin == "haar") {
        const double c = 1.0 / std::numbers::sqrt2;
        const double g[] = {c, c};
        return make_wavelet_system(g, "haar");
    }
    if (builtin == "db4") {
        // Daubechies, two vanishing moments.
        const double s3 = std::numbers::sqrt3;
        const double d = 4.0 * std::numbers::sqrt2;
        const double g[] = {(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d};
        return make_wavelet_system(g, "db4");
    }
    throw Error(ErrorCode::UnknownWavelet, "no builtin wavelet named '" + std::string(builtin) + "'");
}

/// Parses a comma-separated line of decimal coefficients.
inline std::vector<double> parse_coefficients(std::string_view line) {
    std::vector<double> out;
    std::string token;
    std::istringstream in{std::string(line)};
    while (std::getline(in, token, ',')) {
        const auto first = token.find_first_not_of(" \t\r\n");
        if (first == std::string::npos) {
            throw Error(ErrorCode::ParseError, "empty coefficient field");
        }
        const auto last = token.find_last_not_of(" \t\r\n");
        token = token.substr(first, last - first + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &used);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "not a number: '" + token + "'");
        }
        if (used != token.size()) throw Error(ErrorCode::ParseError, "trailing characters in '" + token + "'");
        out.push_back(v);
    }
    if (out.empty()) throw Error(ErrorCode::ParseError, "no coefficients");
    return out;
}

/// 17 significant digits, so every double survives a text round trip.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_coefficients(std::span<const double> c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i) out += ',';
        out += format_real(c[i]);
    }
    return out;
}

} // namespace mrdm
