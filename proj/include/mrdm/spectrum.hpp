#pragma once

// Magnitude spectra of the multiplexed signal against a plain TDM reference
// carrying the same samples. Requires linking FFTW3.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <fftw3.h>

#include "mrdm/frame_codec.hpp"
#include "mrdm/rate_plan.hpp"
#include "mrdm/wavelet_bank.hpp"

namespace mrdm {

/// Channel sample blocks concatenated in declaration order.
inline std::vector<double> tdm_reference(const RatePlan& plan, std::span<const TributaryPayload> payloads) {
    validate_plan(plan);
    const auto by_id = detail::index_payloads(plan, payloads);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(plan.N));
    for (const auto& ch : plan.channels) {
        const auto samples = payload_samples(*by_id.at(ch.id), plan.B);
        if (samples.size() != samples_per_frame(plan, ch)) {
            throw Error(ErrorCode::PayloadLengthMismatch, "channel '" + ch.id + "' carries " +
                                                              std::to_string(samples.size()) + " samples, frame needs " +
                                                              std::to_string(samples_per_frame(plan, ch)));
        }
        out.insert(out.end(), samples.begin(), samples.end());
    }
    return out;
}

namespace detail {

inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

} // namespace detail

/// |Σ_n x[n]·exp(-2πi·kn/N)| for k = 0..N-1.
inline std::vector<double> dft_magnitude(std::span<const double> x) {
    const std::size_t N = x.size();
    if (N == 0) return {};
    const std::size_t bins = N / 2 + 1;
    double* in = fftw_alloc_real(N);
    fftw_complex* out = fftw_alloc_complex(bins);
    fftw_plan plan;
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(N), in, out, FFTW_ESTIMATE);
    }
    std::copy(x.begin(), x.end(), in);
    fftw_execute(plan);

    std::vector<double> mag(N);
    for (std::size_t k = 0; k < bins; ++k) mag[k] = std::hypot(out[k][0], out[k][1]);
    // Real input: X[N-k] = conj(X[k]).
    for (std::size_t k = bins; k < N; ++k) mag[k] = mag[N - k];

    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(out);
    fftw_free(in);
    return mag;
}

/// Uniform random bits for every channel, drawn MSB-first from 64-bit
/// mt19937_64 outputs in declaration order.
inline std::vector<TributaryPayload> random_bit_payloads(const RatePlan& plan, std::mt19937_64& rng) {
    validate_plan(plan);
    std::vector<TributaryPayload> out;
    for (const auto& ch : plan.channels) {
        const std::size_t nbits = samples_per_frame(plan, ch) * plan.B;
        BitString bits;
        bits.reserve(nbits);
        std::uint64_t word = 0;
        int left = 0;
        for (std::size_t i = 0; i < nbits; ++i) {
            if (left == 0) {
                word = rng();
                left = 64;
            }
            --left;
            bits.push_back(((word >> left) & 1u) != 0);
        }
        out.push_back({ch.id, std::move(bits)});
    }
    return out;
}

struct SpectrumRow {
    std::size_t k = 0;
    double mag_tdm = 0.0;
    double mag_mrdm = 0.0;
};

struct SpectrumReport {
    std::uint64_t seed = 0;
    std::size_t N = 0;
    std::size_t J = 0;
    std::string wavelet;
    std::vector<SpectrumRow> rows;
    double energy_tdm = 0.0;  // Σ mag_tdm² / N
    double energy_mrdm = 0.0; // Σ mag_mrdm² / N
};

/// Report over two equal-length time signals.
inline SpectrumReport spectrum_report(std::span<const double> tdm, std::span<const double> mrdm) {
    if (tdm.size() != mrdm.size()) {
        throw Error(ErrorCode::ShapeMismatch, "TDM and MRDM signals differ in length");
    }
    const auto a = dft_magnitude(tdm);
    const auto b = dft_magnitude(mrdm);
    SpectrumReport r;
    r.N = tdm.size();
    r.rows.reserve(r.N);
    for (std::size_t k = 0; k < r.N; ++k) {
        r.rows.push_back({k, a[k], b[k]});
        r.energy_tdm += a[k] * a[k];
        r.energy_mrdm += b[k] * b[k];
    }
    if (r.N) {
        r.energy_tdm /= static_cast<double>(r.N);
        r.energy_mrdm /= static_cast<double>(r.N);
    }
    return r;
}

inline SpectrumReport compare_spectra(const RatePlan& plan, const FilterPair& system,
                                      std::span<const TributaryPayload> payloads) {
    const auto mrdm = mux(plan, system, payloads);
    const auto tdm = tdm_reference(plan, payloads);
    SpectrumReport r = spectrum_report(tdm, mrdm.samples);
    r.J = plan.J;
    r.wavelet = system.name;
    return r;
}

/// Seeded scenario: `frames` consecutive frames of random bits, both signals
/// concatenated frame by frame before the transform.
inline SpectrumReport compare_spectra(const RatePlan& plan, const FilterPair& system, std::uint64_t seed,
                                      std::size_t frames = 1) {
    std::mt19937_64 rng(seed);
    const auto tree = allocate_bands(plan);
    std::vector<double> tdm;
    std::vector<double> mrdm;
    for (std::size_t f = 0; f < frames; ++f) {
        const auto payloads = random_bit_payloads(plan, rng);
        const auto t = tdm_reference(plan, payloads);
        const auto m = mux(plan, tree, system, payloads);
        tdm.insert(tdm.end(), t.begin(), t.end());
        mrdm.insert(mrdm.end(), m.samples.begin(), m.samples.end());
    }
    SpectrumReport r = spectrum_report(tdm, mrdm);
    r.seed = seed;
    r.J = plan.J;
    r.wavelet = system.name;
    return r;
}

inline std::string spectrum_csv(const SpectrumReport& r) {
    std::string out = "# seed=" + std::to_string(r.seed) + " N=" + std::to_string(r.N) + " J=" +
                      std::to_string(r.J) + " wavelet=" + r.wavelet + "\n";
    out += "k,mag_tdm,mag_mrdm\n";
    for (const auto& row : r.rows) {
        out += std::to_string(row.k) + ',' + format_real(row.mag_tdm) + ',' + format_real(row.mag_mrdm) + '\n';
    }
    return out;
}

} // namespace mrdm
