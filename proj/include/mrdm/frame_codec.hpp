#pragma once

// End-to-end multiplex/demultiplex of one frame.
//
// mux:   payload bits -> B-bit words -> samples -> coefficient slots -> synthesis
// demux: analysis (stopping at the leaf) -> coefficient slots -> samples -> bits

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mrdm/error.hpp"
#include "mrdm/mra_core.hpp"
#include "mrdm/plan_json.hpp"
#include "mrdm/rate_plan.hpp"
#include "mrdm/wavelet_bank.hpp"

namespace mrdm {

using BitString = std::vector<bool>;

/// Accepts '0'/'1' and ignores whitespace.
inline BitString bits_from_string(std::string_view s) {
    BitString bits;
    for (char c : s) {
        if (c == '0' || c == '1') {
            bits.push_back(c == '1');
        } else if (c != ' ' && c != '\t' && c != '\n' && c != '_') {
            throw Error(ErrorCode::ParseError, std::string("bad bit character '") + c + "'");
        }
    }
    return bits;
}

inline std::string bits_to_string(const BitString& bits) {
    std::string s;
    s.reserve(bits.size());
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
}

/// MSB first.
inline BitString bits_from_bytes(std::span<const std::uint8_t> bytes) {
    BitString bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t byte : bytes) {
        for (int i = 7; i >= 0; --i) bits.push_back(((byte >> i) & 1u) != 0);
    }
    return bits;
}

/// MSB first; a partial final byte is zero-padded.
inline std::vector<std::uint8_t> bits_to_bytes(const BitString& bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
    }
    return bytes;
}

namespace detail {

inline void check_resolution(unsigned B) {
    if (B < 1 || B > 24) throw Error(ErrorCode::BadResolution, "B=" + std::to_string(B) + " outside 1..24");
}

} // namespace detail

/// Offset-binary midrise: an unsigned MSB-first word w maps to
/// (2w + 1 - 2^B) / 2^B, strictly inside (-1, 1).
inline std::vector<double> quantize_words(const BitString& bits, unsigned B) {
    detail::check_resolution(B);
    if (bits.size() % B != 0) {
        throw Error(ErrorCode::BadLength,
                    std::to_string(bits.size()) + " bits is not a whole number of " + std::to_string(B) + "-bit words");
    }
    const double scale = std::ldexp(1.0, static_cast<int>(B));
    std::vector<double> out;
    out.reserve(bits.size() / B);
    for (std::size_t i = 0; i < bits.size(); i += B) {
        std::uint32_t w = 0;
        for (unsigned b = 0; b < B; ++b) w = (w << 1) | (bits[i + b] ? 1u : 0u);
        out.push_back((2.0 * w + 1.0 - scale) / scale);
    }
    return out;
}

/// Nearest-level decoding. Every sample must lie within 2^-(B+1) of a level.
inline BitString dequantize_samples(std::span<const double> v, unsigned B) {
    detail::check_resolution(B);
    const double scale = std::ldexp(1.0, static_cast<int>(B));
    const double guard = std::ldexp(1.0, -static_cast<int>(B) - 1);
    BitString bits;
    bits.reserve(v.size() * B);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double w = std::round((v[i] * scale - 1.0 + scale) / 2.0);
        const double level = (2.0 * w + 1.0 - scale) / scale;
        if (!std::isfinite(v[i]) || w < 0.0 || w >= scale || std::abs(v[i] - level) > guard) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "sample %zu = %.17g is off the %u-bit grid", i, v[i], B);
            throw Error(ErrorCode::OffGrid, msg);
        }
        const auto word = static_cast<std::uint32_t>(w);
        for (unsigned b = B; b-- > 0;) bits.push_back(((word >> b) & 1u) != 0);
    }
    return bits;
}

enum class PayloadMode { Digital, Samples };

struct TributaryPayload {
    std::string id;
    std::variant<BitString, std::vector<double>> content;

    bool digital() const noexcept { return std::holds_alternative<BitString>(content); }
    const BitString& bits() const { return std::get<BitString>(content); }
    const std::vector<double>& samples() const { return std::get<std::vector<double>>(content); }

    bool operator==(const TributaryPayload&) const = default;
};

struct MuxedSignal {
    std::vector<double> samples;
    std::string plan_digest;
};

/// Coefficients a channel owns per frame: (rate/R)·N/2^J.
inline std::size_t samples_per_frame(const RatePlan& plan, const Channel& ch) {
    return static_cast<std::size_t>(channel_units(plan, ch.rate_bps) * (plan.N >> plan.J));
}

/// A payload's content as samples; digital content is quantized with B bits.
inline std::vector<double> payload_samples(const TributaryPayload& p, unsigned B) {
    if (p.digital()) return quantize_words(p.bits(), B);
    for (double v : p.samples()) {
        if (!(v >= -1.0 && v < 1.0)) {
            throw Error(ErrorCode::SampleOutOfRange, "channel '" + p.id + "' sample outside [-1, 1)");
        }
    }
    return p.samples();
}

/// FNV-1a over the canonical plan and tree serializations.
inline std::string plan_digest(const RatePlan& plan, const AllocationTree& tree) {
    const std::string text = plan_to_json(plan).dump() + tree_to_json(tree).dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline std::map<std::string, const TributaryPayload*> index_payloads(const RatePlan& plan,
                                                                     std::span<const TributaryPayload> payloads) {
    std::map<std::string, const TributaryPayload*> by_id;
    for (const auto& p : payloads) {
        if (!by_id.emplace(p.id, &p).second) {
            throw Error(ErrorCode::DuplicateChannel, "two payloads for channel '" + p.id + "'");
        }
    }
    for (const auto& ch : plan.channels) {
        if (!by_id.contains(ch.id)) throw Error(ErrorCode::MissingChannel, "no payload for channel '" + ch.id + "'");
    }
    if (by_id.size() != plan.channels.size()) {
        for (const auto& [id, _] : by_id) {
            const bool declared = std::any_of(plan.channels.begin(), plan.channels.end(),
                                              [&](const Channel& c) { return c.id == id; });
            if (!declared) throw Error(ErrorCode::MissingChannel, "payload '" + id + "' is not a declared channel");
        }
    }
    return by_id;
}

} // namespace detail

/// Scatters each channel's samples, in temporal order, into its leaf array or
/// its band slot.
inline CoefficientFrame assemble_frame(const RatePlan& plan, const AllocationTree& tree,
                                       std::span<const TributaryPayload> payloads) {
    const auto by_id = detail::index_payloads(plan, payloads);
    CoefficientFrame frame = make_frame(static_cast<std::size_t>(plan.N), tree.depth());
    for (const auto& ch : plan.channels) {
        const std::vector<double> samples = payload_samples(*by_id.at(ch.id), plan.B);
        const std::size_t expected = samples_per_frame(plan, ch);
        if (samples.size() != expected) {
            throw Error(ErrorCode::PayloadLengthMismatch, "channel '" + ch.id + "' carries " +
                                                              std::to_string(samples.size()) + " samples, frame needs " +
                                                              std::to_string(expected));
        }
        const auto where = find_placement(tree, ch.id);
        if (!where) throw Error(ErrorCode::ShapeMismatch, "channel '" + ch.id + "' has no place in the tree");
        if (where->kind == Placement::Kind::Leaf) {
            if (frame.approx.size() != expected) throw Error(ErrorCode::ShapeMismatch, "leaf size mismatch");
            frame.approx = samples;
            continue;
        }
        auto& band = frame.detail(where->level);
        const auto idx = slot_indices(band.size(), where->decimation, where->phase);
        if (idx.size() != expected) throw Error(ErrorCode::ShapeMismatch, "slot size mismatch for '" + ch.id + "'");
        for (std::size_t k = 0; k < idx.size(); ++k) band[idx[k]] = samples[k];
    }
    return frame;
}

/// Gathers sample payloads back out of a frame, in tree order: band 1 slots,
/// band 2 slots, ..., then the leaf.
inline std::vector<TributaryPayload> disassemble_frame(const CoefficientFrame& frame, const AllocationTree& tree) {
    if (!well_formed(frame) || frame.depth() != tree.depth()) {
        throw Error(ErrorCode::ShapeMismatch, "frame depth " + std::to_string(frame.depth()) +
                                                  " does not match tree depth " + std::to_string(tree.depth()));
    }
    std::vector<TributaryPayload> out;
    for (const auto& band : tree.bands) {
        const auto& coeffs = frame.detail(band.level);
        for (const auto& slot : band.slots) {
            std::vector<double> samples;
            try {
                for (std::size_t i : slot_indices(coeffs.size(), slot.decimation, slot.phase)) {
                    samples.push_back(coeffs[i]);
                }
            } catch (const Error& e) {
                throw Error(ErrorCode::ShapeMismatch, e.what());
            }
            out.push_back({slot.channel, std::move(samples)});
        }
    }
    out.push_back({tree.leaf, frame.approx});
    return out;
}

inline MuxedSignal mux(const RatePlan& plan, const AllocationTree& tree, const FilterPair& system,
                       std::span<const TributaryPayload> payloads) {
    return {synthesize(assemble_frame(plan, tree, payloads), system), plan_digest(plan, tree)};
}

inline MuxedSignal mux(const RatePlan& plan, const FilterPair& system, std::span<const TributaryPayload> payloads) {
    return mux(plan, allocate_bands(plan), system, payloads);
}

/// Truncated analysis along the tree, then slot extraction. Payloads come
/// back in declaration order; digital mode dequantizes with B bits.
inline std::vector<TributaryPayload> demux(const RatePlan& plan, const AllocationTree& tree, const FilterPair& system,
                                           const MuxedSignal& signal, PayloadMode mode = PayloadMode::Digital) {
    if (signal.samples.size() != plan.N) {
        throw Error(ErrorCode::ShapeMismatch, "signal has " + std::to_string(signal.samples.size()) +
                                                  " samples, frame length is " + std::to_string(plan.N));
    }
    if (!signal.plan_digest.empty() && signal.plan_digest != plan_digest(plan, tree)) {
        throw Error(ErrorCode::ShapeMismatch, "signal was multiplexed under a different plan");
    }
    const auto parts = disassemble_frame(analyze(signal.samples, tree.depth(), system), tree);
    std::vector<TributaryPayload> out;
    out.reserve(plan.channels.size());
    for (const auto& ch : plan.channels) {
        const auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& p) { return p.id == ch.id; });
        if (it == parts.end()) throw Error(ErrorCode::ShapeMismatch, "channel '" + ch.id + "' missing from tree");
        if (mode == PayloadMode::Samples) {
            out.push_back(*it);
            continue;
        }
        try {
            out.push_back({ch.id, dequantize_samples(it->samples(), plan.B)});
        } catch (const Error& e) {
            if (e.code() != ErrorCode::OffGrid) throw;
            throw Error(ErrorCode::OffGrid, "channel '" + ch.id + "': " + e.what());
        }
    }
    return out;
}

inline std::vector<TributaryPayload> demux(const RatePlan& plan, const FilterPair& system, const MuxedSignal& signal,
                                           PayloadMode mode = PayloadMode::Digital) {
    return demux(plan, allocate_bands(plan), system, signal, mode);
}

} // namespace mrdm
