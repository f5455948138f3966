#pragma once

// Rate numerology of a multiresolution multiplex (N, J, R, B) and the
// deterministic assignment of tributaries to detail bands, TDM phases and
// the approximation node.
//
// Capacity is counted in units of the basic rate R: the whole frame holds
// 2^J units, the detail band at level j and the approximation node at level j
// each hold 2^(J-j) units, and a channel at rate r needs r/R units.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "mrdm/error.hpp"

namespace mrdm {

inline constexpr std::size_t kMaxCompositionDepth = 16;
inline constexpr std::size_t kDefaultCompositionCap = 1'000'000;
inline constexpr std::size_t kMaxPlanDepth = 30;

/// Exact nonnegative rational, always reduced.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    static Rational make(std::uint64_t n, std::uint64_t d) {
        if (d == 0) throw std::domain_error("zero denominator");
        const std::uint64_t g = std::gcd(n, d);
        return g ? Rational{n / g, d / g} : Rational{0, 1};
    }

    double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;
};

struct Channel {
    std::string id;
    std::uint64_t rate_bps = 0;
    std::optional<double> f_m_hz;
};

struct RatePlan {
    std::uint64_t N = 0;
    std::size_t J = 0;
    std::uint64_t R_bps = 0;
    unsigned B = 0;
    std::vector<Channel> channels;
};

/// n[j-1] counts channels at rate 2^(J-j)·R.
struct Composition {
    std::vector<std::uint64_t> n;

    bool operator==(const Composition&) const = default;
    auto operator<=>(const Composition&) const = default;
};

/// {R, 2R, ..., 2^(J-1)R}, ascending.
inline std::vector<std::uint64_t> tributary_rates(std::size_t J, std::uint64_t R) {
    std::vector<std::uint64_t> rates;
    for (std::size_t j = 0; j < J; ++j) rates.push_back(R << j);
    return rates;
}

/// All nonnegative solutions of Σ n_j·2^(J-j) = 2^J, lexicographically
/// descending on (n_1, n_2, ...).
inline std::vector<Composition> enumerate_compositions(std::size_t J, std::size_t cap = kDefaultCompositionCap) {
    if (J < 1) throw Error(ErrorCode::BadDepth, "J must be at least 1");
    if (J > kMaxCompositionDepth) {
        throw Error(ErrorCode::JTooLarge, "J=" + std::to_string(J) + " exceeds " +
                                              std::to_string(kMaxCompositionDepth));
    }
    std::vector<Composition> out;
    std::vector<std::uint64_t> n(J, 0);
    auto recurse = [&](auto&& self, std::size_t j, std::uint64_t remaining) -> void {
        const std::uint64_t weight = std::uint64_t{1} << (J - 1 - j);
        if (j + 1 == J) {
            n[j] = remaining;
            if (out.size() == cap) {
                throw Error(ErrorCode::JTooLarge, "more than " + std::to_string(cap) + " compositions for J=" +
                                                      std::to_string(J));
            }
            out.push_back(Composition{n});
            return;
        }
        for (std::uint64_t c = remaining / weight + 1; c-- > 0;) {
            n[j] = c;
            self(self, j + 1, remaining - c * weight);
        }
    };
    recurse(recurse, 0, std::uint64_t{1} << J);
    return out;
}

/// Channel size in units of R; zero when the rate is not a legal tributary rate.
inline std::uint64_t channel_units(const RatePlan& plan, std::uint64_t rate) {
    if (plan.R_bps == 0 || rate % plan.R_bps != 0) return 0;
    const std::uint64_t s = rate / plan.R_bps;
    if (!std::has_single_bit(s) || std::bit_width(s) > plan.J) return 0;
    return s;
}

/// Checks every plan invariant and returns the induced composition.
inline Composition validate_plan(const RatePlan& plan) {
    if (!std::has_single_bit(plan.N)) {
        throw Error(ErrorCode::NotPowerOfTwoN, "N=" + std::to_string(plan.N) + " is not a power of two");
    }
    if (plan.J < 1) throw Error(ErrorCode::BadDepth, "J must be at least 1");
    if (plan.J > kMaxPlanDepth || plan.N < (std::uint64_t{1} << plan.J)) {
        throw Error(ErrorCode::DepthExceedsBlocklength,
                    "J=" + std::to_string(plan.J) + " needs N >= 2^J, N=" + std::to_string(plan.N));
    }
    if (plan.R_bps == 0) throw Error(ErrorCode::IllegalRate, "basic rate R must be positive");
    if (plan.B < 1 || plan.B > 24) {
        throw Error(ErrorCode::BadResolution, "B=" + std::to_string(plan.B) + " outside 1..24");
    }

    std::unordered_set<std::string> seen;
    Composition comp{std::vector<std::uint64_t>(plan.J, 0)};
    std::uint64_t total = 0;
    for (const auto& ch : plan.channels) {
        if (ch.id.empty()) throw Error(ErrorCode::DuplicateChannel, "empty channel id");
        if (!seen.insert(ch.id).second) throw Error(ErrorCode::DuplicateChannel, "channel '" + ch.id + "' declared twice");
        const std::uint64_t s = channel_units(plan, ch.rate_bps);
        if (s == 0) {
            throw Error(ErrorCode::IllegalRate, "channel '" + ch.id + "' rate " + std::to_string(ch.rate_bps) +
                                                    " bps is not R·2^i for 0 <= i < J");
        }
        if (ch.f_m_hz) {
            const double expected = 2.0 * plan.B * *ch.f_m_hz;
            const double r = static_cast<double>(ch.rate_bps);
            if (!(std::abs(expected - r) <= 1e-9 * r)) {
                throw Error(ErrorCode::RateInconsistentWithFm,
                            "channel '" + ch.id + "' rate " + std::to_string(ch.rate_bps) + " != 2·B·f_m");
            }
        }
        // s = 2^(J-j)  =>  j = J - log2(s)
        const std::size_t j = plan.J - static_cast<std::size_t>(std::bit_width(s) - 1);
        ++comp.n[j - 1];
        total += s;
    }
    if (total != (std::uint64_t{1} << plan.J)) {
        throw Error(ErrorCode::CapacityMismatch, "channels sum to " + std::to_string(total * plan.R_bps) +
                                                     " bps, frame carries " +
                                                     std::to_string(plan.R_bps << plan.J) + " bps");
    }
    return comp;
}

/// Frame duration T = N·B / (2^J·R) seconds, exact.
inline Rational frame_time(const RatePlan& plan) {
    validate_plan(plan);
    std::uint64_t num = 0;
    std::uint64_t den = 0;
    if (__builtin_mul_overflow(plan.N, std::uint64_t{plan.B}, &num) ||
        __builtin_mul_overflow(plan.R_bps, std::uint64_t{1} << plan.J, &den)) {
        throw std::overflow_error("frame time does not fit 64-bit rational");
    }
    return Rational::make(num, den);
}

/// 2^J·R bits per second.
inline std::uint64_t aggregate_rate(const RatePlan& plan) {
    validate_plan(plan);
    return plan.R_bps << plan.J;
}

/// Coefficient indices {p, p+m, p+2m, ...} owned by slot (m, p) in a band.
inline std::vector<std::size_t> slot_indices(std::size_t band_length, std::uint64_t m, std::uint64_t p) {
    if (!std::has_single_bit(m) || p >= m || band_length % m != 0) {
        throw Error(ErrorCode::BadPhase, "slot (m=" + std::to_string(m) + ", p=" + std::to_string(p) +
                                             ") invalid for band length " + std::to_string(band_length));
    }
    std::vector<std::size_t> idx;
    idx.reserve(band_length / m);
    for (std::size_t i = p; i < band_length; i += m) idx.push_back(i);
    return idx;
}

struct Slot {
    std::string channel;
    std::uint64_t decimation = 1;
    std::uint64_t phase = 0;

    bool operator==(const Slot&) const = default;
};

struct DetailBand {
    std::size_t level = 0;
    std::vector<Slot> slots;

    bool operator==(const DetailBand&) const = default;
};

/// The allocation is a chain: the node at level j is split into the detail
/// band at level j+1 and the approximation node at level j+1, down to a leaf.
/// bands[i] is level i+1 and the leaf sits at level bands.size().
struct AllocationTree {
    std::size_t J = 0;
    std::vector<DetailBand> bands;
    std::string leaf;

    std::size_t depth() const noexcept { return bands.size(); }

    bool operator==(const AllocationTree&) const = default;
};

struct Placement {
    enum class Kind { Band, Leaf } kind = Kind::Leaf;
    std::size_t level = 0;
    std::uint64_t decimation = 1;
    std::uint64_t phase = 0;
};

inline std::optional<Placement> find_placement(const AllocationTree& tree, const std::string& id) {
    for (const auto& band : tree.bands) {
        for (const auto& slot : band.slots) {
            if (slot.channel == id) return Placement{Placement::Kind::Band, band.level, slot.decimation, slot.phase};
        }
    }
    if (tree.leaf == id) return Placement{Placement::Kind::Leaf, tree.depth(), 1, 0};
    return std::nullopt;
}

namespace detail {

struct FreeChunk {
    std::uint64_t decimation;
    std::uint64_t phase;
};

struct BandState {
    std::uint64_t capacity; // units
    std::vector<FreeChunk> free;
};

} // namespace detail

/// Buddy allocation: channels by rate descending (declaration order breaks
/// ties); each goes to the finest band holding a free chunk large enough,
/// lowest phase first, splitting (m,p) into (2m,p),(2m,p+m) and keeping the
/// lower half. With no band fitting, the approximation node becomes the
/// channel's leaf if sizes match, otherwise it is split one level deeper.
inline AllocationTree allocate_bands(const RatePlan& plan) {
    validate_plan(plan);

    std::vector<std::size_t> order(plan.channels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return plan.channels[a].rate_bps > plan.channels[b].rate_bps;
    });

    AllocationTree tree;
    tree.J = plan.J;
    std::vector<detail::BandState> state;
    std::uint64_t node_units = std::uint64_t{1} << plan.J;

    auto place_in_band = [&](std::size_t b, const std::string& id, std::uint64_t s) {
        auto& st = state[b];
        auto best = st.free.end();
        for (auto it = st.free.begin(); it != st.free.end(); ++it) {
            if (st.capacity / it->decimation >= s && (best == st.free.end() || it->phase < best->phase)) best = it;
        }
        if (best == st.free.end()) return false;
        detail::FreeChunk chunk = *best;
        st.free.erase(best);
        while (st.capacity / chunk.decimation > s) {
            st.free.push_back({chunk.decimation * 2, chunk.phase + chunk.decimation});
            chunk.decimation *= 2;
        }
        tree.bands[b].slots.push_back({id, chunk.decimation, chunk.phase});
        return true;
    };

    for (std::size_t idx : order) {
        const auto& ch = plan.channels[idx];
        const std::uint64_t s = channel_units(plan, ch.rate_bps);
        for (;;) {
            bool placed = false;
            for (std::size_t b = 0; b < state.size() && !placed; ++b) placed = place_in_band(b, ch.id, s);
            if (placed) break;
            if (node_units == s) {
                tree.leaf = ch.id;
                node_units = 0;
                break;
            }
            if (node_units < s || tree.depth() >= plan.J) {
                throw std::logic_error("buddy allocation failed for a validated plan");
            }
            node_units /= 2;
            tree.bands.push_back(DetailBand{tree.depth() + 1, {}});
            state.push_back({node_units, {{1, 0}}});
        }
    }
    if (tree.leaf.empty()) throw std::logic_error("approximation node left unassigned");
    return tree;
}

} // namespace mrdm
