#pragma once

// Command-line front end. Exit codes: 0 success, 2 plan/config invalid,
// 3 I/O or payload shape, 4 demux integrity (off-grid samples).

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrdm/mrdm.hpp"

namespace mrdm::cli {

enum Exit : int { kOk = 0, kConfig = 2, kPayload = 3, kIntegrity = 4 };

struct CliConfig {
    std::string plan_path;
    std::string wavelet = "haar";
    std::string input;
    std::string output;
    std::string payload_dir;
    std::string format = "raw";
    std::string mode = "digital";
    std::uint64_t seed = 1;
    std::size_t frames = 1;
    std::size_t depth = 0;
    std::uint64_t rate = 64000;
    bool verbose = false;
    bool show_tree = false;
};

inline FilterPair load_wavelet(const std::string& spec) {
    if (spec.starts_with("file:")) {
        const std::string path = spec.substr(5);
        const auto bytes = read_bytes(path);
        std::string text(bytes.begin(), bytes.end());
        const auto eol = text.find('\n');
        if (eol != std::string::npos) text.resize(eol);
        const auto g = parse_coefficients(text);
        return make_wavelet_system(g, std::filesystem::path(path).stem().string());
    }
    return make_wavelet_system(spec);
}

inline std::string format_seconds(const Rational& t) {
    std::ostringstream os;
    os << t.num << '/' << t.den << " s (" << std::setprecision(12) << t.value() * 1e3 << " ms)";
    return os.str();
}

inline std::string describe(const Placement& p) {
    if (p.kind == Placement::Kind::Leaf) return "approximation level " + std::to_string(p.level);
    return "detail level " + std::to_string(p.level) + " m=" + std::to_string(p.decimation) +
           " p=" + std::to_string(p.phase);
}

inline std::string composition_string(const Composition& c) {
    std::string s = "(";
    for (std::size_t i = 0; i < c.n.size(); ++i) s += (i ? "," : "") + std::to_string(c.n[i]);
    return s + ")";
}

inline int cmd_plan(const CliConfig& cfg, std::ostream& out) {
    const RatePlan plan = load_plan(cfg.plan_path);
    const Composition comp = validate_plan(plan);
    const AllocationTree tree = allocate_bands(plan);
    out << "MRDM(" << plan.N << ", " << plan.J << ", " << plan.R_bps << " bps), B=" << plan.B << "\n";
    out << "composition " << composition_string(comp) << "\n";
    out << "frame time " << format_seconds(frame_time(plan)) << "\n";
    out << "aggregate rate " << aggregate_rate(plan) << " bps\n";
    out << "allocation:\n";
    for (const auto& ch : plan.channels) {
        const auto p = find_placement(tree, ch.id);
        out << "  " << std::left << std::setw(12) << ch.id << std::right << std::setw(10) << ch.rate_bps
            << " bps  " << samples_per_frame(plan, ch) << " samples/frame  " << describe(*p) << "\n";
    }
    if (cfg.show_tree) out << tree_to_json(tree).dump(2) << "\n";
    return kOk;
}

inline int cmd_compositions(std::size_t J, std::uint64_t R, std::ostream& out, std::ostream& err) {
    if (J < 1 || J > 8) {
        err << "error: J must be in 1..8 for tabular output\n";
        return kConfig;
    }
    const auto rates = tributary_rates(J, R);
    out << "make-up";
    for (std::size_t j = J; j-- > 0;) out << "  n" << (J - j) << "@" << rates[j];
    out << "\n";
    const auto comps = enumerate_compositions(J);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        out << "A_" << (i + 1);
        for (auto n : comps[i].n) out << ' ' << n;
        out << "\n";
    }
    return kOk;
}

namespace detail {

struct LoadedPayloads {
    std::vector<std::vector<TributaryPayload>> frames;
};

// Splits every channel file into whole frames; all channels must agree on the
// frame count.
inline LoadedPayloads load_payloads(const RatePlan& plan, const CliConfig& cfg) {
    namespace fs = std::filesystem;
    const SignalFormat fmt = cfg.format == "csv" ? SignalFormat::Csv : SignalFormat::Raw;
    std::size_t frame_count = 0;
    std::vector<TributaryPayload> whole;
    for (const auto& ch : plan.channels) {
        const fs::path bits_path = fs::path(cfg.payload_dir) / (ch.id + ".bits");
        const fs::path samples_path = fs::path(cfg.payload_dir) / (ch.id + ".samples");
        const std::size_t spf = samples_per_frame(plan, ch);
        std::size_t count = 0;
        std::size_t per_frame = 0;
        if (fs::exists(bits_path)) {
            auto bits = bits_from_bytes(read_bytes(bits_path.string()));
            per_frame = spf * plan.B;
            count = bits.size();
            whole.push_back({ch.id, std::move(bits)});
        } else if (fs::exists(samples_path)) {
            auto samples = read_signal(samples_path.string(), fmt);
            per_frame = spf;
            count = samples.size();
            whole.push_back({ch.id, std::move(samples)});
        } else {
            throw Error(ErrorCode::MissingChannel, "no payload file for channel '" + ch.id + "' in " + cfg.payload_dir);
        }
        if (count == 0 || count % per_frame != 0) {
            throw Error(ErrorCode::PayloadLengthMismatch,
                        "channel '" + ch.id + "' payload is not a whole number of frames");
        }
        const std::size_t f = count / per_frame;
        if (frame_count != 0 && f != frame_count) {
            throw Error(ErrorCode::PayloadLengthMismatch, "channel '" + ch.id + "' spans " + std::to_string(f) +
                                                              " frames, others span " + std::to_string(frame_count));
        }
        frame_count = f;
    }

    LoadedPayloads lp;
    lp.frames.resize(frame_count);
    for (std::size_t c = 0; c < plan.channels.size(); ++c) {
        const auto& p = whole[c];
        for (std::size_t f = 0; f < frame_count; ++f) {
            if (p.digital()) {
                const std::size_t n = samples_per_frame(plan, plan.channels[c]) * plan.B;
                BitString part(p.bits().begin() + static_cast<std::ptrdiff_t>(f * n),
                               p.bits().begin() + static_cast<std::ptrdiff_t>((f + 1) * n));
                lp.frames[f].push_back({p.id, std::move(part)});
            } else {
                const std::size_t n = samples_per_frame(plan, plan.channels[c]);
                std::vector<double> part(p.samples().begin() + static_cast<std::ptrdiff_t>(f * n),
                                         p.samples().begin() + static_cast<std::ptrdiff_t>((f + 1) * n));
                lp.frames[f].push_back({p.id, std::move(part)});
            }
        }
    }
    return lp;
}

} // namespace detail

inline int cmd_mux(const CliConfig& cfg, const RatePlan& plan, const FilterPair& system, std::ostream& err) {
    const auto tree = allocate_bands(plan);
    const auto loaded = detail::load_payloads(plan, cfg);
    std::vector<double> signal;
    signal.reserve(loaded.frames.size() * plan.N);
    for (const auto& frame : loaded.frames) {
        const auto m = mux(plan, tree, system, frame);
        signal.insert(signal.end(), m.samples.begin(), m.samples.end());
    }
    write_signal(cfg.output, signal, cfg.format == "csv" ? SignalFormat::Csv : SignalFormat::Raw);
    if (cfg.verbose) err << "muxed " << loaded.frames.size() << " frame(s) -> " << cfg.output << "\n";
    return kOk;
}

inline int cmd_demux(const CliConfig& cfg, const RatePlan& plan, const FilterPair& system, std::ostream& err) {
    namespace fs = std::filesystem;
    const auto tree = allocate_bands(plan);
    const auto signal = read_signal(cfg.input, cfg.format == "csv" ? SignalFormat::Csv : SignalFormat::Raw);
    if (signal.empty() || signal.size() % plan.N != 0) {
        throw Error(ErrorCode::ShapeMismatch, "signal length " + std::to_string(signal.size()) +
                                                  " is not a whole number of " + std::to_string(plan.N) +
                                                  "-sample frames");
    }
    const PayloadMode mode = cfg.mode == "samples" ? PayloadMode::Samples : PayloadMode::Digital;
    std::map<std::string, TributaryPayload> acc;
    for (const auto& ch : plan.channels) {
        acc[ch.id] = mode == PayloadMode::Digital ? TributaryPayload{ch.id, BitString{}}
                                                  : TributaryPayload{ch.id, std::vector<double>{}};
    }
    const std::size_t frames = signal.size() / plan.N;
    for (std::size_t f = 0; f < frames; ++f) {
        MuxedSignal m{std::vector<double>(signal.begin() + static_cast<std::ptrdiff_t>(f * plan.N),
                                          signal.begin() + static_cast<std::ptrdiff_t>((f + 1) * plan.N)),
                      {}};
        for (auto& p : demux(plan, tree, system, m, mode)) {
            auto& dst = acc[p.id];
            if (mode == PayloadMode::Digital) {
                auto& bits = std::get<BitString>(dst.content);
                bits.insert(bits.end(), p.bits().begin(), p.bits().end());
            } else {
                auto& s = std::get<std::vector<double>>(dst.content);
                s.insert(s.end(), p.samples().begin(), p.samples().end());
            }
        }
    }
    fs::create_directories(cfg.output);
    for (const auto& ch : plan.channels) {
        const auto& p = acc[ch.id];
        if (mode == PayloadMode::Digital) {
            write_bytes((fs::path(cfg.output) / (ch.id + ".bits")).string(), bits_to_bytes(p.bits()));
        } else {
            write_signal((fs::path(cfg.output) / (ch.id + ".samples")).string(), p.samples(),
                         cfg.format == "csv" ? SignalFormat::Csv : SignalFormat::Raw);
        }
    }
    if (cfg.verbose) err << "demuxed " << frames << " frame(s) -> " << cfg.output << "\n";
    return kOk;
}

inline int cmd_spectrum(const CliConfig& cfg, const RatePlan& plan, const FilterPair& system, std::ostream& out) {
    const auto report = compare_spectra(plan, system, cfg.seed, cfg.frames);
    const std::string csv = spectrum_csv(report);
    if (cfg.output.empty() || cfg.output == "-") {
        out << csv;
    } else {
        write_bytes(cfg.output, std::vector<std::uint8_t>(csv.begin(), csv.end()));
    }
    return kOk;
}

/// Random digital payloads through mux and demux; reports the first mismatch.
inline int cmd_roundtrip(const CliConfig& cfg, const RatePlan& plan, const FilterPair& system, std::ostream& out,
                         std::ostream& err) {
    std::mt19937_64 rng(cfg.seed);
    const auto tree = allocate_bands(plan);
    for (std::size_t f = 0; f < cfg.frames; ++f) {
        const auto payloads = random_bit_payloads(plan, rng);
        const auto back = demux(plan, tree, system, mux(plan, tree, system, payloads));
        for (std::size_t c = 0; c < payloads.size(); ++c) {
            if (!(back[c] == payloads[c])) {
                err << "frame " << f << ": channel '" << payloads[c].id << "' differs after round trip\n";
                return kIntegrity;
            }
        }
    }
    out << "round trip ok: " << cfg.frames << " frame(s), " << plan.channels.size() << " channels, wavelet "
        << system.name << "\n";
    return kOk;
}

inline int cmd_wavelet(const FilterPair& system, std::ostream& out) {
    out << "name " << system.name << "\n";
    out << "g " << format_coefficients(system.g) << "\n";
    out << "h " << format_coefficients(system.h) << "\n";
    const auto report = check_orthonormality(system);
    if (report.empty()) out << "orthonormal\n";
    for (const auto& v : report) out << "violation " << v.constraint << " residual " << format_real(v.residual) << "\n";
    return report.empty() ? kOk : kConfig;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CliConfig cfg;
    CLI::App app{"Multiresolution division multiplex: wavelet-based mux/demux of tributary channels"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", cfg.verbose, "Progress messages on stderr");

    auto add_plan = [&](CLI::App* sub) { sub->add_option("--plan", cfg.plan_path, "Plan JSON file")->required(); };
    auto add_wavelet = [&](CLI::App* sub) {
        sub->add_option("--wavelet", cfg.wavelet, "haar | db4 | file:<path>")->capture_default_str();
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "Signal file format")
            ->check(CLI::IsMember({"raw", "csv"}))
            ->capture_default_str();
    };

    auto* plan_cmd = app.add_subcommand("plan", "Validate a plan and print its allocation");
    add_plan(plan_cmd);
    plan_cmd->add_flag("--tree", cfg.show_tree, "Also print the allocation tree as JSON");

    auto* comp_cmd = app.add_subcommand("compositions", "List every channel composition for J levels");
    comp_cmd->add_option("J", cfg.depth, "Number of scales")->required();
    comp_cmd->add_option("--rate", cfg.rate, "Basic rate R in bps")->capture_default_str();

    auto* mux_cmd = app.add_subcommand("mux", "Multiplex payload files into a signal");
    add_plan(mux_cmd);
    add_wavelet(mux_cmd);
    add_format(mux_cmd);
    mux_cmd->add_option("--payloads", cfg.payload_dir, "Directory of <id>.bits / <id>.samples")->required();
    mux_cmd->add_option("--out", cfg.output, "Output signal file")->required();

    auto* demux_cmd = app.add_subcommand("demux", "Demultiplex a signal into payload files");
    add_plan(demux_cmd);
    add_wavelet(demux_cmd);
    add_format(demux_cmd);
    demux_cmd->add_option("--in", cfg.input, "Input signal file")->required();
    demux_cmd->add_option("--out", cfg.output, "Output directory")->required();
    demux_cmd->add_option("--mode", cfg.mode, "Payload kind to write")
        ->check(CLI::IsMember({"digital", "samples"}))
        ->capture_default_str();

    auto* spec_cmd = app.add_subcommand("spectrum", "Magnitude spectra of MRDM vs TDM for random payloads");
    add_plan(spec_cmd);
    add_wavelet(spec_cmd);
    spec_cmd->add_option("--seed", cfg.seed, "Payload RNG seed")->capture_default_str();
    spec_cmd->add_option("--frames", cfg.frames, "Frames concatenated before the transform")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    spec_cmd->add_option("--out", cfg.output, "CSV output file (default stdout)");

    auto* rt_cmd = app.add_subcommand("roundtrip", "Self-check: random payloads through mux and demux");
    add_plan(rt_cmd);
    add_wavelet(rt_cmd);
    rt_cmd->add_option("--seed", cfg.seed, "Payload RNG seed")->capture_default_str();
    rt_cmd->add_option("--frames", cfg.frames, "Number of frames")->check(CLI::PositiveNumber)->capture_default_str();

    auto* wav_cmd = app.add_subcommand("wavelet", "Print a filter pair and its orthonormality report");
    add_wavelet(wav_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    }

    if (*comp_cmd) {
        try {
            return cmd_compositions(cfg.depth, cfg.rate, out, err);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kConfig;
        }
    }

    // Configuration stage: anything wrong here is exit 2.
    RatePlan plan;
    FilterPair system;
    try {
        if (*wav_cmd) return cmd_wavelet(load_wavelet(cfg.wavelet), out);
        plan = load_plan(cfg.plan_path);
        validate_plan(plan);
        if (*plan_cmd) return cmd_plan(cfg, out);
        system = load_wavelet(cfg.wavelet);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kConfig;
    }

    // Data stage.
    try {
        if (*mux_cmd) return cmd_mux(cfg, plan, system, err);
        if (*demux_cmd) return cmd_demux(cfg, plan, system, err);
        if (*spec_cmd) return cmd_spectrum(cfg, plan, system, out);
        if (*rt_cmd) return cmd_roundtrip(cfg, plan, system, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::OffGrid ? kIntegrity : kPayload;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kPayload;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kPayload;
    }
    return kConfig;
}

} // namespace mrdm::cli
