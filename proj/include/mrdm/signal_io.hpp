#pragma once

// File formats for signals and sample payloads: raw 64-bit IEEE-754
// little-endian, or CSV with one value per line at 17 significant digits.
// Digital payloads are plain byte files.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrdm/error.hpp"
#include "mrdm/wavelet_bank.hpp"

namespace mrdm {

enum class SignalFormat { Raw, Csv };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + path + "'");
}

inline std::vector<std::uint8_t> encode_raw(const std::vector<double>& v) {
    std::vector<std::uint8_t> bytes(v.size() * 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto bits = std::bit_cast<std::uint64_t>(v[i]);
        for (int b = 0; b < 8; ++b) bytes[8 * i + b] = static_cast<std::uint8_t>(bits >> (8 * b));
    }
    return bytes;
}

inline std::vector<double> decode_raw(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() % 8 != 0) {
        throw Error(ErrorCode::BadLength, "raw signal size " + std::to_string(bytes.size()) + " is not a multiple of 8");
    }
    std::vector<double> v(bytes.size() / 8);
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) bits = (bits << 8) | bytes[8 * i + b];
        v[i] = std::bit_cast<double>(bits);
    }
    return v;
}

inline std::string encode_csv(const std::vector<double>& v) {
    std::string out;
    for (double x : v) {
        out += format_real(x);
        out += '\n';
    }
    return out;
}

inline std::vector<double> decode_csv(const std::string& text) {
    std::vector<double> v;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        for (double x : parse_coefficients(line)) v.push_back(x);
    }
    return v;
}

inline std::vector<double> read_signal(const std::string& path, SignalFormat format) {
    const auto bytes = read_bytes(path);
    if (format == SignalFormat::Raw) return decode_raw(bytes);
    return decode_csv(std::string(bytes.begin(), bytes.end()));
}

inline void write_signal(const std::string& path, const std::vector<double>& v, SignalFormat format) {
    if (format == SignalFormat::Raw) {
        write_bytes(path, encode_raw(v));
        return;
    }
    const std::string text = encode_csv(v);
    write_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

} // namespace mrdm
