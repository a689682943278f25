#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "groupflow/config.hpp"
#include "groupflow/error.hpp"

namespace groupflow {

inline void ensure_dir(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error("io-failure", "cannot create directory '" + path + "': " + ec.message());
}

/// Writes bytes to `path`. Refuses to replace an existing file unless
/// `force` is set — outputs are never silently overwritten.
inline void write_file(const std::string& path, std::string_view content, bool force) {
    if (!force && std::filesystem::exists(path))
        throw Error("would-overwrite", "'" + path + "' exists; pass --force to replace it");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("io-failure", "cannot open '" + path + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw Error("io-failure", "short write to '" + path + "'");
}

/// Accumulates CSV text: one header row, then data rows. Doubles are
/// rendered in shortest round-trip form so identical runs produce identical
/// bytes.
class CsvBuilder {
public:
    explicit CsvBuilder(std::initializer_list<std::string_view> header) {
        bool first = true;
        for (std::string_view col : header) {
            if (!first) text_ += ',';
            text_ += col;
            first = false;
        }
        text_ += '\n';
        columns_ = header.size();
    }

    CsvBuilder& cell(std::string_view v) {
        if (in_row_ > 0) text_ += ',';
        text_ += v;
        ++in_row_;
        return *this;
    }
    CsvBuilder& cell(double v) { return cell(std::string_view(format_double(v))); }
    CsvBuilder& cell(long v) { return cell(std::string_view(std::to_string(v))); }
    CsvBuilder& cell(int v) { return cell(std::string_view(std::to_string(v))); }
    CsvBuilder& cell(std::uint64_t v) { return cell(std::string_view(std::to_string(v))); }

    void end_row() {
        if (in_row_ != columns_)
            throw Error("io-failure", "CSV row has " + std::to_string(in_row_) + " cells, header has " +
                                          std::to_string(columns_));
        text_ += '\n';
        in_row_ = 0;
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

/// Binary P5 PGM of a scalar grid, linearly scaled so the maximum value maps
/// to white (a uniform zero grid stays black). Row y = 0 is the top image
/// row.
inline std::string render_pgm(int width, int height, const std::vector<double>& values) {
    double vmax = 0;
    for (double v : values) vmax = std::max(vmax, v);
    std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    out.reserve(out.size() + std::size_t(width) * std::size_t(height));
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double v = values[std::size_t(y) * std::size_t(width) + std::size_t(x)];
            const int level = vmax > 0 ? int(std::lround(v / vmax * 255.0)) : 0;
            out += char(std::uint8_t(std::clamp(level, 0, 255)));
        }
    return out;
}

/// FNV-1a content digest, printed as fixed-width hex. Used to compare runs
/// without retaining both outputs.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[std::size_t(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

} // namespace groupflow
