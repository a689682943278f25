#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "groupflow/error.hpp"

namespace groupflow {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

} // namespace detail

/// Flat "key = value" configuration with [section] headers and '#' comments.
/// Keys are addressed as "section.key". Every diagnostic carries the source
/// line number so the CLI can point at the offending line.
class Config {
public:
    struct Entry {
        std::string value;
        int line = 0;
    };

    static Config parse(const std::string& text, std::string origin = "<inline>") {
        Config cfg;
        cfg.origin_ = std::move(origin);
        std::string section;
        std::istringstream in(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            std::string_view line = detail::trim(raw);
            if (line.empty() || line.front() == '#') continue;
            if (line.front() == '[') {
                if (line.back() != ']' || line.size() < 3)
                    throw Error("config-parse", cfg.where(line_no) + ": malformed section header");
                section = std::string(detail::trim(line.substr(1, line.size() - 2)));
                if (section.empty())
                    throw Error("config-parse", cfg.where(line_no) + ": empty section name");
                continue;
            }
            const std::size_t eq = line.find('=');
            if (eq == std::string_view::npos)
                throw Error("config-parse", cfg.where(line_no) + ": expected 'key = value'");
            const std::string key(detail::trim(line.substr(0, eq)));
            const std::string value(detail::trim(line.substr(eq + 1)));
            if (key.empty())
                throw Error("config-parse", cfg.where(line_no) + ": empty key");
            if (section.empty())
                throw Error("config-parse", cfg.where(line_no) + ": key outside any [section]");
            const std::string full = section + "." + key;
            auto [it, inserted] = cfg.entries_.try_emplace(full, Entry{value, line_no});
            if (!inserted)
                throw Error("config-parse", cfg.where(line_no) + ": duplicate key '" + full +
                                                "' (first set at line " + std::to_string(it->second.line) + ")");
        }
        return cfg;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("config-io", "cannot open config file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str(), path);
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    const std::string& origin() const { return origin_; }

    std::string get_string(const std::string& key) const { return find(key).value; }

    std::string get_string(const std::string& key, const std::string& fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    long get_int(const std::string& key) const { return parse_int(find(key), key); }
    long get_int(const std::string& key, long fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : parse_int(it->second, key);
    }

    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::uint64_t out = 0;
        if (!from_chars_all(it->second.value, out)) throw value_error(it->second, key, "unsigned integer");
        return out;
    }

    double get_double(const std::string& key) const { return parse_double(find(key), key); }
    double get_double(const std::string& key, double fallback) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : parse_double(it->second, key);
    }

    bool get_bool(const std::string& key, bool fallback) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        const std::string& v = it->second.value;
        if (v == "true" || v == "yes" || v == "1") return true;
        if (v == "false" || v == "no" || v == "0") return false;
        throw value_error(it->second, key, "boolean (true/false)");
    }

    /// Keys present under a section, in lexical order.
    std::vector<std::string> keys(const std::string& section) const {
        std::vector<std::string> out;
        const std::string prefix = section + ".";
        for (const auto& [k, e] : entries_)
            if (k.rfind(prefix, 0) == 0) out.push_back(k.substr(prefix.size()));
        return out;
    }

private:
    std::string where(int line) const { return origin_ + ":" + std::to_string(line); }

    const Entry& find(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw Error("config-missing", origin_ + ": missing required key '" + key + "'");
        return it->second;
    }

    template <typename T>
    static bool from_chars_all(const std::string& s, T& out) {
        const char* begin = s.data();
        const char* end = begin + s.size();
        auto [ptr, ec] = std::from_chars(begin, end, out);
        return ec == std::errc{} && ptr == end;
    }

    Error value_error(const Entry& e, const std::string& key, const char* kind) const {
        return Error("config-value", where(e.line) + ": key '" + key + "' needs a " + kind +
                                         ", got '" + e.value + "'");
    }

    long parse_int(const Entry& e, const std::string& key) const {
        long out = 0;
        if (!from_chars_all(e.value, out)) throw value_error(e, key, "integer");
        return out;
    }

    double parse_double(const Entry& e, const std::string& key) const {
        double out = 0.0;
        if (!from_chars_all(e.value, out)) throw value_error(e, key, "real number");
        return out;
    }

    std::string origin_;
    std::map<std::string, Entry> entries_;
};

/// Renders a double so that parsing it back yields the identical bits
/// (shortest round-trip form). Keeps serialized configs and CSVs stable.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Tiny writer emitting the same grammar Config::parse reads.
class ConfigWriter {
public:
    ConfigWriter& section(const std::string& name) {
        if (!text_.empty()) text_ += "\n";
        text_ += "[" + name + "]\n";
        return *this;
    }
    ConfigWriter& comment(const std::string& note) {
        text_ += "# " + note + "\n";
        return *this;
    }
    ConfigWriter& set(const std::string& key, const std::string& value) {
        text_ += key + " = " + value + "\n";
        return *this;
    }
    ConfigWriter& set(const std::string& key, long value) { return set(key, std::to_string(value)); }
    ConfigWriter& set(const std::string& key, int value) { return set(key, std::to_string(value)); }
    ConfigWriter& set(const std::string& key, std::uint64_t value) {
        return set(key, std::to_string(value));
    }
    ConfigWriter& set(const std::string& key, double value) { return set(key, format_double(value)); }
    ConfigWriter& set(const std::string& key, bool value) {
        return set(key, std::string(value ? "true" : "false"));
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
};

} // namespace groupflow
