#pragma once

// File formats: GFH1 float containers, detection/track CSV, key = value
// configuration text.

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "groundflow/core.hpp"

namespace groundflow {

static_assert(std::endian::native == std::endian::little, "GFH1 I/O assumes a little-endian host");

/// Raw GFH1 container: `channels` planes of w*h float32 values.
struct Gfh1 {
    std::uint32_t width = 0, height = 0, channels = 0;
    std::vector<float> data;  // channel-major, row-major within a channel
};

inline void write_gfh1(const std::filesystem::path& path, const Gfh1& c) {
    if (c.data.size() != static_cast<std::size_t>(c.width) * c.height * c.channels)
        throw DimensionError("gfh1: data size does not match header");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out.write("GFH1", 4);
    for (std::uint32_t v : {c.width, c.height, c.channels}) out.write(reinterpret_cast<const char*>(&v), 4);
    out.write(reinterpret_cast<const char*>(c.data.data()), static_cast<std::streamsize>(c.data.size() * 4));
    if (!out) throw Error("write failed: " + path.string());
}

inline Gfh1 read_gfh1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path.string());
    char magic[4];
    Gfh1 c;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&c.width), 4);
    in.read(reinterpret_cast<char*>(&c.height), 4);
    in.read(reinterpret_cast<char*>(&c.channels), 4);
    if (!in || std::memcmp(magic, "GFH1", 4) != 0) throw FormatError(path.string() + ": not a GFH1 file");
    const std::uint64_t n = std::uint64_t{c.width} * c.height * c.channels;
    in.seekg(0, std::ios::end);
    const auto size = static_cast<std::uint64_t>(in.tellg());
    if (size != 16 + 4 * n) throw FormatError(path.string() + ": payload size does not match header");
    in.seekg(16);
    c.data.resize(n);
    in.read(reinterpret_cast<char*>(c.data.data()), static_cast<std::streamsize>(n * 4));
    if (!in) throw FormatError(path.string() + ": truncated payload");
    return c;
}

inline void write_heatmaps(const std::filesystem::path& path, std::span<const Heatmap> maps, const GroundGrid& g) {
    Gfh1 c{static_cast<std::uint32_t>(g.width()), static_cast<std::uint32_t>(g.height()),
           static_cast<std::uint32_t>(maps.size()), {}};
    c.data.reserve(g.cells() * maps.size());
    for (const auto& m : maps) {
        require_same_grid(m.grid(), g, "write_heatmaps");
        for (double v : m.values()) c.data.push_back(static_cast<float>(v));
    }
    write_gfh1(path, c);
}

inline std::vector<Heatmap> read_heatmaps(const std::filesystem::path& path) {
    const auto c = read_gfh1(path);
    const GroundGrid g(static_cast<int>(c.width), static_cast<int>(c.height));
    std::vector<Heatmap> out;
    for (std::uint32_t k = 0; k < c.channels; ++k) {
        const auto* p = c.data.data() + std::size_t{k} * g.cells();
        try {
            out.emplace_back(g, std::vector<double>(p, p + g.cells()));
        } catch (const ConfigError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    return out;
}

/// Offset fields as consecutive (dx, dy) channel pairs.
inline void write_offsets(const std::filesystem::path& path, std::span<const OffsetField> fields, const GroundGrid& g) {
    Gfh1 c{static_cast<std::uint32_t>(g.width()), static_cast<std::uint32_t>(g.height()),
           static_cast<std::uint32_t>(2 * fields.size()), {}};
    c.data.reserve(2 * g.cells() * fields.size());
    for (const auto& f : fields) {
        require_same_grid(f.grid(), g, "write_offsets");
        for (double v : f.dx()) c.data.push_back(static_cast<float>(v));
        for (double v : f.dy()) c.data.push_back(static_cast<float>(v));
    }
    write_gfh1(path, c);
}

inline std::vector<OffsetField> read_offsets(const std::filesystem::path& path) {
    const auto c = read_gfh1(path);
    if (c.channels % 2) throw FormatError(path.string() + ": offset file needs an even channel count");
    const GroundGrid g(static_cast<int>(c.width), static_cast<int>(c.height));
    std::vector<OffsetField> out;
    for (std::uint32_t k = 0; k < c.channels; k += 2) {
        const auto* px = c.data.data() + std::size_t{k} * g.cells();
        const auto* py = px + g.cells();
        try {
            out.emplace_back(g, std::vector<double>(px, px + g.cells()), std::vector<double>(py, py + g.cells()));
        } catch (const NumericError& e) {
            throw FormatError(path.string() + ": " + e.what());
        }
    }
    return out;
}

// --- CSV ---------------------------------------------------------------

inline constexpr const char* kCsvHeader = "time,id,x,y,confidence";

/// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

struct CsvRow {
    int time = 0;
    int id = -1;
    Vec2 pos;
    double confidence = 1.0;
};

inline void write_rows(std::ostream& out, std::span<const CsvRow> rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows)
        out << r.time << ',' << r.id << ',' << format_double(r.pos.x) << ',' << format_double(r.pos.y) << ','
            << format_double(r.confidence) << '\n';
}

namespace detail {

template <class T>
T parse_number(const std::string& s, const std::string& where) {
    T v{};
    const char* b = s.data();
    const char* e = b + s.size();
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc() || res.ptr != e) throw FormatError(where + ": bad number '" + s + "'");
    return v;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace detail

inline std::vector<CsvRow> read_rows(std::istream& in, const std::string& name = "csv") {
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != kCsvHeader) throw FormatError(name + ": missing header");
    std::vector<CsvRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(detail::trim(cell));
        const std::string where = name + ":" + std::to_string(lineno);
        if (f.size() != 5) throw FormatError(where + ": expected 5 fields");
        CsvRow r;
        r.time = detail::parse_number<int>(f[0], where);
        r.id = detail::parse_number<int>(f[1], where);
        r.pos = {detail::parse_number<double>(f[2], where), detail::parse_number<double>(f[3], where)};
        r.confidence = detail::parse_number<double>(f[4], where);
        if (!std::isfinite(r.pos.x) || !std::isfinite(r.pos.y) || !std::isfinite(r.confidence))
            throw FormatError(where + ": non-finite value");
        rows.push_back(r);
    }
    return rows;
}

inline void write_detections(const std::filesystem::path& path, const std::vector<std::vector<Detection>>& frames) {
    std::vector<CsvRow> rows;
    for (const auto& f : frames)
        for (const auto& d : f) rows.push_back({d.time, -1, d.pos, d.confidence});
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    write_rows(out, rows);
}

/// Frames are recreated densely from 0 to the largest time, so empty frames
/// in the middle survive a round trip; `num_frames` pads trailing ones.
inline std::vector<std::vector<Detection>> read_detections(const std::filesystem::path& path, int num_frames = 0) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path.string());
    const auto rows = read_rows(in, path.string());
    std::vector<std::vector<Detection>> frames(static_cast<std::size_t>(std::max(num_frames, 0)));
    for (const auto& r : rows) {
        if (r.time < 0) throw FormatError(path.string() + ": negative time");
        if (static_cast<std::size_t>(r.time) >= frames.size()) frames.resize(r.time + 1);
        frames[r.time].push_back({r.time, r.pos, r.confidence});
    }
    return frames;
}

inline void write_trajectories(const std::filesystem::path& path, std::span<const Trajectory> tracks) {
    std::vector<CsvRow> rows;
    for (const auto& t : tracks)
        for (const auto& p : t.points()) rows.push_back({p.time, t.id(), p.pos, 1.0});
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    write_rows(out, rows);
}

inline std::vector<Trajectory> read_trajectories(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path.string());
    const auto rows = read_rows(in, path.string());
    std::map<int, Trajectory> by_id;
    for (const auto& r : rows) {
        if (r.id < 0) throw FormatError(path.string() + ": trajectory rows need an id >= 0");
        auto [it, _] = by_id.try_emplace(r.id, r.id);
        try {
            it->second.append(r.time, r.pos);
        } catch (const ConfigError&) {
            throw FormatError(path.string() + ": times of track " + std::to_string(r.id) + " are not increasing");
        }
    }
    std::vector<Trajectory> out;
    for (auto& [_, t] : by_id) out.push_back(std::move(t));
    return out;
}

// --- key = value configuration -------------------------------------------

/// Flat `key = value` lines; `#` starts a comment. Later keys override
/// earlier ones.
class KeyValues {
public:
    static KeyValues parse(std::istream& in, const std::string& name = "config") {
        KeyValues kv;
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = detail::trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'key = value'");
            const auto key = detail::trim(line.substr(0, eq));
            if (key.empty()) throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
            kv.values_[key] = detail::trim(line.substr(eq + 1));
        }
        return kv;
    }

    static KeyValues load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config: " + path.string());
        return parse(in, path.string());
    }

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return values_; }

    /// Assigns `out` when the key is present; marks the key as consumed.
    template <class T>
    void get(const std::string& key, T& out) const {
        auto it = values_.find(key);
        if (it == values_.end()) return;
        used_[key] = true;
        const auto& s = it->second;
        if constexpr (std::is_same_v<T, std::string>) {
            out = s;
        } else if constexpr (std::is_same_v<T, bool>) {
            if (s == "true" || s == "1") out = true;
            else if (s == "false" || s == "0") out = false;
            else throw ConfigError(key + ": expected true or false, got '" + s + "'");
        } else {
            try {
                out = detail::parse_number<T>(s, key);
            } catch (const FormatError&) {
                throw ConfigError(key + ": cannot parse '" + s + "'");
            }
        }
    }

    /// Comma-separated list.
    template <class T>
    void get_list(const std::string& key, std::vector<T>& out) const {
        auto it = values_.find(key);
        if (it == values_.end()) return;
        used_[key] = true;
        out.clear();
        std::stringstream ss(it->second);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty()) continue;
            try {
                out.push_back(detail::parse_number<T>(item, key));
            } catch (const FormatError&) {
                throw ConfigError(key + ": cannot parse list item '" + item + "'");
            }
        }
    }

    /// Keys that no `get` call asked for, to reject typos.
    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (const auto& [k, _] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> used_;
};

}  // namespace groundflow
