#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinbath/errors.hpp"
#include "spinbath/inference.hpp"
#include "spinbath/units.hpp"
#include "spinbath/version.hpp"

// File I/O: CSV series, decay-curve ingestion with JSON sidecar metadata, and
// atomic writes. CSV is comma-separated, header row, '.' decimal, LF endings.

namespace spinbath::io {

using nlohmann::json;

/// Round-trip-safe decimal formatting, locale independent.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Write content to path via a temp file + rename, so readers never observe a
/// partial file.
inline void atomic_write_text(const std::filesystem::path& path, const std::string& content) {
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw data_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        if (!out) throw data_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw data_error("cannot rename '" + tmp.string() + "' to '" + path.string() +
                             "': " + ec.message());
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw data_error("csv row width " + std::to_string(row.size()) +
                             " does not match header width " + std::to_string(header.size()));
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << "\n";
    }
    atomic_write_text(path, out.str());
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    atomic_write_text(path, j.dump(2) + "\n");
}

/// Shared result envelope: every output JSON carries the schema version, tool
/// version, command name, and the resolved config it was produced from.
inline json result_envelope(const std::string& command, const json& resolved_config) {
    json j;
    j["schema"] = 1;
    j["tool_version"] = tool_version;
    j["command"] = command;
    j["config"] = resolved_config;
    return j;
}

namespace detail {

inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::string trim(std::string s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

} // namespace detail

/// Read a decay curve CSV with header "t_us,signal,sigma" (sigma optional).
/// Times are converted from microseconds to the internal seconds.
inline DecayCurve read_decay_curve_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open curve file '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line)) throw data_error("empty curve file '" + path.string() + "'");
    auto header = detail::split_line(line);
    for (auto& h : header) h = detail::trim(h);
    bool has_sigma = false;
    if (header.size() == 3 && header[0] == "t_us" && header[1] == "signal" &&
        header[2] == "sigma") {
        has_sigma = true;
    } else if (header.size() == 2 && header[0] == "t_us" && header[1] == "signal") {
        has_sigma = false;
    } else {
        throw data_error("curve file '" + path.string() +
                         "': header must be 't_us,signal' or 't_us,signal,sigma', got '" + line +
                         "'");
    }

    DecayCurve curve;
    curve.meta.id = path.stem().string();
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_line(line);
        if (cells.size() != header.size())
            throw data_error("curve file '" + path.string() + "' line " +
                             std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " columns, got " +
                             std::to_string(cells.size()));
        try {
            curve.t_s.push_back(std::stod(cells[0]) * 1e-6);
            curve.signal.push_back(std::stod(cells[1]));
            if (has_sigma) curve.sigma.push_back(std::stod(cells[2]));
        } catch (const std::exception&) {
            throw data_error("curve file '" + path.string() + "' line " +
                             std::to_string(line_no) + ": non-numeric cell");
        }
    }
    if (curve.t_s.empty())
        throw data_error("curve file '" + path.string() + "' contains no data rows");
    curve.validate();
    return curve;
}

/// Sidecar metadata: '<curve>.json' next to '<curve>.csv'. Strict keys.
inline void apply_sidecar_metadata(DecayCurve& curve, const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw data_error("cannot open sidecar '" + json_path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw data_error("sidecar '" + json_path.string() + "': " + e.what());
    }
    if (!j.is_object()) throw data_error("sidecar '" + json_path.string() + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key == "id") {
            curve.meta.id = value.get<std::string>();
        } else if (key == "kind") {
            const auto s = value.get<std::string>();
            if (s == "t1") curve.kind = CurveKind::t1;
            else if (s == "t2") curve.kind = CurveKind::t2;
            else
                throw data_error("sidecar '" + json_path.string() +
                                 "': kind must be 't1' or 't2', got '" + s + "'");
        } else if (key == "temperature") {
            curve.meta.temperature_k = parse_temperature(value.get<std::string>()).k();
        } else if (key == "field") {
            curve.meta.field_t = parse_field(value.get<std::string>()).t();
        } else if (key == "smm_present") {
            curve.meta.smm_present = value.get<bool>();
        } else {
            throw data_error("sidecar '" + json_path.string() + "': unknown key '/" + key + "'");
        }
    }
}

/// Load every *.csv in a directory (sorted by filename for determinism),
/// applying sidecar metadata where a matching .json exists.
inline std::vector<DecayCurve> load_curves(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw data_error("data directory '" + dir.string() + "' does not exist");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw data_error("data directory '" + dir.string() + "' contains no .csv curves");
    std::vector<DecayCurve> curves;
    curves.reserve(files.size());
    for (const auto& f : files) {
        DecayCurve c = read_decay_curve_csv(f);
        auto sidecar = f;
        sidecar.replace_extension(".json");
        if (std::filesystem::exists(sidecar)) apply_sidecar_metadata(c, sidecar);
        curves.push_back(std::move(c));
    }
    return curves;
}

} // namespace spinbath::io
