#pragma once

// CSV / JSON artifacts and key-value config files.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "fracvol/errors.hpp"
#include "fracvol/estimation.hpp"
#include "fracvol/model.hpp"

namespace fracvol::io {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial artifact.
inline void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path() && !path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

/// Header `t,price` (plus `logvol` when present).
inline std::string path_to_csv(const MarketPath& path) {
    const bool with_vol = !path.logvol.empty();
    std::string out = with_vol ? "t,price,logvol\n" : "t,price\n";
    out.reserve(path.size() * 48);
    for (std::size_t i = 0; i < path.size(); ++i) {
        out += format_double(path.times[i]);
        out += ',';
        out += format_double(path.prices[i]);
        if (with_vol) {
            out += ',';
            out += format_double(path.logvol[i]);
        }
        out += '\n';
    }
    return out;
}

inline std::vector<std::string_view> split(std::string_view line, char sep = ',') {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        cells.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

/// Parses CSV text with a `t,price[,logvol]` header. Every offending row is
/// collected; the error lists the first ten by line number.
inline MarketPath parse_prices(std::string_view text, const std::string& source = "<input>") {
    std::vector<std::string> problems;
    std::size_t problem_count = 0;
    auto report = [&](std::size_t line, const std::string& what) {
        ++problem_count;
        if (problems.size() < 10) problems.push_back("line " + std::to_string(line) + ": " + what);
    };

    MarketPath path;
    std::size_t line_no = 0, pos = 0;
    bool header_seen = false, with_vol = false;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        const std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) {
            if (end >= text.size()) break;
            continue;
        }
        const auto cells = split(line);
        if (!header_seen) {
            if (cells.size() < 2 || trim(cells[0]) != "t" || trim(cells[1]) != "price")
                throw IngestionError(source + ": missing header 't,price' on line " + std::to_string(line_no));
            with_vol = cells.size() >= 3 && trim(cells[2]) == "logvol";
            header_seen = true;
            continue;
        }
        const std::size_t need = with_vol ? 3 : 2;
        if (cells.size() < need) {
            report(line_no, "expected " + std::to_string(need) + " columns");
            continue;
        }
        const auto t = parse_double(cells[0]);
        const auto p = parse_double(cells[1]);
        std::optional<double> v = with_vol ? parse_double(cells[2]) : std::optional<double>(0.0);
        if (!t || !p || !v) {
            report(line_no, "unparseable number");
            continue;
        }
        if (!(*p > 0.0)) {
            report(line_no, "non-positive price " + std::string(trim(cells[1])));
            continue;
        }
        if (!path.times.empty() && !(*t > path.times.back())) {
            report(line_no, "time " + std::string(trim(cells[0])) + " does not increase");
            continue;
        }
        path.times.push_back(*t);
        path.prices.push_back(*p);
        if (with_vol) path.logvol.push_back(*v);
        if (end >= text.size()) break;
    }
    if (!header_seen) throw IngestionError(source + ": missing header 't,price'");
    if (problem_count > 0) {
        std::string msg = source + ": " + std::to_string(problem_count) + " malformed row(s)";
        for (const auto& p : problems) msg += "; " + p;
        throw IngestionError(msg);
    }
    return path;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline MarketPath ingest_prices(const std::filesystem::path& path) {
    return parse_prices(read_file(path), path.string());
}

inline nlohmann::ordered_json report_to_json(const EstimationReport& r) {
    nlohmann::ordered_json j;
    j["dt"] = r.dt;
    j["delta"] = r.delta;
    j["beta_hat"] = r.beta_hat;
    j["intercept"] = r.intercept;
    j["hurst_hat"] = r.hurst_hat;
    j["hurst_stderr"] = r.hurst_stderr;
    j["scaling_lags"] = r.scaling_lags;
    j["scaling_values"] = r.scaling_values;
    auto& lev = j["leverage"] = nlohmann::ordered_json::array();
    for (const auto& p : r.leverage) lev.push_back({{"lag", p.lag}, {"value", p.value}, {"std_error", p.std_error}});
    auto& acf = j["acf"] = nlohmann::ordered_json::array();
    for (const auto& [lag, v] : r.acf) acf.push_back({{"lag", lag}, {"value", v}});
    j["induced_vol"] = r.induced_vol;
    j["r_sigma"] = r.r_sigma;
    return j;
}

/// `key = value` lines; `#` starts a comment.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text, const std::string& source = "<config>") {
        KeyValueConfig cfg;
        std::size_t pos = 0, line_no = 0;
        while (pos < text.size()) {
            const std::size_t end = std::min(text.find('\n', pos), text.size());
            std::string_view line = text.substr(pos, end - pos);
            pos = end + 1;
            ++line_no;
            if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw ParameterError(source + ": line " + std::to_string(line_no) + ": expected key = value");
            const std::string key(trim(line.substr(0, eq)));
            if (key.empty()) throw ParameterError(source + ": line " + std::to_string(line_no) + ": empty key");
            cfg.values_[key] = std::string(trim(line.substr(eq + 1)));
        }
        return cfg;
    }

    static KeyValueConfig load(const std::filesystem::path& path) { return parse(read_file(path), path.string()); }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const {
        const auto it = values_.find(key);
        used_[key] = true;
        return it == values_.end() ? fallback : it->second;
    }

    double get(const std::string& key, double fallback) const {
        const auto it = values_.find(key);
        used_[key] = true;
        if (it == values_.end()) return fallback;
        const auto v = parse_double(it->second);
        if (!v) throw ParameterError("config: key '" + key + "' is not a number: " + it->second);
        return *v;
    }

    /// Keys present in the file but never queried.
    std::vector<std::string> unused() const {
        std::vector<std::string> out;
        for (const auto& [k, v] : values_)
            if (!used_.count(k)) out.push_back(k);
        return out;
    }

private:
    std::map<std::string, std::string> values_;
    mutable std::map<std::string, bool> used_;
};

}  // namespace fracvol::io
