#include "mtqc/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "mtqc/error.hpp"

namespace mtqc::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

std::string cell(const json& v) {
    if (v.is_string()) {
        const auto& s = v.get_ref<const std::string&>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (const char c : s) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + '"';
    }
    return v.dump();
}

void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, json>>& out) {
    if (v.is_object()) {
        for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
    } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
    } else {
        out.emplace_back(prefix, v);
    }
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            out.close();
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignore;
        fs::remove(tmp, ignore);
        throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
}

std::string to_csv(const CsvTable& t, const json& config) {
    std::ostringstream os;
    os << "# config: " << config.dump() << '\n';
    for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell(row[i]);
        os << '\n';
    }
    return os.str();
}

std::string to_table(const RunReport& r) {
    std::vector<std::pair<std::string, json>> rows;
    flatten(r.results, "", rows);
    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    std::ostringstream os;
    os << "# mtqc " << r.command << "\n# config: " << r.config.dump() << '\n';
    for (const auto& [k, v] : rows) {
        os << k << std::string(width + 2 - k.size(), ' ') << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
    return os.str();
}

json to_json(const RunReport& r) {
    json j;
    j["config"] = r.config;
    j["results"] = r.results;
    j["provenance"] = {{"version", kVersion},
                       {"command", r.command},
                       {"seed", r.config.value("seed", std::uint64_t{0})},
                       {"wall_time_s", r.wall_time_s}};
    return j;
}

std::string payload(const RunReport& r) { return r.results.dump(); }

std::vector<std::filesystem::path> emit(const RunReport& r) {
    namespace fs = std::filesystem;
    const fs::path dir = get<std::string>(r.config, "output.dir");
    const auto format = get<std::string>(r.config, "output.format");
    std::vector<fs::path> written;
    auto put = [&](const fs::path& p, const std::string& s) {
        write_atomic(p, s);
        written.push_back(p);
    };
    // Auxiliary tables (profiles, logs, maps) are CSV in every format.
    for (const auto& t : r.tables) {
        if (t.name != r.command) put(dir / (t.name + ".csv"), to_csv(t, r.config));
    }
    if (format == "json") {
        put(dir / (r.command + ".json"), to_json(r).dump(2) + "\n");
    } else if (format == "csv") {
        const bool has_main = std::any_of(r.tables.begin(), r.tables.end(),
                                          [&](const CsvTable& t) { return t.name == r.command; });
        if (!has_main) {
            CsvTable t{r.command, {"key", "value"}, {}};
            std::vector<std::pair<std::string, json>> rows;
            flatten(r.results, "", rows);
            for (auto& [k, v] : rows) t.rows.push_back({json(k), v.is_array() ? json(v.dump()) : v});
            put(dir / (r.command + ".csv"), to_csv(t, r.config));
        }
        for (const auto& t : r.tables) {
            if (t.name == r.command) put(dir / (t.name + ".csv"), to_csv(t, r.config));
        }
    } else if (format == "table") {
        put(dir / (r.command + ".txt"), to_table(r));
    } else {
        throw ConfigError("output.format", "must be one of json, csv, table");
    }
    return written;
}

}  // namespace mtqc::cli
