#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mtqc/config.hpp"

namespace mtqc::cli {

/// Rows of plain values under a fixed header.
struct CsvTable {
    std::string name;  // file stem, e.g. "simulate" or "field_profile"
    std::vector<std::string> header;
    std::vector<std::vector<json>> rows;
};

struct RunReport {
    std::string command;
    json config;
    json results;
    std::vector<CsvTable> tables;
    double wall_time_s = 0.0;
};

/// Writes `content` to a sibling temp file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string to_csv(const CsvTable& t, const json& config);
std::string to_table(const RunReport& r);
json to_json(const RunReport& r);

/// Emits the report in the configured format and returns the written paths.
std::vector<std::filesystem::path> emit(const RunReport& r);

/// Serialized results payload; byte-identical across reruns of one config.
std::string payload(const RunReport& r);

}  // namespace mtqc::cli
