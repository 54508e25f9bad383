// File emission: CSV sweep tables and JSON reports/sidecars. Numeric columns
// are rendered with 12 significant digits through std::to_chars, so output is
// locale-independent and round-trips to the same float. Every emitted file
// starts with a provenance block (tool version, seed, full config echo);
// re-running with the same configuration reproduces the numeric columns
// bit-identically.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppqkd/collective.hpp"
#include "ppqkd/intercept.hpp"
#include "ppqkd/montecarlo.hpp"

namespace ppqkd {

// 12 significant digits, shortest general form, '.' decimal point.
std::string format_double(double x);
double parse_double(const std::string& s);

struct Provenance {
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> config;  // echoed key=value pairs
};

// Cells hold preformatted text; use format_double for numeric columns and the
// literal "invalid" marker for cells without a value.
inline constexpr const char* kInvalidCell = "invalid";

void write_csv(const std::filesystem::path& path, const Provenance& prov,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

// JSON renderings (returned as text so tests can inspect them without files).
std::string render_ir_sidecar(const Provenance& prov, const IrSweep& sweep);
std::string render_collective_sidecar(const Provenance& prov, const CollectiveSweep& sweep);
std::string render_mc_report(const Provenance& prov, const FrequencyReport& report,
                             double sigma_limit);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ppqkd
