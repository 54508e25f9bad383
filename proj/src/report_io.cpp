#include "ppqkd/report_io.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <system_error>

#include "json.hpp"
#include "ppqkd/version.hpp"

namespace ppqkd {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    if (res.ec != std::errc()) throw std::runtime_error("format_double failed");
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("parse_double: bad numeric field '" + s + "'");
    }
    return x;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

json provenance_json(const Provenance& prov) {
    json j;
    j["tool"] = kToolName;
    j["version"] = kVersion;
    if (prov.seed) j["seed"] = *prov.seed;
    json cfg = json::object();
    for (const auto& [k, v] : prov.config) cfg[k] = v;
    j["config"] = cfg;
    return j;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const Provenance& prov,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open_for_write(path);
    out << "# tool=" << kToolName << " version=" << kVersion << "\n";
    if (prov.seed) out << "# seed=" << *prov.seed << "\n";
    for (const auto& [k, v] : prov.config) out << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < header.size(); ++c) {
        out << header[c] << (c + 1 < header.size() ? "," : "\n");
    }
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw std::invalid_argument("write_csv: ragged row");
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
        }
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string render_ir_sidecar(const Provenance& prov, const IrSweep& sweep) {
    json j;
    j["provenance"] = provenance_json(prov);
    j["grid_step"] = sweep.grid_step;
    j["points"] = sweep.rows.size();
    j["argmax_p1"] = {{"index", sweep.argmax_p1},
                      {"alpha", sweep.rows[sweep.argmax_p1].alpha},
                      {"value", sweep.max_p1}};
    j["argmax_p2"] = {{"index", sweep.argmax_p2},
                      {"alpha", sweep.rows[sweep.argmax_p2].alpha},
                      {"value", sweep.max_p2}};
    return j.dump(2) + "\n";
}

std::string render_collective_sidecar(const Provenance& prov, const CollectiveSweep& sweep) {
    json j;
    j["provenance"] = provenance_json(prov);
    j["n_max"] = sweep.n_max;
    j["m_max"] = sweep.m_max;
    j["step_a"] = sweep.step_a;
    j["step_b"] = sweep.step_b;
    j["invalid_cells"] = sweep.invalid_cells;
    const auto& best = sweep.cells[static_cast<std::size_t>(sweep.argmax_n) *
                                       static_cast<std::size_t>(sweep.m_max + 1) +
                                   static_cast<std::size_t>(sweep.argmax_m)];
    j["argmax"] = {{"n", sweep.argmax_n},
                   {"m", sweep.argmax_m},
                   {"a", best.a},
                   {"b", best.b},
                   {"p_e", sweep.max_p_e},
                   {"fidelity", best.report ? json(best.report->fidelity) : json()},
                   {"p_ab", best.report ? json(best.report->p_ab) : json()}};
    return j.dump(2) + "\n";
}

std::string render_mc_report(const Provenance& prov, const FrequencyReport& report,
                             double sigma_limit) {
    json j;
    j["provenance"] = provenance_json(prov);
    j["scenario"] = to_string(report.scenario);
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["max_sigma_deviation"] = report.max_sigma_deviation;
    j["impossible_cell_hits"] = report.impossible_cell_hits;
    j["table1_violations"] = report.table1_violations;
    j["sigma_limit"] = sigma_limit;

    json cells = json::array();
    for (const auto& [key, p] : report.expected) {
        const auto it = report.counts.find(key);
        const std::uint64_t count = (it == report.counts.end()) ? 0 : it->second;
        json cell;
        cell["axis"] = to_string(key.axis);
        cell["bob"] = key.bob;
        if (key.eve != 0) cell["eve"] = key.eve;
        cell["r"] = key.r_index;
        cell["observed"] = count;
        cell["expected_probability"] = p;
        const double expected_count = p * static_cast<double>(report.trials);
        cell["expected_count"] = expected_count;
        if (p > 0.0) {
            const double sigma = std::sqrt(p * (1.0 - p) * static_cast<double>(report.trials));
            cell["sigma_deviation"] =
                sigma == 0.0 ? 0.0 : std::abs(static_cast<double>(count) - expected_count) / sigma;
        }
        cells.push_back(cell);
    }
    j["cells"] = cells;

    json checks = json::array();
    bool pass = report.impossible_cell_hits == 0 && report.table1_violations == 0;
    for (const auto& check : report.named_checks) {
        const bool check_pass = check.sigma_deviation <= sigma_limit;
        pass = pass && check_pass;
        checks.push_back({{"name", check.name},
                          {"observed", check.observed},
                          {"expected", check.expected},
                          {"sigma_deviation", check.sigma_deviation},
                          {"pass", check_pass}});
    }
    j["named_checks"] = checks;
    j["pass"] = pass;
    return j.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_for_write(path);
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace ppqkd
