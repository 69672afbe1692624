#include "triphoton/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "triphoton/errors.hpp"
#include "triphoton/version.hpp"

namespace triphoton::io {

namespace {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot write " + path.string());
    }
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

json parse_json_file(const std::filesystem::path& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::exception& err) {
        throw ValidationError(path.string() + ": " + err.what());
    }
}

double require_number(const json& node, const std::string& context) {
    if (!node.is_number()) {
        throw ValidationError(context + " must be a number");
    }
    const double value = node.get<double>();
    if (!std::isfinite(value)) {
        throw ValidationError(context + " must be finite");
    }
    return value;
}

json matrix_as_json(const TransferMatrix& m, bool polar) {
    json entries = json::array();
    for (int l = 0; l < m.rows(); ++l) {
        json row = json::array();
        for (int i = 0; i < m.cols(); ++i) {
            const Complex entry = m.entries()(l, i);
            if (polar) {
                row.push_back({std::abs(entry), phase_in_pi_units(entry)});
            } else {
                row.push_back({entry.real(), entry.imag()});
            }
        }
        entries.push_back(std::move(row));
    }
    return json{{"rows", m.rows()},
                {"cols", m.cols()},
                {"polar", polar},
                {"scale", 1.0},
                {"entries", std::move(entries)}};
}

TransferMatrix matrix_from_json(const json& doc, const std::string& context) {
    if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") ||
        !doc.contains("entries")) {
        throw ValidationError(context + ": matrix needs rows, cols and entries");
    }
    const int rows = doc["rows"].is_number_integer() ? doc["rows"].get<int>() : -1;
    const int cols = doc["cols"].is_number_integer() ? doc["cols"].get<int>() : -1;
    if (rows < 1 || cols < 1) {
        throw ValidationError(context + ": rows and cols must be positive integers");
    }
    const bool polar = doc.value("polar", false);
    const double scale = doc.contains("scale")
                             ? require_number(doc["scale"], context + ": scale")
                             : 1.0;
    const json& entries = doc["entries"];
    if (!entries.is_array() || entries.size() != static_cast<std::size_t>(rows)) {
        throw ValidationError(context + ": entries must hold " + std::to_string(rows) +
                              " rows");
    }
    CMatrix values(rows, cols);
    for (int l = 0; l < rows; ++l) {
        const json& row = entries[static_cast<std::size_t>(l)];
        if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
            throw ValidationError(context + ": entry row " + std::to_string(l + 1) +
                                  " must hold " + std::to_string(cols) + " pairs");
        }
        for (int i = 0; i < cols; ++i) {
            const json& pair = row[static_cast<std::size_t>(i)];
            if (!pair.is_array() || pair.size() != 2) {
                throw ValidationError(context + ": entry (" + std::to_string(l + 1) + "," +
                                      std::to_string(i + 1) + ") must be a [a,b] pair");
            }
            const std::string where = context + ": entry (" + std::to_string(l + 1) + "," +
                                      std::to_string(i + 1) + ")";
            const double a = require_number(pair[0], where);
            const double b = require_number(pair[1], where);
            values(l, i) = polar ? from_polar_pi(a, b) : Complex(a, b);
            values(l, i) *= scale;
        }
    }
    return TransferMatrix(std::move(values));
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
    return std::filesystem::path(path.string() + ".meta.json");
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    fields.push_back(field);
    return fields;
}

double parse_double(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(value)) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw ValidationError(context + ": cannot parse number '" + text + "'");
    }
}

int parse_int(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw ValidationError(context + ": cannot parse integer '" + text + "'");
    }
}

std::uint64_t parse_u64(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const unsigned long long value = std::stoull(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw ValidationError(context + ": cannot parse count '" + text + "'");
    }
}

std::vector<std::string> read_csv_lines(const std::filesystem::path& path,
                                        const std::string& expected_header) {
    std::istringstream in(slurp(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty() || lines.front() != expected_header) {
        throw ValidationError(path.string() + ": expected header '" + expected_header +
                              "'");
    }
    lines.erase(lines.begin());
    return lines;
}

}  // namespace

TransferMatrix read_matrix_json(const std::filesystem::path& path) {
    return matrix_from_json(parse_json_file(path), path.string());
}

void write_matrix_json(const std::filesystem::path& path, const TransferMatrix& m,
                       bool polar) {
    auto out = open_for_write(path);
    out << matrix_as_json(m, polar).dump(2) << "\n";
}

std::string matrix_to_json_string(const TransferMatrix& m, bool polar) {
    return matrix_as_json(m, polar).dump(2);
}

void write_delay_scan_csv(const std::filesystem::path& path, const DelayScan& scan,
                          const ScanMetadata& meta) {
    scan.validate();
    auto out = open_for_write(path);
    out << "delay_ps,value\n";
    for (const auto& [delay, value] : scan.samples) {
        out << format_double(delay) << "," << format_double(value) << "\n";
    }
    const json sidecar{{"input_label", meta.input_label},
                       {"output_label", meta.output_label},
                       {"sigma_ps", meta.sigma_ps},
                       {"integration_time_s", meta.integration_time_s}};
    auto meta_out = open_for_write(sidecar_path(path));
    meta_out << sidecar.dump(2) << "\n";
}

DelayScan read_delay_scan_csv(const std::filesystem::path& path) {
    DelayScan scan;
    int line_number = 1;
    for (const std::string& line : read_csv_lines(path, "delay_ps,value")) {
        ++line_number;
        const std::string context = path.string() + ":" + std::to_string(line_number);
        const auto fields = split_csv_line(line);
        if (fields.size() != 2) {
            throw ValidationError(context + ": expected 2 fields, got " +
                                  std::to_string(fields.size()));
        }
        scan.samples.emplace_back(parse_double(fields[0], context),
                                  parse_double(fields[1], context));
    }
    const auto meta_path = sidecar_path(path);
    if (std::filesystem::exists(meta_path)) {
        const json meta = parse_json_file(meta_path);
        scan.input_label = meta.value("input_label", std::string{});
        scan.output_label = meta.value("output_label", std::string{});
        scan.integration_time_s = meta.value("integration_time_s", 60.0);
    }
    scan.validate();
    return scan;
}

void write_singles_csv(const std::filesystem::path& path, const SinglesCounts& counts) {
    auto out = open_for_write(path);
    out << "output,input,counts\n";
    for (int l = 1; l <= counts.outputs(); ++l) {
        for (int i = 1; i <= counts.inputs(); ++i) {
            out << l << "," << i << "," << counts.count(l, i) << "\n";
        }
    }
}

SinglesCounts read_singles_csv(const std::filesystem::path& path) {
    struct Row {
        int output, input;
        std::uint64_t counts;
    };
    std::vector<Row> rows;
    int outputs = 0, inputs = 0;
    int line_number = 1;
    for (const std::string& line : read_csv_lines(path, "output,input,counts")) {
        ++line_number;
        const std::string context = path.string() + ":" + std::to_string(line_number);
        const auto fields = split_csv_line(line);
        if (fields.size() != 3) {
            throw ValidationError(context + ": expected 3 fields, got " +
                                  std::to_string(fields.size()));
        }
        Row row{parse_int(fields[0], context), parse_int(fields[1], context),
                parse_u64(fields[2], context)};
        if (row.output < 1 || row.input < 1) {
            throw ValidationError(context + ": modes are 1-based");
        }
        outputs = std::max(outputs, row.output);
        inputs = std::max(inputs, row.input);
        rows.push_back(row);
    }
    if (rows.empty()) {
        throw ValidationError(path.string() + ": no data rows");
    }
    if (rows.size() != static_cast<std::size_t>(outputs) * static_cast<std::size_t>(inputs)) {
        throw ValidationError(path.string() + ": expected a complete " +
                              std::to_string(outputs) + "x" + std::to_string(inputs) +
                              " grid, got " + std::to_string(rows.size()) + " rows");
    }
    SinglesCounts counts(outputs, inputs);
    std::vector<char> seen(rows.size(), 0);
    for (const Row& row : rows) {
        const std::size_t slot =
            static_cast<std::size_t>(row.output - 1) * static_cast<std::size_t>(inputs) +
            static_cast<std::size_t>(row.input - 1);
        if (seen[slot]) {
            throw ValidationError(path.string() + ": duplicate cell (" +
                                  std::to_string(row.output) + "," +
                                  std::to_string(row.input) + ")");
        }
        seen[slot] = 1;
        counts.set_count(row.output, row.input, row.counts);
    }
    return counts;
}

void write_visibilities_csv(const std::filesystem::path& path,
                            const std::vector<VisibilityRecord>& records) {
    auto out = open_for_write(path);
    out << "i,j,l,m,V,sigma,c0,cinf\n";
    for (const VisibilityRecord& record : records) {
        out << record.input_i << "," << record.input_j << "," << record.output_l << ","
            << record.output_m << "," << format_double(record.value) << ","
            << format_double(record.sigma) << ",";
        if (record.dip_counts) out << format_double(*record.dip_counts);
        out << ",";
        if (record.baseline_counts) out << format_double(*record.baseline_counts);
        out << "\n";
    }
}

std::vector<VisibilityRecord> read_visibilities_csv(const std::filesystem::path& path) {
    std::vector<VisibilityRecord> records;
    int line_number = 1;
    for (const std::string& line : read_csv_lines(path, "i,j,l,m,V,sigma,c0,cinf")) {
        ++line_number;
        const std::string context = path.string() + ":" + std::to_string(line_number);
        const auto fields = split_csv_line(line);
        if (fields.size() != 8) {
            throw ValidationError(context + ": expected 8 fields, got " +
                                  std::to_string(fields.size()));
        }
        VisibilityRecord record(parse_int(fields[0], context), parse_int(fields[1], context),
                                parse_int(fields[2], context), parse_int(fields[3], context),
                                parse_double(fields[4], context),
                                parse_double(fields[5], context));
        if (!fields[6].empty()) record.dip_counts = parse_double(fields[6], context);
        if (!fields[7].empty()) record.baseline_counts = parse_double(fields[7], context);
        if (record.dip_counts.has_value() != record.baseline_counts.has_value()) {
            throw ValidationError(context + ": c0 and cinf must be given together");
        }
        records.push_back(std::move(record));
    }
    if (records.empty()) {
        throw ValidationError(path.string() + ": no data rows");
    }
    return records;
}

void write_fit_result_json(const std::filesystem::path& path, const FitResult& fit) {
    const json doc{{"model", "A*(1 - V*exp(-(delta-delta0)^2/(2*w^2)))"},
                   {"baseline", fit.baseline},
                   {"visibility", fit.visibility},
                   {"center_ps", fit.center_ps},
                   {"width_ps", fit.width_ps},
                   {"residual_rms", fit.residual_rms},
                   {"covariance_diag", fit.covariance_diag},
                   {"converged", fit.converged},
                   {"iterations", fit.iterations},
                   {"threefold_visibility", fit.threefold_visibility()}};
    auto out = open_for_write(path);
    out << doc.dump(2) << "\n";
}

FitResult read_fit_result_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    FitResult fit;
    try {
        fit.baseline = doc.at("baseline").get<double>();
        fit.visibility = doc.at("visibility").get<double>();
        fit.center_ps = doc.at("center_ps").get<double>();
        fit.width_ps = doc.at("width_ps").get<double>();
        fit.residual_rms = doc.at("residual_rms").get<double>();
        const auto& cov = doc.at("covariance_diag");
        if (!cov.is_array() || cov.size() != 4) {
            throw ValidationError(path.string() + ": covariance_diag must hold 4 values");
        }
        for (std::size_t d = 0; d < 4; ++d) fit.covariance_diag[d] = cov[d].get<double>();
        fit.converged = doc.at("converged").get<bool>();
        fit.iterations = doc.at("iterations").get<int>();
    } catch (const json::exception& err) {
        throw ValidationError(path.string() + ": " + err.what());
    }
    return fit;
}

void write_tomography_result_json(const std::filesystem::path& path,
                                  const TomographyResult& result, double q_vis_vs_input) {
    json doc = matrix_as_json(result.matrix, true);
    json amplitude_sigma = json::array();
    json phase_sigma = json::array();
    for (int l = 0; l < result.matrix.rows(); ++l) {
        json amp_row = json::array();
        json phase_row = json::array();
        for (int i = 0; i < result.matrix.cols(); ++i) {
            amp_row.push_back(result.amplitude_sigma(l, i));
            phase_row.push_back(result.phase_sigma(l, i) / std::numbers::pi);
        }
        amplitude_sigma.push_back(std::move(amp_row));
        phase_sigma.push_back(std::move(phase_row));
    }
    doc["amplitude_sigma"] = std::move(amplitude_sigma);
    doc["phase_sigma_pi_units"] = std::move(phase_sigma);
    doc["resamples"] = result.resample_count;
    doc["phase_fit_residual"] = result.phase_fit_residual;
    if (q_vis_vs_input >= 0.0) doc["q_vis_vs_input"] = q_vis_vs_input;
    auto out = open_for_write(path);
    out << doc.dump(2) << "\n";
}

TomographyResult read_tomography_result_json(const std::filesystem::path& path) {
    const json doc = parse_json_file(path);
    TransferMatrix matrix = matrix_from_json(doc, path.string());
    TomographyResult result{std::move(matrix), RMatrix::Zero(1, 1), RMatrix::Zero(1, 1), 0,
                            0.0};
    const int rows = result.matrix.rows(), cols = result.matrix.cols();
    result.amplitude_sigma = RMatrix::Zero(rows, cols);
    result.phase_sigma = RMatrix::Zero(rows, cols);
    try {
        if (doc.contains("amplitude_sigma")) {
            const auto& amp = doc["amplitude_sigma"];
            const auto& phase = doc.at("phase_sigma_pi_units");
            for (int l = 0; l < rows; ++l) {
                for (int i = 0; i < cols; ++i) {
                    result.amplitude_sigma(l, i) =
                        amp.at(static_cast<std::size_t>(l)).at(static_cast<std::size_t>(i))
                            .get<double>();
                    result.phase_sigma(l, i) =
                        phase.at(static_cast<std::size_t>(l)).at(static_cast<std::size_t>(i))
                            .get<double>() *
                        std::numbers::pi;
                }
            }
        }
        result.resample_count = doc.value("resamples", 0);
        result.phase_fit_residual = doc.value("phase_fit_residual", 0.0);
    } catch (const json::exception& err) {
        throw ValidationError(path.string() + ": " + err.what());
    }
    return result;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
    const json doc{{"command", manifest.command},
                   {"version", kVersion},
                   {"inputs", manifest.inputs},
                   {"parameters", manifest.parameters},
                   {"outputs", manifest.outputs}};
    auto out = open_for_write(path);
    out << doc.dump(2) << "\n";
}

}  // namespace triphoton::io
