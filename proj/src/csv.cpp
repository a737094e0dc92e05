#include "gradrec/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace gradrec {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

// Writers stream into a buffer and flush it in one go, so a file either
// holds the complete table or does not exist with valid content.
void write_text(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        if (!std::cout) fail(path, "failed writing to standard output");
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(path, "cannot open for writing");
    out << content;
    out.flush();
    if (!out) fail(path, "write failed");
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

double parse_double(const std::string& path, std::size_t line_no, const std::string& field) {
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size()) {
        fail(path, "line " + std::to_string(line_no) + ": malformed number '" + field + "'");
    }
    return value;
}

std::size_t parse_index(const std::string& path, std::size_t line_no, const std::string& field) {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos) {
        fail(path, "line " + std::to_string(line_no) + ": malformed index '" + field + "'");
    }
    return static_cast<std::size_t>(std::stoull(field));
}

} // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_signal_csv(const std::string& path, const RealSignal& signal) {
    std::string out = "index,value\n";
    for (std::size_t i = 0; i < signal.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(signal[i]);
        out += '\n';
    }
    write_text(path, out);
}

RealSignal read_signal_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "index,value") {
        fail(path, "expected header 'index,value'");
    }
    std::vector<double> samples;
    samples.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 2) fail(path, "line " + std::to_string(i + 1) + ": expected 2 fields");
        const std::size_t index = parse_index(path, i + 1, fields[0]);
        if (index != samples.size()) {
            fail(path, "line " + std::to_string(i + 1) + ": expected index " +
                       std::to_string(samples.size()) + ", got " + fields[0]);
        }
        samples.push_back(parse_double(path, i + 1, fields[1]));
    }
    try {
        return RealSignal(std::move(samples));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

void write_mask_csv(const std::string& path, const SamplingMask& mask) {
    std::string out = "index,available\n";
    for (std::size_t i = 0; i < mask.size(); ++i) {
        out += std::to_string(i);
        out += mask.is_missing(i) ? ",0\n" : ",1\n";
    }
    write_text(path, out);
}

SamplingMask read_mask_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty() || lines[0] != "index,available") {
        fail(path, "expected header 'index,available'");
    }
    std::vector<std::size_t> missing;
    std::size_t n = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_fields(lines[i]);
        if (fields.size() != 2) fail(path, "line " + std::to_string(i + 1) + ": expected 2 fields");
        const std::size_t index = parse_index(path, i + 1, fields[0]);
        if (index != n) {
            fail(path, "line " + std::to_string(i + 1) + ": expected index " + std::to_string(n) +
                       ", got " + fields[0]);
        }
        if (fields[1] == "0") {
            missing.push_back(index);
        } else if (fields[1] != "1") {
            fail(path, "line " + std::to_string(i + 1) + ": available flag must be 0 or 1, got '" +
                       fields[1] + "'");
        }
        ++n;
    }
    try {
        return SamplingMask(n, std::move(missing));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
    std::string out = "iteration,measure,mae,d,mu\n";
    for (const TraceRow& row : trace.rows) {
        out += std::to_string(row.iteration);
        out += ',';
        out += format_double(row.measure);
        out += ',';
        if (row.mae.has_value()) out += format_double(*row.mae);
        out += ',';
        out += format_double(row.step);
        out += ',';
        out += format_double(row.gain);
        out += '\n';
    }
    write_text(path, out);
}

void write_overlay_csv(const std::string& path, const RealSignal& original,
                       const RealSignal* noisy, const SamplingMask& mask,
                       const RealSignal& reconstructed) {
    if (original.size() != mask.size() || reconstructed.size() != mask.size() ||
        (noisy != nullptr && noisy->size() != mask.size())) {
        throw std::invalid_argument("overlay signals and mask must have equal lengths");
    }
    // Available samples are the observed values the loop held fixed: noisy
    // ones when a noisy signal is present, original ones otherwise.
    const RealSignal& observed = noisy != nullptr ? *noisy : original;
    std::string out = noisy != nullptr ? "index,original,noisy,available,reconstructed\n"
                                       : "index,original,available,reconstructed\n";
    for (std::size_t i = 0; i < original.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(original[i]);
        out += ',';
        if (noisy != nullptr) {
            out += format_double((*noisy)[i]);
            out += ',';
        }
        if (!mask.is_missing(i)) out += format_double(observed[i]);
        out += ',';
        out += format_double(reconstructed[i]);
        out += '\n';
    }
    write_text(path, out);
}

void write_sweep_csv(const std::string& path, const SweepResult& result) {
    std::string out = "d0,mu0,num_missing,variance,seed,mae_min,iter_of_min,snr_db\n";
    for (const SweepRow& row : result.rows) {
        out += format_double(row.d0);
        out += ',';
        out += format_double(row.mu0);
        out += ',';
        out += std::to_string(row.num_missing);
        out += ',';
        out += format_double(row.variance);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        if (row.ok()) {
            out += format_double(row.mae_min);
            out += ',';
            out += std::to_string(row.iter_of_min);
        } else {
            out += ',';
        }
        out += ',';
        if (row.ok() && row.snr_db.has_value()) out += format_double(*row.snr_db);
        out += '\n';
    }
    write_text(path, out);
}

void write_sweep_summary_csv(const std::string& path, std::span<const SweepSummaryRow> rows) {
    std::string out =
        "d0,mu0,num_missing,variance,num_seeds,median_mae_min,median_iter_of_min,median_snr_db\n";
    for (const SweepSummaryRow& row : rows) {
        out += format_double(row.d0);
        out += ',';
        out += format_double(row.mu0);
        out += ',';
        out += std::to_string(row.num_missing);
        out += ',';
        out += format_double(row.variance);
        out += ',';
        out += std::to_string(row.num_seeds);
        out += ',';
        if (row.num_seeds > 0) {
            out += format_double(row.median_mae_min);
            out += ',';
            out += format_double(row.median_iter_of_min);
        } else {
            out += ',';
        }
        out += ',';
        if (row.median_snr_db.has_value()) out += format_double(*row.median_snr_db);
        out += '\n';
    }
    write_text(path, out);
}

} // namespace gradrec
