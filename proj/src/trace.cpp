#include "misoagp/trace.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "misoagp/errors.hpp"

namespace misoagp {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw SchemaError("trace line " + std::to_string(line_no) + ": bad number '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string& s, std::size_t line_no) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw SchemaError("trace line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string trace_header(std::size_t dims) {
    std::string h = "iteration,source";
    for (std::size_t i = 1; i <= dims; ++i) h += ",x_" + std::to_string(i);
    h += ",y,nominal_cost_cum,actual_cost_cum,best_seen,augmented_best_seen,dhat_size,corrected";
    return h;
}

std::string format_trace_row(const TraceRow& row) {
    std::string s = std::to_string(row.iteration) + "," + std::to_string(row.source);
    for (Eigen::Index i = 0; i < row.x.size(); ++i) s += "," + format_double(row.x[i]);
    s += "," + format_double(row.y);
    s += "," + format_double(row.nominal_cost_cum);
    s += "," + format_double(row.actual_cost_cum);
    s += "," + format_double(row.best_seen);
    s += "," + format_double(row.augmented_best_seen);
    s += "," + std::to_string(row.dhat_size);
    s += row.corrected ? ",1" : ",0";
    return s;
}

CsvTraceWriter::CsvTraceWriter(const std::filesystem::path& path, std::size_t dims, bool append)
    : out_(path, append ? std::ios::app : std::ios::trunc), dims_(dims) {
    if (!out_) throw Error("cannot open trace file " + path.string());
    if (!append) out_ << trace_header(dims_) << '\n' << std::flush;
}

void CsvTraceWriter::on_row(const TraceRow& row) {
    if (static_cast<std::size_t>(row.x.size()) != dims_) throw SchemaError("trace row dimension mismatch");
    out_ << format_trace_row(row) << '\n' << std::flush;
}

TraceFile parse_trace_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("trace is empty");
    const auto header = split(line, ',');
    if (header.size() < 10) throw SchemaError("trace header has too few columns");
    TraceFile file;
    file.dims = header.size() - 9;
    if (line != trace_header(file.dims)) throw SchemaError("unexpected trace header: " + line);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != header.size())
            throw SchemaError("trace line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " columns, got " + std::to_string(cells.size()));
        TraceRow row;
        std::size_t c = 0;
        row.iteration = parse_count(cells[c++], line_no);
        row.source = parse_count(cells[c++], line_no);
        row.x.resize(static_cast<Eigen::Index>(file.dims));
        for (std::size_t i = 0; i < file.dims; ++i) row.x[static_cast<Eigen::Index>(i)] = parse_double(cells[c++], line_no);
        row.y = parse_double(cells[c++], line_no);
        row.nominal_cost_cum = parse_double(cells[c++], line_no);
        row.actual_cost_cum = parse_double(cells[c++], line_no);
        row.best_seen = parse_double(cells[c++], line_no);
        row.augmented_best_seen = parse_double(cells[c++], line_no);
        row.dhat_size = parse_count(cells[c++], line_no);
        const auto& flag = cells[c++];
        if (flag != "0" && flag != "1") throw SchemaError("trace line " + std::to_string(line_no) + ": bad flag");
        row.corrected = flag == "1";
        file.rows.push_back(std::move(row));
    }
    return file;
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read trace file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_trace_csv(ss.str());
}

}  // namespace misoagp
