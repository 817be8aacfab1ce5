#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "misoagp/misoloop.hpp"

namespace misoagp {

/// iteration,source,x_1..x_d,y,nominal_cost_cum,actual_cost_cum,best_seen,augmented_best_seen,dhat_size,corrected
std::string trace_header(std::size_t dims);
std::string format_trace_row(const TraceRow& row);
/// Shortest text that parses back to the same double ("nan"/"inf" for non-finite values).
std::string format_double(double v);

/// Appends each row to a CSV file and flushes immediately.
class CsvTraceWriter final : public TraceObserver {
public:
    /// append = false truncates and writes the header.
    CsvTraceWriter(const std::filesystem::path& path, std::size_t dims, bool append = false);
    void on_row(const TraceRow& row) override;

private:
    std::ofstream out_;
    std::size_t dims_;
};

struct TraceFile {
    std::size_t dims = 0;
    std::vector<TraceRow> rows;
};

/// Parses a trace CSV. Throws SchemaError on a header or row that does not
/// match the fixed column set.
TraceFile read_trace_csv(const std::filesystem::path& path);
TraceFile parse_trace_csv(const std::string& text);

}  // namespace misoagp
