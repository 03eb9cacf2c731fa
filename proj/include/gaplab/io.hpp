#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace gaplab::io {

// Deterministic CSV writer: fixed column order, "%.17g" floats.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<double>& values);
    void add_row_raw(const std::vector<std::string>& cells);
    std::string str() const;
    void write_file(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::string> rows_;
};

std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace gaplab::io
