#pragma once
#include <string>
#include <vector>

namespace sunfact {

// Locale-independent formatting, 12 significant digits.
std::string format_double(double x);

struct CsvWriter {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void add_row(const std::vector<double>& values);
    void add_row(const std::vector<std::string>& values);
    std::string str() const;
};

// Write-temp-then-rename.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace sunfact
