#pragma once

#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace lendml {

// Streaming CSV reader: comma separated, double-quote quoting with "" escapes,
// quoted fields may contain commas and newlines. CRLF and LF both accepted.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    // Returns false at end of input. A trailing newline does not produce
    // an empty record.
    bool next(std::vector<std::string>& fields);

private:
    std::istream& in_;
};

class CsvFileReader {
public:
    explicit CsvFileReader(const std::string& path);

    const std::vector<std::string>& header() const { return header_; }
    // column index by exact header name, -1 if absent
    int column(const std::string& name) const;
    bool next(std::vector<std::string>& fields) { return reader_.next(fields); }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::ifstream file_;
    CsvReader reader_;
    std::vector<std::string> header_;
};

std::string csv_escape(const std::string& field);
std::string csv_join(const std::vector<std::string>& fields);

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void write_row(const std::vector<std::string>& fields);

private:
    std::ofstream out_;
};

}  // namespace lendml
