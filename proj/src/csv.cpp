#include "lendml/csv.hpp"

#include <istream>

#include "lendml/common.hpp"

namespace lendml {

bool CsvReader::next(std::vector<std::string>& fields) {
    fields.clear();
    int c = in_.get();
    if (c == EOF) return false;

    std::string field;
    bool in_quotes = false;
    bool any = false;
    while (true) {
        if (c == EOF) {
            fields.push_back(std::move(field));
            return true;
        }
        any = true;
        if (in_quotes) {
            if (c == '"') {
                int peek = in_.peek();
                if (peek == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back((char)c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            fields.push_back(std::move(field));
            return true;
        } else if (c == '\r') {
            // swallow; the following '\n' (if any) ends the record
            if (in_.peek() == '\n') {
                in_.get();
                fields.push_back(std::move(field));
                return true;
            }
        } else {
            field.push_back((char)c);
        }
        c = in_.get();
    }
    (void)any;
}

CsvFileReader::CsvFileReader(const std::string& path)
    : path_(path), file_(path, std::ios::binary), reader_(file_) {
    if (!file_) fail("cannot open file: " + path);
    if (!reader_.next(header_)) fail("empty file (no header row): " + path);
    for (auto& h : header_) h = std::string(trim(h));
}

int CsvFileReader::column(const std::string& name) const {
    for (size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return (int)i;
    return -1;
}

std::string csv_escape(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += csv_escape(fields[i]);
    }
    return line;
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) fail("cannot open file for writing: " + path);
}

void CsvWriter::write_row(const std::vector<std::string>& fields) {
    out_ << csv_join(fields) << '\n';
}

}  // namespace lendml
