#pragma once

// Artifact writers: RFC-4180 CSV ('.' decimal, CRLF rows) and JSON reports
// carrying a schema_version field.

#include <json.hpp>

#include <string>
#include <vector>

namespace hartree::app {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

/// Shortest decimal text that round-trips the double; "nan" / "inf" / "-inf" otherwise.
std::string format_number(double v);
/// Quotes a field when it holds a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
    void add_row(std::vector<std::string> row);
    void add_numeric_row(const std::vector<double>& row);
    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes `report` with schema_version set, pretty-printed, trailing newline.
void write_json(const std::string& path, Json report);

/// Non-finite values become null.
Json json_number(double v);

/// Creates the directory (and parents) if missing.
void ensure_directory(const std::string& dir);

}  // namespace hartree::app
