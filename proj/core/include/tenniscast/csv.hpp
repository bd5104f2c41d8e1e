#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tenniscast::csv {

/// In-memory CSV table with a header row. Handles RFC-4180 quoting and
/// CRLF endings; columns are addressed by header name.
class Table {
public:
    static Table parse(std::string_view content, const std::string& source_name = "<string>");
    static Table read_file(const std::string& path);

    size_t rows() const { return rows_.size(); }
    size_t columns() const { return header_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    /// Column index by (case-insensitive) name, or -1 if absent.
    int column(std::string_view name) const;
    bool has_column(std::string_view name) const { return column(name) >= 0; }

    /// Empty string for out-of-range column indices (ragged rows).
    const std::string& cell(size_t row, int col) const;
    const std::string& cell(size_t row, std::string_view name) const {
        return cell(row, column(name));
    }

    const std::string& source_name() const { return source_name_; }

private:
    std::string source_name_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::unordered_map<std::string, int> index_;
};

/// Streaming writer; fields are quoted only when needed.
class Writer {
public:
    explicit Writer(const std::string& path);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void write_row(const std::vector<std::string>& fields);
    void close();

private:
    struct Impl;
    Impl* impl_;
};

std::optional<double> to_double(std::string_view field);
std::optional<long long> to_int(std::string_view field);

/// Shortest decimal string that round-trips the double exactly.
std::string format_double(double value);

/// Trim spaces/CR and collapse internal whitespace runs to single spaces.
std::string normalize_token(std::string_view field);

}  // namespace tenniscast::csv
