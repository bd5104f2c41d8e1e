#include "tenniscast/csv.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tenniscast::csv {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Splits one logical CSV record starting at `pos`; advances `pos` past it.
std::vector<std::string> parse_record(std::string_view text, size_t& pos) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    while (pos < text.size()) {
        char c = text[pos];
        if (quoted) {
            if (c == '"') {
                if (pos + 1 < text.size() && text[pos + 1] == '"') {
                    current += '"';
                    ++pos;
                } else {
                    quoted = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c == '\n') {
            ++pos;
            break;
        } else if (c != '\r') {
            current += c;
        }
        ++pos;
    }
    fields.push_back(std::move(current));
    return fields;
}

}  // namespace

Table Table::parse(std::string_view content, const std::string& source_name) {
    Table t;
    t.source_name_ = source_name;
    size_t pos = 0;
    if (!content.empty() && content.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;  // UTF-8 BOM
    if (pos >= content.size())
        throw std::runtime_error(source_name + ": empty CSV file");
    t.header_ = parse_record(content, pos);
    for (size_t i = 0; i < t.header_.size(); ++i) {
        std::string key = lower(normalize_token(t.header_[i]));
        if (!key.empty()) t.index_.emplace(std::move(key), static_cast<int>(i));
    }
    while (pos < content.size()) {
        auto row = parse_record(content, pos);
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        t.rows_.push_back(std::move(row));
    }
    return t;
}

Table Table::read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

int Table::column(std::string_view name) const {
    auto it = index_.find(lower(normalize_token(name)));
    return it == index_.end() ? -1 : it->second;
}

const std::string& Table::cell(size_t row, int col) const {
    static const std::string empty;
    if (col < 0) return empty;
    const auto& r = rows_.at(row);
    if (static_cast<size_t>(col) >= r.size()) return empty;
    return r[static_cast<size_t>(col)];
}

struct Writer::Impl {
    std::ofstream out;
};

Writer::Writer(const std::string& path) : impl_(new Impl) {
    impl_->out.open(path, std::ios::binary);
    if (!impl_->out) {
        delete impl_;
        throw std::runtime_error("cannot open file for writing: " + path);
    }
}

Writer::~Writer() { delete impl_; }

void Writer::write_row(const std::vector<std::string>& fields) {
    std::string line;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n\r") != std::string::npos) {
            line += '"';
            for (char c : f) {
                if (c == '"') line += '"';
                line += c;
            }
            line += '"';
        } else {
            line += f;
        }
    }
    line += '\n';
    impl_->out << line;
}

void Writer::close() {
    impl_->out.close();
    if (impl_->out.fail()) throw std::runtime_error("failed writing CSV output");
}

std::optional<double> to_double(std::string_view field) {
    std::string s = normalize_token(field);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::optional<long long> to_int(std::string_view field) {
    std::string s = normalize_token(field);
    if (s.empty()) return std::nullopt;
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size()) return value;
    // Some files carry integer columns as "2.0".
    if (auto d = to_double(s)) {
        long long rounded = static_cast<long long>(*d);
        if (static_cast<double>(rounded) == *d) return rounded;
    }
    return std::nullopt;
}

std::string format_double(double value) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::string normalize_token(std::string_view field) {
    std::string out;
    out.reserve(field.size());
    bool in_space = false;
    for (char c : field) {
        if (c == '\r' || c == '\t') c = ' ';
        if (c == ' ') {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out += ' ';
        in_space = false;
        out += c;
    }
    return out;
}

}  // namespace tenniscast::csv
