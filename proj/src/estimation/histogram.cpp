#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "gyule/errors.hpp"
#include "gyule/histogram.hpp"

namespace gyule {
namespace {

std::string_view trim(std::string_view s) {
    const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r' && c != '\n'; };
    while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
    return s;
}

std::int64_t parse_int(std::string_view field, const char* name, long line) {
    field = trim(field);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("line " + std::to_string(line) + ": " + name + " is not an integer: '" +
                             std::string(field) + "'",
                         line);
    return v;
}

}  // namespace

void DegreeHistogram::add(std::int64_t n, std::int64_t count) {
    if (n < 0) throw DomainError("histogram degree must be >= 0");
    if (count < 0) throw DomainError("histogram count must be >= 0");
    if (count == 0) return;
    counts_[n] += count;
    total_ += count;
}

std::int64_t DegreeHistogram::count(std::int64_t n) const {
    const auto it = counts_.find(n);
    return it == counts_.end() ? 0 : it->second;
}

DegreeHistogram DegreeHistogram::without_zero() const {
    DegreeHistogram h;
    for (const auto& [n, c] : counts_)
        if (n != 0) h.add(n, c);
    return h;
}

DegreeHistogram read_histogram_csv(std::istream& in) {
    std::string line;
    long line_no = 0;
    // Skip a UTF-8 byte order mark and blank lines before the header.
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
        if (!trim(line).empty()) break;
    }
    if (trim(line) != "n,count")
        throw ParseError("line " + std::to_string(line_no) + ": expected header 'n,count'", line_no);

    DegreeHistogram h;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        const auto comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected two comma-separated fields",
                             line_no);
        const std::int64_t n = parse_int(row.substr(0, comma), "n", line_no);
        const std::int64_t c = parse_int(row.substr(comma + 1), "count", line_no);
        if (n < 0 || c < 0)
            throw ParseError("line " + std::to_string(line_no) + ": negative value", line_no);
        h.add(n, c);
    }
    if (in.bad()) throw IoError("read error while parsing histogram");
    return h;
}

DegreeHistogram read_histogram_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open histogram file '" + path + "'");
    return read_histogram_csv(f);
}

void write_histogram_csv(std::ostream& out, const DegreeHistogram& h) {
    out << "n,count\n";
    for (const auto& [n, c] : h.counts()) out << n << ',' << c << '\n';
}

}  // namespace gyule
