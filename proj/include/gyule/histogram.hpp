#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>

namespace gyule {

// Observed in-link counts: degree n -> number of pages with that degree.
class DegreeHistogram {
public:
    DegreeHistogram() = default;

    // Throws DomainError for n < 0 or count < 0. Zero counts are not stored.
    void add(std::int64_t n, std::int64_t count = 1);

    const std::map<std::int64_t, std::int64_t>& counts() const noexcept { return counts_; }
    std::int64_t total() const noexcept { return total_; }
    std::int64_t count(std::int64_t n) const;
    bool empty() const noexcept { return total_ == 0; }
    std::size_t distinct() const noexcept { return counts_.size(); }

    // Same histogram without the n = 0 bin.
    DegreeHistogram without_zero() const;

    bool operator==(const DegreeHistogram&) const = default;

private:
    std::map<std::int64_t, std::int64_t> counts_;
    std::int64_t total_ = 0;
};

// CSV with header "n,count". Throws ParseError with the offending line.
DegreeHistogram read_histogram_csv(std::istream& in);
// Throws IoError when the file cannot be opened.
DegreeHistogram read_histogram_csv(const std::string& path);
void write_histogram_csv(std::ostream& out, const DegreeHistogram& h);

}  // namespace gyule
