#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "gyule/histogram.hpp"
#include "gyule/model.hpp"

namespace gyule {

// SplitMix64. Small, fast and splittable: independent streams are seeded from
// (seed, index) so results do not depend on how work is scheduled.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    // Stream `index` of the family rooted at `seed`.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next();
    // Uniform on the open interval (0, 1).
    double uniform();
    double exponential(double rate);

private:
    std::uint64_t state_;
};

struct SimConfig {
    ModelParams params{1.0, 1.0, 0.0};
    // Stop at this time, or once the page count reaches max_pages; at least
    // one of the two must be set (positive).
    double max_time = std::numeric_limits<double>::infinity();
    std::int64_t max_pages = 0;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::int64_t max_events = 50'000'000;
    bool record_events = true;
};

enum class EventKind { page_birth, link_birth, link_death };
const char* to_string(EventKind k);

struct Event {
    double time;
    std::int64_t page_id;
    EventKind kind;
};

struct Page {
    std::int64_t id;
    double birth_time;
    std::int64_t inlinks;
};

struct NetworkSnapshot {
    double time = 0.0;
    std::vector<Page> pages;
    std::vector<Event> events;  // empty when events were not recorded
    std::int64_t event_count = 0;
};

// Event budget exhausted; the state reached so far is kept.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, NetworkSnapshot partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const NetworkSnapshot& partial() const noexcept { return partial_; }

private:
    NetworkSnapshot partial_;
};

// One realization started from a single page holding one in-link. Pages
// arrive at rate beta per page; every in-link independently duplicates at
// rate lambda and disappears at rate mu; a page that reaches zero in-links
// never changes again. `stream` selects the random stream under config.seed.
NetworkSnapshot simulate_network(const SimConfig& config, std::uint64_t stream = 0);

// `count` independent realizations, replicate r using stream r, run on
// config.workers threads. Output order and content do not depend on workers.
std::vector<NetworkSnapshot> simulate_replicates(const SimConfig& config, std::int64_t count);

struct LimitSamples {
    std::vector<std::int64_t> values;
    // Indices whose path hit population_cap; their value is the cap.
    std::vector<std::int64_t> capped;
};

// Draws of the limiting in-link count: age ~ Exp(beta), then one linear
// birth-death path from one in-link simulated event by event over that age.
LimitSamples sample_limit_degree(const ModelParams& p, std::int64_t count, std::uint64_t seed,
                                 unsigned workers = 1, std::int64_t population_cap = 1'000'000'000);

// Throws DomainError on empty input.
DegreeHistogram empirical_histogram(std::span<const std::int64_t> samples);
DegreeHistogram empirical_histogram(const NetworkSnapshot& snapshot);

// "time,page_id,kind" per event, with a header line.
void write_event_log_csv(std::ostream& out, const NetworkSnapshot& s);
// "page_id,birth_time,inlink_count" per page, with a header line.
void write_snapshot_csv(std::ostream& out, const NetworkSnapshot& s);

}  // namespace gyule
