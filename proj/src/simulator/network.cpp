#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "gyule/errors.hpp"
#include "gyule/simulator.hpp"

namespace gyule {
namespace {

// Fenwick tree over per-page in-link counts; picks a page with probability
// proportional to its count.
class Fenwick {
public:
    void push_back(std::int64_t v) {
        tree_.push_back(0);
        const std::size_t i = tree_.size();
        // A new slot covers (i - lowbit(i), i]; fill it from existing prefixes.
        std::int64_t s = v;
        const std::size_t low = i & (~i + 1);
        for (std::size_t j = 1; j < low; j <<= 1) s += tree_[i - j - 1];
        tree_[i - 1] = s;
    }
    void add(std::size_t idx, std::int64_t d) {
        for (std::size_t i = idx + 1; i <= tree_.size(); i += i & (~i + 1)) tree_[i - 1] += d;
    }
    // Smallest index whose prefix sum exceeds target (0 <= target < total).
    std::size_t find(std::int64_t target) const {
        std::size_t pos = 0;
        std::size_t step = 1;
        while (step * 2 <= tree_.size()) step *= 2;
        for (; step > 0; step >>= 1) {
            if (pos + step <= tree_.size() && tree_[pos + step - 1] <= target) {
                pos += step;
                target -= tree_[pos - 1];
            }
        }
        return pos;
    }

private:
    std::vector<std::int64_t> tree_;
};

void validate(const SimConfig& c) {
    const bool has_time = std::isfinite(c.max_time);
    if (has_time && !(c.max_time > 0.0)) throw DomainError("max_time must be positive");
    if (std::isnan(c.max_time)) throw DomainError("max_time must be a number");
    if (c.max_pages < 0) throw DomainError("max_pages must be positive");
    if (!has_time && c.max_pages == 0) throw DomainError("a stop rule (max_time or max_pages) is required");
    if (c.workers < 1) throw DomainError("workers must be >= 1");
    if (c.max_events < 1) throw DomainError("max_events must be >= 1");
}

}  // namespace

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::page_birth: return "page_birth";
        case EventKind::link_birth: return "link_birth";
        case EventKind::link_death: return "link_death";
    }
    return "unknown";
}

NetworkSnapshot simulate_network(const SimConfig& config, std::uint64_t stream) {
    validate(config);
    const double beta = config.params.beta();
    const double lambda = config.params.lambda();
    const double mu = config.params.mu();
    SplitMix64 rng = SplitMix64::stream(config.seed, stream);

    NetworkSnapshot s;
    s.pages.push_back(Page{0, 0.0, 1});
    Fenwick links;
    links.push_back(1);
    std::int64_t total_links = 1;
    double t = 0.0;

    auto reached_pages = [&] {
        return config.max_pages > 0 && static_cast<std::int64_t>(s.pages.size()) >= config.max_pages;
    };

    while (!reached_pages()) {
        const double page_rate = beta * static_cast<double>(s.pages.size());
        const double link_rate = (lambda + mu) * static_cast<double>(total_links);
        const double total = page_rate + link_rate;
        double next = t + rng.exponential(total);
        if (next <= t) next = std::nextafter(t, INFINITY);
        if (next > config.max_time) {
            t = config.max_time;
            break;
        }
        if (s.event_count >= config.max_events) {
            s.time = t;
            throw ResourceError("simulate_network: event cap reached", std::move(s));
        }
        t = next;
        ++s.event_count;

        if (rng.uniform() * total < page_rate) {
            const std::int64_t id = static_cast<std::int64_t>(s.pages.size());
            s.pages.push_back(Page{id, t, 1});
            links.push_back(1);
            ++total_links;
            if (config.record_events) s.events.push_back(Event{t, id, EventKind::page_birth});
            continue;
        }
        // Pick a link uniformly; its page gains or loses one in-link.
        const auto target = static_cast<std::int64_t>(rng.uniform() * static_cast<double>(total_links));
        const std::size_t idx = links.find(std::min(target, total_links - 1));
        const bool birth = rng.uniform() * (lambda + mu) < lambda;
        const std::int64_t d = birth ? 1 : -1;
        s.pages[idx].inlinks += d;
        links.add(idx, d);
        total_links += d;
        if (config.record_events)
            s.events.push_back(Event{t, s.pages[idx].id, birth ? EventKind::link_birth : EventKind::link_death});
    }
    s.time = t;
    return s;
}

std::vector<NetworkSnapshot> simulate_replicates(const SimConfig& config, std::int64_t count) {
    validate(config);
    if (count < 0) throw DomainError("replicate count must be >= 0");
    std::vector<NetworkSnapshot> out(static_cast<std::size_t>(count));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::int64_t r = next++; r < count; r = next++) {
            try {
                out[static_cast<std::size_t>(r)] = simulate_network(config, static_cast<std::uint64_t>(r));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    const unsigned n_threads = std::min<std::int64_t>(config.workers, std::max<std::int64_t>(count, 1));
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < n_threads; ++i) threads.emplace_back(work);
    work();
    for (auto& th : threads) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace gyule
