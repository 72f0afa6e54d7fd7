#include <algorithm>
#include <atomic>
#include <cstdio>
#include <ostream>
#include <thread>

#include "gyule/errors.hpp"
#include "gyule/simulator.hpp"

namespace gyule {

LimitSamples sample_limit_degree(const ModelParams& p, std::int64_t count, std::uint64_t seed,
                                 unsigned workers, std::int64_t population_cap) {
    if (count < 0) throw DomainError("sample count must be >= 0");
    if (workers < 1) throw DomainError("workers must be >= 1");
    if (population_cap < 1) throw DomainError("population_cap must be >= 1");
    const double beta = p.beta();
    const double lambda = p.lambda();
    const double mu = p.mu();
    const double birth_share = lambda / (lambda + mu);

    LimitSamples out;
    out.values.resize(static_cast<std::size_t>(count));
    std::vector<char> hit_cap(static_cast<std::size_t>(count), 0);

    // Blocks of samples handed out dynamically; each sample owns its stream.
    constexpr std::int64_t kBlock = 4096;
    std::atomic<std::int64_t> next{0};
    auto work = [&] {
        for (std::int64_t lo = next.fetch_add(kBlock); lo < count; lo = next.fetch_add(kBlock)) {
            const std::int64_t hi = std::min(count, lo + kBlock);
            for (std::int64_t i = lo; i < hi; ++i) {
                SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
                const double age = rng.exponential(beta);
                std::int64_t k = 1;
                double t = 0.0;
                while (k > 0) {
                    t += rng.exponential((lambda + mu) * static_cast<double>(k));
                    if (t > age) break;
                    k += rng.uniform() < birth_share ? 1 : -1;
                    if (k >= population_cap) {
                        hit_cap[static_cast<std::size_t>(i)] = 1;
                        break;
                    }
                }
                out.values[static_cast<std::size_t>(i)] = k;
            }
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::int64_t>(workers, std::max<std::int64_t>(1, count)));
    std::vector<std::thread> threads;
    for (unsigned i = 1; i < n_threads; ++i) threads.emplace_back(work);
    work();
    for (auto& th : threads) th.join();

    for (std::int64_t i = 0; i < count; ++i)
        if (hit_cap[static_cast<std::size_t>(i)]) out.capped.push_back(i);
    return out;
}

DegreeHistogram empirical_histogram(std::span<const std::int64_t> samples) {
    if (samples.empty()) throw DomainError("empirical_histogram: no samples");
    std::vector<std::int64_t> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    DegreeHistogram h;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        h.add(sorted[i], static_cast<std::int64_t>(j - i));
        i = j;
    }
    return h;
}

DegreeHistogram empirical_histogram(const NetworkSnapshot& snapshot) {
    if (snapshot.pages.empty()) throw DomainError("empirical_histogram: snapshot has no pages");
    DegreeHistogram h;
    for (const Page& pg : snapshot.pages) h.add(pg.inlinks);
    return h;
}

// Times are written with 17 significant digits so distinct event times stay
// distinct after a round trip.
void write_event_log_csv(std::ostream& out, const NetworkSnapshot& s) {
    char buf[64];
    out << "time,page_id,kind\n";
    for (const Event& e : s.events) {
        std::snprintf(buf, sizeof buf, "%.17g", e.time);
        out << buf << ',' << e.page_id << ',' << to_string(e.kind) << '\n';
    }
}

void write_snapshot_csv(std::ostream& out, const NetworkSnapshot& s) {
    char buf[64];
    out << "page_id,birth_time,inlink_count\n";
    for (const Page& pg : s.pages) {
        std::snprintf(buf, sizeof buf, "%.17g", pg.birth_time);
        out << pg.id << ',' << buf << ',' << pg.inlinks << '\n';
    }
}

}  // namespace gyule
