#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>

#include "gyule/errors.hpp"
#include "gyule/estimation.hpp"

namespace gyule {

GofReport goodness_of_fit(const DegreeHistogram& hist, const ModelParams& p, bool include_zero,
                          int estimated_parameters) {
    const DegreeHistogram data = include_zero ? hist : hist.without_zero();
    if (data.empty()) throw DomainError("goodness_of_fit: empty histogram");
    const double total = static_cast<double>(data.total());
    const std::int64_t n0 = include_zero ? 0 : 1;
    const double norm = include_zero ? 1.0 : 1.0 - pmf_zero(p);
    const std::int64_t n_last = data.counts().rbegin()->first;
    constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max();

    GofReport rep;
    double cum = 0.0;       // model CDF
    double cum_obs = 0.0;   // empirical CDF numerator
    GofBin cur{n0, n0, 0.0, 0.0};
    auto obs_it = data.counts().begin();
    for (std::int64_t n = n0;; ++n) {
        const double q = pmf(n, p) / norm;
        cum += q;
        const double o = static_cast<double>(data.count(n));
        cum_obs += o;
        if (n <= n_last) rep.max_cdf_deviation = std::max(rep.max_cdf_deviation, std::abs(cum_obs / total - cum));
        cur.n_hi = n;
        cur.expected += q * total;
        cur.observed += o;
        // Past the observed support everything goes into the open tail bin;
        // also stop once the remaining model mass could not fill a bin.
        if (n >= n_last || (1.0 - cum) * total < 5.0) break;
        if (cur.expected >= 5.0) {
            rep.bins.push_back(cur);
            cur = GofBin{n + 1, n + 1, 0.0, 0.0};
        }
    }
    // Open tail bin: everything beyond the last enumerated degree.
    while (obs_it != data.counts().end() && obs_it->first <= cur.n_hi) ++obs_it;
    for (; obs_it != data.counts().end(); ++obs_it) cur.observed += static_cast<double>(obs_it->second);
    cur.expected += std::max(0.0, 1.0 - cum) * total;
    cur.n_hi = kOpen;
    if (cur.expected < 5.0 && !rep.bins.empty()) {
        GofBin& prev = rep.bins.back();
        prev.n_hi = kOpen;
        prev.observed += cur.observed;
        prev.expected += cur.expected;
    } else {
        rep.bins.push_back(cur);
    }

    for (const GofBin& b : rep.bins) {
        const double d = b.observed - b.expected;
        rep.chi_square += d * d / b.expected;
    }
    rep.dof = static_cast<int>(rep.bins.size()) - 1 - estimated_parameters;
    if (rep.dof >= 1) {
        boost::math::chi_squared dist(rep.dof);
        rep.p_value = boost::math::cdf(boost::math::complement(dist, rep.chi_square));
    }
    return rep;
}

}  // namespace gyule
