#include "climb/stats.hpp"

#include <algorithm>
#include <cmath>

#include "climb/rng.hpp"

namespace climb {
namespace stats {

PairedRanks PairedRanks::of(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw DomainError("paired samples must have equal length");
    PairedRanks d;
    d.pairs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d.pairs.emplace_back(x[i], y[i]);
    return d;
}

PairedRanks PairedRanks::of_ranks(std::span<const int> x, std::span<const int> y) {
    if (x.size() != y.size())
        throw DomainError("paired samples must have equal length");
    PairedRanks d;
    d.pairs.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        d.pairs.emplace_back(static_cast<double>(x[i]), static_cast<double>(y[i]));
    return d;
}

namespace {

struct PairCounts {
    long long concordant = 0;
    long long discordant = 0;
    long long tied_x = 0;  // tied in x only
    long long tied_y = 0;  // tied in y only
    long long tied_xy = 0; // tied in both
    int n = 0;

    long long total() const { return static_cast<long long>(n) * (n - 1) / 2; }
    bool has_ties() const { return tied_x + tied_y + tied_xy > 0; }
};

PairCounts count_pairs(const PairedRanks& data) {
    PairCounts c;
    c.n = data.n();
    if (c.n < 2)
        throw DomainError("need at least two paired observations");
    const auto& p = data.pairs;
    for (int i = 0; i < c.n; ++i) {
        if (!std::isfinite(p[i].first) || !std::isfinite(p[i].second))
            throw DomainError("paired values must be finite");
        for (int j = i + 1; j < c.n; ++j) {
            const double dx = p[j].first - p[i].first;
            const double dy = p[j].second - p[i].second;
            if (dx == 0.0 && dy == 0.0) ++c.tied_xy;
            else if (dx == 0.0) ++c.tied_x;
            else if (dy == 0.0) ++c.tied_y;
            else if ((dx > 0.0) == (dy > 0.0)) ++c.concordant;
            else ++c.discordant;
        }
    }
    return c;
}

double tau_from_counts(const PairCounts& c) {
    const double n0 = static_cast<double>(c.total());
    const double n1 = static_cast<double>(c.tied_x + c.tied_xy);
    const double n2 = static_cast<double>(c.tied_y + c.tied_xy);
    if (n0 == n1 || n0 == n2)
        throw DomainError("correlation undefined: a margin is constant");
    return static_cast<double>(c.concordant - c.discordant) /
           std::sqrt((n0 - n1) * (n0 - n2));
}

// run lengths of equal values in one margin
std::vector<long long> tie_group_sizes(const PairedRanks& data, bool use_y) {
    std::vector<double> v;
    v.reserve(data.pairs.size());
    for (const auto& pr : data.pairs) v.push_back(use_y ? pr.second : pr.first);
    std::sort(v.begin(), v.end());
    std::vector<long long> groups;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i + 1;
        while (j < v.size() && v[j] == v[i]) ++j;
        if (j - i > 1) groups.push_back(static_cast<long long>(j - i));
        i = j;
    }
    return groups;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / 1.4142135623730951);
}

} // namespace

double kendall_tau(const PairedRanks& data) {
    return tau_from_counts(count_pairs(data));
}

std::vector<double> inversion_count_distribution(int n) {
    if (n < 1)
        throw DomainError("n must be positive");
    // Accumulate in long double (64-bit mantissa: counts up to 20! stay
    // exact) and fill the upper half by symmetry, so the descending tail
    // never suffers subtraction drift.
    std::vector<long double> counts{1.0L};
    for (int m = 2; m <= n; ++m) {
        const std::size_t max_inv = static_cast<std::size_t>(m) * (m - 1) / 2;
        std::vector<long double> next(max_inv + 1, 0.0L);
        // next[k] = sum_{j=0..m-1} counts[k-j], via a running window
        long double window = 0.0L;
        const std::size_t half = max_inv / 2;
        for (std::size_t k = 0; k <= half; ++k) {
            if (k < counts.size()) window += counts[k];
            if (k >= static_cast<std::size_t>(m) && k - m < counts.size())
                window -= counts[k - m];
            next[k] = window;
        }
        for (std::size_t k = half + 1; k <= max_inv; ++k) next[k] = next[max_inv - k];
        counts = std::move(next);
    }
    return std::vector<double>(counts.begin(), counts.end());
}

double exact_two_sided_p(int n, long long statistic_T) {
    const long long total_pairs = static_cast<long long>(n) * (n - 1) / 2;
    if (statistic_T < 0 || statistic_T > total_pairs)
        throw DomainError("statistic out of range");
    const std::vector<double> counts = inversion_count_distribution(n);

    // T = total_pairs - inversions; extremeness measured as |2T - total_pairs|
    // to stay in integers when the null mean is a half-integer.
    const long long dev = std::llabs(2 * statistic_T - total_pairs);
    double mass = 0.0, all = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const long long t = total_pairs - static_cast<long long>(k);
        if (std::llabs(2 * t - total_pairs) >= dev) mass += counts[k];
        all += counts[k];
    }
    return mass / all;
}

KendallTestResult kendall_exact_test(const PairedRanks& data) {
    const PairCounts c = count_pairs(data);
    KendallTestResult result;
    result.tau = tau_from_counts(c);
    result.statistic_T = c.concordant;

    if (!c.has_ties() && c.n < 50) {
        result.exact = true;
        result.p_value = exact_two_sided_p(c.n, c.concordant);
        return result;
    }

    // Normal approximation with tie correction (and continuity correction).
    const double n = c.n;
    const auto gx = tie_group_sizes(data, false);
    const auto gy = tie_group_sizes(data, true);
    auto sum3 = [](const std::vector<long long>& g, int power_terms) {
        double s = 0.0;
        for (long long t : g) {
            const double td = static_cast<double>(t);
            s += power_terms == 0 ? td * (td - 1) * (2 * td + 5)
               : power_terms == 1 ? td * (td - 1)
                                  : td * (td - 1) * (td - 2);
        }
        return s;
    };
    const double v0 = n * (n - 1) * (2 * n + 5);
    double var = (v0 - sum3(gx, 0) - sum3(gy, 0)) / 18.0;
    var += sum3(gx, 1) * sum3(gy, 1) / (2.0 * n * (n - 1));
    if (n > 2)
        var += sum3(gx, 2) * sum3(gy, 2) / (9.0 * n * (n - 1) * (n - 2));

    const double s = static_cast<double>(c.concordant - c.discordant);
    const double cc = s > 0 ? 1.0 : s < 0 ? -1.0 : 0.0;
    const double z = var > 0.0 ? (s - cc) / std::sqrt(var) : 0.0;
    result.exact = false;
    result.p_value = std::min(1.0, 2.0 * normal_cdf(-std::fabs(z)));
    return result;
}

BootstrapInterval bootstrap_tau_ci(const PairedRanks& data, int B, double level,
                                   std::uint64_t seed) {
    if (data.n() < 3)
        throw DomainError("bootstrap needs at least three pairs");
    if (B < 1)
        throw DomainError("resample count must be positive");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must lie in (0, 1)");
    kendall_tau(data); // reject degenerate originals up front

    const int n = data.n();
    std::vector<double> taus;
    taus.reserve(static_cast<std::size_t>(B));
    PairedRanks resample;
    resample.pairs.resize(static_cast<std::size_t>(n));
    for (int b = 0; b < B; ++b) {
        RandomStream stream = RandomStream::substream(seed, static_cast<std::uint64_t>(b));
        for (;;) {
            for (int i = 0; i < n; ++i)
                resample.pairs[static_cast<std::size_t>(i)] =
                    data.pairs[stream.next_below(static_cast<std::uint64_t>(n))];
            try {
                taus.push_back(kendall_tau(resample));
                break;
            } catch (const DomainError&) {
                // degenerate margin in the resample: redraw
            }
        }
    }
    std::sort(taus.begin(), taus.end());

    auto quantile = [&](double q) {
        const double h = q * static_cast<double>(taus.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(h);
        const std::size_t hi = std::min(lo + 1, taus.size() - 1);
        return taus[lo] + (h - static_cast<double>(lo)) * (taus[hi] - taus[lo]);
    };

    BootstrapInterval interval;
    interval.level = level;
    interval.resamples = B;
    interval.seed = seed;
    const double alpha = 1.0 - level;
    interval.lower = quantile(alpha / 2.0);
    interval.upper = quantile(1.0 - alpha / 2.0);
    return interval;
}

} // namespace stats
} // namespace climb
