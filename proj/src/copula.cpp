#include "climb/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace climb {
namespace copula {

double tau_to_rho(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0))
        throw DomainError("tau must lie in [0, 1]");
    if (tau == 0.0) return 0.0;
    if (tau == 1.0) return 1.0;
    return std::sin(1.5707963267948966 * tau); // pi/2 * tau
}

std::vector<int> ranks_from_values(std::span<const double> values) {
    const int n = static_cast<int>(values.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return values[a] < values[b]; });
    std::vector<int> ranks(n);
    for (int i = 0; i < n; ++i) ranks[order[i]] = i + 1;
    return ranks;
}

RankField sample_rank_field(int n, const CorrelationSpec& spec, RandomStream& stream) {
    if (n < 2)
        throw DomainError("field size must be at least 2");
    const double rho = tau_to_rho(spec.tau);

    RankField field;
    field.n = n;
    field.speed_ranks = stream.permutation(n);

    if (spec.tau == 1.0) {
        // comonotone: one shared permutation, no sampling noise
        field.boulder_ranks = stream.permutation(n);
        field.lead_ranks = field.boulder_ranks;
        return field;
    }

    std::vector<double> x(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
    const double mix = std::sqrt(1.0 - rho * rho);
    for (int i = 0; i < n; ++i) {
        const double z1 = stream.next_normal();
        const double z2 = stream.next_normal();
        x[i] = z1;
        y[i] = rho * z1 + mix * z2;
    }
    field.boulder_ranks = ranks_from_values(x);
    field.lead_ranks = ranks_from_values(y);
    return field;
}

} // namespace copula
} // namespace climb
