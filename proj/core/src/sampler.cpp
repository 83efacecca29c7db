#include "quadnc/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "quadnc/errors.hpp"
#include "quadnc/rng.hpp"

namespace quadnc {

SamplerTable build_table(const StateSpec& spec, int resolution) {
    if (resolution < 1024)
        throw InputError("sampler table resolution must be >= 1024");
    SamplerTable table;
    table.spec = spec;
    table.grid.resize(static_cast<std::size_t>(resolution));
    table.cdf.resize(static_cast<std::size_t>(resolution));

    const double h = (kXMax - kXMin) / (resolution - 1);
    std::vector<double> p(static_cast<std::size_t>(resolution));
    for (int i = 0; i < resolution; ++i) {
        const double x = (i == resolution - 1) ? kXMax : kXMin + h * i;
        table.grid[static_cast<std::size_t>(i)] = x;
        p[static_cast<std::size_t>(i)] = density(spec, x);
    }

    table.cdf[0] = 0.0;
    for (int i = 1; i < resolution; ++i)
        table.cdf[static_cast<std::size_t>(i)] =
            table.cdf[static_cast<std::size_t>(i - 1)] +
            0.5 * h * (p[static_cast<std::size_t>(i - 1)] + p[static_cast<std::size_t>(i)]);

    const double total = table.cdf.back();
    if (!(total > 0.0) || !std::isfinite(total))
        throw InternalError("sampler table has no probability mass in [-8, 8]");
    for (auto& c : table.cdf) c /= total;
    table.cdf.back() = 1.0;
    for (std::size_t i = 1; i < table.cdf.size(); ++i)
        if (table.cdf[i] < table.cdf[i - 1])
            throw InternalError("sampler table CDF is not monotone");
    return table;
}

QuadratureBatch sample(const SamplerTable& table, int count, std::uint64_t seed) {
    if (count < 1) throw InputError("sample count must be >= 1");
    QuadratureBatch batch;
    batch.phi = table.spec.phi;
    batch.spec = table.spec;
    batch.seed = seed;
    batch.values.resize(static_cast<std::size_t>(count));

    Rng rng(seed);
    const auto begin = table.cdf.begin();
    const auto end = table.cdf.end();
    for (auto& value : batch.values) {
        const double u = rng.next_double();
        auto it = std::upper_bound(begin, end, u);
        if (it == end) it = end - 1; // u in the final closed segment
        const std::size_t j = static_cast<std::size_t>(it - begin);
        // cdf[j-1] <= u < cdf[j] with cdf[j] > cdf[j-1]
        const double span = table.cdf[j] - table.cdf[j - 1];
        const double t = (u - table.cdf[j - 1]) / span;
        value = table.grid[j - 1] + t * (table.grid[j] - table.grid[j - 1]);
    }
    return batch;
}

QuadratureBatch sample_rejection(const StateSpec& spec, int count,
                                 std::uint64_t seed) {
    if (count < 1) throw InputError("sample count must be >= 1");
    // Envelope: sup of the density over a fine grid, with a small margin for
    // curvature between grid points.
    const auto grid = density_grid(spec, kXMin, kXMax, 100001);
    double peak = 0.0;
    for (const auto& [x, p] : grid) peak = std::max(peak, p);
    const double envelope = peak * 1.01;

    QuadratureBatch batch;
    batch.phi = spec.phi;
    batch.spec = spec;
    batch.seed = seed;
    batch.values.reserve(static_cast<std::size_t>(count));

    Rng rng(seed);
    while (batch.values.size() < static_cast<std::size_t>(count)) {
        const double x = rng.uniform(kXMin, kXMax);
        const double u = rng.next_double() * envelope;
        const double p = density(spec, x);
        if (p > envelope)
            throw InternalError("rejection envelope violated");
        if (u <= p) batch.values.push_back(x);
    }
    return batch;
}

} // namespace quadnc
