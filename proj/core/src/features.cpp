#include "quadnc/features.hpp"

#include <cmath>

#include "quadnc/errors.hpp"
#include "quadnc/rng.hpp"

namespace quadnc {

int bin_index(double x) {
    if (!(x >= kXMin && x <= kXMax)) return -1; // also rejects NaN
    if (x == kXMax) return kNumBins - 1;
    const int idx = static_cast<int>(std::floor((x - kXMin) / kBinWidth));
    return idx < kNumBins ? idx : kNumBins - 1;
}

namespace {

FeatureVector featurize_values(const std::vector<double>& values) {
    if (values.empty()) throw InputError("cannot featurize an empty batch");
    std::array<std::int64_t, kNumBins> counts{};
    std::int64_t kept = 0, dropped = 0;
    for (double x : values) {
        const int idx = bin_index(x);
        if (idx < 0) {
            ++dropped;
        } else {
            ++counts[static_cast<std::size_t>(idx)];
            ++kept;
        }
    }
    if (kept == 0) throw InputError("every event is outside [-8, 8]");
    FeatureVector f;
    f.kept = kept;
    f.dropped = dropped;
    for (int i = 0; i < kNumBins; ++i)
        f.bins[static_cast<std::size_t>(i)] =
            static_cast<double>(counts[static_cast<std::size_t>(i)]) /
            static_cast<double>(kept);
    return f;
}

} // namespace

FeatureVector featurize(const QuadratureBatch& batch) {
    return featurize_values(batch.values);
}

FeatureVector featurize_subsample(const QuadratureBatch& batch, int size,
                                  std::uint64_t seed) {
    const auto n = static_cast<std::int64_t>(batch.values.size());
    if (size < 1 || size > n)
        throw InputError("subsample size must be in [1, batch length]");
    // Partial Fisher-Yates over an index vector; first `size` entries form
    // the subset.
    std::vector<std::uint32_t> idx(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = static_cast<std::uint32_t>(i);
    Rng rng(seed);
    std::vector<double> subset(static_cast<std::size_t>(size));
    for (std::size_t i = 0; i < subset.size(); ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(n) - i));
        std::swap(idx[i], idx[j]);
        subset[i] = batch.values[idx[i]];
    }
    return featurize_values(subset);
}

} // namespace quadnc
