#ifndef QUADNC_FEATURES_HPP
#define QUADNC_FEATURES_HPP

#include <array>
#include <cstdint>

#include "quadnc/sampler.hpp"

namespace quadnc {

inline constexpr int kNumBins = 160;
inline constexpr double kBinWidth = 0.1;

// Normalized 160-bin histogram over [-8, 8]: the network input.
struct FeatureVector {
    std::array<double, kNumBins> bins{};
    std::int64_t kept = 0;    // in-range events
    std::int64_t dropped = 0; // events with |x| > 8, excluded
};

// Bin index for an in-range x: floor((x + 8) / 0.1), with x = 8 assigned to
// the last bin. Returns -1 for out-of-range values.
int bin_index(double x);

// Relative frequencies of the batch values. Throws InputError on an empty
// batch and InputError if every event is out of range.
FeatureVector featurize(const QuadratureBatch& batch);

// featurize() applied to a uniformly-random without-replacement subset of
// `size` values; deterministic under seed.
FeatureVector featurize_subsample(const QuadratureBatch& batch, int size,
                                  std::uint64_t seed);

} // namespace quadnc

#endif
