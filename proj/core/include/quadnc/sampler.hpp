#ifndef QUADNC_SAMPLER_HPP
#define QUADNC_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "quadnc/states.hpp"

namespace quadnc {

// An ordered list of quadrature outcomes together with the phase that
// produced them. spec/seed are absent for external experimental data.
struct QuadratureBatch {
    std::vector<double> values;
    double phi = 0.0;
    std::optional<StateSpec> spec;
    std::optional<std::uint64_t> seed;
};

// Tabulated CDF of a density over [-8, 8] for inverse-transform sampling.
// Immutable after construction; shareable across threads.
struct SamplerTable {
    std::vector<double> grid; // monotone x values
    std::vector<double> cdf;  // non-decreasing, cdf.front() = 0, cdf.back() = 1
    StateSpec spec;
};

inline constexpr int kDefaultTableResolution = 16384;

// Cumulative trapezoidal integral of density() on a uniform grid of
// `resolution` points, renormalized to end at 1 (out-of-range mass < 1e-6
// for the supported parameter ranges is folded in). resolution >= 1024.
SamplerTable build_table(const StateSpec& spec,
                         int resolution = kDefaultTableResolution);

// count i.i.d. draws by inverse CDF with linear interpolation between grid
// nodes. Identical seed gives a bit-identical batch.
QuadratureBatch sample(const SamplerTable& table, int count, std::uint64_t seed);

// Exact rejection sampling under a uniform envelope over [-8, 8].
// Independent of the table path; intended as a cross-check oracle.
QuadratureBatch sample_rejection(const StateSpec& spec, int count,
                                 std::uint64_t seed);

} // namespace quadnc

#endif
