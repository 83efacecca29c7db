#ifndef QUADNC_CLASSIFY_HPP
#define QUADNC_CLASSIFY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quadnc/nn.hpp"
#include "quadnc/sampler.hpp"
#include "quadnc/states.hpp"

namespace quadnc {

struct Verdict {
    double r = 0.0;
    double threshold = 0.9;
    bool nonclassical = false; // r strictly above threshold
    double sample_variance = 0.0;
    bool variance_nonclassical = false; // variance strictly below 1/4
};

// One grid point of a sweep. For points with several repeat batches the
// verdict carries the mean r / mean variance and majority flags; r_low and
// r_high bracket the per-batch scores.
struct SweepRow {
    std::optional<StateSpec> spec; // absent for rows built from external data
    double phi = 0.0;
    std::uint64_t seed = 0;
    int events = 0;
    int repeats = 1;
    Verdict verdict;
    double r_low = 0.0;
    double r_high = 0.0;
};

struct SweepReport {
    std::string name;
    std::uint64_t master_seed = 0;
    double threshold = 0.9;
    std::vector<SweepRow> rows;
};

struct SweepOptions {
    std::uint64_t master_seed = 0;
    int events = 16000;
    double eta = 0.6;
    double threshold = 0.9;
    int jobs = 1;
};

// Histogram the batch, score it, and attach the variance baseline (unbiased
// sample variance of the in-range events; below 1/4 flags nonclassicality).
Verdict predict(const NetworkModel& model, const QuadratureBatch& batch,
                double threshold = 0.9);

// r over parameter grids covering all six training families; Fock states are
// evaluated on four independent simulations each.
SweepReport sweep_training_families(const NetworkModel& model,
                                    const SweepOptions& opts = {});

// Squeezed vacuum scanned over one full turn of the quadrature angle.
SweepReport sweep_phase_squeezed(const NetworkModel& model, double xi = 0.5,
                                 int nbins = 125, const SweepOptions& opts = {});

// Binary verdict map over an (alpha, phi) grid of SPACS batches.
// Empty grids select the defaults: 14 alphas in [0,3], 11 phis in [0,pi].
SweepReport sweep_spacs_grid(const NetworkModel& model,
                             std::vector<double> alphas = {},
                             std::vector<double> phis = {},
                             const SweepOptions& opts = {});

// Odd cat states over an alpha grid at fixed angles (defaults pi/2 and pi/4).
SweepReport sweep_cat(const NetworkModel& model, std::vector<double> phis = {},
                      std::vector<double> alphas = {},
                      const SweepOptions& opts = {});

// Scores subsampled histograms of two fixed batches at increasing sizes,
// ten subsample draws per point.
SweepReport sweep_sample_size(const NetworkModel& model,
                              const QuadratureBatch& batch_nc,
                              const QuadratureBatch& batch_c,
                              std::vector<long> sizes,
                              const SweepOptions& opts = {});

// SPACS alpha scan at phi=0 with per-point variance, for models trained
// without the SPACS family.
SweepReport sweep_ablation(const NetworkModel& model,
                           std::vector<double> alphas = {},
                           const SweepOptions& opts = {});

// Evenly spaced inclusive grid, kept here so sweeps and tests agree on it.
std::vector<double> linspace(double lo, double hi, int count);

std::string sweep_csv(const SweepReport& report, const std::string& args_comment = "");
void save_sweep(const SweepReport& report, const std::string& path,
                const std::string& args_comment = "");

} // namespace quadnc

#endif
