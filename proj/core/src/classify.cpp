#include "quadnc/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadnc/errors.hpp"
#include "quadnc/features.hpp"
#include "quadnc/io.hpp"
#include "quadnc/rng.hpp"

namespace quadnc {
namespace {

constexpr double kVacuumVariance = 0.25;

double in_range_variance(const std::vector<double>& values) {
    double sum = 0.0;
    long count = 0;
    for (double x : values) {
        if (bin_index(x) < 0)
            continue;
        sum += x;
        ++count;
    }
    if (count < 2)
        return std::numeric_limits<double>::quiet_NaN();
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (double x : values) {
        if (bin_index(x) < 0)
            continue;
        const double d = x - mean;
        ss += d * d;
    }
    return ss / static_cast<double>(count - 1);
}

void check_threshold(double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ParameterError("threshold must lie strictly between 0 and 1");
}

// Simulates `repeats` independent batches of one state and folds their
// verdicts into a single row (mean r, mean variance, majority flags).
SweepRow eval_point(const NetworkModel& model, const StateSpec& spec, int events,
                    std::uint64_t point_seed, int repeats, double threshold) {
    SweepRow row;
    row.spec = spec;
    row.phi = spec.phi;
    row.seed = point_seed;
    row.events = events;
    row.repeats = repeats;

    const SamplerTable table = build_table(spec);
    double r_sum = 0.0, var_sum = 0.0;
    double r_low = std::numeric_limits<double>::infinity();
    double r_high = -std::numeric_limits<double>::infinity();
    int votes = 0;
    for (int k = 0; k < repeats; ++k) {
        const QuadratureBatch batch =
            sample(table, events, derive_seed(point_seed, k));
        const Verdict v = predict(model, batch, threshold);
        r_sum += v.r;
        var_sum += v.sample_variance;
        r_low = std::min(r_low, v.r);
        r_high = std::max(r_high, v.r);
        if (v.nonclassical)
            ++votes;
    }
    row.verdict.r = r_sum / repeats;
    row.verdict.threshold = threshold;
    row.verdict.nonclassical = 2 * votes > repeats;
    row.verdict.sample_variance = var_sum / repeats;
    row.verdict.variance_nonclassical = row.verdict.sample_variance < kVacuumVariance;
    row.r_low = r_low;
    row.r_high = r_high;
    return row;
}

void check_options(const SweepOptions& opts) {
    check_threshold(opts.threshold);
    if (opts.events < 1)
        throw ParameterError("events must be at least 1");
    if (!(opts.eta > 0.0 && opts.eta <= 1.0))
        throw ParameterError("eta must lie in (0, 1]");
    if (opts.jobs < 1)
        throw ParameterError("jobs must be at least 1");
}

// Evaluates a list of state specs into report rows, one point per spec,
// with derived per-point seeds; safe to run chunked across threads.
void eval_grid(SweepReport& report, const NetworkModel& model,
               const std::vector<StateSpec>& specs, int repeats,
               const SweepOptions& opts) {
    const std::size_t base = report.rows.size();
    report.rows.resize(base + specs.size());
    parallel_for(specs.size(), opts.jobs, [&](std::size_t i) {
        const std::size_t point = base + i;
        report.rows[point] = eval_point(model, specs[i], opts.events,
                                        derive_seed(opts.master_seed, point),
                                        repeats, opts.threshold);
    });
}

} // namespace

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2)
        throw ParameterError("linspace needs at least two points");
    std::vector<double> pts(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        pts[static_cast<std::size_t>(i)] =
            lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return pts;
}

Verdict predict(const NetworkModel& model, const QuadratureBatch& batch,
                double threshold) {
    check_threshold(threshold);
    const FeatureVector f = featurize(batch);
    Verdict v;
    v.r = nonclassical_score(model, f);
    v.threshold = threshold;
    v.nonclassical = v.r > threshold;
    v.sample_variance = in_range_variance(batch.values);
    v.variance_nonclassical = v.sample_variance < kVacuumVariance;
    return v;
}

SweepReport sweep_training_families(const NetworkModel& model,
                                    const SweepOptions& opts) {
    check_options(opts);
    SweepReport report;
    report.name = "families";
    report.master_seed = opts.master_seed;
    report.threshold = opts.threshold;

    std::vector<StateSpec> specs;
    for (double a : linspace(-5.0, 5.0, 41))
        specs.push_back(StateSpec::coherent(a, opts.eta, 0.0));
    for (double nb : linspace(0.0, 5.0, 41))
        specs.push_back(StateSpec::thermal(nb, opts.eta, 0.0));
    for (double a : linspace(-5.0, 5.0, 41))
        specs.push_back(StateSpec::mixture(a, opts.eta, 0.0));
    for (int n = 1; n <= 6; ++n)
        for (int sim = 0; sim < 4; ++sim) // four independent simulations each
            specs.push_back(StateSpec::fock(n, opts.eta, 0.0));
    for (double a : linspace(-5.0, 5.0, 41))
        specs.push_back(StateSpec::squeezed(a, 0.75, opts.eta, 0.0));
    for (double a : linspace(-3.0, 3.0, 21))
        specs.push_back(StateSpec::spacs(a, opts.eta, 0.0));

    eval_grid(report, model, specs, 1, opts);
    return report;
}

SweepReport sweep_phase_squeezed(const NetworkModel& model, double xi, int nbins,
                                 const SweepOptions& opts) {
    check_options(opts);
    if (nbins < 2)
        throw ParameterError("the phase sweep needs at least 2 bins");
    if (!(xi >= 0.0) || !std::isfinite(xi))
        throw ParameterError("xi must be a finite non-negative number");

    SweepReport report;
    report.name = "phase-squeezed";
    report.master_seed = opts.master_seed;
    report.threshold = opts.threshold;

    std::vector<StateSpec> specs;
    specs.reserve(static_cast<std::size_t>(nbins));
    for (int k = 0; k < nbins; ++k) {
        const double phi = 2.0 * std::numbers::pi * k / nbins;
        specs.push_back(StateSpec::squeezed(0.0, xi, opts.eta, phi));
    }
    eval_grid(report, model, specs, 1, opts);
    return report;
}

SweepReport sweep_spacs_grid(const NetworkModel& model, std::vector<double> alphas,
                             std::vector<double> phis, const SweepOptions& opts) {
    check_options(opts);
    if (alphas.empty())
        alphas = linspace(0.0, 3.0, 14);
    if (phis.empty())
        phis = linspace(0.0, std::numbers::pi, 11);
    for (double a : alphas)
        if (!std::isfinite(a))
            throw ParameterError("alpha grid contains a non-finite value");
    for (double p : phis)
        if (!std::isfinite(p))
            throw ParameterError("phi grid contains a non-finite value");

    SweepReport report;
    report.name = "spacs-grid";
    report.master_seed = opts.master_seed;
    report.threshold = opts.threshold;

    std::vector<StateSpec> specs;
    specs.reserve(alphas.size() * phis.size());
    for (double a : alphas)
        for (double p : phis)
            specs.push_back(StateSpec::spacs(a, opts.eta, p));
    eval_grid(report, model, specs, 4, opts);
    return report;
}

SweepReport sweep_cat(const NetworkModel& model, std::vector<double> phis,
                      std::vector<double> alphas, const SweepOptions& opts) {
    check_options(opts);
    if (phis.empty())
        phis = {std::numbers::pi / 2.0, std::numbers::pi / 4.0};
    if (alphas.empty())
        alphas = linspace(0.0, 5.0, 26);
    for (double p : phis)
        if (!std::isfinite(p))
            throw ParameterError("phi grid contains a non-finite value");
    for (double a : alphas)
        if (!std::isfinite(a))
            throw ParameterError("alpha grid contains a non-finite value");

    SweepReport report;
    report.name = "cat";
    report.master_seed = opts.master_seed;
    report.threshold = opts.threshold;

    std::vector<StateSpec> specs;
    specs.reserve(phis.size() * alphas.size());
    for (double p : phis)
        for (double a : alphas)
            specs.push_back(StateSpec::cat(a, opts.eta, p));
    eval_grid(report, model, specs, 4, opts);
    return report;
}

SweepReport sweep_sample_size(const NetworkModel& model,
                              const QuadratureBatch& batch_nc,
                              const QuadratureBatch& batch_c,
                              std::vector<long> sizes, const SweepOptions& opts) {
    check_options(opts);
    if (sizes.empty())
        throw InputError("the sample-size sweep needs at least one size");
    for (std::size_t i = 1; i < sizes.size(); ++i)
        if (sizes[i] < sizes[i - 1])
            throw InputError("sizes must be sorted ascending");
    const long max_size = static_cast<long>(
        std::min(batch_nc.values.size(), batch_c.values.size()));
    if (sizes.front() < 1 || sizes.back() > max_size)
        throw InputError("every size must lie in [1, " + std::to_string(max_size) + "]");

    SweepReport report;
    report.name = "sample-size";
    report.master_seed = opts.master_seed;
    report.threshold = opts.threshold;

    constexpr int kSubsampleSeeds = 10;
    const std::size_t points = sizes.size() * 2;
    report.rows.resize(points);
    parallel_for(points, opts.jobs, [&](std::size_t point) {
        const long size = sizes[point / 2];
        const QuadratureBatch& batch = (point % 2 == 0) ? batch_nc : batch_c;
        const std::uint64_t point_seed = derive_seed(opts.master_seed, point);

        SweepRow row;
        row.spec = batch.spec;
        row.phi = batch.phi;
        row.seed = point_seed;
        row.events = static_cast<int>(size);
        row.repeats = kSubsampleSeeds;

        double r_sum = 0.0;
        double r_low = std::numeric_limits<double>::infinity();
        double r_high = -std::numeric_limits<double>::infinity();
        int votes = 0;
        for (int k = 0; k < kSubsampleSeeds; ++k) {
            const FeatureVector f = featurize_subsample(
                batch, static_cast<int>(size), derive_seed(point_seed, k));
            const double r = nonclassical_score(model, f);
            r_sum += r;
            r_low = std::min(r_low, r);
            r_high = std::max(r_high, r);
            if (r > opts.threshold)
                ++votes;
        }
        row.verdict.r = r_sum / kSubsampleSeeds;
        row.verdict.threshold = opts.threshold;
        row.verdict.nonclassical = 2 * votes > kSubsampleSeeds;
        // per-subsample variance is not tracked; the histogram is the product
        row.verdict.sample_variance = std::numeric_limits<double>::quiet_NaN();
        row.verdict.variance_nonclassical = false;
        row.r_low = r_low;
        row.r_high = r_high;
        report.rows[point] = row;
    });
    return report;
}

SweepReport sweep_ablation(const NetworkModel& model, std::vector<double> alphas,
                           const SweepOptions& opts) {
    check_options(opts);
    if (alphas.empty())
        alphas = linspace(0.0, 5.0, 26);
    for (double a : alphas)
        if (!std::isfinite(a))
            throw ParameterError("alpha grid contains a non-finite value");

    SweepReport report;
    report.name = "ablation";
    report.master_seed = opts.master_seed;
    report.threshold = opts.threshold;

    std::vector<StateSpec> specs;
    specs.reserve(alphas.size());
    for (double a : alphas)
        specs.push_back(StateSpec::spacs(a, opts.eta, 0.0));
    eval_grid(report, model, specs, 4, opts);
    return report;
}

std::string sweep_csv(const SweepReport& report, const std::string& args_comment) {
    std::string out;
    out.reserve(report.rows.size() * 200 + 512);
    out += "# quadnc-sweep v1\n# sweep: " + report.name + "\n";
    out += "# seed: " + std::to_string(report.master_seed) + "\n";
    out += "# threshold: " + format17(report.threshold) + "\n";
    if (!args_comment.empty())
        out += "# args: " + args_comment + "\n";
    out += "family,alpha,nbar,n,xi,eta,phi,seed,events,repeats,"
           "r,r_low,r_high,nonclassical,variance,variance_nonclassical\n";
    for (const SweepRow& row : report.rows) {
        if (row.spec) {
            const StateSpec& s = *row.spec;
            out += family_name(s.family);
            out += "," + format17(s.alpha) + "," + format17(s.nbar) + "," +
                   std::to_string(s.n) + "," + format17(s.xi) + "," + format17(s.eta);
        } else {
            out += "none,,,,,";
        }
        out += "," + format17(row.phi);
        out += "," + std::to_string(row.seed);
        out += "," + std::to_string(row.events);
        out += "," + std::to_string(row.repeats);
        out += "," + format17(row.verdict.r);
        out += "," + format17(row.r_low);
        out += "," + format17(row.r_high);
        out += row.verdict.nonclassical ? ",1" : ",0";
        out += "," + format17(row.verdict.sample_variance);
        out += row.verdict.variance_nonclassical ? ",1\n" : ",0\n";
    }
    return out;
}

void save_sweep(const SweepReport& report, const std::string& path,
                const std::string& args_comment) {
    write_text_file(path, sweep_csv(report, args_comment));
}

} // namespace quadnc
