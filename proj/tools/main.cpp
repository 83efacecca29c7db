// quadnc: simulate homodyne quadrature data, train the histogram classifier,
// and run the evaluation sweeps. All outputs are plain text and embed the
// arguments that produced them, so any file can be regenerated exactly
// (serial mode, --jobs 1).

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quadnc/classify.hpp"
#include "quadnc/errors.hpp"
#include "quadnc/features.hpp"
#include "quadnc/io.hpp"
#include "quadnc/nn.hpp"
#include "quadnc/pipeline.hpp"
#include "quadnc/sampler.hpp"
#include "quadnc/states.hpp"

namespace {

using namespace quadnc;

// QUADNC_SEED, when set, wins over any --seed flag.
std::uint64_t effective_seed(std::uint64_t flag_value) {
    const char* env = std::getenv("QUADNC_SEED");
    if (env == nullptr || *env == '\0')
        return flag_value;
    return parse_u64(env, "QUADNC_SEED");
}

std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += format17(v[i]);
    }
    return out;
}

std::string join_longs(const std::vector<long>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            out += ",";
        out += std::to_string(v[i]);
    }
    return out;
}

struct SimulateArgs {
    std::string family;
    double alpha = 0.0;
    double nbar = 0.0;
    int n = 0;
    double xi = 0.0;
    double eta = 1.0;
    double phi = 0.0;
    int count = 0;
    std::uint64_t seed = 0;
    std::string out;
};

StateSpec spec_from_args(const SimulateArgs& a) {
    StateSpec spec;
    spec.family = family_from_name(a.family);
    spec.alpha = a.alpha;
    spec.nbar = a.nbar;
    spec.n = a.n;
    spec.xi = a.xi;
    spec.eta = a.eta;
    spec.phi = a.phi;
    validate(spec);
    return spec;
}

int cmd_simulate(const SimulateArgs& a) {
    const StateSpec spec = spec_from_args(a);
    const SamplerTable table = build_table(spec);
    const QuadratureBatch batch = sample(table, a.count, a.seed);
    save_events(batch, a.out);
    std::cout << "wrote " << a.out << " (" << a.count << " events, family="
              << a.family << ", seed=" << a.seed << ")\n";
    return 0;
}

struct FeaturizeArgs {
    std::string in;
    std::string out;
    int size = 0; // 0 = use the full batch
    std::uint64_t seed = 0;
};

int cmd_featurize(const FeaturizeArgs& a) {
    const QuadratureBatch batch = load_events(a.in);
    const FeatureVector f =
        a.size > 0 ? featurize_subsample(batch, a.size, a.seed) : featurize(batch);

    std::string args = "featurize --in " + a.in + " --out " + a.out;
    if (a.size > 0)
        args += " --size " + std::to_string(a.size) + " --seed " + std::to_string(a.seed);

    std::string out = "# quadnc-features v1\n# args: " + args + "\n";
    char buf[8];
    for (int i = 0; i < kNumBins; ++i) {
        std::snprintf(buf, sizeof buf, "b%03d,", i);
        out += buf;
    }
    out += "kept,dropped\n";
    out += feature_csv_row(f);
    out += "\n";
    write_text_file(a.out, out);
    std::cout << "wrote " << a.out << " (kept=" << f.kept << ", dropped=" << f.dropped
              << ")\n";
    return 0;
}

struct TrainArgs {
    std::string corpus_in;
    std::string out;
    std::string log;
    std::string corpus_out;
    bool ablate_spacs = false;
    bool phase_averaged = false;
    int vectors = 20000;
    int events = 16000;
    double eta = 0.6;
    double phi = 0.0;
    std::uint64_t seed = 0;
    double learning_rate = 1e-3;
    int batch_size = 128;
    int max_epochs = 500;
    int patience = 10;
    double val_fraction = 0.2;
    int jobs = 1;
};

std::string train_args_line(const TrainArgs& a) {
    std::string s = "train --out " + a.out + " --log " + a.log;
    if (!a.corpus_in.empty()) {
        s += " --corpus " + a.corpus_in;
    } else {
        if (a.ablate_spacs)
            s += " --ablate-spacs";
        if (a.phase_averaged)
            s += " --phase-averaged";
        s += " --vectors " + std::to_string(a.vectors);
        s += " --events " + std::to_string(a.events);
        s += " --eta " + format17(a.eta);
        s += " --phi " + format17(a.phi);
    }
    if (!a.corpus_out.empty())
        s += " --corpus-out " + a.corpus_out;
    s += " --seed " + std::to_string(a.seed);
    s += " --learning-rate " + format17(a.learning_rate);
    s += " --batch-size " + std::to_string(a.batch_size);
    s += " --max-epochs " + std::to_string(a.max_epochs);
    s += " --patience " + std::to_string(a.patience);
    s += " --val-fraction " + format17(a.val_fraction);
    s += " --jobs " + std::to_string(a.jobs);
    return s;
}

int cmd_train(TrainArgs a) {
    a.seed = effective_seed(a.seed);
    if (a.log.empty())
        a.log = a.out + ".log";
    const std::string args = train_args_line(a);

    CorpusConfig cfg;
    Corpus corpus;
    if (!a.corpus_in.empty()) {
        LoadedCorpus loaded = load_corpus(a.corpus_in);
        cfg = std::move(loaded.config);
        corpus = std::move(loaded.corpus);
        std::cout << "loaded " << corpus.features.size() << " examples from "
                  << a.corpus_in << "\n";
    } else {
        cfg = default_training_config();
        if (a.ablate_spacs)
            cfg = ablated_config(std::move(cfg), "spacs");
        if (a.phase_averaged)
            cfg = swap_classical_variant(std::move(cfg), true);
        cfg.vectors_per_family = a.vectors;
        cfg.events_per_vector = a.events;
        cfg.eta = a.eta;
        cfg.phi = a.phi;
        cfg.master_seed = a.seed;
        cfg.jobs = a.jobs;
        corpus = generate_corpus(cfg);
        std::cout << "generated " << corpus.features.size() << " examples ("
                  << cfg.families.size() << " families)\n";
    }
    if (!a.corpus_out.empty())
        save_corpus(corpus, cfg, a.corpus_out, args);

    TrainConfig tc;
    tc.learning_rate = a.learning_rate;
    tc.batch_size = a.batch_size;
    tc.max_epochs = a.max_epochs;
    tc.patience = a.patience;
    tc.master_seed = a.seed;
    tc.validation_fraction = a.val_fraction;
    tc.jobs = a.jobs;

    std::vector<EpochStats> stats;
    NetworkModel model = fit(corpus.features, corpus.labels, tc, &stats);
    model.args = args;
    save(model, a.out);

    int best_epoch = 0;
    for (const EpochStats& e : stats)
        if (e.improved)
            best_epoch = e.epoch;

    std::string log = "# quadnc-train-log v1\n";
    log += "# config: " + corpus_config_json(cfg) + "\n";
    log += "# train: {\"learning_rate\":" + format17(tc.learning_rate) +
           ",\"batch_size\":" + std::to_string(tc.batch_size) +
           ",\"max_epochs\":" + std::to_string(tc.max_epochs) +
           ",\"patience\":" + std::to_string(tc.patience) +
           ",\"optimizer\":\"" + tc.optimizer + "\"" +
           ",\"validation_fraction\":" + format17(tc.validation_fraction) +
           ",\"master_seed\":" + std::to_string(tc.master_seed) + "}\n";
    log += "# args: " + args + "\n";
    log += "epoch,train_loss,val_loss,improved\n";
    for (const EpochStats& e : stats) {
        log += std::to_string(e.epoch) + "," + format17(e.train_loss) + "," +
               format17(e.val_loss) + (e.improved ? ",1\n" : ",0\n");
    }
    log += "# best epoch: " + std::to_string(best_epoch) +
           " (val_loss = " + format17(model.best_val_loss) + ")\n";
    write_text_file(a.log, log);

    std::cout << "trained on " << corpus.features.size() << " examples, "
              << model.epochs_run << " epochs, best val loss "
              << format17(model.best_val_loss) << " at epoch " << best_epoch << "\n"
              << "wrote " << a.out << " and " << a.log << "\n";
    return 0;
}

struct PredictArgs {
    std::string model;
    std::string events;
    std::string out;
    double threshold = 0.9;
};

int cmd_predict(const PredictArgs& a) {
    const NetworkModel model = load(a.model);
    const QuadratureBatch batch = load_events(a.events);
    const Verdict v = predict(model, batch, a.threshold);

    std::cout << "r=" << format17(v.r) << " threshold=" << format17(v.threshold)
              << " nonclassical=" << (v.nonclassical ? 1 : 0)
              << " variance=" << format17(v.sample_variance)
              << " variance_nonclassical=" << (v.variance_nonclassical ? 1 : 0)
              << " events=" << batch.values.size() << "\n";

    if (!a.out.empty()) {
        SweepReport report;
        report.name = "predict";
        report.master_seed = batch.seed.value_or(0);
        report.threshold = a.threshold;
        SweepRow row;
        row.spec = batch.spec;
        row.phi = batch.phi;
        row.seed = batch.seed.value_or(0);
        row.events = static_cast<int>(batch.values.size());
        row.repeats = 1;
        row.verdict = v;
        row.r_low = v.r;
        row.r_high = v.r;
        report.rows.push_back(row);
        save_sweep(report, a.out,
                   "predict --model " + a.model + " --events " + a.events +
                       " --threshold " + format17(a.threshold) + " --out " + a.out);
    }
    return 0;
}

struct SweepArgs {
    std::string model;
    std::string out;
    std::uint64_t seed = 0;
    int events = 16000;
    double eta = 0.6;
    double threshold = 0.9;
    int jobs = 1;
    // phase-squeezed
    double xi = 0.5;
    int nbins = 125;
    // grids
    std::vector<double> alphas;
    std::vector<double> phis;
    // sample-size
    std::string nc_events;
    std::string c_events;
    std::vector<long> sizes;
};

std::string sweep_args_line(const std::string& name, const SweepArgs& a) {
    std::string s = "sweep " + name + " --model " + a.model + " --out " + a.out;
    s += " --seed " + std::to_string(a.seed);
    s += " --threshold " + format17(a.threshold);
    s += " --jobs " + std::to_string(a.jobs);
    if (name != "sample-size") {
        s += " --events " + std::to_string(a.events);
        s += " --eta " + format17(a.eta);
    }
    if (name == "phase-squeezed") {
        s += " --xi " + format17(a.xi);
        s += " --nbins " + std::to_string(a.nbins);
    }
    if ((name == "spacs-grid" || name == "cat" || name == "ablation") &&
        !a.alphas.empty())
        s += " --alphas " + join_doubles(a.alphas);
    if ((name == "spacs-grid" || name == "cat") && !a.phis.empty())
        s += " --phis " + join_doubles(a.phis);
    if (name == "sample-size") {
        s += " --nc-events " + a.nc_events;
        s += " --c-events " + a.c_events;
        s += " --sizes " + join_longs(a.sizes);
    }
    return s;
}

int cmd_sweep(const std::string& name, SweepArgs a) {
    a.seed = effective_seed(a.seed);
    const NetworkModel model = load(a.model);
    SweepOptions opts;
    opts.master_seed = a.seed;
    opts.events = a.events;
    opts.eta = a.eta;
    opts.threshold = a.threshold;
    opts.jobs = a.jobs;

    SweepReport report;
    if (name == "families") {
        report = sweep_training_families(model, opts);
    } else if (name == "phase-squeezed") {
        report = sweep_phase_squeezed(model, a.xi, a.nbins, opts);
    } else if (name == "spacs-grid") {
        report = sweep_spacs_grid(model, a.alphas, a.phis, opts);
    } else if (name == "cat") {
        report = sweep_cat(model, a.phis, a.alphas, opts);
    } else if (name == "sample-size") {
        const QuadratureBatch nc = load_events(a.nc_events);
        const QuadratureBatch c = load_events(a.c_events);
        report = sweep_sample_size(model, nc, c, a.sizes, opts);
    } else if (name == "ablation") {
        report = sweep_ablation(model, a.alphas, opts);
    } else {
        throw InternalError("unhandled sweep '" + name + "'");
    }
    save_sweep(report, a.out, sweep_args_line(name, a));
    std::cout << "wrote " << a.out << " (" << report.rows.size() << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"homodyne quadrature simulation and nonclassicality classification"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Draw quadrature events for one state and write an event file");
    simulate->add_option("--family", sim.family, "State family")
        ->required()
        ->check(CLI::IsMember(family_names()));
    simulate->add_option("--alpha", sim.alpha, "Coherent amplitude");
    simulate->add_option("--nbar", sim.nbar, "Thermal mean photon number");
    simulate->add_option("--n", sim.n, "Fock photon number");
    simulate->add_option("--xi", sim.xi, "Squeezing magnitude");
    simulate->add_option("--eta", sim.eta, "Quantum efficiency")->capture_default_str();
    simulate->add_option("--phi", sim.phi, "Quadrature angle (radians)")->capture_default_str();
    simulate->add_option("--count", sim.count, "Number of events")
        ->required()
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out", sim.out, "Output event file")->required();

    FeaturizeArgs feat;
    CLI::App* featurize_cmd = app.add_subcommand(
        "featurize", "Histogram an event file into the 160-bin network input");
    featurize_cmd->add_option("--in", feat.in, "Input event file")->required();
    featurize_cmd->add_option("--out", feat.out, "Output CSV")->required();
    featurize_cmd->add_option("--size", feat.size,
                              "Subsample this many events before binning")
        ->check(CLI::PositiveNumber);
    featurize_cmd->add_option("--seed", feat.seed, "Subsample seed")->capture_default_str();

    TrainArgs tr;
    CLI::App* train_cmd = app.add_subcommand(
        "train", "Generate (or load) a training corpus and fit the classifier");
    CLI::Option* corpus_opt =
        train_cmd->add_option("--corpus", tr.corpus_in, "Train from an existing corpus file");
    train_cmd->add_option("--out", tr.out, "Output model file")->required();
    train_cmd->add_option("--log", tr.log, "Training log path (default <out>.log)");
    train_cmd->add_option("--corpus-out", tr.corpus_out, "Also write the generated corpus");
    train_cmd->add_flag("--ablate-spacs", tr.ablate_spacs, "Drop the SPACS family")
        ->excludes(corpus_opt);
    train_cmd
        ->add_flag("--phase-averaged", tr.phase_averaged,
                   "Use phase-averaged coherent states instead of coherent mixtures")
        ->excludes(corpus_opt);
    train_cmd->add_option("--vectors", tr.vectors, "Histograms per family")->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->excludes(corpus_opt);
    train_cmd->add_option("--events", tr.events, "Events per histogram")->capture_default_str()
        ->check(CLI::PositiveNumber)
        ->excludes(corpus_opt);
    train_cmd->add_option("--eta", tr.eta, "Quantum efficiency")->capture_default_str()->excludes(corpus_opt);
    train_cmd->add_option("--phi", tr.phi, "Quadrature angle")->capture_default_str()->excludes(corpus_opt);
    train_cmd->add_option("--seed", tr.seed, "Master seed")->capture_default_str();
    train_cmd->add_option("--learning-rate", tr.learning_rate, "Adam learning rate")->capture_default_str();
    train_cmd->add_option("--batch-size", tr.batch_size, "Mini-batch size")->capture_default_str()
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--max-epochs", tr.max_epochs, "Epoch cap")->capture_default_str()
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--patience", tr.patience, "Early-stopping patience")->capture_default_str()
        ->check(CLI::PositiveNumber);
    train_cmd->add_option("--val-fraction", tr.val_fraction, "Validation fraction")->capture_default_str();
    train_cmd->add_option("--jobs", tr.jobs, "Worker threads (1 = bit-reproducible)")->capture_default_str()
        ->check(CLI::PositiveNumber);

    PredictArgs pred;
    CLI::App* predict_cmd = app.add_subcommand(
        "predict", "Score one event file with a trained model");
    predict_cmd->add_option("--model", pred.model, "Model file")->required();
    predict_cmd->add_option("--events", pred.events, "Event file")->required();
    predict_cmd->add_option("--threshold", pred.threshold, "Decision threshold")->capture_default_str();
    predict_cmd->add_option("--out", pred.out, "Optional CSV report");

    SweepArgs sw;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Run an evaluation sweep and write a CSV report");
    sweep_cmd->require_subcommand(1);
    sweep_cmd->fallthrough();
    sweep_cmd->add_option("--model", sw.model, "Model file")->required();
    sweep_cmd->add_option("--out", sw.out, "Output CSV")->required();
    sweep_cmd->add_option("--seed", sw.seed, "Master seed")->capture_default_str();
    sweep_cmd->add_option("--events", sw.events, "Events per histogram")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--eta", sw.eta, "Quantum efficiency")->capture_default_str();
    sweep_cmd->add_option("--threshold", sw.threshold, "Decision threshold")->capture_default_str();
    sweep_cmd->add_option("--jobs", sw.jobs, "Worker threads (1 = bit-reproducible)")->capture_default_str()
        ->check(CLI::PositiveNumber);

    sweep_cmd->add_subcommand("families",
                              "All six training families over their parameter grids");
    CLI::App* phase_sweep = sweep_cmd->add_subcommand(
        "phase-squeezed", "Squeezed vacuum over one turn of the quadrature angle");
    phase_sweep->add_option("--xi", sw.xi, "Squeezing magnitude")->capture_default_str();
    phase_sweep->add_option("--nbins", sw.nbins, "Angle bins")->capture_default_str()
        ->check(CLI::Range(2, 1 << 20));
    CLI::App* spacs_sweep =
        sweep_cmd->add_subcommand("spacs-grid", "SPACS over an (alpha, phi) grid");
    spacs_sweep->add_option("--alphas", sw.alphas, "Alpha grid (comma separated)")
        ->delimiter(',');
    spacs_sweep->add_option("--phis", sw.phis, "Phi grid (comma separated)")
        ->delimiter(',');
    CLI::App* cat_sweep =
        sweep_cmd->add_subcommand("cat", "Odd cat states over an alpha grid");
    cat_sweep->add_option("--alphas", sw.alphas, "Alpha grid (comma separated)")
        ->delimiter(',');
    cat_sweep->add_option("--phis", sw.phis, "Phi grid (comma separated)")
        ->delimiter(',');
    CLI::App* size_sweep = sweep_cmd->add_subcommand(
        "sample-size", "Score two fixed batches at increasing subsample sizes");
    size_sweep->add_option("--nc-events", sw.nc_events, "Nonclassical-candidate event file")
        ->required();
    size_sweep->add_option("--c-events", sw.c_events, "Classical-candidate event file")
        ->required();
    size_sweep->add_option("--sizes", sw.sizes, "Subsample sizes, ascending")
        ->required()
        ->delimiter(',');
    CLI::App* ablation_sweep = sweep_cmd->add_subcommand(
        "ablation", "SPACS alpha scan at phi=0 with the variance baseline");
    ablation_sweep->add_option("--alphas", sw.alphas, "Alpha grid (comma separated)")
        ->delimiter(',');

    try {
        app.parse(argc, argv);

        if (app.got_subcommand(simulate)) {
            sim.seed = effective_seed(sim.seed);
            return cmd_simulate(sim);
        }
        if (app.got_subcommand(featurize_cmd)) {
            feat.seed = effective_seed(feat.seed);
            return cmd_featurize(feat);
        }
        if (app.got_subcommand(train_cmd))
            return cmd_train(tr);
        if (app.got_subcommand(predict_cmd))
            return cmd_predict(pred);
        if (app.got_subcommand(sweep_cmd)) {
            for (CLI::App* sub : sweep_cmd->get_subcommands())
                return cmd_sweep(sub->get_name(), sw);
        }
        std::cerr << "error: no command selected\n";
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const quadnc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
}
