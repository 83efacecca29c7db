#include "quadnc/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "quadnc/errors.hpp"
#include "quadnc/rng.hpp"

namespace quadnc {
namespace {

constexpr double kProbFloor = 1e-12;
constexpr int kModelFormatVersion = 1;

void check_dims(const std::vector<int>& dims) {
    if (dims.size() < 2)
        throw ParameterError("a network needs at least an input and an output layer");
    for (int d : dims)
        if (d <= 0)
            throw ParameterError("layer widths must be positive");
}

void check_shapes(const NetworkModel& m) {
    const std::size_t layers = m.layer_dims.size() - 1;
    if (m.weights.size() != layers || m.biases.size() != layers ||
        m.activations.size() != layers)
        throw FormatError("layer count mismatch between dims, weights, biases, activations");
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t rows = static_cast<std::size_t>(m.layer_dims[l + 1]);
        const std::size_t cols = static_cast<std::size_t>(m.layer_dims[l]);
        if (m.weights[l].size() != rows * cols)
            throw FormatError("weight matrix " + std::to_string(l) + " has wrong size");
        if (m.biases[l].size() != rows)
            throw FormatError("bias vector " + std::to_string(l) + " has wrong size");
        const std::string& act = m.activations[l];
        if (act != "relu" && act != "softmax")
            throw FormatError("unknown activation '" + act + "'");
    }
    if (m.activations.back() != "softmax")
        throw FormatError("the output layer must be softmax");
}

void softmax_inplace(std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double& v : z) {
        v = std::exp(v - zmax);
        total += v;
    }
    for (double& v : z)
        v /= total;
}

// acts[0] is the input copy; acts[l+1] the output of layer l.
void forward_store(const NetworkModel& m, std::span<const double> input,
                   std::vector<std::vector<double>>& acts) {
    const std::size_t layers = m.weights.size();
    acts.resize(layers + 1);
    acts[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < layers; ++l) {
        const int rows = m.layer_dims[l + 1];
        const int cols = m.layer_dims[l];
        const std::vector<double>& in = acts[l];
        std::vector<double>& out = acts[l + 1];
        out.assign(static_cast<std::size_t>(rows), 0.0);
        const double* w = m.weights[l].data();
        for (int r = 0; r < rows; ++r) {
            double acc = m.biases[l][static_cast<std::size_t>(r)];
            const double* wr = w + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c)
                acc += wr[c] * in[static_cast<std::size_t>(c)];
            out[static_cast<std::size_t>(r)] = acc;
        }
        if (m.activations[l] == "relu") {
            for (double& v : out)
                v = v > 0.0 ? v : 0.0;
        } else {
            softmax_inplace(out);
        }
    }
}

Gradient zero_like(const NetworkModel& m) {
    Gradient g;
    g.weights.reserve(m.weights.size());
    g.biases.reserve(m.biases.size());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        g.weights.emplace_back(m.weights[l].size(), 0.0);
        g.biases.emplace_back(m.biases[l].size(), 0.0);
    }
    return g;
}

struct Scratch {
    std::vector<std::vector<double>> acts;
    std::vector<double> delta;
    std::vector<double> delta_prev;
};

// Adds one example's contribution (unscaled) to g; returns its cross-entropy.
double accumulate_example(const NetworkModel& m, std::span<const double> input,
                          int label, Gradient& g, Scratch& s) {
    forward_store(m, input, s.acts);
    const std::vector<double>& probs = s.acts.back();
    const double p = probs[static_cast<std::size_t>(label)];
    const double ce = -std::log(std::max(p, kProbFloor));

    // Where the probability floor is active the loss is locally flat, so the
    // example contributes nothing to the gradient.
    s.delta = probs;
    if (p >= kProbFloor) {
        s.delta[static_cast<std::size_t>(label)] -= 1.0;
    } else {
        std::fill(s.delta.begin(), s.delta.end(), 0.0);
    }

    for (std::size_t l = m.weights.size(); l-- > 0;) {
        const int rows = m.layer_dims[l + 1];
        const int cols = m.layer_dims[l];
        const std::vector<double>& in = s.acts[l];
        double* gw = g.weights[l].data();
        for (int r = 0; r < rows; ++r) {
            const double d = s.delta[static_cast<std::size_t>(r)];
            if (d == 0.0)
                continue;
            double* gwr = gw + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c)
                gwr[c] += d * in[static_cast<std::size_t>(c)];
            g.biases[l][static_cast<std::size_t>(r)] += d;
        }
        if (l == 0)
            break;
        s.delta_prev.assign(static_cast<std::size_t>(cols), 0.0);
        const double* w = m.weights[l].data();
        for (int r = 0; r < rows; ++r) {
            const double d = s.delta[static_cast<std::size_t>(r)];
            if (d == 0.0)
                continue;
            const double* wr = w + static_cast<std::size_t>(r) * cols;
            for (int c = 0; c < cols; ++c)
                s.delta_prev[static_cast<std::size_t>(c)] += d * wr[c];
        }
        // relu derivative: 1 where the activation came out positive
        for (int c = 0; c < cols; ++c)
            if (in[static_cast<std::size_t>(c)] <= 0.0)
                s.delta_prev[static_cast<std::size_t>(c)] = 0.0;
        std::swap(s.delta, s.delta_prev);
    }
    return ce;
}

void check_inputs(const NetworkModel& m,
                  const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels) {
    if (inputs.size() != labels.size())
        throw InputError("inputs and labels differ in length");
    if (inputs.empty())
        throw InputError("need at least one example");
    for (const auto& row : inputs)
        if (row.size() != static_cast<std::size_t>(m.input_dim()))
            throw InputError("input width " + std::to_string(row.size()) +
                             " does not match model input dim " +
                             std::to_string(m.input_dim()));
    for (int lab : labels)
        if (lab < 0 || lab >= m.output_dim())
            throw InputError("label out of range for the output layer");
}

void fmt17(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void emit_flat_array(std::string& out, const std::vector<double>& values,
                     const char* indent) {
    out += "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i % 8 == 0) {
            out += "\n";
            out += indent;
        } else {
            out += " ";
        }
        fmt17(out, values[i]);
        if (i + 1 < values.size())
            out += ",";
    }
    out += "\n";
    out += indent;
    out += "]";
}

} // namespace

NetworkModel make_network(const std::vector<int>& layer_dims, std::uint64_t seed) {
    check_dims(layer_dims);
    NetworkModel m;
    m.layer_dims = layer_dims;
    Rng rng(seed);
    const std::size_t layers = layer_dims.size() - 1;
    for (std::size_t l = 0; l < layers; ++l) {
        const std::size_t rows = static_cast<std::size_t>(layer_dims[l + 1]);
        const std::size_t cols = static_cast<std::size_t>(layer_dims[l]);
        const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
        std::vector<double> w(rows * cols);
        for (double& v : w)
            v = rng.uniform(-bound, bound);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(rows, 0.0);
        m.activations.push_back(l + 1 == layers ? "softmax" : "relu");
    }
    return m;
}

NetworkModel make_classifier(std::uint64_t seed) {
    return make_network({kNumBins, 64, 32, 16, 2}, seed);
}

std::vector<double> forward(const NetworkModel& m, std::span<const double> input) {
    check_shapes(m);
    if (input.size() != static_cast<std::size_t>(m.input_dim()))
        throw InputError("input width " + std::to_string(input.size()) +
                         " does not match model input dim " +
                         std::to_string(m.input_dim()));
    std::vector<std::vector<double>> acts;
    forward_store(m, input, acts);
    return acts.back();
}

std::pair<double, double> forward(const NetworkModel& m, const FeatureVector& input) {
    std::vector<double> probs =
        forward(m, std::span<const double>(input.bins.data(), input.bins.size()));
    if (probs.size() != 2)
        throw InputError("histogram classification needs a two-class model");
    return {probs[0], probs[1]};
}

double nonclassical_score(const NetworkModel& m, const FeatureVector& input) {
    return forward(m, input).second;
}

double loss(const NetworkModel& m, const std::vector<std::vector<double>>& inputs,
            const std::vector<int>& labels) {
    check_shapes(m);
    check_inputs(m, inputs, labels);
    double total = 0.0;
    std::vector<std::vector<double>> acts;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        forward_store(m, inputs[i], acts);
        const double p = acts.back()[static_cast<std::size_t>(labels[i])];
        total += -std::log(std::max(p, kProbFloor));
    }
    return total / static_cast<double>(inputs.size());
}

Gradient gradient(const NetworkModel& m,
                  const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels) {
    check_shapes(m);
    check_inputs(m, inputs, labels);
    Gradient g = zero_like(m);
    Scratch scratch;
    for (std::size_t i = 0; i < inputs.size(); ++i)
        accumulate_example(m, inputs[i], labels[i], g, scratch);
    const double scale = 1.0 / static_cast<double>(inputs.size());
    for (auto& layer : g.weights)
        for (double& v : layer)
            v *= scale;
    for (auto& layer : g.biases)
        for (double& v : layer)
            v *= scale;
    return g;
}

namespace {

// Mean loss over a slice of the (index-ordered) dataset.
double mean_loss(const NetworkModel& m, const std::vector<std::vector<double>>& rows,
                 const std::vector<int>& labels, const std::vector<std::size_t>& order,
                 std::size_t lo, std::size_t hi) {
    double total = 0.0;
    std::vector<std::vector<double>> acts;
    for (std::size_t i = lo; i < hi; ++i) {
        const std::size_t k = order[i];
        forward_store(m, rows[k], acts);
        const double p = acts.back()[static_cast<std::size_t>(labels[k])];
        total += -std::log(std::max(p, kProbFloor));
    }
    return total / static_cast<double>(hi - lo);
}

struct AdamState {
    std::vector<std::vector<double>> mw, vw, mb, vb;
    long step = 0;

    explicit AdamState(const NetworkModel& m) {
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            mw.emplace_back(m.weights[l].size(), 0.0);
            vw.emplace_back(m.weights[l].size(), 0.0);
            mb.emplace_back(m.biases[l].size(), 0.0);
            vb.emplace_back(m.biases[l].size(), 0.0);
        }
    }

    void apply(NetworkModel& m, const Gradient& g, double lr) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        ++step;
        const double c1 = 1.0 - std::pow(b1, static_cast<double>(step));
        const double c2 = 1.0 - std::pow(b2, static_cast<double>(step));
        for (std::size_t l = 0; l < m.weights.size(); ++l) {
            auto update = [&](std::vector<double>& p, std::vector<double>& mm,
                              std::vector<double>& vv, const std::vector<double>& gg) {
                for (std::size_t i = 0; i < p.size(); ++i) {
                    mm[i] = b1 * mm[i] + (1.0 - b1) * gg[i];
                    vv[i] = b2 * vv[i] + (1.0 - b2) * gg[i] * gg[i];
                    const double mh = mm[i] / c1;
                    const double vh = vv[i] / c2;
                    p[i] -= lr * mh / (std::sqrt(vh) + eps);
                }
            };
            update(m.weights[l], mw[l], vw[l], g.weights[l]);
            update(m.biases[l], mb[l], vb[l], g.biases[l]);
        }
    }
};

// Gradient sum over order[lo,hi); serial, or chunked across `jobs` threads
// with a fixed-order reduction. Returns the summed (unscaled) CE as well.
double batch_gradient(const NetworkModel& m, const std::vector<std::vector<double>>& rows,
                      const std::vector<int>& labels, const std::vector<std::size_t>& order,
                      std::size_t lo, std::size_t hi, int jobs, Gradient& g) {
    const std::size_t count = hi - lo;
    if (jobs <= 1 || count < 64) {
        Scratch scratch;
        double ce = 0.0;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::size_t k = order[i];
            ce += accumulate_example(m, rows[k], labels[k], g, scratch);
        }
        return ce;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
    std::vector<Gradient> parts;
    parts.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t)
        parts.push_back(zero_like(m));
    std::vector<double> part_ce(nthreads, 0.0);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t) {
        const std::size_t a = lo + count * t / nthreads;
        const std::size_t b = lo + count * (t + 1) / nthreads;
        pool.emplace_back([&, t, a, b] {
            Scratch scratch;
            double ce = 0.0;
            for (std::size_t i = a; i < b; ++i) {
                const std::size_t k = order[i];
                ce += accumulate_example(m, rows[k], labels[k], parts[t], scratch);
            }
            part_ce[t] = ce;
        });
    }
    for (std::thread& th : pool)
        th.join();
    double ce = 0.0;
    for (std::size_t t = 0; t < nthreads; ++t) {
        ce += part_ce[t];
        for (std::size_t l = 0; l < g.weights.size(); ++l) {
            for (std::size_t i = 0; i < g.weights[l].size(); ++i)
                g.weights[l][i] += parts[t].weights[l][i];
            for (std::size_t i = 0; i < g.biases[l].size(); ++i)
                g.biases[l][i] += parts[t].biases[l][i];
        }
    }
    return ce;
}

} // namespace

NetworkModel fit(const std::vector<FeatureVector>& features,
                 const std::vector<ClassLabel>& labels, const TrainConfig& config,
                 std::vector<EpochStats>* log) {
    if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate))
        throw ConfigError("learning rate must be a finite non-negative number");
    if (config.batch_size < 1)
        throw ConfigError("batch size must be at least 1");
    if (config.max_epochs < 1)
        throw ConfigError("max epochs must be at least 1");
    if (config.patience < 1)
        throw ConfigError("patience must be at least 1");
    if (config.optimizer != "adam")
        throw ConfigError("unknown optimizer '" + config.optimizer + "' (supported: adam)");
    if (!(config.validation_fraction > 0.0 && config.validation_fraction < 1.0))
        throw ConfigError("validation fraction must lie strictly between 0 and 1");
    if (config.jobs < 1)
        throw ConfigError("jobs must be at least 1");

    if (features.size() != labels.size())
        throw InputError("features and labels differ in length");
    const std::size_t n = features.size();
    if (n < 100)
        throw TrainingError("training needs at least 100 examples, got " +
                            std::to_string(n));
    bool has_classical = false, has_nonclassical = false;
    for (ClassLabel lab : labels) {
        if (lab == ClassLabel::Classical)
            has_classical = true;
        else
            has_nonclassical = true;
    }
    if (!has_classical || !has_nonclassical)
        throw TrainingError("training data must contain both classes");

    std::vector<std::vector<double>> rows(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        rows[i].assign(features[i].bins.begin(), features[i].bins.end());
        y[i] = static_cast<int>(labels[i]);
    }

    // One shuffle up front; batches then walk the fixed order every epoch.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    Rng shuffle_rng(derive_seed(config.master_seed, 0));
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t j = shuffle_rng.next_below(i + 1);
        std::swap(order[i], order[j]);
    }
    std::size_t n_val = static_cast<std::size_t>(
        std::lround(static_cast<double>(n) * config.validation_fraction));
    n_val = std::min(std::max<std::size_t>(n_val, 1), n - 1);
    const std::size_t n_train = n - n_val;

    NetworkModel model = make_classifier(derive_seed(config.master_seed, 1));
    model.train_seed = config.master_seed;
    AdamState adam(model);

    NetworkModel best = model;
    double best_val = std::numeric_limits<double>::infinity();
    int stale = 0;
    int epochs_run = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        double epoch_ce = 0.0;
        for (std::size_t lo = 0; lo < n_train; lo += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t hi = std::min(n_train, lo + static_cast<std::size_t>(config.batch_size));
            Gradient g = zero_like(model);
            const double ce = batch_gradient(model, rows, y, order, lo, hi, config.jobs, g);
            epoch_ce += ce;
            const double scale = 1.0 / static_cast<double>(hi - lo);
            for (auto& layer : g.weights)
                for (double& v : layer)
                    v *= scale;
            for (auto& layer : g.biases)
                for (double& v : layer)
                    v *= scale;
            adam.apply(model, g, config.learning_rate);
        }
        const double train_loss = epoch_ce / static_cast<double>(n_train);
        const double val_loss = mean_loss(model, rows, y, order, n_train, n);
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss))
            throw TrainingError("loss became non-finite at epoch " + std::to_string(epoch));
        ++epochs_run;
        const bool improved = val_loss < best_val;
        if (log)
            log->push_back({epoch, train_loss, val_loss, improved});
        if (improved) {
            best_val = val_loss;
            best.weights = model.weights;
            best.biases = model.biases;
            stale = 0;
        } else {
            ++stale;
            if (stale >= config.patience)
                break;
        }
    }

    best.layer_dims = model.layer_dims;
    best.activations = model.activations;
    best.train_seed = config.master_seed;
    best.epochs_run = epochs_run;
    best.best_val_loss = best_val;
    return best;
}

void save(const NetworkModel& m, const std::string& path) {
    check_shapes(m);
    for (const auto& layer : m.weights)
        for (double v : layer)
            if (!std::isfinite(v))
                throw InternalError("refusing to save non-finite weights");
    for (const auto& layer : m.biases)
        for (double v : layer)
            if (!std::isfinite(v))
                throw InternalError("refusing to save non-finite biases");

    std::string out;
    out.reserve(1 << 20);
    out += "{\n  \"format\": \"quadnc-model\",\n  \"version\": ";
    out += std::to_string(kModelFormatVersion);
    out += ",\n  \"layer_dims\": [";
    for (std::size_t i = 0; i < m.layer_dims.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(m.layer_dims[i]);
    }
    out += "],\n  \"activations\": [";
    for (std::size_t i = 0; i < m.activations.size(); ++i) {
        if (i)
            out += ", ";
        out += "\"" + m.activations[i] + "\"";
    }
    out += "],\n  \"train_seed\": ";
    out += std::to_string(m.train_seed);
    out += ",\n  \"epochs_run\": ";
    out += std::to_string(m.epochs_run);
    out += ",\n  \"best_val_loss\": ";
    fmt17(out, std::isfinite(m.best_val_loss) ? m.best_val_loss : 0.0);
    out += ",\n  \"args\": \"";
    for (char c : m.args) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    out += "\",\n  \"weights\": [\n";
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        out += "    ";
        emit_flat_array(out, m.weights[l], "      ");
        out += l + 1 < m.weights.size() ? ",\n" : "\n";
    }
    out += "  ],\n  \"biases\": [\n";
    for (std::size_t l = 0; l < m.biases.size(); ++l) {
        out += "    ";
        emit_flat_array(out, m.biases[l], "      ");
        out += l + 1 < m.biases.size() ? ",\n" : "\n";
    }
    out += "  ]\n}\n";

    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    f.flush();
    if (!f)
        throw IoError("short write to '" + path + "'");
}

NetworkModel load(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError("'" + path + "' is not a valid model file: " + e.what());
    }

    try {
        if (!j.contains("format") || j.at("format").get<std::string>() != "quadnc-model")
            throw FormatError("'" + path + "' is not a quadnc model file");
        const int version = j.at("version").get<int>();
        if (version != kModelFormatVersion)
            throw FormatError("'" + path + "' uses model format version " +
                              std::to_string(version) + "; this build reads version " +
                              std::to_string(kModelFormatVersion));
        NetworkModel m;
        m.layer_dims = j.at("layer_dims").get<std::vector<int>>();
        m.activations = j.at("activations").get<std::vector<std::string>>();
        m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
        m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
        m.train_seed = j.value("train_seed", std::uint64_t{0});
        m.epochs_run = j.value("epochs_run", 0);
        m.best_val_loss = j.value("best_val_loss", 0.0);
        m.args = j.value("args", std::string{});
        check_dims(m.layer_dims);
        check_shapes(m);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("'" + path + "' is missing required model fields: " + e.what());
    }
}

} // namespace quadnc
