#ifndef QUADNC_NN_HPP
#define QUADNC_NN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "quadnc/features.hpp"
#include "quadnc/states.hpp"

namespace quadnc {

// Dense feedforward classifier. weights[l] is row-major, shape
// layer_dims[l+1] x layer_dims[l]; hidden layers are relu, output softmax.
struct NetworkModel {
    std::vector<int> layer_dims;
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
    std::vector<std::string> activations;

    // training metadata
    std::uint64_t train_seed = 0;
    int epochs_run = 0;
    double best_val_loss = 0.0;
    std::string args; // command line that produced the model, if any

    int input_dim() const { return layer_dims.front(); }
    int output_dim() const { return layer_dims.back(); }
};

// Parameter-shaped container for gradients.
struct Gradient {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 128;
    int max_epochs = 500;
    int patience = 10;
    std::string optimizer = "adam";
    std::uint64_t master_seed = 0;
    double validation_fraction = 0.2;
    int jobs = 1; // > 1 enables the data-parallel gradient (not bit-stable
                  // against the serial path; see README)
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    bool improved = false;
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
NetworkModel make_network(const std::vector<int>& layer_dims,
                          std::uint64_t seed);

// The 160-64-32-16-2 architecture used throughout.
NetworkModel make_classifier(std::uint64_t seed);

// Softmax class probabilities for one input; input size must match.
std::vector<double> forward(const NetworkModel& model,
                            std::span<const double> input);

// Probability pair (classical, nonclassical) for a histogram input.
std::pair<double, double> forward(const NetworkModel& model,
                                  const FeatureVector& input);

// The network output r: probability assigned to the nonclassical class.
double nonclassical_score(const NetworkModel& model, const FeatureVector& input);

// Mean categorical cross-entropy with a 1e-12 probability floor in the log.
double loss(const NetworkModel& model,
            const std::vector<std::vector<double>>& inputs,
            const std::vector<int>& labels);

// Exact gradient of loss() for every weight and bias.
Gradient gradient(const NetworkModel& model,
                  const std::vector<std::vector<double>>& inputs,
                  const std::vector<int>& labels);

// Mini-batch training with early stopping on validation loss; returns the
// parameters of the best-validation epoch. Shuffles once with the master
// seed, then splits off the validation fraction.
NetworkModel fit(const std::vector<FeatureVector>& features,
                 const std::vector<ClassLabel>& labels,
                 const TrainConfig& config,
                 std::vector<EpochStats>* log = nullptr);

// Text model file (JSON tree, 17 significant digits). Round-trip preserves
// forward() outputs bit-exactly.
void save(const NetworkModel& model, const std::string& path);
NetworkModel load(const std::string& path);

} // namespace quadnc

#endif
