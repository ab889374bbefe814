#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sozloc/image.hpp"

namespace sozloc {

// Three 3x3 same-padded conv layers with 2x2 max pooling, one hidden dense
// layer with dropout, then a sigmoid (binary) or softmax (n_classes) head.
struct NetworkConfig {
    int input_h = 270;
    int input_w = 470;
    int conv_filters[3] = {64, 64, 256};
    int dense_units = 704;
    double dropout = 0.33;
    double learning_rate = 1e-4;
    int n_classes = 1;  // 1 = binary sigmoid head, >1 = softmax head
};

struct TrainConfig {
    int max_epochs = 60;
    int batch_size = 32;
    int patience = 5;
    double val_fraction = 0.2;
    std::uint64_t seed = 0;
    std::vector<double> class_weights;  // empty = unweighted
};

struct Sample {
    std::vector<double> chw;  // 3 x H x W, pixel values scaled to [0,1]
    int label = 0;            // 0/1 binary, or class index
};

struct EpochLog {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainingLog {
    std::vector<EpochLog> epochs;
    int best_epoch = -1;
    double best_val_loss = 0.0;
};

class NoiseNet {
  public:
    NoiseNet() = default;
    // He-uniform weights, zero biases; deterministic per seed.
    NoiseNet(const NetworkConfig& cfg, std::uint64_t seed);

    const NetworkConfig& config() const { return cfg_; }
    std::size_t parameter_count() const;

    // Class probabilities: a 1-vector P(positive) for the binary head, or a
    // distribution over n_classes. Dropout is inference-disabled.
    std::vector<double> forward(const std::vector<double>& chw) const;

    // Mean loss over the batch: BCE for the binary head, (optionally class
    // weighted) cross entropy otherwise.
    double batch_loss(const std::vector<const Sample*>& batch,
                      const std::vector<double>& class_weights = {}) const;

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    // Accumulates d(mean batch loss)/d(params) into grad (resized/zeroed
    // inside) and returns the loss. Dropout active when a dropout rng is
    // provided.
    double batch_gradient(const std::vector<const Sample*>& batch, std::vector<double>& grad,
                          const std::vector<double>& class_weights, std::uint64_t* dropout_state) const;

    void save(const std::string& path) const;
    static NoiseNet load(const std::string& path);

    static std::vector<double> to_chw(const Image& img, int target_h, int target_w);

    struct Shapes;  // tensor layout bookkeeping

  private:
    NetworkConfig cfg_;
    std::vector<double> params_;
};

// Adam + binary cross entropy; stratified validation split; early stopping on
// validation loss with the best-epoch snapshot returned.
NoiseNet train_binary(const std::vector<Sample>& data, const NetworkConfig& net_cfg,
                      const TrainConfig& train_cfg, TrainingLog* log = nullptr);

// Cost-sensitive 3-class variant: categorical cross entropy weighted by
// inverse class frequency unless explicit weights are given.
NoiseNet train_multiclass_baseline(const std::vector<Sample>& data, const NetworkConfig& net_cfg,
                                   const TrainConfig& train_cfg, TrainingLog* log = nullptr);

// Inverse-frequency weights normalized to mean 1.
std::vector<double> inverse_frequency_weights(const std::vector<long>& class_counts);

// Central-difference gradient check over every parameter; returns the max
// relative error. Dropout disabled.
double finite_difference_check(NoiseNet& net, const std::vector<Sample>& samples, double h = 1e-4);

}  // namespace sozloc
