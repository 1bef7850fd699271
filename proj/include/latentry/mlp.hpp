#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "latentry/pairing.hpp"
#include "latentry/types.hpp"

namespace latentry {

inline constexpr std::size_t kHiddenDim = 16;
inline constexpr std::size_t kOutputDim = 2;

// Weights and biases of the 8 -> 16 -> 16 -> 2 ReLU network. Matrices are
// row-major, w[out * in_dim + in]. The same shape doubles as the gradient
// container.
struct ModelParams {
    std::vector<double> w1; // 16 x 8
    std::vector<double> b1; // 16
    std::vector<double> w2; // 16 x 16
    std::vector<double> b2; // 16
    std::vector<double> w3; // 2 x 16
    std::vector<double> b3; // 2

    static ModelParams zeros();

    std::string to_json(std::uint64_t seed, int epochs, double lr) const;
};

using Gradients = ModelParams;

// Adam accumulators plus hyperparameters. step_count increments once per
// update of the full parameter set.
struct AdamState {
    std::size_t step_count = 0;
    ModelParams m;
    ModelParams v;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    static AdamState zeros(double lr = 1e-3);
};

struct TrainConfig {
    int epochs = 800;
    std::uint64_t seed = 42;
    double lr = 1e-3;
    // Updates are always full-batch; minibatching is out of scope.
};

struct TrainResult {
    ModelParams params;
    std::vector<double> loss_history; // one entry per epoch, pre-update loss
};

// Fan-based uniform initialization, U(-sqrt(6/(fan_in+fan_out)), +...), with
// a SplitMix64 stream and a fixed draw order (w1 row-major, then w2, then
// w3); biases start at zero. Bit-identical for equal seeds on any platform.
ModelParams init_params(std::uint64_t seed);

std::array<double, kOutputDim> forward(const ModelParams& p,
                                       std::span<const double> x);

// Mean over pairs of the squared Euclidean error (sum over the 2 output
// coordinates).
double loss(const ModelParams& p, std::span<const TrainingPair> pairs);

// Exact analytic gradient of loss(). ReLU subgradient at 0 is taken as 0.
Gradients backward(const ModelParams& p, std::span<const TrainingPair> pairs);

// Standard Adam update with bias correction; mutates params and state.
void adam_step(ModelParams& p, const Gradients& g, AdamState& s);

// Full-batch training for cfg.epochs steps from init_params(cfg.seed).
// Pairs are canonicalized to (condition, pair_index) order internally, so
// the result is invariant to input order. Throws DivergedLoss if the loss
// stops being finite.
TrainResult train(std::vector<TrainingPair> pairs, const TrainConfig& cfg);

// Runs the network on M1 points of condition c; outputs carry session M2.
std::vector<LatentPoint> predict_m2(const ModelParams& p,
                                    const std::vector<LatentPoint>& points,
                                    ConditionId c);

} // namespace latentry
