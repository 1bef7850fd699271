#include "latentry/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "latentry/errors.hpp"
#include "latentry/rng.hpp"

namespace latentry {

namespace {

constexpr std::size_t kIn = kModelInputDim; // 8
constexpr std::size_t kH = kHiddenDim;      // 16
constexpr std::size_t kOut = kOutputDim;    // 2

struct ForwardCache {
    std::array<double, kH> z1; // pre-activation, layer 1
    std::array<double, kH> h1;
    std::array<double, kH> z2;
    std::array<double, kH> h2;
    std::array<double, kOut> y;
};

ForwardCache forward_cached(const ModelParams& p, std::span<const double> x) {
    ForwardCache c;
    for (std::size_t k = 0; k < kH; ++k) {
        double a = p.b1[k];
        for (std::size_t i = 0; i < kIn; ++i) a += p.w1[k * kIn + i] * x[i];
        c.z1[k] = a;
        c.h1[k] = a > 0.0 ? a : 0.0;
    }
    for (std::size_t k = 0; k < kH; ++k) {
        double a = p.b2[k];
        for (std::size_t j = 0; j < kH; ++j) a += p.w2[k * kH + j] * c.h1[j];
        c.z2[k] = a;
        c.h2[k] = a > 0.0 ? a : 0.0;
    }
    for (std::size_t o = 0; o < kOut; ++o) {
        double a = p.b3[o];
        for (std::size_t j = 0; j < kH; ++j) a += p.w3[o * kH + j] * c.h2[j];
        c.y[o] = a;
    }
    return c;
}

void accumulate_pair_gradient(const ModelParams& p, const TrainingPair& pair,
                              double inv_batch, Gradients& g) {
    const std::array<double, kIn> x = assemble_input(pair);
    const ForwardCache c = forward_cached(p, x);
    const double target[kOut] = {pair.target_pc1, pair.target_pc2};

    // dL/dy for L = mean over batch of ||y - t||^2.
    std::array<double, kOut> gy;
    for (std::size_t o = 0; o < kOut; ++o)
        gy[o] = 2.0 * (c.y[o] - target[o]) * inv_batch;

    std::array<double, kH> gh2{};
    for (std::size_t o = 0; o < kOut; ++o) {
        g.b3[o] += gy[o];
        for (std::size_t j = 0; j < kH; ++j) {
            g.w3[o * kH + j] += gy[o] * c.h2[j];
            gh2[j] += p.w3[o * kH + j] * gy[o];
        }
    }
    std::array<double, kH> gz2;
    for (std::size_t j = 0; j < kH; ++j) gz2[j] = c.z2[j] > 0.0 ? gh2[j] : 0.0;

    std::array<double, kH> gh1{};
    for (std::size_t k = 0; k < kH; ++k) {
        g.b2[k] += gz2[k];
        for (std::size_t j = 0; j < kH; ++j) {
            g.w2[k * kH + j] += gz2[k] * c.h1[j];
            gh1[j] += p.w2[k * kH + j] * gz2[k];
        }
    }
    std::array<double, kH> gz1;
    for (std::size_t k = 0; k < kH; ++k) gz1[k] = c.z1[k] > 0.0 ? gh1[k] : 0.0;

    for (std::size_t k = 0; k < kH; ++k) {
        g.b1[k] += gz1[k];
        for (std::size_t i = 0; i < kIn; ++i) g.w1[k * kIn + i] += gz1[k] * x[i];
    }
}

} // namespace

ModelParams ModelParams::zeros() {
    ModelParams p;
    p.w1.assign(kH * kIn, 0.0);
    p.b1.assign(kH, 0.0);
    p.w2.assign(kH * kH, 0.0);
    p.b2.assign(kH, 0.0);
    p.w3.assign(kOut * kH, 0.0);
    p.b3.assign(kOut, 0.0);
    return p;
}

AdamState AdamState::zeros(double lr) {
    AdamState s;
    s.m = ModelParams::zeros();
    s.v = ModelParams::zeros();
    s.lr = lr;
    return s;
}

ModelParams init_params(std::uint64_t seed) {
    ModelParams p = ModelParams::zeros();
    SplitMix64 rng(seed);
    auto fill = [&](std::vector<double>& w, std::size_t fan_in,
                    std::size_t fan_out) {
        const double bound =
            std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        for (double& v : w) v = rng.uniform(-bound, bound);
    };
    // Fixed draw order: w1, w2, w3 (row-major each); biases stay zero.
    fill(p.w1, kIn, kH);
    fill(p.w2, kH, kH);
    fill(p.w3, kH, kOut);
    return p;
}

std::array<double, kOutputDim> forward(const ModelParams& p,
                                       std::span<const double> x) {
    return forward_cached(p, x).y;
}

double loss(const ModelParams& p, std::span<const TrainingPair> pairs) {
    if (pairs.empty()) throw EmptyBatch("loss over an empty batch");
    double total = 0.0;
    for (const TrainingPair& pair : pairs) {
        const auto x = assemble_input(pair);
        const auto y = forward_cached(p, x).y;
        const double d0 = y[0] - pair.target_pc1;
        const double d1 = y[1] - pair.target_pc2;
        total += d0 * d0 + d1 * d1;
    }
    return total / static_cast<double>(pairs.size());
}

Gradients backward(const ModelParams& p, std::span<const TrainingPair> pairs) {
    if (pairs.empty()) throw EmptyBatch("gradient over an empty batch");
    Gradients g = ModelParams::zeros();
    const double inv = 1.0 / static_cast<double>(pairs.size());
    for (const TrainingPair& pair : pairs) accumulate_pair_gradient(p, pair, inv, g);
    return g;
}

void adam_step(ModelParams& p, const Gradients& g, AdamState& s) {
    s.step_count += 1;
    const double t = static_cast<double>(s.step_count);
    const double bc1 = 1.0 - std::pow(s.beta1, t);
    const double bc2 = 1.0 - std::pow(s.beta2, t);

    auto update = [&](std::vector<double>& theta, const std::vector<double>& grad,
                      std::vector<double>& m, std::vector<double>& v) {
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
            v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            theta[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
        }
    };
    update(p.w1, g.w1, s.m.w1, s.v.w1);
    update(p.b1, g.b1, s.m.b1, s.v.b1);
    update(p.w2, g.w2, s.m.w2, s.v.w2);
    update(p.b2, g.b2, s.m.b2, s.v.b2);
    update(p.w3, g.w3, s.m.w3, s.v.w3);
    update(p.b3, g.b3, s.m.b3, s.v.b3);
}

TrainResult train(std::vector<TrainingPair> pairs, const TrainConfig& cfg) {
    if (pairs.empty()) throw EmptyBatch("training requires at least one pair");

    // Canonical batch order makes the summed gradient, and therefore the
    // whole run, independent of the caller's pair order.
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const TrainingPair& a, const TrainingPair& b) {
                         if (a.condition != b.condition)
                             return static_cast<int>(a.condition) <
                                    static_cast<int>(b.condition);
                         return a.pair_index < b.pair_index;
                     });

    TrainResult res;
    res.params = init_params(cfg.seed);
    res.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));
    AdamState state = AdamState::zeros(cfg.lr);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const double l = loss(res.params, pairs);
        if (!std::isfinite(l))
            throw DivergedLoss("non-finite loss at epoch " + std::to_string(epoch));
        res.loss_history.push_back(l);
        const Gradients g = backward(res.params, pairs);
        adam_step(res.params, g, state);
    }
    return res;
}

std::vector<LatentPoint> predict_m2(const ModelParams& p,
                                    const std::vector<LatentPoint>& points,
                                    ConditionId c) {
    std::vector<LatentPoint> out;
    out.reserve(points.size());
    for (const LatentPoint& pt : points) {
        if (pt.session != SessionId::M1)
            throw SessionMismatch("predict_m2 expects M1 points");
        if (pt.condition != c)
            throw ConditionMismatch("predict_m2 input of wrong condition");
        const auto x = assemble_input(pt, c);
        const auto y = forward(p, x);
        out.push_back(LatentPoint{y[0], y[1], c, SessionId::M2});
    }
    return out;
}

std::string ModelParams::to_json(std::uint64_t seed, int epochs, double lr) const {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto arr = [&](const std::vector<double>& v) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += num(v[i]);
        }
        return s + "]";
    };
    os << "{\n  \"schema_version\": 1,\n  \"seed\": " << seed
       << ",\n  \"epochs\": " << epochs << ",\n  \"lr\": " << num(lr)
       << ",\n  \"w1\": " << arr(w1) << ",\n  \"b1\": " << arr(b1)
       << ",\n  \"w2\": " << arr(w2) << ",\n  \"b2\": " << arr(b2)
       << ",\n  \"w3\": " << arr(w3) << ",\n  \"b3\": " << arr(b3) << "\n}\n";
    return os.str();
}

} // namespace latentry
