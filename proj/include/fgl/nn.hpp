#pragma once

#include "fgl/dsp.hpp"
#include "fgl/tensor.hpp"
#include "fgl/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace fgl::nn {

// Architecture: conv_blocks x (conv 13 x kernel_w, filters channels, ReLU),
// then one fully connected layer to num_classes logits. Convolutions are
// stride 1 with "same" zero padding, so the spatial grid is preserved all
// the way to the head.
struct NetworkSpec {
    int input_h = 64;
    int input_w = 8;
    int input_c = 2;
    int conv_blocks = 2;
    int kernel_h = 13;
    int kernel_w = 2;
    int filters = 16;
    int num_classes = 3;

    static NetworkSpec for_mode(Mode m);
    void validate() const;
    std::size_t flat_features() const
    {
        return static_cast<std::size_t>(input_h) * input_w * filters;
    }
};

struct TrainConfig {
    double learning_rate = 1e-3;
    int batch_size = 64;
    int epochs = 30;
    std::uint64_t seed = 0;
    bool shuffle = true;

    void validate() const;
};

struct Metrics {
    double accuracy = 0.0;
    double loss = 0.0;
    std::array<std::array<int, 3>, 3> confusion{}; // [true][predicted]
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;
    double val_acc = 0.0;
};

// Layer primitives. All tensors are [H][W][C] row-major; kernels are
// [kh][kw][C_in][C_out]. Cross-correlation with "same" zero padding:
//   out[h,w,o] = bias[o] + sum_{i,j,c} in[h+i-kh/2, w+j-kw/2, c] * K[i,j,c,o]
// (integer division in the offsets, so even kernel sizes pad one short on
// the high side). Every op validates shapes and rejects non-finite output.
Tensor conv2d_forward(const Tensor& input, const Tensor& kernels, const Tensor& bias);

struct ConvGrads {
    Tensor input;
    Tensor kernels;
    Tensor bias;
};
ConvGrads conv2d_backward(const Tensor& grad_out, const Tensor& input, const Tensor& kernels);

Tensor relu(const Tensor& x);
// Gradient passes where x > 0 and is zero at x <= 0.
Tensor relu_backward(const Tensor& grad, const Tensor& x);

// logits = W^T x + b with W stored [n_in][n_out].
Tensor fc_forward(const Tensor& x, const Tensor& weights, const Tensor& bias);
struct FcGrads {
    Tensor input;
    Tensor weights;
    Tensor bias;
};
FcGrads fc_backward(const Tensor& grad_out, const Tensor& x, const Tensor& weights);

// Numerically stabilized fused softmax + cross-entropy.
struct SoftmaxResult {
    double loss = 0.0;
    std::vector<double> probs;
    std::vector<double> grad_logits; // probs - onehot(label)
};
SoftmaxResult softmax_cross_entropy(const Tensor& logits, int label);

// p <- p - lr * g. Throws NumericError on non-finite gradients.
void sgd_step(Tensor& params, const Tensor& grads, double lr);

// The model itself: parameter tensors in a fixed order.
struct Cnn {
    NetworkSpec spec;
    std::vector<Tensor> conv_kernels; // per block, [kh][kw][C_in][filters]
    std::vector<Tensor> conv_biases;  // per block, [filters]
    Tensor fc_weights;                // [flat_features][num_classes]
    Tensor fc_bias;                   // [num_classes]

    // He-style fan-in scaled gaussian weights, zero biases, seeded.
    static Cnn init(const NetworkSpec& spec, std::uint64_t seed);

    Tensor forward(const Tensor& image) const; // logits
    int predict(const Tensor& image) const;
};

struct TrainResult {
    Cnn model; // parameters of the best-validation-accuracy epoch
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_val_accuracy = 0.0;
};

// Mini-batch SGD. Deterministic for a given (seed, data, config): seeded
// init, seeded per-epoch shuffle, fixed gradient accumulation order.
// The validation set must be non-empty and contain Human-variant samples
// only; sterile data may appear in training only.
TrainResult train(const NetworkSpec& spec,
                  const std::vector<dsp::ProcessedSample>& train_set,
                  const std::vector<dsp::ProcessedSample>& val_set,
                  const TrainConfig& cfg);

Metrics evaluate(const Cnn& model, const std::vector<dsp::ProcessedSample>& dataset);

// Central finite difference d loss / d theta for gradient tests:
// (f(t+eps) - f(t-eps)) / (2 eps), evaluated elementwise on `param`.
Tensor numeric_gradient(const std::function<double()>& loss,
                        Tensor& param, double eps = 1e-5);

} // namespace fgl::nn
