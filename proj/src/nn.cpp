#include "fgl/nn.hpp"

#include "fgl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace fgl::nn {

namespace {

void require(bool ok, const char* msg)
{
    if (!ok) throw std::invalid_argument(msg);
}

void check_finite(const Tensor& t, const char* where)
{
    for (double v : t.data)
        if (!std::isfinite(v)) throw NumericError(std::string("nn: non-finite value in ") + where);
}

// Gradients of one batch, in model parameter order.
struct GradBuf {
    std::vector<Tensor> conv_kernels;
    std::vector<Tensor> conv_biases;
    Tensor fc_weights;
    Tensor fc_bias;
    double loss = 0.0;
    long long correct = 0;

    static GradBuf zeros_like(const Cnn& m)
    {
        GradBuf g;
        for (const auto& k : m.conv_kernels) g.conv_kernels.emplace_back(k.shape);
        for (const auto& b : m.conv_biases) g.conv_biases.emplace_back(b.shape);
        g.fc_weights = Tensor(m.fc_weights.shape);
        g.fc_bias = Tensor(m.fc_bias.shape);
        return g;
    }

    void reset()
    {
        for (auto& t : conv_kernels) std::fill(t.data.begin(), t.data.end(), 0.0);
        for (auto& t : conv_biases) std::fill(t.data.begin(), t.data.end(), 0.0);
        std::fill(fc_weights.data.begin(), fc_weights.data.end(), 0.0);
        std::fill(fc_bias.data.begin(), fc_bias.data.end(), 0.0);
        loss = 0.0;
        correct = 0;
    }

    void add(const GradBuf& o)
    {
        for (std::size_t b = 0; b < conv_kernels.size(); ++b) {
            for (std::size_t i = 0; i < conv_kernels[b].size(); ++i)
                conv_kernels[b][i] += o.conv_kernels[b][i];
            for (std::size_t i = 0; i < conv_biases[b].size(); ++i)
                conv_biases[b][i] += o.conv_biases[b][i];
        }
        for (std::size_t i = 0; i < fc_weights.size(); ++i) fc_weights[i] += o.fc_weights[i];
        for (std::size_t i = 0; i < fc_bias.size(); ++i) fc_bias[i] += o.fc_bias[i];
        loss += o.loss;
        correct += o.correct;
    }
};

// Fixed number of accumulation chunks. Each chunk sums its samples in
// order and chunks are merged in index order, so batch gradients do not
// depend on how many threads happen to run.
constexpr int kChunks = 8;

struct Activations {
    std::vector<Tensor> pre;  // conv outputs
    std::vector<Tensor> post; // relu outputs
    Tensor logits;
};

Activations forward_cached(const Cnn& m, const Tensor& image)
{
    Activations a;
    const Tensor* cur = &image;
    for (std::size_t b = 0; b < m.conv_kernels.size(); ++b) {
        a.pre.push_back(conv2d_forward(*cur, m.conv_kernels[b], m.conv_biases[b]));
        a.post.push_back(relu(a.pre.back()));
        cur = &a.post.back();
    }
    a.logits = fc_forward(*cur, m.fc_weights, m.fc_bias);
    return a;
}

// Forward, loss, backward for one sample; gradients are added onto `out`.
void accumulate_sample(const Cnn& m, const dsp::ProcessedSample& s, GradBuf& out)
{
    Activations a = forward_cached(m, s.image);
    const int label = static_cast<int>(s.label);
    SoftmaxResult sm = softmax_cross_entropy(a.logits, label);
    out.loss += sm.loss;

    int pred = 0;
    for (std::size_t i = 1; i < a.logits.size(); ++i)
        if (a.logits[i] > a.logits[pred]) pred = static_cast<int>(i);
    if (pred == label) ++out.correct;

    Tensor grad_logits({static_cast<int>(sm.grad_logits.size())});
    grad_logits.data = sm.grad_logits;

    const Tensor& last = m.conv_kernels.empty() ? s.image : a.post.back();
    FcGrads fg = fc_backward(grad_logits, last, m.fc_weights);
    for (std::size_t i = 0; i < fg.weights.size(); ++i) out.fc_weights[i] += fg.weights[i];
    for (std::size_t i = 0; i < fg.bias.size(); ++i) out.fc_bias[i] += fg.bias[i];

    Tensor grad = std::move(fg.input);
    for (int b = static_cast<int>(m.conv_kernels.size()) - 1; b >= 0; --b) {
        grad.shape = a.pre[static_cast<std::size_t>(b)].shape; // un-flatten
        grad = relu_backward(grad, a.pre[static_cast<std::size_t>(b)]);
        const Tensor& input = b == 0 ? s.image : a.post[static_cast<std::size_t>(b - 1)];
        ConvGrads cg = conv2d_backward(grad, input, m.conv_kernels[static_cast<std::size_t>(b)]);
        auto& gk = out.conv_kernels[static_cast<std::size_t>(b)];
        auto& gb = out.conv_biases[static_cast<std::size_t>(b)];
        for (std::size_t i = 0; i < gk.size(); ++i) gk[i] += cg.kernels[i];
        for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += cg.bias[i];
        grad = std::move(cg.input);
    }
}

void check_sample_shape(const NetworkSpec& spec, const dsp::ProcessedSample& s, const char* which)
{
    if (s.image.shape != std::vector<int>{spec.input_h, spec.input_w, spec.input_c})
        throw std::invalid_argument(std::string("nn: sample shape does not match the network input in ") + which);
    const int label = static_cast<int>(s.label);
    if (label < 0 || label >= spec.num_classes)
        throw std::invalid_argument("nn: label out of range");
}

Metrics evaluate_impl(const Cnn& model, const std::vector<dsp::ProcessedSample>& dataset)
{
    const long long n = static_cast<long long>(dataset.size());
    std::array<Metrics, kChunks> parts{};

#pragma omp parallel for schedule(static)
    for (int c = 0; c < kChunks; ++c) {
        const long long lo = n * c / kChunks;
        const long long hi = n * (c + 1) / kChunks;
        Metrics& m = parts[static_cast<std::size_t>(c)];
        for (long long i = lo; i < hi; ++i) {
            const auto& s = dataset[static_cast<std::size_t>(i)];
            Tensor logits = model.forward(s.image);
            SoftmaxResult sm = softmax_cross_entropy(logits, static_cast<int>(s.label));
            m.loss += sm.loss;
            int pred = 0;
            for (std::size_t k = 1; k < logits.size(); ++k)
                if (logits[k] > logits[pred]) pred = static_cast<int>(k);
            m.confusion[static_cast<std::size_t>(s.label)][static_cast<std::size_t>(pred)] += 1;
        }
    }

    Metrics out{};
    for (const Metrics& m : parts) {
        out.loss += m.loss;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    m.confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    long long trace = 0;
    for (int i = 0; i < 3; ++i) trace += out.confusion[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    out.accuracy = static_cast<double>(trace) / static_cast<double>(n);
    out.loss /= static_cast<double>(n);
    return out;
}

} // namespace

NetworkSpec NetworkSpec::for_mode(Mode m)
{
    NetworkSpec s;
    s.input_w = m == Mode::Range ? 8 : 16;
    s.kernel_w = s.input_w / 4;
    return s;
}

void NetworkSpec::validate() const
{
    require(input_h > 0 && input_w > 0 && input_c > 0, "nn: input dimensions must be positive");
    require(conv_blocks >= 1, "nn: need at least one conv block");
    require(kernel_h >= 1 && kernel_w >= 1, "nn: kernel dimensions must be positive");
    require(kernel_h <= input_h && kernel_w <= input_w, "nn: kernel larger than input");
    require(filters > 0, "nn: filters must be positive");
    require(num_classes == 3, "nn: the classifier head is fixed at 3 classes");
}

void TrainConfig::validate() const
{
    require(learning_rate >= 0.0 && std::isfinite(learning_rate), "nn: learning rate must be non-negative");
    require(batch_size >= 1, "nn: batch size must be at least 1");
    require(epochs >= 1, "nn: need at least one epoch");
}

namespace {

// Inner worker with the filter count fixed at compile time. The per-filter
// accumulators live in registers and the o-loop unrolls completely, which
// is what makes the training loop affordable on one core.
template <int O>
void conv_fwd_rows(const double* __restrict in, const double* __restrict K,
                   const double* __restrict b, double* __restrict outp, int H, int W, int C,
                   int kh, int kw)
{
    for (int h = 0; h < H; ++h) {
        const int i_lo = std::max(0, kh / 2 - h);
        const int i_hi = std::min(kh, H + kh / 2 - h);
        for (int w = 0; w < W; ++w) {
            double acc[O];
            for (int o = 0; o < O; ++o) acc[o] = b[o];
            const int j_lo = std::max(0, kw / 2 - w);
            const int j_hi = std::min(kw, W + kw / 2 - w);
            for (int i = i_lo; i < i_hi; ++i) {
                const int hi = h + i - kh / 2;
                for (int j = j_lo; j < j_hi; ++j) {
                    const int wi = w + j - kw / 2;
                    const double* __restrict px = in + (static_cast<std::size_t>(hi) * W + wi) * C;
                    const double* __restrict kr = K + (static_cast<std::size_t>(i) * kw + j) * C * O;
                    for (int c = 0; c < C; ++c) {
                        const double x = px[c];
                        const double* __restrict kc = kr + static_cast<std::size_t>(c) * O;
#pragma omp simd
                        for (int o = 0; o < O; ++o)
                            acc[o] += x * kc[o];
                    }
                }
            }
            double* __restrict dst = outp + (static_cast<std::size_t>(h) * W + w) * O;
            for (int o = 0; o < O; ++o) dst[o] = acc[o];
        }
    }
}

void conv_fwd_generic(const double* __restrict in, const double* __restrict K,
                      const double* __restrict b, double* __restrict outp, int H, int W, int C,
                      int kh, int kw, int O)
{
    std::vector<double> accbuf(static_cast<std::size_t>(O));
    double* __restrict acc = accbuf.data();
    for (int h = 0; h < H; ++h) {
        for (int w = 0; w < W; ++w) {
            for (int o = 0; o < O; ++o) acc[o] = b[o];
            for (int i = 0; i < kh; ++i) {
                const int hi = h + i - kh / 2;
                if (hi < 0 || hi >= H) continue;
                for (int j = 0; j < kw; ++j) {
                    const int wi = w + j - kw / 2;
                    if (wi < 0 || wi >= W) continue;
                    const double* __restrict px = in + (static_cast<std::size_t>(hi) * W + wi) * C;
                    const double* __restrict kr = K + (static_cast<std::size_t>(i) * kw + j) * C * O;
                    for (int c = 0; c < C; ++c) {
                        const double x = px[c];
                        const double* __restrict kc = kr + static_cast<std::size_t>(c) * O;
                        for (int o = 0; o < O; ++o)
                            acc[o] += x * kc[o];
                    }
                }
            }
            double* __restrict dst = outp + (static_cast<std::size_t>(h) * W + w) * O;
            for (int o = 0; o < O; ++o) dst[o] = acc[o];
        }
    }
}

template <int O>
void conv_bwd_rows(const double* __restrict go, const double* __restrict in,
                   const double* __restrict K, double* __restrict ginput,
                   double* __restrict gkern, double* __restrict gbias, int H, int W, int C,
                   int kh, int kw)
{
    for (int h = 0; h < H; ++h) {
        const int i_lo = std::max(0, kh / 2 - h);
        const int i_hi = std::min(kh, H + kh / 2 - h);
        for (int w = 0; w < W; ++w) {
            const double* __restrict gp = go + (static_cast<std::size_t>(h) * W + w) * O;
            for (int o = 0; o < O; ++o) gbias[o] += gp[o];
            const int j_lo = std::max(0, kw / 2 - w);
            const int j_hi = std::min(kw, W + kw / 2 - w);
            for (int i = i_lo; i < i_hi; ++i) {
                const int hi = h + i - kh / 2;
                for (int j = j_lo; j < j_hi; ++j) {
                    const int wi = w + j - kw / 2;
                    const double* __restrict px = in + (static_cast<std::size_t>(hi) * W + wi) * C;
                    double* __restrict gin = ginput + (static_cast<std::size_t>(hi) * W + wi) * C;
                    const std::size_t base = (static_cast<std::size_t>(i) * kw + j) * C * O;
                    for (int c = 0; c < C; ++c) {
                        const double x = px[c];
                        double* __restrict gk = gkern + base + static_cast<std::size_t>(c) * O;
                        const double* __restrict kc = K + base + static_cast<std::size_t>(c) * O;
                        double s = 0.0;
#pragma omp simd reduction(+ : s)
                        for (int o = 0; o < O; ++o) {
                            gk[o] += x * gp[o];
                            s += kc[o] * gp[o];
                        }
                        gin[c] += s;
                    }
                }
            }
        }
    }
}

void conv_bwd_generic(const double* __restrict go, const double* __restrict in,
                      const double* __restrict K, double* __restrict ginput,
                      double* __restrict gkern, double* __restrict gbias, int H, int W, int C,
                      int kh, int kw, int O)
{
    for (int h = 0; h < H; ++h) {
        for (int w = 0; w < W; ++w) {
            const double* __restrict gp = go + (static_cast<std::size_t>(h) * W + w) * O;
            for (int o = 0; o < O; ++o) gbias[o] += gp[o];
            for (int i = 0; i < kh; ++i) {
                const int hi = h + i - kh / 2;
                if (hi < 0 || hi >= H) continue;
                for (int j = 0; j < kw; ++j) {
                    const int wi = w + j - kw / 2;
                    if (wi < 0 || wi >= W) continue;
                    const double* __restrict px = in + (static_cast<std::size_t>(hi) * W + wi) * C;
                    double* __restrict gin = ginput + (static_cast<std::size_t>(hi) * W + wi) * C;
                    const std::size_t base = (static_cast<std::size_t>(i) * kw + j) * C * O;
                    for (int c = 0; c < C; ++c) {
                        const double x = px[c];
                        double* __restrict gk = gkern + base + static_cast<std::size_t>(c) * O;
                        const double* __restrict kc = K + base + static_cast<std::size_t>(c) * O;
                        double s = 0.0;
#pragma omp simd reduction(+ : s)
                        for (int o = 0; o < O; ++o) {
                            gk[o] += x * gp[o];
                            s += kc[o] * gp[o];
                        }
                        gin[c] += s;
                    }
                }
            }
        }
    }
}

void conv_bwd_dispatch(const double* go, const double* in, const double* K, double* ginput,
                       double* gkern, double* gbias, int H, int W, int C, int kh, int kw, int O)
{
    switch (O) {
    case 8: conv_bwd_rows<8>(go, in, K, ginput, gkern, gbias, H, W, C, kh, kw); break;
    case 16: conv_bwd_rows<16>(go, in, K, ginput, gkern, gbias, H, W, C, kh, kw); break;
    case 32: conv_bwd_rows<32>(go, in, K, ginput, gkern, gbias, H, W, C, kh, kw); break;
    default: conv_bwd_generic(go, in, K, ginput, gkern, gbias, H, W, C, kh, kw, O); break;
    }
}

} // namespace

Tensor conv2d_forward(const Tensor& input, const Tensor& kernels, const Tensor& bias)
{
    require(input.shape.size() == 3, "nn: conv input must be H x W x C");
    require(kernels.shape.size() == 4, "nn: conv kernels must be kh x kw x C_in x C_out");
    require(kernels.shape[2] == input.shape[2], "nn: kernel input channels mismatch");
    require(bias.shape == std::vector<int>{kernels.shape[3]}, "nn: conv bias shape mismatch");

    const int H = input.shape[0], W = input.shape[1], C = input.shape[2];
    const int kh = kernels.shape[0], kw = kernels.shape[1], O = kernels.shape[3];
    Tensor out({H, W, O});

    const double* in = input.data.data();
    const double* K = kernels.data.data();
    const double* b = bias.data.data();
    double* dst = out.data.data();
    switch (O) {
    case 8: conv_fwd_rows<8>(in, K, b, dst, H, W, C, kh, kw); break;
    case 16: conv_fwd_rows<16>(in, K, b, dst, H, W, C, kh, kw); break;
    case 32: conv_fwd_rows<32>(in, K, b, dst, H, W, C, kh, kw); break;
    default: conv_fwd_generic(in, K, b, dst, H, W, C, kh, kw, O); break;
    }
    check_finite(out, "conv2d_forward");
    return out;
}

ConvGrads conv2d_backward(const Tensor& grad_out, const Tensor& input, const Tensor& kernels)
{
    require(input.shape.size() == 3 && kernels.shape.size() == 4, "nn: bad conv shapes");
    require(kernels.shape[2] == input.shape[2], "nn: kernel input channels mismatch");
    require(grad_out.shape == std::vector<int>{input.shape[0], input.shape[1], kernels.shape[3]},
            "nn: grad_out shape mismatch");

    const int H = input.shape[0], W = input.shape[1], C = input.shape[2];
    const int kh = kernels.shape[0], kw = kernels.shape[1], O = kernels.shape[3];

    ConvGrads g;
    g.input = Tensor(input.shape);
    g.kernels = Tensor(kernels.shape);
    g.bias = Tensor({O});

    conv_bwd_dispatch(grad_out.data.data(), input.data.data(), kernels.data.data(),
                      g.input.data.data(), g.kernels.data.data(), g.bias.data.data(), H, W, C, kh,
                      kw, O);
    check_finite(g.input, "conv2d_backward");
    return g;
}

Tensor relu(const Tensor& x)
{
    Tensor out(x.shape);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
    return out;
}

Tensor relu_backward(const Tensor& grad, const Tensor& x)
{
    require(grad.shape == x.shape, "nn: relu gradient shape mismatch");
    Tensor out(x.shape);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? grad[i] : 0.0;
    return out;
}

Tensor fc_forward(const Tensor& x, const Tensor& weights, const Tensor& bias)
{
    require(weights.shape.size() == 2, "nn: fc weights must be n_in x n_out");
    const int n = weights.shape[0], K = weights.shape[1];
    require(static_cast<std::size_t>(n) == x.size(), "nn: fc input size mismatch");
    require(bias.shape == std::vector<int>{K}, "nn: fc bias shape mismatch");

    Tensor out({K});
    for (int o = 0; o < K; ++o) out[static_cast<std::size_t>(o)] = bias[static_cast<std::size_t>(o)];
    const double* W = weights.data.data();
    for (int i = 0; i < n; ++i) {
        const double xv = x[static_cast<std::size_t>(i)];
        const double* wr = W + static_cast<std::size_t>(i) * K;
        for (int o = 0; o < K; ++o) out[static_cast<std::size_t>(o)] += xv * wr[o];
    }
    check_finite(out, "fc_forward");
    return out;
}

FcGrads fc_backward(const Tensor& grad_out, const Tensor& x, const Tensor& weights)
{
    require(weights.shape.size() == 2, "nn: fc weights must be n_in x n_out");
    const int n = weights.shape[0], K = weights.shape[1];
    require(static_cast<std::size_t>(n) == x.size(), "nn: fc input size mismatch");
    require(static_cast<std::size_t>(K) == grad_out.size(), "nn: fc grad size mismatch");

    FcGrads g;
    g.input = Tensor({n});
    g.weights = Tensor(weights.shape);
    g.bias = Tensor({K});
    for (int o = 0; o < K; ++o) g.bias[static_cast<std::size_t>(o)] = grad_out[static_cast<std::size_t>(o)];

    const double* W = weights.data.data();
    for (int i = 0; i < n; ++i) {
        const double xv = x[static_cast<std::size_t>(i)];
        const double* wr = W + static_cast<std::size_t>(i) * K;
        double* gw = g.weights.data.data() + static_cast<std::size_t>(i) * K;
        double s = 0.0;
        for (int o = 0; o < K; ++o) {
            gw[o] = xv * grad_out[static_cast<std::size_t>(o)];
            s += wr[o] * grad_out[static_cast<std::size_t>(o)];
        }
        g.input[static_cast<std::size_t>(i)] = s;
    }
    return g;
}

SoftmaxResult softmax_cross_entropy(const Tensor& logits, int label)
{
    const int K = static_cast<int>(logits.size());
    require(K >= 2, "nn: need at least two logits");
    require(label >= 0 && label < K, "nn: label out of range");

    double m = logits[0];
    for (int i = 1; i < K; ++i) m = std::max(m, logits[static_cast<std::size_t>(i)]);

    SoftmaxResult r;
    r.probs.resize(static_cast<std::size_t>(K));
    double z = 0.0;
    for (int i = 0; i < K; ++i) {
        r.probs[static_cast<std::size_t>(i)] = std::exp(logits[static_cast<std::size_t>(i)] - m);
        z += r.probs[static_cast<std::size_t>(i)];
    }
    for (auto& p : r.probs) p /= z;
    r.loss = std::log(z) - (logits[static_cast<std::size_t>(label)] - m);
    r.grad_logits = r.probs;
    r.grad_logits[static_cast<std::size_t>(label)] -= 1.0;
    if (!std::isfinite(r.loss)) throw NumericError("nn: non-finite cross-entropy loss");
    return r;
}

void sgd_step(Tensor& params, const Tensor& grads, double lr)
{
    require(params.shape == grads.shape, "nn: sgd shape mismatch");
    require(lr >= 0.0 && std::isfinite(lr), "nn: learning rate must be non-negative");
    for (double gv : grads.data)
        if (!std::isfinite(gv)) throw NumericError("nn: non-finite gradient in sgd_step");
    for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

Cnn Cnn::init(const NetworkSpec& spec, std::uint64_t seed)
{
    spec.validate();
    Rng rng(seed);
    Cnn m;
    m.spec = spec;
    for (int b = 0; b < spec.conv_blocks; ++b) {
        const int cin = b == 0 ? spec.input_c : spec.filters;
        Tensor k({spec.kernel_h, spec.kernel_w, cin, spec.filters});
        const double scale = std::sqrt(2.0 / static_cast<double>(spec.kernel_h * spec.kernel_w * cin));
        for (auto& v : k.data) v = scale * rng.gaussian();
        m.conv_kernels.push_back(std::move(k));
        m.conv_biases.emplace_back(std::vector<int>{spec.filters});
    }
    const int flat = static_cast<int>(spec.flat_features());
    Tensor w({flat, spec.num_classes});
    const double scale = std::sqrt(2.0 / static_cast<double>(flat));
    for (auto& v : w.data) v = scale * rng.gaussian();
    m.fc_weights = std::move(w);
    m.fc_bias = Tensor({spec.num_classes});
    return m;
}

Tensor Cnn::forward(const Tensor& image) const
{
    require(image.shape == (std::vector<int>{spec.input_h, spec.input_w, spec.input_c}),
            "nn: image shape does not match the network input");
    Tensor cur = image;
    for (std::size_t b = 0; b < conv_kernels.size(); ++b)
        cur = relu(conv2d_forward(cur, conv_kernels[b], conv_biases[b]));
    return fc_forward(cur, fc_weights, fc_bias);
}

int Cnn::predict(const Tensor& image) const
{
    Tensor logits = forward(image);
    int best = 0;
    for (std::size_t i = 1; i < logits.size(); ++i)
        if (logits[i] > logits[best]) best = static_cast<int>(i);
    return best;
}

TrainResult train(const NetworkSpec& spec,
                  const std::vector<dsp::ProcessedSample>& train_set,
                  const std::vector<dsp::ProcessedSample>& val_set,
                  const TrainConfig& cfg)
{
    spec.validate();
    cfg.validate();
    if (train_set.empty() || val_set.empty())
        throw std::invalid_argument("nn: empty training or validation split");
    for (const auto& s : val_set) {
        if (s.variant != Variant::Human)
            throw std::invalid_argument("nn: sterile sample found in the validation set");
        check_sample_shape(spec, s, "validation set");
    }
    for (const auto& s : train_set) check_sample_shape(spec, s, "training set");

    Cnn model = Cnn::init(spec, cfg.seed);
    Rng shuffle_rng(mix_seed(cfg.seed, 0x5AFF1E));

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<GradBuf> bufs;
    bufs.reserve(kChunks);
    for (int c = 0; c < kChunks; ++c) bufs.push_back(GradBuf::zeros_like(model));

    TrainResult result;
    result.model = model;
    result.best_val_accuracy = -1.0;

    const long long n = static_cast<long long>(train_set.size());
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        if (cfg.shuffle) shuffle_rng.shuffle(order);

        double epoch_loss = 0.0;
        long long epoch_correct = 0;
        for (long long start = 0; start < n; start += cfg.batch_size) {
            const long long bn = std::min<long long>(cfg.batch_size, n - start);
            for (auto& b : bufs) b.reset();

#pragma omp parallel for schedule(static)
            for (int c = 0; c < kChunks; ++c) {
                const long long lo = start + bn * c / kChunks;
                const long long hi = start + bn * (c + 1) / kChunks;
                for (long long i = lo; i < hi; ++i)
                    accumulate_sample(model, train_set[order[static_cast<std::size_t>(i)]],
                                      bufs[static_cast<std::size_t>(c)]);
            }
            for (int c = 1; c < kChunks; ++c) bufs[0].add(bufs[static_cast<std::size_t>(c)]);
            epoch_loss += bufs[0].loss;
            epoch_correct += bufs[0].correct;

            const double inv = 1.0 / static_cast<double>(bn);
            for (std::size_t b = 0; b < model.conv_kernels.size(); ++b) {
                for (auto& v : bufs[0].conv_kernels[b].data) v *= inv;
                for (auto& v : bufs[0].conv_biases[b].data) v *= inv;
                sgd_step(model.conv_kernels[b], bufs[0].conv_kernels[b], cfg.learning_rate);
                sgd_step(model.conv_biases[b], bufs[0].conv_biases[b], cfg.learning_rate);
            }
            for (auto& v : bufs[0].fc_weights.data) v *= inv;
            for (auto& v : bufs[0].fc_bias.data) v *= inv;
            sgd_step(model.fc_weights, bufs[0].fc_weights, cfg.learning_rate);
            sgd_step(model.fc_bias, bufs[0].fc_bias, cfg.learning_rate);
        }

        Metrics val = evaluate_impl(model, val_set);
        EpochStats st;
        st.epoch = epoch;
        st.train_loss = epoch_loss / static_cast<double>(n);
        st.train_acc = static_cast<double>(epoch_correct) / static_cast<double>(n);
        st.val_loss = val.loss;
        st.val_acc = val.accuracy;
        result.history.push_back(st);

        if (val.accuracy > result.best_val_accuracy) {
            result.best_val_accuracy = val.accuracy;
            result.best_epoch = epoch;
            result.model = model;
        }
    }
    return result;
}

Metrics evaluate(const Cnn& model, const std::vector<dsp::ProcessedSample>& dataset)
{
    if (dataset.empty()) throw std::invalid_argument("nn: cannot evaluate an empty dataset");
    for (const auto& s : dataset) check_sample_shape(model.spec, s, "evaluation set");
    return evaluate_impl(model, dataset);
}

Tensor numeric_gradient(const std::function<double()>& loss, Tensor& param, double eps)
{
    Tensor g(param.shape);
    for (std::size_t i = 0; i < param.size(); ++i) {
        const double saved = param[i];
        param[i] = saved + eps;
        const double fp = loss();
        param[i] = saved - eps;
        const double fm = loss();
        param[i] = saved;
        g[i] = (fp - fm) / (2.0 * eps);
    }
    return g;
}

} // namespace fgl::nn
