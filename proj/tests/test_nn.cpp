#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fgl/nn.hpp"
#include "fgl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

using namespace fgl;
using namespace fgl::nn;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng)
{
    Tensor t(std::move(shape));
    for (auto& v : t.data) v = rng.gaussian();
    return t;
}

// Brute-force cross-correlation sharing no code with the library. Kernel
// layout [kh][kw][C_in][C_out] is flattened by hand.
Tensor conv_reference(const Tensor& in, const Tensor& K, const Tensor& bias)
{
    const int H = in.shape[0], W = in.shape[1], C = in.shape[2];
    const int kh = K.shape[0], kw = K.shape[1], O = K.shape[3];
    Tensor out({H, W, O});
    for (int h = 0; h < H; ++h)
        for (int w = 0; w < W; ++w)
            for (int o = 0; o < O; ++o) {
                double acc = bias[static_cast<std::size_t>(o)];
                for (int i = 0; i < kh; ++i)
                    for (int j = 0; j < kw; ++j)
                        for (int c = 0; c < C; ++c) {
                            const int hi = h + i - kh / 2;
                            const int wi = w + j - kw / 2;
                            if (hi < 0 || hi >= H || wi < 0 || wi >= W) continue;
                            const std::size_t ki =
                                ((static_cast<std::size_t>(i) * kw + j) * C + c) * O + o;
                            acc += in.at(hi, wi, c) * K[ki];
                        }
                out.at(h, w, o) = acc;
            }
    return out;
}

double max_rel_err(const Tensor& a, const Tensor& b, double floor = 1e-6)
{
    REQUIRE(a.shape == b.shape);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max({std::abs(a[i]), std::abs(b[i]), floor});
        worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
    }
    return worst;
}

dsp::ProcessedSample make_sample(const Tensor& img, GestureClass label)
{
    dsp::ProcessedSample s;
    s.image = img;
    s.label = label;
    s.variant = Variant::Human;
    s.mode = Mode::Range;
    return s;
}

// Two structured patterns that a single conv block plus the linear head
// separates easily.
std::vector<dsp::ProcessedSample> toy_pair(const NetworkSpec& spec)
{
    Tensor a({spec.input_h, spec.input_w, spec.input_c});
    Tensor b(a.shape);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const bool top = i < a.size() / 2;
        a[i] = top ? 1.0 : -0.5;
        b[i] = top ? -0.5 : 1.0;
    }
    return {make_sample(a, GestureClass::Palm), make_sample(b, GestureClass::Perpendicular)};
}

NetworkSpec tiny_spec()
{
    NetworkSpec spec;
    spec.input_h = 6;
    spec.input_w = 4;
    spec.input_c = 2;
    spec.conv_blocks = 1;
    spec.kernel_h = 3;
    spec.kernel_w = 2;
    spec.filters = 8;
    return spec;
}

} // namespace

TEST_CASE("conv identity and bias broadcast")
{
    Rng rng(3);
    Tensor in = random_tensor({5, 4, 1}, rng);
    Tensor k({1, 1, 1, 1});
    k[0] = 1.0;
    Tensor bias({1});
    Tensor out = conv2d_forward(in, k, bias);
    for (std::size_t i = 0; i < in.size(); ++i)
        CHECK(out[i] == in[i]);

    Tensor zero({3, 3, 2});
    Tensor k2 = random_tensor({3, 2, 2, 4}, rng);
    Tensor b2({4});
    b2.data = {0.5, -1.0, 2.0, 0.0};
    Tensor out2 = conv2d_forward(zero, k2, b2);
    for (int h = 0; h < 3; ++h)
        for (int w = 0; w < 3; ++w)
            for (int o = 0; o < 4; ++o)
                CHECK(out2.at(h, w, o) == b2[static_cast<std::size_t>(o)]);
}

TEST_CASE("conv matches the nested-loop reference on both code paths")
{
    Rng rng(11);
    // O = 2 exercises the generic worker, O = 16 the unrolled one.
    const std::vector<std::vector<int>> kernel_shapes = {{3, 2, 2, 2}, {3, 2, 2, 16}};
    for (const auto& ks : kernel_shapes) {
        Tensor in = random_tensor({8, 4, ks[2]}, rng);
        Tensor k = random_tensor(ks, rng);
        Tensor bias = random_tensor({ks[3]}, rng);
        Tensor got = conv2d_forward(in, k, bias);
        Tensor want = conv_reference(in, k, bias);
        REQUIRE(got.shape == want.shape);
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
}

TEST_CASE("conv shape validation")
{
    Tensor in({4, 4, 2});
    CHECK_THROWS_AS(conv2d_forward(in, Tensor({3, 2, 3, 4}), Tensor({4})),
                    std::invalid_argument);
    CHECK_THROWS_AS(conv2d_forward(in, Tensor({3, 2, 2, 4}), Tensor({5})),
                    std::invalid_argument);
    CHECK_THROWS_AS(conv2d_backward(Tensor({4, 4, 3}), in, Tensor({3, 2, 2, 4})),
                    std::invalid_argument);
}

TEST_CASE("conv backward zero and single-pixel cases")
{
    Rng rng(17);
    Tensor in = random_tensor({6, 4, 2}, rng);
    Tensor k = random_tensor({3, 2, 2, 4}, rng);

    ConvGrads zero = conv2d_backward(Tensor({6, 4, 4}), in, k);
    for (double v : zero.input.data) CHECK(v == 0.0);
    for (double v : zero.kernels.data) CHECK(v == 0.0);
    for (double v : zero.bias.data) CHECK(v == 0.0);

    // A unit gradient at one interior output pixel makes grad_kernels a
    // copy of the input patch under that pixel, and only for that filter.
    Tensor go({6, 4, 4});
    const int h0 = 2, w0 = 1, o0 = 3;
    go.at(h0, w0, o0) = 1.0;
    ConvGrads g = conv2d_backward(go, in, k);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j)
            for (int c = 0; c < 2; ++c)
                for (int o = 0; o < 4; ++o) {
                    const std::size_t ki = ((static_cast<std::size_t>(i) * 2 + j) * 2 + c) * 4 + o;
                    const double want = o == o0 ? in.at(h0 + i - 1, w0 + j - 1, c) : 0.0;
                    CHECK(g.kernels[ki] == doctest::Approx(want).epsilon(1e-14));
                }
    CHECK(g.bias[o0] == 1.0);
    for (int o = 0; o < 4; ++o)
        if (o != o0) CHECK(g.bias[static_cast<std::size_t>(o)] == 0.0);
}

TEST_CASE("conv gradients agree with finite differences over random configurations")
{
    Rng rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int H = 3 + static_cast<int>(rng.below(4));
        const int W = 2 + static_cast<int>(rng.below(3));
        const int C = 1 + static_cast<int>(rng.below(3));
        const int kh = 1 + static_cast<int>(rng.below(3));
        const int kw = 1 + static_cast<int>(rng.below(2));
        const int O = trial % 3 == 0 ? 8 : 1 + static_cast<int>(rng.below(4));

        Tensor in = random_tensor({H, W, C}, rng);
        Tensor k = random_tensor({kh, kw, C, O}, rng);
        Tensor bias = random_tensor({O}, rng);
        // Project the output onto a fixed vector so the loss is scalar; the
        // projection weights double as grad_out for the analytic pass.
        Tensor proj = random_tensor({H, W, O}, rng);

        auto loss = [&]() {
            Tensor out = conv2d_forward(in, k, bias);
            double s = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * proj[i];
            return s;
        };

        ConvGrads g = conv2d_backward(proj, in, k);
        CHECK(max_rel_err(g.kernels, numeric_gradient(loss, k)) < 1e-6);
        CHECK(max_rel_err(g.bias, numeric_gradient(loss, bias)) < 1e-6);
        CHECK(max_rel_err(g.input, numeric_gradient(loss, in)) < 1e-6);
    }
}

TEST_CASE("relu forward and gradient mask")
{
    Tensor x({3});
    x.data = {-1.0, 0.0, 2.0};
    Tensor y = relu(x);
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 0.0);
    CHECK(y[2] == 2.0);

    Tensor ones({3});
    ones.data = {1.0, 1.0, 1.0};
    Tensor g = relu_backward(ones, x);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 1.0);

    CHECK_THROWS_AS(relu_backward(Tensor({4}), x), std::invalid_argument);
}

TEST_CASE("relu gradient matches finite differences away from the kink")
{
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        Tensor x = random_tensor({4, 3, 2}, rng);
        for (auto& v : x.data)
            if (std::abs(v) < 1e-3) v = v < 0.0 ? -0.1 : 0.1;
        Tensor proj = random_tensor(x.shape, rng);

        auto loss = [&]() {
            Tensor y = relu(x);
            double s = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * proj[i];
            return s;
        };
        Tensor analytic = relu_backward(proj, x);
        CHECK(max_rel_err(analytic, numeric_gradient(loss, x)) < 1e-6);
    }
}

TEST_CASE("fully connected forward basics")
{
    Tensor x({3});
    x.data = {1.5, -2.0, 0.25};
    Tensor w({3, 3});
    for (int i = 0; i < 3; ++i) w[static_cast<std::size_t>(i) * 3 + i] = 1.0;
    Tensor b({3});
    Tensor logits = fc_forward(x, w, b);
    for (int i = 0; i < 3; ++i)
        CHECK(logits[static_cast<std::size_t>(i)] == x[static_cast<std::size_t>(i)]);

    Tensor zero({3});
    b.data = {0.1, 0.2, 0.3};
    Tensor lb = fc_forward(zero, w, b);
    for (int i = 0; i < 3; ++i)
        CHECK(lb[static_cast<std::size_t>(i)] == b[static_cast<std::size_t>(i)]);

    CHECK_THROWS_AS(fc_forward(Tensor({4}), w, b), std::invalid_argument);
}

TEST_CASE("fully connected gradients agree with finite differences")
{
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(10));
        Tensor x = random_tensor({n}, rng);
        Tensor w = random_tensor({n, 3}, rng);
        Tensor proj = random_tensor({3}, rng);

        auto loss = [&]() {
            Tensor out = fc_forward(x, w, Tensor({3}));
            return out[0] * proj[0] + out[1] * proj[1] + out[2] * proj[2];
        };
        FcGrads g = fc_backward(proj, x, w);
        CHECK(max_rel_err(g.weights, numeric_gradient(loss, w)) < 1e-6);
        CHECK(max_rel_err(g.input, numeric_gradient(loss, x)) < 1e-6);
        for (int o = 0; o < 3; ++o)
            CHECK(g.bias[static_cast<std::size_t>(o)] == proj[static_cast<std::size_t>(o)]);
    }
}

TEST_CASE("softmax cross entropy reference values")
{
    Tensor uniform({3});
    SoftmaxResult r = softmax_cross_entropy(uniform, 1);
    CHECK(r.loss == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    for (double p : r.probs)
        CHECK(p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    Tensor sat({3});
    sat.data = {100.0, 0.0, 0.0};
    CHECK(softmax_cross_entropy(sat, 0).loss < 1e-10);

    CHECK_THROWS_AS(softmax_cross_entropy(uniform, 3), std::invalid_argument);
    CHECK_THROWS_AS(softmax_cross_entropy(uniform, -1), std::invalid_argument);
}

TEST_CASE("softmax stays a probability vector under saturation")
{
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        Tensor logits({3});
        const double scale = std::pow(10.0, rng.uniform(0.0, 4.0));
        for (auto& v : logits.data) v = scale * rng.uniform(-1.0, 1.0);
        const int label = static_cast<int>(rng.below(3));
        SoftmaxResult r = softmax_cross_entropy(logits, label);

        double sum = 0.0, gsum = 0.0;
        for (double p : r.probs) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            sum += p;
        }
        for (double g : r.grad_logits) gsum += g;
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        CHECK(std::abs(gsum) <= 1e-12);
        CHECK(std::isfinite(r.loss));
        CHECK(r.loss >= 0.0);
    }
}

TEST_CASE("sgd step arithmetic and composition")
{
    Tensor p({1});
    p[0] = 1.0;
    Tensor g({1});
    g[0] = 0.5;
    sgd_step(p, g, 0.1);
    CHECK(p[0] == doctest::Approx(0.95).epsilon(1e-15));

    Tensor zero({1});
    Tensor q = p;
    sgd_step(q, zero, 10.0);
    CHECK(q[0] == p[0]);

    // Two steps at rates a and b on a fixed gradient equal one step at a+b.
    Tensor two = p, one = p;
    sgd_step(two, g, 0.02);
    sgd_step(two, g, 0.03);
    sgd_step(one, g, 0.05);
    CHECK(two[0] == doctest::Approx(one[0]).epsilon(1e-15));

    Tensor bad({1});
    bad[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(sgd_step(p, bad, 0.1), NumericError);
    CHECK_THROWS_AS(sgd_step(p, Tensor({2}), 0.1), std::invalid_argument);
}

TEST_CASE("whole-network gradients agree with finite differences")
{
    NetworkSpec spec = tiny_spec();
    Cnn m = Cnn::init(spec, 5);
    Rng rng(41);
    Tensor img = random_tensor({spec.input_h, spec.input_w, spec.input_c}, rng);
    const int label = 2;

    auto loss = [&]() {
        return softmax_cross_entropy(m.forward(img), label).loss;
    };

    // Analytic pass through the public layer ops.
    Tensor pre = conv2d_forward(img, m.conv_kernels[0], m.conv_biases[0]);
    Tensor post = relu(pre);
    Tensor logits = fc_forward(post, m.fc_weights, m.fc_bias);
    SoftmaxResult sm = softmax_cross_entropy(logits, label);
    Tensor gl({3});
    gl.data = sm.grad_logits;
    FcGrads fg = fc_backward(gl, post, m.fc_weights);
    fg.input.shape = pre.shape;
    Tensor gpre = relu_backward(fg.input, pre);
    ConvGrads cg = conv2d_backward(gpre, img, m.conv_kernels[0]);

    CHECK(max_rel_err(fg.weights, numeric_gradient(loss, m.fc_weights), 1e-3) < 1e-6);
    CHECK(max_rel_err(fg.bias, numeric_gradient(loss, m.fc_bias), 1e-3) < 1e-6);
    CHECK(max_rel_err(cg.kernels, numeric_gradient(loss, m.conv_kernels[0]), 1e-3) < 1e-6);
    CHECK(max_rel_err(cg.bias, numeric_gradient(loss, m.conv_biases[0]), 1e-3) < 1e-6);
}

TEST_CASE("full-batch descent never increases the loss at a small rate")
{
    NetworkSpec spec = tiny_spec();
    Cnn m = Cnn::init(spec, 7);
    Rng rng(43);
    std::vector<dsp::ProcessedSample> batch;
    for (int i = 0; i < 4; ++i)
        batch.push_back(make_sample(random_tensor({spec.input_h, spec.input_w, spec.input_c}, rng),
                                    static_cast<GestureClass>(i % 3)));

    auto batch_pass = [&](bool apply) {
        Tensor gk(m.conv_kernels[0].shape), gb(m.conv_biases[0].shape);
        Tensor gw(m.fc_weights.shape), gfb(m.fc_bias.shape);
        double total = 0.0;
        for (const auto& s : batch) {
            Tensor pre = conv2d_forward(s.image, m.conv_kernels[0], m.conv_biases[0]);
            Tensor post = relu(pre);
            Tensor logits = fc_forward(post, m.fc_weights, m.fc_bias);
            SoftmaxResult sm = softmax_cross_entropy(logits, static_cast<int>(s.label));
            total += sm.loss;
            if (!apply) continue;
            Tensor gl({3});
            gl.data = sm.grad_logits;
            FcGrads fg = fc_backward(gl, post, m.fc_weights);
            for (std::size_t i = 0; i < gw.size(); ++i) gw[i] += fg.weights[i];
            for (std::size_t i = 0; i < gfb.size(); ++i) gfb[i] += fg.bias[i];
            fg.input.shape = pre.shape;
            Tensor gpre = relu_backward(fg.input, pre);
            ConvGrads cg = conv2d_backward(gpre, s.image, m.conv_kernels[0]);
            for (std::size_t i = 0; i < gk.size(); ++i) gk[i] += cg.kernels[i];
            for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += cg.bias[i];
        }
        if (apply) {
            const double inv = 1.0 / static_cast<double>(batch.size());
            for (auto& v : gk.data) v *= inv;
            for (auto& v : gb.data) v *= inv;
            for (auto& v : gw.data) v *= inv;
            for (auto& v : gfb.data) v *= inv;
            sgd_step(m.conv_kernels[0], gk, 1e-4);
            sgd_step(m.conv_biases[0], gb, 1e-4);
            sgd_step(m.fc_weights, gw, 1e-4);
            sgd_step(m.fc_bias, gfb, 1e-4);
        }
        return total / static_cast<double>(batch.size());
    };

    double prev = batch_pass(true);
    for (int step = 1; step < 100; ++step) {
        const double cur = batch_pass(true);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("training separates a toy pair and selects the best epoch")
{
    NetworkSpec spec = tiny_spec();
    auto data = toy_pair(spec);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.batch_size = 2;
    cfg.epochs = 50;
    cfg.seed = 9;

    TrainResult r = train(spec, data, data, cfg);
    REQUIRE(r.history.size() == 50);
    CHECK(r.history.back().train_acc == 1.0);
    CHECK(r.best_val_accuracy == 1.0);
    CHECK(r.best_epoch >= 1);
    CHECK(r.best_epoch <= 50);

    Metrics m = evaluate(r.model, data);
    CHECK(m.accuracy == 1.0);
}

TEST_CASE("training is bit-reproducible for a fixed seed")
{
    NetworkSpec spec = tiny_spec();
    auto data = toy_pair(spec);
    TrainConfig cfg;
    cfg.learning_rate = 0.02;
    cfg.batch_size = 1;
    cfg.epochs = 5;
    cfg.seed = 21;

    TrainResult a = train(spec, data, data, cfg);
    TrainResult b = train(spec, data, data, cfg);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t e = 0; e < a.history.size(); ++e) {
        CHECK(a.history[e].train_loss == b.history[e].train_loss);
        CHECK(a.history[e].val_loss == b.history[e].val_loss);
        CHECK(a.history[e].train_acc == b.history[e].train_acc);
    }
    for (std::size_t i = 0; i < a.model.fc_weights.size(); ++i)
        CHECK(a.model.fc_weights[i] == b.model.fc_weights[i]);

    cfg.seed = 22;
    TrainResult c = train(spec, data, data, cfg);
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < a.model.fc_weights.size(); ++i)
        if (a.model.fc_weights[i] != c.model.fc_weights[i]) ++diffs;
    CHECK(diffs > 0);
}

TEST_CASE("zero learning rate leaves the initialization untouched")
{
    NetworkSpec spec = tiny_spec();
    auto data = toy_pair(spec);
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    cfg.epochs = 3;
    cfg.seed = 33;

    TrainResult r = train(spec, data, data, cfg);
    Cnn fresh = Cnn::init(spec, cfg.seed);
    for (std::size_t i = 0; i < fresh.fc_weights.size(); ++i)
        CHECK(r.model.fc_weights[i] == fresh.fc_weights[i]);
    for (std::size_t i = 0; i < fresh.conv_kernels[0].size(); ++i)
        CHECK(r.model.conv_kernels[0][i] == fresh.conv_kernels[0][i]);
}

TEST_CASE("train rejects bad splits")
{
    NetworkSpec spec = tiny_spec();
    auto data = toy_pair(spec);
    TrainConfig cfg;
    cfg.epochs = 1;

    CHECK_THROWS_AS(train(spec, {}, data, cfg), std::invalid_argument);
    CHECK_THROWS_AS(train(spec, data, {}, cfg), std::invalid_argument);

    auto sterile_val = data;
    sterile_val[0].variant = Variant::Sterile;
    CHECK_THROWS_AS(train(spec, data, sterile_val, cfg), std::invalid_argument);

    auto wrong_shape = data;
    wrong_shape[1].image = Tensor({spec.input_h, spec.input_w + 1, spec.input_c});
    CHECK_THROWS_AS(train(spec, wrong_shape, data, cfg), std::invalid_argument);

    TrainConfig bad = cfg;
    bad.batch_size = 0;
    CHECK_THROWS_AS(train(spec, data, data, bad), std::invalid_argument);
    bad = cfg;
    bad.epochs = 0;
    CHECK_THROWS_AS(train(spec, data, data, bad), std::invalid_argument);
    bad = cfg;
    bad.learning_rate = -0.1;
    CHECK_THROWS_AS(train(spec, data, data, bad), std::invalid_argument);
}

TEST_CASE("evaluate on a constant model and a matching oracle")
{
    NetworkSpec spec = tiny_spec();
    Cnn m = Cnn::init(spec, 3);
    for (auto& k : m.conv_kernels) std::fill(k.data.begin(), k.data.end(), 0.0);
    std::fill(m.fc_weights.data.begin(), m.fc_weights.data.end(), 0.0);
    m.fc_bias.data = {1.0, 0.0, 0.0};

    Rng rng(47);
    std::vector<dsp::ProcessedSample> balanced;
    for (int i = 0; i < 12; ++i)
        balanced.push_back(
            make_sample(random_tensor({spec.input_h, spec.input_w, spec.input_c}, rng),
                        static_cast<GestureClass>(i % 3)));

    Metrics cm = evaluate(m, balanced);
    CHECK(cm.accuracy == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    for (int t = 0; t < 3; ++t) {
        CHECK(cm.confusion[static_cast<std::size_t>(t)][0] == 4);
        CHECK(cm.confusion[static_cast<std::size_t>(t)][1] == 0);
        CHECK(cm.confusion[static_cast<std::size_t>(t)][2] == 0);
    }

    // Relabeling every sample with the model's own prediction makes the
    // confusion matrix diagonal by construction.
    auto oracle = balanced;
    for (auto& s : oracle) s.label = static_cast<GestureClass>(m.predict(s.image));
    Metrics om = evaluate(m, oracle);
    CHECK(om.accuracy == 1.0);
    CHECK(om.confusion[0][0] == 12);

    CHECK_THROWS_AS(evaluate(m, {}), std::invalid_argument);
}

TEST_CASE("evaluate counts are permutation invariant")
{
    NetworkSpec spec = tiny_spec();
    Cnn m = Cnn::init(spec, 13);
    Rng rng(53);
    std::vector<dsp::ProcessedSample> data;
    for (int i = 0; i < 23; ++i)
        data.push_back(make_sample(random_tensor({spec.input_h, spec.input_w, spec.input_c}, rng),
                                   static_cast<GestureClass>(rng.below(3))));

    Metrics a = evaluate(m, data);
    std::vector<dsp::ProcessedSample> reversed(data.rbegin(), data.rend());
    Metrics b = evaluate(m, reversed);

    CHECK(a.accuracy == b.accuracy);
    CHECK(a.loss == doctest::Approx(b.loss).epsilon(1e-12));
    for (int t = 0; t < 3; ++t)
        for (int p = 0; p < 3; ++p)
            CHECK(a.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] ==
                  b.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]);

    // Row sums recover per-class counts regardless of model quality.
    int counts[3] = {};
    for (const auto& s : data) ++counts[static_cast<int>(s.label)];
    for (int t = 0; t < 3; ++t) {
        int row = 0;
        for (int p = 0; p < 3; ++p)
            row += a.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
        CHECK(row == counts[t]);
    }
}

TEST_CASE("network spec presets and validation")
{
    NetworkSpec r = NetworkSpec::for_mode(Mode::Range);
    CHECK(r.input_w == 8);
    CHECK(r.kernel_w == 2);
    CHECK(r.kernel_h == 13);
    CHECK(r.filters == 16);
    CHECK_NOTHROW(r.validate());

    NetworkSpec ra = NetworkSpec::for_mode(Mode::RangeAngle);
    CHECK(ra.input_w == 16);
    CHECK(ra.kernel_w == 4);
    CHECK_NOTHROW(ra.validate());

    NetworkSpec bad = r;
    bad.kernel_h = 65;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = r;
    bad.filters = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = r;
    bad.num_classes = 4;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = r;
    bad.conv_blocks = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("initialization is seeded with zero biases")
{
    NetworkSpec spec = tiny_spec();
    Cnn a = Cnn::init(spec, 99);
    Cnn b = Cnn::init(spec, 99);
    for (std::size_t i = 0; i < a.fc_weights.size(); ++i)
        CHECK(a.fc_weights[i] == b.fc_weights[i]);
    for (double v : a.conv_biases[0].data) CHECK(v == 0.0);
    for (double v : a.fc_bias.data) CHECK(v == 0.0);

    double sumsq = 0.0;
    for (double v : a.conv_kernels[0].data) sumsq += v * v;
    CHECK(sumsq > 0.0);

    Cnn c = Cnn::init(spec, 100);
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < a.fc_weights.size(); ++i)
        if (a.fc_weights[i] != c.fc_weights[i]) ++diffs;
    CHECK(diffs > 0);
}
