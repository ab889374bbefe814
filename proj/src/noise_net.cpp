#include "sozloc/noise_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "sozloc/errors.hpp"

namespace sozloc {

namespace {

constexpr char kMagic[4] = {'S', 'Z', 'N', 'N'};
constexpr std::uint32_t kVersion = 1;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double next_uniform(std::uint64_t* state) {
    *state = *state + 1;
    return static_cast<double>(splitmix64(*state) >> 11) * 0x1.0p-53;
}

void validate_config(const NetworkConfig& cfg) {
    if (cfg.input_h < 8 || cfg.input_w < 8 || cfg.input_h % 8 != 0 || cfg.input_w % 8 != 0) {
        throw ArgumentError("network: input dims must be positive multiples of 8 (three 2x2 pools)");
    }
    for (int f : cfg.conv_filters) {
        if (f < 1) throw ArgumentError("network: conv filter counts must be positive");
    }
    if (cfg.dense_units < 1) throw ArgumentError("network: dense_units must be positive");
    if (cfg.dropout < 0.0 || cfg.dropout >= 1.0) throw ArgumentError("network: dropout must be in [0,1)");
    if (cfg.n_classes < 1) throw ArgumentError("network: n_classes must be >= 1");
}

}  // namespace

struct NoiseNet::Shapes {
    int h1, w1, h2, w2, h3, w3;      // post-pool spatial dims
    int flat;                        // flattened conv output
    int n_out;
    // parameter offsets, declaration order
    std::size_t conv_w[3], conv_b[3], dense_w, dense_b, out_w, out_b, total;

    explicit Shapes(const NetworkConfig& cfg) {
        h1 = cfg.input_h / 2;
        w1 = cfg.input_w / 2;
        h2 = h1 / 2;
        w2 = w1 / 2;
        h3 = h2 / 2;
        w3 = w2 / 2;
        flat = cfg.conv_filters[2] * h3 * w3;
        n_out = cfg.n_classes == 1 ? 1 : cfg.n_classes;
        std::size_t off = 0;
        int in_ch = 3;
        for (int layer = 0; layer < 3; ++layer) {
            conv_w[layer] = off;
            off += static_cast<std::size_t>(cfg.conv_filters[layer]) * in_ch * 9;
            conv_b[layer] = off;
            off += cfg.conv_filters[layer];
            in_ch = cfg.conv_filters[layer];
        }
        dense_w = off;
        off += static_cast<std::size_t>(cfg.dense_units) * flat;
        dense_b = off;
        off += cfg.dense_units;
        out_w = off;
        off += static_cast<std::size_t>(n_out) * cfg.dense_units;
        out_b = off;
        off += n_out;
        total = off;
    }
};

namespace {

struct Workspace {
    // activations per stage
    std::vector<double> conv_out[3];   // pre-relu conv outputs (full res of stage)
    std::vector<double> pooled[3];     // post relu+pool
    std::vector<int> pool_arg[3];      // argmax flat index into conv_out
    std::vector<double> dense_pre;     // pre-relu dense
    std::vector<double> dense_act;     // post relu (+dropout scaling when training)
    std::vector<double> drop_mask;     // multiplicative dropout factors
    std::vector<double> logits;
    std::vector<double> probs;
};

void conv3x3_same(const double* in, int in_ch, int h, int w, const double* weights,
                  const double* bias, int out_ch, double* out) {
    const std::size_t plane = static_cast<std::size_t>(h) * w;
    for (int oc = 0; oc < out_ch; ++oc) {
        double* dst = out + oc * plane;
        std::fill(dst, dst + plane, bias[oc]);
        for (int ic = 0; ic < in_ch; ++ic) {
            const double* src = in + ic * plane;
            const double* k = weights + (static_cast<std::size_t>(oc) * in_ch + ic) * 9;
            for (int y = 0; y < h; ++y) {
                const int y0 = std::max(0, y - 1), y1 = std::min(h - 1, y + 1);
                double* row = dst + static_cast<std::size_t>(y) * w;
                for (int ky = y0; ky <= y1; ++ky) {
                    const double* srow = src + static_cast<std::size_t>(ky) * w;
                    const double* kk = k + (ky - y + 1) * 3;
                    for (int x = 0; x < w; ++x) {
                        double acc = 0.0;
                        if (x > 0) acc += kk[0] * srow[x - 1];
                        acc += kk[1] * srow[x];
                        if (x + 1 < w) acc += kk[2] * srow[x + 1];
                        row[x] += acc;
                    }
                }
            }
        }
    }
}

void relu_maxpool(const std::vector<double>& conv, int ch, int h, int w, std::vector<double>& pooled,
                  std::vector<int>& arg) {
    const int ph = h / 2, pw = w / 2;
    pooled.assign(static_cast<std::size_t>(ch) * ph * pw, 0.0);
    arg.assign(pooled.size(), 0);
    for (int c = 0; c < ch; ++c) {
        const std::size_t in_base = static_cast<std::size_t>(c) * h * w;
        const std::size_t out_base = static_cast<std::size_t>(c) * ph * pw;
        for (int y = 0; y < ph; ++y) {
            for (int x = 0; x < pw; ++x) {
                double best = -std::numeric_limits<double>::infinity();
                int best_idx = 0;
                for (int dy = 0; dy < 2; ++dy) {
                    for (int dx = 0; dx < 2; ++dx) {
                        const std::size_t idx = in_base + static_cast<std::size_t>(2 * y + dy) * w + (2 * x + dx);
                        const double v = std::max(0.0, conv[idx]);
                        if (v > best) {
                            best = v;
                            best_idx = static_cast<int>(idx);
                        }
                    }
                }
                pooled[out_base + static_cast<std::size_t>(y) * pw + x] = best;
                arg[out_base + static_cast<std::size_t>(y) * pw + x] = best_idx;
            }
        }
    }
}

// forward through the whole net; dropout applied when dropout_state != nullptr
void forward_impl(const NetworkConfig& cfg, const NoiseNet::Shapes& sh, const std::vector<double>& params,
                  const std::vector<double>& chw, Workspace& ws, std::uint64_t* dropout_state) {
    const int dims_h[4] = {cfg.input_h, sh.h1, sh.h2, sh.h3};
    const int dims_w[4] = {cfg.input_w, sh.w1, sh.w2, sh.w3};
    int in_ch = 3;
    const double* in = chw.data();
    for (int layer = 0; layer < 3; ++layer) {
        const int h = dims_h[layer], w = dims_w[layer];
        ws.conv_out[layer].assign(static_cast<std::size_t>(cfg.conv_filters[layer]) * h * w, 0.0);
        conv3x3_same(in, in_ch, h, w, params.data() + sh.conv_w[layer], params.data() + sh.conv_b[layer],
                     cfg.conv_filters[layer], ws.conv_out[layer].data());
        relu_maxpool(ws.conv_out[layer], cfg.conv_filters[layer], h, w, ws.pooled[layer], ws.pool_arg[layer]);
        in = ws.pooled[layer].data();
        in_ch = cfg.conv_filters[layer];
    }

    const std::vector<double>& flat = ws.pooled[2];
    ws.dense_pre.assign(cfg.dense_units, 0.0);
    const double* dw = params.data() + sh.dense_w;
    for (int u = 0; u < cfg.dense_units; ++u) {
        const double* wrow = dw + static_cast<std::size_t>(u) * sh.flat;
        double acc = params[sh.dense_b + u];
        for (int i = 0; i < sh.flat; ++i) acc += wrow[i] * flat[i];
        ws.dense_pre[u] = acc;
    }
    ws.dense_act.assign(cfg.dense_units, 0.0);
    ws.drop_mask.assign(cfg.dense_units, 1.0);
    const double keep = 1.0 - cfg.dropout;
    for (int u = 0; u < cfg.dense_units; ++u) {
        double a = std::max(0.0, ws.dense_pre[u]);
        if (dropout_state && cfg.dropout > 0.0) {
            if (next_uniform(dropout_state) < cfg.dropout) {
                ws.drop_mask[u] = 0.0;
            } else {
                ws.drop_mask[u] = 1.0 / keep;
            }
            a *= ws.drop_mask[u];
        }
        ws.dense_act[u] = a;
    }

    ws.logits.assign(sh.n_out, 0.0);
    const double* ow = params.data() + sh.out_w;
    for (int o = 0; o < sh.n_out; ++o) {
        double acc = params[sh.out_b + o];
        const double* wrow = ow + static_cast<std::size_t>(o) * cfg.dense_units;
        for (int u = 0; u < cfg.dense_units; ++u) acc += wrow[u] * ws.dense_act[u];
        ws.logits[o] = acc;
    }

    ws.probs.assign(sh.n_out, 0.0);
    if (cfg.n_classes == 1) {
        ws.probs[0] = 1.0 / (1.0 + std::exp(-ws.logits[0]));
    } else {
        const double m = *std::max_element(ws.logits.begin(), ws.logits.end());
        double z = 0.0;
        for (int o = 0; o < sh.n_out; ++o) {
            ws.probs[o] = std::exp(ws.logits[o] - m);
            z += ws.probs[o];
        }
        for (int o = 0; o < sh.n_out; ++o) ws.probs[o] /= z;
    }
}

double sample_loss(const NetworkConfig& cfg, const Workspace& ws, int label,
                   const std::vector<double>& class_weights) {
    constexpr double kEps = 1e-12;
    if (cfg.n_classes == 1) {
        const double p = std::clamp(ws.probs[0], kEps, 1.0 - kEps);
        return label ? -std::log(p) : -std::log(1.0 - p);
    }
    const double w = class_weights.empty() ? 1.0 : class_weights[label];
    return -w * std::log(std::clamp(ws.probs[label], kEps, 1.0));
}

// gradient of the sample loss wrt logits
void loss_backward_logits(const NetworkConfig& cfg, const Workspace& ws, int label,
                          const std::vector<double>& class_weights, std::vector<double>& dlogits) {
    dlogits.assign(ws.logits.size(), 0.0);
    if (cfg.n_classes == 1) {
        dlogits[0] = ws.probs[0] - label;
        return;
    }
    const double w = class_weights.empty() ? 1.0 : class_weights[label];
    for (std::size_t o = 0; o < ws.logits.size(); ++o) {
        dlogits[o] = w * (ws.probs[o] - (static_cast<int>(o) == label ? 1.0 : 0.0));
    }
}

void backward_impl(const NetworkConfig& cfg, const NoiseNet::Shapes& sh, const std::vector<double>& params,
                   const std::vector<double>& chw, const Workspace& ws, const std::vector<double>& dlogits,
                   std::vector<double>& grad) {
    std::vector<double> d_dense(cfg.dense_units, 0.0);
    for (int o = 0; o < sh.n_out; ++o) {
        const double g = dlogits[o];
        grad[sh.out_b + o] += g;
        const std::size_t row = sh.out_w + static_cast<std::size_t>(o) * cfg.dense_units;
        const double* wrow = params.data() + row;
        for (int u = 0; u < cfg.dense_units; ++u) {
            grad[row + u] += g * ws.dense_act[u];
            d_dense[u] += g * wrow[u];
        }
    }
    // through dropout and relu
    for (int u = 0; u < cfg.dense_units; ++u) {
        d_dense[u] *= ws.drop_mask[u];
        if (ws.dense_pre[u] <= 0.0) d_dense[u] = 0.0;
    }
    std::vector<double> d_flat(sh.flat, 0.0);
    const std::vector<double>& flat = ws.pooled[2];
    for (int u = 0; u < cfg.dense_units; ++u) {
        const double g = d_dense[u];
        if (g == 0.0) continue;
        grad[sh.dense_b + u] += g;
        const std::size_t row = sh.dense_w + static_cast<std::size_t>(u) * sh.flat;
        const double* wrow = params.data() + row;
        for (int i = 0; i < sh.flat; ++i) {
            grad[row + i] += g * flat[i];
            d_flat[i] += g * wrow[i];
        }
    }

    const int dims_h[4] = {cfg.input_h, sh.h1, sh.h2, sh.h3};
    const int dims_w[4] = {cfg.input_w, sh.w1, sh.w2, sh.w3};
    std::vector<double> d_pooled = std::move(d_flat);
    for (int layer = 2; layer >= 0; --layer) {
        const int h = dims_h[layer], w = dims_w[layer];
        const int ch = cfg.conv_filters[layer];
        // unpool through stored argmax, then relu
        std::vector<double> d_conv(static_cast<std::size_t>(ch) * h * w, 0.0);
        for (std::size_t i = 0; i < d_pooled.size(); ++i) {
            if (d_pooled[i] == 0.0) continue;
            const int src = ws.pool_arg[layer][i];
            if (ws.conv_out[layer][src] > 0.0) d_conv[src] += d_pooled[i];
        }
        const int in_ch = layer == 0 ? 3 : cfg.conv_filters[layer - 1];
        const double* in = layer == 0 ? chw.data() : ws.pooled[layer - 1].data();
        std::vector<double> d_in(static_cast<std::size_t>(in_ch) * h * w, 0.0);
        const std::size_t plane = static_cast<std::size_t>(h) * w;
        for (int oc = 0; oc < ch; ++oc) {
            const double* dout = d_conv.data() + oc * plane;
            double bias_acc = 0.0;
            for (std::size_t i = 0; i < plane; ++i) bias_acc += dout[i];
            grad[sh.conv_b[layer] + oc] += bias_acc;
            for (int ic = 0; ic < in_ch; ++ic) {
                const double* src = in + ic * plane;
                double* dsrc = d_in.data() + ic * plane;
                const std::size_t kbase = sh.conv_w[layer] + (static_cast<std::size_t>(oc) * in_ch + ic) * 9;
                const double* k = params.data() + kbase;
                for (int y = 0; y < h; ++y) {
                    const double* drow = dout + static_cast<std::size_t>(y) * w;
                    for (int ky = -1; ky <= 1; ++ky) {
                        const int sy = y + ky;
                        if (sy < 0 || sy >= h) continue;
                        const double* srow = src + static_cast<std::size_t>(sy) * w;
                        double* dsrow = dsrc + static_cast<std::size_t>(sy) * w;
                        for (int kx = -1; kx <= 1; ++kx) {
                            const int ki = (ky + 1) * 3 + (kx + 1);
                            const double kv = k[ki];
                            double wacc = 0.0;
                            const int x0 = std::max(0, -kx), x1 = w - 1 - std::max(0, kx);
                            for (int x = x0; x <= x1; ++x) {
                                const double g = drow[x];
                                wacc += g * srow[x + kx];
                                dsrow[x + kx] += g * kv;
                            }
                            grad[kbase + ki] += wacc;
                        }
                    }
                }
            }
        }
        if (layer > 0) d_pooled = std::move(d_in);
    }
}

}  // namespace

NoiseNet::NoiseNet(const NetworkConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
    validate_config(cfg);
    const Shapes sh(cfg);
    params_.assign(sh.total, 0.0);
    std::mt19937_64 rng(seed);
    auto he_uniform = [&](std::size_t offset, std::size_t count, int fan_in) {
        const double limit = std::sqrt(6.0 / fan_in);
        std::uniform_real_distribution<double> dist(-limit, limit);
        for (std::size_t i = 0; i < count; ++i) params_[offset + i] = dist(rng);
    };
    int in_ch = 3;
    for (int layer = 0; layer < 3; ++layer) {
        he_uniform(sh.conv_w[layer], static_cast<std::size_t>(cfg.conv_filters[layer]) * in_ch * 9, in_ch * 9);
        in_ch = cfg.conv_filters[layer];
    }
    he_uniform(sh.dense_w, static_cast<std::size_t>(cfg.dense_units) * sh.flat, sh.flat);
    he_uniform(sh.out_w, static_cast<std::size_t>(sh.n_out) * cfg.dense_units, cfg.dense_units);
}

std::size_t NoiseNet::parameter_count() const { return params_.size(); }

std::vector<double> NoiseNet::forward(const std::vector<double>& chw) const {
    const Shapes sh(cfg_);
    if (chw.size() != static_cast<std::size_t>(3) * cfg_.input_h * cfg_.input_w) {
        throw ArgumentError("forward: input size does not match the network's input dims");
    }
    Workspace ws;
    forward_impl(cfg_, sh, params_, chw, ws, nullptr);
    return ws.probs;
}

double NoiseNet::batch_loss(const std::vector<const Sample*>& batch,
                            const std::vector<double>& class_weights) const {
    if (batch.empty()) throw ArgumentError("batch_loss: empty batch");
    const Shapes sh(cfg_);
    Workspace ws;
    double acc = 0.0;
    for (const Sample* s : batch) {
        forward_impl(cfg_, sh, params_, s->chw, ws, nullptr);
        acc += sample_loss(cfg_, ws, s->label, class_weights);
    }
    return acc / static_cast<double>(batch.size());
}

double NoiseNet::batch_gradient(const std::vector<const Sample*>& batch, std::vector<double>& grad,
                                const std::vector<double>& class_weights,
                                std::uint64_t* dropout_state) const {
    if (batch.empty()) throw ArgumentError("batch_gradient: empty batch");
    const Shapes sh(cfg_);
    grad.assign(params_.size(), 0.0);
    Workspace ws;
    std::vector<double> dlogits;
    double loss = 0.0;
    for (const Sample* s : batch) {
        forward_impl(cfg_, sh, params_, s->chw, ws, dropout_state);
        loss += sample_loss(cfg_, ws, s->label, class_weights);
        loss_backward_logits(cfg_, ws, s->label, class_weights, dlogits);
        backward_impl(cfg_, sh, params_, s->chw, ws, dlogits, grad);
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double& g : grad) g *= inv;
    return loss * inv;
}

std::vector<double> NoiseNet::to_chw(const Image& img, int target_h, int target_w) {
    const Image resized = resize_image(img, target_h, target_w);
    std::vector<double> chw(static_cast<std::size_t>(3) * target_h * target_w);
    const std::size_t plane = static_cast<std::size_t>(target_h) * target_w;
    for (int r = 0; r < target_h; ++r) {
        for (int c = 0; c < target_w; ++c) {
            for (int ch = 0; ch < 3; ++ch) {
                chw[ch * plane + static_cast<std::size_t>(r) * target_w + c] =
                    resized.at(r, c, ch) / 255.0;
            }
        }
    }
    return chw;
}

void NoiseNet::save(const std::string& path) const {
    std::ofstream out(path + ".tmp", std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open checkpoint for writing: " + path);
    out.write(kMagic, 4);
    auto put_u32 = [&](std::uint32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_i32 = [&](std::int32_t v) { out.write(reinterpret_cast<const char*>(&v), 4); };
    auto put_f64 = [&](double v) { out.write(reinterpret_cast<const char*>(&v), 8); };
    put_u32(kVersion);
    put_i32(cfg_.input_h);
    put_i32(cfg_.input_w);
    for (int f : cfg_.conv_filters) put_i32(f);
    put_i32(cfg_.dense_units);
    put_i32(cfg_.n_classes);
    put_f64(cfg_.dropout);
    put_f64(cfg_.learning_rate);
    const std::uint64_t n = params_.size();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(params_.data()), static_cast<std::streamsize>(n * 8));
    if (!out) throw DataError("checkpoint write failed: " + path);
    out.close();
    std::remove(path.c_str());
    if (std::rename((path + ".tmp").c_str(), path.c_str()) != 0) {
        throw DataError("checkpoint rename failed: " + path);
    }
}

NoiseNet NoiseNet::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw DataError("not a model checkpoint: " + path);
    }
    auto get_u32 = [&] {
        std::uint32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_i32 = [&] {
        std::int32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        return v;
    };
    auto get_f64 = [&] {
        double v;
        in.read(reinterpret_cast<char*>(&v), 8);
        return v;
    };
    if (get_u32() != kVersion) throw DataError("unsupported checkpoint version: " + path);
    NoiseNet net;
    net.cfg_.input_h = get_i32();
    net.cfg_.input_w = get_i32();
    for (int& f : net.cfg_.conv_filters) f = get_i32();
    net.cfg_.dense_units = get_i32();
    net.cfg_.n_classes = get_i32();
    net.cfg_.dropout = get_f64();
    net.cfg_.learning_rate = get_f64();
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 8);
    if (!in) throw DataError("truncated checkpoint: " + path);
    validate_config(net.cfg_);
    const Shapes sh(net.cfg_);
    if (n != sh.total) throw DataError("checkpoint parameter count mismatch: " + path);
    net.params_.resize(n);
    in.read(reinterpret_cast<char*>(net.params_.data()), static_cast<std::streamsize>(n * 8));
    if (!in) throw DataError("truncated checkpoint: " + path);
    return net;
}

std::vector<double> inverse_frequency_weights(const std::vector<long>& class_counts) {
    std::vector<double> weights(class_counts.size());
    double total = 0.0;
    for (std::size_t c = 0; c < class_counts.size(); ++c) {
        if (class_counts[c] <= 0) throw ArgumentError("class weights: every class needs samples");
        weights[c] = 1.0 / static_cast<double>(class_counts[c]);
        total += weights[c];
    }
    const double mean = total / static_cast<double>(class_counts.size());
    for (double& w : weights) w /= mean;
    return weights;
}

namespace {

struct AdamState {
    std::vector<double> m, v;
    long t = 0;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void step(std::vector<double>& params, const std::vector<double>& grad, double lr) {
        constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
        ++t;
        const double c1 = 1.0 - std::pow(b1, t);
        const double c2 = 1.0 - std::pow(b2, t);
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = b1 * m[i] + (1 - b1) * grad[i];
            v[i] = b2 * v[i] + (1 - b2) * grad[i] * grad[i];
            params[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps);
        }
    }
};

NoiseNet train_impl(const std::vector<Sample>& data, const NetworkConfig& net_cfg,
                    const TrainConfig& train_cfg, bool multiclass, TrainingLog* log) {
    if (train_cfg.patience < 1) throw ArgumentError("train: patience must be >= 1");
    if (train_cfg.batch_size < 1) throw ArgumentError("train: batch_size must be >= 1");
    if (!(train_cfg.val_fraction > 0.0) || train_cfg.val_fraction > 0.5) {
        throw ArgumentError("train: val_fraction must be in (0, 0.5]");
    }
    const int n_classes = multiclass ? net_cfg.n_classes : 2;
    std::vector<std::vector<int>> by_class(n_classes);
    for (int i = 0; i < static_cast<int>(data.size()); ++i) {
        const int label = data[i].label;
        if (label < 0 || label >= n_classes) throw ArgumentError("train: label out of range");
        by_class[label].push_back(i);
    }
    for (int c = 0; c < n_classes; ++c) {
        if (by_class[c].empty()) {
            throw ArgumentError("train: class " + std::to_string(c) + " has no samples");
        }
    }

    std::vector<double> class_weights;
    if (multiclass) {
        if (!train_cfg.class_weights.empty()) {
            class_weights = train_cfg.class_weights;
        } else {
            std::vector<long> counts(n_classes);
            for (int c = 0; c < n_classes; ++c) counts[c] = static_cast<long>(by_class[c].size());
            class_weights = inverse_frequency_weights(counts);
        }
    }

    // stratified validation split
    std::mt19937_64 split_rng(splitmix64(train_cfg.seed ^ 0x5afe5eedULL));
    std::vector<int> train_idx, val_idx;
    for (auto& idx : by_class) {
        std::shuffle(idx.begin(), idx.end(), split_rng);
        std::size_t n_val = static_cast<std::size_t>(std::lround(train_cfg.val_fraction * idx.size()));
        n_val = std::clamp<std::size_t>(n_val, idx.size() > 1 ? 1 : 0, idx.size() - 1);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            (i < n_val ? val_idx : train_idx).push_back(idx[i]);
        }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(val_idx.begin(), val_idx.end());
    if (train_idx.empty() || val_idx.empty()) throw ArgumentError("train: dataset too small to split");

    std::vector<const Sample*> val_batch;
    for (int i : val_idx) val_batch.push_back(&data[i]);

    NoiseNet net(net_cfg, splitmix64(train_cfg.seed ^ 0x1417feedULL));
    AdamState adam(net.parameters().size());
    std::mt19937_64 shuffle_rng(splitmix64(train_cfg.seed ^ 0xba7c4e5ULL));
    std::uint64_t dropout_state = splitmix64(train_cfg.seed ^ 0xd40b0a57ULL);

    std::vector<double> grad;
    std::vector<double> best_params = net.parameters();
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = -1;
    int bad_epochs = 0;

    for (int epoch = 1; epoch <= train_cfg.max_epochs; ++epoch) {
        std::shuffle(train_idx.begin(), train_idx.end(), shuffle_rng);
        double train_loss = 0.0;
        long batches = 0;
        for (std::size_t start = 0; start < train_idx.size(); start += train_cfg.batch_size) {
            std::vector<const Sample*> batch;
            const std::size_t end = std::min(train_idx.size(), start + train_cfg.batch_size);
            for (std::size_t i = start; i < end; ++i) batch.push_back(&data[train_idx[i]]);
            train_loss += net.batch_gradient(batch, grad, class_weights, &dropout_state);
            adam.step(net.parameters(), grad, net_cfg.learning_rate);
            ++batches;
        }
        train_loss /= std::max(1L, batches);

        const double val_loss = net.batch_loss(val_batch, class_weights);
        long correct = 0;
        for (const Sample* s : val_batch) {
            const std::vector<double> p = net.forward(s->chw);
            int pred;
            if (net_cfg.n_classes == 1) {
                pred = p[0] > 0.5 ? 1 : 0;
            } else {
                pred = static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
            }
            if (pred == s->label) ++correct;
        }
        const double val_acc = static_cast<double>(correct) / val_batch.size();
        if (log) log->epochs.push_back({epoch, train_loss, val_loss, val_acc});

        if (val_loss < best_val) {
            best_val = val_loss;
            best_epoch = epoch;
            best_params = net.parameters();
            bad_epochs = 0;
        } else {
            ++bad_epochs;
            if (bad_epochs >= train_cfg.patience) break;
        }
    }

    net.parameters() = best_params;
    if (log) {
        log->best_epoch = best_epoch;
        log->best_val_loss = best_val;
    }
    return net;
}

}  // namespace

NoiseNet train_binary(const std::vector<Sample>& data, const NetworkConfig& net_cfg,
                      const TrainConfig& train_cfg, TrainingLog* log) {
    NetworkConfig cfg = net_cfg;
    cfg.n_classes = 1;
    return train_impl(data, cfg, train_cfg, false, log);
}

NoiseNet train_multiclass_baseline(const std::vector<Sample>& data, const NetworkConfig& net_cfg,
                                   const TrainConfig& train_cfg, TrainingLog* log) {
    if (net_cfg.n_classes < 2) throw ArgumentError("train_multiclass_baseline: need n_classes >= 2");
    return train_impl(data, net_cfg, train_cfg, true, log);
}

double finite_difference_check(NoiseNet& net, const std::vector<Sample>& samples, double h) {
    std::vector<const Sample*> batch;
    for (const auto& s : samples) batch.push_back(&s);
    std::vector<double> analytic;
    net.batch_gradient(batch, analytic, {}, nullptr);

    double worst = 0.0;
    std::vector<double>& params = net.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = net.batch_loss(batch);
        params[i] = saved - h;
        const double down = net.batch_loss(batch);
        params[i] = saved;
        const double fd = (up - down) / (2 * h);
        const double err = std::abs(fd - analytic[i]) / std::max(1e-8, std::abs(fd) + std::abs(analytic[i]));
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace sozloc
