#include "playstyle/autoencoder/model.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace playstyle::autoencoder {

namespace F = torch::nn::functional;

int head_size(const codec::CategoricalGroup &g) noexcept { return g.size + (g.nullable ? 1 : 0); }

namespace {

    int output_channels(const codec::FrameSchema &schema)
    {
        int n = static_cast<int>(schema.numeric.size());
        for (const auto &g : schema.groups) { n += head_size(g); }
        return n;
    }

    torch::Tensor numeric_index(const codec::FrameSchema &schema, const torch::Device &device)
    {
        std::vector<std::int64_t> idx(schema.numeric.begin(), schema.numeric.end());
        return torch::tensor(idx, torch::TensorOptions().dtype(torch::kLong).device(device));
    }

    void check_frames(const torch::Tensor &t, const ModelConfig &c, int leading, const char *what)
    {
        const auto dims = t.dim();
        if (dims != leading + 3 || t.size(dims - 3) != c.height || t.size(dims - 2) != c.width || t.size(dims - 1) != c.channels()) {
            throw std::invalid_argument(fmt::format("{}: expected {} leading dims then ({}, {}, {}), got {}",
              what, leading, c.height, c.width, c.channels(), fmt::join(t.sizes().vec(), "x")));
        }
    }

}// namespace

SequenceAutoencoderImpl::SequenceAutoencoderImpl(const ModelConfig &config)
  : config_(config), schema_(codec::FrameSchema::for_scheme(config.scheme))
{
    config_.validate();
    const int c = config_.channels();
    conv1_ = register_module("conv1", torch::nn::Conv2d(torch::nn::Conv2dOptions(c, config_.conv1, 3).padding(1)));
    conv2_ = register_module("conv2", torch::nn::Conv2d(torch::nn::Conv2dOptions(config_.conv1, config_.conv2, 3).padding(1)));
    encoder_ = register_module("encoder",
      torch::nn::LSTM(torch::nn::LSTMOptions(config_.flat_size(), config_.hidden).num_layers(config_.layers).bidirectional(true).batch_first(true)));
    decoder_ = register_module("decoder",
      torch::nn::LSTM(torch::nn::LSTMOptions(config_.latent_size(), config_.hidden).num_layers(config_.layers).bidirectional(true).batch_first(true)));
    dense_ = register_module("dense", torch::nn::Linear(2 * config_.hidden, config_.flat_size()));
    up1_ = register_module("up1", torch::nn::ConvTranspose2d(torch::nn::ConvTranspose2dOptions(config_.conv2, config_.conv1, 2).stride(2)));
    up2_ = register_module("up2", torch::nn::ConvTranspose2d(torch::nn::ConvTranspose2dOptions(config_.conv1, output_channels(schema_), 2).stride(2)));
}

torch::Tensor SequenceAutoencoderImpl::frame_encode(const torch::Tensor &frames)
{
    check_frames(frames, config_, 1, "frame_encode");
    auto y = frames.permute({ 0, 3, 1, 2 });
    y = torch::gelu(F::max_pool2d(conv1_(y), F::MaxPool2dFuncOptions(2)));
    y = torch::gelu(F::max_pool2d(conv2_(y), F::MaxPool2dFuncOptions(2)));
    return y.flatten(1);
}

torch::Tensor SequenceAutoencoderImpl::encode(const torch::Tensor &x)
{
    check_frames(x, config_, 2, "encode");
    if (x.size(1) != config_.seq_len) {
        throw std::invalid_argument(fmt::format("encode: expected {} frames, got {}", config_.seq_len, x.size(1)));
    }
    const auto b = x.size(0);
    const auto t = x.size(1);
    auto emb = frame_encode(x.reshape({ b * t, config_.height, config_.width, config_.channels() })).reshape({ b, t, -1 });
    const auto h = std::get<0>(std::get<1>(encoder_->forward(emb)));
    return torch::cat({ h[-2], h[-1] }, 1);
}

Reconstruction SequenceAutoencoderImpl::decode(const torch::Tensor &z, int length)
{
    if (z.dim() != 2 || z.size(1) != config_.latent_size()) {
        throw std::invalid_argument(fmt::format("decode: expected (B, {}) latents, got {}", config_.latent_size(), fmt::join(z.sizes().vec(), "x")));
    }
    if (length <= 0) { throw std::invalid_argument("decode: length must be positive"); }
    const auto b = z.size(0);
    auto rep = z.unsqueeze(1).expand({ b, length, config_.latent_size() }).contiguous();
    auto y = std::get<0>(decoder_->forward(rep));
    y = torch::gelu(dense_(y)).reshape({ b * length, config_.conv2, config_.height / 4, config_.width / 4 });
    y = torch::gelu(up1_(y));
    y = up2_(y).permute({ 0, 2, 3, 1 }).reshape({ b, length, config_.height, config_.width, -1 });

    Reconstruction r;
    std::int64_t at = 0;
    for (const auto &g : schema_.groups) {
        const int k = head_size(g);
        r.log_probs.push_back(torch::log_softmax(y.narrow(-1, at, k), -1));
        at += k;
    }
    r.numeric = torch::sigmoid(y.narrow(-1, at, static_cast<std::int64_t>(schema_.numeric.size())));
    return r;
}

Reconstruction SequenceAutoencoderImpl::forward(const torch::Tensor &x) { return decode(encode(x), static_cast<int>(x.size(1))); }

torch::Tensor group_targets(const torch::Tensor &target, const codec::CategoricalGroup &g)
{
    const auto slice = target.narrow(-1, g.first, g.size);
    auto idx = slice.argmax(-1);
    if (g.nullable) { idx = torch::where(slice.sum(-1) < 0.5, torch::full_like(idx, g.size), idx); }
    return idx;
}

torch::Tensor reconstruction_loss(const Reconstruction &r, const torch::Tensor &target, const codec::FrameSchema &schema, const LossWeights &weights)
{
    if (target.dim() != 5 || target.size(-1) != schema.channels || r.log_probs.size() != schema.groups.size()) {
        throw std::invalid_argument("reconstruction_loss: target does not match the frame schema");
    }
    auto categorical = torch::zeros(target.sizes().slice(0, 4), target.options());
    for (std::size_t i = 0; i < schema.groups.size(); ++i) {
        const auto &lp = r.log_probs[i];
        if (lp.sizes().slice(0, 4) != target.sizes().slice(0, 4)) { throw std::invalid_argument("reconstruction_loss: shape mismatch"); }
        categorical = categorical - lp.gather(-1, group_targets(target, schema.groups[i]).unsqueeze(-1)).squeeze(-1);
    }
    const auto numeric_target = target.index_select(-1, numeric_index(schema, target.device()));
    const auto numeric = (r.numeric - numeric_target).pow(2).sum(-1) / static_cast<double>(schema.channels);
    return (weights.categorical * categorical + weights.numeric * numeric).mean();
}

double cell_accuracy(const Reconstruction &r, const torch::Tensor &target, const codec::FrameSchema &schema)
{
    auto ok = torch::ones(target.sizes().slice(0, 4), torch::TensorOptions().dtype(torch::kBool).device(target.device()));
    for (std::size_t i = 0; i < schema.groups.size(); ++i) {
        ok = ok.logical_and(r.log_probs[i].argmax(-1) == group_targets(target, schema.groups[i]));
    }
    return ok.to(torch::kDouble).mean().item<double>();
}

torch::Tensor to_frames(const Reconstruction &r, const codec::FrameSchema &schema)
{
    auto sizes = r.numeric.sizes().vec();
    sizes.back() = schema.channels;
    auto out = torch::zeros(sizes, r.numeric.options());
    for (std::size_t i = 0; i < schema.groups.size(); ++i) {
        const auto &g = schema.groups[i];
        out.narrow(-1, g.first, g.size).copy_(r.log_probs[i].exp().narrow(-1, 0, g.size));
    }
    out.index_copy_(-1, numeric_index(schema, out.device()), r.numeric);
    return out;
}

torch::Tensor batch_tensor(const std::vector<codec::SequenceSample> &samples, codec::Scheme scheme)
{
    if (samples.empty()) { throw std::invalid_argument("batch_tensor: no samples"); }
    const auto &first = samples.front();
    const auto t = static_cast<std::int64_t>(first.actions.size());
    const auto &ref = first.actions.front();
    const std::int64_t h = ref.height();
    const std::int64_t w = ref.width();
    const int co = scheme == codec::Scheme::actions ? 0 : codec::obs::channels;
    const int ca = scheme == codec::Scheme::states ? 0 : codec::act::channels;
    const std::int64_t c = co + ca;
    auto out = torch::empty({ static_cast<std::int64_t>(samples.size()), t, h, w, c });
    float *dst = out.data_ptr<float>();
    for (const auto &s : samples) {
        if (static_cast<std::int64_t>(s.actions.size()) != t || static_cast<std::int64_t>(s.observations.size()) != t) {
            throw std::invalid_argument("batch_tensor: samples differ in length");
        }
        for (std::int64_t f = 0; f < t; ++f) {
            const auto o = s.observations[static_cast<std::size_t>(f)].data();
            const auto a = s.actions[static_cast<std::size_t>(f)].data();
            for (std::int64_t cell = 0; cell < h * w; ++cell) {
                if (co > 0) { dst = std::copy_n(o.begin() + cell * co, co, dst); }
                if (ca > 0) { dst = std::copy_n(a.begin() + cell * ca, ca, dst); }
            }
        }
    }
    return out;
}

}// namespace playstyle::autoencoder
