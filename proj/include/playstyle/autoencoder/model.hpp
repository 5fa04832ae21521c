#pragma once

#include "playstyle/autoencoder/autoencoder.hpp"

#include <torch/torch.h>

namespace playstyle::autoencoder {

/// Decoder output: log-probabilities per categorical group (nullable groups
/// carry an extra trailing "none" class) and squashed numeric channels.
struct Reconstruction {
    std::vector<torch::Tensor> log_probs;// each (B, T, H, W, k)
    torch::Tensor numeric;// (B, T, H, W, n) in [0, 1]
};

class SequenceAutoencoderImpl : public torch::nn::Module
{
  public:
    explicit SequenceAutoencoderImpl(const ModelConfig &config);

    /// (N, H, W, C) frames -> (N, flat_size) embeddings.
    torch::Tensor frame_encode(const torch::Tensor &frames);
    /// (B, T, H, W, C) -> (B, latent_size).
    torch::Tensor encode(const torch::Tensor &x);
    /// (B, latent_size) -> reconstruction of `length` frames.
    Reconstruction decode(const torch::Tensor &z, int length);
    Reconstruction forward(const torch::Tensor &x);

    [[nodiscard]] const ModelConfig &config() const noexcept { return config_; }
    [[nodiscard]] const codec::FrameSchema &schema() const noexcept { return schema_; }

  private:
    ModelConfig config_;
    codec::FrameSchema schema_;
    torch::nn::Conv2d conv1_{ nullptr };
    torch::nn::Conv2d conv2_{ nullptr };
    torch::nn::LSTM encoder_{ nullptr };
    torch::nn::LSTM decoder_{ nullptr };
    torch::nn::Linear dense_{ nullptr };
    torch::nn::ConvTranspose2d up1_{ nullptr };
    torch::nn::ConvTranspose2d up2_{ nullptr };
};
TORCH_MODULE(SequenceAutoencoder);

/// Number of decoder output classes of a group.
[[nodiscard]] int head_size(const codec::CategoricalGroup &g) noexcept;

/// Class index targets (B, T, H, W) of a group; all-zero nullable cells map to the none class.
[[nodiscard]] torch::Tensor group_targets(const torch::Tensor &target, const codec::CategoricalGroup &g);

/// Mean over batch, time and cells of
///   w_cat * sum_groups CE + w_num * sum_numeric (pred - target)^2 / C.
[[nodiscard]] torch::Tensor reconstruction_loss(const Reconstruction &r,
  const torch::Tensor &target,
  const codec::FrameSchema &schema,
  const LossWeights &weights = {});

/// Fraction of cells whose every categorical group argmax matches the target.
[[nodiscard]] double cell_accuracy(const Reconstruction &r, const torch::Tensor &target, const codec::FrameSchema &schema);

/// Dense (B, T, H, W, C) view of a reconstruction: class probabilities (none
/// class dropped) and numeric values at their channel positions.
[[nodiscard]] torch::Tensor to_frames(const Reconstruction &r, const codec::FrameSchema &schema);

/// Stacks samples into a (B, T, H, W, C) float tensor for a scheme.
[[nodiscard]] torch::Tensor batch_tensor(const std::vector<codec::SequenceSample> &samples, codec::Scheme scheme);

/// The module behind an Autoencoder.
[[nodiscard]] SequenceAutoencoder &module(Autoencoder &model);

}// namespace playstyle::autoencoder
