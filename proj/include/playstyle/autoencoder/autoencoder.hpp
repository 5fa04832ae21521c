#pragma once

#include "playstyle/autoencoder/config.hpp"
#include "playstyle/codec/sequence.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

namespace playstyle::autoencoder {

class TrainingError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Random-access source of samples, materialised lazily.
struct SampleSet {
    std::size_t size = 0;
    std::function<codec::SequenceSample(std::size_t)> get;

    [[nodiscard]] static SampleSet of(const std::vector<codec::SequenceSample> &samples);
};

using Latent = std::vector<float>;

/// A sequence autoencoder with its configuration. Inference is deterministic.
class Autoencoder
{
  public:
    Autoencoder(const ModelConfig &config, std::uint64_t seed);
    ~Autoencoder();
    Autoencoder(Autoencoder &&) noexcept;
    Autoencoder &operator=(Autoencoder &&) noexcept;

    [[nodiscard]] const ModelConfig &config() const noexcept;

    /// Latent vectors of every sample in the set, computed in batches.
    [[nodiscard]] std::vector<Latent> encode(const SampleSet &samples, int batch_size = 64) const;
    [[nodiscard]] Latent encode(const codec::SequenceSample &sample) const;

    /// Reconstruction loss and per-cell categorical accuracy over a set.
    struct Evaluation {
        double loss = 0.0;
        double cell_accuracy = 0.0;
    };
    [[nodiscard]] Evaluation evaluate(const SampleSet &samples, const LossWeights &weights = {}, int batch_size = 64) const;

    /// Checkpoint with the model configuration embedded.
    void save(const std::filesystem::path &path) const;
    [[nodiscard]] static Autoencoder load(const std::filesystem::path &path);

    struct Impl;
    [[nodiscard]] Impl &impl() noexcept { return *impl_; }
    [[nodiscard]] const Impl &impl() const noexcept { return *impl_; }

  private:
    explicit Autoencoder(std::unique_ptr<Impl> impl);
    std::unique_ptr<Impl> impl_;
};

struct TrainResult {
    Autoencoder model;// weights of the best validation epoch
    std::vector<EpochStats> history;// entry 0 is the untrained model
    int best_epoch = 0;
};

using EpochCallback = std::function<void(const EpochStats &)>;

/// Adam on the reconstruction loss with early stopping on validation loss.
/// Throws TrainingError on a non-finite loss or an empty split.
[[nodiscard]] TrainResult train(const ModelConfig &model,
  const TrainConfig &config,
  const SampleSet &train_set,
  const SampleSet &val_set,
  const EpochCallback &on_epoch = {});

}// namespace playstyle::autoencoder
