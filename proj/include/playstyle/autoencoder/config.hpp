#pragma once

#include "playstyle/codec/layout.hpp"

#include <cstdint>
#include <nlohmann/json.hpp>
#include <vector>

namespace playstyle::autoencoder {

struct ModelConfig {
    codec::Scheme scheme = codec::Scheme::actions;
    int height = 12;
    int width = 12;
    int seq_len = 32;
    int conv1 = 32;
    int conv2 = 64;
    int hidden = 512;// per LSTM direction
    int layers = 2;

    [[nodiscard]] int channels() const { return codec::FrameSchema::for_scheme(scheme).channels; }
    [[nodiscard]] int latent_size() const noexcept { return 2 * hidden; }
    [[nodiscard]] int flat_size() const noexcept { return conv2 * (height / 4) * (width / 4); }
    /// Throws std::invalid_argument for unusable settings.
    void validate() const;
};

struct LossWeights {
    double categorical = 1.0;
    double numeric = 1.0;
};

struct TrainConfig {
    int epochs = 100;
    int batch_size = 64;
    double learning_rate = 1e-3;
    int patience = 10;
    int steps_per_epoch = 0;// 0 = every training sample once per epoch
    int max_val_samples = 0;// 0 = the whole validation set
    bool augment = true;// mirror training samples; validation is never augmented
    std::uint64_t seed = 0;
    LossWeights weights;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
};

void to_json(nlohmann::json &j, const ModelConfig &c);
void from_json(const nlohmann::json &j, ModelConfig &c);
void to_json(nlohmann::json &j, const TrainConfig &c);
void from_json(const nlohmann::json &j, TrainConfig &c);
void to_json(nlohmann::json &j, const EpochStats &e);

}// namespace playstyle::autoencoder
