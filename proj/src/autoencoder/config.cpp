#include "playstyle/autoencoder/config.hpp"

#include <stdexcept>
#include <string>

namespace playstyle::autoencoder {

void ModelConfig::validate() const
{
    if (height <= 0 || width <= 0 || height % 4 != 0 || width % 4 != 0) {
        throw std::invalid_argument("model: height and width must be positive multiples of 4");
    }
    if (seq_len <= 0 || conv1 <= 0 || conv2 <= 0 || hidden <= 0 || layers <= 0) {
        throw std::invalid_argument("model: sizes must be positive");
    }
}

void to_json(nlohmann::json &j, const ModelConfig &c)
{
    j = nlohmann::json{ { "scheme", codec::to_string(c.scheme) },
        { "height", c.height },
        { "width", c.width },
        { "seq_len", c.seq_len },
        { "conv1", c.conv1 },
        { "conv2", c.conv2 },
        { "hidden", c.hidden },
        { "layers", c.layers } };
}

void from_json(const nlohmann::json &j, ModelConfig &c)
{
    const ModelConfig d;
    c.scheme = codec::parse_scheme(j.value("scheme", std::string(codec::to_string(d.scheme))));
    c.height = j.value("height", d.height);
    c.width = j.value("width", d.width);
    c.seq_len = j.value("seq_len", d.seq_len);
    c.conv1 = j.value("conv1", d.conv1);
    c.conv2 = j.value("conv2", d.conv2);
    c.hidden = j.value("hidden", d.hidden);
    c.layers = j.value("layers", d.layers);
    c.validate();
}

void to_json(nlohmann::json &j, const TrainConfig &c)
{
    j = nlohmann::json{ { "epochs", c.epochs },
        { "batch_size", c.batch_size },
        { "learning_rate", c.learning_rate },
        { "patience", c.patience },
        { "steps_per_epoch", c.steps_per_epoch },
        { "max_val_samples", c.max_val_samples },
        { "augment", c.augment },
        { "seed", c.seed },
        { "categorical_weight", c.weights.categorical },
        { "numeric_weight", c.weights.numeric } };
}

void from_json(const nlohmann::json &j, TrainConfig &c)
{
    const TrainConfig d;
    c.epochs = j.value("epochs", d.epochs);
    c.batch_size = j.value("batch_size", d.batch_size);
    c.learning_rate = j.value("learning_rate", d.learning_rate);
    c.patience = j.value("patience", d.patience);
    c.steps_per_epoch = j.value("steps_per_epoch", d.steps_per_epoch);
    c.max_val_samples = j.value("max_val_samples", d.max_val_samples);
    c.augment = j.value("augment", d.augment);
    c.seed = j.value("seed", d.seed);
    c.weights.categorical = j.value("categorical_weight", d.weights.categorical);
    c.weights.numeric = j.value("numeric_weight", d.weights.numeric);
    if (c.epochs < 0 || c.batch_size <= 0 || c.learning_rate <= 0 || c.patience <= 0 || c.steps_per_epoch < 0 || c.max_val_samples < 0) {
        throw std::invalid_argument("training: invalid settings");
    }
}

void to_json(nlohmann::json &j, const EpochStats &e)
{
    j = nlohmann::json{ { "epoch", e.epoch }, { "train_loss", e.train_loss }, { "val_loss", e.val_loss } };
}

}// namespace playstyle::autoencoder
