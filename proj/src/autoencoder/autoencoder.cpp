#include "playstyle/autoencoder/model.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

namespace playstyle::autoencoder {

namespace {

    // Single-threaded kernels keep floating-point reductions in a fixed order.
    void configure_torch()
    {
        static std::once_flag once;
        std::call_once(once, [] {
            torch::set_num_threads(1);
            at::globalContext().setDeterministicAlgorithms(true, false);
        });
    }

    std::vector<codec::SequenceSample> gather(const SampleSet &set, std::span<const std::size_t> idx)
    {
        std::vector<codec::SequenceSample> out;
        out.reserve(idx.size());
        for (const auto i : idx) { out.push_back(set.get(i)); }
        return out;
    }

    std::string snapshot(SequenceAutoencoder &net)
    {
        torch::serialize::OutputArchive archive;
        net->save(archive);
        std::ostringstream os;
        archive.save_to(os);
        return os.str();
    }

    void restore(SequenceAutoencoder &net, const std::string &bytes)
    {
        std::istringstream is(bytes);
        torch::serialize::InputArchive archive;
        archive.load_from(is);
        net->load(archive);
    }

}// namespace

SampleSet SampleSet::of(const std::vector<codec::SequenceSample> &samples)
{
    return SampleSet{ samples.size(), [&samples](std::size_t i) { return samples.at(i); } };
}

struct Autoencoder::Impl {
    ModelConfig config;
    SequenceAutoencoder net;

    explicit Impl(const ModelConfig &c) : config(c), net(c) {}
};

SequenceAutoencoder &module(Autoencoder &model) { return model.impl().net; }

Autoencoder::Autoencoder(const ModelConfig &config, std::uint64_t seed)
{
    configure_torch();
    torch::manual_seed(seed);
    impl_ = std::make_unique<Impl>(config);
}

Autoencoder::Autoencoder(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Autoencoder::~Autoencoder() = default;
Autoencoder::Autoencoder(Autoencoder &&) noexcept = default;
Autoencoder &Autoencoder::operator=(Autoencoder &&) noexcept = default;

const ModelConfig &Autoencoder::config() const noexcept { return impl_->config; }

std::vector<Latent> Autoencoder::encode(const SampleSet &samples, int batch_size) const
{
    torch::NoGradGuard no_grad;
    auto &net = impl_->net;
    net->eval();
    std::vector<Latent> out;
    out.reserve(samples.size);
    std::vector<std::size_t> idx(samples.size);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t start = 0; start < idx.size(); start += static_cast<std::size_t>(batch_size)) {
        const auto n = std::min(idx.size() - start, static_cast<std::size_t>(batch_size));
        const auto z = net->encode(batch_tensor(gather(samples, std::span(idx).subspan(start, n)), impl_->config.scheme)).contiguous();
        const float *p = z.data_ptr<float>();
        const auto d = static_cast<std::size_t>(z.size(1));
        for (std::size_t i = 0; i < n; ++i) { out.emplace_back(p + i * d, p + (i + 1) * d); }
    }
    return out;
}

Latent Autoencoder::encode(const codec::SequenceSample &sample) const
{
    const std::vector<codec::SequenceSample> one{ sample };
    return encode(SampleSet::of(one), 1).front();
}

Autoencoder::Evaluation Autoencoder::evaluate(const SampleSet &samples, const LossWeights &weights, int batch_size) const
{
    if (samples.size == 0) { throw std::invalid_argument("evaluate: no samples"); }
    torch::NoGradGuard no_grad;
    auto &net = impl_->net;
    net->eval();
    double loss = 0.0;
    double accuracy = 0.0;
    std::vector<std::size_t> idx(samples.size);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t start = 0; start < idx.size(); start += static_cast<std::size_t>(batch_size)) {
        const auto n = std::min(idx.size() - start, static_cast<std::size_t>(batch_size));
        const auto x = batch_tensor(gather(samples, std::span(idx).subspan(start, n)), impl_->config.scheme);
        const auto r = net->forward(x);
        loss += reconstruction_loss(r, x, net->schema(), weights).item<double>() * static_cast<double>(n);
        accuracy += cell_accuracy(r, x, net->schema()) * static_cast<double>(n);
    }
    const auto total = static_cast<double>(samples.size);
    return { loss / total, accuracy / total };
}

void Autoencoder::save(const std::filesystem::path &path) const
{
    torch::serialize::OutputArchive archive;
    impl_->net->save(archive);
    archive.write("config", c10::IValue(nlohmann::json(impl_->config).dump()));
    archive.save_to(path.string());
}

Autoencoder Autoencoder::load(const std::filesystem::path &path)
{
    configure_torch();
    torch::serialize::InputArchive archive;
    archive.load_from(path.string());
    c10::IValue config;
    if (!archive.try_read("config", config)) { throw std::runtime_error("checkpoint " + path.string() + " has no model config"); }
    auto impl = std::make_unique<Impl>(nlohmann::json::parse(config.toStringRef()).get<ModelConfig>());
    impl->net->load(archive);
    return Autoencoder(std::move(impl));
}

TrainResult train(const ModelConfig &model, const TrainConfig &config, const SampleSet &train_set, const SampleSet &val_set, const EpochCallback &on_epoch)
{
    if (train_set.size == 0 || val_set.size == 0) {
        throw TrainingError(fmt::format("training needs non-empty splits (train {}, val {})", train_set.size, val_set.size));
    }
    TrainResult result{ Autoencoder(model, config.seed), {}, 0 };
    auto &net = module(result.model);
    const auto &schema = net->schema();
    torch::optim::Adam optimizer(net->parameters(), torch::optim::AdamOptions(config.learning_rate));

    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> val_idx(val_set.size);
    std::iota(val_idx.begin(), val_idx.end(), 0);
    std::shuffle(val_idx.begin(), val_idx.end(), rng);
    if (config.max_val_samples > 0 && val_idx.size() > static_cast<std::size_t>(config.max_val_samples)) {
        val_idx.resize(static_cast<std::size_t>(config.max_val_samples));
        std::sort(val_idx.begin(), val_idx.end());
    }
    const SampleSet val_probe{ val_idx.size(), [&](std::size_t i) { return val_set.get(val_idx[i]); } };

    std::vector<std::size_t> order(train_set.size);
    std::iota(order.begin(), order.end(), 0);
    const auto per_epoch = config.steps_per_epoch > 0
                             ? std::min(order.size(), static_cast<std::size_t>(config.steps_per_epoch) * static_cast<std::size_t>(config.batch_size))
                             : order.size();
    const SampleSet train_probe{ per_epoch, [&](std::size_t i) { return train_set.get(i * train_set.size / per_epoch); } };

    const auto record = [&](const EpochStats &e) {
        result.history.push_back(e);
        if (on_epoch) { on_epoch(e); }
    };
    record({ 0, result.model.evaluate(train_probe, config.weights, config.batch_size).loss, result.model.evaluate(val_probe, config.weights, config.batch_size).loss });
    double best = result.history.back().val_loss;
    std::string best_weights = snapshot(net);

    std::bernoulli_distribution coin(0.5);
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        net->train();
        double sum = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < per_epoch; start += static_cast<std::size_t>(config.batch_size)) {
            const auto n = std::min(per_epoch - start, static_cast<std::size_t>(config.batch_size));
            auto batch = gather(train_set, std::span(order).subspan(start, n));
            if (config.augment) {
                for (auto &s : batch) {
                    const bool h = coin(rng);
                    const bool v = coin(rng);
                    if (h || v) { s = codec::augment_mirror(s, h, v); }
                }
            }
            const auto x = batch_tensor(batch, model.scheme);
            optimizer.zero_grad();
            const auto loss = reconstruction_loss(net->forward(x), x, schema, config.weights);
            const double value = loss.item<double>();
            if (!std::isfinite(value)) {
                throw TrainingError(fmt::format("non-finite loss at epoch {} step {} (previous epoch mean {:.6f}, lr {})",
                  epoch, start / static_cast<std::size_t>(config.batch_size), result.history.back().train_loss, config.learning_rate));
            }
            loss.backward();
            optimizer.step();
            sum += value * static_cast<double>(n);
            seen += n;
        }
        const double val = result.model.evaluate(val_probe, config.weights, config.batch_size).loss;
        record({ epoch, sum / static_cast<double>(seen), val });
        if (val < best) {
            best = val;
            result.best_epoch = epoch;
            best_weights = snapshot(net);
        } else if (epoch - result.best_epoch >= config.patience) {
            break;
        }
    }
    restore(net, best_weights);
    net->eval();
    return result;
}

}// namespace playstyle::autoencoder
