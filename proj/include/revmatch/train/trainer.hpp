// Copyright 2026 The revmatch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "revmatch/error.hpp"
#include "revmatch/random.hpp"
#include "revmatch/train/adapter.hpp"
#include "revmatch/train/loss.hpp"

namespace revmatch::train {

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 15;
    std::size_t batch_size = 4;
    double warmup_fraction = 0.05;
    int patience = 6;
    std::uint64_t seed = 622;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double validation_fraction = 0.1;

    void validate() const {
        if (learning_rate < 0.0 || !std::isfinite(learning_rate)) throw UsageError("learning rate must be >= 0");
        if (epochs < 0) throw UsageError("epochs must be >= 0");
        if (batch_size == 0) throw UsageError("batch size must be positive");
        if (warmup_fraction < 0.0 || warmup_fraction > 1.0) throw UsageError("warmup fraction must lie in [0, 1]");
        if (patience <= 0) throw UsageError("patience must be positive");
        if (!(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0 && epsilon > 0.0)) {
            throw UsageError("invalid Adam hyperparameters");
        }
        if (validation_fraction < 0.0 || validation_fraction >= 1.0) throw UsageError("validation fraction in [0, 1)");
    }
};

struct EpochRecord {
    int epoch = 0;  // 0 = before any update
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0;  // learning rate of the last step taken in the epoch
};

struct TrainResult {
    AdapterModel model;  // best-validation snapshot
    std::vector<EpochRecord> history;
    int best_epoch = 0;
    bool stopped_early = false;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> val_indices;
};

/// Deterministic train/validation split: a seeded shuffle, the first
/// round(fraction * n) (at least one once n >= 2) go to validation. Both
/// index lists come back sorted.
inline void split_indices(std::size_t n, double fraction, std::uint64_t seed, std::vector<std::size_t>& train,
                          std::vector<std::size_t>& val) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(order));
    std::size_t n_val = 0;
    if (n >= 2 && fraction > 0.0) {
        n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n))));
        n_val = std::min(n_val, n - 1);
    }
    val.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
    train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
    std::sort(val.begin(), val.end());
    std::sort(train.begin(), train.end());
}

/// Mean objective over `indices`, evaluated in consecutive batches of
/// `batch_size` in the given order (weighted by batch length).
inline double evaluate(const AdapterModel& model, const std::vector<KeyedTriplet>& triplets,
                       const std::vector<std::size_t>& indices, const EmbeddingTable& table, std::size_t batch_size) {
    if (indices.empty()) return 0.0;
    double weighted = 0.0;
    std::vector<KeyedTriplet> batch;
    for (std::size_t start = 0; start < indices.size(); start += batch_size) {
        batch.clear();
        for (std::size_t i = start; i < std::min(indices.size(), start + batch_size); ++i) {
            batch.push_back(triplets[indices[i]]);
        }
        weighted += total_loss(model, batch, table) * static_cast<double>(batch.size());
    }
    return weighted / static_cast<double>(indices.size());
}

/// Adam state for one parameter matrix.
struct AdamMoments {
    Matrix m;
    Matrix v;

    explicit AdamMoments(const Matrix& like) : m(Matrix::Zero(like.rows(), like.cols())), v(m) {}

    void step(Matrix& param, const Matrix& grad, double lr, const TrainConfig& c, long t) {
        m = c.beta1 * m + (1.0 - c.beta1) * grad;
        v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
        const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(t));
        param.array() -= lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + c.epsilon);
    }
};

/// Trains A and B with Adam on the mean pair + lambda_ce * ce objective.
///
/// Triplets are split 90/10 by a seeded shuffle; each epoch reshuffles the
/// training part and walks it in mini-batches. The learning rate ramps up
/// linearly over the first warmup_fraction of all steps, then stays flat.
/// After every epoch both splits are re-evaluated; training stops once the
/// validation loss has not improved for `patience` epochs and the best
/// snapshot (epoch 0, the initial model, included) is returned.
inline TrainResult train_adapter(const AdapterModel& initial, const std::vector<KeyedTriplet>& triplets,
                                 const EmbeddingTable& table, const TrainConfig& config) {
    config.validate();
    if (triplets.empty()) throw TrainingError("no triplets to train on");

    TrainResult result;
    split_indices(triplets.size(), config.validation_fraction, config.seed, result.train_indices, result.val_indices);
    const auto& train_idx = result.train_indices;
    const auto& val_idx = result.val_indices.empty() ? result.train_indices : result.val_indices;

    AdapterModel model = initial;
    AdamMoments adam_a(model.a);
    AdamMoments adam_b(model.b);

    const std::size_t batches_per_epoch = (train_idx.size() + config.batch_size - 1) / config.batch_size;
    const long total_steps = static_cast<long>(batches_per_epoch) * config.epochs;
    const long warmup_steps = static_cast<long>(std::ceil(config.warmup_fraction * static_cast<double>(total_steps)));

    auto record = [&](int epoch, double lr) {
        EpochRecord r{epoch, evaluate(model, triplets, train_idx, table, config.batch_size),
                      evaluate(model, triplets, val_idx, table, config.batch_size), lr};
        if (!std::isfinite(r.train_loss) || !std::isfinite(r.val_loss)) {
            throw TrainingError("non-finite evaluation loss after epoch " + std::to_string(epoch));
        }
        result.history.push_back(r);
        return r.val_loss;
    };

    double best_val = record(0, 0.0);
    result.model = model;
    result.best_epoch = 0;
    int stale = 0;

    Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<std::size_t> order = train_idx;
    std::vector<KeyedTriplet> batch;
    long step = 0;
    double lr = 0.0;
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            batch.clear();
            for (std::size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
                batch.push_back(triplets[order[i]]);
            }
            const auto lg = batch_objective(model, batch, table, true);
            if (!std::isfinite(lg.loss) || !lg.grad_a.allFinite() || !lg.grad_b.allFinite()) {
                std::string ids;
                for (const auto& t : batch) ids += " (" + t.anchor + ", " + t.positive + ", " + t.negative + ")";
                throw TrainingError("non-finite loss at step " + std::to_string(step) + ", epoch " +
                                    std::to_string(epoch) + ", triplets" + ids);
            }
            lr = warmup_steps > 0 && step < warmup_steps
                     ? config.learning_rate * static_cast<double>(step + 1) / static_cast<double>(warmup_steps)
                     : config.learning_rate;
            ++step;
            adam_a.step(model.a, lg.grad_a, lr, config, step);
            adam_b.step(model.b, lg.grad_b, lr, config, step);
        }
        const double val = record(epoch, lr);
        if (val < best_val) {
            best_val = val;
            result.model = model;
            result.best_epoch = epoch;
            stale = 0;
        } else if (++stale >= config.patience) {
            result.stopped_early = true;
            break;
        }
    }
    return result;
}

/// epoch,train_loss,val_loss,lr with round-trip precision.
inline std::string history_csv(const std::vector<EpochRecord>& history) {
    std::string out = "epoch,train_loss,val_loss,lr\n";
    char buf[128];
    for (const auto& r : history) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", r.epoch, r.train_loss, r.val_loss, r.lr);
        out += buf;
    }
    return out;
}

}  // namespace revmatch::train
