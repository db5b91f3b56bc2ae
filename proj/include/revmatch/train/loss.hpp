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
#include <map>
#include <span>
#include <string>
#include <vector>

#include "revmatch/error.hpp"
#include "revmatch/train/adapter.hpp"

namespace revmatch::train {

/// -ln(sigmoid(x)), stable for large |x|.
inline double neg_log_sigmoid(double x) {
    return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

/// Pairwise term from similarity scores: -ln sigma((s+ - s-) / tau).
inline double pair_loss_from_scores(double s_pos, double s_neg, double temperature) {
    return neg_log_sigmoid((s_pos - s_neg) / temperature);
}

/// In-batch softmax cross-entropy from similarity scores, with the maximum
/// logit subtracted before exponentiation.
inline double ce_loss_from_scores(std::span<const double> scores, std::size_t positive, double temperature) {
    if (positive >= scores.size()) throw DataError("positive candidate is not in the batch");
    const double top = *std::max_element(scores.begin(), scores.end()) / temperature;
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s / temperature - top);
    return std::log(sum) - (scores[positive] / temperature - top);
}

struct TripletEmbeddings {
    std::span<const double> anchor;
    std::span<const double> positive;
    std::span<const double> negative;
};

inline double loss_pair(const AdapterModel& model, const TripletEmbeddings& t) {
    const Vector ha = model.transform(t.anchor);
    return pair_loss_from_scores(ha.dot(model.transform(t.positive)), ha.dot(model.transform(t.negative)),
                                 model.temperature);
}

/// The positive must appear (element-wise equal) among `batch`.
inline double loss_ce(const AdapterModel& model, std::span<const double> anchor, std::span<const double> positive,
                      const std::vector<std::span<const double>>& batch) {
    std::size_t pos_index = batch.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
        if (std::equal(batch[i].begin(), batch[i].end(), positive.begin(), positive.end())) {
            pos_index = i;
            break;
        }
    }
    if (pos_index == batch.size()) throw DataError("positive candidate is not in the batch");
    const Vector ha = model.transform(anchor);
    std::vector<double> scores;
    scores.reserve(batch.size());
    for (const auto& c : batch) scores.push_back(ha.dot(model.transform(c)));
    return ce_loss_from_scores(scores, pos_index, model.temperature);
}

/// A training triplet resolved to keys of an embedding table. Keys of
/// different roles must not collide (see prefgen key helpers).
struct KeyedTriplet {
    std::string anchor;
    std::string positive;
    std::string negative;
};

using EmbeddingTable = std::map<std::string, std::vector<double>>;

struct LossAndGrad {
    double loss = 0.0;
    Matrix grad_a;
    Matrix grad_b;
};

/// Batch objective: mean over triplets of pair + lambda_ce * ce, where each
/// triplet's softmax runs over the distinct positive and negative keys of the
/// whole batch, minus its own anchor key.
///
/// With `with_grad`, the analytic gradients w.r.t. A and B are returned. They
/// flow back through the normalization, dh/du = (I - h h^T) / |u|, and the
/// low-rank map, dL/dB = g_u z^T and dL/dA = e (B^T g_u)^T with z = A^T e.
inline LossAndGrad batch_objective(const AdapterModel& model, std::span<const KeyedTriplet> batch,
                                   const EmbeddingTable& table, bool with_grad) {
    if (batch.empty()) throw DataError("empty batch");
    const double tau = model.temperature;

    // Distinct keys in first-seen order; candidates are the positive/negative keys.
    std::map<std::string, std::size_t> slot;
    std::vector<const std::vector<double>*> raw;
    std::vector<std::size_t> candidate_slots;
    auto intern = [&](const std::string& key) {
        const auto [it, inserted] = slot.emplace(key, raw.size());
        if (inserted) {
            const auto row = table.find(key);
            if (row == table.end()) throw LookupError("embedding " + key);
            if (row->second.size() != model.base_dim()) throw DimensionMismatch(model.base_dim(), row->second.size());
            raw.push_back(&row->second);
        }
        return it->second;
    };
    struct Ids {
        std::size_t a, p, n;
    };
    std::vector<Ids> ids;
    ids.reserve(batch.size());
    std::vector<bool> is_candidate;
    for (const auto& t : batch) {
        ids.push_back({intern(t.anchor), intern(t.positive), intern(t.negative)});
        if (ids.back().a == ids.back().p || ids.back().a == ids.back().n || ids.back().p == ids.back().n) {
            throw DataError("triplet " + t.anchor + " repeats a key");
        }
    }
    is_candidate.assign(raw.size(), false);
    for (const auto& t : ids) {
        for (auto c : {t.p, t.n}) {
            if (!is_candidate[c]) {
                is_candidate[c] = true;
                candidate_slots.push_back(c);
            }
        }
    }
    std::sort(candidate_slots.begin(), candidate_slots.end());

    const auto k = raw.size();
    std::vector<Vector> e(k), z(k), u(k), h(k);
    std::vector<double> norm(k);
    for (std::size_t i = 0; i < k; ++i) {
        e[i] = as_vector(*raw[i]);
        z[i] = model.a.transpose() * e[i];
        u[i] = e[i] + model.b * z[i];
        norm[i] = u[i].norm();
        if (!(norm[i] > 0.0)) throw TrainingError("adapter output collapsed to zero");
        h[i] = u[i] / norm[i];
    }

    std::vector<Vector> grad_h;
    if (with_grad) grad_h.assign(k, Vector::Zero(static_cast<Eigen::Index>(model.base_dim())));

    const double inv_n = 1.0 / static_cast<double>(batch.size());
    double total = 0.0;
    std::vector<double> scores;
    std::vector<std::size_t> members;
    for (const auto& t : ids) {
        const double s_pos = h[t.a].dot(h[t.p]);
        const double s_neg = h[t.a].dot(h[t.n]);
        const double margin = (s_pos - s_neg) / tau;
        total += inv_n * neg_log_sigmoid(margin);
        if (with_grad) {
            // d/dmargin of -ln sigma(margin) = -sigma(-margin)
            const double g = -sigmoid(-margin) * inv_n / tau;
            grad_h[t.a] += g * (h[t.p] - h[t.n]);
            grad_h[t.p] += g * h[t.a];
            grad_h[t.n] -= g * h[t.a];
        }

        if (model.lambda_ce == 0.0) continue;
        scores.clear();
        members.clear();
        std::size_t pos_index = 0;
        for (auto c : candidate_slots) {
            if (c == t.a) continue;
            if (c == t.p) pos_index = members.size();
            members.push_back(c);
            scores.push_back(h[t.a].dot(h[c]));
        }
        total += inv_n * model.lambda_ce * ce_loss_from_scores(scores, pos_index, tau);
        if (with_grad) {
            const double top = *std::max_element(scores.begin(), scores.end()) / tau;
            double sum = 0.0;
            for (double s : scores) sum += std::exp(s / tau - top);
            for (std::size_t m = 0; m < members.size(); ++m) {
                const double p = std::exp(scores[m] / tau - top) / sum;
                const double g = inv_n * model.lambda_ce * (p - (m == pos_index ? 1.0 : 0.0)) / tau;
                grad_h[t.a] += g * h[members[m]];
                grad_h[members[m]] += g * h[t.a];
            }
        }
    }

    LossAndGrad out;
    out.loss = total;
    if (!with_grad) return out;
    out.grad_a = Matrix::Zero(model.a.rows(), model.a.cols());
    out.grad_b = Matrix::Zero(model.b.rows(), model.b.cols());
    for (std::size_t i = 0; i < k; ++i) {
        const Vector g_u = (grad_h[i] - h[i] * h[i].dot(grad_h[i])) / norm[i];
        out.grad_b.noalias() += g_u * z[i].transpose();
        out.grad_a.noalias() += e[i] * (model.b.transpose() * g_u).transpose();
    }
    return out;
}

inline double total_loss(const AdapterModel& model, std::span<const KeyedTriplet> batch, const EmbeddingTable& table) {
    return batch_objective(model, batch, table, false).loss;
}

}  // namespace revmatch::train
