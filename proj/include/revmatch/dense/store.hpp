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

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "revmatch/error.hpp"

namespace revmatch::dense {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

/// Cosine similarity of two arbitrary (non-zero) vectors.
inline double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
    const double na = l2_norm(a);
    const double nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) throw DataError("cosine of a zero vector");
    return dot(a, b) / (na * nb);
}

inline std::vector<double> normalized(std::span<const double> v) {
    const double n = l2_norm(v);
    if (n == 0.0 || !std::isfinite(n)) throw DataError("cannot normalize a zero or non-finite vector");
    std::vector<double> out(v.begin(), v.end());
    for (double& x : out) x /= n;
    return out;
}

/// Exact-search vector store. Vectors are unit-normalized on insert, so
/// cosine similarity against a stored vector is a dot product.
class EmbeddingStore {
  public:
    static constexpr std::uint32_t kFormatVersion = 1;

    explicit EmbeddingStore(std::size_t dim = 0) : dim_(dim) {}

    void insert(const std::string& id, std::span<const double> v) {
        if (dim_ == 0) dim_ = v.size();
        if (v.size() != dim_) throw DimensionMismatch(dim_, v.size());
        for (double x : v) {
            if (!std::isfinite(x)) throw DataError("non-finite component in vector " + id);
        }
        const auto it = slot_.find(id);
        if (it != slot_.end()) {
            vectors_[it->second] = normalized(v);
            return;
        }
        slot_.emplace(id, ids_.size());
        ids_.push_back(id);
        vectors_.push_back(normalized(v));
    }

    bool contains(const std::string& id) const { return slot_.count(id) != 0; }

    std::span<const double> vector(const std::string& id) const {
        const auto it = slot_.find(id);
        if (it == slot_.end()) throw LookupError("vector " + id);
        return vectors_[it->second];
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }

    /// Every stored id whose cosine with `query` is strictly above `threshold`.
    std::set<std::string> threshold_recall(std::span<const double> query, double threshold) const {
        if (query.size() != dim_) throw DimensionMismatch(dim_, query.size());
        if (!(threshold >= -1.0 && threshold <= 1.0)) throw UsageError("recall threshold must lie in [-1, 1]");
        const auto q = normalized(query);
        std::set<std::string> hits;
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            if (dot(q, vectors_[i]) > threshold) hits.insert(ids_[i]);
        }
        return hits;
    }

    /// Binary layout, little-endian: magic "RMVEC\0\0\0", u32 version, u32 dim,
    /// u64 count, then per vector: u32 id length, id bytes, dim x f32.
    std::string serialize() const {
        std::string out("RMVEC\0\0\0", 8);
        put_u32(out, kFormatVersion);
        put_u32(out, static_cast<std::uint32_t>(dim_));
        put_u64(out, ids_.size());
        for (std::size_t i = 0; i < ids_.size(); ++i) {
            put_u32(out, static_cast<std::uint32_t>(ids_[i].size()));
            out += ids_[i];
            for (double x : vectors_[i]) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(x)));
        }
        return out;
    }

    static EmbeddingStore deserialize(std::string_view bytes) {
        std::size_t pos = 0;
        auto need = [&](std::size_t n) {
            if (pos + n > bytes.size()) throw DataError("truncated vector file");
        };
        auto u32 = [&] {
            need(4);
            std::uint32_t v = 0;
            for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
            pos += 4;
            return v;
        };
        auto u64 = [&] {
            const std::uint64_t lo = u32();
            const std::uint64_t hi = u32();
            return lo | (hi << 32);
        };
        need(8);
        if (bytes.substr(0, 8) != std::string_view("RMVEC\0\0\0", 8)) throw DataError("not a vector file");
        pos = 8;
        const auto version = u32();
        if (version != kFormatVersion) throw DataError("unsupported vector file version " + std::to_string(version));
        const auto dim = u32();
        const auto count = u64();
        EmbeddingStore store(dim);
        std::vector<double> v(dim);
        for (std::uint64_t k = 0; k < count; ++k) {
            const auto len = u32();
            need(len);
            std::string id(bytes.substr(pos, len));
            pos += len;
            for (auto& x : v) x = static_cast<double>(std::bit_cast<float>(u32()));
            store.insert(id, v);
        }
        if (pos != bytes.size()) throw DataError("trailing bytes in vector file");
        return store;
    }

  private:
    static void put_u32(std::string& out, std::uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    static void put_u64(std::string& out, std::uint64_t v) {
        put_u32(out, static_cast<std::uint32_t>(v & 0xFFFFFFFFu));
        put_u32(out, static_cast<std::uint32_t>(v >> 32));
    }

    std::size_t dim_;
    std::vector<std::string> ids_;
    std::vector<std::vector<double>> vectors_;
    std::map<std::string, std::size_t> slot_;
};

}  // namespace revmatch::dense
