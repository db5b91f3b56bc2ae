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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "revmatch/error.hpp"
#include "revmatch/random.hpp"

namespace revmatch::train {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline Eigen::Map<const Vector> as_vector(std::span<const double> v) {
    return {v.data(), static_cast<Eigen::Index>(v.size())};
}

/// Shared low-rank residual map over frozen embeddings:
///
///   h(e) = normalize(e + B * (A^T * e)),   A, B in R^{dim x rank}
///
/// B starts at zero, so a fresh adapter is the identity on unit vectors and
/// its scores equal raw cosine similarity.
struct AdapterModel {
    Matrix a;
    Matrix b;
    double temperature = 0.0634;
    double lambda_ce = 0.915;
    std::uint64_t seed = 622;

    /// A ~ N(0, init_std^2) drawn row-major from `seed`; B = 0.
    static AdapterModel init(std::size_t dim, std::size_t rank, double temperature, double lambda_ce,
                             std::uint64_t seed, double init_std = 0.02) {
        if (dim == 0 || rank == 0) throw UsageError("adapter dim and rank must be positive");
        if (!(temperature > 0.0)) throw UsageError("temperature must be positive");
        if (lambda_ce < 0.0) throw UsageError("lambda_ce must be non-negative");
        AdapterModel m;
        m.a = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
        m.b = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rank));
        m.temperature = temperature;
        m.lambda_ce = lambda_ce;
        m.seed = seed;
        Rng rng(seed);
        for (Eigen::Index i = 0; i < m.a.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.a.cols(); ++j) m.a(i, j) = init_std * rng.normal();
        }
        return m;
    }

    std::size_t base_dim() const { return static_cast<std::size_t>(a.rows()); }
    std::size_t rank() const { return static_cast<std::size_t>(a.cols()); }

    /// Pre-normalization residual output u = e + B A^T e.
    Vector residual(const Vector& e) const { return e + b * (a.transpose() * e); }

    Vector transform(std::span<const double> e) const {
        if (e.size() != base_dim()) throw DimensionMismatch(base_dim(), e.size());
        Vector u = residual(as_vector(e));
        const double n = u.norm();
        if (!(n > 0.0)) throw DataError("adapter output collapsed to zero");
        return u / n;
    }
};

/// Cosine of the adapted anchor and candidate embeddings.
inline double score(const AdapterModel& model, std::span<const double> anchor, std::span<const double> candidate) {
    return model.transform(anchor).dot(model.transform(candidate));
}

// Checkpoint: little-endian, magic "RMADAPT\0", u32 version, u32 base_dim,
// u32 rank, f64 temperature, f64 lambda_ce, u64 seed, A row-major, B
// row-major (f64), then u32 length + UTF-8 JSON provenance (may be empty).

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}
inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
  public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    std::uint64_t uint(int width) {
        if (pos_ + static_cast<std::size_t>(width) > bytes_.size()) throw DataError("truncated checkpoint");
        std::uint64_t v = 0;
        for (int i = 0; i < width; ++i) {
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += static_cast<std::size_t>(width);
        return v;
    }
    double f64() { return std::bit_cast<double>(uint(8)); }
    std::string_view take(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw DataError("truncated checkpoint");
        auto s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::string serialize(const AdapterModel& m, std::string_view provenance = {}) {
    std::string out("RMADAPT\0", 8);
    detail::put_u32(out, kCheckpointVersion);
    detail::put_u32(out, static_cast<std::uint32_t>(m.base_dim()));
    detail::put_u32(out, static_cast<std::uint32_t>(m.rank()));
    detail::put_f64(out, m.temperature);
    detail::put_f64(out, m.lambda_ce);
    detail::put_u64(out, m.seed);
    for (const Matrix* mat : {&m.a, &m.b}) {
        for (Eigen::Index i = 0; i < mat->rows(); ++i) {
            for (Eigen::Index j = 0; j < mat->cols(); ++j) detail::put_f64(out, (*mat)(i, j));
        }
    }
    detail::put_u32(out, static_cast<std::uint32_t>(provenance.size()));
    out.append(provenance);
    return out;
}

inline AdapterModel deserialize(std::string_view bytes, std::string* provenance = nullptr) {
    detail::Reader in(bytes);
    if (in.take(8) != std::string_view("RMADAPT\0", 8)) throw DataError("not an adapter checkpoint");
    const auto version = in.uint(4);
    if (version != kCheckpointVersion) throw DataError("unsupported checkpoint version " + std::to_string(version));
    const auto dim = static_cast<Eigen::Index>(in.uint(4));
    const auto rank = static_cast<Eigen::Index>(in.uint(4));
    AdapterModel m;
    m.temperature = in.f64();
    m.lambda_ce = in.f64();
    m.seed = in.uint(8);
    if (dim == 0 || rank == 0 || !(m.temperature > 0.0)) throw DataError("invalid checkpoint header");
    m.a.resize(dim, rank);
    m.b.resize(dim, rank);
    for (Matrix* mat : {&m.a, &m.b}) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < rank; ++j) (*mat)(i, j) = in.f64();
        }
    }
    const auto len = in.uint(4);
    const auto prov = in.take(len);
    if (provenance != nullptr) *provenance = std::string(prov);
    if (!in.done()) throw DataError("trailing bytes in checkpoint");
    return m;
}

}  // namespace revmatch::train
