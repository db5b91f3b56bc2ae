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

#include <stdexcept>
#include <string>

namespace revmatch {

/// Root of the library's exception hierarchy. The CLI maps each branch to a
/// process exit code: UsageError -> 1, DataError -> 2, ExternalError -> 3.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Bad invocation or configuration.
class UsageError : public Error {
  public:
    using Error::Error;
};

/// Input data violates a contract (corpus integrity, file format, dimensions).
class DataError : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public DataError {
  public:
    DimensionMismatch(std::size_t expected, std::size_t got)
        : DataError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                    std::to_string(got)) {}
};

class LookupError : public DataError {
  public:
    explicit LookupError(const std::string& what_id) : DataError("unknown id: " + what_id) {}
};

/// A reviewer with no publications inside the profiling window, or no
/// embedded publications for pooling.
class ColdStartError : public DataError {
  public:
    ColdStartError(std::string author_id, const std::string& detail)
        : DataError("cold start for " + author_id + ": " + detail), author_id_(std::move(author_id)) {}

    const std::string& author_id() const noexcept { return author_id_; }

  private:
    std::string author_id_;
};

/// A response from an external service that parses but violates its contract,
/// or a locally produced value that does.
class ContractError : public DataError {
  public:
    using DataError::DataError;
};

class TrainingError : public DataError {
  public:
    using DataError::DataError;
};

/// An external service could not be reached or kept failing after retries.
class ExternalError : public Error {
  public:
    using Error::Error;
};

class TransportError : public ExternalError {
  public:
    using ExternalError::ExternalError;
};

}  // namespace revmatch
