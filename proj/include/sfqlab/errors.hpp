// Copyright 2026 The sfqlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sfqlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violated a documented precondition or type invariant.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Adaptive integration did not reach the requested accuracy.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string &what, double discrepancy)
        : Error(what), discrepancy_(discrepancy) {}
    double discrepancy() const noexcept { return discrepancy_; }

private:
    double discrepancy_;
};

/// A calibration sweep found no acceptable operating point.
class CalibrationError : public Error {
public:
    CalibrationError(const std::string &what, int best_count, double best_value)
        : Error(what), best_count_(best_count), best_value_(best_value) {}
    int best_count() const noexcept { return best_count_; }
    double best_value() const noexcept { return best_value_; }

private:
    int best_count_;
    double best_value_;
};

/// A curve fit failed. Carries the best iterate and the raw data so callers
/// can still report something useful.
class FitError : public Error {
public:
    FitError(const std::string &what, std::vector<double> best_params,
             std::vector<double> xs, std::vector<double> ys)
        : Error(what),
          best_params_(std::move(best_params)),
          xs_(std::move(xs)),
          ys_(std::move(ys)) {}

    const std::vector<double> &best_params() const noexcept { return best_params_; }
    const std::vector<double> &xs() const noexcept { return xs_; }
    const std::vector<double> &ys() const noexcept { return ys_; }

private:
    std::vector<double> best_params_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

inline void require(bool condition, const std::string &message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace sfqlab
