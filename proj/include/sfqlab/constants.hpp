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

#include <numbers>

namespace sfqlab::constants {

/// Magnetic flux quantum h/2e in Wb.
inline constexpr double flux_quantum = 2.067833848e-15;
/// Reduced Planck constant in J s.
inline constexpr double reduced_planck = 1.054571817e-34;
/// Boltzmann constant in J/K.
inline constexpr double boltzmann = 1.380649e-23;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace sfqlab::constants
