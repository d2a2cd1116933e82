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

#include "sfqlab/benchmark.hpp"
#include "sfqlab/calibration.hpp"
#include "sfqlab/clifford.hpp"
#include "sfqlab/config.hpp"
#include "sfqlab/constants.hpp"
#include "sfqlab/errors.hpp"
#include "sfqlab/evolve.hpp"
#include "sfqlab/fitting.hpp"
#include "sfqlab/linalg.hpp"
#include "sfqlab/optimizer.hpp"
#include "sfqlab/parallel.hpp"
#include "sfqlab/rng.hpp"
#include "sfqlab/runner.hpp"
#include "sfqlab/schedule.hpp"
#include "sfqlab/text.hpp"
#include "sfqlab/transmon.hpp"
