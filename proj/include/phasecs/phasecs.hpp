// SPDX-License-Identifier: Apache-2.0
//
// phasecs — compressive sampling and sparse recovery of phase-modulated signals
// Copyright (C) 2026 phasecs project contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "phasecs/constellation.hpp"
#include "phasecs/decode.hpp"
#include "phasecs/model.hpp"
#include "phasecs/oracle.hpp"
#include "phasecs/pulse.hpp"
#include "phasecs/rng.hpp"
#include "phasecs/runner.hpp"
#include "phasecs/sampling.hpp"
#include "phasecs/scenario.hpp"
#include "phasecs/solver.hpp"
