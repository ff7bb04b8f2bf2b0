// SPDX-License-Identifier: Apache-2.0
//
// misoloc — single-anchor mmWave MISO downlink positioning:
// observation synthesis, TOF/AOD estimators, and Fisher-information bounds.
// Copyright (C) 2026 The misoloc authors
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

#ifndef MISOLOC_MISOLOC_HPP
#define MISOLOC_MISOLOC_HPP

#include "misoloc/bounds.hpp"
#include "misoloc/common.hpp"
#include "misoloc/config.hpp"
#include "misoloc/estimators.hpp"
#include "misoloc/experiments.hpp"
#include "misoloc/geometry.hpp"
#include "misoloc/model.hpp"
#include "misoloc/pathloss.hpp"
#include "misoloc/rng.hpp"
#include "misoloc/scenario.hpp"

#endif  // MISOLOC_MISOLOC_HPP
