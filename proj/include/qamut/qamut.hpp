// Copyright 2026 The qamut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Umbrella header.

#pragma once

#include "qamut/decompose.hpp"
#include "qamut/embed.hpp"
#include "qamut/error.hpp"
#include "qamut/experiment.hpp"
#include "qamut/io.hpp"
#include "qamut/metrics.hpp"
#include "qamut/mutate.hpp"
#include "qamut/qubo.hpp"
#include "qamut/random.hpp"
#include "qamut/remote.hpp"
#include "qamut/samplers.hpp"
#include "qamut/sut.hpp"
#include "qamut/trajectory.hpp"
