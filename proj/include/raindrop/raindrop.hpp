// Copyright 2026 The raindrop authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header.

#include "raindrop/dataio.hpp"
#include "raindrop/detector.hpp"
#include "raindrop/errors.hpp"
#include "raindrop/eval.hpp"
#include "raindrop/geometry.hpp"
#include "raindrop/image.hpp"
#include "raindrop/image_io.hpp"
#include "raindrop/kernels.hpp"
#include "raindrop/ncc.hpp"
#include "raindrop/parallel.hpp"
#include "raindrop/rng.hpp"
#include "raindrop/synth.hpp"
