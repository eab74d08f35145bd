// Copyright 2026 The CGLRAM Authors. All Rights Reserved.
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

#pragma once

#include "cglram/baselines.hpp"
#include "cglram/bench.hpp"
#include "cglram/cluster.hpp"
#include "cglram/data_io.hpp"
#include "cglram/error.hpp"
#include "cglram/glram.hpp"
#include "cglram/kmeans.hpp"
#include "cglram/linalg.hpp"
#include "cglram/report.hpp"
#include "cglram/serialize.hpp"
#include "cglram/stack.hpp"
