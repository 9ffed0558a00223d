// Copyright 2026 The fockgen Authors
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

#include "fockgen/errors.hpp"
#include "fockgen/hilbert.hpp"
#include "fockgen/jc_kernel.hpp"
#include "fockgen/metrics.hpp"
#include "fockgen/protocol.hpp"
#include "fockgen/schedule.hpp"
