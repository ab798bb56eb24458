// Copyright 2026 The coarse-metrology Authors
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

#include "coarse_metrology/oracle/dephasing.hpp"
#include "coarse_metrology/oracle/estimation.hpp"
#include "coarse_metrology/oracle/mat2.hpp"
#include "coarse_metrology/oracle/measurement.hpp"
#include "coarse_metrology/oracle/statevector.hpp"
