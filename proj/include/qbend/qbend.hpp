// Copyright 2026 The qbend Authors
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

#include "qbend/driver.hpp"
#include "qbend/encoding.hpp"
#include "qbend/errors.hpp"
#include "qbend/model.hpp"
#include "qbend/oracle.hpp"
#include "qbend/qubo.hpp"
#include "qbend/samplers.hpp"
#include "qbend/simplex.hpp"
#include "qbend/subproblem.hpp"
