// Copyright 2026 The abpred Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Umbrella header for the abpred library.

#include "abpred/abp.hpp"
#include "abpred/abp_io.hpp"
#include "abpred/constructions.hpp"
#include "abpred/digraph.hpp"
#include "abpred/error.hpp"
#include "abpred/field.hpp"
#include "abpred/formula.hpp"
#include "abpred/formula_io.hpp"
#include "abpred/formula_transforms.hpp"
#include "abpred/layered_transforms.hpp"
#include "abpred/ledger.hpp"
#include "abpred/poly_io.hpp"
#include "abpred/sparse_poly.hpp"
#include "abpred/unlayered_transforms.hpp"
#include "abpred/verify.hpp"
