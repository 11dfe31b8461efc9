// Copyright 2026 The pomest Authors
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

#include <vector>

#include "pomest/linalg.hpp"
#include "pomest/pom.hpp"

namespace pomest {

/// Projective measurement on system (x) ancilla reproducing a POM when the
/// ancilla starts in |0><0|. The ancilla has one level per outcome.
struct NaimarkExtension {
  Index sys_dim = 0;
  Index anc_dim = 0;
  Matrix unitary;
  DensityOperator ancilla = DensityOperator::maximally_mixed(1);
  /// U^dag (1 (x) |k><k|) U
  std::vector<HermitianOperator> projections;
  std::vector<std::vector<double>> values;

  Index dim() const { return sys_dim * anc_dim; }
  /// sum_k f_k P_k
  HermitianOperator extended_operator(const std::vector<double>& f) const;
  /// The projections as a POM on the joint space, same values and labels.
  PomPtr extended_pom(const Pom& original) const;
};

/// Builds U from the isometry psi -> sum_k sqrt(w_k M_k) psi (x) |k>,
/// completed by column-pivoted Gram-Schmidt over the standard basis. The
/// result is checked on 5 random states before being returned.
NaimarkExtension naimark_extend(const Pom& pom);

}  // namespace pomest
