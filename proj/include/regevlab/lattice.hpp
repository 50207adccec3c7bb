// Copyright 2026 The regevlab authors
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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "regevlab/numtheory.hpp"
#include "regevlab/params.hpp"

namespace regevlab {

/// One measured grid point: numerators over the common denominator D.
struct Sample {
  std::vector<std::int64_t> numerators;
  std::int64_t denominator = 0;
};

/// Integer row basis.
struct LatticeBasis {
  std::vector<std::vector<BigInt>> rows;

  int row_count() const { return static_cast<int>(rows.size()); }
  int col_count() const { return rows.empty() ? 0 : static_cast<int>(rows[0].size()); }

  friend bool operator==(const LatticeBasis& a, const LatticeBasis& b) = default;
};

struct ScaleMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Recovery basis from measured samples: rows [I_d | S*W^T] over rows
/// [0 | S*I_m], where column d+j of an identity row i carries S*w_j[i].
/// A lattice vector with head z has tail S*(<z, w_j> + c_j), so short
/// vectors expose lattice elements in their first d coordinates. Requires
/// D | S so all entries are integers.
LatticeBasis build_embedding(const std::vector<Sample>& samples,
                             const FactoringParams& params);

/// Exact-arithmetic LLL row reduction (rational Gram-Schmidt, no floating
/// point): output is size-reduced with the Lovasz condition at delta and
/// generates the same lattice as the input. Requires a full-rank basis and
/// 1/4 < delta < 1.
LatticeBasis lll_reduce(const LatticeBasis& basis,
                        const Rational& delta = Rational(3, 4));

/// Row-style Hermite normal form (canonical lattice representative); zero
/// rows are dropped, pivots are positive, entries above a pivot are reduced
/// into [0, pivot).
LatticeBasis hermite_normal_form(const LatticeBasis& basis);

/// First d components of every row plus their negations, de-duplicated and
/// ordered by ascending row norm.
std::vector<ExponentVector> extract_candidates(const LatticeBasis& reduced, int d);

struct PostprocessDiagnostics {
  int candidates_tested = 0;
  int lattice_members = 0;
  int nontrivial_members = 0;
  std::vector<ExponentVector> candidates;
};

struct PostprocessResult {
  std::optional<std::pair<std::int64_t, std::int64_t>> factors;
  PostprocessDiagnostics diagnostics;
};

/// build_embedding -> lll_reduce -> candidate scan -> factor extraction.
/// Empty factors mean every candidate was trivial or a non-member.
PostprocessResult postprocess(const std::vector<Sample>& samples,
                              const FactoringParams& params);

/// Samples file: header `# d=<d> D=<D>`, then one line of space-separated
/// numerators per sample.
std::string samples_to_text(const std::vector<Sample>& samples, int d, std::int64_t D);
std::vector<Sample> samples_from_text(const std::string& text);

}  // namespace regevlab
