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

#include "regevlab/lattice.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

namespace regevlab {

namespace {

// floor(a / b) for b > 0.
BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if (a < 0 && a % b != 0) q -= 1;
  return q;
}

// Nearest integer to a rational, ties toward +infinity.
BigInt round_nearest(const Rational& x) {
  const BigInt num = boost::multiprecision::numerator(x);
  const BigInt den = boost::multiprecision::denominator(x);
  return floor_div(2 * num + den, 2 * den);
}

Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

struct GramSchmidt {
  std::vector<std::vector<Rational>> mu;
  std::vector<Rational> norms;  // squared norms of the orthogonalized rows
};

GramSchmidt gram_schmidt(const std::vector<std::vector<BigInt>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  GramSchmidt gs;
  gs.mu.assign(n, std::vector<Rational>(n, Rational(0)));
  gs.norms.assign(n, Rational(0));
  std::vector<std::vector<Rational>> star(n, std::vector<Rational>(cols));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < cols; ++c) star[i][c] = Rational(rows[i][c]);
    for (std::size_t j = 0; j < i; ++j) {
      if (gs.norms[j] == 0) throw RankDeficientError("lll_reduce: basis is rank deficient");
      Rational proj = 0;
      for (std::size_t c = 0; c < cols; ++c) proj += Rational(rows[i][c]) * star[j][c];
      gs.mu[i][j] = proj / gs.norms[j];
      for (std::size_t c = 0; c < cols; ++c) star[i][c] -= gs.mu[i][j] * star[j][c];
    }
    gs.norms[i] = dot(star[i], star[i]);
  }
  if (!gs.norms.empty() && gs.norms.back() == 0) {
    throw RankDeficientError("lll_reduce: basis is rank deficient");
  }
  return gs;
}

}  // namespace

LatticeBasis build_embedding(const std::vector<Sample>& samples,
                             const FactoringParams& params) {
  if (samples.empty()) throw std::invalid_argument("build_embedding: need at least 1 sample");
  const int d = params.d;
  const std::int64_t D = params.D;
  if (params.S % D != 0) {
    throw ScaleMismatchError("build_embedding: D must divide S for integer entries");
  }
  const std::int64_t scale = params.S / D;
  const int M = static_cast<int>(samples.size());
  for (const Sample& s : samples) {
    if (static_cast<int>(s.numerators.size()) != d || s.denominator != D) {
      throw std::invalid_argument("build_embedding: sample shape mismatch");
    }
    for (std::int64_t num : s.numerators) {
      if (num < 0 || num >= D) {
        throw std::invalid_argument("build_embedding: numerator out of [0, D)");
      }
    }
  }

  // Head rows carry a unit vector and the scaled sample coordinates; tail rows
  // absorb integer shifts of each sample column. A vector with head z then
  // has tail S*(<z, w_j> + c_j), so short vectors surface lattice elements.
  LatticeBasis basis;
  basis.rows.assign(d + M, std::vector<BigInt>(d + M, BigInt(0)));
  for (int i = 0; i < d; ++i) {
    basis.rows[i][i] = 1;
    for (int j = 0; j < M; ++j) {
      basis.rows[i][d + j] = BigInt(scale) * samples[j].numerators[i];
    }
  }
  for (int j = 0; j < M; ++j) {
    basis.rows[d + j][d + j] = params.S;
  }
  return basis;
}

LatticeBasis lll_reduce(const LatticeBasis& basis, const Rational& delta) {
  if (delta <= Rational(1, 4) || delta >= 1) {
    throw std::invalid_argument("lll_reduce: delta must be in (1/4, 1)");
  }
  const int n = basis.row_count();
  if (n == 0) return basis;
  if (basis.col_count() < n) throw RankDeficientError("lll_reduce: more rows than columns");

  std::vector<std::vector<BigInt>> rows = basis.rows;
  GramSchmidt gs = gram_schmidt(rows);

  int k = 1;
  while (k < n) {
    for (int j = k - 1; j >= 0; --j) {
      const Rational mu = gs.mu[k][j];
      if (mu > Rational(1, 2) || mu < Rational(-1, 2)) {
        const BigInt q = round_nearest(mu);
        for (int c = 0; c < basis.col_count(); ++c) rows[k][c] -= q * rows[j][c];
        gs = gram_schmidt(rows);
      }
    }
    if (gs.norms[k] >= (delta - gs.mu[k][k - 1] * gs.mu[k][k - 1]) * gs.norms[k - 1]) {
      ++k;
    } else {
      std::swap(rows[k], rows[k - 1]);
      gs = gram_schmidt(rows);
      k = std::max(k - 1, 1);
    }
  }
  return LatticeBasis{std::move(rows)};
}

LatticeBasis hermite_normal_form(const LatticeBasis& basis) {
  std::vector<std::vector<BigInt>> mat = basis.rows;
  if (mat.empty()) return {};
  const int cols = static_cast<int>(mat[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < static_cast<int>(mat.size()); ++c) {
    int piv = -1;
    for (int i = r; i < static_cast<int>(mat.size()); ++i) {
      if (mat[i][c] != 0) { piv = i; break; }
    }
    if (piv < 0) continue;
    std::swap(mat[r], mat[piv]);
    for (int i = r + 1; i < static_cast<int>(mat.size()); ++i) {
      while (mat[i][c] != 0) {
        const BigInt q = mat[r][c] / mat[i][c];
        for (int j = 0; j < cols; ++j) mat[r][j] -= q * mat[i][j];
        std::swap(mat[r], mat[i]);
      }
    }
    if (mat[r][c] < 0) {
      for (int j = 0; j < cols; ++j) mat[r][j] = -mat[r][j];
    }
    for (int i = 0; i < r; ++i) {
      const BigInt q = floor_div(mat[i][c], mat[r][c]);
      if (q != 0) {
        for (int j = 0; j < cols; ++j) mat[i][j] -= q * mat[r][j];
      }
    }
    ++r;
  }
  mat.resize(r);
  return LatticeBasis{std::move(mat)};
}

std::vector<ExponentVector> extract_candidates(const LatticeBasis& reduced, int d) {
  if (reduced.col_count() < d) {
    throw std::invalid_argument("extract_candidates: fewer columns than d");
  }
  std::vector<std::pair<BigInt, std::vector<BigInt>>> ordered;
  for (const auto& row : reduced.rows) {
    BigInt norm2 = 0;
    for (const BigInt& x : row) norm2 += x * x;
    ordered.emplace_back(std::move(norm2), row);
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<ExponentVector> candidates;
  std::set<ExponentVector> seen;
  const BigInt lo = std::numeric_limits<std::int64_t>::min();
  const BigInt hi = std::numeric_limits<std::int64_t>::max();
  for (const auto& [norm2, row] : ordered) {
    ExponentVector z(d);
    bool in_range = true;
    for (int i = 0; i < d; ++i) {
      if (row[i] < lo || row[i] > hi) { in_range = false; break; }
      z[i] = row[i].convert_to<std::int64_t>();
    }
    if (!in_range) continue;
    ExponentVector neg(d);
    for (int i = 0; i < d; ++i) neg[i] = -z[i];
    if (seen.insert(z).second) candidates.push_back(z);
    if (seen.insert(neg).second) candidates.push_back(neg);
  }
  return candidates;
}

PostprocessResult postprocess(const std::vector<Sample>& samples,
                              const FactoringParams& params) {
  PostprocessResult result;
  const LatticeBasis embedding = build_embedding(samples, params);
  const LatticeBasis reduced = lll_reduce(embedding);
  result.diagnostics.candidates = extract_candidates(reduced, params.d);
  for (const ExponentVector& z : result.diagnostics.candidates) {
    result.diagnostics.candidates_tested += 1;
    if (!in_lattice(z, params)) continue;
    result.diagnostics.lattice_members += 1;
    auto factors = extract_factors(z, params);
    if (factors) {
      result.diagnostics.nontrivial_members += 1;
      result.factors = factors;
      return result;
    }
  }
  return result;
}

std::string samples_to_text(const std::vector<Sample>& samples, int d, std::int64_t D) {
  std::ostringstream out;
  out << "# d=" << d << " D=" << D << "\n";
  for (const Sample& s : samples) {
    for (std::size_t i = 0; i < s.numerators.size(); ++i) {
      if (i) out << ' ';
      out << s.numerators[i];
    }
    out << "\n";
  }
  return out.str();
}

std::vector<Sample> samples_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) {
    throw std::invalid_argument("samples_from_text: empty input");
  }
  int d = 0;
  long long D = 0;
  if (std::sscanf(header.c_str(), "# d=%d D=%lld", &d, &D) != 2 || d < 1 || D < 2) {
    throw std::invalid_argument("samples_from_text: bad header: " + header);
  }
  std::vector<Sample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    Sample s;
    s.denominator = D;
    std::int64_t value;
    while (row >> value) s.numerators.push_back(value);
    if (static_cast<int>(s.numerators.size()) != d) {
      throw std::invalid_argument("samples_from_text: expected " + std::to_string(d) +
                                  " numerators per line");
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace regevlab
