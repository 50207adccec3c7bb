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
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "regevlab/params.hpp"

namespace regevlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Signed exponent vector (z_1, ..., z_d).
using ExponentVector = std::vector<std::int64_t>;

struct NonInvertibleError : std::domain_error {
  std::int64_t common_factor;  ///< gcd(base, N), a factor candidate
  NonInvertibleError(const std::string& what, std::int64_t g)
      : std::domain_error(what), common_factor(g) {}
};

struct NotCoprimeError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Value in [0, N) with its modulus; multiplication stays reduced.
class Residue {
 public:
  Residue(std::int64_t value, std::int64_t modulus);

  std::int64_t value() const { return value_; }
  std::int64_t modulus() const { return modulus_; }

  friend Residue operator*(const Residue& a, const Residue& b);
  friend bool operator==(const Residue& a, const Residue& b) = default;

 private:
  std::int64_t value_;
  std::int64_t modulus_;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);

/// Modular inverse of a mod N. Throws NonInvertibleError when gcd(a, N) != 1.
std::int64_t mod_inverse(std::int64_t a, std::int64_t N);

/// base^exp mod N for signed exp; negative exponents go through the modular
/// inverse, so they require gcd(base, N) == 1 (NonInvertibleError otherwise,
/// carrying the gcd as a factor candidate).
Residue mod_pow(std::int64_t base, std::int64_t exp, std::int64_t N);

/// Smallest r >= 1 with a^r == 1 (mod N). Requires gcd(a, N) == 1.
std::int64_t multiplicative_order(std::int64_t a, std::int64_t N);

/// First d primes coprime to N in increasing order. With no explicit bound the
/// search window starts at 10*d*ln(d+2) and doubles as needed; an explicit
/// bound is hard and throws ExhaustedError when it runs out.
std::vector<std::int64_t> choose_bases(std::int64_t N, int d,
                                       std::optional<std::int64_t> bound = std::nullopt);

/// Whether prod b_i^{2 z_i} == 1 (mod N).
bool in_lattice(const ExponentVector& z, const FactoringParams& params);

/// Whether prod b_i^{z_i} == +-1 (mod N).
bool in_sublattice_L0(const ExponentVector& z, const FactoringParams& params);

/// For z in the lattice: the factor pair split by b = prod b_i^{z_i} when
/// b != +-1 (mod N); empty when z lies in the trivial sublattice. The returned
/// pair (p, q) always satisfies p*q == N and p <= q.
std::optional<std::pair<std::int64_t, std::int64_t>> extract_factors(
    const ExponentVector& z, const FactoringParams& params);

/// Exact coset representatives of the dual lattice modulo Z^d, each in
/// [0,1)^d, sorted lexicographically. Small-instance oracle: enumerates the
/// relation lattice of the a_i up to their multiplicative orders and inverts
/// a basis with exact rationals. Throws TooLargeError beyond desk scale.
std::vector<std::vector<Rational>> dual_cosets(const FactoringParams& params);

}  // namespace regevlab
