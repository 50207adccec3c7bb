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

#include "regevlab/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace regevlab {

namespace {

std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t N) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % N);
}

std::int64_t pow_mod_unsigned(std::int64_t base, std::uint64_t exp, std::int64_t N) {
  std::int64_t result = 1 % N;
  std::int64_t acc = ((base % N) + N) % N;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, acc, N);
    acc = mul_mod(acc, acc, N);
    exp >>= 1;
  }
  return result;
}

bool is_prime_small(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

}  // namespace

Residue::Residue(std::int64_t value, std::int64_t modulus) : modulus_(modulus) {
  if (modulus < 2) throw std::invalid_argument("Residue: modulus must be >= 2");
  value_ = ((value % modulus) + modulus) % modulus;
}

Residue operator*(const Residue& a, const Residue& b) {
  if (a.modulus_ != b.modulus_) throw std::invalid_argument("Residue: modulus mismatch");
  return Residue(mul_mod(a.value_, b.value_, a.modulus_), a.modulus_);
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t N) {
  // Extended Euclid on (a mod N, N).
  std::int64_t r0 = ((a % N) + N) % N, r1 = N;
  std::int64_t s0 = 1, s1 = 0;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t r2 = r0 - q * r1;
    std::int64_t s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  if (r0 != 1) {
    throw NonInvertibleError("mod_inverse: gcd(" + std::to_string(a) + ", " +
                                 std::to_string(N) + ") = " + std::to_string(r0),
                             r0);
  }
  return ((s0 % N) + N) % N;
}

Residue mod_pow(std::int64_t base, std::int64_t exp, std::int64_t N) {
  if (N < 2) throw std::invalid_argument("mod_pow: modulus must be >= 2");
  if (exp >= 0) {
    return Residue(pow_mod_unsigned(base, static_cast<std::uint64_t>(exp), N), N);
  }
  std::int64_t inv = mod_inverse(base, N);
  std::uint64_t mag =
      exp == INT64_MIN ? (static_cast<std::uint64_t>(INT64_MAX) + 1) : static_cast<std::uint64_t>(-exp);
  return Residue(pow_mod_unsigned(inv, mag, N), N);
}

std::int64_t multiplicative_order(std::int64_t a, std::int64_t N) {
  std::int64_t g = gcd64(a, N);
  if (g != 1) {
    throw NotCoprimeError("multiplicative_order: gcd(" + std::to_string(a) + ", " +
                          std::to_string(N) + ") = " + std::to_string(g));
  }
  std::int64_t x = ((a % N) + N) % N;
  std::int64_t acc = x;
  std::int64_t r = 1;
  while (acc != 1) {
    acc = mul_mod(acc, x, N);
    ++r;
  }
  return r;
}

std::vector<std::int64_t> choose_bases(std::int64_t N, int d,
                                       std::optional<std::int64_t> bound) {
  if (d < 1) throw std::invalid_argument("choose_bases: d must be >= 1");
  const bool hard_bound = bound.has_value();
  std::int64_t limit =
      bound.value_or(static_cast<std::int64_t>(std::ceil(10.0 * d * std::log(d + 2.0))));
  constexpr std::int64_t kAbsoluteCap = 10'000'000;
  while (true) {
    std::vector<std::int64_t> primes;
    for (std::int64_t p = 2; p <= limit && static_cast<int>(primes.size()) < d; ++p) {
      if (is_prime_small(p) && gcd64(p, N) == 1) primes.push_back(p);
    }
    if (static_cast<int>(primes.size()) == d) return primes;
    if (hard_bound || limit >= kAbsoluteCap) {
      throw ExhaustedError("choose_bases: fewer than " + std::to_string(d) +
                           " primes coprime to " + std::to_string(N) + " below " +
                           std::to_string(limit));
    }
    limit = std::min(kAbsoluteCap, limit * 2);
  }
}

bool in_lattice(const ExponentVector& z, const FactoringParams& params) {
  Residue prod(1, params.N);
  for (std::size_t i = 0; i < z.size(); ++i) {
    prod = prod * mod_pow(params.squares[i], z[i], params.N);
  }
  return prod.value() == 1;
}

bool in_sublattice_L0(const ExponentVector& z, const FactoringParams& params) {
  Residue prod(1, params.N);
  for (std::size_t i = 0; i < z.size(); ++i) {
    prod = prod * mod_pow(params.bases[i], z[i], params.N);
  }
  return prod.value() == 1 || prod.value() == params.N - 1;
}

std::optional<std::pair<std::int64_t, std::int64_t>> extract_factors(
    const ExponentVector& z, const FactoringParams& params) {
  Residue b(1, params.N);
  for (std::size_t i = 0; i < z.size(); ++i) {
    b = b * mod_pow(params.bases[i], z[i], params.N);
  }
  if (b.value() == 1 || b.value() == params.N - 1) return std::nullopt;
  for (std::int64_t candidate : {b.value() - 1, b.value() + 1}) {
    std::int64_t p = gcd64(candidate, params.N);
    if (p > 1 && p < params.N) {
      std::int64_t q = params.N / p;
      return std::make_pair(std::min(p, q), std::max(p, q));
    }
  }
  return std::nullopt;
}

namespace {

// Row-style HNF over BigInt, in place; returns the nonzero rows.
std::vector<std::vector<BigInt>> hnf_rows(std::vector<std::vector<BigInt>> mat) {
  if (mat.empty()) return mat;
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
        BigInt q = mat[r][c] / mat[i][c];  // truncated is fine inside the gcd loop
        for (int j = 0; j < cols; ++j) mat[r][j] -= q * mat[i][j];
        std::swap(mat[r], mat[i]);
      }
    }
    if (mat[r][c] < 0) {
      for (int j = 0; j < cols; ++j) mat[r][j] = -mat[r][j];
    }
    for (int i = 0; i < r; ++i) {
      BigInt q = mat[i][c] / mat[r][c];
      if (mat[i][c] < 0 && mat[i][c] % mat[r][c] != 0) q -= 1;  // floor
      if (q != 0) {
        for (int j = 0; j < cols; ++j) mat[i][j] -= q * mat[r][j];
      }
    }
    ++r;
  }
  mat.resize(r);
  return mat;
}

std::vector<std::vector<Rational>> rational_inverse(
    const std::vector<std::vector<Rational>>& matrix) {
  const int n = static_cast<int>(matrix.size());
  std::vector<std::vector<Rational>> a(matrix);
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (a[i][c] != 0) { piv = i; break; }
    }
    if (piv < 0) throw std::logic_error("rational_inverse: singular matrix");
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    Rational scale = Rational(1) / a[c][c];
    for (int j = 0; j < n; ++j) { a[c][j] *= scale; inv[c][j] *= scale; }
    for (int i = 0; i < n; ++i) {
      if (i == c || a[i][c] == 0) continue;
      Rational f = a[i][c];
      for (int j = 0; j < n; ++j) { a[i][j] -= f * a[c][j]; inv[i][j] -= f * inv[c][j]; }
    }
  }
  return inv;
}

Rational frac_mod_one(const Rational& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  BigInt q = num / den;
  if (num < 0 && num % den != 0) q -= 1;
  return x - Rational(q);
}

}  // namespace

std::vector<std::vector<Rational>> dual_cosets(const FactoringParams& params) {
  const int d = params.d;
  if (d > 3) throw TooLargeError("dual_cosets: d > 3 is beyond the enumeration oracle");

  std::vector<std::int64_t> orders(d);
  double box = 1.0;
  for (int i = 0; i < d; ++i) {
    orders[i] = multiplicative_order(params.squares[i], params.N);
    box *= static_cast<double>(orders[i]);
    if (box > 1e6) throw TooLargeError("dual_cosets: order box exceeds enumeration bound");
  }

  // Generators of the relation lattice: order vectors plus every relation in
  // the fundamental box.
  std::vector<std::vector<BigInt>> gens;
  for (int i = 0; i < d; ++i) {
    std::vector<BigInt> e(d, 0);
    e[i] = orders[i];
    gens.push_back(e);
  }
  std::vector<std::int64_t> z(d, 0);
  while (true) {
    Residue prod(1, params.N);
    for (int i = 0; i < d; ++i) {
      prod = prod * mod_pow(params.squares[i], z[i], params.N);
    }
    bool nonzero = std::any_of(z.begin(), z.end(), [](std::int64_t v) { return v != 0; });
    if (prod.value() == 1 && nonzero) {
      gens.emplace_back(z.begin(), z.end());
    }
    int i = 0;
    for (; i < d; ++i) {
      if (++z[i] < orders[i]) break;
      z[i] = 0;
    }
    if (i == d) break;
  }

  auto basis = hnf_rows(std::move(gens));
  if (static_cast<int>(basis.size()) != d) {
    throw std::logic_error("dual_cosets: relation lattice is not full rank");
  }

  // Dual basis rows = columns of the inverse.
  std::vector<std::vector<Rational>> rat(d, std::vector<Rational>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) rat[i][j] = Rational(basis[i][j]);
  }
  auto inv = rational_inverse(rat);
  std::vector<std::vector<Rational>> dual_rows(d, std::vector<Rational>(d));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) dual_rows[i][j] = inv[j][i];
  }

  // Closure of the dual rows mod 1 under addition.
  std::set<std::vector<Rational>> seen;
  std::vector<std::vector<Rational>> frontier;
  std::vector<Rational> zero(d, Rational(0));
  seen.insert(zero);
  frontier.push_back(zero);
  constexpr std::size_t kCosetCap = 100000;
  while (!frontier.empty()) {
    auto cur = frontier.back();
    frontier.pop_back();
    for (const auto& g : dual_rows) {
      std::vector<Rational> nxt(d);
      for (int i = 0; i < d; ++i) nxt[i] = frac_mod_one(cur[i] + g[i]);
      if (seen.insert(nxt).second) {
        if (seen.size() > kCosetCap) throw TooLargeError("dual_cosets: coset count exceeds bound");
        frontier.push_back(nxt);
      }
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace regevlab
