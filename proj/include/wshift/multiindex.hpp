#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wshift/numeric.hpp"

namespace wshift {

/// Element of Z_+^m. Directions are 0-based in the C++ API.
class MultiIndex {
 public:
  MultiIndex() = default;
  MultiIndex(std::initializer_list<unsigned> entries) : entries_(entries) {}
  explicit MultiIndex(std::vector<unsigned> entries) : entries_(std::move(entries)) {}

  static MultiIndex zero(std::size_t dim) { return MultiIndex(std::vector<unsigned>(dim, 0)); }
  static MultiIndex unit(std::size_t dim, std::size_t direction);

  std::size_t dim() const { return entries_.size(); }
  unsigned operator[](std::size_t i) const { return entries_[i]; }
  unsigned& operator[](std::size_t i) { return entries_[i]; }
  std::span<const unsigned> entries() const { return entries_; }

  bool is_zero() const;

  /// Adds `count` to coordinate `direction`.
  MultiIndex shifted(std::size_t direction, unsigned count = 1) const;
  /// Subtracts one from coordinate `direction`; empty when that coordinate is zero.
  std::optional<MultiIndex> lowered(std::size_t direction) const;

  MultiIndex operator+(const MultiIndex& other) const;
  /// Componentwise difference; throws std::domain_error unless other <= *this.
  MultiIndex operator-(const MultiIndex& other) const;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

  std::string str() const;

 private:
  std::vector<unsigned> entries_;
};

unsigned degree(const MultiIndex& alpha);
Integer factorial(const MultiIndex& alpha);

/// Componentwise partial order.
bool leq(const MultiIndex& alpha, const MultiIndex& beta);

/// Graded order: lower degree first; within a degree, lexicographically larger first,
/// so (1,0) precedes (0,1). This is the order of every enumeration and report.
bool graded_less(const MultiIndex& a, const MultiIndex& b);

struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return graded_less(a, b); }
};

/// All indices of exactly degree d, in graded order.
std::vector<MultiIndex> enumerate_degree(std::size_t m, unsigned d);

/// All indices with degree <= max_degree, in graded order. Size is C(max_degree + m, m).
std::vector<MultiIndex> enumerate_leq_degree(std::size_t m, unsigned max_degree);

/// All beta <= alpha with |beta| <= max_degree, in graded order.
std::vector<MultiIndex> enumerate_below(const MultiIndex& alpha,
                                        unsigned max_degree = ~0u);

/// k! / (alpha! (k - |alpha|)!). Throws std::domain_error when |alpha| > k.
Integer multinomial(unsigned k, const MultiIndex& alpha);

// Exact identity checks backing the combinatorics of the hypercontraction and
// similarity modules. Each returns true iff both sides agree as integers.

/// sum_{alpha <= beta, |alpha| = i} beta!/(alpha!(beta-alpha)!) == C(|beta|, i).
bool verify_vandermonde(const MultiIndex& beta, unsigned i);

/// With sign (-1)^i, both sum_i C(n-2+i, i) C(n, j-i) and the same sum weighted by i
/// vanish. The i-range is 0..j when 2 <= j <= n and j-n..j when j > n. Requires n >= 2, j >= 2.
bool verify_binomial_convolution(unsigned n, unsigned j);

/// sum_{i=0}^{M} (-1)^i C(n, i) == (-1)^M C(n-1, M).
bool verify_alternating_sum(unsigned n, unsigned M);

struct IdentitySuiteBounds {
  unsigned beta_degree_max = 8;
  std::size_t dim_max = 4;
  unsigned convolution_n_max = 8;
  unsigned alternating_n_max = 10;
  unsigned multinomial_k_max = 10;
};

struct IdentityFailure {
  std::string identity;
  std::string arguments;
};

struct IdentitySuiteResult {
  std::size_t vandermonde_checks = 0;
  std::size_t convolution_checks = 0;
  std::size_t alternating_checks = 0;
  std::size_t multinomial_checks = 0;
  std::optional<IdentityFailure> failure;  // first failure in run order
};

/// Runs every identity exhaustively up to the given bounds.
IdentitySuiteResult verify_identity_suite(const IdentitySuiteBounds& bounds);

}  // namespace wshift
