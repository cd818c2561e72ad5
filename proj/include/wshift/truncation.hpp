#pragma once

#include <cmath>
#include <optional>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "wshift/weights.hpp"

namespace wshift {

/// Square matrix with at most one nonzero per column, each nonzero equal to +sqrt(q) for an
/// exact rational q. Products of such matrices stay in the class, so every T^alpha is exact.
class SqrtMonomialMatrix {
 public:
  struct Entry {
    std::size_t row;
    Rational square;
  };

  explicit SqrtMonomialMatrix(std::size_t size = 0) : columns_(size) {}

  static SqrtMonomialMatrix identity(std::size_t size);

  std::size_t size() const { return columns_.size(); }
  const std::optional<Entry>& column(std::size_t c) const { return columns_[c]; }
  void set(std::size_t row, std::size_t col, Rational square);

  /// this * other.
  SqrtMonomialMatrix operator*(const SqrtMonomialMatrix& other) const;
  bool operator==(const SqrtMonomialMatrix& other) const;

  /// Diagonal of A* A. Throws std::logic_error if two columns share a row, since A* A would
  /// then have an off-diagonal entry.
  std::vector<Rational> gram_diagonal() const;

  std::size_t nonzeros() const;

 private:
  std::vector<std::optional<Entry>> columns_;
};

/// Backward shift tuple restricted to span{e_alpha : |alpha| <= D}, basis in graded order.
struct TruncatedTuple {
  std::size_t m = 0;
  unsigned degree_bound = 0;
  std::vector<MultiIndex> basis;
  std::vector<SqrtMonomialMatrix> shifts;

  std::size_t size() const { return basis.size(); }
  /// Basis position of alpha; throws std::out_of_range when |alpha| > D.
  std::size_t position(const MultiIndex& alpha) const;
  /// T^beta as an exact product of the shift matrices.
  SqrtMonomialMatrix power(const MultiIndex& beta) const;

  std::unordered_map<std::string, std::size_t> index;
};

/// T_i e_alpha = sqrt(rho(alpha - e_i)/rho(alpha)) e_{alpha - e_i}. Verifies pairwise
/// commutativity before returning; a failure throws std::logic_error.
TruncatedTuple build_truncated(const WeightFunction& weight, unsigned D);

struct CommutatorCheck {
  std::size_t i = 0, j = 0;
  std::size_t mismatched_columns = 0;
  double frobenius = 0;
};

/// T_i T_j - T_j T_i for every pair i < j.
std::vector<CommutatorCheck> commutator_checks(const TruncatedTuple& tuple);

/// Diagonal of sum_{|beta| <= k} (-1)^{|beta|} k!/(beta!(k - |beta|)!) T^{*beta} T^beta.
/// The operator is diagonal; gram_diagonal enforces it.
std::vector<Rational> defect_operator(const TruncatedTuple& tuple, unsigned k);

/// Diagonal of M_T^k(I) = sum_{|beta| = k} k!/beta! T^{*beta} T^beta.
std::vector<Rational> m_power_diag(const TruncatedTuple& tuple, unsigned k);

/// m_power_diag entries at alpha for k = 0 .. k_max. Throws std::out_of_range if |alpha| > D.
std::vector<Rational> decay_curve(const TruncatedTuple& tuple, const MultiIndex& alpha, unsigned k_max);

/// Bases this large switch the floating cross-check to sparse storage.
constexpr unsigned kSparseDegreeThreshold = 30;

template <typename Scalar>
struct FloatDefect {
  std::vector<Scalar> diagonal;
  Scalar max_off_diagonal{0};
  bool sparse = false;
};

/// Defect operator formed from floating matrices with entries sqrt(q), by explicit
/// products and adjoints. Independent of the exact path; used to cross-check it.
template <typename Scalar>
FloatDefect<Scalar> float_defect_operator(const TruncatedTuple& tuple, unsigned k);

// ---- implementation of the floating path ----

namespace detail {

template <typename Scalar>
Scalar sqrt_of(const Rational& q) {
  using std::sqrt;
  return sqrt(to_real<Scalar>(q));
}

template <typename Matrix, typename Scalar>
FloatDefect<Scalar> float_defect_impl(const TruncatedTuple& tuple, unsigned k,
                                      const std::vector<Matrix>& shifts, Matrix identity) {
  const auto n = static_cast<Eigen::Index>(tuple.size());
  Matrix sum = Matrix(n, n);
  sum.setZero();
  for (const auto& beta : enumerate_leq_degree(tuple.m, k)) {
    Matrix power = identity;
    for (std::size_t i = 0; i < tuple.m; ++i)
      for (unsigned r = 0; r < beta[i]; ++r) power = Matrix(shifts[i] * power);
    Matrix gram = Matrix(power.adjoint() * power);
    Scalar c = to_real<Scalar>(multinomial(k, beta));
    if (degree(beta) % 2 == 1) c = -c;
    sum = Matrix(sum + c * gram);
  }
  FloatDefect<Scalar> out;
  out.diagonal.resize(tuple.size());
  for (Eigen::Index i = 0; i < n; ++i) out.diagonal[static_cast<std::size_t>(i)] = sum.coeff(i, i);
  if constexpr (std::is_base_of_v<Eigen::SparseMatrixBase<Matrix>, Matrix>) {
    out.sparse = true;
    for (Eigen::Index c = 0; c < sum.outerSize(); ++c)
      for (typename Matrix::InnerIterator it(sum, c); it; ++it)
        if (it.row() != it.col()) {
          using std::abs;
          Scalar v = abs(it.value());
          if (v > out.max_off_diagonal) out.max_off_diagonal = v;
        }
  } else {
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        if (r != c) {
          using std::abs;
          Scalar v = abs(sum(r, c));
          if (v > out.max_off_diagonal) out.max_off_diagonal = v;
        }
  }
  return out;
}

}  // namespace detail

template <typename Scalar>
FloatDefect<Scalar> float_defect_operator(const TruncatedTuple& tuple, unsigned k) {
  const auto n = static_cast<Eigen::Index>(tuple.size());
  if (tuple.degree_bound < kSparseDegreeThreshold) {
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    std::vector<Dense> shifts;
    for (const auto& t : tuple.shifts) {
      Dense d = Dense::Zero(n, n);
      for (std::size_t c = 0; c < t.size(); ++c)
        if (const auto& e = t.column(c))
          d(static_cast<Eigen::Index>(e->row), static_cast<Eigen::Index>(c)) = detail::sqrt_of<Scalar>(e->square);
      shifts.push_back(std::move(d));
    }
    return detail::float_defect_impl<Dense, Scalar>(tuple, k, shifts, Dense::Identity(n, n));
  }
  using Sparse = Eigen::SparseMatrix<Scalar>;
  std::vector<Sparse> shifts;
  for (const auto& t : tuple.shifts) {
    std::vector<Eigen::Triplet<Scalar>> triplets;
    for (std::size_t c = 0; c < t.size(); ++c)
      if (const auto& e = t.column(c))
        triplets.emplace_back(static_cast<Eigen::Index>(e->row), static_cast<Eigen::Index>(c),
                              detail::sqrt_of<Scalar>(e->square));
    Sparse s(n, n);
    s.setFromTriplets(triplets.begin(), triplets.end());
    shifts.push_back(std::move(s));
  }
  Sparse identity(n, n);
  identity.setIdentity();
  return detail::float_defect_impl<Sparse, Scalar>(tuple, k, shifts, identity);
}

}  // namespace wshift
