#include "wshift/truncation.hpp"

#include <stdexcept>

namespace wshift {

SqrtMonomialMatrix SqrtMonomialMatrix::identity(std::size_t size) {
  SqrtMonomialMatrix out(size);
  for (std::size_t c = 0; c < size; ++c) out.set(c, c, Rational{1});
  return out;
}

void SqrtMonomialMatrix::set(std::size_t row, std::size_t col, Rational square) {
  if (row >= size() || col >= size()) throw std::out_of_range("matrix position out of range");
  if (square < 0) throw std::invalid_argument("entries are square roots of nonnegative rationals");
  if (square == 0)
    columns_[col].reset();
  else
    columns_[col] = Entry{row, std::move(square)};
}

SqrtMonomialMatrix SqrtMonomialMatrix::operator*(const SqrtMonomialMatrix& other) const {
  if (other.size() != size()) throw DimensionMismatch("matrix sizes differ");
  SqrtMonomialMatrix out(size());
  for (std::size_t c = 0; c < size(); ++c) {
    const auto& inner = other.columns_[c];
    if (!inner) continue;
    const auto& outer = columns_[inner->row];
    if (!outer) continue;
    out.columns_[c] = Entry{outer->row, outer->square * inner->square};
  }
  return out;
}

bool SqrtMonomialMatrix::operator==(const SqrtMonomialMatrix& other) const {
  if (size() != other.size()) return false;
  for (std::size_t c = 0; c < size(); ++c) {
    const auto& a = columns_[c];
    const auto& b = other.columns_[c];
    if (a.has_value() != b.has_value()) return false;
    if (a && (a->row != b->row || a->square != b->square)) return false;
  }
  return true;
}

std::vector<Rational> SqrtMonomialMatrix::gram_diagonal() const {
  std::vector<Rational> out(size(), Rational{0});
  std::vector<bool> row_used(size(), false);
  for (std::size_t c = 0; c < size(); ++c) {
    const auto& e = columns_[c];
    if (!e) continue;
    if (row_used[e->row]) throw std::logic_error("two columns share a row; A*A is not diagonal");
    row_used[e->row] = true;
    out[c] = e->square;
  }
  return out;
}

std::size_t SqrtMonomialMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& e : columns_) n += e.has_value();
  return n;
}

std::size_t TruncatedTuple::position(const MultiIndex& alpha) const {
  if (alpha.dim() != m) throw DimensionMismatch("index dimension differs from tuple dimension");
  const auto it = index.find(alpha.str());
  if (it == index.end())
    throw std::out_of_range("index " + alpha.str() + " lies outside the truncation");
  return it->second;
}

SqrtMonomialMatrix TruncatedTuple::power(const MultiIndex& beta) const {
  if (beta.dim() != m) throw DimensionMismatch("index dimension differs from tuple dimension");
  SqrtMonomialMatrix out = SqrtMonomialMatrix::identity(size());
  for (std::size_t i = 0; i < m; ++i)
    for (unsigned r = 0; r < beta[i]; ++r) out = shifts[i] * out;
  return out;
}

std::vector<CommutatorCheck> commutator_checks(const TruncatedTuple& tuple) {
  std::vector<CommutatorCheck> out;
  for (std::size_t i = 0; i < tuple.m; ++i) {
    for (std::size_t j = i + 1; j < tuple.m; ++j) {
      const SqrtMonomialMatrix ab = tuple.shifts[i] * tuple.shifts[j];
      const SqrtMonomialMatrix ba = tuple.shifts[j] * tuple.shifts[i];
      CommutatorCheck check{i, j, 0, 0.0};
      double sum = 0;
      for (std::size_t c = 0; c < tuple.size(); ++c) {
        const auto& x = ab.column(c);
        const auto& y = ba.column(c);
        const bool same = x.has_value() == y.has_value() &&
                          (!x || (x->row == y->row && x->square == y->square));
        if (same) continue;
        ++check.mismatched_columns;
        const double vx = x ? std::sqrt(x->square.convert_to<double>()) : 0.0;
        const double vy = y ? std::sqrt(y->square.convert_to<double>()) : 0.0;
        if (x && y && x->row == y->row)
          sum += (vx - vy) * (vx - vy);
        else
          sum += vx * vx + vy * vy;
      }
      check.frobenius = std::sqrt(sum);
      out.push_back(check);
    }
  }
  return out;
}

TruncatedTuple build_truncated(const WeightFunction& weight, unsigned D) {
  TruncatedTuple tuple;
  tuple.m = weight.dim();
  tuple.degree_bound = D;
  tuple.basis = enumerate_leq_degree(tuple.m, D);
  for (std::size_t p = 0; p < tuple.basis.size(); ++p) tuple.index.emplace(tuple.basis[p].str(), p);

  std::vector<Rational> rho;
  rho.reserve(tuple.basis.size());
  for (const auto& alpha : tuple.basis) rho.push_back(weight.rho(alpha));

  for (std::size_t i = 0; i < tuple.m; ++i) {
    SqrtMonomialMatrix t(tuple.size());
    for (std::size_t c = 0; c < tuple.size(); ++c) {
      const auto lower = tuple.basis[c].lowered(i);
      if (!lower) continue;
      const std::size_t r = tuple.position(*lower);
      t.set(r, c, rho[r] / rho[c]);
    }
    tuple.shifts.push_back(std::move(t));
  }
  for (const auto& check : commutator_checks(tuple))
    if (check.mismatched_columns != 0)
      throw std::logic_error("truncated shifts fail to commute in directions " +
                             std::to_string(check.i) + " and " + std::to_string(check.j));
  return tuple;
}

std::vector<Rational> defect_operator(const TruncatedTuple& tuple, unsigned k) {
  if (k < 1) throw std::domain_error("defect order must be at least 1");
  std::vector<Rational> sum(tuple.size(), Rational{0});
  for (const auto& beta : enumerate_leq_degree(tuple.m, k)) {
    const auto gram = tuple.power(beta).gram_diagonal();
    Rational c{multinomial(k, beta)};
    if (degree(beta) % 2 == 1) c = -c;
    for (std::size_t p = 0; p < sum.size(); ++p)
      if (gram[p] != 0) sum[p] += c * gram[p];
  }
  return sum;
}

std::vector<Rational> m_power_diag(const TruncatedTuple& tuple, unsigned k) {
  std::vector<Rational> sum(tuple.size(), Rational{k == 0 ? 1 : 0});
  if (k == 0) return sum;
  for (const auto& beta : enumerate_degree(tuple.m, k)) {
    const auto gram = tuple.power(beta).gram_diagonal();
    const Rational c{factorial(k), factorial(beta)};
    for (std::size_t p = 0; p < sum.size(); ++p)
      if (gram[p] != 0) sum[p] += c * gram[p];
  }
  return sum;
}

std::vector<Rational> decay_curve(const TruncatedTuple& tuple, const MultiIndex& alpha, unsigned k_max) {
  const std::size_t p = tuple.position(alpha);
  std::vector<Rational> out;
  out.reserve(k_max + 1);
  for (unsigned k = 0; k <= k_max; ++k) out.push_back(m_power_diag(tuple, k)[p]);
  return out;
}

}  // namespace wshift
