#include "wshift/multiindex.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace wshift {

MultiIndex MultiIndex::unit(std::size_t dim, std::size_t direction) {
  if (direction >= dim) throw DimensionMismatch("unit index direction out of range");
  MultiIndex e = zero(dim);
  e.entries_[direction] = 1;
  return e;
}

bool MultiIndex::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](unsigned v) { return v == 0; });
}

MultiIndex MultiIndex::shifted(std::size_t direction, unsigned count) const {
  if (direction >= dim()) throw DimensionMismatch("shift direction out of range");
  MultiIndex out = *this;
  out.entries_[direction] += count;
  return out;
}

std::optional<MultiIndex> MultiIndex::lowered(std::size_t direction) const {
  if (direction >= dim()) throw DimensionMismatch("shift direction out of range");
  if (entries_[direction] == 0) return std::nullopt;
  MultiIndex out = *this;
  --out.entries_[direction];
  return out;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (dim() != other.dim()) throw DimensionMismatch("multi-index dimensions differ");
  MultiIndex out = *this;
  for (std::size_t i = 0; i < dim(); ++i) out.entries_[i] += other.entries_[i];
  return out;
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (!leq(other, *this)) throw std::domain_error("multi-index difference would be negative");
  MultiIndex out = *this;
  for (std::size_t i = 0; i < dim(); ++i) out.entries_[i] -= other.entries_[i];
  return out;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < entries_.size(); ++i) os << (i ? "," : "") << entries_[i];
  os << ')';
  return os.str();
}

unsigned degree(const MultiIndex& alpha) {
  auto e = alpha.entries();
  return std::accumulate(e.begin(), e.end(), 0u);
}

Integer factorial(const MultiIndex& alpha) {
  Integer out{1};
  for (unsigned a : alpha.entries()) out *= factorial(a);
  return out;
}

bool leq(const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.dim() != beta.dim()) throw DimensionMismatch("multi-index dimensions differ");
  for (std::size_t i = 0; i < alpha.dim(); ++i)
    if (alpha[i] > beta[i]) return false;
  return true;
}

bool graded_less(const MultiIndex& a, const MultiIndex& b) {
  const unsigned da = degree(a), db = degree(b);
  if (da != db) return da < db;
  auto ea = a.entries(), eb = b.entries();
  return std::lexicographical_compare(eb.begin(), eb.end(), ea.begin(), ea.end());
}

namespace {

void enumerate_degree_into(std::vector<unsigned>& prefix, std::size_t remaining_dims, unsigned d,
                           std::vector<MultiIndex>& out) {
  if (remaining_dims == 1) {
    prefix.push_back(d);
    out.emplace_back(prefix);
    prefix.pop_back();
    return;
  }
  for (unsigned first = d + 1; first-- > 0;) {
    prefix.push_back(first);
    enumerate_degree_into(prefix, remaining_dims - 1, d - first, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> enumerate_degree(std::size_t m, unsigned d) {
  if (m == 0) throw DimensionMismatch("dimension must be at least 1");
  std::vector<MultiIndex> out;
  std::vector<unsigned> prefix;
  prefix.reserve(m);
  enumerate_degree_into(prefix, m, d, out);
  return out;
}

std::vector<MultiIndex> enumerate_leq_degree(std::size_t m, unsigned max_degree) {
  std::vector<MultiIndex> out;
  for (unsigned d = 0; d <= max_degree; ++d) {
    auto layer = enumerate_degree(m, d);
    out.insert(out.end(), std::make_move_iterator(layer.begin()),
               std::make_move_iterator(layer.end()));
  }
  return out;
}

std::vector<MultiIndex> enumerate_below(const MultiIndex& alpha, unsigned max_degree) {
  std::vector<MultiIndex> out;
  MultiIndex beta = MultiIndex::zero(alpha.dim());
  // odometer over the box [0, alpha]
  while (true) {
    if (degree(beta) <= max_degree) out.push_back(beta);
    std::size_t i = 0;
    while (i < alpha.dim() && beta[i] == alpha[i]) beta[i++] = 0;
    if (i == alpha.dim()) break;
    ++beta[i];
  }
  std::sort(out.begin(), out.end(), graded_less);
  return out;
}

Integer multinomial(unsigned k, const MultiIndex& alpha) {
  const unsigned d = degree(alpha);
  if (d > k) throw std::domain_error("multinomial: |alpha| exceeds k");
  return factorial(k) / (factorial(alpha) * factorial(k - d));
}

bool verify_vandermonde(const MultiIndex& beta, unsigned i) {
  const unsigned total = degree(beta);
  if (i > total) throw std::domain_error("vandermonde: i exceeds |beta|");
  Integer lhs{0};
  const Integer beta_fact = factorial(beta);
  for (const auto& alpha : enumerate_below(beta, i)) {
    if (degree(alpha) != i) continue;
    lhs += beta_fact / (factorial(alpha) * factorial(beta - alpha));
  }
  return lhs == binomial(total, i);
}

bool verify_binomial_convolution(unsigned n, unsigned j) {
  if (n < 2) throw std::domain_error("binomial convolution needs n >= 2");
  if (j < 2) throw std::domain_error("binomial convolution needs j >= 2");
  const unsigned first = (j <= n) ? 0 : j - n;
  Integer plain{0}, weighted{0};
  for (unsigned i = first; i <= j; ++i) {
    Integer term = binomial(static_cast<long long>(n) - 2 + i, i) * binomial(n, j - i);
    if (i % 2 == 1) term = -term;
    plain += term;
    weighted += term * i;
  }
  return plain == 0 && weighted == 0;
}

bool verify_alternating_sum(unsigned n, unsigned M) {
  if (M > n) throw std::domain_error("alternating sum needs M <= n");
  Integer lhs{0};
  for (unsigned i = 0; i <= M; ++i) {
    Integer term = binomial(n, i);
    lhs += (i % 2 == 0) ? term : Integer{-term};
  }
  Integer rhs = binomial(static_cast<long long>(n) - 1, M);
  if (M % 2 == 1) rhs = -rhs;
  return lhs == rhs;
}

IdentitySuiteResult verify_identity_suite(const IdentitySuiteBounds& bounds) {
  IdentitySuiteResult result;
  auto fail = [&](std::string identity, std::string args) {
    if (!result.failure) result.failure = IdentityFailure{std::move(identity), std::move(args)};
  };

  for (std::size_t m = 1; m <= bounds.dim_max; ++m) {
    for (const auto& beta : enumerate_leq_degree(m, bounds.beta_degree_max)) {
      for (unsigned i = 0; i <= degree(beta); ++i) {
        ++result.vandermonde_checks;
        if (!verify_vandermonde(beta, i))
          fail("vandermonde", "beta=" + beta.str() + " i=" + std::to_string(i));
      }
    }
  }

  for (unsigned n = 2; n <= bounds.convolution_n_max; ++n) {
    for (unsigned j = 2; j <= 3 * n; ++j) {
      ++result.convolution_checks;
      if (!verify_binomial_convolution(n, j))
        fail("binomial-convolution", "n=" + std::to_string(n) + " j=" + std::to_string(j));
    }
  }

  for (unsigned n = 0; n <= bounds.alternating_n_max; ++n) {
    for (unsigned M = 0; M <= n; ++M) {
      ++result.alternating_checks;
      if (!verify_alternating_sum(n, M))
        fail("alternating-sum", "n=" + std::to_string(n) + " M=" + std::to_string(M));
    }
  }

  // multinomial theorem at x = (1, ..., 1)
  for (std::size_t m = 1; m <= bounds.dim_max; ++m) {
    for (unsigned k = 0; k <= bounds.multinomial_k_max; ++k) {
      Integer sum{0};
      for (const auto& alpha : enumerate_degree(m, k)) sum += multinomial(k, alpha);
      ++result.multinomial_checks;
      Integer expected = boost::multiprecision::pow(Integer{static_cast<unsigned long>(m)}, k);
      if (sum != expected)
        fail("multinomial-theorem", "m=" + std::to_string(m) + " k=" + std::to_string(k));
    }
  }
  return result;
}

}  // namespace wshift
