#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <thread>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "permcount/bigint.hpp"
#include "permcount/errors.hpp"
#include "permcount/field.hpp"
#include "permcount/group_ring.hpp"

namespace permcount {

template <typename Scalar>
using RingMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::size_t kMaxNaive = 9;
inline constexpr std::size_t kMaxRyser = 24;
inline constexpr std::size_t kMaxBell = 12;

/// Size limits and parallelism shared by every permanent route.
struct EngineConfig {
  std::size_t max_naive = kMaxNaive;
  std::size_t max_ryser = kMaxRyser;
  std::size_t max_bell = kMaxBell;
  unsigned threads = 1;
};

/// Zero and one of the ring an element lives in. Ring elements carry their
/// ring instance (key space, p), so both are built from a sample.
template <typename T>
struct RingTraits {
  static T zero_like(const T&) { return T(0); }
  static T one_like(const T&) { return T(1); }
};

template <>
struct RingTraits<GroupRingElem> {
  static GroupRingElem zero_like(const GroupRingElem& s) { return GroupRingElem::zero(s.space()); }
  static GroupRingElem one_like(const GroupRingElem& s) { return GroupRingElem::one(s.space()); }
};

template <>
struct RingTraits<CycloElem> {
  static CycloElem zero_like(const CycloElem& s) { return CycloElem::zero(s.p()); }
  static CycloElem one_like(const CycloElem& s) { return CycloElem::one(s.p()); }
};

namespace detail {

template <typename Derived>
std::size_t checked_square_dim(const Eigen::MatrixBase<Derived>& m, std::size_t limit,
                               const char* guard) {
  if (m.rows() != m.cols()) throw InputError("permanent needs a square matrix");
  if (m.rows() == 0) throw InputError("permanent of an empty matrix");
  const auto n = static_cast<std::size_t>(m.rows());
  if (n > limit) throw GuardError(guard, limit, n);
  return n;
}

}  // namespace detail

/// Sum over all n! permutations in lexicographic order.
template <typename Derived>
typename Derived::Scalar permanent_naive(const Eigen::MatrixBase<Derived>& m,
                                         std::size_t max_dim = kMaxNaive) {
  using Scalar = typename Derived::Scalar;
  const std::size_t n = detail::checked_square_dim(m, max_dim, "max_naive");
  std::vector<Eigen::Index> sigma(n);
  std::iota(sigma.begin(), sigma.end(), Eigen::Index{0});
  Scalar total = RingTraits<Scalar>::zero_like(m(0, 0));
  do {
    Scalar term = m(0, sigma[0]);
    for (std::size_t i = 1; i < n; ++i) term = term * m(static_cast<Eigen::Index>(i), sigma[i]);
    total += term;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return total;
}

/// Ryser inclusion-exclusion where each subset's row sums are reduced by
/// `fold` instead of being multiplied out:
///
///   (-1)^n * sum_{S != {}} (-1)^{|S|} fold(row sums over the columns in S).
///
/// With fold = product this is the permanent; with fold = L(product) for a
/// linear functional L it is L(permanent). Subsets are walked in
/// binary-reflected Gray-code order, so each step adds or subtracts one column.
/// With several threads the walk is cut into contiguous ranges, each seeded
/// with directly computed row sums, and partial sums are combined in range
/// order, so the result does not depend on the thread count.
template <typename Derived, typename Fold>
auto ryser_fold(const Eigen::MatrixBase<Derived>& m, Fold fold, std::size_t max_dim,
                unsigned threads)
    -> std::invoke_result_t<Fold&, std::span<const typename Derived::Scalar>> {
  using Scalar = typename Derived::Scalar;
  using Result = std::invoke_result_t<Fold&, std::span<const Scalar>>;
  const std::size_t n = detail::checked_square_dim(m, max_dim, "max_ryser");
  const std::uint64_t end = std::uint64_t{1} << n;
  const Scalar zero = RingTraits<Scalar>::zero_like(m(0, 0));

  auto run_range = [&](std::uint64_t first, std::uint64_t last) -> std::optional<Result> {
    std::vector<Scalar> sums(n, zero);
    const std::uint64_t gray0 = first ^ (first >> 1);
    for (std::size_t j = 0; j < n; ++j) {
      if ((gray0 >> j) & 1) {
        for (std::size_t i = 0; i < n; ++i) {
          sums[i] += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
    }
    std::optional<Result> acc;
    for (std::uint64_t k = first; k < last; ++k) {
      const std::uint64_t gray = k ^ (k >> 1);
      if (k != first) {
        const auto j = static_cast<Eigen::Index>(std::countr_zero(k));
        const bool added = (gray >> j) & 1;
        for (std::size_t i = 0; i < n; ++i) {
          if (added) {
            sums[i] += m(static_cast<Eigen::Index>(i), j);
          } else {
            sums[i] -= m(static_cast<Eigen::Index>(i), j);
          }
        }
      }
      Result term = fold(std::span<const Scalar>(sums));
      const bool negative = (std::popcount(gray) % 2 == 1) != (n % 2 == 1);
      if (!acc) {
        acc = negative ? Result(-term) : std::move(term);
      } else if (negative) {
        *acc -= term;
      } else {
        *acc += term;
      }
    }
    return acc;
  };

  const std::uint64_t subsets = end - 1;
  const std::uint64_t workers =
      std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, subsets);
  std::vector<std::optional<Result>> partial(workers);
  if (workers == 1) {
    partial[0] = run_range(1, end);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t first = 1 + subsets * w / workers;
      const std::uint64_t last = 1 + subsets * (w + 1) / workers;
      pool.emplace_back([&, w, first, last] { partial[w] = run_range(first, last); });
    }
  }
  std::optional<Result> total;
  for (auto& part : partial) {
    if (!part) continue;
    if (!total) {
      total = std::move(part);
    } else {
      *total += *part;
    }
  }
  return std::move(*total);
}

struct RyserOptions {
  std::size_t max_dim = kMaxRyser;
  unsigned threads = 1;
};

/// Exact permanent by Ryser's formula with Gray-code row-sum updates.
template <typename Derived>
typename Derived::Scalar permanent_ryser(const Eigen::MatrixBase<Derived>& m,
                                         const RyserOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  auto product = [](std::span<const Scalar> sums) {
    Scalar prod = sums[0];
    for (std::size_t i = 1; i < sums.size(); ++i) prod = prod * sums[i];
    return prod;
  };
  return ryser_fold(m, product, opts.max_dim, opts.threads);
}

/// A set partition of {1..n}; blocks are listed by their least element.
struct SetPartition {
  std::vector<std::vector<std::size_t>> blocks;

  std::size_t block_count() const { return blocks.size(); }
  std::vector<std::size_t> block_sizes() const;
};

/// Streams the set partitions of {1..n} as restricted-growth strings in
/// lexicographic order: growth[i] is the block of element i+1, growth[0] == 0
/// and growth[i] <= 1 + max(growth[0..i-1]).
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(std::size_t n, std::size_t max_n = kMaxBell);

  /// Advances to the next partition; false once every partition has been visited.
  /// The first call yields the all-in-one-block partition.
  bool next();

  const std::vector<std::uint8_t>& growth() const noexcept { return growth_; }
  std::size_t block_count() const noexcept { return blocks_; }
  SetPartition partition() const;

 private:
  std::size_t n_;
  bool started_ = false;
  std::vector<std::uint8_t> growth_;
  std::vector<std::uint8_t> prefix_max_;  // prefix_max_[i] = max(growth_[0..i])
  std::size_t blocks_ = 0;
};

std::vector<SetPartition> enumerate_partitions(std::size_t n, std::size_t max_n = kMaxBell);

/// per(V) for the trace-evaluated matrix of F_q through the set-partition
/// expansion over {1..q-1}: each block B contributes (|B|-1)! times q-1 when
/// sum_{i in B} w^i == 0 and -1 otherwise, with overall sign (-1)^{q-1-t}.
BigInt per_v_partition(const FieldCtx& ctx, std::size_t max_bell = kMaxBell);

}  // namespace permcount
