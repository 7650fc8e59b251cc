#include "permcount/permanent.hpp"

namespace permcount {

namespace {

BigInt to_bigint(__int128 v) {
  const bool negative = v < 0;
  unsigned __int128 mag = negative ? -static_cast<unsigned __int128>(v) : v;
  const auto hi = static_cast<std::uint64_t>(mag >> 64);
  const auto lo = static_cast<std::uint64_t>(mag);
  BigInt out = BigInt(hi);
  out <<= 64;
  out += BigInt(lo);
  return negative ? BigInt(-out) : out;
}

}  // namespace

BigInt factorial(std::uint32_t n) {
  BigInt out = 1;
  for (std::uint32_t k = 2; k <= n; ++k) out *= k;
  return out;
}

std::vector<std::size_t> SetPartition::block_sizes() const {
  std::vector<std::size_t> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back(b.size());
  return out;
}

PartitionEnumerator::PartitionEnumerator(std::size_t n, std::size_t max_n) : n_(n) {
  if (n > max_n) throw GuardError("max_bell", max_n, n);
  if (n > 255) throw GuardError("max_bell", 255, n);
}

bool PartitionEnumerator::next() {
  if (!started_) {
    started_ = true;
    growth_.assign(n_, 0);
    prefix_max_.assign(n_, 0);
    blocks_ = n_ == 0 ? 0 : 1;
    return true;
  }
  for (std::size_t i = n_; i-- > 1;) {
    if (growth_[i] <= prefix_max_[i - 1]) {
      ++growth_[i];
      prefix_max_[i] = std::max(prefix_max_[i - 1], growth_[i]);
      for (std::size_t k = i + 1; k < n_; ++k) {
        growth_[k] = 0;
        prefix_max_[k] = prefix_max_[i];
      }
      blocks_ = static_cast<std::size_t>(prefix_max_[n_ - 1]) + 1;
      return true;
    }
  }
  return false;
}

SetPartition PartitionEnumerator::partition() const {
  SetPartition out;
  out.blocks.resize(blocks_);
  for (std::size_t i = 0; i < n_; ++i) out.blocks[growth_[i]].push_back(i + 1);
  return out;
}

std::vector<SetPartition> enumerate_partitions(std::size_t n, std::size_t max_n) {
  PartitionEnumerator it(n, max_n);
  std::vector<SetPartition> out;
  while (it.next()) out.push_back(it.partition());
  return out;
}

BigInt per_v_partition(const FieldCtx& ctx, std::size_t max_bell) {
  const std::size_t n = ctx.q() - 1;
  PartitionEnumerator it(n, max_bell);
  const __int128 zero_block = static_cast<__int128>(ctx.q()) - 1;
  std::vector<__int128> fact(n + 1, 1);
  for (std::size_t k = 2; k <= n; ++k) fact[k] = fact[k - 1] * static_cast<__int128>(k);

  // Terms fit in 128 bits for n <= 14 (n! * n^n < 2^127); wider sets take the BigInt path.
  const bool narrow = n <= 14;
  BigInt total = 0;
  __int128 pending = 0;
  std::size_t pending_count = 0;
  std::vector<FieldElem> sums(n);
  std::vector<std::size_t> sizes(n);
  while (it.next()) {
    const std::size_t t = it.block_count();
    std::fill_n(sums.begin(), t, ctx.zero());
    std::fill_n(sizes.begin(), t, std::size_t{0});
    const auto& growth = it.growth();
    for (std::size_t i = 0; i < n; ++i) {
      sums[growth[i]] = ctx.add(sums[growth[i]], ctx.omega_pow(static_cast<std::int64_t>(i + 1)));
      ++sizes[growth[i]];
    }
    const bool negative = (n - t) % 2 == 1;
    if (narrow) {
      __int128 term = negative ? -1 : 1;
      for (std::size_t b = 0; b < t; ++b) {
        term *= fact[sizes[b] - 1];
        term *= sums[b].code == 0 ? zero_block : -1;
      }
      pending += term;
      if (++pending_count == (std::size_t{1} << 20)) {
        total += to_bigint(pending);
        pending = 0;
        pending_count = 0;
      }
    } else {
      BigInt term = negative ? -1 : 1;
      for (std::size_t b = 0; b < t; ++b) {
        term *= factorial(static_cast<std::uint32_t>(sizes[b] - 1));
        term *= sums[b].code == 0 ? BigInt(ctx.q() - 1) : BigInt(-1);
      }
      total += term;
    }
  }
  return total + to_bigint(pending);
}

}  // namespace permcount
