#include "permcount/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "permcount/errors.hpp"

namespace permcount {

namespace {

void check_cap(const FieldCtx& ctx, std::uint64_t cap) {
  const BigInt count = factorial(ctx.q() - 1);
  if (count > cap) {
    const auto requested = count > BigInt(UINT64_MAX) ? UINT64_MAX : static_cast<std::uint64_t>(count);
    throw GuardError("max_oracle", cap, requested);
  }
}

// Visits every ordering of the nonzero codes. Orderings are grouped by their
// first entry; worker w takes first entries w, w+T, w+2T, ... and walks the
// remainder in lexicographic order. `make_state` builds one state per worker,
// `visit(state, images)` is called per ordering.
template <typename State, typename MakeState, typename Visit>
std::vector<State> for_each_ordering(const FieldCtx& ctx, unsigned threads, MakeState make_state,
                                     Visit visit) {
  const std::uint32_t n = ctx.q() - 1;
  const unsigned workers = std::clamp<unsigned>(threads == 0 ? 1 : threads, 1, n);
  std::vector<State> states;
  states.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) states.push_back(make_state());

  auto work = [&](unsigned w) {
    std::vector<FieldElem> images(n);
    for (std::uint32_t first = w; first < n; first += workers) {
      images[0] = FieldElem{first + 1};
      std::uint32_t next_code = 1;
      for (std::uint32_t i = 1; i < n; ++i) {
        if (next_code == first + 1) ++next_code;
        images[i] = FieldElem{next_code++};
      }
      do {
        visit(states[w], images);
      } while (std::next_permutation(images.begin() + 1, images.end()));
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  return states;
}

// Coefficient a_t for 1 <= t <= q-2 from the images' discrete logs.
FieldElem interpolation_coefficient(const FieldCtx& ctx, const std::vector<std::uint32_t>& logs,
                                    std::uint32_t t) {
  const std::uint32_t order = ctx.q() - 1;
  const std::uint32_t step = order - t;
  FieldElem sum = ctx.zero();
  std::uint32_t shift = 0;  // i * (q-1-t) mod (q-1)
  for (std::uint32_t i = 0; i < order; ++i) {
    std::uint32_t e = logs[i] + shift;
    if (e >= order) e -= order;
    sum = ctx.add(sum, ctx.exp_table()[e]);
    shift += step;
    if (shift >= order) shift -= order;
  }
  return ctx.neg(sum);
}

}  // namespace

FieldElem evaluate(const FieldCtx& ctx, const std::vector<FieldElem>& coeffs, FieldElem x) {
  FieldElem acc = ctx.zero();
  for (std::size_t t = coeffs.size(); t-- > 0;) acc = ctx.add(ctx.mul(acc, x), coeffs[t]);
  return acc;
}

Interpolation interpolate(const FieldCtx& ctx, const PermutationAssignment& f, bool self_check) {
  const std::uint32_t order = ctx.q() - 1;
  if (f.images.size() != order) throw InputError("assignment needs q-1 images");
  std::vector<bool> seen(ctx.q(), false);
  std::vector<std::uint32_t> logs(order);
  for (std::uint32_t i = 0; i < order; ++i) {
    const FieldElem y = f.images[i];
    if (!ctx.contains(y) || y.code == 0 || seen[y.code]) {
      throw InputError("assignment is not a permutation of the nonzero elements");
    }
    seen[y.code] = true;
    logs[i] = ctx.log(y);
  }

  Interpolation out;
  out.coeffs.assign(order, ctx.zero());
  for (std::uint32_t t = 1; t < order; ++t) {
    out.coeffs[t] = interpolation_coefficient(ctx, logs, t);
    if (out.coeffs[t].code != 0) out.degree = t;
  }
  if (self_check) {
    if (evaluate(ctx, out.coeffs, ctx.zero()).code != 0) {
      throw IdentityFailure("interpolation", "f(0) != 0");
    }
    for (std::uint32_t i = 0; i < order; ++i) {
      if (evaluate(ctx, out.coeffs, ctx.omega_pow(i)) != f.images[i]) {
        throw IdentityFailure("interpolation", "polynomial misses f(w^" + std::to_string(i) + ")");
      }
    }
  }
  return out;
}

CountTable brute_force_table(const FieldCtx& ctx, const OracleOptions& opts) {
  if (ctx.q() < 3) throw InputError("counting needs q >= 3");
  check_cap(ctx, opts.cap);
  const std::uint32_t order = ctx.q() - 1;

  struct Worker {
    std::vector<std::uint64_t> histogram;
    std::vector<std::uint32_t> logs;
    std::uint64_t visited = 0;
  };
  auto states = for_each_ordering<Worker>(
      ctx, opts.threads,
      [&] { return Worker{std::vector<std::uint64_t>(order, 0), std::vector<std::uint32_t>(order), 0}; },
      [&](Worker& w, const std::vector<FieldElem>& images) {
        // Full interpolation with evaluation self-check on a 1% sample,
        // otherwise the top nonzero coefficient is enough.
        if (w.visited++ % 100 == 0) {
          ++w.histogram[interpolate(ctx, PermutationAssignment{images}, true).degree];
          return;
        }
        for (std::uint32_t i = 0; i < order; ++i) w.logs[i] = ctx.log_table()[images[i].code];
        std::uint32_t degree = 0;
        for (std::uint32_t t = order - 1; t >= 1; --t) {
          if (interpolation_coefficient(ctx, w.logs, t).code != 0) {
            degree = t;
            break;
          }
        }
        ++w.histogram[degree];
      });

  std::vector<std::uint64_t> histogram(order, 0);
  for (const auto& w : states) {
    for (std::uint32_t d = 0; d < order; ++d) histogram[d] += w.histogram[d];
  }
  if (histogram[0] != 0) throw IdentityFailure("interpolation", "degree-0 permutation found");
  CountTable table;
  table.q = ctx.q();
  for (std::uint32_t d = 1; d < order; ++d) table.entries[d] = histogram[d];
  return table;
}

BigInt count_restricted_solutions(const FieldCtx& ctx, const std::vector<std::uint32_t>& exponents,
                                  const OracleOptions& opts) {
  if (ctx.q() < 3) throw InputError("counting needs q >= 3");
  check_cap(ctx, opts.cap);
  const std::uint32_t order = ctx.q() - 1;
  std::vector<std::uint32_t> steps;
  for (auto l : exponents) steps.push_back(l % order);

  auto states = for_each_ordering<std::uint64_t>(
      ctx, opts.threads, [] { return std::uint64_t{0}; },
      [&](std::uint64_t& count, const std::vector<FieldElem>& x) {
        for (const std::uint32_t step : steps) {
          FieldElem sum = ctx.zero();
          std::uint32_t shift = 0;  // (i-1) l mod (q-1)
          for (std::uint32_t i = 0; i < order; ++i) {
            std::uint32_t e = ctx.log_table()[x[i].code] + shift;
            if (e >= order) e -= order;
            sum = ctx.add(sum, ctx.exp_table()[e]);
            shift += step;
            if (shift >= order) shift -= order;
          }
          if (sum.code != 0) return;
        }
        ++count;
      });
  return std::accumulate(states.begin(), states.end(), BigInt(0),
                         [](BigInt acc, std::uint64_t c) { return acc + c; });
}

}  // namespace permcount
