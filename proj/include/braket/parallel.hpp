/*
 * Copyright (C) 2026 The braket authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BRAKET_PARALLEL_HPP
#define BRAKET_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace braket {

inline constexpr std::uint64_t kPairsPerBlock = 1024;

// BRAKET_THREADS if set and positive, else the hardware concurrency.
inline unsigned default_threads() {
  if (const char* env = std::getenv("BRAKET_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Deterministic parallel reduction over indices [0, n).
///
/// Indices are cut into fixed blocks of kPairsPerBlock; each block is folded
/// serially in index order into its own accumulator, and block accumulators
/// are merged in block order. The result is therefore bit-identical for any
/// thread count. `body(acc, index)` must only touch `acc`.
template <class Acc, class MakeAcc, class Body>
Acc reduce_indices(std::uint64_t n, unsigned threads, MakeAcc make_acc, Body body) {
  const std::uint64_t blocks = (n + kPairsPerBlock - 1) / kPairsPerBlock;
  std::vector<Acc> partial;
  partial.reserve(blocks);
  for (std::uint64_t b = 0; b < blocks; ++b) partial.push_back(make_acc());

  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::uint64_t b = next++; b < blocks; b = next++) {
        const std::uint64_t end = std::min(n, (b + 1) * kPairsPerBlock);
        for (std::uint64_t i = b * kPairsPerBlock; i < end; ++i) body(partial[b], i);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };

  const unsigned nthreads =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, threads), std::max<std::uint64_t>(1, blocks)));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  Acc total = make_acc();
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace braket

#endif  // BRAKET_PARALLEL_HPP
