// Copyright 2026 The cantori Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace cantori {

/// Number of worker threads; 0 means hardware concurrency.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(block) for block in [0, block_count) on up to `threads` workers.
/// Blocks are claimed dynamically; callers write into per-block slots and
/// reduce in block order, which keeps results independent of the thread
/// count. If blocks throw, the exception of the lowest failing block is
/// rethrown; every block below it has run to completion by then.
template <class Body>
void for_each_block(std::size_t block_count, unsigned threads, Body&& body) {
  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(block_count, 1)));
  if (threads <= 1) {
    for (std::size_t b = 0; b < block_count; ++b) body(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_block = block_count;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= block_count) return;
      try {
        body(b);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (b < failed_block) {
          failed_block = b;
          failure = std::current_exception();
        }
        next.store(block_count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// Like for_each_block, but produce(b) returns a partial result that is handed
/// to consume() strictly in block order. Only results that finished out of
/// order are held in memory.
template <class Produce, class Consume>
void for_each_block_ordered(std::size_t block_count, unsigned threads, Produce&& produce,
                            Consume&& consume) {
  using Result = decltype(produce(std::size_t{0}));
  std::mutex mutex;
  std::map<std::size_t, Result> pending;
  std::size_t next_commit = 0;
  for_each_block(block_count, threads, [&](std::size_t b) {
    Result r = produce(b);
    std::lock_guard lock(mutex);
    pending.emplace(b, std::move(r));
    for (auto it = pending.find(next_commit); it != pending.end(); it = pending.find(next_commit)) {
      consume(std::move(it->second));
      pending.erase(it);
      ++next_commit;
    }
  });
}

}  // namespace cantori
