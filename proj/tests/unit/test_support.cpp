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

#include <atomic>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cantori/parallel.hpp"
#include "cantori/rng.hpp"

using namespace cantori;

TEST_CASE("random streams are deterministic and distinct") {
  RandomStream a(5, 3), b(5, 3), c(5, 4), d(6, 3);
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    firsts.insert(x);
  }
  CHECK(firsts.size() == 100);
  CHECK(c.next() != RandomStream(5, 3).next());
  CHECK(d.next() != RandomStream(5, 3).next());
}

TEST_CASE("uniform draws stay in range with the right mean") {
  RandomStream r(1, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    const double v = r.open_uniform();
    REQUIRE(v > 0.0);
    REQUIRE(v < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal quantile inverts the Gaussian cdf") {
  for (double p : {1e-9, 1e-4, 0.01, 0.2, 0.5, 0.7, 0.975, 1 - 1e-6}) {
    const double x = RandomStream::standard_normal_quantile(p);
    const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
    CHECK(cdf == doctest::Approx(p).epsilon(1e-10));
  }
  RandomStream r(9, 9);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("ordered block reduction is independent of the thread count") {
  auto run = [](unsigned threads) {
    std::vector<std::size_t> order;
    double total = 0.0;
    for_each_block_ordered(
        97, threads, [](std::size_t b) { return 1.0 / (1.0 + static_cast<double>(b)); },
        [&](double x) {
          order.push_back(order.size());
          total += x;
        });
    return std::make_pair(order.size(), total);
  };
  const auto serial = run(1);
  for (unsigned t : {2u, 3u, 8u}) {
    const auto par = run(t);
    CHECK(par.first == serial.first);
    CHECK(par.second == serial.second);  // bitwise: same summation order
  }
}

TEST_CASE("the lowest failing block's exception wins") {
  for (unsigned t : {1u, 4u}) {
    std::atomic<int> ran{0};
    try {
      for_each_block(50, t, [&](std::size_t b) {
        ++ran;
        if (b == 7 || b == 30) throw std::runtime_error("block " + std::to_string(b));
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "block 7");
    }
  }
}
