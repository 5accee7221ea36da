#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "ldforge/exec.hpp"

using namespace ldforge;

namespace {

// Enough work per index that a scheduling bug would actually reorder
// something observable.
std::uint64_t churn(std::size_t i) {
  std::uint64_t x = i * 2654435761u + 1;
  for (int r = 0; r < 50; ++r) x = x * 6364136223846793005ull + 1442695040888963407ull;
  return x;
}

}  // namespace

TEST_CASE("serial and parallel lanes fill identical slots") {
  const std::size_t n = 10007;
  std::vector<std::uint64_t> serial(n, 0), parallel(n, 0);
  for_each_index(n, ExecMode::Serial, [&](std::size_t i) { serial[i] = churn(i); });
  for_each_index(n, ExecMode::Parallel, [&](std::size_t i) { parallel[i] = churn(i); });
  CHECK(serial == parallel);
}

TEST_CASE("every index runs exactly once") {
  const std::size_t n = 4096;
  for (ExecMode mode : {ExecMode::Serial, ExecMode::Parallel}) {
    std::vector<std::atomic<int>> hits(n);
    for (auto& h : hits) h.store(0);
    for_each_index(n, mode, [&](std::size_t i) { hits[i].fetch_add(1); });
    for (std::size_t i = 0; i < n; ++i) CHECK(hits[i].load() == 1);
  }
}

TEST_CASE("n = 0 never invokes the body") {
  for (ExecMode mode : {ExecMode::Serial, ExecMode::Parallel}) {
    bool called = false;
    for_each_index(0, mode, [&](std::size_t) { called = true; });
    CHECK_FALSE(called);
  }
}

TEST_CASE("exceptions propagate out of both lanes") {
  for (ExecMode mode : {ExecMode::Serial, ExecMode::Parallel}) {
    CHECK_THROWS_AS(
        for_each_index(64, mode,
                       [&](std::size_t i) {
                         if (i == 17) throw std::runtime_error("boom");
                       }),
        std::runtime_error);
  }
}

TEST_CASE("results match under contention-heavy accumulation") {
  const std::size_t n = 2000;
  std::vector<std::uint64_t> a(n), b(n);
  for_each_index(n, ExecMode::Serial, [&](std::size_t i) { a[i] = churn(i) % 97; });
  for_each_index(n, ExecMode::Parallel, [&](std::size_t i) { b[i] = churn(i) % 97; });
  CHECK(std::accumulate(a.begin(), a.end(), std::uint64_t{0}) ==
        std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
}
