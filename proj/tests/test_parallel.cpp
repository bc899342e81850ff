#include <doctest.h>

#include <atomic>
#include <stdexcept>
#include <vector>

#include "casimir/parallel.hpp"

using namespace casimir;

TEST_SUITE("parallel") {

TEST_CASE("every index runs exactly once") {
  for (int jobs : {1, 2, 3, 8}) {
    std::vector<std::atomic<int>> hits(101);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { hits[i]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
  }
  parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
}

TEST_CASE("exceptions propagate after all workers finish") {
  std::atomic<int> done{0};
  CHECK_THROWS_AS(parallel_for(20, 3,
                               [&](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                                 done++;
                               }),
                  std::runtime_error);
  CHECK(default_jobs() >= 1);
}

}
