// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "bloomtree/bloom.hpp"
#include "bloomtree/kernels.hpp"
#include "test_support.hpp"

using namespace bloomtree;
using bloomtree::testing::bytes_of;
using bloomtree::testing::random_bytes;

TEST_CASE("derive_params: worked examples") {
  // m_raw = ceil(10000 * ln(100) / ln(2)^2) = 95851, checked with mpmath.
  CHECK(raw_bit_count(10000, 0.01) == 95851);
  auto p = derive_params(10000, 0.01, 32);
  CHECK(p.m == 131072);
  CHECK(p.chunk_count() == 512);
  CHECK(p.chunk_bits() == 256);
  CHECK(p.k == 9);
  CHECK(p.depth() == 9);
  CHECK(p.valid());

  CHECK(raw_bit_count(1, 0.5) == 2);
  auto tiny = derive_params(1, 0.5, 1);
  CHECK(tiny.m == 8);
  CHECK(tiny.k == 6);
  CHECK(tiny.chunk_count() == 1);

  // One chunk already covers m_raw.
  auto one = derive_params(10, 0.1, 64);
  CHECK(raw_bit_count(10, 0.1) <= 512);
  CHECK(one.m == 512);
  CHECK(one.chunk_count() == 1);
  CHECK(one.depth() == 0);
}

TEST_CASE("derive_params: padded m is the smallest power-of-two chunk multiple") {
  for (std::uint32_t cs : {1U, 8U, 32U, 64U, 1000U}) {
    for (double p : {0.1, 0.01, 0.001, 1e-6}) {
      for (std::uint64_t n : {1ULL, 7ULL, 500ULL, 10000ULL}) {
        auto params = derive_params(n, p, cs);
        CAPTURE(cs);
        CAPTURE(p);
        CAPTURE(n);
        CHECK(params.valid());
        auto raw = raw_bit_count(n, p);
        CHECK(params.m >= raw);
        if (params.chunk_count() > 1) CHECK(params.m / 2 < raw);
        auto k = std::max(1.0, std::round(static_cast<double>(params.m) / static_cast<double>(n) * std::log(2.0)));
        CHECK(params.k == static_cast<std::uint32_t>(k));
      }
    }
  }
}

TEST_CASE("derive_params: rejects bad input") {
  CHECK_THROWS_AS(derive_params(0, 0.01, 32), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(10, 0.0, 32), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(10, 1.0, 32), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(10, -0.5, 32), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(10, std::nan(""), 32), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(10, 0.01, 0), std::invalid_argument);
  CHECK_THROWS_AS(derive_params(10, 0.01, 65537), std::invalid_argument);
  CHECK_NOTHROW(derive_params(10, 0.01, 65536));
}

TEST_CASE("BloomParams validity") {
  CHECK(BloomParams{64, 2, 8}.valid());
  CHECK(BloomParams{256, 2, 8}.valid());
  CHECK_FALSE(BloomParams{192, 2, 8}.valid());  // 3 chunks
  CHECK_FALSE(BloomParams{32, 2, 8}.valid());   // less than one chunk
  CHECK_FALSE(BloomParams{64, 0, 8}.valid());
  CHECK_FALSE(BloomParams{64, 2, 0}.valid());
  CHECK_FALSE(BloomParams{0, 2, 8}.valid());
  CHECK_FALSE(BloomParams{64, BloomParams::kMaxK + 1, 8}.valid());
  CHECK_THROWS_AS(BloomParams({192, 2, 8}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(BloomFilter(BloomParams{192, 2, 8}), std::invalid_argument);
}

TEST_CASE("fpr formula") {
  CHECK(fpr(1, 1, 1) == 1.0);
  CHECK(fpr(2, 1, 1) == doctest::Approx(0.5).epsilon(1e-15));
  // (1 - 0.9^10)^2; high-precision value from mpmath.
  CHECK(std::abs(fpr(10, 2, 5) - 0.42421977439056928801) < 1e-12);
  CHECK(fpr(1000, 3, 0) == 0.0);
  CHECK_THROWS_AS(fpr(0, 1, 1), std::invalid_argument);

  // Stable for huge m where 1 - 1/m rounds badly in a naive pow.
  double big = fpr(1ULL << 40, 7, 1ULL << 30);
  double expected = std::pow(1.0 - std::exp(-7.0 / 1024.0), 7.0);
  CHECK(big == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("indices: golden values and shape") {
  BloomParams p{1024, 1, 1};
  // SHA-256("") = e3b0c442 98fc1c14 ..., h1 = 0x141cfc9842c4b0e3, low 10 bits = 227.
  auto empty = indices({}, p);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0] == 227);

  // Python hashlib reference (tests/oracle/golden.py).
  BloomParams p4{1024, 4, 1};
  CHECK(indices(as_bytes("hello"), p4) == std::vector<std::uint64_t>{556, 595, 634, 673});
  CHECK(indices(as_bytes("hello"), p4) == indices(as_bytes("hello"), p4));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    BloomParams q{8ULL << (rng() % 12), static_cast<std::uint32_t>(1 + rng() % 20), 1};
    auto e = random_bytes(rng, rng() % 40);
    auto idx = indices(e, q);
    CHECK(idx.size() == q.k);
    for (auto v : idx) CHECK(v < q.m);
  }
}

TEST_CASE("insert and contains") {
  BloomParams p{1024, 5, 8};
  BloomFilter f(p);
  CHECK(f.bytes().size() == 128);
  CHECK(f.popcount() == 0);
  CHECK_FALSE(f.contains(as_bytes("anything")));

  f.insert(as_bytes("alice"));
  CHECK(f.popcount() <= p.k);
  CHECK(f.contains(as_bytes("alice")));

  BloomFilter twice(p);
  twice.insert(as_bytes("alice"));
  twice.insert(as_bytes("alice"));
  CHECK(twice == f);

  BloomFilter ab(p), ba(p);
  ab.insert(as_bytes("a"));
  ab.insert(as_bytes("b"));
  ba.insert(as_bytes("b"));
  ba.insert(as_bytes("a"));
  CHECK(ab.bytes() == ba.bytes());
}

TEST_CASE("bit order is LSB-first within each byte") {
  BloomFilter f(BloomParams{64, 1, 8});
  f.set_bit(0);
  f.set_bit(9);
  f.set_bit(63);
  CHECK(f.bytes()[0] == 0x01);
  CHECK(f.bytes()[1] == 0x02);
  CHECK(f.bytes()[7] == 0x80);
  CHECK(f.test_bit(9));
  CHECK_FALSE(f.test_bit(8));
}

TEST_CASE("golden filter bytes match the independent reference") {
  BloomFilter f(BloomParams{64, 2, 8});
  f.insert(as_bytes("alice"));
  f.insert(as_bytes("bob"));
  CHECK(to_hex(f.bytes()) == "4200000010080000");
}

TEST_CASE("property: no false negatives and monotone bits") {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 20; ++round) {
    auto params = derive_params(1 + rng() % 300, 0.05, static_cast<std::uint32_t>(1 + rng() % 64));
    BloomFilter f(params);
    std::vector<Bytes> inserted;
    for (std::size_t i = 0; i < 300; ++i) {
      Bytes before = f.bytes();
      inserted.push_back(random_bytes(rng, 1 + rng() % 24));
      f.insert(inserted.back());
      for (std::size_t b = 0; b < before.size(); ++b) {
        CHECK((before[b] & f.bytes()[b]) == before[b]);
      }
    }
    for (const auto& e : inserted) CHECK(f.contains(e));
  }
}

TEST_CASE("property: empirical false-positive rate tracks the formula") {
  std::mt19937_64 rng(2024);
  for (double p : {0.1, 0.01}) {
    const std::uint64_t n = 1000;
    auto params = derive_params(n, p, 32);
    BloomFilter f(params);
    std::set<Bytes> inserted;
    while (inserted.size() < n) {
      auto e = random_bytes(rng, 16);
      if (inserted.insert(e).second) f.insert(e);
    }
    std::vector<Bytes> probes;
    while (probes.size() < 100000) {
      auto e = random_bytes(rng, 16);
      if (!inserted.contains(e)) probes.push_back(std::move(e));
    }
    double measured = static_cast<double>(kernels::parallel::count_hits(f, probes)) / probes.size();
    double predicted = fpr(params.m, params.k, n);
    double tol = std::max(0.5 * predicted, 0.005);
    CAPTURE(p);
    CAPTURE(measured);
    CAPTURE(predicted);
    CHECK(std::abs(measured - predicted) <= tol);
    CHECK(predicted <= p);
  }
}
