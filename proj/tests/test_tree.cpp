#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "psos/errors.hpp"
#include "psos/tree.hpp"
#include "support.hpp"

using namespace psos;

TEST_CASE("volume shape for k = 2, n = 2") {
  TreeVolume vol(2, 2);
  CHECK(vol.level_size(0) == 1);
  CHECK(vol.level_size(1) == 3);
  CHECK(vol.level_size(2) == 6);
  CHECK(vol.vertex_count() == 10);
  CHECK(vol.successors(0).size() == 3);  // root has k+1 successors
  CHECK(vol.successors(1).size() == 2);
  CHECK(vol.successors(4).empty());      // leaves
  CHECK(vol.edges().size() == 9);
  for (std::size_t v = 1; v < vol.vertex_count(); ++v) {
    CHECK(vol.level_of(v) == vol.level_of(vol.parent(v)) + 1);
  }
  CHECK_THROWS_AS(vol.parent(0), DomainError);
}

TEST_CASE("order-1 volume is a line through the root") {
  TreeVolume line(1, 3);
  CHECK(line.vertex_count() == 7);
  for (unsigned j = 1; j <= 3; ++j) CHECK(line.level_size(j) == 2);
}

TEST_CASE("root fanout is k+1") {
  TreeVolume vol(3, 1);
  CHECK(vol.successors(0).size() == 4);
  CHECK(vol.vertex_count() == 5);
}

TEST_CASE("configuration counting and enumeration order") {
  TreeVolume vol(2, 1);
  CHECK(config_count(vol, 1, Region::ball, 1) == 16);
  CHECK(config_count(vol, 2, Region::sphere, 1) == 27);
  TreeVolume point(1, 0);
  CHECK(config_count(point, 4, Region::ball, 0) == 5);
  CHECK_THROWS_AS(config_count(TreeVolume(2, 3), 2, Region::ball, 3, 1000), CapExceededError);

  ConfigEnumerator en(vol, 1, Region::ball, 1);
  std::vector<std::vector<uint8_t>> seen;
  for (; en.valid(); en.advance()) seen.push_back(en.config().spins);
  REQUIRE(seen.size() == 16);
  CHECK(seen.front() == std::vector<uint8_t>{0, 0, 0, 0});
  CHECK(seen[1] == std::vector<uint8_t>{0, 0, 0, 1});
  CHECK(seen.back() == std::vector<uint8_t>{1, 1, 1, 1});
  CHECK(std::is_sorted(seen.begin(), seen.end()));
}

TEST_CASE("hamiltonian on explicit configurations") {
  ModelParams params = ModelParams::from_theta_rational(3, 2, 2, mpq_class(28), 24);
  TreeVolume vol(2, 1);

  SpinConfiguration constant{Region::ball, 1, {1, 1, 1, 1}};
  CHECK(hamiltonian_weight(vol, constant) == 0);
  CHECK(hamiltonian(vol, constant, params).is_zero());

  ModelParams ising = ModelParams::from_theta_rational(3, 2, 1, mpq_class(4), 24);
  SpinConfiguration one_bad{Region::ball, 1, {0, 1, 0, 0}};
  CHECK(hamiltonian_weight(vol, one_bad) == 1);
  CHECK(hamiltonian(vol, one_bad, ising).agrees_with(ising.coupling()));

  SpinConfiguration spread{Region::ball, 1, {0, 2, 1, 0}};
  CHECK(hamiltonian_weight(vol, spread) == 3);
  CHECK(hamiltonian(vol, spread, params).agrees_with(params.coupling() * 3));
}

TEST_CASE("hamiltonian invariances") {
  testsupport::Rng rng(42);
  ModelParams params = ModelParams::from_theta_rational(5, 2, 3, mpq_class(6), 24);
  TreeVolume vol(2, 2);
  ConfigEnumerator en(vol, 3, Region::ball, 2, 1 << 22);
  int checked = 0;
  for (; en.valid() && checked < 250; en.advance(), ++checked) {
    const SpinConfiguration& sigma = en.config();
    // spin flip j -> m - j leaves the weight unchanged
    SpinConfiguration flipped = sigma;
    for (uint8_t& s : flipped.spins) s = static_cast<uint8_t>(3 - s);
    REQUIRE(hamiltonian_weight(vol, sigma) == hamiltonian_weight(vol, flipped));

    // additivity over the edge partition: restrict to V_1
    SpinConfiguration inner{Region::ball, 1, {sigma.spins.begin(),
                                              sigma.spins.begin() + 4}};
    long boundary = 0;
    for (std::size_t e = 3; e < vol.edges().size(); ++e) {
      auto [x, y] = vol.edges()[e];
      boundary += std::abs(static_cast<long>(sigma.spins[x]) -
                           static_cast<long>(sigma.spins[y]));
    }
    REQUIRE(hamiltonian_weight(vol, sigma) ==
            hamiltonian_weight(TreeVolume(2, 1), inner) + boundary);
  }
}

TEST_CASE("enumeration completeness over the boundary") {
  TreeVolume vol(2, 1);
  ConfigEnumerator en(vol, 2, Region::sphere, 1);
  uint64_t count = 0;
  for (; en.valid(); en.advance()) ++count;
  CHECK(count == 27);  // (m+1)^|W_1|
}
