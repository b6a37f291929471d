#include "psos/tree.hpp"

#include <cstdlib>

#include "psos/errors.hpp"

namespace psos {

namespace {
constexpr std::size_t max_volume_vertices = std::size_t(1) << 26;
}

TreeVolume::TreeVolume(unsigned k, unsigned n) : k_(k), n_(n) {
  if (k < 1) throw DomainError("tree order k must be >= 1");
  // level sizes: |W_0| = 1, |W_j| = (k+1) k^(j-1)
  std::vector<std::size_t> sizes{1};
  std::size_t total = 1;
  for (unsigned j = 1; j <= n; ++j) {
    std::size_t w = j == 1 ? k + 1 : sizes.back() * k;
    sizes.push_back(w);
    total += w;
    if (total > max_volume_vertices) {
      throw CapExceededError("volume V_" + std::to_string(n) + " exceeds the vertex guard");
    }
  }
  level_offsets_.assign(n + 2, 0);
  for (unsigned j = 0; j <= n; ++j) level_offsets_[j + 1] = level_offsets_[j] + sizes[j];

  parent_.assign(total, 0);
  child_begin_.assign(total, 0);
  child_end_.assign(total, 0);
  children_.reserve(total > 0 ? total - 1 : 0);
  edges_.reserve(total > 0 ? total - 1 : 0);
  std::size_t next = 1;
  for (std::size_t v = 0; v < total; ++v) {
    unsigned lev = level_of(v);
    std::size_t fanout = lev == n ? 0 : (v == 0 ? k + 1 : k);
    child_begin_[v] = children_.size();
    for (std::size_t c = 0; c < fanout; ++c) {
      parent_[next] = v;
      children_.push_back(next);
      edges_.emplace_back(v, next);
      ++next;
    }
    child_end_[v] = children_.size();
  }
}

std::size_t TreeVolume::ball_size(unsigned j) const {
  if (j > n_) throw DomainError("level beyond volume radius");
  return level_offsets_[j + 1];
}

std::size_t TreeVolume::level_size(unsigned j) const {
  if (j > n_) throw DomainError("level beyond volume radius");
  return level_offsets_[j + 1] - level_offsets_[j];
}

std::size_t TreeVolume::level_begin(unsigned j) const {
  if (j > n_) throw DomainError("level beyond volume radius");
  return level_offsets_[j];
}

unsigned TreeVolume::level_of(std::size_t v) const {
  for (unsigned j = 0; j <= n_; ++j) {
    if (v < level_offsets_[j + 1]) return j;
  }
  throw DomainError("vertex id out of range");
}

std::size_t TreeVolume::parent(std::size_t v) const {
  if (v == 0) throw DomainError("the root has no parent");
  if (v >= parent_.size()) throw DomainError("vertex id out of range");
  return parent_[v];
}

std::span<const std::size_t> TreeVolume::successors(std::size_t v) const {
  if (v >= parent_.size()) throw DomainError("vertex id out of range");
  return {children_.data() + child_begin_[v], child_end_[v] - child_begin_[v]};
}

namespace {

std::size_t region_size(const TreeVolume& vol, Region region, unsigned level) {
  return region == Region::ball ? vol.ball_size(level) : vol.level_size(level);
}

}  // namespace

uint64_t config_count(const TreeVolume& vol, unsigned m, Region region, unsigned level,
                      uint64_t cap) {
  std::size_t cells = region_size(vol, region, level);
  uint64_t total = 1;
  for (std::size_t i = 0; i < cells; ++i) {
    if (total > cap / (m + 1)) {
      throw CapExceededError("(m+1)^|region| exceeds the enumeration cap of " +
                             std::to_string(cap));
    }
    total *= m + 1;
  }
  return total;
}

ConfigEnumerator::ConfigEnumerator(const TreeVolume& vol, unsigned m, Region region,
                                   unsigned level, uint64_t cap)
    : m_(m), total_(config_count(vol, m, region, level, cap)) {
  config_.region = region;
  config_.level = level;
  config_.spins.assign(region_size(vol, region, level), 0);
}

void ConfigEnumerator::advance() {
  if (!valid_) return;
  ++rank_;
  for (std::size_t i = config_.spins.size(); i-- > 0;) {
    if (config_.spins[i] < m_) {
      ++config_.spins[i];
      return;
    }
    config_.spins[i] = 0;
  }
  valid_ = false;  // wrapped around
}

long hamiltonian_weight(const TreeVolume& vol, const SpinConfiguration& sigma) {
  if (sigma.region != Region::ball) {
    throw PreconditionError("hamiltonian needs a configuration on a ball V_n");
  }
  std::size_t cells = sigma.spins.size();
  if (cells != vol.ball_size(sigma.level)) {
    throw PreconditionError("configuration size does not match |V_n|");
  }
  long total = 0;
  for (std::size_t e = 0; e + 1 < cells; ++e) {
    const auto& [x, y] = vol.edges()[e];
    total += std::abs(static_cast<long>(sigma.spins[x]) - static_cast<long>(sigma.spins[y]));
  }
  return total;
}

PadicNumber hamiltonian(const TreeVolume& vol, const SpinConfiguration& sigma,
                        const ModelParams& params) {
  return params.coupling() * hamiltonian_weight(vol, sigma);
}

}  // namespace psos
