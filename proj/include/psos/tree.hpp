#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "psos/model.hpp"
#include "psos/padic.hpp"

namespace psos {

inline constexpr uint64_t default_enumeration_cap = uint64_t(1) << 24;

/// The rooted ball V_n of the order-k tree.  Vertices are numbered
/// breadth first (root 0, then W_1 left to right, ...), so the ids of
/// W_j form the contiguous range [level_begin(j), level_begin(j+1)) and
/// V_j is a prefix of the numbering.  Immutable after construction.
class TreeVolume {
 public:
  TreeVolume(unsigned k, unsigned n);

  unsigned order() const { return k_; }
  unsigned radius() const { return n_; }
  std::size_t vertex_count() const { return parent_.size(); }
  std::size_t ball_size(unsigned j) const;   // |V_j|
  std::size_t level_size(unsigned j) const;  // |W_j|
  std::size_t level_begin(unsigned j) const;
  unsigned level_of(std::size_t v) const;
  std::size_t parent(std::size_t v) const;  // throws DomainError for the root
  std::span<const std::size_t> successors(std::size_t v) const;
  /// (parent, child) pairs ordered by child id; the first |V_j|-1 of
  /// them are exactly the edges inside V_j.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

 private:
  unsigned k_;
  unsigned n_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> child_begin_;
  std::vector<std::size_t> child_end_;
  std::vector<std::size_t> level_offsets_;  // size n+2; W_j = [o[j], o[j+1])
  std::vector<std::size_t> children_;       // flattened child ids
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

enum class Region { ball, sphere };

/// Spins 0..m on a region of a volume: on V_level (indexed by vertex
/// id) or on W_level (indexed by offset within the level).
struct SpinConfiguration {
  Region region = Region::ball;
  unsigned level = 0;
  std::vector<uint8_t> spins;
};

/// (m+1)^|region|, guarded by the cap.
uint64_t config_count(const TreeVolume& vol, unsigned m, Region region, unsigned level,
                      uint64_t cap = default_enumeration_cap);

/// Streams all spin configurations of a region in ascending
/// lexicographic order of the spin tuple.
class ConfigEnumerator {
 public:
  ConfigEnumerator(const TreeVolume& vol, unsigned m, Region region, unsigned level,
                   uint64_t cap = default_enumeration_cap);

  bool valid() const { return valid_; }
  const SpinConfiguration& config() const { return config_; }
  uint64_t total() const { return total_; }
  /// Rank of the current configuration in enumeration order.
  uint64_t rank() const { return rank_; }
  void advance();

 private:
  unsigned m_;
  uint64_t total_;
  uint64_t rank_ = 0;
  bool valid_ = true;
  SpinConfiguration config_;
};

/// Integer interaction weight: sum over edges of V_level of
/// |sigma(x) - sigma(y)| (the ordinary absolute value).
long hamiltonian_weight(const TreeVolume& vol, const SpinConfiguration& sigma);

/// H_n(sigma) = J * hamiltonian_weight; lies in the exp_p domain.
PadicNumber hamiltonian(const TreeVolume& vol, const SpinConfiguration& sigma,
                        const ModelParams& params);

}  // namespace psos
