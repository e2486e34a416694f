#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rat.hpp"

namespace dlab {

// Weakly decreasing positive parts.
using Partition = std::vector<uint8_t>;

// Permutation of {1..d} in one-line notation, stored 0-based.
// Composition convention, fixed project-wide: (p*q)(i) = p(q(i)).
class Perm {
 public:
  Perm() = default;
  explicit Perm(int d) : img_(d) {
    for (int i = 0; i < d; ++i) img_[i] = static_cast<uint8_t>(i);
  }
  // one-line notation, 1-based images
  static Perm from_one_line(const std::vector<int>& images);
  static Perm from_cycles(int d, const std::vector<std::vector<int>>& cycles);  // 1-based

  int degree() const { return static_cast<int>(img_.size()); }
  int apply(int i) const { return img_[i]; }  // 0-based
  const std::vector<uint8_t>& images() const { return img_; }
  std::vector<int> one_line() const;  // 1-based

  Perm compose(const Perm& q) const;  // (this ∘ q)(i) = this(q(i))
  Perm inverse() const;
  bool is_identity() const;

  int cycle_count() const;
  Partition cycle_type() const;

  friend bool operator==(const Perm& a, const Perm& b) { return a.img_ == b.img_; }
  friend bool operator<(const Perm& a, const Perm& b) { return a.img_ < b.img_; }

 private:
  std::vector<uint8_t> img_;
};

struct PermPair {
  Perm sigma0;
  Perm sigma1;
};

bool is_transitive(const PermPair& pair);

// genus from 2-2g = c(s0)+c(s1)+c(sInf)-d; requires transitivity
int genus_of_pair(const PermPair& pair);

// all partitions of d, decreasing parts, in a deterministic order
std::vector<Partition> partitions_of(int d);

// canonical representative of the conjugacy class with the given cycle type
Perm class_representative(const Partition& type);

// centralizer order z = prod l^{m_l} m_l!, class size = d!/z
Int conjugacy_class_size(const Partition& type);

std::vector<std::pair<Partition, Int>> conjugacy_classes(int d);

std::string partition_str(const Partition& p);

}  // namespace dlab
