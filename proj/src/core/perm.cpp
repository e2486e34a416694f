#include "perm.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace dlab {

Perm Perm::from_one_line(const std::vector<int>& images) {
  Perm p;
  int d = static_cast<int>(images.size());
  if (d > 64) throw Error("Perm: degree above 64 unsupported");
  std::vector<bool> seen(d, false);
  p.img_.resize(d);
  for (int i = 0; i < d; ++i) {
    int v = images[i];
    if (v < 1 || v > d || seen[v - 1]) throw Error("Perm: images are not a bijection on 1..d");
    seen[v - 1] = true;
    p.img_[i] = static_cast<uint8_t>(v - 1);
  }
  return p;
}

Perm Perm::from_cycles(int d, const std::vector<std::vector<int>>& cycles) {
  Perm p(d);
  for (const auto& cyc : cycles) {
    for (size_t k = 0; k < cyc.size(); ++k) {
      int a = cyc[k] - 1, b = cyc[(k + 1) % cyc.size()] - 1;
      if (a < 0 || a >= d || b < 0 || b >= d) throw Error("Perm: cycle symbol out of range");
      p.img_[a] = static_cast<uint8_t>(b);
    }
  }
  // validate
  std::vector<bool> seen(d, false);
  for (int i = 0; i < d; ++i) {
    if (seen[p.img_[i]]) throw Error("Perm: cycles overlap");
    seen[p.img_[i]] = true;
  }
  return p;
}

std::vector<int> Perm::one_line() const {
  std::vector<int> out(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) out[i] = img_[i] + 1;
  return out;
}

Perm Perm::compose(const Perm& q) const {
  if (degree() != q.degree()) throw Error("Perm compose: degree mismatch");
  Perm r;
  r.img_.resize(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r.img_[i] = img_[q.img_[i]];
  return r;
}

Perm Perm::inverse() const {
  Perm r;
  r.img_.resize(img_.size());
  for (size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<uint8_t>(i);
  return r;
}

bool Perm::is_identity() const {
  for (size_t i = 0; i < img_.size(); ++i)
    if (img_[i] != i) return false;
  return true;
}

int Perm::cycle_count() const {
  int d = degree(), count = 0;
  uint64_t seen = 0;
  for (int i = 0; i < d; ++i) {
    if (seen & (1ull << i)) continue;
    ++count;
    int j = i;
    do {
      seen |= 1ull << j;
      j = img_[j];
    } while (j != i);
  }
  return count;
}

Partition Perm::cycle_type() const {
  int d = degree();
  Partition parts;
  uint64_t seen = 0;
  for (int i = 0; i < d; ++i) {
    if (seen & (1ull << i)) continue;
    uint8_t len = 0;
    int j = i;
    do {
      seen |= 1ull << j;
      j = img_[j];
      ++len;
    } while (j != i);
    parts.push_back(len);
  }
  std::sort(parts.rbegin(), parts.rend());
  return parts;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

bool is_transitive(const PermPair& pair) {
  int d = pair.sigma0.degree();
  if (d != pair.sigma1.degree()) throw Error("is_transitive: degree mismatch");
  if (d == 0) return false;
  UnionFind uf(d);
  for (int i = 0; i < d; ++i) {
    uf.unite(i, pair.sigma0.apply(i));
    uf.unite(i, pair.sigma1.apply(i));
  }
  int root = uf.find(0);
  for (int i = 1; i < d; ++i)
    if (uf.find(i) != root) return false;
  return true;
}

int genus_of_pair(const PermPair& pair) {
  if (!is_transitive(pair)) throw Error("genus_of_pair: non-transitive pair");
  int d = pair.sigma0.degree();
  Perm product = pair.sigma0.compose(pair.sigma1);
  int chi = pair.sigma0.cycle_count() + pair.sigma1.cycle_count() + product.cycle_count() - d;
  if ((2 - chi) % 2 != 0 || chi > 2)
    throw Error("genus_of_pair: internal consistency violation (odd or positive-genus-exceeding Euler characteristic)");
  return (2 - chi) / 2;
}

std::vector<Partition> partitions_of(int d) {
  std::vector<Partition> out;
  Partition cur;
  // descending-part recursion, deterministic order
  std::function<void(int, int)> rec = [&](int rem, int maxpart) {
    if (rem == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = std::min(rem, maxpart); p >= 1; --p) {
      cur.push_back(static_cast<uint8_t>(p));
      rec(rem - p, p);
      cur.pop_back();
    }
  };
  rec(d, d);
  return out;
}

Perm class_representative(const Partition& type) {
  int d = 0;
  for (auto p : type) d += p;
  std::vector<std::vector<int>> cycles;
  int next = 1;
  for (auto p : type) {
    std::vector<int> cyc(p);
    std::iota(cyc.begin(), cyc.end(), next);
    next += p;
    cycles.push_back(std::move(cyc));
  }
  return Perm::from_cycles(d, cycles);
}

Int conjugacy_class_size(const Partition& type) {
  int d = 0;
  std::map<int, int> mult;
  for (auto p : type) {
    d += p;
    mult[p]++;
  }
  Int z = 1;
  for (const auto& [len, m] : mult) {
    for (int k = 0; k < m; ++k) z *= len;
    z *= factorial(m);
  }
  return factorial(d) / z;
}

std::vector<std::pair<Partition, Int>> conjugacy_classes(int d) {
  if (d < 1) throw Error("conjugacy_classes: d must be >= 1");
  std::vector<std::pair<Partition, Int>> out;
  for (const auto& p : partitions_of(d)) out.emplace_back(p, conjugacy_class_size(p));
  return out;
}

std::string partition_str(const Partition& p) {
  std::ostringstream os;
  os << "[";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) os << ",";
    os << static_cast<int>(p[i]);
  }
  os << "]";
  return os.str();
}

}  // namespace dlab
