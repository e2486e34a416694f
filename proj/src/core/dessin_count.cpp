#include "dessin_count.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <sstream>
#include <thread>

namespace dlab {

CountFilter count_filter_from_string(const std::string& s) {
  if (s == "all") return CountFilter::All;
  if (s == "clean-strict") return CountFilter::CleanStrict;
  if (s == "clean-loose") return CountFilter::CleanLoose;
  if (s == "two-profile") return CountFilter::TwoProfile;
  throw Error("unknown filter: " + s);
}

std::string count_filter_name(CountFilter f) {
  switch (f) {
    case CountFilter::All: return "all";
    case CountFilter::CleanStrict: return "clean-strict";
    case CountFilter::CleanLoose: return "clean-loose";
    case CountFilter::TwoProfile: return "two-profile";
  }
  return "?";
}

namespace {

constexpr int kMaxDeg = 16;

struct RawKey {
  uint8_t c0, c1;
  int16_t face_idx;
  int16_t one_idx;  // -1 unless TwoProfile
  bool operator<(const RawKey& o) const {
    if (c0 != o.c0) return c0 < o.c0;
    if (c1 != o.c1) return c1 < o.c1;
    if (face_idx != o.face_idx) return face_idx < o.face_idx;
    return one_idx < o.one_idx;
  }
};

struct RawAcc {
  std::map<RawKey, unsigned long long> transitive;
  std::map<RawKey, unsigned long long> all;
};

int cycle_count_raw(const uint8_t* img, int d, Partition* type_out) {
  bool seen[kMaxDeg] = {};
  int count = 0;
  if (type_out) type_out->clear();
  for (int i = 0; i < d; ++i) {
    if (seen[i]) continue;
    ++count;
    int len = 0, j = i;
    do {
      seen[j] = true;
      j = img[j];
      ++len;
    } while (j != i);
    if (type_out) type_out->push_back(static_cast<uint8_t>(len));
  }
  if (type_out) std::sort(type_out->rbegin(), type_out->rend());
  return count;
}

bool transitive_raw(const uint8_t* s0, const uint8_t* s1, int d) {
  int parent[kMaxDeg];
  for (int i = 0; i < d; ++i) parent[i] = i;
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  int comps = d;
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  };
  for (int i = 0; i < d; ++i) {
    unite(i, s0[i]);
    unite(i, s1[i]);
  }
  return comps == 1;
}

bool filter_admits_sigma1(CountFilter f, const uint8_t* s1, int d) {
  if (f != CountFilter::CleanStrict && f != CountFilter::CleanLoose) return true;
  // cycle lengths must be 2 (strict) or in {1,2} (loose)
  bool seen[kMaxDeg] = {};
  for (int i = 0; i < d; ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    do {
      seen[j] = true;
      j = s1[j];
      ++len;
    } while (j != i);
    if (f == CountFilter::CleanStrict && len != 2) return false;
    if (f == CountFilter::CleanLoose && len > 2) return false;
  }
  return true;
}

// enumerate sigma1 with first image fixed to v, accumulating weighted counts
void enumerate_block(int d, int v, const uint8_t* s0, unsigned long long class_weight,
                     CountFilter filter, const std::map<Partition, int>& part_idx,
                     RawAcc& acc) {
  std::array<uint8_t, kMaxDeg> s1{};
  std::vector<uint8_t> rest;
  for (int x = 0; x < d; ++x)
    if (x != v) rest.push_back(static_cast<uint8_t>(x));
  s1[0] = static_cast<uint8_t>(v);
  Partition face_type, one_type;
  do {
    for (int i = 1; i < d; ++i) s1[i] = rest[i - 1];
    if (filter_admits_sigma1(filter, s1.data(), d)) {
      uint8_t prod[kMaxDeg];
      for (int i = 0; i < d; ++i) prod[i] = s0[s1[i]];  // (s0∘s1)(i)
      int c1 = cycle_count_raw(s1.data(), d,
                               filter == CountFilter::TwoProfile ? &one_type : nullptr);
      cycle_count_raw(prod, d, &face_type);
      RawKey key;
      key.c0 = 0;  // filled by caller context via c0 outside; set below
      key.c1 = static_cast<uint8_t>(c1);
      key.face_idx = static_cast<int16_t>(part_idx.at(face_type));
      key.one_idx = filter == CountFilter::TwoProfile
                        ? static_cast<int16_t>(part_idx.at(one_type))
                        : int16_t(-1);
      int c0 = cycle_count_raw(s0, d, nullptr);
      key.c0 = static_cast<uint8_t>(c0);
      acc.all[key] += class_weight;
      if (transitive_raw(s0, s1.data(), d)) acc.transitive[key] += class_weight;
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
}

RawAcc enumerate_degree(int d, CountFilter filter, const std::map<Partition, int>& part_idx) {
  auto classes = conjugacy_classes(d);
  // work items: (class index, first image v)
  struct Item {
    int cls;
    int v;
  };
  std::vector<Item> items;
  for (size_t c = 0; c < classes.size(); ++c)
    for (int v = 0; v < d; ++v) items.push_back({static_cast<int>(c), v});

  std::vector<std::array<uint8_t, kMaxDeg>> reps(classes.size());
  std::vector<unsigned long long> weights(classes.size());
  for (size_t c = 0; c < classes.size(); ++c) {
    Perm rep = class_representative(classes[c].first);
    for (int i = 0; i < d; ++i) reps[c][i] = static_cast<uint8_t>(rep.apply(i));
    weights[c] = classes[c].second.get_ui();
  }

  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned nthreads = d >= 7 ? std::min<unsigned>(hw, 8) : 1;
  std::vector<RawAcc> per_thread(nthreads);
  std::atomic<size_t> next{0};
  auto worker = [&](unsigned tid) {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      const Item& it = items[i];
      enumerate_block(d, it.v, reps[it.cls].data(), weights[it.cls], filter, part_idx,
                      per_thread[tid]);
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  RawAcc merged;
  for (const auto& acc : per_thread) {
    for (const auto& [k, v] : acc.transitive) merged.transitive[k] += v;
    for (const auto& [k, v] : acc.all) merged.all[k] += v;
  }
  return merged;
}

void accumulate_gf(GenFun& gf, int d, const std::map<RawKey, unsigned long long>& counts,
                   const std::vector<Partition>& parts, CountFilter filter) {
  Int dfact = factorial(d);
  for (const auto& [key, count] : counts) {
    const Partition& face = parts[key.face_idx];
    int cfaces = static_cast<int>(face.size());
    int chi = key.c0 + key.c1 + cfaces - d;
    GFKey gk;
    gk.chi = chi;
    gk.face_type = face;
    if (filter == CountFilter::TwoProfile) gk.one_type = parts[key.one_idx];
    Rat w(Int(static_cast<unsigned long>(count)), dfact);
    w.canonicalize();
    ParamPoly term;
    if (filter == CountFilter::TwoProfile) {
      term = ParamPoly::term(w, 0, key.c0);  // gamma^{c0}, profile replaces beta
    } else {
      term = ParamPoly::term(w, key.c1, key.c0);  // beta^{c1} gamma^{c0}
    }
    auto it = gf.coeff.find(gk);
    if (it == gf.coeff.end())
      gf.coeff[gk] = term;
    else
      it->second += term;
  }
}

int effective_cap(CountFilter f, const CountCaps& caps) {
  return f == CountFilter::TwoProfile ? caps.d_max_two_profile : caps.d_max_all;
}

}  // namespace

GenFun connected_gf(int d_max, CountFilter filter, const CountCaps& caps) {
  if (d_max < 1 || d_max > effective_cap(filter, caps))
    throw Error("connected_gf: d_max " + std::to_string(d_max) + " over cap " +
                std::to_string(effective_cap(filter, caps)));
  GenFun gf;
  gf.d_max = d_max;
  gf.filter = filter;
  gf.connected = true;
  for (int d = 1; d <= d_max; ++d) {
    auto parts = partitions_of(d);
    std::map<Partition, int> part_idx;
    for (size_t i = 0; i < parts.size(); ++i) part_idx[parts[i]] = static_cast<int>(i);
    RawAcc acc = enumerate_degree(d, filter, part_idx);
    accumulate_gf(gf, d, acc.transitive, parts, filter);
  }
  return gf;
}

GenFun partition_function(int d_max, CountFilter filter, const CountCaps& caps) {
  if (d_max < 0 || d_max > effective_cap(filter, caps))
    throw Error("partition_function: d_max over cap");
  GenFun gf;
  gf.d_max = d_max;
  gf.filter = filter;
  gf.connected = false;
  gf.coeff[GFKey{0, {}, {}}] = ParamPoly(Rat(1));  // empty graph
  for (int d = 1; d <= d_max; ++d) {
    auto parts = partitions_of(d);
    std::map<Partition, int> part_idx;
    for (size_t i = 0; i < parts.size(); ++i) part_idx[parts[i]] = static_cast<int>(i);
    RawAcc acc = enumerate_degree(d, filter, part_idx);
    accumulate_gf(gf, d, acc.all, parts, filter);
  }
  return gf;
}

std::map<int, std::map<GFKey, ParamPoly>> GenFun::by_genus() const {
  std::map<int, std::map<GFKey, ParamPoly>> out;
  for (const auto& [k, v] : coeff) {
    if ((2 - k.chi) % 2 != 0) throw Error("GenFun::by_genus: odd Euler characteristic bucket");
    out[(2 - k.chi) / 2][k] = v;
  }
  return out;
}

namespace {

int gf_degree(const GFKey& k) {
  int d = 0;
  for (auto p : k.face_type) d += p;
  return d;
}

Partition merge_parts(const Partition& a, const Partition& b) {
  Partition out(a);
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

GenFun gf_exp(const GenFun& connected) {
  if (!connected.connected) throw Error("gf_exp expects a connected generating function");
  GenFun out;
  out.d_max = connected.d_max;
  out.filter = connected.filter;
  out.connected = false;
  std::map<GFKey, ParamPoly> acc;
  acc[GFKey{0, {}, {}}] = ParamPoly(Rat(1));
  std::map<GFKey, ParamPoly> power;  // F^k / k!
  power[GFKey{0, {}, {}}] = ParamPoly(Rat(1));
  for (int k = 1; k <= connected.d_max; ++k) {
    std::map<GFKey, ParamPoly> next;
    for (const auto& [ka, va] : power) {
      for (const auto& [kb, vb] : connected.coeff) {
        if (gf_degree(ka) + gf_degree(kb) > connected.d_max) continue;
        GFKey key{ka.chi + kb.chi, merge_parts(ka.face_type, kb.face_type),
                  merge_parts(ka.one_type, kb.one_type)};
        ParamPoly prod = va * vb;
        auto it = next.find(key);
        if (it == next.end())
          next[key] = prod;
        else
          it->second += prod;
      }
    }
    for (auto& [key, v] : next) {
      ParamPoly scaled = v.scaled(Rat(1, k));
      auto it = acc.find(key);
      if (it == acc.end())
        acc[key] = scaled;
      else
        it->second += scaled;
      v = scaled;
    }
    power = std::move(next);
    if (power.empty()) break;
  }
  for (auto& [k, v] : acc)
    if (!v.is_zero()) out.coeff[k] = v;
  return out;
}

GenFun gf_swap_params(const GenFun& gf) {
  GenFun out;
  out.d_max = gf.d_max;
  out.filter = gf.filter;
  out.connected = gf.connected;
  for (const auto& [k, v] : gf.coeff) out.coeff[k] = v.swapped();
  return out;
}

Series<Rat> gf_evaluate(const GenFun& gf, const ModelParams& params,
                        const std::vector<Rat>& lambdas, const std::vector<Rat>& lambdas_one) {
  bool nonconstant = false;
  for (const auto& [k, v] : gf.coeff)
    if (!k.face_type.empty()) nonconstant = true;
  if (nonconstant && lambdas.empty()) throw Error("gf_evaluate: empty lambda list");
  if (gf.filter == CountFilter::TwoProfile && lambdas_one.empty())
    throw Error("gf_evaluate: TwoProfile needs a second lambda list");

  // power sums P[r] = sum lambda_i^{2r}
  int D = 2 * gf.d_max;
  std::vector<Rat> P(gf.d_max + 1, Rat(0)), Q(gf.d_max + 1, Rat(0));
  for (int r = 1; r <= gf.d_max; ++r) {
    for (const auto& l : lambdas) P[r] += rat_pow(l, 2 * r);
    for (const auto& l : lambdas_one) Q[r] += rat_pow(l, 2 * r);
  }

  auto vars = make_vars({{"eps", 1}});
  Series<Rat> out(vars, D);
  for (const auto& [k, v] : gf.coeff) {
    Rat c = v.eval(params.beta, params.gamma) * rat_pow(params.N, k.chi);
    int epow = 0;
    for (auto r : k.face_type) {
      c *= P[r];
      epow += 2 * r;
    }
    for (auto s : k.one_type) {
      c *= Q[s];
      epow += 2 * s;
    }
    if (c == 0 || epow > D) continue;
    Mono m(1, 0);
    m[0] = static_cast<uint8_t>(epow);
    out.add_term(m, c);
  }
  return out;
}

std::string gf_to_csv(const GenFun& gf) {
  std::ostringstream os;
  os << "degree,chi,genus,monomial,coefficient\n";
  for (const auto& [k, v] : gf.coeff) {
    int d = gf_degree(k);
    std::ostringstream mono;
    for (size_t i = 0; i < k.face_type.size(); ++i) {
      if (i) mono << "*";
      mono << "t" << static_cast<int>(k.face_type[i]);
    }
    for (size_t i = 0; i < k.one_type.size(); ++i) {
      if (i || !k.face_type.empty()) mono << "*";
      mono << "T" << static_cast<int>(k.one_type[i]);
    }
    if (k.face_type.empty() && k.one_type.empty()) mono << "1";
    std::string genus = (2 - k.chi) % 2 == 0 ? std::to_string((2 - k.chi) / 2) : "-";
    os << d << "," << k.chi << "," << genus << "," << mono.str() << ",\"" << v.str() << "\"\n";
  }
  return os.str();
}

nlohmann::json gf_to_json(const GenFun& gf) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [k, v] : gf.coeff) {
    nlohmann::json face = nlohmann::json::array(), one = nlohmann::json::array();
    for (auto p : k.face_type) face.push_back(static_cast<int>(p));
    for (auto p : k.one_type) one.push_back(static_cast<int>(p));
    terms.push_back({{"chi", k.chi},
                     {"t", face},
                     {"tfrak", one},
                     {"coeff", v.str()}});
  }
  return {{"d_max", gf.d_max},
          {"filter", count_filter_name(gf.filter)},
          {"connected", gf.connected},
          {"terms", terms}};
}

}  // namespace dlab
