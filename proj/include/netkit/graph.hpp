#pragma once
// Undirected-connectivity / directed-incidence view of the network:
// spanning-tree and tree-pair enumeration, deletion and node contraction.
#include "netkit/cofactor.hpp"
#include "netkit/matrix.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

namespace netkit {

struct Edge {
  int head = 0;  // 1-based node indices; current convention i = y (v_head - v_tail)
  int tail = 0;
};

struct MultiGraph {
  int n = 0;
  std::vector<Edge> edges;  // edge id = position

  void add_edge(int head, int tail) {
    if (head == tail) throw std::invalid_argument("self-loops are not allowed");
    if (head < 1 || head > n || tail < 1 || tail > n)
      throw std::out_of_range("edge endpoint out of range");
    edges.push_back({head, tail});
  }
};

namespace detail {
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n + 1) {
    for (int i = 0; i <= n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};
}  // namespace detail

template <class T>
Matrix<T> incidence(const MultiGraph& g) {
  Matrix<T> m(g.n, static_cast<int>(g.edges.size()));
  for (size_t e = 0; e < g.edges.size(); ++e) {
    m(g.edges[e].head - 1, static_cast<int>(e)) = scalar_traits<T>::one();
    m(g.edges[e].tail - 1, static_cast<int>(e)) = -scalar_traits<T>::one();
  }
  return m;
}

inline int component_count(const MultiGraph& g, const std::set<int>* ignore = nullptr) {
  detail::UnionFind uf(g.n);
  int comps = g.n;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (ignore && ignore->count(static_cast<int>(e))) continue;
    if (uf.unite(g.edges[e].head, g.edges[e].tail)) --comps;
  }
  return comps;
}

inline bool is_connected(const MultiGraph& g, const std::set<int>* ignore = nullptr) {
  if (g.n <= 1) return true;
  return component_count(g, ignore) == 1;
}

// All spanning trees as sorted edge-id sets, in lexicographic order.
inline std::vector<std::vector<int>> spanning_trees(const MultiGraph& g) {
  int m = static_cast<int>(g.edges.size());
  if (m > 24) throw TooLarge("spanning tree enumeration limited to 24 edges");
  std::vector<std::vector<int>> out;
  if (g.n == 0) return out;
  if (g.n == 1) {
    out.push_back({});
    return out;
  }
  int k = g.n - 1;
  if (k > m) return out;
  std::vector<int> pick(k);
  for (int i = 0; i < k; ++i) pick[i] = i;
  for (;;) {
    detail::UnionFind uf(g.n);
    bool acyclic = true;
    for (int id : pick)
      if (!uf.unite(g.edges[id].head, g.edges[id].tail)) {
        acyclic = false;
        break;
      }
    if (acyclic) out.push_back(pick);  // k unions succeeded, so it spans
    // next k-combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && pick[i] == m - k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int l = i + 1; l < k; ++l) pick[l] = pick[l - 1] + 1;
  }
  return out;
}

inline MultiGraph delete_edge(const MultiGraph& g, int id) {
  if (id < 0 || id >= static_cast<int>(g.edges.size())) throw std::out_of_range("unknown edge");
  MultiGraph h;
  h.n = g.n;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
    if (e != id) h.edges.push_back(g.edges[e]);
  return h;
}

// Identifies nodes j and k (keeping index min(j,k), dropping max and shifting
// higher indices down), deleting all edges between them. The returned map
// gives, per surviving edge, its id in the original graph.
inline std::pair<MultiGraph, std::vector<int>> contract_nodes_mapped(const MultiGraph& g, int j,
                                                                     int k) {
  if (j == k) throw std::invalid_argument("contract_nodes requires distinct nodes");
  if (j < 1 || j > g.n || k < 1 || k > g.n) throw std::out_of_range("unknown node");
  if (j > k) std::swap(j, k);
  auto remap = [&](int v) { return v == k ? j : shifted_index(k, v); };
  MultiGraph h;
  h.n = g.n - 1;
  std::vector<int> ids;
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    int a = g.edges[e].head, b = g.edges[e].tail;
    if ((a == j && b == k) || (a == k && b == j)) continue;
    h.edges.push_back({remap(a), remap(b)});
    ids.push_back(e);
  }
  return {std::move(h), std::move(ids)};
}

inline MultiGraph contract_nodes(const MultiGraph& g, int j, int k) {
  return contract_nodes_mapped(g, j, k).first;
}

// All pairs (T_j, T_k) of disjoint trees with j in T_j, k in T_k, jointly
// spanning the node set. Each pair is given as two sorted edge-id sets;
// isolated-node trees appear as empty sets.
inline std::vector<std::pair<std::vector<int>, std::vector<int>>> tree_pairs(const MultiGraph& g,
                                                                             int j, int k) {
  auto [h, ids] = contract_nodes_mapped(g, j, k);
  std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
  for (const auto& tree : spanning_trees(h)) {
    // the tree of the contracted graph is a two-component spanning forest of g
    detail::UnionFind uf(g.n);
    std::vector<int> orig;
    for (int e : tree) orig.push_back(ids[e]);
    for (int e : orig) uf.unite(g.edges[e].head, g.edges[e].tail);
    std::vector<int> tj, tk;
    for (int e : orig) {
      if (uf.find(g.edges[e].head) == uf.find(j))
        tj.push_back(e);
      else
        tk.push_back(e);
    }
    out.emplace_back(std::move(tj), std::move(tk));
  }
  return out;
}

}  // namespace netkit
