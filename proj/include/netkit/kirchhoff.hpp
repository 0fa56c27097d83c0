#pragma once
// Tree-sum characteristic of a weighted network: spanning-tree sums, tree-pair
// sums, deletion/identification recurrences, and tree-based impedance routes
// that are independent of the matrix algebra.
#include "netkit/graph.hpp"
#include "netkit/modify.hpp"

namespace netkit {

template <class T>
struct WeightedGraph {
  MultiGraph g;
  std::vector<T> w;  // one weight per edge id
};

template <class T>
WeightedGraph<T> weighted_graph(const Netlist& nl) {
  WeightedGraph<T> out{graph_of(nl), {}};
  for (const auto& b : nl.branches) {
    if (b.kind != BranchKind::Direct) throw NonDirectBranch();
    out.w.push_back(scalar_traits<T>::from_value(b.y));
  }
  return out;
}

// Sum over spanning trees of the product of edge weights. Zero for a
// disconnected graph; one for a single isolated node.
template <class T>
T kappa(const MultiGraph& g, const std::vector<T>& w) {
  T sum = scalar_traits<T>::zero();
  for (const auto& tree : spanning_trees(g)) {
    T prod = scalar_traits<T>::one();
    for (int e : tree) prod *= w[e];
    sum += prod;
  }
  return sum;
}

inline long long count_trees(const MultiGraph& g) {
  return static_cast<long long>(spanning_trees(g).size());
}

// Tree count by the deletion/identification recurrence, as an independent
// route to the same number.
inline long long count_trees_recursive(const MultiGraph& g) {
  if (static_cast<int>(g.edges.size()) > 24) throw TooLarge("too many edges for tree recursion");
  if (!is_connected(g)) return 0;
  if (g.edges.empty()) return g.n == 1 ? 1 : 0;
  const Edge e = g.edges.back();
  int id = static_cast<int>(g.edges.size()) - 1;
  auto del = delete_edge(g, id);
  long long without = is_connected(del) ? count_trees_recursive(del) : 0;
  return without + count_trees_recursive(contract_nodes(g, e.head, e.tail));
}

// Identify nodes j and k, dropping any branch between them; weights follow
// the surviving edges.
template <class T>
std::pair<MultiGraph, std::vector<T>> identify_nodes(const MultiGraph& g, const std::vector<T>& w,
                                                     int j, int k) {
  auto [h, ids] = contract_nodes_mapped(g, j, k);
  std::vector<T> hw;
  for (int id : ids) hw.push_back(w[id]);
  return {h, hw};
}

// Sum over pairs of disjoint trees that jointly span the graph, one
// containing j and the other k, of the product of all edge weights used.
template <class T>
T kappa_pair(const MultiGraph& g, const std::vector<T>& w, int j, int k) {
  T sum = scalar_traits<T>::zero();
  for (const auto& [tj, tk] : tree_pairs(g, j, k)) {
    T prod = scalar_traits<T>::one();
    for (int e : tj) prod *= w[e];
    for (int e : tk) prod *= w[e];
    sum += prod;
  }
  return sum;
}

// Tree-pair sum after first identifying the pair (j, k).
template <class T>
T kappa_pair2(const MultiGraph& g, const std::vector<T>& w, int j, int k, int p, int q) {
  auto [h, hw] = identify_nodes(g, w, j, k);
  int pp = contract_index(j, k, p), qq = contract_index(j, k, q);
  // no tree pair can separate a node from itself
  if (pp == qq) return scalar_traits<T>::zero();
  return kappa_pair(h, hw, pp, qq);
}

// Driving-point impedance as a ratio of tree sums.
template <class T>
T resistance_distance(const MultiGraph& g, const std::vector<T>& w, int j, int k) {
  T denom = kappa(g, w);
  if (scalar_traits<T>::is_zero(denom)) throw SingularNetwork();
  return kappa_pair(g, w, j, k) / denom;
}

}  // namespace netkit
