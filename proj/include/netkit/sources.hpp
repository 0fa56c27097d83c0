#pragma once
// Source algebra: Thevenin-Norton conversion, one-port subnetwork
// equivalents, isolated voltage-source elimination, and dependent-source
// stamping.
#include "netkit/solve.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace netkit {

struct ZeroAdmittance : std::invalid_argument {
  ZeroAdmittance() : std::invalid_argument("source admittance must be nonzero") {}
};
struct SingularSubnetwork : std::runtime_error {
  SingularSubnetwork() : std::runtime_error("replaced subnetwork has a singular grounded minor") {}
};
struct UnknownSource : std::invalid_argument {
  explicit UnknownSource(const std::string& name)
      : std::invalid_argument("no such source '" + name + "'") {}
};
struct MissingSeriesAdmittance : std::invalid_argument {
  MissingSeriesAdmittance()
      : std::invalid_argument("voltage-output dependent source needs nonzero series admittance") {}
};
struct VoltageSourceLoop : std::runtime_error {
  VoltageSourceLoop()
      : std::runtime_error("voltage sources form a loop; constraints are redundant or conflicting") {}
};

// Current source I between p and q, sensed positive from q to p (it injects
// +I at p), in parallel with admittance y.
template <class T>
struct NortonSource {
  int p = 0, q = 0;
  T I{};
  T y{};
};

// Voltage source V in series with admittance y; the source raises the
// potential seen by y at the q side, so the element current is y(v_p - v_q - V).
template <class T>
struct TheveninSource {
  int p = 0, q = 0;
  T V{};
  T y{};
};

template <class T>
TheveninSource<T> norton_to_thevenin(const NortonSource<T>& n) {
  if (scalar_traits<T>::is_zero(n.y, 0.0)) throw ZeroAdmittance();
  return {n.p, n.q, n.I / n.y, n.y};
}

template <class T>
NortonSource<T> thevenin_to_norton(const TheveninSource<T>& t) {
  if (scalar_traits<T>::is_zero(t.y, 0.0)) throw ZeroAdmittance();
  return {t.p, t.q, t.y * t.V, t.y};
}

// Port pair (p,q) plus a bipartition of the remaining nodes such that no
// branch or source connects a node in a with a node in b.
struct OnePortDecomposition {
  int p = 0, q = 0;
  std::vector<int> a, b;
};

namespace detail {

// every edge of the netlist that forces two non-port nodes into the same
// side: branch endpoints, source terminals, and the node pairs coupled by a
// dependent source's control
inline std::vector<std::pair<int, int>> coupling_edges(const Netlist& nl) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& br : nl.branches) edges.emplace_back(br.head, br.tail);
  for (const auto& s : nl.sources) {
    edges.emplace_back(s.a, s.b);
    int cp = 0, cq = 0;
    if (s.kind == SourceKind::VCCS || s.kind == SourceKind::VCVS) {
      cp = s.ctrl_p;
      cq = s.ctrl_q;
    } else if (s.kind == SourceKind::CCCS || s.kind == SourceKind::CCVS) {
      if (const Branch* br = nl.find_branch(s.ctrl_branch)) {
        cp = br->head;
        cq = br->tail;
      }
    }
    if (cp && cq) {
      // output and control terminals all end up in one matrix block
      edges.emplace_back(cp, cq);
      edges.emplace_back(s.a, cp);
      edges.emplace_back(s.b, cq);
    }
  }
  return edges;
}

}  // namespace detail

// Split the nodes other than p and q by connectivity with the port removed.
// Side a holds the component of the smallest remaining node; side b holds
// everything else. Returns nothing when the split is trivial.
inline std::optional<OnePortDecomposition> find_one_port(const Netlist& nl, int p, int q) {
  int n = nl.n();
  if (p < 1 || p > n || q < 1 || q > n || p == q) throw std::out_of_range("bad port nodes");
  detail::UnionFind uf(n);
  for (auto [u, v] : detail::coupling_edges(nl))
    if (u != p && u != q && v != p && v != q) uf.unite(u, v);
  OnePortDecomposition dec{p, q, {}, {}};
  int first_root = -1;
  for (int k = 1; k <= n; ++k) {
    if (k == p || k == q) continue;
    if (first_root < 0) first_root = uf.find(k);
    (uf.find(k) == first_root ? dec.a : dec.b).push_back(k);
  }
  if (dec.a.empty() || dec.b.empty()) return std::nullopt;
  return dec;
}

template <class T>
struct OnePortEquivalent {
  NortonSource<T> norton;  // replacement for the removed side, port elements merged in
  T subnetwork_y{};        // Y_Bp^T Y_BB^{-1} Y_Bq, the removed side alone
  T subnetwork_I{};        // its short-circuit current
  bool degenerate = false; // no internal sources: the equivalent is a pure admittance
};

// Norton equivalent of one side of a one-port decomposition, seen from the
// port. Elements directly between p and q (a port branch or a port current
// source) are merged into the returned source.
template <class T>
OnePortEquivalent<T> one_port_equivalent(const Netlist& nl, const OnePortDecomposition& dec,
                                         bool replace_b = true) {
  int n = nl.n();
  const std::vector<int>& gone = replace_b ? dec.b : dec.a;
  // side labels: 0 port, 1 replaced, 2 kept
  std::vector<int> side(n + 1, 2);
  side[dec.p] = side[dec.q] = 0;
  for (int k : gone) side[k] = 1;
  if (replace_b)
    for (int k : dec.a) side[k] = 2;
  else
    for (int k : dec.b) side[k] = 2;
  for (auto [u, v] : detail::coupling_edges(nl))
    if ((side[u] == 1 && side[v] == 2) || (side[u] == 2 && side[v] == 1))
      throw std::invalid_argument("decomposition is not a one-port: an element crosses it");

  int m = static_cast<int>(gone.size());
  auto ym = build<T>(nl);
  Matrix<T> ybb(m, m);
  std::vector<T> ybp(m), ybq(m);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) ybb(r, c) = ym.Y(gone[r] - 1, gone[c] - 1);
    // off-diagonal entries carry -y, so the connecting admittances flip sign
    ybp[r] = -ym.Y(gone[r] - 1, dec.p - 1);
    ybq[r] = -ym.Y(gone[r] - 1, dec.q - 1);
  }

  // current injections at the replaced nodes, and the part of the p-side
  // injection owed to sources spanning p and the replaced side
  auto inj = injection_vector<T>(nl);
  std::vector<T> ib(m);
  for (int r = 0; r < m; ++r) ib[r] = inj[gone[r] - 1];
  T sum_ibp = scalar_traits<T>::zero();
  T port_current = scalar_traits<T>::zero();
  for (const auto& s : nl.sources) {
    if (s.kind != SourceKind::Current) continue;
    T val = scalar_traits<T>::from_value(s.value);
    if (side[s.a] == 1 && s.b == dec.p) sum_ibp -= val;  // injects -val at its a end
    if (side[s.b] == 1 && s.a == dec.p) sum_ibp += val;
    // port-crossing source, sensed as an injection at p
    if (s.a == dec.q && s.b == dec.p) port_current += val;
    if (s.a == dec.p && s.b == dec.q) port_current -= val;
  }
  T port_y = scalar_traits<T>::zero();
  for (const auto& br : nl.branches)
    if ((br.head == dec.p && br.tail == dec.q) || (br.head == dec.q && br.tail == dec.p))
      port_y += scalar_traits<T>::from_value(br.y);

  std::vector<T> w, u;
  try {
    w = gauss_solve(ybb, ib);
    u = gauss_solve(ybb, ybq);
  } catch (const SingularMatrix&) {
    throw SingularSubnetwork();
  }
  OnePortEquivalent<T> out;
  out.subnetwork_I = -sum_ibp;
  out.subnetwork_y = scalar_traits<T>::zero();
  for (int r = 0; r < m; ++r) {
    out.subnetwork_I += ybp[r] * w[r];
    out.subnetwork_y += ybp[r] * u[r];
  }
  out.degenerate = scalar_traits<T>::is_zero(out.subnetwork_I);
  out.norton = {dec.p, dec.q, out.subnetwork_I + port_current, out.subnetwork_y + port_y};
  return out;
}

// Replace one side of a one-port decomposition by its Norton equivalent,
// returning a smaller netlist over the surviving nodes.
inline Netlist replace_one_port(const Netlist& nl, const OnePortDecomposition& dec,
                                bool replace_b = true) {
  auto eq = one_port_equivalent<CRat>(nl, dec, replace_b);
  const std::vector<int>& gone = replace_b ? dec.b : dec.a;
  std::vector<bool> removed(nl.n() + 1, false);
  for (int k : gone) removed[k] = true;

  Netlist out;
  out.omega = nl.omega;
  out.sigma = nl.sigma;
  std::vector<int> remap(nl.n() + 1, 0);
  for (int k = 1; k <= nl.n(); ++k) {
    if (removed[k]) continue;
    out.nodes.push_back(nl.nodes[k - 1]);
    remap[k] = static_cast<int>(out.nodes.size());
  }
  for (const auto& br : nl.branches) {
    if (removed[br.head] || removed[br.tail]) continue;
    Branch nb = br;
    nb.head = remap[br.head];
    nb.tail = remap[br.tail];
    out.branches.push_back(std::move(nb));
  }
  for (const auto& s : nl.sources) {
    if (removed[s.a] || removed[s.b]) continue;
    if (s.kind == SourceKind::VCCS || s.kind == SourceKind::VCVS) {
      if (removed[s.ctrl_p] || removed[s.ctrl_q]) continue;
    }
    Source ns = s;
    ns.a = remap[s.a];
    ns.b = remap[s.b];
    if (s.kind == SourceKind::VCCS || s.kind == SourceKind::VCVS) {
      ns.ctrl_p = remap[s.ctrl_p];
      ns.ctrl_q = remap[s.ctrl_q];
    }
    out.sources.push_back(std::move(ns));
  }
  // port-crossing elements survive the copy above, so only the replaced
  // side's own equivalent is inserted
  if (!scalar_traits<CRat>::is_zero(eq.subnetwork_y)) {
    Branch nb;
    nb.name = "oneport_y";
    nb.head = remap[dec.p];
    nb.tail = remap[dec.q];
    nb.kind = BranchKind::Direct;
    nb.y = eq.subnetwork_y;
    out.branches.push_back(std::move(nb));
  }
  if (!scalar_traits<CRat>::is_zero(eq.subnetwork_I)) {
    Source ns;
    ns.kind = SourceKind::Current;
    ns.name = "oneport_i";
    ns.a = remap[dec.q];  // injects at b = p, matching the port sense
    ns.b = remap[dec.p];
    ns.value = eq.subnetwork_I;
    out.sources.push_back(std::move(ns));
  }
  return out;
}

// Remove an isolated voltage source by contracting its terminals: the source
// (positive at a = p, negative at b = q) disappears, node p merges into q,
// each admittance y that tied p to another node k turns into a current
// source from q to k of value yV, and anything in parallel with the source
// is absorbed.
inline Netlist eliminate_voltage_source(const Netlist& nl, const std::string& name) {
  const Source* src = nullptr;
  for (const auto& s : nl.sources)
    if (s.kind == SourceKind::Voltage && s.name == name) src = &s;
  if (!src) throw UnknownSource(name);
  int p = src->a, q = src->b;
  CRat volt = src->value;

  Netlist out;
  out.omega = nl.omega;
  out.sigma = nl.sigma;
  std::vector<int> remap(nl.n() + 1, 0);
  for (int k = 1; k <= nl.n(); ++k) {
    if (k == p) continue;
    out.nodes.push_back(nl.nodes[k - 1]);
    remap[k] = static_cast<int>(out.nodes.size());
  }
  remap[p] = remap[q];

  std::vector<std::pair<int, CRat>> injected;  // (new node index, y_pk * V)
  for (const auto& br : nl.branches) {
    if (br.kind != BranchKind::Direct) throw NonDirectBranch();
    Branch nb = br;
    nb.head = remap[br.head];
    nb.tail = remap[br.tail];
    if (nb.head == nb.tail) continue;  // parallel with the source: absorbed
    if (br.head == p)
      injected.emplace_back(nb.tail, br.y * volt);
    else if (br.tail == p)
      injected.emplace_back(nb.head, br.y * volt);
    out.branches.push_back(std::move(nb));
  }
  for (const auto& s : nl.sources) {
    if (&s == src) continue;
    Source ns = s;
    ns.a = remap[s.a];
    ns.b = remap[s.b];
    if (s.kind == SourceKind::VCCS || s.kind == SourceKind::VCVS) {
      ns.ctrl_p = remap[s.ctrl_p];
      ns.ctrl_q = remap[s.ctrl_q];
    }
    if (ns.a == ns.b) {
      if (s.kind == SourceKind::Voltage) throw VoltageSourceLoop();
      continue;  // current source in parallel with the eliminated one: absorbed
    }
    out.sources.push_back(std::move(ns));
  }
  for (size_t idx = 0; idx < injected.size(); ++idx) {
    Source ns;
    ns.kind = SourceKind::Current;
    ns.name = name + "_inj" + std::to_string(idx + 1);
    ns.a = remap[q];
    ns.b = injected[idx].first;  // directed q -> k, injecting y_pk V at k
    ns.value = injected[idx].second;
    out.sources.push_back(std::move(ns));
  }
  return out;
}

// Eliminate all voltage sources, one per pass.
inline Netlist eliminate_voltage_sources(Netlist nl) {
  for (;;) {
    const Source* next = nullptr;
    for (const auto& s : nl.sources)
      if (s.kind == SourceKind::Voltage) {
        next = &s;
        break;
      }
    if (!next) return nl;
    nl = eliminate_voltage_source(nl, next->name);
  }
}

// Stamp a dependent source into a copy of Y. The source drives current into
// its output terminals (j,k) = (a,b) in proportion to the control voltage
// v_p - v_q, with transfer admittance by kind: gain for a VCCS, gain times
// the control branch admittance for a CCCS, gain times the series admittance
// for a VCVS, and gain times both for a CCVS. Voltage-output kinds also
// stamp their series admittance between the output terminals.
template <class T>
Matrix<T> stamp_dependent(Matrix<T> y, const Netlist& nl, const Source& src) {
  int j = src.a, k = src.b;
  int p = 0, q = 0;
  CRat amount;
  const Branch* ctrl = nullptr;
  if (src.kind == SourceKind::CCCS || src.kind == SourceKind::CCVS) {
    ctrl = nl.find_branch(src.ctrl_branch);
    if (!ctrl) throw UnknownSource(src.ctrl_branch);
    if (ctrl->kind != BranchKind::Direct) throw NonDirectBranch();
    p = ctrl->head;
    q = ctrl->tail;
  } else {
    p = src.ctrl_p;
    q = src.ctrl_q;
  }
  switch (src.kind) {
    case SourceKind::VCCS:
      amount = src.gain;
      break;
    case SourceKind::CCCS:
      amount = src.gain * ctrl->y;
      break;
    case SourceKind::VCVS:
      if (scalar_traits<CRat>::is_zero(src.series)) throw MissingSeriesAdmittance();
      amount = src.gain * src.series;
      break;
    case SourceKind::CCVS:
      if (scalar_traits<CRat>::is_zero(src.series)) throw MissingSeriesAdmittance();
      amount = src.gain * src.series * ctrl->y;
      break;
    default:
      throw std::invalid_argument("not a dependent source");
  }
  T a = scalar_traits<T>::from_value(amount);
  y(j - 1, p - 1) += a;
  y(k - 1, q - 1) += a;
  y(j - 1, q - 1) -= a;
  y(k - 1, p - 1) -= a;
  if (src.kind == SourceKind::VCVS || src.kind == SourceKind::CCVS) {
    T ys = scalar_traits<T>::from_value(src.series);
    y(j - 1, j - 1) += ys;
    y(k - 1, k - 1) += ys;
    y(j - 1, k - 1) -= ys;
    y(k - 1, j - 1) -= ys;
  }
  return y;
}

// Stamp every dependent source of the netlist.
template <class T>
Matrix<T> stamp_all_dependent(Matrix<T> y, const Netlist& nl) {
  for (const auto& s : nl.sources)
    if (s.kind != SourceKind::Current && s.kind != SourceKind::Voltage)
      y = stamp_dependent(std::move(y), nl, s);
  return y;
}

}  // namespace netkit
