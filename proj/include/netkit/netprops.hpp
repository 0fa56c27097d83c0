#pragma once
// Behavioral properties of solved networks: DC orientability, impedance
// metrics, Rayleigh sensitivity, complex power flow, phase-angle assignment
// and phase-cone checks. Floating-point throughout; exact cross-checks live
// in the test suites.
#include "netkit/kirchhoff.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

namespace netkit {

using Cplx = std::complex<double>;

struct ZeroImmittance : std::invalid_argument {
  ZeroImmittance() : std::invalid_argument("zero immittance has no reciprocal components") {}
};
struct PreconditionViolated : std::runtime_error {
  explicit PreconditionViolated(const std::string& what) : std::runtime_error(what) {}
};
struct PhaseOutsideInterval : std::runtime_error {
  explicit PhaseOutsideInterval(const std::string& what) : std::runtime_error(what) {}
};
struct NoRealRoot : std::runtime_error {
  NoRealRoot() : std::runtime_error("no real root for the receiving-end voltage") {}
};
struct NotInductivelyLoaded : std::runtime_error {
  explicit NotInductivelyLoaded(std::vector<int> offenders_)
      : std::runtime_error("branches are not inductively loaded"), offenders(std::move(offenders_)) {}
  std::vector<int> offenders;  // branch indices
};
struct InconsistentSolution : std::runtime_error {
  explicit InconsistentSolution(const std::string& what) : std::runtime_error(what) {}
};

// Conductance/susceptance and resistance/reactance of one immittance.
struct ImmittanceComponents {
  double G = 0, B = 0, R = 0, X = 0;
};

inline ImmittanceComponents gbrx_from_admittance(Cplx y) {
  if (y == Cplx(0, 0)) throw ZeroImmittance();
  Cplx z = 1.0 / y;
  return {y.real(), y.imag(), z.real(), z.imag()};
}

inline ImmittanceComponents gbrx_from_impedance(Cplx z) {
  if (z == Cplx(0, 0)) throw ZeroImmittance();
  Cplx y = 1.0 / z;
  return {y.real(), y.imag(), z.real(), z.imag()};
}

// Voltage extrema for a DC network driven by a single source from q into p:
// v_p maximal and v_q minimal. Nodes tying the extrema are reported.
struct DcOrientabilityReport {
  bool ok = false;
  std::vector<int> tied_with_max;  // nodes k != p with v_k = v_p
  std::vector<int> tied_with_min;  // nodes k != q with v_k = v_q
};

template <class T>
DcOrientabilityReport check_dc_orientability(const Netlist& nl, const std::vector<T>& v, int p,
                                             int q, double tol = default_tolerance()) {
  for (const auto& b : nl.branches) {
    if (b.kind != BranchKind::Direct) throw NonDirectBranch();
    if (b.y.im != 0 || b.y.re < 0)
      throw PreconditionViolated("branch admittances must be nonnegative and real");
  }
  DcOrientabilityReport rep;
  rep.ok = true;
  for (int k = 1; k <= nl.n(); ++k) {
    double dmax = scalar_traits<T>::magnitude(v[p - 1] - v[k - 1]);
    double dmin = scalar_traits<T>::magnitude(v[k - 1] - v[q - 1]);
    if (v[p - 1] < v[k - 1] && dmax > tol) rep.ok = false;
    if (v[k - 1] < v[q - 1] && dmin > tol) rep.ok = false;
    if (k != p && dmax <= tol) rep.tied_with_max.push_back(k);
    if (k != q && dmin <= tol) rep.tied_with_min.push_back(k);
  }
  return rep;
}

// All-pairs driving-point impedance table.
template <class T>
Matrix<T> impedance_table(const Matrix<T>& y) {
  int n = y.rows();
  Matrix<T> z(n, n);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k)
      if (j != k) z(j - 1, k - 1) = driving_point_impedance(y, j, k);
  return z;
}

// Scan all node triples for violations of the triangle inequality on the
// rotated-impedance distance d_jk = Re(e^{-j theta} Z_jk).
inline std::vector<std::array<int, 3>> check_metric(const Matrix<Cplx>& z, double theta,
                                                    double tol = default_tolerance()) {
  int n = z.rows();
  Cplx rot = std::polar(1.0, -theta);
  auto d = [&](int a, int b) { return (rot * z(a - 1, b - 1)).real(); };
  std::vector<std::array<int, 3>> out;
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      for (int r = 1; r <= n; ++r) {
        if (p == q || q == r || p == r) continue;
        if (d(p, q) + d(q, r) < d(p, r) - tol) out.push_back({p, q, r});
      }
  return out;
}

// Exact variant: d_jk = Re(rot * Z_jk) with rot a caller-chosen complex scale
// standing in for e^{-j theta} up to a positive factor (e.g. 1, 1-j, -j).
template <class T>
std::vector<std::array<int, 3>> check_metric_rotated(const Matrix<T>& z, const T& rot) {
  int n = z.rows();
  std::vector<std::array<int, 3>> out;
  auto re = [&](int a, int b) {
    T w = rot * z(a - 1, b - 1);
    return (w + scalar_traits<T>::conj(w));  // twice the real part, order-preserving
  };
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      for (int r = 1; r <= n; ++r) {
        if (p == q || q == r || p == r) continue;
        T defect = re(p, q) + re(q, r) - re(p, r);
        // defect is real by construction; compare its real part to zero
        if (defect.re < 0) out.push_back({p, q, r});
      }
  return out;
}

// Sensitivity of the driving-point impedance Z_jk to the admittance of a
// branch between nodes p and q.
template <class T>
T rayleigh_sensitivity(const Matrix<T>& y, int j, int k, int p, int q) {
  T t = transfer_impedance(y, p, q, j, k);
  return -(t * t);
}

// Complex power s = p + jq at each end of one branch, with the phase-lag
// coefficient mu. Flows are measured in the direction of the branch: s_head
// leaves the head node, s_tail arrives at the tail node.
struct BranchPowerFlow {
  Cplx s_head{};  // v_head * conj(i)
  Cplx s_tail{};  // v_tail * conj(i)
  double mu = 0;  // x*p - r*q, the same at either end
  bool has_mu = false;  // false for zero-admittance branches
};

inline std::vector<BranchPowerFlow> branch_power(const Netlist& nl, const std::vector<Cplx>& v) {
  std::vector<BranchPowerFlow> out;
  for (const auto& b : nl.branches) {
    if (b.kind != BranchKind::Direct) throw NonDirectBranch();
    Cplx y = scalar_traits<CRat>::to_c(scalar_traits<CRat>::from_value(b.y));
    Cplx i = y * (v[b.head - 1] - v[b.tail - 1]);
    BranchPowerFlow f;
    f.s_head = v[b.head - 1] * std::conj(i);
    f.s_tail = v[b.tail - 1] * std::conj(i);
    if (y != Cplx(0, 0)) {
      Cplx z = 1.0 / y;
      f.mu = z.imag() * f.s_head.real() - z.real() * f.s_head.imag();
      f.has_mu = true;
    }
    out.push_back(f);
  }
  return out;
}

// Largest node-level residual of the power form of Kirchhoff's current law:
// at each node with nonzero voltage, branch power flows measured at that node
// balance the power injected by sources there.
inline double node_power_residual(const Netlist& nl, const std::vector<Cplx>& v,
                                  double tol = default_tolerance()) {
  auto flows = branch_power(nl, v);
  int n = nl.n();
  std::vector<Cplx> net(n, Cplx(0, 0));
  for (size_t a = 0; a < nl.branches.size(); ++a) {
    net[nl.branches[a].head - 1] += flows[a].s_head;
    net[nl.branches[a].tail - 1] -= flows[a].s_tail;
  }
  auto inj = injection_vector<CRat>(nl);
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    if (std::abs(v[k]) <= tol) continue;
    Cplx expected = v[k] * std::conj(scalar_traits<CRat>::to_c(inj[k]));
    worst = std::max(worst, std::abs(net[k] - expected));
  }
  return worst;
}

namespace detail {
inline double wrap_angle(double a) {
  while (a > M_PI) a -= 2 * M_PI;
  while (a <= -M_PI) a += 2 * M_PI;
  return a;
}
inline bool phase_in_interval(double a, double lo, double hi, double tol) {
  // compare against the interval modulo 2*pi
  for (int shift = -1; shift <= 1; ++shift) {
    double b = a + 2 * M_PI * shift;
    if (b >= lo - tol && b <= hi + tol) return true;
  }
  return false;
}
}  // namespace detail

// Verify all branch admittance phases lie in [lo, hi] (width <= pi), then
// check that every driving-point impedance phase lies in [-hi, -lo].
inline bool check_cone(const Matrix<Cplx>& y, const std::vector<Cplx>& branch_y, double lo,
                       double hi, double tol = default_tolerance()) {
  if (hi - lo > M_PI + tol) throw std::invalid_argument("interval wider than pi");
  for (Cplx ba : branch_y) {
    if (ba == Cplx(0, 0)) continue;
    if (!detail::phase_in_interval(std::arg(ba), lo, hi, tol))
      throw PhaseOutsideInterval("branch admittance phase outside the stated interval");
  }
  int n = y.rows();
  for (int j = 1; j <= n; ++j)
    for (int k = j + 1; k <= n; ++k) {
      Cplx z = driving_point_impedance(y, j, k);
      if (std::abs(z) <= tol) continue;
      if (!detail::phase_in_interval(std::arg(z), -hi, -lo, tol)) return false;
    }
  return true;
}

// Receiving-end voltage magnitude when the sending-end flow s_j out of node j
// is known (series impedance r + jx, |v_j| > 0).
inline double propagate_from_sending(double vj, Cplx s_j, double r, double x) {
  if (vj <= 0) throw PreconditionViolated("sending-end voltage must be positive");
  double i2 = std::norm(s_j) / (vj * vj);
  double pk = s_j.real() - r * i2;
  double qk = s_j.imag() - x * i2;
  if (i2 == 0) return vj;
  return std::sqrt((pk * pk + qk * qk) / i2);
}

// Candidate receiving-end voltage magnitudes when the flow s_k into node k is
// known; the quadratic may have zero, one or two nonnegative roots.
inline std::vector<double> propagate_from_receiving(double vj, Cplx s_k, double r, double x) {
  if (vj <= 0) throw PreconditionViolated("sending-end voltage must be positive");
  double pk = s_k.real(), qk = s_k.imag();
  double b = vj * vj - 2 * (r * pk + x * qk);
  double c = (r * r + x * x) * (pk * pk + qk * qk);
  double disc = b * b - 4 * c;
  if (disc < 0) throw NoRealRoot();
  double sq = std::sqrt(disc);
  std::vector<double> roots;
  for (double u : {(b + sq) / 2, (b - sq) / 2}) {
    if (u < 0) continue;
    double vk = std::sqrt(u);
    bool dup = false;
    for (double seen : roots) dup = dup || std::abs(seen - vk) <= 1e-12 * (1 + vk);
    if (!dup) roots.push_back(vk);
  }
  return roots;
}

// Unwrapped voltage phase angles for an inductive flow grounded at g.
struct PhaseAssignment {
  std::vector<double> delta;     // per node; NaN at zero-voltage nodes
  std::vector<int> zero_nodes;   // excluded nodes
  int max_node = 0;              // node attaining the maximal angle
  bool max_at_source = false;    // maximal angle occurs at a source terminal
  double cycle_residual = 0;     // worst branch-consistency defect in radians
  bool signs_match_power = true; // sign(delta_j - delta_k) = sign(p) per branch
};

inline PhaseAssignment assign_phase_angles(const Netlist& nl, const std::vector<Cplx>& v, int g,
                                           double tol = default_tolerance()) {
  int n = nl.n();
  auto flows = branch_power(nl, v);
  // every branch must be inductively loaded: mu*p >= 0 at both ends
  std::vector<int> offenders;
  for (size_t a = 0; a < nl.branches.size(); ++a) {
    const auto& f = flows[a];
    if (!f.has_mu) continue;
    if (f.mu * f.s_head.real() < -tol || f.mu * f.s_tail.real() < -tol)
      offenders.push_back(static_cast<int>(a));
  }
  if (!offenders.empty()) throw NotInductivelyLoaded(offenders);

  PhaseAssignment out;
  out.delta.assign(n, std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < n; ++k)
    if (std::abs(v[k]) <= tol) out.zero_nodes.push_back(k + 1);
  auto live = [&](int node) { return std::abs(v[node - 1]) > tol; };

  // spanning traversal over live nodes; per-branch lag from mu when the
  // quarter-turn condition holds, else from the principal argument
  auto branch_lag = [&](size_t a) {  // delta(head) - delta(tail)
    const auto& b = nl.branches[a];
    const auto& f = flows[a];
    double vj = std::abs(v[b.head - 1]), vk = std::abs(v[b.tail - 1]);
    Cplx y = scalar_traits<CRat>::to_c(scalar_traits<CRat>::from_value(b.y));
    if (f.has_mu) {
      Cplx z = 1.0 / y;
      bool u_head = z.real() * f.s_head.real() + z.imag() * f.s_head.imag() <= vj * vj + tol;
      bool u_tail = -z.real() * f.s_tail.real() - z.imag() * f.s_tail.imag() <= vk * vk + tol;
      if (u_head || u_tail) {
        double s = f.mu / (vj * vk);
        s = std::max(-1.0, std::min(1.0, s));
        return std::asin(s);
      }
    }
    return std::arg(v[b.head - 1] * std::conj(v[b.tail - 1]));
  };

  int start = 0;
  for (int k = 1; k <= n; ++k)
    if (live(k)) {
      start = k;
      break;
    }
  if (start) {
    out.delta[start - 1] = std::arg(v[start - 1]);
    std::vector<int> queue{start};
    while (!queue.empty()) {
      int node = queue.back();
      queue.pop_back();
      for (size_t a = 0; a < nl.branches.size(); ++a) {
        const auto& b = nl.branches[a];
        int other = b.head == node ? b.tail : (b.tail == node ? b.head : 0);
        if (!other || !live(other)) continue;
        double lag = branch_lag(a);
        double cand = b.head == node ? out.delta[node - 1] - lag : out.delta[node - 1] + lag;
        if (std::isnan(out.delta[other - 1])) {
          out.delta[other - 1] = cand;
          queue.push_back(other);
        } else {
          out.cycle_residual = std::max(out.cycle_residual, std::abs(out.delta[other - 1] - cand));
        }
      }
    }
  }
  // congruence with the principal phases
  for (int k = 1; k <= n; ++k) {
    if (!live(k) || std::isnan(out.delta[k - 1])) continue;
    double defect = std::abs(detail::wrap_angle(out.delta[k - 1] - std::arg(v[k - 1])));
    if (defect > 1e-6)
      throw InconsistentSolution("assigned phase angle not congruent to the solved phase");
  }
  // maximal angle and its location
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k)
    if (live(k) && out.delta[k - 1] > best) {
      best = out.delta[k - 1];
      out.max_node = k;
    }
  for (const auto& s : nl.sources) {
    int terminal = s.a == g ? s.b : (s.b == g ? s.a : 0);
    if (!terminal) continue;
    if (terminal == out.max_node ||
        (live(terminal) && std::abs(out.delta[terminal - 1] - best) <= tol))
      out.max_at_source = true;
  }
  // branchwise sign agreement between angle drop and active power flow
  for (size_t a = 0; a < nl.branches.size(); ++a) {
    const auto& b = nl.branches[a];
    if (!live(b.head) || !live(b.tail)) continue;
    double dd = out.delta[b.head - 1] - out.delta[b.tail - 1];
    double p = flows[a].s_head.real();
    if ((dd > tol && p < -tol) || (dd < -tol && p > tol) ||
        (std::abs(dd) <= tol && std::abs(p) > tol))
      out.signs_match_power = false;
  }
  return out;
}

// Whether, for every node pair, a unit zero-phase source yields branch
// currents whose phases (after reorientation) all fit in [-phi1, phi2).
inline bool check_dendromorphic(const Netlist& nl, double phi1, double phi2,
                                double tol = default_tolerance()) {
  int n = nl.n();
  if (n > 12) throw TooLarge("dendromorphic check limited to 12 nodes");
  auto ym = build<Cplx>(nl);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      if (j == k) continue;
      std::vector<Cplx> inj(n, Cplx(0, 0));
      inj[j - 1] += 1.0;
      inj[k - 1] -= 1.0;
      auto v = solve_grounded(ym.Y, inj, k);
      for (const auto& b : nl.branches) {
        Cplx y = scalar_traits<CRat>::to_c(scalar_traits<CRat>::from_value(b.y));
        Cplx i = y * (v[b.head - 1] - v[b.tail - 1]);
        if (std::abs(i) <= tol) continue;
        bool fwd = detail::phase_in_interval(std::arg(i), -phi1, phi2, tol);
        bool rev = detail::phase_in_interval(std::arg(-i), -phi1, phi2, tol);
        if (!fwd && !rev) return false;
      }
    }
  return true;
}

}  // namespace netkit
