// Command-line surface over the netkit headers with human and JSON output.
//
// Exit codes: 0 success / all checks pass, 1 usage or input error,
// 2 semantic check failure (violations listed in the output).
#include "netkit/laplace.hpp"
#include "netkit/modify.hpp"
#include "netkit/netprops.hpp"
#include "netkit/sources.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace netkit;

namespace {

struct Ctx {
  std::string file;
  std::string scalar = "float64";
  std::string format = "human";
  std::string omega_override, sigma_override;
  double tol = default_tolerance();
  Netlist raw;  // as parsed, elements possibly in (g,c,r,l) form
  Netlist nl;   // evaluated at the netlist's frequency, direct branches only
  json out;
  std::vector<std::string> human;

  bool exact() const { return scalar == "exact"; }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json jnum(const CRat& v) {
  return json{{"re", rat_to_string(v.re)}, {"im", rat_to_string(v.im)}};
}
json jnum(const Cplx& v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

template <class T>
json jmatrix(const Matrix<T>& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(jnum(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// exact complex over a common denominator, e.g. "500/54020 + 5251/54020 j"
std::string cplx_common_den(const CRat& v) {
  if (v.im == 0) return rat_to_string(v.re);
  BigInt d1 = denominator(v.re), d2 = denominator(v.im);
  BigInt l = d1 / boost::multiprecision::gcd(d1, d2) * d2;
  BigInt n1 = numerator(v.re) * (l / d1), n2 = numerator(v.im) * (l / d2);
  bool neg = n2 < 0;
  if (neg) n2 = -n2;
  auto term = [&](const BigInt& n) {
    return l == 1 ? n.str() : n.str() + "/" + l.str();
  };
  return term(n1) + (neg ? " - " : " + ") + term(n2) + " j";
}

std::string cplx_human(const Cplx& v) {
  std::ostringstream s;
  s.precision(12);
  s << v.real() << (v.imag() < 0 ? " - " : " + ") << std::fabs(v.imag()) << " j";
  return s.str();
}

void load(Ctx& c) {
  std::ifstream in(c.file);
  if (!in) throw UsageError("cannot open '" + c.file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  c.raw = parse(buf.str());
  if (!c.omega_override.empty()) c.raw.omega = rat_from_string(c.omega_override);
  if (!c.sigma_override.empty()) c.raw.sigma = rat_from_string(c.sigma_override);
}

// evaluate (g,c,r,l) elements at the netlist's frequency when present
void evaluate(Ctx& c) {
  bool gcrl = false;
  for (const auto& b : c.raw.branches)
    if (b.kind != BranchKind::Direct) gcrl = true;
  c.nl = gcrl ? eval_elements(c.raw, netlist_s(c.raw)) : c.raw;
}

int node_of(const Netlist& nl, const std::string& name) {
  int idx = nl.node_index(name);
  if (idx) return idx;
  try {
    size_t pos = 0;
    int k = std::stoi(name, &pos);
    if (pos == name.size() && k >= 1 && k <= nl.n()) return k;
  } catch (const std::exception&) {
  }
  throw UsageError("unknown node '" + name + "'");
}

bool has_dependent(const Netlist& nl) {
  for (const auto& s : nl.sources)
    if (s.kind != SourceKind::Current && s.kind != SourceKind::Voltage) return true;
  return false;
}

bool has_voltage_source(const Netlist& nl) {
  for (const auto& s : nl.sources)
    if (s.kind == SourceKind::Voltage) return true;
  return false;
}

// netlist ready for nodal solution: voltage sources eliminated
Netlist solvable(const Netlist& nl) {
  return has_voltage_source(nl) ? eliminate_voltage_sources(nl) : nl;
}

template <class T>
Matrix<T> system_matrix(const Netlist& nl) {
  return stamp_all_dependent(build<T>(nl).Y, nl);
}

void add_violation(Ctx& c, const std::string& check, const json& detail) {
  json v = detail;
  v["check"] = check;
  c.out["violations"].push_back(std::move(v));
}

// ---------------------------------------------------------------- commands

void cmd_parse(Ctx& c) {
  json nodes = json::array();
  for (const auto& name : c.raw.nodes) nodes.push_back(name);
  json branches = json::array();
  for (const auto& b : c.raw.branches) {
    json e{{"name", b.name},
           {"head", c.raw.nodes[b.head - 1]},
           {"tail", c.raw.nodes[b.tail - 1]},
           {"kind", b.kind == BranchKind::Direct ? "direct" : "gcrl"}};
    branches.push_back(std::move(e));
  }
  json sources = json::array();
  for (const auto& s : c.raw.sources) sources.push_back(s.name);
  c.out["results"] = {{"nodes", nodes},
                      {"branches", branches},
                      {"sources", sources},
                      {"node_count", c.raw.n()},
                      {"branch_count", c.raw.branches.size()},
                      {"source_count", c.raw.sources.size()}};
  std::ostringstream h;
  h << "parsed " << c.file << ": " << c.raw.n() << " nodes, " << c.raw.branches.size()
    << " branches, " << c.raw.sources.size() << " sources";
  c.human.push_back(h.str());
}

void cmd_ymatrix(Ctx& c) {
  if (c.exact()) {
    auto y = system_matrix<CRat>(c.nl);
    c.out["results"]["ymatrix"] = jmatrix(y);
    for (int r = 0; r < y.rows(); ++r) {
      std::string line;
      for (int col = 0; col < y.cols(); ++col)
        line += (col ? "  " : "") + cplx_to_string(y(r, col));
      c.human.push_back(line);
    }
  } else {
    auto y = system_matrix<Cplx>(c.nl);
    c.out["results"]["ymatrix"] = jmatrix(y);
    for (int r = 0; r < y.rows(); ++r) {
      std::string line;
      for (int col = 0; col < y.cols(); ++col)
        line += (col ? "  " : "") + cplx_human(y(r, col));
      c.human.push_back(line);
    }
  }
}

void cmd_solve(Ctx& c, const std::string& ground) {
  Netlist net = solvable(c.nl);
  int g = node_of(net, ground.empty() ? net.nodes.front() : ground);
  c.out["inputs"]["ground"] = net.nodes[g - 1];
  json volts = json::object();
  if (c.exact()) {
    auto v = solve_grounded(system_matrix<CRat>(net), injection_vector<CRat>(net), g, 0.0);
    for (int k = 0; k < net.n(); ++k) {
      volts[net.nodes[k]] = jnum(v[k]);
      c.human.push_back("v(" + net.nodes[k] + ") = " + cplx_common_den(v[k]));
    }
  } else {
    auto v = solve_grounded(system_matrix<Cplx>(net), injection_vector<Cplx>(net), g, c.tol);
    for (int k = 0; k < net.n(); ++k) {
      volts[net.nodes[k]] = jnum(v[k]);
      c.human.push_back("v(" + net.nodes[k] + ") = " + cplx_human(v[k]));
    }
  }
  c.out["results"]["voltages"] = std::move(volts);
}

void cmd_transfer(Ctx& c, const std::string& ps, const std::string& qs, const std::string& js,
                  const std::string& ks, bool driving_point) {
  int p = node_of(c.nl, ps), q = node_of(c.nl, qs);
  int j = driving_point ? p : node_of(c.nl, js);
  int k = driving_point ? q : node_of(c.nl, ks);
  const char* key = driving_point ? "impedance" : "transfer_impedance";
  if (c.exact()) {
    CRat z = transfer_impedance(system_matrix<CRat>(c.nl), p, q, j, k);
    c.out["results"][key] = jnum(z);
    c.human.push_back(cplx_common_den(z));
  } else {
    Cplx z = transfer_impedance(system_matrix<Cplx>(c.nl), p, q, j, k);
    c.out["results"][key] = jnum(z);
    c.human.push_back(cplx_human(z));
  }
}

void cmd_kirchhoff(Ctx& c, bool list_trees) {
  if (c.exact()) {
    auto wg = weighted_graph<CRat>(c.nl);
    CRat k = kappa(wg.g, wg.w);
    c.out["results"]["kappa"] = jnum(k);
    c.human.push_back("kappa = " + cplx_common_den(k));
  } else {
    auto wg = weighted_graph<Cplx>(c.nl);
    Cplx k = kappa(wg.g, wg.w);
    c.out["results"]["kappa"] = jnum(k);
    c.human.push_back("kappa = " + cplx_human(k));
  }
  if (list_trees) {
    auto trees = spanning_trees(graph_of(c.nl));
    std::vector<std::vector<std::string>> named;
    for (const auto& t : trees) {
      std::vector<std::string> names;
      for (int e : t) names.push_back(c.nl.branches[e].name);
      std::sort(names.begin(), names.end());
      named.push_back(std::move(names));
    }
    std::sort(named.begin(), named.end());
    c.out["results"]["tree_count"] = named.size();
    c.out["results"]["trees"] = named;
    c.human.push_back("trees: " + std::to_string(named.size()));
    for (const auto& t : named) {
      std::string line = "  ";
      for (size_t i = 0; i < t.size(); ++i) line += (i ? " " : "") + t[i];
      c.human.push_back(line);
    }
  }
}

void check_foster(Ctx& c) {
  if (c.exact()) {
    CRat res = foster_residual(c.nl, system_matrix<CRat>(c.nl));
    c.out["residuals"]["foster"] = jnum(res);
    bool ok = scalar_traits<CRat>::is_zero(res);
    if (!ok) add_violation(c, "foster", {{"residual", jnum(res)}});
    c.human.push_back("foster: residual " + cplx_to_string(res) + ", expected n-1=" +
                      std::to_string(c.nl.n() - 1) + (ok ? " (ok)" : " (violated)"));
  } else {
    Cplx res = foster_residual(c.nl, system_matrix<Cplx>(c.nl));
    c.out["residuals"]["foster"] = jnum(res);
    bool ok = std::abs(res) <= c.tol;
    if (!ok) add_violation(c, "foster", {{"residual", jnum(res)}});
    std::ostringstream h;
    h.precision(3);
    h << std::scientific << "foster: residual " << std::abs(res) << ", expected n-1="
      << c.nl.n() - 1 << (ok ? " (ok)" : " (violated)");
    c.human.push_back(h.str());
  }
}

template <class T>
double jacobi_worst(const Matrix<T>& y) {
  int n = y.rows();
  double worst = 0.0;
  for (int p = 1; p <= n; ++p)
    for (int q = 1; q <= n; ++q)
      for (int r = 1; r <= n; ++r)
        for (int s = 1; s <= n; ++s)
          worst = std::max(worst,
                           scalar_traits<T>::magnitude(sylvester_residual(y, p, q, r, s, {}, {})));
  return worst;
}

void check_jacobi(Ctx& c) {
  double worst = c.exact() ? jacobi_worst(system_matrix<CRat>(c.nl))
                           : jacobi_worst(system_matrix<Cplx>(c.nl));
  c.out["residuals"]["jacobi"] = worst;
  bool ok = c.exact() ? worst == 0.0 : worst <= c.tol;
  if (!ok) add_violation(c, "jacobi", {{"residual", worst}});
  std::ostringstream h;
  h.precision(3);
  h << std::scientific << "jacobi: worst residual " << worst << (ok ? " (ok)" : " (violated)");
  c.human.push_back(h.str());
}

void check_tellegen_cmd(Ctx& c, const std::string& ground) {
  Netlist net = solvable(c.nl);
  int g = node_of(net, ground.empty() ? net.nodes.front() : ground);
  auto y = system_matrix<Cplx>(net);
  auto v = solve_grounded(y, injection_vector<Cplx>(net), g, c.tol);
  auto rep = check_tellegen(net, y, v);
  c.out["residuals"]["tellegen_sum_vi"] = jnum(rep.sum_vi);
  c.out["residuals"]["tellegen_power_gap"] = jnum(rep.p_tot - rep.p_tot_quadratic);
  double scale = 1.0 + std::abs(rep.p_tot);
  bool ok = std::abs(rep.sum_vi) <= c.tol * scale &&
            std::abs(rep.p_tot - rep.p_tot_quadratic) <= c.tol * scale;
  if (!ok)
    add_violation(c, "tellegen",
                  {{"sum_vi", jnum(rep.sum_vi)},
                   {"power_gap", jnum(rep.p_tot - rep.p_tot_quadratic)}});
  std::ostringstream h;
  h.precision(3);
  h << std::scientific << "tellegen: sum v*i " << std::abs(rep.sum_vi) << ", power gap "
    << std::abs(rep.p_tot - rep.p_tot_quadratic) << (ok ? " (ok)" : " (violated)");
  c.human.push_back(h.str());
}

void check_metric_cmd(Ctx& c, const std::vector<double>& thetas) {
  json scans = json::array();
  for (double theta : thetas) {
    std::vector<std::array<int, 3>> triples;
    // exact rotations for the angles that have complex-rational direction
    auto near = [&](double v) { return std::fabs(theta - v) < 1e-12; };
    if (c.exact() && (near(0) || near(M_PI / 4) || near(M_PI / 2) || near(-M_PI / 4) ||
                      near(-M_PI / 2))) {
      CRat rot = near(0)            ? CRat(1)
                 : near(M_PI / 4)   ? CRat(Rat(1), Rat(-1))
                 : near(M_PI / 2)   ? CRat(Rat(0), Rat(-1))
                 : near(-M_PI / 4)  ? CRat(Rat(1), Rat(1))
                                    : CRat(Rat(0), Rat(1));
      triples = check_metric_rotated(impedance_table(system_matrix<CRat>(c.nl)), rot);
    } else {
      triples = check_metric(impedance_table(system_matrix<Cplx>(c.nl)), theta, c.tol);
    }
    json jt = json::array();
    for (const auto& t : triples) {
      jt.push_back(json::array({t[0], t[1], t[2]}));
      add_violation(c, "metric", {{"theta", theta}, {"triple", {t[0], t[1], t[2]}}});
    }
    scans.push_back({{"theta", theta}, {"violations", jt}});
    std::ostringstream h;
    h << "metric theta=" << theta << ": " << triples.size() << " violating triples";
    c.human.push_back(h.str());
  }
  c.out["results"]["metric"] = std::move(scans);
}

void check_structure_cmd(Ctx& c) {
  StructureReport rep = c.exact() ? check_structure(system_matrix<CRat>(c.nl), 0.0)
                                  : check_structure(system_matrix<Cplx>(c.nl), c.tol);
  c.out["results"]["structure"] = {{"symmetric", rep.symmetric},
                                   {"zero_row_sums", rep.zero_row_sums},
                                   {"zero_col_sums", rep.zero_col_sums},
                                   {"diag_dominant", rep.diag_dominant},
                                   {"rank", rep.rank}};
  if (!rep.zero_row_sums) add_violation(c, "structure", {{"property", "zero_row_sums"}});
  if (!rep.zero_col_sums) add_violation(c, "structure", {{"property", "zero_col_sums"}});
  if (!rep.symmetric && !has_dependent(c.nl))
    add_violation(c, "structure", {{"property", "symmetric"}});
  if (rep.rank != c.nl.n() - 1)
    add_violation(c, "structure", {{"property", "rank"}, {"rank", rep.rank}});
  std::ostringstream h;
  h << "structure: symmetric=" << rep.symmetric << " zero_row_sums=" << rep.zero_row_sums
    << " zero_col_sums=" << rep.zero_col_sums << " rank=" << rep.rank << "/" << c.nl.n() - 1;
  c.human.push_back(h.str());
}

void cmd_sensitivity(Ctx& c, const std::string& js, const std::string& ks,
                     const std::string& branch) {
  int j = node_of(c.nl, js), k = node_of(c.nl, ks);
  const Branch* b = c.nl.find_branch(branch);
  if (!b) throw UsageError("unknown branch '" + branch + "'");
  if (c.exact()) {
    CRat s = rayleigh_sensitivity(system_matrix<CRat>(c.nl), j, k, b->head, b->tail);
    c.out["results"]["sensitivity"] = jnum(s);
    c.human.push_back("dZ/dy(" + branch + ") = " + cplx_common_den(s));
  } else {
    Cplx s = rayleigh_sensitivity(system_matrix<Cplx>(c.nl), j, k, b->head, b->tail);
    c.out["results"]["sensitivity"] = jnum(s);
    c.human.push_back("dZ/dy(" + branch + ") = " + cplx_human(s));
  }
}

void cmd_modify(Ctx& c, const std::vector<std::string>& contract_jk,
                const std::string& delete_name, const std::vector<std::string>& augment_jky) {
  int chosen = !contract_jk.empty() + !delete_name.empty() + !augment_jky.empty();
  if (chosen != 1) throw UsageError("choose exactly one of --contract/--delete/--augment");
  auto y = build<CRat>(c.nl).Y;
  Matrix<CRat> modified(0, 0);
  if (!contract_jk.empty()) {
    int j = node_of(c.nl, contract_jk[0]), k = node_of(c.nl, contract_jk[1]);
    modified = contract(y, j, k);
  } else if (!delete_name.empty()) {
    const Branch* b = c.nl.find_branch(delete_name);
    if (!b) throw UsageError("unknown branch '" + delete_name + "'");
    modified = augment(y, b->head, b->tail, -b->y);
    Netlist stripped = c.nl;
    stripped.branches.erase(
        std::remove_if(stripped.branches.begin(), stripped.branches.end(),
                       [&](const Branch& br) { return br.name == delete_name; }),
        stripped.branches.end());
    c.out["results"]["netlist"] = serialize(stripped);
  } else {
    int j = node_of(c.nl, augment_jky[0]), k = node_of(c.nl, augment_jky[1]);
    modified = augment(y, j, k, cplx_from_string(augment_jky[2]));
  }
  CRat kap = common_cofactor(modified);
  c.out["results"]["ymatrix"] = jmatrix(modified);
  c.out["results"]["kappa"] = jnum(kap);
  c.human.push_back("kappa = " + cplx_common_den(kap));
  for (int r = 0; r < modified.rows(); ++r) {
    std::string line;
    for (int col = 0; col < modified.cols(); ++col)
      line += (col ? "  " : "") + cplx_to_string(modified(r, col));
    c.human.push_back(line);
  }
}

void cmd_reduce(Ctx& c, const std::string& ps, const std::string& qs) {
  int p = node_of(c.nl, ps), q = node_of(c.nl, qs);
  auto dec = find_one_port(c.nl, p, q);
  if (!dec) {
    add_violation(c, "reduce", {{"reason", "no nontrivial one-port decomposition"}});
    c.human.push_back("no nontrivial one-port decomposition at (" + ps + "," + qs + ")");
    return;
  }
  auto eq = one_port_equivalent<CRat>(c.nl, *dec);
  auto side_names = [&](const std::vector<int>& side) {
    json names = json::array();
    for (int k : side) names.push_back(c.nl.nodes[k - 1]);
    return names;
  };
  c.out["results"]["side_a"] = side_names(dec->a);
  c.out["results"]["side_b"] = side_names(dec->b);
  c.out["results"]["norton"] = {{"current", jnum(eq.subnetwork_I)},
                                {"admittance", jnum(eq.subnetwork_y)},
                                {"degenerate", eq.degenerate}};
  if (!scalar_traits<CRat>::is_zero(eq.subnetwork_y))
    c.out["results"]["thevenin_voltage"] = jnum(eq.subnetwork_I / eq.subnetwork_y);
  Netlist reduced = replace_one_port(c.nl, *dec);
  c.out["results"]["netlist"] = serialize(reduced);
  c.human.push_back("replaced side: " + std::to_string(dec->b.size()) + " nodes");
  c.human.push_back("norton current = " + cplx_common_den(eq.subnetwork_I));
  c.human.push_back("norton admittance = " + cplx_common_den(eq.subnetwork_y));
}

json jroot(const RootGroup& r) {
  return json{{"re", r.value.real()},
              {"im", r.value.imag()},
              {"multiplicity", r.multiplicity},
              {"simple", r.simple},
              {"residue", jnum(r.residue)}};
}

void cmd_prcheck(Ctx& c, const std::string& js, const std::string& ks) {
  for (const auto& b : c.raw.branches)
    if (b.kind != BranchKind::GCRL)
      throw UsageError("prcheck needs (g,c,r,l) branch elements throughout");
  int j = node_of(c.raw, js), k = node_of(c.raw, ks);
  auto z = network_impedance_s(c.raw, j, k);
  json num = json::array(), den = json::array();
  for (const auto& coeff : z.num.c) num.push_back(rat_to_string(coeff));
  for (const auto& coeff : z.den.c) den.push_back(rat_to_string(coeff));
  c.out["results"]["impedance_num"] = num;
  c.out["results"]["impedance_den"] = den;

  auto zd = to_double_rf(z);
  auto pr = is_positive_real(zd);
  c.out["results"]["positive_real"] = pr.ok;
  if (!pr.ok) {
    c.out["results"]["reason"] = pr.reason;
    json v{{"reason", pr.reason}};
    if (pr.has_witness) v["witness"] = {{"re", pr.witness.real()}, {"im", pr.witness.imag()}};
    add_violation(c, "positive_real", v);
  }
  auto pz = poles_zeros(zd);
  json poles = json::array(), zeros = json::array();
  for (const auto& r : pz.poles) poles.push_back(jroot(r));
  for (const auto& r : pz.zeros) zeros.push_back(jroot(r));
  c.out["results"]["poles"] = poles;
  c.out["results"]["zeros"] = zeros;
  c.out["results"]["degree_at_infinity"] = pz.degree_at_infinity;

  auto spr = is_strictly_positive_real(c.raw, j, k);
  c.out["results"]["strictly_positive_real"] = spr.ok;
  c.out["diagnostics"].push_back("strict test: " + spr.reason);
  try {
    auto rx = is_reactance_function(zd);
    c.out["results"]["reactance"] = rx.ok;
    if (rx.ok) {
      c.out["results"]["reactance_poles"] = rx.pole_omegas;
      c.out["results"]["reactance_zeros"] = rx.zero_omegas;
    } else {
      c.out["diagnostics"].push_back("reactance test: " + rx.reason);
    }
  } catch (const NotPositiveReal&) {
    c.out["results"]["reactance"] = false;
  }
  c.human.push_back(std::string("positive real: ") + (pr.ok ? "yes" : ("no (" + pr.reason + ")")));
  c.human.push_back(std::string("strictly positive real: ") + (spr.ok ? "yes" : "no"));
}

void cmd_phase(Ctx& c, const std::string& ground) {
  Netlist net = solvable(c.nl);
  int g = node_of(net, ground.empty() ? net.nodes.front() : ground);
  c.out["inputs"]["ground"] = net.nodes[g - 1];
  auto y = system_matrix<Cplx>(net);
  auto v = solve_grounded(y, injection_vector<Cplx>(net), g, c.tol);
  PhaseAssignment pa;
  try {
    pa = assign_phase_angles(net, v, g, c.tol);
  } catch (const NotInductivelyLoaded& e) {
    add_violation(c, "phase", {{"reason", e.what()}});
    c.human.push_back(std::string("phase assignment failed: ") + e.what());
    return;
  } catch (const PhaseOutsideInterval& e) {
    add_violation(c, "phase", {{"reason", e.what()}});
    c.human.push_back(std::string("phase assignment failed: ") + e.what());
    return;
  }
  json delta = json::object();
  for (int k = 0; k < net.n(); ++k) {
    if (std::isnan(pa.delta[k]))
      delta[net.nodes[k]] = nullptr;
    else
      delta[net.nodes[k]] = pa.delta[k];
  }
  c.out["results"]["delta"] = std::move(delta);
  c.out["results"]["max_node"] = net.nodes[pa.max_node - 1];
  c.out["results"]["max_at_source"] = pa.max_at_source;
  c.out["results"]["signs_match_power"] = pa.signs_match_power;
  c.out["residuals"]["cycle"] = pa.cycle_residual;
  if (!pa.signs_match_power) add_violation(c, "phase", {{"reason", "sign mismatch"}});
  if (pa.cycle_residual > c.tol)
    add_violation(c, "phase", {{"reason", "cycle residual"}, {"residual", pa.cycle_residual}});
  for (int k = 0; k < net.n(); ++k) {
    std::ostringstream h;
    h << "delta(" << net.nodes[k] << ") = " << pa.delta[k];
    c.human.push_back(h.str());
  }
}

int finish(Ctx& c) {
  int code = c.out["violations"].empty() ? 0 : 2;
  if (c.format == "json") {
    std::cout << c.out.dump(2) << "\n";
  } else {
    for (const auto& line : c.human) std::cout << line << "\n";
    if (code == 2) std::cout << "checks failed: " << c.out["violations"].size() << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linear network analysis toolkit"};
  app.require_subcommand(1);

  Ctx c;
  c.out["results"] = json::object();
  c.out["residuals"] = json::object();
  c.out["violations"] = json::array();
  c.out["diagnostics"] = json::array();

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("file", c.file, "netlist file")->required();
    cmd->add_option("--scalar", c.scalar, "arithmetic mode")
        ->check(CLI::IsMember({"float64", "exact"}));
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"human", "json"}));
    cmd->add_option("--omega", c.omega_override, "override AC frequency");
    cmd->add_option("--sigma", c.sigma_override, "override real frequency part");
    cmd->add_option("--tolerance", c.tol, "float comparison tolerance");
  };

  auto* p_parse = app.add_subcommand("parse", "validate and summarize a netlist");
  add_common(p_parse);

  auto* p_ym = app.add_subcommand("ymatrix", "print the admittance matrix");
  add_common(p_ym);

  std::string ground;
  auto* p_solve = app.add_subcommand("solve", "grounded node-voltage solution");
  p_solve->add_option("--ground", ground, "reference node (default: first node)");
  add_common(p_solve);

  std::string n_p, n_q, n_j, n_k;
  auto* p_imp = app.add_subcommand("impedance", "driving-point impedance Z_jk");
  p_imp->add_option("j", n_j, "first node")->required();
  p_imp->add_option("k", n_k, "second node")->required();
  add_common(p_imp);

  auto* p_tr = app.add_subcommand("transfer", "transfer impedance tz(pq;jk)");
  p_tr->add_option("p", n_p, "source node")->required();
  p_tr->add_option("q", n_q, "sink node")->required();
  p_tr->add_option("j", n_j, "sense node")->required();
  p_tr->add_option("k", n_k, "sense node")->required();
  add_common(p_tr);

  bool list_trees = false;
  auto* p_kir = app.add_subcommand("kirchhoff", "tree-sum characteristic");
  p_kir->add_flag("--trees", list_trees, "enumerate spanning trees");
  add_common(p_kir);

  bool f_foster = false, f_jacobi = false, f_tellegen = false, f_structure = false;
  bool f_metric = false;
  std::vector<double> thetas;
  auto* p_chk = app.add_subcommand("check", "identity and property checks");
  p_chk->add_flag("--foster", f_foster, "Foster sum identity");
  p_chk->add_flag("--jacobi", f_jacobi, "cofactor quadratic identities");
  p_chk->add_flag("--tellegen", f_tellegen, "power balance on the solved network");
  p_chk->add_flag("--metric", f_metric, "rotated-impedance triangle inequality scan");
  p_chk->add_option("--theta", thetas, "scan angles for --metric (comma separated)")
      ->delimiter(',');
  p_chk->add_flag("--structure", f_structure, "matrix structure report");
  p_chk->add_option("--ground", ground, "reference node for --tellegen");
  add_common(p_chk);

  std::string branch;
  auto* p_sen = app.add_subcommand("sensitivity", "dZ_jk/dy_branch");
  p_sen->add_option("j", n_j, "first node")->required();
  p_sen->add_option("k", n_k, "second node")->required();
  p_sen->add_option("--branch", branch, "branch name")->required();
  add_common(p_sen);

  std::vector<std::string> contract_jk, augment_jky;
  std::string delete_name;
  auto* p_mod = app.add_subcommand("modify", "contract, delete, or augment");
  p_mod->add_option("--contract", contract_jk, "identify nodes j k")->expected(2)->allow_extra_args(false);
  p_mod->add_option("--delete", delete_name, "remove a named branch");
  p_mod->add_option("--augment", augment_jky, "add admittance: j k y")->expected(3)->allow_extra_args(false);
  add_common(p_mod);

  std::vector<std::string> port;
  auto* p_red = app.add_subcommand("reduce", "one-port Norton reduction");
  p_red->add_option("--port", port, "port nodes p q")->expected(2)->allow_extra_args(false)->required();
  add_common(p_red);

  auto* p_pr = app.add_subcommand("prcheck", "positive-real test of Z_jk(s)");
  p_pr->add_option("j", n_j, "first node")->required();
  p_pr->add_option("k", n_k, "second node")->required();
  add_common(p_pr);

  auto* p_ph = app.add_subcommand("phase", "inductive-flow phase assignment");
  p_ph->add_option("--ground", ground, "reference node (default: first node)");
  add_common(p_ph);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  c.out["command"] = sub->get_name();
  c.out["inputs"] = {{"file", c.file}, {"scalar", c.scalar}};

  try {
    load(c);
    if (sub != p_parse && sub != p_pr) evaluate(c);
    if (sub == p_parse) cmd_parse(c);
    else if (sub == p_ym) cmd_ymatrix(c);
    else if (sub == p_solve) cmd_solve(c, ground);
    else if (sub == p_imp) cmd_transfer(c, n_j, n_k, "", "", true);
    else if (sub == p_tr) cmd_transfer(c, n_p, n_q, n_j, n_k, false);
    else if (sub == p_kir) cmd_kirchhoff(c, list_trees);
    else if (sub == p_chk) {
      bool metric_given = f_metric || !thetas.empty();
      bool any = f_foster || f_jacobi || f_tellegen || f_structure || metric_given;
      if (metric_given && thetas.empty())
        thetas = {0.0, M_PI / 4, M_PI / 2, -M_PI / 4, -M_PI / 2};
      if (!any) {
        f_foster = f_jacobi = f_tellegen = f_structure = true;
        thetas = {0.0, M_PI / 4, M_PI / 2, -M_PI / 4, -M_PI / 2};
      }
      if (f_foster) check_foster(c);
      if (f_jacobi) check_jacobi(c);
      if (f_tellegen) check_tellegen_cmd(c, ground);
      if (!thetas.empty()) check_metric_cmd(c, thetas);
      if (f_structure) check_structure_cmd(c);
    } else if (sub == p_sen) {
      cmd_sensitivity(c, n_j, n_k, branch);
    } else if (sub == p_mod) {
      cmd_modify(c, contract_jk, delete_name, augment_jky);
    } else if (sub == p_red) {
      cmd_reduce(c, port[0], port[1]);
    } else if (sub == p_pr) {
      cmd_prcheck(c, n_j, n_k);
    } else if (sub == p_ph) {
      cmd_phase(c, ground);
    }
  } catch (const NetlistError& e) {
    std::cerr << c.file << ":" << e.line << ": " << e.what() << "\n";
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return finish(c);
}
