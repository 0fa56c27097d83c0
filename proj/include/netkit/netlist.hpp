#pragma once
// Line-oriented netlist format:
//   node IDENT
//   branch IDENT A B (y=CPLX | [g=R] [c=R] [r=R] [l=R])
//   isrc IDENT Q P i=CPLX          (current directed from Q to P)
//   vsrc IDENT P Q v=CPLX          (P positive terminal)
//   vccs IDENT J K ctrl=P,Q gain=CPLX
//   cccs IDENT J K ctrl=BRANCH gain=CPLX
//   vcvs IDENT P Q ctrl=A,B gain=CPLX series=CPLX
//   ccvs IDENT P Q ctrl=BRANCH gain=CPLX series=CPLX
//   omega REAL | sigma REAL
// '#' starts a comment. Values may be decimals or exact rationals p/q.
#include "netkit/graph.hpp"
#include "netkit/scalar.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace netkit {

enum class NetlistErrorKind { Syntax, DuplicateName, UnknownNode, InvalidGCRL, UnknownBranch };

struct NetlistError : std::runtime_error {
  NetlistErrorKind kind;
  int line, col;
  NetlistError(NetlistErrorKind k, int ln, int cl, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ":" + std::to_string(cl) + ": " + msg),
        kind(k),
        line(ln),
        col(cl) {}
};

enum class BranchKind { Direct, GCRL };

struct Branch {
  std::string name;
  int head = 0, tail = 0;  // branch current i = y (v_head - v_tail)
  BranchKind kind = BranchKind::Direct;
  CRat y;
  Rat g, c, r, l;
};

enum class SourceKind { Current, Voltage, VCCS, CCCS, VCVS, CCVS };

struct Source {
  SourceKind kind = SourceKind::Current;
  std::string name;
  int a = 0, b = 0;  // Current: from a to b (injects at b). Voltage & dependent: (pos, neg).
  CRat value;        // i or v
  int ctrl_p = 0, ctrl_q = 0;  // voltage-controlled kinds
  std::string ctrl_branch;     // current-controlled kinds
  CRat gain, series;
};

struct Netlist {
  std::vector<std::string> nodes;  // index = position + 1
  std::vector<Branch> branches;
  std::vector<Source> sources;
  std::optional<Rat> omega, sigma;

  int n() const { return static_cast<int>(nodes.size()); }
  int node_index(const std::string& name) const {
    for (size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i] == name) return static_cast<int>(i) + 1;
    return 0;
  }
  const Branch* find_branch(const std::string& name) const {
    for (const auto& b : branches)
      if (b.name == name) return &b;
    return nullptr;
  }
};

namespace detail {

struct Token {
  std::string text;
  int col;
};

inline std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

}  // namespace detail

inline Netlist parse(const std::string& text) {
  Netlist nl;
  auto fail = [](NetlistErrorKind k, int ln, int cl, const std::string& msg) {
    throw NetlistError(k, ln, cl, msg);
  };
  auto intern_node = [&](const std::string& name) {
    int idx = nl.node_index(name);
    if (idx) return idx;
    nl.nodes.push_back(name);
    return nl.n();
  };
  auto existing_node = [&](const detail::Token& t, int ln) {
    int idx = nl.node_index(t.text);
    if (!idx)
      fail(NetlistErrorKind::UnknownNode, ln, t.col, "unknown node '" + t.text + "'");
    return idx;
  };
  auto parse_value = [&](const detail::Token& t, int ln, const std::string& key) {
    if (t.text.rfind(key + "=", 0) != 0)
      fail(NetlistErrorKind::Syntax, ln, t.col, "expected " + key + "=...");
    try {
      return cplx_from_string(t.text.substr(key.size() + 1));
    } catch (const std::exception& e) {
      fail(NetlistErrorKind::Syntax, ln, t.col, e.what());
    }
    return CRat();
  };

  std::istringstream in(text);
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto tok = detail::tokenize(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0].text;
    auto need = [&](size_t count) {
      if (tok.size() != count)
        fail(NetlistErrorKind::Syntax, ln, tok[0].col,
             "'" + kw + "' expects " + std::to_string(count - 1) + " arguments");
    };

    if (kw == "node") {
      need(2);
      if (nl.node_index(tok[1].text))
        fail(NetlistErrorKind::DuplicateName, ln, tok[1].col,
             "duplicate node '" + tok[1].text + "'");
      nl.nodes.push_back(tok[1].text);
    } else if (kw == "branch") {
      if (tok.size() < 4)
        fail(NetlistErrorKind::Syntax, ln, tok[0].col, "'branch' expects name, endpoints, element");
      Branch b;
      b.name = tok[1].text;
      for (const auto& prev : nl.branches)
        if (prev.name == b.name)
          fail(NetlistErrorKind::DuplicateName, ln, tok[1].col,
               "duplicate branch '" + b.name + "'");
      b.head = intern_node(tok[2].text);
      b.tail = intern_node(tok[3].text);
      if (b.head == b.tail)
        fail(NetlistErrorKind::Syntax, ln, tok[2].col, "branch endpoints must differ");
      if (tok.size() == 5 && tok[4].text.rfind("y=", 0) == 0) {
        b.kind = BranchKind::Direct;
        b.y = parse_value(tok[4], ln, "y");
      } else {
        b.kind = BranchKind::GCRL;
        for (size_t i = 4; i < tok.size(); ++i) {
          const std::string& t = tok[i].text;
          if (t.size() < 3 || t[1] != '=' || std::string("gcrl").find(t[0]) == std::string::npos)
            fail(NetlistErrorKind::Syntax, ln, tok[i].col, "expected g=/c=/r=/l= field");
          Rat v;
          try {
            v = rat_from_string(t.substr(2));
          } catch (const std::exception& e) {
            fail(NetlistErrorKind::Syntax, ln, tok[i].col, e.what());
          }
          switch (t[0]) {
            case 'g': b.g = v; break;
            case 'c': b.c = v; break;
            case 'r': b.r = v; break;
            case 'l': b.l = v; break;
          }
        }
        if (b.g < 0 || b.c < 0 || b.r < 0 || b.l < 0)
          fail(NetlistErrorKind::InvalidGCRL, ln, tok[4].col, "g,c,r,l must be nonnegative");
        if (b.g + b.c == 0)
          fail(NetlistErrorKind::InvalidGCRL, ln, tok[4].col, "g + c must be nonzero");
        if (b.r + b.l == 0)
          fail(NetlistErrorKind::InvalidGCRL, ln, tok[4].col, "r + l must be nonzero");
        if (b.l * b.c != 0 && b.g * b.l - b.r * b.c == 0)
          fail(NetlistErrorKind::InvalidGCRL, ln, tok[4].col,
               "degenerate element: l*c nonzero with g*l = r*c");
      }
      nl.branches.push_back(std::move(b));
    } else if (kw == "isrc" || kw == "vsrc") {
      need(5);
      Source s;
      s.kind = (kw == "isrc") ? SourceKind::Current : SourceKind::Voltage;
      s.name = tok[1].text;
      for (const auto& prev : nl.sources)
        if (prev.name == s.name)
          fail(NetlistErrorKind::DuplicateName, ln, tok[1].col,
               "duplicate source '" + s.name + "'");
      s.a = existing_node(tok[2], ln);
      s.b = existing_node(tok[3], ln);
      s.value = parse_value(tok[4], ln, kw == "isrc" ? "i" : "v");
      nl.sources.push_back(std::move(s));
    } else if (kw == "vccs" || kw == "cccs" || kw == "vcvs" || kw == "ccvs") {
      bool voltage_out = (kw == "vcvs" || kw == "ccvs");
      bool voltage_ctrl = (kw == "vccs" || kw == "vcvs");
      need(voltage_out ? 7 : 6);
      Source s;
      s.kind = kw == "vccs"   ? SourceKind::VCCS
               : kw == "cccs" ? SourceKind::CCCS
               : kw == "vcvs" ? SourceKind::VCVS
                              : SourceKind::CCVS;
      s.name = tok[1].text;
      for (const auto& prev : nl.sources)
        if (prev.name == s.name)
          fail(NetlistErrorKind::DuplicateName, ln, tok[1].col,
               "duplicate source '" + s.name + "'");
      s.a = existing_node(tok[2], ln);
      s.b = existing_node(tok[3], ln);
      if (tok[4].text.rfind("ctrl=", 0) != 0)
        fail(NetlistErrorKind::Syntax, ln, tok[4].col, "expected ctrl=...");
      std::string ctrl = tok[4].text.substr(5);
      if (voltage_ctrl) {
        auto comma = ctrl.find(',');
        if (comma == std::string::npos)
          fail(NetlistErrorKind::Syntax, ln, tok[4].col, "expected ctrl=NODE,NODE");
        detail::Token tp{ctrl.substr(0, comma), tok[4].col};
        detail::Token tq{ctrl.substr(comma + 1), tok[4].col};
        s.ctrl_p = existing_node(tp, ln);
        s.ctrl_q = existing_node(tq, ln);
      } else {
        s.ctrl_branch = ctrl;
      }
      s.gain = parse_value(tok[5], ln, "gain");
      if (voltage_out) {
        s.series = parse_value(tok[6], ln, "series");
        if (scalar_traits<CRat>::is_zero(s.series))
          fail(NetlistErrorKind::Syntax, ln, tok[6].col,
               "voltage-output source needs nonzero series admittance");
      }
      nl.sources.push_back(std::move(s));
    } else if (kw == "omega" || kw == "sigma") {
      need(2);
      Rat v;
      try {
        v = rat_from_string(tok[1].text);
      } catch (const std::exception& e) {
        fail(NetlistErrorKind::Syntax, ln, tok[1].col, e.what());
      }
      (kw == "omega" ? nl.omega : nl.sigma) = v;
    } else {
      fail(NetlistErrorKind::Syntax, ln, tok[0].col, "unknown statement '" + kw + "'");
    }
  }

  // current-controlled sources must reference an existing branch
  for (const auto& s : nl.sources)
    if ((s.kind == SourceKind::CCCS || s.kind == SourceKind::CCVS) && !nl.find_branch(s.ctrl_branch))
      throw NetlistError(NetlistErrorKind::UnknownBranch, 0, 0,
                         "unknown control branch '" + s.ctrl_branch + "'");
  return nl;
}

inline std::string serialize(const Netlist& nl) {
  std::ostringstream out;
  if (nl.sigma) out << "sigma " << rat_to_string(*nl.sigma) << "\n";
  if (nl.omega) out << "omega " << rat_to_string(*nl.omega) << "\n";
  for (const auto& name : nl.nodes) out << "node " << name << "\n";
  for (const auto& b : nl.branches) {
    out << "branch " << b.name << " " << nl.nodes[b.head - 1] << " " << nl.nodes[b.tail - 1];
    if (b.kind == BranchKind::Direct) {
      out << " y=" << cplx_to_string(b.y);
    } else {
      out << " g=" << rat_to_string(b.g) << " c=" << rat_to_string(b.c)
          << " r=" << rat_to_string(b.r) << " l=" << rat_to_string(b.l);
    }
    out << "\n";
  }
  for (const auto& s : nl.sources) {
    const std::string an = nl.nodes[s.a - 1], bn = nl.nodes[s.b - 1];
    switch (s.kind) {
      case SourceKind::Current:
        out << "isrc " << s.name << " " << an << " " << bn << " i=" << cplx_to_string(s.value);
        break;
      case SourceKind::Voltage:
        out << "vsrc " << s.name << " " << an << " " << bn << " v=" << cplx_to_string(s.value);
        break;
      case SourceKind::VCCS:
      case SourceKind::VCVS:
        out << (s.kind == SourceKind::VCCS ? "vccs " : "vcvs ") << s.name << " " << an << " " << bn
            << " ctrl=" << nl.nodes[s.ctrl_p - 1] << "," << nl.nodes[s.ctrl_q - 1]
            << " gain=" << cplx_to_string(s.gain);
        if (s.kind == SourceKind::VCVS) out << " series=" << cplx_to_string(s.series);
        break;
      case SourceKind::CCCS:
      case SourceKind::CCVS:
        out << (s.kind == SourceKind::CCCS ? "cccs " : "ccvs ") << s.name << " " << an << " " << bn
            << " ctrl=" << s.ctrl_branch << " gain=" << cplx_to_string(s.gain);
        if (s.kind == SourceKind::CCVS) out << " series=" << cplx_to_string(s.series);
        break;
    }
    out << "\n";
  }
  return out.str();
}

struct PoleAtS : std::runtime_error {
  std::string branch;
  explicit PoleAtS(const std::string& name)
      : std::runtime_error("element '" + name + "' has a pole at the requested s"), branch(name) {}
};

// Replaces every (g,c,r,l) element by a direct admittance y = (g+sc)/(r+sl).
inline Netlist eval_elements(const Netlist& nl, const CRat& s) {
  Netlist out = nl;
  for (auto& b : out.branches) {
    if (b.kind != BranchKind::GCRL) continue;
    CRat den = CRat(b.r) + s * CRat(b.l);
    if (scalar_traits<CRat>::is_zero(den)) throw PoleAtS(b.name);
    b.y = (CRat(b.g) + s * CRat(b.c)) / den;
    b.kind = BranchKind::Direct;
    b.g = b.c = b.r = b.l = Rat(0);
  }
  return out;
}

// s implied by the sigma/omega statements (defaults to 0 + j*0).
inline CRat netlist_s(const Netlist& nl) {
  return CRat(nl.sigma.value_or(Rat(0)), nl.omega.value_or(Rat(0)));
}

inline MultiGraph graph_of(const Netlist& nl) {
  MultiGraph g;
  g.n = nl.n();
  for (const auto& b : nl.branches) g.add_edge(b.head, b.tail);
  return g;
}

// Net current injections from the independent current sources.
template <class T>
std::vector<T> injection_vector(const Netlist& nl) {
  std::vector<T> i(nl.n(), scalar_traits<T>::zero());
  for (const auto& s : nl.sources) {
    if (s.kind != SourceKind::Current) continue;
    T v = scalar_traits<T>::from_value(s.value);
    i[s.b - 1] += v;
    i[s.a - 1] -= v;
  }
  return i;
}

}  // namespace netkit
