#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "dfvs/embedded_digraph.hpp"

namespace dfvs {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text format:
//   emd <V> <A>
//   v <id> <cost|inf>          (per vertex)
//   a <id> <tail> <head>       (per arc)
//   r <id> <dart...>           (per vertex, darts in rotation order;
//                               dart = +<arcid> tail dart, -<arcid> head dart)
inline EmbeddedDigraph read_emd(std::istream& in) {
  EmbeddedDigraph::Builder b;
  std::string line;
  int lineno = 0;
  long nv = -1, na = -1;
  auto fail = [&](const std::string& msg) {
    throw ParseError("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "emd") {
      if (!(ls >> nv >> na)) fail("bad header");
    } else if (tag == "v") {
      VertexId id;
      std::string cost;
      if (!(ls >> id >> cost)) fail("bad vertex line");
      try {
        b.add_vertex(id, parse_cost(cost));
      } catch (const std::exception& e) {
        fail(e.what());
      }
    } else if (tag == "a") {
      ArcId id;
      VertexId t, h;
      if (!(ls >> id >> t >> h)) fail("bad arc line");
      try {
        b.add_arc(id, t, h);
      } catch (const std::exception& e) {
        fail(e.what());
      }
    } else if (tag == "r") {
      VertexId id;
      if (!(ls >> id)) fail("bad rotation line");
      std::vector<Dart> rot;
      std::string tok;
      while (ls >> tok) {
        if (tok.size() < 2 || (tok[0] != '+' && tok[0] != '-'))
          fail("bad dart token '" + tok + "'");
        ArcId a;
        try {
          a = std::stoi(tok.substr(1));
        } catch (...) {
          fail("bad dart token '" + tok + "'");
          a = 0;
        }
        Dart d = tok[0] == '+' ? tail_dart(a) : head_dart(a);
        for (Dart prev : rot)
          if (prev == d) fail("duplicate dart '" + tok + "'");
        rot.push_back(d);
      }
      b.set_rotation(id, std::move(rot));
    } else {
      fail("unknown tag '" + tag + "'");
    }
  }
  EmbeddedDigraph g;
  try {
    g = b.build(/*strict=*/true);
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  if (nv >= 0 && static_cast<long>(g.num_vertices()) != nv)
    throw ParseError("header vertex count mismatch");
  if (na >= 0 && static_cast<long>(g.num_arcs()) != na)
    throw ParseError("header arc count mismatch");
  return g;
}

inline void write_emd(std::ostream& out, const EmbeddedDigraph& g) {
  out << "emd " << g.num_vertices() << " " << g.num_arcs() << "\n";
  for (auto& [v, c] : g.costs()) out << "v " << v << " " << c.str() << "\n";
  for (auto& [a, arc] : g.arcs())
    out << "a " << a << " " << arc.tail << " " << arc.head << "\n";
  for (auto& [v, rot] : g.rotations()) {
    out << "r " << v;
    for (Dart d : rot)
      out << " " << (is_tail_dart(d) ? "+" : "-") << dart_arc(d);
    out << "\n";
  }
}

inline std::string to_emd_string(const EmbeddedDigraph& g) {
  std::ostringstream os;
  write_emd(os, g);
  return os.str();
}

inline EmbeddedDigraph from_emd_string(const std::string& s) {
  std::istringstream is(s);
  return read_emd(is);
}

}  // namespace dfvs
