#pragma once

// Closed oriented surfaces as polygon schemas, edge-cycle multicurves, cutting
// and the d-splitting-system certificate, the model splitting built from d
// spheres, line-arrangement bookkeeping, and the homology of the complement.

#include "symplab/snf.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symplab {

struct SurfaceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  /// Dense class ids in order of first appearance.
  std::vector<int> classes(std::size_t* count) {
    std::map<std::size_t, int> ids;
    std::vector<int> out(parent_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      auto [it, inserted] = ids.try_emplace(find(i), static_cast<int>(ids.size()));
      out[i] = it->second;
    }
    *count = ids.size();
    return out;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Edge label parsing: the first character's case carries the orientation,
/// "a" is the edge a traversed forward and "A" the same edge reversed.
struct OrientedEdge {
  std::string name;
  int dir = 1;
};

inline OrientedEdge parse_label(const std::string& label) {
  if (label.empty() || !std::isalpha(static_cast<unsigned char>(label[0]))) {
    throw SurfaceError("edge label must start with a letter: '" + label + "'");
  }
  OrientedEdge e{label, 1};
  if (std::isupper(static_cast<unsigned char>(label[0]))) {
    e.dir = -1;
    e.name[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(label[0])));
  }
  return e;
}

inline std::string label_of(const std::string& name, int dir) {
  std::string s = name;
  if (dir < 0) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  return s;
}

using Word = std::vector<std::string>;

/// One side of an edge inside a face word.
struct Occurrence {
  int face = 0;
  int pos = 0;
  int edge = 0;
  int dir = 1;
};

/// Closed oriented surface glued from polygons. Corner c(f, p) is the polygon
/// vertex at the start of position p of face f.
class RibbonSurface {
 public:
  const std::vector<Word>& faces() const { return faces_; }
  const std::vector<std::string>& edge_names() const { return edge_names_; }
  const std::vector<Occurrence>& occurrences() const { return occ_; }
  /// The two occurrences of each edge, forward side first.
  const std::vector<std::array<int, 2>>& edge_sides() const { return sides_; }

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edge_names_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }
  int genus() const { return (2 - euler_characteristic()) / 2; }

  int edge_id(const std::string& name) const {
    auto it = edge_index_.find(name);
    if (it == edge_index_.end()) throw SurfaceError("unknown edge '" + name + "'");
    return it->second;
  }
  int tail(int edge) const { return tail_[edge]; }
  int head(int edge) const { return head_[edge]; }

  int corner_index(int face, int pos) const { return corner_offset_[face] + pos; }
  int corner_count() const { return corner_offset_.back(); }
  int face_size(int face) const { return static_cast<int>(faces_[face].size()); }

  /// Corners at the start and the end of an occurrence, in the edge's own direction.
  std::pair<int, int> occurrence_ends(const Occurrence& o) const {
    const int start = corner_index(o.face, o.pos);
    const int end = corner_index(o.face, (o.pos + 1) % face_size(o.face));
    return o.dir > 0 ? std::pair{start, end} : std::pair{end, start};
  }

  friend RibbonSurface build_surface(const std::vector<Word>& faces);

 private:
  std::vector<Word> faces_;
  std::vector<std::string> edge_names_;
  std::map<std::string, int> edge_index_;
  std::vector<Occurrence> occ_;
  std::vector<std::array<int, 2>> sides_;
  std::vector<int> corner_offset_;
  std::vector<int> corner_vertex_;
  std::vector<int> tail_, head_;
  int num_vertices_ = 0;
};

/// Validates the schema and computes vertices by identifying corners across glued edges.
inline RibbonSurface build_surface(const std::vector<Word>& faces) {
  RibbonSurface s;
  if (faces.empty()) throw SurfaceError("build_surface: no faces");
  s.faces_ = faces;
  s.corner_offset_.push_back(0);
  std::vector<std::vector<int>> seen;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    if (faces[f].empty()) throw SurfaceError("build_surface: empty face");
    for (int p = 0; p < static_cast<int>(faces[f].size()); ++p) {
      const OrientedEdge e = parse_label(faces[f][p]);
      auto [it, inserted] = s.edge_index_.try_emplace(e.name, static_cast<int>(s.edge_names_.size()));
      if (inserted) {
        s.edge_names_.push_back(e.name);
        seen.emplace_back();
      }
      seen[it->second].push_back(static_cast<int>(s.occ_.size()));
      s.occ_.push_back({f, p, it->second, e.dir});
    }
    s.corner_offset_.push_back(s.corner_offset_.back() + static_cast<int>(faces[f].size()));
  }
  s.sides_.resize(s.edge_names_.size());
  for (std::size_t e = 0; e < seen.size(); ++e) {
    if (seen[e].size() != 2) {
      throw SurfaceError("build_surface: edge '" + s.edge_names_[e] + "' used " + std::to_string(seen[e].size()) +
                         " time(s), expected exactly 2");
    }
    const Occurrence& a = s.occ_[seen[e][0]];
    const Occurrence& b = s.occ_[seen[e][1]];
    if (a.dir == b.dir) {
      throw SurfaceError("build_surface: edge '" + s.edge_names_[e] + "' glued with equal orientations (non-orientable)");
    }
    s.sides_[e] = a.dir > 0 ? std::array{seen[e][0], seen[e][1]} : std::array{seen[e][1], seen[e][0]};
  }

  detail::UnionFind corners(static_cast<std::size_t>(s.corner_count()));
  detail::UnionFind face_links(faces.size());
  for (std::size_t e = 0; e < s.sides_.size(); ++e) {
    const Occurrence& a = s.occ_[s.sides_[e][0]];
    const Occurrence& b = s.occ_[s.sides_[e][1]];
    auto [a0, a1] = s.occurrence_ends(a);
    auto [b0, b1] = s.occurrence_ends(b);
    corners.unite(a0, b0);
    corners.unite(a1, b1);
    face_links.unite(a.face, b.face);
  }
  std::size_t nv = 0, nf = 0;
  s.corner_vertex_ = corners.classes(&nv);
  face_links.classes(&nf);
  if (nf != 1) throw SurfaceError("build_surface: gluing is disconnected");
  s.num_vertices_ = static_cast<int>(nv);
  s.tail_.resize(s.sides_.size());
  s.head_.resize(s.sides_.size());
  for (std::size_t e = 0; e < s.sides_.size(); ++e) {
    auto [c0, c1] = s.occurrence_ends(s.occ_[s.sides_[e][0]]);
    s.tail_[e] = s.corner_vertex_[c0];
    s.head_[e] = s.corner_vertex_[c1];
  }
  const int chi = s.euler_characteristic();
  if (chi > 2 || (2 - chi) % 2 != 0) {
    throw SurfaceError("build_surface: Euler characteristic " + std::to_string(chi) + " is not that of a closed oriented surface");
  }
  return s;
}

/// Disjoint embedded edge-cycles. `retained` holds circles around retained
/// nodes; they are cut like curves but tagged separately.
struct Multicurve {
  std::vector<Word> curves;
  std::vector<Word> retained;
};

struct BoundaryCircle {
  std::string tag;  ///< "curve:<i>" or "node:<i>"
  int edges = 0;
};

struct CutComponent {
  int faces = 0;
  int euler = 0;
  int genus = 0;
  std::vector<BoundaryCircle> boundary;
};

struct CutDecomposition {
  std::vector<CutComponent> components;
  /// One entry per cut circle (curves first, then retained): the components on its two sides.
  std::vector<std::pair<int, int>> adjacency;
  std::vector<std::string> adjacency_tags;
  int surface_euler = 0;
};

namespace detail {

/// Validates one cycle and returns its edge ids.
inline std::vector<int> cycle_edges(const RibbonSurface& s, const Word& curve, std::set<int>& used_edges,
                                    std::set<int>& used_vertices, const std::string& what) {
  if (curve.empty()) throw SurfaceError(what + ": empty curve");
  std::vector<int> ids;
  std::vector<std::pair<int, int>> ends;
  for (const std::string& label : curve) {
    const OrientedEdge e = parse_label(label);
    const int id = s.edge_id(e.name);
    if (!used_edges.insert(id).second) throw SurfaceError(what + ": edge '" + e.name + "' repeated");
    ids.push_back(id);
    ends.push_back(e.dir > 0 ? std::pair{s.tail(id), s.head(id)} : std::pair{s.head(id), s.tail(id)});
  }
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (ends[i].second != ends[(i + 1) % ends.size()].first) throw SurfaceError(what + ": not a closed edge path");
    if (!used_vertices.insert(ends[i].first).second) throw SurfaceError(what + ": vertex repeated (not embedded)");
  }
  return ids;
}

}  // namespace detail

/// Cuts the surface along every curve and retained circle. Components are the
/// classes of faces glued through uncut edges; corners are identified only
/// across uncut edges, which splits the vertices on the cut.
inline CutDecomposition cut_along(const RibbonSurface& s, const Multicurve& mc) {
  std::set<int> used_edges, used_vertices;
  std::vector<int> edge_circle(s.num_edges(), -1);
  std::vector<std::string> tags;
  auto take = [&](const std::vector<Word>& list, const char* kind) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string tag = std::string(kind) + ":" + std::to_string(i);
      for (int e : detail::cycle_edges(s, list[i], used_edges, used_vertices, tag)) {
        edge_circle[e] = static_cast<int>(tags.size());
      }
      tags.push_back(tag);
    }
  };
  take(mc.curves, "curve");
  take(mc.retained, "node");

  detail::UnionFind faces(static_cast<std::size_t>(s.num_faces()));
  detail::UnionFind corners(static_cast<std::size_t>(s.corner_count()));
  for (int e = 0; e < s.num_edges(); ++e) {
    if (edge_circle[e] >= 0) continue;
    const Occurrence& a = s.occurrences()[s.edge_sides()[e][0]];
    const Occurrence& b = s.occurrences()[s.edge_sides()[e][1]];
    faces.unite(a.face, b.face);
    auto [a0, a1] = s.occurrence_ends(a);
    auto [b0, b1] = s.occurrence_ends(b);
    corners.unite(a0, b0);
    corners.unite(a1, b1);
  }
  std::size_t ncomp = 0, nvert = 0;
  const std::vector<int> comp_of_face = faces.classes(&ncomp);
  const std::vector<int> vert_of_corner = corners.classes(&nvert);

  CutDecomposition out;
  out.surface_euler = s.euler_characteristic();
  out.components.resize(ncomp);
  std::vector<std::set<int>> comp_vertices(ncomp);
  std::vector<int> comp_edges(ncomp, 0);
  for (int f = 0; f < s.num_faces(); ++f) {
    ++out.components[comp_of_face[f]].faces;
    for (int p = 0; p < s.face_size(f); ++p) comp_vertices[comp_of_face[f]].insert(vert_of_corner[s.corner_index(f, p)]);
  }
  for (int e = 0; e < s.num_edges(); ++e) {
    const int c = comp_of_face[s.occurrences()[s.edge_sides()[e][0]].face];
    comp_edges[c] += edge_circle[e] >= 0 ? 0 : 1;
  }
  // Boundary: every side of a cut edge is a boundary edge of its component.
  // Boundary circles are the connected pieces of the graph on cut vertices.
  detail::UnionFind bverts(nvert);
  std::vector<std::pair<int, int>> bedges;  // (occurrence index, start vertex)
  for (int e = 0; e < s.num_edges(); ++e) {
    if (edge_circle[e] < 0) continue;
    for (int side : s.edge_sides()[e]) {
      const Occurrence& o = s.occurrences()[side];
      ++comp_edges[comp_of_face[o.face]];
      auto [c0, c1] = s.occurrence_ends(o);
      bverts.unite(vert_of_corner[c0], vert_of_corner[c1]);
      bedges.push_back({side, vert_of_corner[c0]});
    }
  }
  std::map<int, std::pair<int, BoundaryCircle>> circles;  // root vertex -> (component, circle)
  for (auto [side, v] : bedges) {
    const Occurrence& o = s.occurrences()[side];
    const int root = static_cast<int>(bverts.find(static_cast<std::size_t>(v)));
    auto& entry = circles[root];
    entry.first = comp_of_face[o.face];
    entry.second.tag = tags[edge_circle[o.edge]];
    ++entry.second.edges;
  }
  std::vector<std::vector<int>> circle_sides(tags.size());
  for (const auto& [root, entry] : circles) {
    out.components[entry.first].boundary.push_back(entry.second);
    const std::string& tag = entry.second.tag;
    const auto idx = static_cast<std::size_t>(std::find(tags.begin(), tags.end(), tag) - tags.begin());
    circle_sides[idx].push_back(entry.first);
  }
  for (std::size_t c = 0; c < ncomp; ++c) {
    auto& comp = out.components[c];
    comp.euler = static_cast<int>(comp_vertices[c].size()) - comp_edges[c] + comp.faces;
    const int twice_genus = 2 - comp.euler - static_cast<int>(comp.boundary.size());
    if (twice_genus < 0 || twice_genus % 2 != 0) throw std::logic_error("cut_along: inconsistent component topology");
    comp.genus = twice_genus / 2;
  }
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (circle_sides[i].size() != 2) throw std::logic_error("cut_along: cut circle without exactly two sides");
    out.adjacency.push_back({circle_sides[i][0], circle_sides[i][1]});
    out.adjacency_tags.push_back(tags[i]);
  }
  int total = 0;
  for (const auto& comp : out.components) total += comp.euler;
  if (total != out.surface_euler) throw std::logic_error("cut_along: Euler characteristic not preserved");
  return out;
}

struct SplittingClause {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SplittingCertificate {
  int d = 0;
  bool pass = false;
  std::vector<SplittingClause> clauses;
  std::string failed_clause;  ///< first failing clause, empty on pass
};

/// Pass iff there are exactly d components, all of genus 0 with d - 1 boundary
/// circles, and the circle adjacency graph is the complete simple graph K_d.
inline SplittingCertificate verify_splitting(const CutDecomposition& cut, int d) {
  SplittingCertificate cert;
  cert.d = d;
  const int n = static_cast<int>(cut.components.size());
  cert.clauses.push_back({"component_count", n == d, std::to_string(n) + " components, expected " + std::to_string(d)});

  int bad_genus = -1, bad_boundary = -1;
  for (int i = 0; i < n; ++i) {
    if (cut.components[i].genus != 0 && bad_genus < 0) bad_genus = i;
    if (static_cast<int>(cut.components[i].boundary.size()) != d - 1 && bad_boundary < 0) bad_boundary = i;
  }
  cert.clauses.push_back({"genus_zero", bad_genus < 0,
                          bad_genus < 0 ? "all components planar"
                                        : "component " + std::to_string(bad_genus) + " has genus " +
                                              std::to_string(cut.components[bad_genus].genus)});
  cert.clauses.push_back({"boundary_count", bad_boundary < 0,
                          bad_boundary < 0 ? "every component has d-1 boundary circles"
                                           : "component " + std::to_string(bad_boundary) + " has " +
                                                 std::to_string(cut.components[bad_boundary].boundary.size()) +
                                                 " boundary circles"});

  std::string graph_detail = "adjacency graph is K_" + std::to_string(d);
  bool graph_ok = true;
  std::set<std::pair<int, int>> pairs;
  for (std::size_t i = 0; i < cut.adjacency.size() && graph_ok; ++i) {
    auto [a, b] = cut.adjacency[i];
    if (a == b) {
      graph_ok = false;
      graph_detail = cut.adjacency_tags[i] + " has the same component on both sides";
    } else if (!pairs.insert(std::minmax(a, b)).second) {
      graph_ok = false;
      graph_detail = cut.adjacency_tags[i] + " joins an already joined pair of components";
    }
  }
  if (graph_ok && static_cast<long long>(pairs.size()) != static_cast<long long>(n) * (n - 1) / 2) {
    graph_ok = false;
    graph_detail = "adjacency graph has " + std::to_string(pairs.size()) + " edges on " + std::to_string(n) +
                   " components, not complete";
  }
  if (graph_ok && n != d) graph_ok = false, graph_detail = "complete graph on the wrong number of components";
  cert.clauses.push_back({"complete_graph", graph_ok, graph_detail});

  cert.pass = true;
  for (const auto& c : cert.clauses) {
    if (!c.pass) {
      cert.pass = false;
      if (cert.failed_clause.empty()) cert.failed_clause = c.name;
    }
  }
  return cert;
}

struct SplittingCounts {
  long long genus = 0;
  long long curves = 0;
};

inline SplittingCounts splitting_counts(long long d) {
  if (d < 1) throw std::invalid_argument("splitting_counts: d must be at least 1");
  return {(d - 1) * (d - 2) / 2, d * (d - 1) / 2};
}

struct ModelSplitting {
  RibbonSurface surface;
  Multicurve multicurve;
  int d = 0;
};

inline std::string circle_edge(int i, int j, int k) {
  return "c" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(k);
}

/// d spheres, sphere i a polygon with word prod_j (arc_j, C_ij, arc_j^-1) so that
/// it glues to a sphere with d - 1 holes bounded by the triangles C_ij. The
/// triangle C_ij is read forward on sphere min(i, j) and reversed on the other,
/// which glues hole (i, j) to hole (j, i). The first retained_nodes circles go
/// to the retained list instead of the curve list.
inline ModelSplitting build_model_splitting(int d, int retained_nodes = 0) {
  if (d < 2) throw std::invalid_argument("build_model_splitting: d must be at least 2");
  const int k = d * (d - 1) / 2;
  if (retained_nodes < 0 || retained_nodes > k) {
    throw std::invalid_argument("build_model_splitting: retained_nodes must lie in [0, d(d-1)/2]");
  }
  std::vector<Word> faces;
  for (int i = 0; i < d; ++i) {
    Word w;
    for (int j = 0; j < d; ++j) {
      if (j == i) continue;
      const std::string arc = "a" + std::to_string(i) + "_" + std::to_string(j);
      w.push_back(arc);
      const int lo = std::min(i, j), hi = std::max(i, j);
      if (i == lo) {
        for (int e = 0; e < 3; ++e) w.push_back(circle_edge(lo, hi, e));
      } else {
        for (int e = 2; e >= 0; --e) w.push_back(label_of(circle_edge(lo, hi, e), -1));
      }
      w.push_back(label_of(arc, -1));
    }
    faces.push_back(std::move(w));
  }
  ModelSplitting out{build_surface(faces), {}, d};
  int index = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j, ++index) {
      Word c{circle_edge(i, j, 0), circle_edge(i, j, 1), circle_edge(i, j, 2)};
      (index < retained_nodes ? out.multicurve.retained : out.multicurve.curves).push_back(std::move(c));
    }
  }
  return out;
}

/// Pairs (i, j) of components with the id of their intersection point.
struct Incidence {
  int i = 0, j = 0;
  int point = 0;
};

/// True iff every pair appears and the intersection point ids are pairwise distinct.
inline bool arrangement_generic(const std::vector<Incidence>& incidence, int d) {
  std::set<std::pair<int, int>> pairs;
  std::set<int> points;
  bool distinct = true;
  for (const Incidence& x : incidence) {
    if (x.i == x.j || x.i < 0 || x.j < 0 || x.i >= d || x.j >= d) {
      throw std::invalid_argument("arrangement_generic: invalid component pair");
    }
    if (!pairs.insert(std::minmax(x.i, x.j)).second) throw std::invalid_argument("arrangement_generic: pair listed twice");
    distinct = points.insert(x.point).second && distinct;
  }
  if (static_cast<int>(pairs.size()) != d * (d - 1) / 2) throw std::invalid_argument("arrangement_generic: missing pair");
  return distinct;
}

/// Degrees of d genus-zero components with total class d, pairwise intersection 1.
/// Candidate degrees are those allowed by the genus-zero adjunction formula; the
/// search is exhaustive and must find exactly one solution.
inline std::vector<int> deduce_component_degrees(int d) {
  if (d < 2) throw std::invalid_argument("deduce_component_degrees: d must be at least 2");
  if (d > 20) throw std::invalid_argument("deduce_component_degrees: d too large for exhaustive search");
  std::vector<int> candidates;
  for (int delta = 1; delta <= d; ++delta) {
    if ((delta - 1) * (delta - 2) / 2 == 0) candidates.push_back(delta);
  }
  std::vector<std::vector<int>> solutions;
  std::vector<int> cur(d);
  std::vector<std::size_t> idx(d, 0);
  const std::size_t base = candidates.size();
  std::size_t total = 1;
  for (int i = 0; i < d; ++i) total *= base;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    int sum = 0;
    for (int i = 0; i < d; ++i, c /= base) sum += cur[i] = candidates[c % base];
    if (sum != d) continue;
    bool ok = true;
    for (int i = 0; i < d && ok; ++i) {
      for (int j = i + 1; j < d && ok; ++j) ok = cur[i] * cur[j] == 1;
    }
    if (ok) solutions.push_back(cur);
  }
  if (solutions.size() != 1) {
    throw std::runtime_error("deduce_component_degrees: expected a unique solution, found " +
                             std::to_string(solutions.size()));
  }
  return solutions.front();
}

// ---------------------------------------------------------------------------
// Homology

/// Cellular boundary matrices: d1 (vertices x edges) and d2 (edges x faces).
inline std::pair<IntMatrix, IntMatrix> cellular_boundaries(const RibbonSurface& s) {
  IntMatrix d1(s.num_vertices(), s.num_edges()), d2(s.num_edges(), s.num_faces());
  for (int e = 0; e < s.num_edges(); ++e) {
    d1(s.head(e), e) += 1;
    d1(s.tail(e), e) -= 1;
  }
  for (const Occurrence& o : s.occurrences()) d2(o.edge, o.face) += o.dir;
  return {d1, d2};
}

/// H_1 of the surface: ker d1 / im d2.
inline AbelianGroup surface_h1(const RibbonSurface& s) {
  auto [d1, d2] = cellular_boundaries(s);
  const SmithForm s1 = smith_normal_form(d1), s2 = smith_normal_form(d2);
  AbelianGroup g;
  g.rank = static_cast<std::size_t>(s.num_edges()) - s1.rank - s2.rank;
  for (const BigInt& x : s2.invariants) {
    if (x > 1) g.torsion.push_back(x);
  }
  return g;
}

struct ComplementHomology {
  AbelianGroup h1, h2, h3;
  int genus = 0;
};

/// Homology of the complement of a smooth degree-d curve in the projective plane.
/// By duality H_j = H^{4-j}(P, curve), and the long exact sequence of the pair
/// splits as coker(r_{3-j}) + ker(r_{4-j}) with r_k the restriction
/// H^k(P) -> H^k(curve): r_0 = [1], r_1 : 0 -> Z^{2g}, r_2 = [d], r_3 = 0.
/// The rank 2g of H^1(curve) is computed from the model surface.
inline ComplementHomology complement_homology(int d) {
  if (d < 1) throw std::invalid_argument("complement_homology: d must be at least 1");
  const RibbonSurface surface = d == 1 ? build_surface({{"a", "A"}}) : build_model_splitting(d).surface;
  const std::size_t two_g = surface_h1(surface).rank;
  const IntMatrix r0{{1}};
  const IntMatrix r1(two_g, 0);
  const IntMatrix r2{{d}};
  const IntMatrix r3(0, 0);
  ComplementHomology out;
  out.genus = static_cast<int>(two_g / 2);
  out.h1 = direct_sum(cokernel(r2), kernel(r3));
  out.h2 = direct_sum(cokernel(r1), kernel(r2));
  out.h3 = direct_sum(cokernel(r0), kernel(r1));
  return out;
}

// ---------------------------------------------------------------------------
// Random multicurves and JSON

/// Loop-erased random walk on the 1-skeleton avoiding the given vertices; returns
/// an embedded oriented edge-cycle, or nothing if the walk gets stuck.
inline std::optional<Word> random_cycle(const RibbonSurface& s, std::mt19937_64& rng, const std::set<int>& avoid) {
  std::vector<std::vector<std::pair<int, int>>> adj(s.num_vertices());  // (edge, dir)
  for (int e = 0; e < s.num_edges(); ++e) {
    if (avoid.count(s.tail(e)) || avoid.count(s.head(e))) continue;
    adj[s.tail(e)].push_back({e, 1});
    adj[s.head(e)].push_back({e, -1});
  }
  std::vector<int> starts;
  for (int v = 0; v < s.num_vertices(); ++v) {
    if (!adj[v].empty()) starts.push_back(v);
  }
  if (starts.empty()) return std::nullopt;
  std::vector<int> path_vertices{starts[rng() % starts.size()]};
  std::vector<std::pair<int, int>> path_edges;
  for (int step = 0; step < 10000; ++step) {
    const int v = path_vertices.back();
    std::vector<std::pair<int, int>> options;
    for (auto opt : adj[v]) {
      if (!path_edges.empty() && opt.first == path_edges.back().first) continue;
      options.push_back(opt);
    }
    if (options.empty()) return std::nullopt;
    const auto [e, dir] = options[rng() % options.size()];
    const int next = dir > 0 ? s.head(e) : s.tail(e);
    path_edges.push_back({e, dir});
    auto hit = std::find(path_vertices.begin(), path_vertices.end(), next);
    if (hit != path_vertices.end()) {
      const auto first = static_cast<std::size_t>(hit - path_vertices.begin());
      Word cycle;
      for (std::size_t i = first; i < path_edges.size(); ++i) {
        cycle.push_back(label_of(s.edge_names()[path_edges[i].first], path_edges[i].second));
      }
      return cycle;
    }
    path_vertices.push_back(next);
  }
  return std::nullopt;
}

/// Multicurve on the model surface that is not a splitting system: either a
/// proper subset of the model curves or one to three random disjoint cycles.
inline Multicurve random_non_splitting_multicurve(const ModelSplitting& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Multicurve mc;
  const auto& all = model.multicurve.curves;
  if (rng() % 2 == 0 && all.size() > 1) {
    const std::size_t keep = 1 + rng() % (all.size() - 1);
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t i = 0; i < keep; ++i) mc.curves.push_back(all[order[i]]);
    return mc;
  }
  const int want = 1 + static_cast<int>(rng() % 3);
  std::set<int> avoid;
  for (int attempt = 0; attempt < 50 && static_cast<int>(mc.curves.size()) < want; ++attempt) {
    auto cycle = random_cycle(model.surface, rng, avoid);
    if (!cycle) continue;
    for (const std::string& label : *cycle) {
      const int e = model.surface.edge_id(parse_label(label).name);
      avoid.insert(model.surface.tail(e));
      avoid.insert(model.surface.head(e));
    }
    mc.curves.push_back(std::move(*cycle));
  }
  if (mc.curves.empty()) mc.curves.push_back(all.front());
  return mc;
}

inline nlohmann::json splitting_to_json(const ModelSplitting& m) {
  return {{"d", m.d}, {"faces", m.surface.faces()}, {"curves", m.multicurve.curves}, {"retained", m.multicurve.retained}};
}

struct SplittingInput {
  RibbonSurface surface;
  Multicurve multicurve;
  std::optional<int> d;
};

inline SplittingInput splitting_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("faces") || !j.contains("curves")) {
    throw std::invalid_argument("splitting JSON needs 'faces' and 'curves'");
  }
  SplittingInput in{build_surface(j.at("faces").get<std::vector<Word>>()), {}, std::nullopt};
  in.multicurve.curves = j.at("curves").get<std::vector<Word>>();
  if (j.contains("retained")) in.multicurve.retained = j.at("retained").get<std::vector<Word>>();
  if (j.contains("d")) in.d = j.at("d").get<int>();
  return in;
}

inline nlohmann::json certificate_to_json(const SplittingCertificate& c) {
  nlohmann::json clauses = nlohmann::json::array();
  for (const auto& cl : c.clauses) clauses.push_back({{"name", cl.name}, {"pass", cl.pass}, {"detail", cl.detail}});
  return {{"d", c.d}, {"pass", c.pass}, {"failed_clause", c.failed_clause}, {"clauses", clauses}};
}

}  // namespace symplab
