// Gentle-algebra presentations: quiver + length-2 monomial relations, the
// gentleness and finiteness checks, the cache of nonzero paths, maximal
// paths, and the trivial-extension presentation.
//
// Module convention used throughout the library (fixed once, here):
// modules are RIGHT modules.  The indecomposable projective P_i has basis
// the nonzero paths with source i.  A module morphism P_i -> P_j is left
// multiplication by a nonzero path from j to i.  Consequently the
// coefficient matrix A_w attached to a path w : i -> j in a differential
// module has shape d_i x d_j and describes the component of the map going
// from the P_j-block into the P_i-block.

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gentle/scalar.hpp"

namespace gentle {

struct ParseError : ValidationError {
    using ValidationError::ValidationError;
};

struct ParseOptions {
    bool require_finite_gldim = true;  // relaxed only for negative tests
};

struct Quiver {
    std::vector<std::string> vertex_names;          // sorted
    std::vector<std::string> arrow_names;           // sorted
    std::vector<int> arrow_src, arrow_tgt;          // per arrow id, vertex ids

    int vertex_count() const { return static_cast<int>(vertex_names.size()); }
    int arrow_count() const { return static_cast<int>(arrow_names.size()); }

    int vertex_id(const std::string& name) const {
        auto it = std::lower_bound(vertex_names.begin(), vertex_names.end(), name);
        if (it == vertex_names.end() || *it != name) return -1;
        return static_cast<int>(it - vertex_names.begin());
    }
    int arrow_id(const std::string& name) const {
        auto it = std::lower_bound(arrow_names.begin(), arrow_names.end(), name);
        if (it == arrow_names.end() || *it != name) return -1;
        return static_cast<int>(it - arrow_names.begin());
    }
};

// A path in the quiver: either trivial (anchored at a vertex) or a list of
// composable arrows.  Paths are interned in the presentation; code mostly
// passes path ids.
struct PathData {
    int src = -1;
    int tgt = -1;
    std::vector<int> arrows;  // empty for a trivial path

    int length() const { return static_cast<int>(arrows.size()); }
    bool trivial() const { return arrows.empty(); }
};

class GentlePresentation {
  public:
    Quiver quiver;
    std::vector<std::pair<int, int>> relations;          // sorted pairs of arrow ids
    std::vector<PathData> paths;                          // all nonzero paths, canonical order
    std::vector<int> maximal_alg;                         // path ids
    std::vector<int> maximal_geo;                         // path ids
    bool finite_gldim = true;                             // false only under the relaxed option

    // ---- lookups -------------------------------------------------------

    bool is_relation(int a, int b) const {
        return std::binary_search(relations.begin(), relations.end(), std::make_pair(a, b));
    }

    int path_count() const { return static_cast<int>(paths.size()); }
    const PathData& path(int id) const { return paths[id]; }
    int trivial_path(int vertex) const { return trivial_of_[vertex]; }

    // id of the path with the given arrows, or -1 when zero / unknown
    int find_path(int src, const std::vector<int>& arrows) const {
        auto it = path_index_.find(PathKey{src, arrows});
        return it == path_index_.end() ? -1 : it->second;
    }

    // concatenation u.v as a path id, or -1 when zero or not composable
    int compose(int u, int v) const {
        if (paths[u].tgt != paths[v].src) return -1;
        std::vector<int> arrows = paths[u].arrows;
        arrows.insert(arrows.end(), paths[v].arrows.begin(), paths[v].arrows.end());
        return find_path(paths[u].src, arrows);
    }

    // all two-sided factorizations w = u.v into nonzero paths (trivial ends
    // included); precomputed
    const std::vector<std::pair<int, int>>& splits(int w) const { return splits_[w]; }

    const std::vector<int>& paths_from(int vertex) const { return by_source_[vertex]; }
    const std::vector<int>& paths_into(int vertex) const { return by_target_[vertex]; }

    int dim_projective(int vertex) const { return static_cast<int>(by_source_[vertex].size()); }
    int total_dim() const { return path_count(); }

    // unique maximal path containing a nontrivial nonzero path, split as
    // prefix / the path / suffix
    struct MaximalSplit {
        int whole = -1, prefix = -1, suffix = -1;
        int prefix_len = 0;
    };
    const MaximalSplit& maximal_path_of(int path_id) const {
        if (paths[path_id].trivial())
            throw ValidationError("maximal path split is only defined for nontrivial paths");
        return msplit_[path_id];
    }

    // number of times the vertex occurs along the path (trivial path: once)
    static int occurrences_on(const PathData& p, int vertex, const Quiver& q) {
        if (p.trivial()) return p.src == vertex ? 1 : 0;
        int n = 0;
        if (q.arrow_src[p.arrows.front()] == vertex) ++n;
        for (int a : p.arrows)
            if (q.arrow_tgt[a] == vertex) ++n;
        return n;
    }

    // ---- literals ------------------------------------------------------

    std::string path_literal(int id) const;
    // parses "ab'"-style concatenated arrow names, or "@v" for the trivial
    // path at v; throws on zero paths and on ambiguous tokenizations
    int parse_path_literal(const std::string& text) const;

    std::string serialize() const;

    // ---- construction --------------------------------------------------

    static GentlePresentation parse(const std::string& text, ParseOptions opt = {});
    static GentlePresentation from_parts(std::vector<std::string> vertices,
                                         std::vector<std::tuple<std::string, std::string, std::string>> arrows,
                                         std::vector<std::pair<std::string, std::string>> rels,
                                         ParseOptions opt = {});

  private:
    struct PathKey {
        int src;
        std::vector<int> arrows;
        bool operator<(const PathKey& o) const {
            if (src != o.src) return src < o.src;
            return arrows < o.arrows;
        }
    };

    std::map<PathKey, int> path_index_;
    std::vector<int> trivial_of_;
    std::vector<std::vector<int>> by_source_, by_target_;
    std::vector<std::vector<std::pair<int, int>>> splits_;
    std::vector<MaximalSplit> msplit_;

    void validate_gentle(bool require_finite_gldim);
    void build_caches();
};

// ---- trivial extension ---------------------------------------------------

// Presentation of the trivial extension: the base quiver with one
// square-zero loop per vertex and the loop/arrow commutation relations.
// Kept as data plus the enforced dimension law.
struct TrivialExtensionPresentation {
    Quiver quiver;                                        // base quiver plus one loop per vertex
    std::vector<std::string> loop_names;                  // per base vertex id
    std::vector<std::pair<std::string, std::string>> monomial_relations;
    // pairs of identified length-2 paths (eps_i a  =  a eps_j), arrow names
    std::vector<std::pair<std::pair<std::string, std::string>, std::pair<std::string, std::string>>>
        commutation_relations;
    int dimension = 0;

    std::string serialize() const;
};

TrivialExtensionPresentation trivial_extension(const GentlePresentation& A);

// ==========================================================================
// implementation
// ==========================================================================

namespace detail {

// canonical path order: length, then trivial paths by vertex name, then
// arrow-name sequences lexicographically
struct PathOrder {
    const Quiver* q;
    bool operator()(const PathData& a, const PathData& b) const {
        if (a.length() != b.length()) return a.length() < b.length();
        if (a.trivial()) return q->vertex_names[a.src] < q->vertex_names[b.src];
        for (std::size_t i = 0; i < a.arrows.size(); ++i) {
            const std::string& x = q->arrow_names[a.arrows[i]];
            const std::string& y = q->arrow_names[b.arrows[i]];
            if (x != y) return x < y;
        }
        return false;
    }
};

}  // namespace detail

inline GentlePresentation GentlePresentation::parse(const std::string& text, ParseOptions opt) {
    std::vector<std::string> vertices;
    std::vector<std::tuple<std::string, std::string, std::string>> arrows;
    std::vector<std::pair<std::string, std::string>> rels;

    auto valid_name = [](const std::string& s) {
        if (s.empty()) return false;
        for (char c : s)
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) return false;
        return true;
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;
        auto fail = [&](const std::string& msg) {
            return ParseError("line " + std::to_string(lineno) + ": " + msg);
        };
        if (tok[0] == "vertex") {
            if (tok.size() != 2 || !valid_name(tok[1])) throw fail("expected 'vertex <name>'");
            vertices.push_back(tok[1]);
        } else if (tok[0] == "arrow") {
            if (tok.size() != 4 || !valid_name(tok[1]) || !valid_name(tok[2]) || !valid_name(tok[3]))
                throw fail("expected 'arrow <name> <src> <dst>'");
            arrows.emplace_back(tok[1], tok[2], tok[3]);
        } else if (tok[0] == "rel") {
            if (tok.size() != 3) throw fail("expected 'rel <arrow1> <arrow2>'");
            rels.emplace_back(tok[1], tok[2]);
        } else {
            throw fail("unknown directive '" + tok[0] + "'");
        }
    }
    return from_parts(std::move(vertices), std::move(arrows), std::move(rels), opt);
}

inline GentlePresentation GentlePresentation::from_parts(
    std::vector<std::string> vertices,
    std::vector<std::tuple<std::string, std::string, std::string>> arrows,
    std::vector<std::pair<std::string, std::string>> rels, ParseOptions opt) {
    GentlePresentation A;
    std::sort(vertices.begin(), vertices.end());
    if (std::adjacent_find(vertices.begin(), vertices.end()) != vertices.end())
        throw ValidationError("duplicate vertex name");
    if (vertices.empty()) throw ValidationError("empty quiver");
    A.quiver.vertex_names = vertices;

    std::sort(arrows.begin(), arrows.end());
    for (std::size_t i = 0; i + 1 < arrows.size(); ++i)
        if (std::get<0>(arrows[i]) == std::get<0>(arrows[i + 1]))
            throw ValidationError("duplicate arrow name '" + std::get<0>(arrows[i]) + "'");
    for (const auto& [name, src, dst] : arrows) {
        int s = A.quiver.vertex_id(src), t = A.quiver.vertex_id(dst);
        if (s < 0) throw ValidationError("arrow '" + name + "': unknown vertex '" + src + "'");
        if (t < 0) throw ValidationError("arrow '" + name + "': unknown vertex '" + dst + "'");
        A.quiver.arrow_names.push_back(name);
        A.quiver.arrow_src.push_back(s);
        A.quiver.arrow_tgt.push_back(t);
    }

    std::set<std::pair<int, int>> relset;
    for (const auto& [r1, r2] : rels) {
        int a = A.quiver.arrow_id(r1), b = A.quiver.arrow_id(r2);
        if (a < 0) throw ValidationError("relation names unknown arrow '" + r1 + "'");
        if (b < 0) throw ValidationError("relation names unknown arrow '" + r2 + "'");
        if (A.quiver.arrow_tgt[a] != A.quiver.arrow_src[b])
            throw ValidationError("relation '" + r1 + " " + r2 + "' is not a length-2 path");
        relset.insert({a, b});
    }
    A.relations.assign(relset.begin(), relset.end());

    A.validate_gentle(opt.require_finite_gldim);
    A.build_caches();
    return A;
}

inline void GentlePresentation::validate_gentle(bool require_finite_gldim) {
    const Quiver& q = quiver;
    int nv = q.vertex_count(), na = q.arrow_count();

    std::vector<int> indeg(nv, 0), outdeg(nv, 0);
    for (int a = 0; a < na; ++a) {
        ++outdeg[q.arrow_src[a]];
        ++indeg[q.arrow_tgt[a]];
    }
    for (int v = 0; v < nv; ++v) {
        if (indeg[v] > 2)
            throw ValidationError("not gentle: vertex '" + q.vertex_names[v] + "' has more than two incoming arrows");
        if (outdeg[v] > 2)
            throw ValidationError("not gentle: vertex '" + q.vertex_names[v] + "' has more than two outgoing arrows");
    }

    for (int a = 0; a < na; ++a) {
        int plain = 0, bound = 0;
        for (int b = 0; b < na; ++b) {
            if (q.arrow_src[b] != q.arrow_tgt[a]) continue;
            if (is_relation(a, b)) ++bound; else ++plain;
        }
        if (plain > 1)
            throw ValidationError("not gentle: arrow '" + q.arrow_names[a] + "' has two successors outside the relations");
        if (bound > 1)
            throw ValidationError("not gentle: arrow '" + q.arrow_names[a] + "' has two successors inside the relations");
        plain = bound = 0;
        for (int b = 0; b < na; ++b) {
            if (q.arrow_tgt[b] != q.arrow_src[a]) continue;
            if (is_relation(b, a)) ++bound; else ++plain;
        }
        if (plain > 1)
            throw ValidationError("not gentle: arrow '" + q.arrow_names[a] + "' has two predecessors outside the relations");
        if (bound > 1)
            throw ValidationError("not gentle: arrow '" + q.arrow_names[a] + "' has two predecessors inside the relations");
    }

    if (nv > 1) {
        std::vector<char> seen(nv, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int a = 0; a < na; ++a) {
                int other = -1;
                if (q.arrow_src[a] == v) other = q.arrow_tgt[a];
                else if (q.arrow_tgt[a] == v) other = q.arrow_src[a];
                if (other >= 0 && !seen[other]) {
                    seen[other] = 1;
                    stack.push_back(other);
                }
            }
        }
        for (int v = 0; v < nv; ++v)
            if (!seen[v]) throw ValidationError("disconnected quiver");
    }

    // cycle detection on the arrow-composition graphs
    auto has_cycle = [&](auto edge_ok) {
        std::vector<int> state(na, 0);  // 0 new, 1 on stack, 2 done
        auto visit = [&](auto&& self, int v) -> bool {
            state[v] = 1;
            for (int b = 0; b < na; ++b) {
                if (q.arrow_src[b] != q.arrow_tgt[v] || !edge_ok(v, b)) continue;
                if (state[b] == 1) return true;
                if (state[b] == 0 && self(self, b)) return true;
            }
            state[v] = 2;
            return false;
        };
        for (int a = 0; a < na; ++a)
            if (state[a] == 0 && visit(visit, a)) return true;
        return false;
    };
    if (has_cycle([&](int a, int b) { return !is_relation(a, b); }))
        throw ValidationError("infinite-dimensional: a relation-free cycle exists");
    finite_gldim = !has_cycle([&](int a, int b) { return is_relation(a, b); });
    if (require_finite_gldim && !finite_gldim)
        throw ValidationError("infinite global dimension: a full-relation cycle exists");
}

inline void GentlePresentation::build_caches() {
    const Quiver& q = quiver;
    std::vector<PathData> all;
    for (int v = 0; v < q.vertex_count(); ++v) all.push_back(PathData{v, v, {}});
    std::vector<PathData> frontier;
    for (int a = 0; a < q.arrow_count(); ++a)
        frontier.push_back(PathData{q.arrow_src[a], q.arrow_tgt[a], {a}});
    while (!frontier.empty()) {
        all.insert(all.end(), frontier.begin(), frontier.end());
        if (all.size() > 3000) throw ValidationError("presentation too large for desk-scale tooling");
        std::vector<PathData> next;
        for (const auto& p : frontier) {
            for (int b = 0; b < q.arrow_count(); ++b) {
                if (q.arrow_src[b] != p.tgt || is_relation(p.arrows.back(), b)) continue;
                PathData ext = p;
                ext.arrows.push_back(b);
                ext.tgt = q.arrow_tgt[b];
                next.push_back(std::move(ext));
            }
        }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end(), detail::PathOrder{&q});
    paths = std::move(all);

    path_index_.clear();
    for (int i = 0; i < path_count(); ++i) path_index_[PathKey{paths[i].src, paths[i].arrows}] = i;

    trivial_of_.assign(q.vertex_count(), -1);
    by_source_.assign(q.vertex_count(), {});
    by_target_.assign(q.vertex_count(), {});
    for (int i = 0; i < path_count(); ++i) {
        if (paths[i].trivial()) trivial_of_[paths[i].src] = i;
        by_source_[paths[i].src].push_back(i);
        by_target_[paths[i].tgt].push_back(i);
    }

    splits_.assign(path_count(), {});
    for (int w = 0; w < path_count(); ++w) {
        const PathData& p = paths[w];
        for (int cut = 0; cut <= p.length(); ++cut) {
            std::vector<int> pre(p.arrows.begin(), p.arrows.begin() + cut);
            std::vector<int> suf(p.arrows.begin() + cut, p.arrows.end());
            int mid = cut == 0 ? p.src : q.arrow_tgt[p.arrows[cut - 1]];
            int u = pre.empty() ? trivial_of_[p.src] : find_path(p.src, pre);
            int v = suf.empty() ? trivial_of_[p.tgt] : find_path(mid, suf);
            if (u < 0 || v < 0) throw InternalError("subpath of a nonzero path is zero");
            splits_[w].push_back({u, v});
        }
    }

    // maximal paths: not extendable on either side; trivial ones only at
    // isolated vertices
    maximal_alg.clear();
    for (int i = 0; i < path_count(); ++i) {
        const PathData& p = paths[i];
        bool extendable = false;
        if (p.trivial()) {
            for (int a = 0; a < q.arrow_count() && !extendable; ++a)
                if (q.arrow_src[a] == p.src || q.arrow_tgt[a] == p.src) extendable = true;
        } else {
            for (int a = 0; a < q.arrow_count() && !extendable; ++a) {
                if (q.arrow_src[a] == p.tgt && !is_relation(p.arrows.back(), a)) extendable = true;
                if (q.arrow_tgt[a] == p.src && !is_relation(a, p.arrows.front())) extendable = true;
            }
        }
        if (!extendable) maximal_alg.push_back(i);
    }

    // locate every nontrivial path inside its unique maximal path
    msplit_.assign(path_count(), MaximalSplit{});
    std::vector<int> hits(path_count(), 0);
    for (int m : maximal_alg) {
        const PathData& w = paths[m];
        for (int off = 0; off < w.length(); ++off) {
            int mid_src = off == 0 ? w.src : q.arrow_tgt[w.arrows[off - 1]];
            for (int len = 1; off + len <= w.length(); ++len) {
                std::vector<int> sub(w.arrows.begin() + off, w.arrows.begin() + off + len);
                int id = find_path(mid_src, sub);
                if (id < 0) throw InternalError("maximal path has a zero subpath");
                ++hits[id];
                MaximalSplit& sp = msplit_[id];
                sp.whole = m;
                sp.prefix_len = off;
                std::vector<int> pre(w.arrows.begin(), w.arrows.begin() + off);
                std::vector<int> suf(w.arrows.begin() + off + len, w.arrows.end());
                sp.prefix = pre.empty() ? trivial_of_[w.src] : find_path(w.src, pre);
                int mid_tgt = q.arrow_tgt[sub.back()];
                sp.suffix = suf.empty() ? trivial_of_[mid_tgt] : find_path(mid_tgt, suf);
            }
        }
    }
    for (int i = 0; i < path_count(); ++i) {
        if (paths[i].trivial()) continue;
        if (hits[i] != 1)
            throw InternalError("path '" + path_literal(i) + "' lies in " + std::to_string(hits[i]) +
                                " maximal paths");
    }

    // geometric maximal set: add e_v for vertices occurring exactly once
    std::set<int> geo(maximal_alg.begin(), maximal_alg.end());
    for (int v = 0; v < q.vertex_count(); ++v) {
        int occ = 0;
        for (int m : maximal_alg) occ += occurrences_on(paths[m], v, q);
        if (occ == 0) throw InternalError("vertex '" + q.vertex_names[v] + "' misses all maximal paths");
        if (occ > 2) throw InternalError("vertex '" + q.vertex_names[v] + "' occurs " + std::to_string(occ) +
                                         " times on maximal paths");
        if (occ == 1) geo.insert(trivial_of_[v]);
    }
    maximal_geo.assign(geo.begin(), geo.end());
}

inline std::string GentlePresentation::path_literal(int id) const {
    const PathData& p = paths[id];
    if (p.trivial()) return "@" + quiver.vertex_names[p.src];
    std::string s;
    for (int a : p.arrows) s += quiver.arrow_names[a];
    return s;
}

inline int GentlePresentation::parse_path_literal(const std::string& text) const {
    if (text.empty()) throw ValidationError("empty path literal");
    if (text[0] == '@') {
        int v = quiver.vertex_id(text.substr(1));
        if (v < 0) throw ValidationError("unknown vertex in path literal '" + text + "'");
        return trivial_of_[v];
    }
    std::set<std::vector<int>> found;
    std::vector<int> current;
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == text.size()) {
            if (!current.empty()) found.insert(current);
            return;
        }
        for (int a = 0; a < quiver.arrow_count(); ++a) {
            const std::string& n = quiver.arrow_names[a];
            if (text.compare(pos, n.size(), n) != 0) continue;
            if (!current.empty() && quiver.arrow_tgt[current.back()] != quiver.arrow_src[a]) continue;
            current.push_back(a);
            self(self, pos + n.size());
            current.pop_back();
        }
    };
    rec(rec, 0);
    if (found.empty()) throw ValidationError("path literal '" + text + "' matches no composable arrow sequence");
    if (found.size() > 1) throw ValidationError("path literal '" + text + "' is ambiguous");
    const std::vector<int>& arrows = *found.begin();
    int id = find_path(quiver.arrow_src[arrows.front()], arrows);
    if (id < 0) throw ValidationError("path literal '" + text + "' names a zero path");
    return id;
}

inline std::string GentlePresentation::serialize() const {
    std::string out;
    for (const auto& v : quiver.vertex_names) out += "vertex " + v + "\n";
    for (int a = 0; a < quiver.arrow_count(); ++a)
        out += "arrow " + quiver.arrow_names[a] + " " + quiver.vertex_names[quiver.arrow_src[a]] + " " +
               quiver.vertex_names[quiver.arrow_tgt[a]] + "\n";
    for (const auto& [a, b] : relations)
        out += "rel " + quiver.arrow_names[a] + " " + quiver.arrow_names[b] + "\n";
    return out;
}

inline TrivialExtensionPresentation trivial_extension(const GentlePresentation& A) {
    TrivialExtensionPresentation T;
    const Quiver& q = A.quiver;
    T.quiver = q;
    for (int v = 0; v < q.vertex_count(); ++v) {
        std::string name = "eps_" + q.vertex_names[v];
        while (q.arrow_id(name) >= 0) name += "_";
        T.loop_names.push_back(name);
        T.quiver.arrow_names.push_back(name);
        T.quiver.arrow_src.push_back(v);
        T.quiver.arrow_tgt.push_back(v);
        T.monomial_relations.emplace_back(name, name);
    }
    for (const auto& [a, b] : A.relations)
        T.monomial_relations.emplace_back(q.arrow_names[a], q.arrow_names[b]);
    for (int a = 0; a < q.arrow_count(); ++a)
        T.commutation_relations.push_back(
            {{T.loop_names[q.arrow_src[a]], q.arrow_names[a]}, {q.arrow_names[a], T.loop_names[q.arrow_tgt[a]]}});

    // dimension law: normal forms are w or w.eps_{t(w)} for w a nonzero path
    // of the base algebra, so exactly twice the base dimension
    T.dimension = 2 * A.total_dim();
    return T;
}

inline std::string TrivialExtensionPresentation::serialize() const {
    std::string out;
    for (const auto& v : quiver.vertex_names) out += "vertex " + v + "\n";
    for (int a = 0; a < quiver.arrow_count(); ++a)
        out += "arrow " + quiver.arrow_names[a] + " " + quiver.vertex_names[quiver.arrow_src[a]] + " " +
               quiver.vertex_names[quiver.arrow_tgt[a]] + "\n";
    for (const auto& [x, y] : monomial_relations) out += "rel " + x + " " + y + "\n";
    for (const auto& [l, r] : commutation_relations)
        out += "comm " + l.first + " " + l.second + " = " + r.first + " " + r.second + "\n";
    return out;
}

}  // namespace gentle
