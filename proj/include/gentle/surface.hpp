// Marked dissected surface of a gentle presentation: one polygon per
// geometric maximal path, labeled edges glued in pairs, one marked boundary
// point per polygon.  Provides the CW invariants (Euler characteristic,
// boundary count, genus) and a deterministic SVG atlas rendering.

#pragma once

#include <cmath>
#include <sstream>

#include "gentle/string_band.hpp"

namespace gentle {

struct Polygon {
    int owner = -1;                // path id in maximal_geo
    std::vector<int> edge_labels;  // vertex ids v_0..v_n in traversal order (counterclockwise)
    // side sequence (ccw): the labeled sides, then the two halves of the
    // marked edge; the marked point is the corner between the two halves
    int side_count() const { return static_cast<int>(edge_labels.size()) + 2; }
    int marked_corner() const { return static_cast<int>(edge_labels.size()); }  // between half 1 and half 2
};

struct SurfaceModel {
    AlgebraPtr alg;
    std::vector<Polygon> polygons;
    // label -> list of (polygon, side) carrying it; size 2 glues, size 1
    // stays on the boundary (only in the arrowless degenerate case)
    std::vector<std::vector<std::pair<int, int>>> label_sides;
};

struct SurfaceInvariants {
    int euler = 0;
    int boundary_components = 0;
    int marked_points = 0;
    int genus = 0;
    int vertices = 0, edges = 0, faces = 0;
};

inline SurfaceModel build_surface(AlgebraPtr alg) {
    const GentlePresentation& A = *alg;
    SurfaceModel S;
    S.alg = alg;
    S.label_sides.assign(A.quiver.vertex_count(), {});
    for (int m : A.maximal_geo) {
        Polygon P;
        P.owner = m;
        const PathData& w = A.path(m);
        if (w.trivial()) {
            P.edge_labels = {w.src};
        } else {
            P.edge_labels.push_back(w.src);
            for (int a : w.arrows) P.edge_labels.push_back(A.quiver.arrow_tgt[a]);
        }
        int pidx = static_cast<int>(S.polygons.size());
        for (std::size_t s = 0; s < P.edge_labels.size(); ++s)
            S.label_sides[P.edge_labels[s]].push_back({pidx, static_cast<int>(s)});
        S.polygons.push_back(std::move(P));
    }
    bool arrowless = A.quiver.arrow_count() == 0;
    for (int v = 0; v < A.quiver.vertex_count(); ++v) {
        std::size_t n = S.label_sides[v].size();
        if (n == 2) continue;
        if (n == 1 && arrowless) continue;  // lone disk: the dissection edge stays on the boundary
        throw InternalError("label '" + A.quiver.vertex_names[v] + "' occurs on " + std::to_string(n) +
                            " polygon edges");
    }
    return S;
}

namespace detail {

struct UnionFind {
    std::vector<int> up;
    explicit UnionFind(int n) : up(n) {
        for (int i = 0; i < n; ++i) up[i] = i;
    }
    int find(int x) {
        while (up[x] != x) x = up[x] = up[up[x]];
        return x;
    }
    void unite(int a, int b) { up[find(a)] = find(b); }
};

struct SurfaceComplex {
    // corner ids per polygon: corner i sits between side i and side i+1
    std::vector<int> corner_base;
    int total_corners = 0;
    UnionFind uf{0};
    std::vector<std::pair<int, int>> boundary_sides;  // (polygon, side) left unglued
    int glued_pairs = 0;

    int corner_id(const SurfaceModel& S, int poly, int corner) const {
        int k = S.polygons[poly].side_count();
        return corner_base[poly] + ((corner % k) + k) % k;
    }
};

inline SurfaceComplex glue(const SurfaceModel& S) {
    SurfaceComplex C;
    C.corner_base.resize(S.polygons.size());
    for (std::size_t p = 0; p < S.polygons.size(); ++p) {
        C.corner_base[p] = C.total_corners;
        C.total_corners += S.polygons[p].side_count();
    }
    C.uf = UnionFind(C.total_corners);

    // side s of polygon p runs from corner (s-1) to corner s in ccw order;
    // gluing is orientation reversing: start meets end
    auto start_corner = [&](int p, int s) { return C.corner_id(S, p, s - 1); };
    auto end_corner = [&](int p, int s) { return C.corner_id(S, p, s); };

    std::vector<std::vector<std::pair<int, int>>> sides = S.label_sides;
    for (const auto& occs : sides) {
        if (occs.size() == 2) {
            auto [p1, s1] = occs[0];
            auto [p2, s2] = occs[1];
            C.uf.unite(start_corner(p1, s1), end_corner(p2, s2));
            C.uf.unite(end_corner(p1, s1), start_corner(p2, s2));
            ++C.glued_pairs;
        } else if (occs.size() == 1) {
            C.boundary_sides.push_back(occs[0]);
        }
    }
    // the two marked halves of every polygon stay on the boundary
    for (std::size_t p = 0; p < S.polygons.size(); ++p) {
        int n = static_cast<int>(S.polygons[p].edge_labels.size());
        C.boundary_sides.push_back({static_cast<int>(p), n});
        C.boundary_sides.push_back({static_cast<int>(p), n + 1});
    }
    return C;
}

}  // namespace detail

inline SurfaceInvariants surface_invariants(const SurfaceModel& S) {
    detail::SurfaceComplex C = detail::glue(S);
    SurfaceInvariants inv;
    inv.faces = static_cast<int>(S.polygons.size());
    inv.marked_points = inv.faces;

    std::set<int> classes;
    for (int c = 0; c < C.total_corners; ++c) classes.insert(C.uf.find(c));
    inv.vertices = static_cast<int>(classes.size());
    inv.edges = C.glued_pairs + static_cast<int>(C.boundary_sides.size());
    inv.euler = inv.vertices - inv.edges + inv.faces;

    // boundary components: connected components of the unglued sides along
    // shared corner classes
    std::map<int, int> class_index;
    for (int c : classes) class_index.emplace(c, static_cast<int>(class_index.size()));
    detail::UnionFind buf(static_cast<int>(C.boundary_sides.size()) + static_cast<int>(classes.size()));
    int nb = static_cast<int>(C.boundary_sides.size());
    for (int i = 0; i < nb; ++i) {
        auto [p, s] = C.boundary_sides[i];
        int a = class_index.at(C.uf.find(C.corner_id(S, p, s - 1)));
        int b = class_index.at(C.uf.find(C.corner_id(S, p, s)));
        buf.unite(i, nb + a);
        buf.unite(i, nb + b);
    }
    std::set<int> comps;
    for (int i = 0; i < nb; ++i) comps.insert(buf.find(i));
    inv.boundary_components = static_cast<int>(comps.size());

    int twog = 2 - inv.boundary_components - inv.euler;
    if (twog < 0 || twog % 2 != 0)
        throw InternalError("inconsistent Euler characteristic: chi=" + std::to_string(inv.euler) +
                            " b=" + std::to_string(inv.boundary_components));
    inv.genus = twog / 2;
    return inv;
}

// true when every corner of the glued complex lies on the boundary
inline bool finite_gldim_geometric(const SurfaceModel& S) {
    detail::SurfaceComplex C = detail::glue(S);
    std::set<int> on_boundary;
    for (auto [p, s] : C.boundary_sides) {
        on_boundary.insert(C.uf.find(C.corner_id(S, p, s - 1)));
        on_boundary.insert(C.uf.find(C.corner_id(S, p, s)));
    }
    for (int c = 0; c < C.total_corners; ++c)
        if (!on_boundary.count(C.uf.find(c))) return false;
    return true;
}

// ---- rendering --------------------------------------------------------------

// Deterministic polygon atlas: polygons in a row, labeled edges annotated
// with their vertex label and gluing partner, marked points as filled dots,
// curve letters as chords of their polygons.
inline std::string render_svg(const SurfaceModel& S, const std::vector<std::vector<Letter>>& curves = {}) {
    const GentlePresentation& A = *S.alg;
    const double R = 80.0, PAD = 40.0;
    auto fmt = [](double x) {
        long long r = std::llround(x);
        return std::to_string(r);
    };

    // polygon corner positions: corner i of a k-gon at angle offset
    auto corner_pos = [&](int poly, int corner, double radius) {
        int k = S.polygons[poly].side_count();
        double cx = PAD + R + poly * (2 * R + PAD);
        double cy = PAD + R;
        double ang = (2.0 * M_PI * corner) / k - M_PI / 2.0;
        return std::pair<double, double>{cx + radius * std::cos(ang), cy + radius * std::sin(ang)};
    };
    auto side_mid = [&](int poly, int side, double radius) {
        auto [x1, y1] = corner_pos(poly, side - 1 < 0 ? S.polygons[poly].side_count() - 1 : side - 1, radius);
        auto [x2, y2] = corner_pos(poly, side, radius);
        return std::pair<double, double>{(x1 + x2) / 2, (y1 + y2) / 2};
    };

    std::map<int, int> poly_of_maximal;  // maximal path id -> polygon index
    for (std::size_t p = 0; p < S.polygons.size(); ++p) poly_of_maximal[S.polygons[p].owner] = static_cast<int>(p);

    std::ostringstream out;
    double width = PAD + S.polygons.size() * (2 * R + PAD);
    double height = 2 * (PAD + R);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
        << "\" viewBox=\"0 0 " << fmt(width) << " " << fmt(height) << "\">\n";

    for (std::size_t p = 0; p < S.polygons.size(); ++p) {
        const Polygon& P = S.polygons[p];
        int k = P.side_count();
        out << "  <g id=\"polygon-" << p << "\">\n";
        out << "    <polygon class=\"face\" fill=\"none\" stroke=\"black\" points=\"";
        for (int c = 0; c < k; ++c) {
            auto [x, y] = corner_pos(static_cast<int>(p), c, R);
            if (c) out << ' ';
            out << fmt(x) << ',' << fmt(y);
        }
        out << "\"/>\n";
        out << "    <text class=\"owner\" x=\"" << fmt(PAD + R + p * (2 * R + PAD)) << "\" y=\"" << fmt(PAD / 2)
            << "\" text-anchor=\"middle\">" << A.path_literal(P.owner) << "</text>\n";
        for (std::size_t s = 0; s < P.edge_labels.size(); ++s) {
            auto [x, y] = side_mid(static_cast<int>(p), static_cast<int>(s), R * 1.15);
            int label = P.edge_labels[s];
            std::string partner;
            for (auto [q, t] : S.label_sides[label])
                if (q != static_cast<int>(p) || t != static_cast<int>(s))
                    partner = "P" + std::to_string(q) + "." + std::to_string(t);
            out << "    <text class=\"edge-label\" x=\"" << fmt(x) << "\" y=\"" << fmt(y)
                << "\" text-anchor=\"middle\">" << A.quiver.vertex_names[label]
                << (partner.empty() ? std::string(" (boundary)") : " (" + partner + ")") << "</text>\n";
        }
        auto [mx, my] = corner_pos(static_cast<int>(p), P.marked_corner(), R);
        out << "    <circle class=\"marked\" cx=\"" << fmt(mx) << "\" cy=\"" << fmt(my)
            << "\" r=\"4\" fill=\"green\"/>\n";
        out << "  </g>\n";
    }

    int curve_id = 0;
    for (const auto& curve : curves) {
        int seg = 0;
        for (const Letter& l : curve) {
            const auto& split = A.maximal_path_of(l.path);
            auto it = poly_of_maximal.find(split.whole);
            if (it == poly_of_maximal.end()) throw InternalError("letter's maximal path has no polygon");
            int p = it->second;
            int s1 = split.prefix_len;
            int s2 = split.prefix_len + A.path(l.path).length();
            auto [x1, y1] = side_mid(p, s1, R * 0.92);
            auto [x2, y2] = side_mid(p, s2, R * 0.92);
            out << "  <path class=\"curve\" id=\"curve-" << curve_id << "-seg-" << seg
                << "\" stroke=\"purple\" fill=\"none\" d=\"M " << fmt(x1) << ' ' << fmt(y1) << " L " << fmt(x2)
                << ' ' << fmt(y2) << "\"/>\n";
            ++seg;
        }
        ++curve_id;
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace gentle
