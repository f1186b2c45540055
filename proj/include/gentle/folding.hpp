// Bounded complexes of projectives and the folding functor onto
// differential modules: fold stacks all terms into one projective and sums
// the differentials.  String and band complexes realize graded curve data;
// folding them reproduces the string and band modules.

#pragma once

#include "gentle/hom.hpp"
#include "gentle/string_band.hpp"

namespace gentle {

template <class F>
struct ProjComplex {
    using Elt = typename F::Elt;

    AlgebraPtr alg;
    F fld;
    std::map<int, std::vector<int>> terms;  // degree -> multiplicities per vertex
    // degree n -> coefficients of d^n : term n -> term n+1; the coefficient
    // of a path w has rows indexed by term-(n+1) copies at s(w) and columns
    // by term-n copies at t(w)
    std::map<int, CoefMap<F>> diffs;

    ProjComplex() = default;
    ProjComplex(AlgebraPtr a, F f) : alg(std::move(a)), fld(f) {}

    int term_mult(int deg, int vertex) const {
        auto it = terms.find(deg);
        return it == terms.end() ? 0 : it->second[vertex];
    }

    int term_dim(int deg) const {
        auto it = terms.find(deg);
        if (it == terms.end()) return 0;
        int d = 0;
        for (int v = 0; v < alg->quiver.vertex_count(); ++v) d += it->second[v] * alg->dim_projective(v);
        return d;
    }

    int total_dim() const {
        int d = 0;
        for (const auto& [deg, m] : terms) d += term_dim(deg);
        return d;
    }

    void validate() const {
        const GentlePresentation& A = *alg;
        for (const auto& [deg, dmap] : diffs) {
            for (const auto& [w, m] : dmap) {
                const PathData& p = A.path(w);
                if (m.rows != term_mult(deg + 1, p.src) || m.cols != term_mult(deg, p.tgt))
                    throw ValidationError("differential coefficient shape mismatch at degree " +
                                          std::to_string(deg));
            }
        }
        // d o d = 0, one check per (degree, path)
        for (const auto& [deg, dmap] : diffs) {
            auto above = diffs.find(deg + 1);
            if (above == diffs.end()) continue;
            for (int w = 0; w < A.path_count(); ++w) {
                int rows = term_mult(deg + 2, A.path(w).src);
                int cols = term_mult(deg, A.path(w).tgt);
                if (rows == 0 || cols == 0) continue;
                Mat<F> sum(fld, rows, cols);
                bool any = false;
                for (auto [u, v] : A.splits(w)) {
                    auto iu = above->second.find(u);
                    auto iv = dmap.find(v);
                    if (iu == above->second.end() || iv == dmap.end()) continue;
                    sum = sum + iu->second * iv->second;
                    any = true;
                }
                if (any && !sum.is_zero())
                    throw ValidationError("differential does not square to zero at degree " + std::to_string(deg));
            }
        }
    }

    // shift by k: term n of the result is term n+k of the input, and each
    // shift by one negates the differential
    ProjComplex shifted(int k) const {
        ProjComplex out(alg, fld);
        for (const auto& [deg, m] : terms) out.terms[deg - k] = m;
        bool flip = (k % 2) != 0;
        for (const auto& [deg, dmap] : diffs) {
            CoefMap<F> moved;
            for (const auto& [w, m] : dmap) moved.emplace(w, flip ? -m : m);
            out.diffs[deg - k] = std::move(moved);
        }
        return out;
    }

    std::string dump() const {
        std::ostringstream out;
        for (const auto& [deg, m] : terms)
            for (int v = 0; v < alg->quiver.vertex_count(); ++v)
                if (m[v] > 0) out << "dim " << deg << " " << alg->quiver.vertex_names[v] << "=" << m[v] << "\n";
        for (const auto& [deg, dmap] : diffs)
            for (const auto& [w, m] : dmap) {
                out << "coef " << deg << " " << alg->path_literal(w) << " " << m.rows << "x" << m.cols << "\n";
                out << m.str();
            }
        return out.str();
    }
};

// Fold: stack the terms (degrees ascending) and sum the differentials.
// Copies of a vertex are ordered by (degree, position within the term).
template <class F>
DiffMod<F> fold(const ProjComplex<F>& P) {
    P.validate();
    const GentlePresentation& A = *P.alg;
    int nv = A.quiver.vertex_count();
    DiffMod<F> m(P.alg, P.fld);

    std::map<std::pair<int, int>, int> offset;  // (degree, vertex) -> first copy index
    for (const auto& [deg, tm] : P.terms)
        for (int v = 0; v < nv; ++v) {
            offset[{deg, v}] = m.mult[v];
            m.mult[v] += tm[v];
        }
    for (const auto& [deg, dmap] : P.diffs) {
        for (const auto& [w, mat] : dmap) {
            const PathData& p = A.path(w);
            int ro = offset.at({deg + 1, p.src});
            int co = offset.at({deg, p.tgt});
            for (int r = 0; r < mat.rows; ++r)
                for (int c = 0; c < mat.cols; ++c)
                    if (!P.fld.is_zero(mat.at(r, c))) m.add_coef_entry(w, ro + r, co + c, mat.at(r, c));
        }
    }
    if (m.square_defect() >= 0) throw InternalError("fold broke the square-zero law");
    return m;
}

// One-term complex P_v in the given degree.
template <class F>
ProjComplex<F> stalk_complex(AlgebraPtr alg, F fld, int vertex, int degree) {
    ProjComplex<F> P(alg, fld);
    std::vector<int> m(alg->quiver.vertex_count(), 0);
    m[vertex] = 1;
    P.terms[degree] = m;
    return P;
}

namespace detail {

// shared builder: crossings with degrees, letters with an optional wrap
// parameter matrix
template <class F>
ProjComplex<F> graded_complex(AlgebraPtr alg, F fld, const std::vector<Letter>& letters,
                              const std::vector<int>& crossing_vertex, const std::vector<int>& degree,
                              const Mat<F>* wrap_param) {
    const GentlePresentation& A = *alg;
    int nv = A.quiver.vertex_count();
    int n = static_cast<int>(crossing_vertex.size());
    int d = wrap_param ? wrap_param->rows : 1;

    ProjComplex<F> P(alg, fld);
    // copy index of crossing i within its (degree, vertex) block, jordan-major last
    std::vector<int> copy(n, 0);
    for (int i = 0; i < n; ++i) {
        auto& tm = P.terms[degree[i]];
        if (tm.empty()) tm.assign(nv, 0);
        copy[i] = tm[crossing_vertex[i]];
        tm[crossing_vertex[i]] += d;
    }
    auto add_entry = [&](int w, int src_deg, int row, int col, const typename F::Elt& val) {
        const PathData& p = A.path(w);
        auto& dmap = P.diffs[src_deg];
        auto it = dmap.find(w);
        if (it == dmap.end())
            it = dmap.emplace(w, Mat<F>(fld, P.term_mult(src_deg + 1, p.src), P.term_mult(src_deg, p.tgt))).first;
        it->second.at(row, col) = fld.add(it->second.at(row, col), val);
    };

    int r = static_cast<int>(letters.size());
    for (int i = 0; i < r; ++i) {
        const Letter& l = letters[i];
        int from = i, to = (i + 1) % n;
        bool wrap = wrap_param && i == r - 1;
        // module map direction: direct letters map the later crossing's
        // block to the earlier one
        int src_cross = l.inverse ? from : to;
        int dst_cross = l.inverse ? to : from;
        int src_deg = degree[src_cross];
        if (degree[dst_cross] != src_deg + 1) throw InternalError("grading step mismatch in complex builder");
        for (int a = 0; a < d; ++a)
            for (int c = 0; c < d; ++c) {
                typename F::Elt val = wrap ? wrap_param->at(a, c) : (a == c ? fld.one() : fld.zero());
                if (fld.is_zero(val)) continue;
                // parameter rows index the map's target copies
                add_entry(l.path, src_deg, copy[dst_cross] + a, copy[src_cross] + c, val);
            }
    }
    for (auto& [deg, dmap] : P.diffs)
        for (auto it = dmap.begin(); it != dmap.end();)
            it = it->second.is_zero() ? dmap.erase(it) : std::next(it);
    P.validate();
    return P;
}

}  // namespace detail

// Complex of a graded string; the grading is pinned by its anchor value at
// the first crossing.  The input is canonicalized together with the grading
// so that folding reproduces string_object exactly.
template <class F>
ProjComplex<F> string_complex(AlgebraPtr alg, F fld, const HomotopyString& input, const Grading& mu) {
    HomotopyString s = validate_string(*alg, input.letters);
    std::vector<int> vtx = string_crossings(*alg, s);
    if (mu.values.size() != vtx.size()) throw ValidationError("grading length mismatch");
    for (std::size_t i = 0; i + 1 < vtx.size(); ++i)
        if (mu.values[i + 1] - mu.values[i] != grading_step(s.letters[i]))
            throw ValidationError("grading violates the step rule at crossing " + std::to_string(i + 1));

    HomotopyString canon = canonical_string(s);
    std::vector<int> deg = mu.values;
    if (!(canon == s)) std::reverse(deg.begin(), deg.end());
    std::vector<int> cvtx = string_crossings(*alg, canon);
    return detail::graded_complex<F>(alg, fld, canon.letters, cvtx, deg, nullptr);
}

template <class F>
ProjComplex<F> string_complex(AlgebraPtr alg, F fld, const HomotopyString& s, int anchor) {
    HomotopyString v = validate_string(*alg, s.letters);
    return string_complex(alg, fld, v, string_grading(v, anchor));
}

// Complex of a graded band with module parameter J; requires winding zero.
template <class F>
ProjComplex<F> band_complex(AlgebraPtr alg, F fld, const HomotopyBand& input, const Mat<F>& J, int anchor) {
    HomotopyBand b = validate_band(*alg, input.letters);
    auto mu = band_grading(b, anchor);
    if (!mu) throw ValidationError("band is not gradable: winding number is " + std::to_string(winding(b)));
    if (!J.is_invertible()) throw ValidationError("band parameter must be invertible");
    std::vector<int> vtx = band_crossings(*alg, b);
    return detail::graded_complex<F>(alg, fld, b.letters, vtx, mu->values, &J);
}

}  // namespace gentle
