// Morphism spaces between differential modules.  A module map M -> N is a
// path-indexed family Psi_w of multiplicity matrices (shape d^N_{s(w)} x
// d^M_{t(w)}); it is a morphism of differential modules when it intertwines
// the differentials.  The intertwining condition is a finite exact linear
// system, solved here over the chosen field.

#pragma once

#include <map>
#include <vector>

#include "gentle/diffmod.hpp"

namespace gentle {

template <class F>
using CoefMap = std::map<int, Mat<F>>;  // path id -> matrix

// (f after g): composition of path-indexed maps, f's path first in the
// concatenation.
template <class F>
CoefMap<F> compose_maps(const GentlePresentation& A, const F& fld, const CoefMap<F>& f, const CoefMap<F>& g) {
    CoefMap<F> out;
    for (const auto& [u, fu] : f)
        for (const auto& [v, gv] : g) {
            int w = A.compose(u, v);
            if (w < 0) continue;
            Mat<F> prod = fu * gv;
            auto it = out.find(w);
            if (it == out.end()) out.emplace(w, std::move(prod));
            else it->second = it->second + prod;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

template <class F>
struct HomSpace {
    using Elt = typename F::Elt;

    AlgebraPtr alg;
    F fld;
    DiffMod<F> src, dst;

    std::vector<int> var_paths;                 // paths with a nonzero variable block
    std::vector<std::pair<int, int>> var_shape; // rows x cols per block
    std::vector<int> var_offset;
    int total_vars = 0;

    std::vector<std::vector<Elt>> basis;  // kernel vectors of the intertwining system
    std::vector<int> free_positions;      // coordinates of a vector in the span can be read here

    int dim() const { return static_cast<int>(basis.size()); }

    int var_index(int path) const {
        auto it = std::lower_bound(var_paths.begin(), var_paths.end(), path);
        if (it == var_paths.end() || *it != path) return -1;
        return static_cast<int>(it - var_paths.begin());
    }

    CoefMap<F> unflatten(const std::vector<Elt>& v) const {
        CoefMap<F> out;
        for (std::size_t k = 0; k < var_paths.size(); ++k) {
            auto [r, c] = var_shape[k];
            Mat<F> m(fld, r, c);
            bool nz = false;
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) {
                    m.at(i, j) = v[var_offset[k] + i * c + j];
                    nz = nz || !fld.is_zero(m.at(i, j));
                }
            if (nz) out.emplace(var_paths[k], std::move(m));
        }
        return out;
    }

    std::vector<Elt> flatten(const CoefMap<F>& f) const {
        std::vector<Elt> v(total_vars, fld.zero());
        for (const auto& [w, m] : f) {
            int k = var_index(w);
            if (k < 0) {
                if (!m.is_zero()) throw InternalError("map has a coefficient outside the variable layout");
                continue;
            }
            auto [r, c] = var_shape[k];
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < c; ++j) v[var_offset[k] + i * c + j] = m.at(i, j);
        }
        return v;
    }

    // coordinates w.r.t. the kernel basis, valid for vectors inside the span
    std::vector<Elt> coords(const std::vector<Elt>& v) const {
        std::vector<Elt> x;
        x.reserve(free_positions.size());
        for (int pos : free_positions) x.push_back(v[pos]);
        return x;
    }

    std::vector<Elt> combine(const std::vector<Elt>& coeffs) const {
        std::vector<Elt> v(total_vars, fld.zero());
        for (std::size_t a = 0; a < basis.size(); ++a) {
            if (fld.is_zero(coeffs[a])) continue;
            for (int i = 0; i < total_vars; ++i) v[i] = fld.add(v[i], fld.mul(coeffs[a], basis[a][i]));
        }
        return v;
    }

    CoefMap<F> element(const std::vector<Elt>& coeffs) const { return unflatten(combine(coeffs)); }
};

template <class F>
HomSpace<F> hom_basis(const DiffMod<F>& M, const DiffMod<F>& N) {
    if (M.alg != N.alg) throw ValidationError("hom between modules over different presentations");
    const GentlePresentation& A = *M.alg;
    HomSpace<F> H;
    H.alg = M.alg;
    H.fld = M.fld;
    H.src = M;
    H.dst = N;

    for (int w = 0; w < A.path_count(); ++w) {
        int r = N.mult[A.path(w).src];
        int c = M.mult[A.path(w).tgt];
        if (r == 0 || c == 0) continue;
        H.var_paths.push_back(w);
        H.var_shape.push_back({r, c});
        H.var_offset.push_back(H.total_vars);
        H.total_vars += r * c;
    }

    // intertwining equations, one block per path
    int eq_rows = H.total_vars;  // equation blocks mirror the variable blocks
    Mat<F> sys(M.fld, eq_rows, H.total_vars);
    int eq_base = 0;
    for (std::size_t k = 0; k < H.var_paths.size(); ++k) {
        int w = H.var_paths[k];
        auto [a, b] = H.var_shape[k];
        for (auto [u, v] : A.splits(w)) {
            // Psi_u A^M_v contribution
            if (const Mat<F>* Av = M.coef_of(v)) {
                int ku = H.var_index(u);
                if (ku >= 0) {
                    int mrange = H.var_shape[ku].second;  // d^M_{t(u)}
                    for (int r = 0; r < a; ++r)
                        for (int c = 0; c < b; ++c)
                            for (int m = 0; m < mrange; ++m) {
                                int eq = eq_base + r * b + c;
                                int var = H.var_offset[ku] + r * mrange + m;
                                sys.at(eq, var) = M.fld.add(sys.at(eq, var), Av->at(m, c));
                            }
                }
            }
            // -A^N_u Psi_v contribution
            if (const Mat<F>* Au = N.coef_of(u)) {
                int kv = H.var_index(v);
                if (kv >= 0) {
                    int mrange = H.var_shape[kv].first;  // d^N_{s(v)}
                    for (int r = 0; r < a; ++r)
                        for (int c = 0; c < b; ++c)
                            for (int m = 0; m < mrange; ++m) {
                                int eq = eq_base + r * b + c;
                                int var = H.var_offset[kv] + m * b + c;
                                sys.at(eq, var) = M.fld.sub(sys.at(eq, var), Au->at(r, m));
                            }
                }
            }
        }
        eq_base += a * b;
    }

    Mat<F> work = sys;
    std::vector<int> pivots = Mat<F>::rref(work);
    std::vector<bool> is_pivot(H.total_vars, false);
    for (int c : pivots) is_pivot[c] = true;
    for (int c = 0; c < H.total_vars; ++c) {
        if (is_pivot[c]) continue;
        std::vector<typename F::Elt> v(H.total_vars, M.fld.zero());
        v[c] = M.fld.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = M.fld.neg(work.at(static_cast<int>(r), c));
        H.free_positions.push_back(c);
        H.basis.push_back(std::move(v));
    }
    return H;
}

// Null-homotopic maps phi_N h + h phi_M, as flat vectors in the hom layout.
template <class F>
std::vector<std::vector<typename F::Elt>> homotopy_span(const HomSpace<F>& H) {
    const GentlePresentation& A = *H.alg;
    const F& fld = H.fld;
    std::vector<std::vector<typename F::Elt>> span;
    for (std::size_t k = 0; k < H.var_paths.size(); ++k) {
        int u = H.var_paths[k];
        auto [rr, cc] = H.var_shape[k];
        for (int r = 0; r < rr; ++r)
            for (int c = 0; c < cc; ++c) {
                // h = unit matrix at (u, r, c)
                std::vector<typename F::Elt> v(H.total_vars, fld.zero());
                bool nonzero = false;
                for (const auto& [up, An] : H.dst.coef) {  // phi_N o h
                    int w = A.compose(up, u);
                    if (w < 0) continue;
                    int kw = H.var_index(w);
                    if (kw < 0) continue;
                    int wcols = H.var_shape[kw].second;
                    for (int i = 0; i < An.rows; ++i) {
                        if (fld.is_zero(An.at(i, r))) continue;
                        int pos = H.var_offset[kw] + i * wcols + c;
                        v[pos] = fld.add(v[pos], An.at(i, r));
                        nonzero = true;
                    }
                }
                for (const auto& [vp, Am] : H.src.coef) {  // h o phi_M
                    int w = A.compose(u, vp);
                    if (w < 0) continue;
                    int kw = H.var_index(w);
                    if (kw < 0) continue;
                    int wcols = H.var_shape[kw].second;
                    for (int j = 0; j < Am.cols; ++j) {
                        if (fld.is_zero(Am.at(c, j))) continue;
                        int pos = H.var_offset[kw] + r * wcols + j;
                        v[pos] = fld.add(v[pos], Am.at(c, j));
                        nonzero = true;
                    }
                }
                if (nonzero) span.push_back(std::move(v));
            }
    }
    return span;
}

template <class F>
struct StableHom {
    int hom_dim = 0;
    int homotopy_dim = 0;
    int stable_dim = 0;
    std::vector<CoefMap<F>> quotient_basis;  // hom basis elements spanning the quotient
};

template <class F>
StableHom<F> stable_hom(const DiffMod<F>& M, const DiffMod<F>& N) {
    HomSpace<F> H = hom_basis(M, N);
    auto span = homotopy_span(H);
    StableHom<F> out;
    out.hom_dim = H.dim();
    if (H.total_vars == 0) return out;

    // incremental row reduction: first the homotopy span, then hom basis
    Mat<F> rows(M.fld, static_cast<int>(span.size() + H.basis.size()), H.total_vars);
    int r = 0;
    for (const auto& v : span) {
        for (int j = 0; j < H.total_vars; ++j) rows.at(r, j) = v[j];
        ++r;
    }
    Mat<F> span_only(M.fld, static_cast<int>(span.size()), H.total_vars);
    for (int i = 0; i < span_only.rows; ++i)
        for (int j = 0; j < H.total_vars; ++j) span_only.at(i, j) = rows.at(i, j);
    out.homotopy_dim = span_only.rank();

    // pick hom basis vectors independent modulo the span
    Mat<F> acc = span_only;
    int current_rank = out.homotopy_dim;
    for (std::size_t a = 0; a < H.basis.size(); ++a) {
        Mat<F> trial(M.fld, acc.rows + 1, H.total_vars);
        for (int i = 0; i < acc.rows; ++i)
            for (int j = 0; j < H.total_vars; ++j) trial.at(i, j) = acc.at(i, j);
        for (int j = 0; j < H.total_vars; ++j) trial.at(acc.rows, j) = H.basis[a][j];
        if (trial.rank() > current_rank) {
            ++current_rank;
            out.quotient_basis.push_back(H.unflatten(H.basis[a]));
            acc = std::move(trial);
        }
    }
    out.stable_dim = static_cast<int>(out.quotient_basis.size());
    return out;
}

// ---- the endomorphism algebra in coordinates -------------------------------

template <class F>
struct EndAlgebra {
    using Elt = typename F::Elt;

    HomSpace<F> space;
    int h = 0;
    std::vector<Elt> id_coords;
    // kappa[a][b] = coordinates of f_a after f_b
    std::vector<std::vector<std::vector<Elt>>> kappa;

    std::vector<Elt> mul(const std::vector<Elt>& x, const std::vector<Elt>& y) const {
        const F& fld = space.fld;
        std::vector<Elt> out(h, fld.zero());
        for (int a = 0; a < h; ++a) {
            if (fld.is_zero(x[a])) continue;
            for (int b = 0; b < h; ++b) {
                if (fld.is_zero(y[b])) continue;
                Elt c = fld.mul(x[a], y[b]);
                for (int k = 0; k < h; ++k) out[k] = fld.add(out[k], fld.mul(c, kappa[a][b][k]));
            }
        }
        return out;
    }

    bool is_zero(const std::vector<Elt>& x) const {
        for (const auto& v : x)
            if (!space.fld.is_zero(v)) return false;
        return true;
    }
    bool eq(const std::vector<Elt>& x, const std::vector<Elt>& y) const {
        for (int i = 0; i < h; ++i)
            if (!space.fld.eq(x[i], y[i])) return false;
        return true;
    }
};

template <class F>
EndAlgebra<F> end_algebra(const DiffMod<F>& M) {
    EndAlgebra<F> E;
    E.space = hom_basis(M, M);
    E.h = E.space.dim();
    const F& fld = M.fld;

    CoefMap<F> ident;
    for (int v = 0; v < M.alg->quiver.vertex_count(); ++v)
        if (M.mult[v] > 0) ident[M.alg->trivial_path(v)] = Mat<F>::identity(fld, M.mult[v]);
    if (!M.is_zero_module()) {
        auto flat = E.space.flatten(ident);
        E.id_coords = E.space.coords(flat);
        if (E.space.combine(E.id_coords) != flat) throw InternalError("identity not in End basis span");
    }

    E.kappa.assign(E.h, std::vector<std::vector<typename F::Elt>>(E.h));
    for (int a = 0; a < E.h; ++a) {
        CoefMap<F> fa = E.space.unflatten(E.space.basis[a]);
        for (int b = 0; b < E.h; ++b) {
            CoefMap<F> fb = E.space.unflatten(E.space.basis[b]);
            CoefMap<F> prod = compose_maps(*M.alg, fld, fa, fb);
            auto flat = E.space.flatten(prod);
            E.kappa[a][b] = E.space.coords(flat);
            if (E.space.combine(E.kappa[a][b]) != flat)
                throw InternalError("End algebra is not closed under composition");
        }
    }
    return E;
}

}  // namespace gentle
