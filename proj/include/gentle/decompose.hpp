// Indecomposability certification, isomorphism testing, and full
// decomposition of differential modules over a prime field.
//
// Splitting strategy: sample endomorphisms, take the minimal polynomial in
// the endomorphism algebra, and turn any coprime factorization into an exact
// idempotent.  An idempotent is straightened to a coordinate projection by
// conjugation, which splits the module structurally.  Indecomposability is
// declared after a trial budget with no split, upgraded to a certificate by
// exhaustive idempotent search whenever the endomorphism algebra is small
// enough to sweep.

#pragma once

#include <optional>
#include <random>

#include "gentle/hom.hpp"
#include "gentle/poly.hpp"

namespace gentle {

enum class Cert { no, yes, inconclusive };

namespace detail {

constexpr int kFittingTrials = 64;
constexpr int kIsoTrials = 64;
constexpr double kExhaustiveBound = 1e6;
constexpr int kExhaustiveMaxDim = 8;

// minimal polynomial of x in the unital algebra E (low coefficients first,
// monic)
inline FpPoly minimal_polynomial(const EndAlgebra<GF>& E, const std::vector<GF::Elt>& x) {
    const GF& k = E.space.fld;
    int h = E.h;
    std::vector<std::vector<GF::Elt>> powers;  // coords of x^0, x^1, ...
    powers.push_back(E.id_coords);
    for (int deg = 1; deg <= h; ++deg) {
        powers.push_back(E.mul(powers.back(), x));
        // look for a dependence:  x^deg = sum c_i x^i
        Mat<GF> sys(k, h, deg);
        for (int i = 0; i < deg; ++i)
            for (int r = 0; r < h; ++r) sys.at(r, i) = powers[i][r];
        std::vector<GF::Elt> rhs(powers[deg].begin(), powers[deg].end());
        auto sol = sys.solve(rhs);
        if (!sol) continue;
        // verify (solve() returns a candidate even for inconsistent systems
        // only when rank rows are consistent; double-check)
        std::vector<GF::Elt> lhs(h, k.zero());
        for (int i = 0; i < deg; ++i)
            for (int r = 0; r < h; ++r) lhs[r] = k.add(lhs[r], k.mul((*sol)[i], powers[i][r]));
        bool ok = true;
        for (int r = 0; r < h; ++r) ok = ok && k.eq(lhs[r], powers[deg][r]);
        if (!ok) continue;
        FpPoly m(deg + 1, k.zero());
        for (int i = 0; i < deg; ++i) m[i] = k.neg((*sol)[i]);
        m[deg] = k.one();
        return m;
    }
    throw InternalError("no minimal polynomial found within the algebra dimension");
}

// evaluate a polynomial at x inside E (Horner)
inline std::vector<GF::Elt> poly_at(const EndAlgebra<GF>& E, const FpPoly& f, const std::vector<GF::Elt>& x) {
    const GF& k = E.space.fld;
    std::vector<GF::Elt> acc(E.h, k.zero());
    for (int i = fppoly::degree(f); i >= 0; --i) {
        acc = E.mul(acc, x);
        if (!k.is_zero(f[i]))
            for (int r = 0; r < E.h; ++r) acc[r] = k.add(acc[r], k.mul(f[i], E.id_coords[r]));
    }
    return acc;
}

// idempotent from a coprime factorization of the minimal polynomial, if any
inline std::optional<std::vector<GF::Elt>> idempotent_from(const EndAlgebra<GF>& E,
                                                           const std::vector<GF::Elt>& x) {
    const GF& k = E.space.fld;
    FpPoly m = minimal_polynomial(E, x);
    auto factors = fppoly::factor(k, m);
    if (factors.size() < 2) return std::nullopt;
    // split off the first prime power
    auto it = factors.begin();
    FpPoly f{k.one()};
    for (int i = 0; i < it->second; ++i) f = fppoly::mul(k, f, it->first);
    auto [g, rem] = fppoly::divmod(k, m, f);
    if (!rem.empty()) throw InternalError("factorization does not divide the minimal polynomial");
    auto [d, u, v] = fppoly::xgcd(k, f, g);
    if (fppoly::degree(d) != 0) throw InternalError("prime-power parts are not coprime");
    // normalize bezout so that u f + v g = 1 exactly
    GF::Elt s = k.inv(d[0]);
    u = fppoly::scale(k, std::move(u), s);
    FpPoly uf = fppoly::mul(k, u, f);
    auto e = poly_at(E, uf, x);
    auto e2 = E.mul(e, e);
    if (!E.eq(e2, e)) throw InternalError("constructed element is not idempotent");
    if (E.is_zero(e) || E.eq(e, E.id_coords)) return std::nullopt;
    return e;
}

}  // namespace detail

// Result of the idempotent search: either a nontrivial idempotent, or none
// found (certified when the whole algebra was swept).
template <class F>
struct IdempotentSearch {
    std::optional<CoefMap<F>> idempotent;
    bool certified_none = false;
};

inline IdempotentSearch<GF> find_idempotent(const EndAlgebra<GF>& E, std::mt19937_64& rng) {
    IdempotentSearch<GF> out;
    const GF& k = E.space.fld;
    int h = E.h;
    if (h <= 1) {
        out.certified_none = true;  // End = k
        return out;
    }
    // deterministic sweep of the basis, then random combinations
    for (int a = 0; a < h; ++a) {
        std::vector<GF::Elt> x(h, k.zero());
        x[a] = k.one();
        if (auto e = detail::idempotent_from(E, x)) {
            out.idempotent = E.space.element(*e);
            return out;
        }
    }
    for (int t = 0; t < detail::kFittingTrials; ++t) {
        std::vector<GF::Elt> x(h, k.zero());
        for (int a = 0; a < h; ++a) x[a] = k.rand(rng);
        if (E.is_zero(x)) continue;
        if (auto e = detail::idempotent_from(E, x)) {
            out.idempotent = E.space.element(*e);
            return out;
        }
    }
    double sweep = 1;
    for (int i = 0; i < h; ++i) sweep *= static_cast<double>(k.p);
    if (h <= detail::kExhaustiveMaxDim && sweep <= detail::kExhaustiveBound) {
        std::vector<GF::Elt> x(h, k.zero());
        auto advance = [&]() {
            for (int i = 0; i < h; ++i) {
                x[i] = (x[i] + 1) % k.p;
                if (x[i] != 0) return true;
            }
            return false;
        };
        while (advance()) {
            auto e2 = E.mul(x, x);
            if (!E.eq(e2, x)) continue;
            if (E.is_zero(x) || E.eq(x, E.id_coords)) continue;
            out.idempotent = E.space.element(x);
            return out;
        }
        out.certified_none = true;
    }
    return out;
}

// Split M along an idempotent endomorphism into two direct summands.
template <class F>
std::pair<DiffMod<F>, DiffMod<F>> split_by_idempotent(const DiffMod<F>& M, const CoefMap<F>& idem) {
    const GentlePresentation& A = *M.alg;
    const F& fld = M.fld;
    int nv = A.quiver.vertex_count();

    // 1. scalar change of basis making each trivial block a standard
    //    projection diag(I, 0)
    std::vector<Mat<F>> g(nv), ginv(nv);
    std::vector<int> sel(nv, 0);
    for (int v = 0; v < nv; ++v) {
        int d = M.mult[v];
        if (d == 0) { g[v] = Mat<F>(fld, 0, 0); ginv[v] = g[v]; continue; }
        Mat<F> Ev(fld, d, d);
        auto it = idem.find(A.trivial_path(v));
        if (it != idem.end()) Ev = it->second;
        if (!((Ev * Ev) == Ev)) throw InternalError("trivial block of idempotent is not idempotent");
        // columns of Ev spanning the image, then a kernel basis
        Mat<F> basis(fld, d, d);
        int at = 0;
        {
            Mat<F> work = Ev;
            std::vector<int> piv = Mat<F>::rref(work);
            for (int c : piv) {
                for (int r = 0; r < d; ++r) basis.at(r, at) = Ev.at(r, c);
                ++at;
            }
            sel[v] = at;
            for (const auto& kv : Ev.kernel_basis()) {
                if (at >= d) break;
                for (int r = 0; r < d; ++r) basis.at(r, at) = kv[r];
                ++at;
            }
        }
        if (at != d) throw InternalError("image + kernel of idempotent do not fill the block");
        auto inv = basis.inverse();
        if (!inv) throw InternalError("idempotent basis is singular");
        g[v] = basis;
        ginv[v] = *inv;
    }

    auto conj_coef = [&](const CoefMap<F>& maps) {
        CoefMap<F> out;
        for (const auto& [w, m] : maps) {
            const PathData& p = A.path(w);
            Mat<F> t = ginv[p.src] * m * g[p.tgt];
            if (!t.is_zero()) out.emplace(w, std::move(t));
        }
        return out;
    };
    CoefMap<F> phi = conj_coef(M.coef);
    CoefMap<F> eps = conj_coef(idem);

    // 2. standard idempotent iota and the straightening unit
    //    u = iota eps + (1 - iota)(1 - eps); then u eps u^{-1} = iota
    CoefMap<F> iota, one;
    for (int v = 0; v < nv; ++v) {
        if (M.mult[v] == 0) continue;
        Mat<F> I = Mat<F>::identity(fld, M.mult[v]);
        Mat<F> P(fld, M.mult[v], M.mult[v]);
        for (int i = 0; i < sel[v]; ++i) P.at(i, i) = fld.one();
        one[A.trivial_path(v)] = I;
        if (!P.is_zero()) iota[A.trivial_path(v)] = P;
    }
    auto sub_maps = [&](const CoefMap<F>& x, const CoefMap<F>& y) {
        CoefMap<F> out = x;
        for (const auto& [w, m] : y) {
            auto it = out.find(w);
            if (it == out.end()) out.emplace(w, -m);
            else {
                it->second = it->second - m;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return out;
    };
    auto add_maps = [&](const CoefMap<F>& x, const CoefMap<F>& y) {
        CoefMap<F> out = x;
        for (const auto& [w, m] : y) {
            auto it = out.find(w);
            if (it == out.end()) out.emplace(w, m);
            else {
                it->second = it->second + m;
                if (it->second.is_zero()) out.erase(it);
            }
        }
        return out;
    };
    CoefMap<F> u = add_maps(compose_maps(A, fld, iota, eps),
                            compose_maps(A, fld, sub_maps(one, iota), sub_maps(one, eps)));
    // invert u = 1 - n with n supported on nontrivial paths
    CoefMap<F> n = sub_maps(one, u);
    for (const auto& [w, m] : n)
        if (A.path(w).trivial() && !m.is_zero()) throw InternalError("straightening unit is not unipotent");
    CoefMap<F> uinv = one;
    CoefMap<F> pw = n;
    while (!pw.empty()) {
        uinv = add_maps(uinv, pw);
        pw = compose_maps(A, fld, pw, n);
    }
    CoefMap<F> phi2 = compose_maps(A, fld, compose_maps(A, fld, u, phi), uinv);

    // 3. the conjugated differential is block diagonal for iota: split it
    DiffMod<F> first(M.alg, fld), second(M.alg, fld);
    for (int v = 0; v < nv; ++v) {
        first.mult[v] = sel[v];
        second.mult[v] = M.mult[v] - sel[v];
    }
    for (const auto& [w, m] : phi2) {
        const PathData& p = A.path(w);
        for (int r = 0; r < m.rows; ++r)
            for (int c = 0; c < m.cols; ++c) {
                if (fld.is_zero(m.at(r, c))) continue;
                bool rs = r < sel[p.src], cs = c < sel[p.tgt];
                if (rs != cs) throw InternalError("idempotent conjugation left a cross term");
                if (rs) first.add_coef_entry(w, r, c, m.at(r, c));
                else second.add_coef_entry(w, r - sel[p.src], c - sel[p.tgt], m.at(r, c));
            }
    }
    if (first.square_defect() >= 0 || second.square_defect() >= 0)
        throw InternalError("idempotent split broke the square-zero law");
    return {std::move(first), std::move(second)};
}

inline Cert is_indecomposable(const DiffMod<GF>& M, std::mt19937_64& rng) {
    if (M.is_zero_module()) return Cert::no;
    EndAlgebra<GF> E = end_algebra(M);
    auto search = find_idempotent(E, rng);
    if (search.idempotent) return Cert::no;
    return Cert::yes;  // budgeted certificate; exhaustive when the algebra is small
}

inline std::vector<DiffMod<GF>> decompose(const DiffMod<GF>& M, std::mt19937_64& rng) {
    std::vector<DiffMod<GF>> out;
    if (M.is_zero_module()) return out;
    EndAlgebra<GF> E = end_algebra(M);
    auto search = find_idempotent(E, rng);
    if (!search.idempotent) {
        out.push_back(M);
        return out;
    }
    auto [a, b] = split_by_idempotent(M, *search.idempotent);
    if (a.is_zero_module() || b.is_zero_module()) throw InternalError("idempotent split produced a zero part");
    for (auto& part : decompose(a, rng)) out.push_back(std::move(part));
    for (auto& part : decompose(b, rng)) out.push_back(std::move(part));
    return out;
}

// invertibility of a module map = invertibility of every trivial block
template <class F>
bool map_is_invertible(const DiffMod<F>& M, const DiffMod<F>& N, const CoefMap<F>& psi) {
    if (M.mult != N.mult) return false;
    for (int v = 0; v < M.alg->quiver.vertex_count(); ++v) {
        if (M.mult[v] == 0) continue;
        auto it = psi.find(M.alg->trivial_path(v));
        if (it == psi.end()) return false;
        if (!it->second.is_invertible()) return false;
    }
    return true;
}

inline bool is_isomorphic(const DiffMod<GF>& M, const DiffMod<GF>& N, std::mt19937_64& rng);

namespace detail {

// both certified indecomposable: isomorphic iff some composite of basis
// morphisms is invertible (local endomorphism rings)
inline bool indec_isomorphic(const DiffMod<GF>& M, const DiffMod<GF>& N) {
    if (M.mult != N.mult) return false;
    HomSpace<GF> fwd = hom_basis(M, N);
    HomSpace<GF> bwd = hom_basis(N, M);
    if (fwd.dim() == 0 || bwd.dim() == 0) return false;
    for (int a = 0; a < fwd.dim(); ++a) {
        CoefMap<GF> f = fwd.unflatten(fwd.basis[a]);
        for (int b = 0; b < bwd.dim(); ++b) {
            CoefMap<GF> g = bwd.unflatten(bwd.basis[b]);
            CoefMap<GF> gf = compose_maps(*M.alg, M.fld, g, f);
            if (map_is_invertible(M, M, gf)) return true;
        }
    }
    return false;
}

}  // namespace detail

inline bool is_isomorphic(const DiffMod<GF>& M, const DiffMod<GF>& N, std::mt19937_64& rng) {
    if (M.alg != N.alg) return false;
    if (M.mult != N.mult) return false;
    if (M.is_zero_module()) return true;
    if (M == N) return true;

    HomSpace<GF> fwd = hom_basis(M, N);
    if (fwd.dim() == 0) return false;
    const GF& k = M.fld;
    for (int t = 0; t < detail::kIsoTrials; ++t) {
        std::vector<GF::Elt> c(fwd.dim());
        for (auto& x : c) x = k.rand(rng);
        CoefMap<GF> psi = fwd.element(c);
        if (map_is_invertible(M, N, psi)) return true;
    }

    Cert mi = is_indecomposable(M, rng);
    Cert ni = is_indecomposable(N, rng);
    if (mi == Cert::yes && ni == Cert::yes) return detail::indec_isomorphic(M, N);
    if (mi != ni && (mi == Cert::yes || ni == Cert::yes)) return false;

    // decomposable on both sides: match summand multisets
    auto ms = decompose(M, rng);
    auto ns = decompose(N, rng);
    if (ms.size() != ns.size()) return false;
    std::vector<bool> used(ns.size(), false);
    for (const auto& part : ms) {
        bool matched = false;
        for (std::size_t j = 0; j < ns.size() && !matched; ++j) {
            if (used[j]) continue;
            if (part.mult != ns[j].mult) continue;
            if (detail::indec_isomorphic(part, ns[j])) {
                used[j] = true;
                matched = true;
            }
        }
        if (!matched) return false;
    }
    return true;
}

}  // namespace gentle
