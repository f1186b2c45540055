// Univariate polynomial arithmetic over a prime field, with Berlekamp
// factorization.  Used to split minimal polynomials of endomorphisms when
// searching for idempotents.

#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "gentle/matrix.hpp"
#include "gentle/scalar.hpp"

namespace gentle {

// Coefficient vector, low degree first.  The zero polynomial is {}.
using FpPoly = std::vector<GF::Elt>;

namespace fppoly {

inline void trim(FpPoly& f, const GF& k) {
    while (!f.empty() && k.is_zero(f.back())) f.pop_back();
}

inline int degree(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

inline FpPoly add(const GF& k, FpPoly f, const FpPoly& g) {
    if (f.size() < g.size()) f.resize(g.size(), k.zero());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] = k.add(f[i], g[i]);
    trim(f, k);
    return f;
}

inline FpPoly scale(const GF& k, FpPoly f, GF::Elt c) {
    for (auto& x : f) x = k.mul(x, c);
    trim(f, k);
    return f;
}

inline FpPoly mul(const GF& k, const FpPoly& f, const FpPoly& g) {
    if (f.empty() || g.empty()) return {};
    FpPoly h(f.size() + g.size() - 1, k.zero());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (k.is_zero(f[i])) continue;
        for (std::size_t j = 0; j < g.size(); ++j)
            h[i + j] = k.add(h[i + j], k.mul(f[i], g[j]));
    }
    trim(h, k);
    return h;
}

// Division with remainder; g must be nonzero.
inline std::pair<FpPoly, FpPoly> divmod(const GF& k, FpPoly f, const FpPoly& g) {
    if (g.empty()) throw ValidationError("polynomial division by zero");
    FpPoly q;
    GF::Elt lead_inv = k.inv(g.back());
    while (f.size() >= g.size() && !f.empty()) {
        GF::Elt c = k.mul(f.back(), lead_inv);
        std::size_t shift = f.size() - g.size();
        if (q.size() < shift + 1) q.resize(shift + 1, k.zero());
        q[shift] = k.add(q[shift], c);
        for (std::size_t i = 0; i < g.size(); ++i)
            f[shift + i] = k.sub(f[shift + i], k.mul(c, g[i]));
        trim(f, k);
    }
    trim(q, k);
    return {q, f};
}

inline FpPoly mod(const GF& k, const FpPoly& f, const FpPoly& g) { return divmod(k, f, g).second; }

inline FpPoly monic(const GF& k, FpPoly f) {
    if (f.empty()) return f;
    return scale(k, std::move(f), k.inv(f.back()));
}

inline FpPoly gcd(const GF& k, FpPoly f, FpPoly g) {
    while (!g.empty()) {
        FpPoly r = mod(k, f, g);
        f = std::move(g);
        g = std::move(r);
    }
    return monic(k, std::move(f));
}

inline FpPoly derivative(const GF& k, const FpPoly& f) {
    FpPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(k.mul(f[i], k.from_int(static_cast<long long>(i))));
    trim(d, k);
    return d;
}

inline FpPoly powmod(const GF& k, FpPoly base, std::uint64_t e, const FpPoly& m) {
    FpPoly r{k.one()};
    base = mod(k, base, m);
    while (e) {
        if (e & 1) r = mod(k, mul(k, r, base), m);
        base = mod(k, mul(k, base, base), m);
        e >>= 1;
    }
    return r;
}

// Berlekamp factorization into irreducible factors with multiplicity.
// Degrees here stay tiny (bounded by dim End), so the plain algorithm is
// plenty.
std::map<FpPoly, int> factor(const GF& k, FpPoly f);

namespace detail {

// squarefree monic input -> distinct irreducible monic factors
inline void berlekamp_squarefree(const GF& k, const FpPoly& f, std::vector<FpPoly>& out) {
    int n = degree(f);
    if (n <= 1) {
        if (n == 1) out.push_back(f);
        return;
    }
    // Berlekamp matrix: rows express x^{p*i} mod f in the basis 1..x^{n-1}.
    Mat<GF> Q(k, n, n);
    FpPoly xp = powmod(k, FpPoly{k.zero(), k.one()}, k.p, f);
    FpPoly cur{k.one()};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= degree(cur); ++j) Q.at(i, j) = cur[j];
        cur = mod(k, mul(k, cur, xp), f);
    }
    // kernel of (Q - I) acting on coefficient ROW vectors: use transpose.
    Mat<GF> M(k, n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            GF::Elt v = Q.at(j, i);
            if (i == j) v = k.sub(v, k.one());
            M.at(i, j) = v;
        }
    auto kern = M.kernel_basis();
    if (kern.size() <= 1) {
        out.push_back(f);  // irreducible
        return;
    }
    // pick a non-constant element of the Berlekamp subalgebra and split
    for (const auto& vec : kern) {
        FpPoly v(vec.begin(), vec.end());
        trim(v, k);
        if (degree(v) < 1) continue;
        std::vector<FpPoly> parts;
        for (std::uint64_t c = 0; c < k.p; ++c) {
            FpPoly shifted = v;
            if (shifted.empty()) shifted.push_back(k.zero());
            shifted[0] = k.sub(shifted[0], k.from_int(static_cast<long long>(c)));
            FpPoly g = gcd(k, f, shifted);
            if (degree(g) >= 1 && degree(g) < degree(f)) parts.push_back(g);
        }
        if (!parts.empty()) {
            FpPoly rest = f;
            for (const auto& g : parts) {
                rest = divmod(k, rest, g).first;
                berlekamp_squarefree(k, g, out);
            }
            if (degree(rest) >= 1) berlekamp_squarefree(k, monic(k, rest), out);
            return;
        }
    }
    out.push_back(f);  // kernel gave no splitter: irreducible
}

}  // namespace detail

inline std::map<FpPoly, int> factor(const GF& k, FpPoly f) {
    std::map<FpPoly, int> result;
    f = monic(k, std::move(f));
    if (degree(f) < 1) return result;
    if (degree(f) == 1) {
        result[f] = 1;
        return result;
    }
    FpPoly d = derivative(k, f);
    if (d.empty()) {
        // f = g(x^p) = (root g)^p in characteristic p
        FpPoly root;
        for (std::size_t i = 0; i < f.size(); i += k.p) root.push_back(f[i]);
        for (auto& [q, m] : factor(k, root)) result[q] += m * static_cast<int>(k.p);
        return result;
    }
    FpPoly g = gcd(k, f, d);
    if (degree(g) >= 1) {
        for (auto& [q, m] : factor(k, g)) result[q] += m;
        for (auto& [q, m] : factor(k, divmod(k, f, g).first)) result[q] += m;
        return result;
    }
    // squarefree: split into distinct irreducibles
    std::vector<FpPoly> irr;
    detail::berlekamp_squarefree(k, f, irr);
    for (const auto& q : irr) result[q] += 1;
    return result;
}

// Bezout: u f + v g = gcd(f,g).
inline std::tuple<FpPoly, FpPoly, FpPoly> xgcd(const GF& k, FpPoly f, FpPoly g) {
    FpPoly u0{k.one()}, v0, u1, v1{k.one()};
    while (!g.empty()) {
        auto [q, r] = divmod(k, f, g);
        FpPoly nu = add(k, u0, scale(k, mul(k, q, u1), k.neg(k.one())));
        FpPoly nv = add(k, v0, scale(k, mul(k, q, v1), k.neg(k.one())));
        f = std::move(g); g = std::move(r);
        u0 = std::move(u1); u1 = std::move(nu);
        v0 = std::move(v1); v1 = std::move(nv);
    }
    if (!f.empty()) {
        GF::Elt s = k.inv(f.back());
        f = scale(k, std::move(f), s);
        u0 = scale(k, std::move(u0), s);
        v0 = scale(k, std::move(v0), s);
    }
    return {f, u0, v0};
}

}  // namespace fppoly
}  // namespace gentle
