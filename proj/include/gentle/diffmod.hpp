// Differential modules (P, phi): P a projective module given by vertex
// multiplicities, phi a square-zero endomorphism given by path-indexed
// coefficient matrices.  See quiver.hpp for the module convention; the
// coefficient A_w of a path w : i -> j has shape d_i x d_j and carries the
// component of phi from the P_j-block into the P_i-block.

#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include "gentle/matrix.hpp"
#include "gentle/quiver.hpp"

namespace gentle {

using AlgebraPtr = std::shared_ptr<const GentlePresentation>;

template <class F>
struct DiffMod {
    using Elt = typename F::Elt;

    AlgebraPtr alg;
    F fld;
    std::vector<int> mult;       // per vertex id
    std::map<int, Mat<F>> coef;  // path id -> coefficient; zero matrices are not stored

    DiffMod() = default;
    DiffMod(AlgebraPtr a, F f) : alg(std::move(a)), fld(f), mult(alg->quiver.vertex_count(), 0) {}

    int total_dim() const {
        int d = 0;
        for (int v = 0; v < alg->quiver.vertex_count(); ++v) d += mult[v] * alg->dim_projective(v);
        return d;
    }

    // dimension of the underlying representation at each vertex
    std::vector<int> dimension_vector() const {
        int nv = alg->quiver.vertex_count();
        std::vector<int> dv(nv, 0);
        for (int p = 0; p < alg->path_count(); ++p) dv[alg->path(p).tgt] += mult[alg->path(p).src];
        return dv;
    }

    bool is_zero_module() const {
        return std::all_of(mult.begin(), mult.end(), [](int d) { return d == 0; });
    }

    const Mat<F>* coef_of(int path_id) const {
        auto it = coef.find(path_id);
        return it == coef.end() ? nullptr : &it->second;
    }

    void set_coef(int path_id, Mat<F> m) {
        const PathData& p = alg->path(path_id);
        if (m.rows != mult[p.src] || m.cols != mult[p.tgt])
            throw ValidationError("coefficient of '" + alg->path_literal(path_id) + "' has shape " +
                                  std::to_string(m.rows) + "x" + std::to_string(m.cols) + ", expected " +
                                  std::to_string(mult[p.src]) + "x" + std::to_string(mult[p.tgt]));
        if (m.is_zero()) coef.erase(path_id);
        else coef[path_id] = std::move(m);
    }

    void add_coef_entry(int path_id, int row, int col, const Elt& value) {
        const PathData& p = alg->path(path_id);
        auto it = coef.find(path_id);
        if (it == coef.end())
            it = coef.emplace(path_id, Mat<F>(fld, mult[p.src], mult[p.tgt])).first;
        it->second.at(row, col) = fld.add(it->second.at(row, col), value);
    }

    bool operator==(const DiffMod& o) const {
        return alg == o.alg && mult == o.mult && coef == o.coef;
    }

    // first path whose square-expansion coefficient is nonzero, or -1
    int square_defect() const {
        for (int w = 0; w < alg->path_count(); ++w) {
            const PathData& pw = alg->path(w);
            if (mult[pw.src] == 0 || mult[pw.tgt] == 0) continue;
            Mat<F> sum(fld, mult[pw.src], mult[pw.tgt]);
            bool any = false;
            for (auto [u, v] : alg->splits(w)) {
                const Mat<F>* a = coef_of(u);
                const Mat<F>* b = coef_of(v);
                if (!a || !b) continue;
                sum = sum + (*a) * (*b);
                any = true;
            }
            if (any && !sum.is_zero()) return w;
        }
        return -1;
    }

    bool is_square_zero() const { return square_defect() < 0; }

    // true when no trivial path carries a nonzero coefficient
    bool is_radical() const {
        for (const auto& [w, m] : coef)
            if (alg->path(w).trivial()) return false;
        return true;
    }

    DiffMod suspend() const {
        DiffMod m = *this;
        for (auto& [w, mat] : m.coef) mat = -mat;
        return m;
    }

    DiffMod twist(const Elt& lambda) const {
        if (fld.is_zero(lambda)) throw ValidationError("twist parameter must be nonzero");
        DiffMod m = *this;
        for (auto& [w, mat] : m.coef) mat = mat.scaled(lambda);
        for (auto it = m.coef.begin(); it != m.coef.end();)
            it = it->second.is_zero() ? m.coef.erase(it) : std::next(it);
        return m;
    }

    std::string dump() const {
        std::ostringstream out;
        for (int v = 0; v < alg->quiver.vertex_count(); ++v)
            out << "dim " << alg->quiver.vertex_names[v] << "=" << mult[v] << "\n";
        for (const auto& [w, m] : coef) {
            out << "coef " << alg->path_literal(w) << " " << m.rows << "x" << m.cols << "\n";
            out << m.str();
        }
        return out.str();
    }

    static DiffMod parse_dump(AlgebraPtr alg, F fld, const std::string& text);
};

// Validating constructor: checks shapes and the square-zero law.
template <class F>
DiffMod<F> make_module(AlgebraPtr alg, F fld, std::vector<int> mult,
                       const std::map<int, Mat<F>>& coefficients) {
    if (static_cast<int>(mult.size()) != alg->quiver.vertex_count())
        throw ValidationError("multiplicity vector length mismatch");
    for (int d : mult)
        if (d < 0) throw ValidationError("negative multiplicity");
    DiffMod<F> m(alg, fld);
    m.mult = std::move(mult);
    for (const auto& [w, mat] : coefficients) m.set_coef(w, mat);
    int defect = m.square_defect();
    if (defect >= 0)
        throw ValidationError("differential does not square to zero: nonzero coefficient on path '" +
                              alg->path_literal(defect) + "'");
    return m;
}

template <class F>
DiffMod<F> direct_sum(const DiffMod<F>& a, const DiffMod<F>& b) {
    if (a.alg != b.alg) throw ValidationError("direct sum over different presentations");
    DiffMod<F> s(a.alg, a.fld);
    for (int v = 0; v < a.alg->quiver.vertex_count(); ++v) s.mult[v] = a.mult[v] + b.mult[v];
    auto place = [&](const DiffMod<F>& part, bool second) {
        for (const auto& [w, m] : part.coef) {
            const PathData& p = a.alg->path(w);
            int ro = second ? a.mult[p.src] : 0;
            int co = second ? a.mult[p.tgt] : 0;
            for (int r = 0; r < m.rows; ++r)
                for (int c = 0; c < m.cols; ++c)
                    if (!a.fld.is_zero(m.at(r, c))) s.add_coef_entry(w, ro + r, co + c, m.at(r, c));
        }
    };
    place(a, false);
    place(b, true);
    return s;
}

// phi as a plain linear operator on the underlying vector space; basis is
// (vertex, copy, basis path of P_vertex) ordered by vertex then copy.
template <class F>
Mat<F> to_linear_matrix(const DiffMod<F>& m) {
    const GentlePresentation& A = *m.alg;
    int nv = A.quiver.vertex_count();
    std::vector<int> block_offset(nv + 1, 0);
    for (int v = 0; v < nv; ++v) block_offset[v + 1] = block_offset[v] + m.mult[v] * A.dim_projective(v);
    int N = block_offset[nv];
    std::vector<std::map<int, int>> pos_in_proj(nv);  // path id -> index within P_v basis
    for (int v = 0; v < nv; ++v) {
        int k = 0;
        for (int q : A.paths_from(v)) pos_in_proj[v][q] = k++;
    }
    Mat<F> big(m.fld, N, N);
    for (const auto& [w, mat] : m.coef) {
        const PathData& pw = A.path(w);
        for (int q : A.paths_from(pw.tgt)) {
            int wq = A.compose(w, q);
            if (wq < 0) continue;
            for (int r = 0; r < mat.rows; ++r)
                for (int c = 0; c < mat.cols; ++c) {
                    if (m.fld.is_zero(mat.at(r, c))) continue;
                    int col = block_offset[pw.tgt] + c * A.dim_projective(pw.tgt) + pos_in_proj[pw.tgt][q];
                    int row = block_offset[pw.src] + r * A.dim_projective(pw.src) + pos_in_proj[pw.src][wq];
                    big.at(row, col) = m.fld.add(big.at(row, col), mat.at(r, c));
                }
        }
    }
    return big;
}

// ---- splitting off projective (contractible) summands ---------------------

// Sparse element of the path algebra restricted to paths v -> w.
template <class F>
using AlgElt = std::map<int, typename F::Elt>;

template <class F>
AlgElt<F> alg_mul(const GentlePresentation& A, const F& fld, const AlgElt<F>& x, const AlgElt<F>& y) {
    AlgElt<F> out;
    for (const auto& [u, xu] : x)
        for (const auto& [v, yv] : y) {
            int w = A.compose(u, v);
            if (w < 0) continue;
            auto& acc = out[w];
            acc = fld.add(acc, fld.mul(xu, yv));
        }
    for (auto it = out.begin(); it != out.end();)
        it = fld.is_zero(it->second) ? out.erase(it) : std::next(it);
    return out;
}

template <class F>
struct SplitResult {
    DiffMod<F> radical_part;
    std::map<int, int> peeled;  // vertex id -> number of projective covers split off
};

// Iterated peeling: while some trivial-path coefficient has a nonzero entry
// (r, c), the pair of copies (c, r) spans a contractible summand; the
// complement keeps the Schur-corrected differential.
template <class F>
SplitResult<F> split_projectives(const DiffMod<F>& input) {
    const GentlePresentation& A = *input.alg;
    const F fld = input.fld;
    DiffMod<F> m = input;
    std::map<int, int> peeled;

    while (true) {
        int vtx = -1, row = -1, col = -1;
        for (const auto& [w, mat] : m.coef) {
            if (!A.path(w).trivial()) continue;
            for (int r = 0; r < mat.rows && vtx < 0; ++r)
                for (int c = 0; c < mat.cols; ++c)
                    if (r != c && !fld.is_zero(mat.at(r, c))) {
                        vtx = A.path(w).src;
                        row = r;
                        col = c;
                        break;
                    }
            if (vtx >= 0) break;
        }
        if (vtx < 0) break;  // a nonzero square-zero matrix always has an off-diagonal entry

        // the (row, col) entry of phi as an algebra element of e_v A e_v
        AlgElt<F> u;
        for (int cyc : A.paths_from(vtx)) {
            if (A.path(cyc).tgt != vtx) continue;
            const Mat<F>* mat = m.coef_of(cyc);
            if (mat && !fld.is_zero(mat->at(row, col))) u[cyc] = mat->at(row, col);
        }
        // invert u = lambda e + n with n nilpotent: geometric series
        int e_v = A.trivial_path(vtx);
        typename F::Elt lambda = u.at(e_v);
        AlgElt<F> n = u;
        n.erase(e_v);
        AlgElt<F> uinv{{e_v, fld.inv(lambda)}};
        AlgElt<F> pow{{e_v, fld.one()}};
        typename F::Elt li = fld.inv(lambda);
        typename F::Elt sign_scale = fld.neg(li);
        for (int k = 1; !n.empty(); ++k) {
            pow = alg_mul(A, fld, pow, n);
            if (pow.empty()) break;
            // term (-1)^k lambda^{-k-1} n^k
            typename F::Elt c = li;
            for (int i = 0; i < k; ++i) c = fld.mul(c, sign_scale);
            for (const auto& [p, s] : pow) {
                auto& acc = uinv[p];
                acc = fld.add(acc, fld.mul(c, s));
            }
        }
        for (auto it = uinv.begin(); it != uinv.end();)
            it = fld.is_zero(it->second) ? uinv.erase(it) : std::next(it);

        // gather column (x <- copy col) and row (copy row <- y) entries
        // of phi, as path-indexed data, excluding the peeled copies
        // Schur correction: phi'[x][y] -= phi[x][col] * uinv * phi[row][y]
        DiffMod<F> next(m.alg, fld);
        next.mult = m.mult;
        next.mult[vtx] -= 2;
        if (next.mult[vtx] < 0) throw InternalError("peeling underflow");

        auto new_row = [&](int v, int r) {  // copy index after deleting {row, col} at vtx
            if (v != vtx) return r;
            int nr = r;
            if (r > row) --nr;
            if (r > col) --nr;
            return nr;
        };
        auto keep = [&](int v, int r) { return v != vtx || (r != row && r != col); };

        // base coefficients restricted to the kept copies
        for (const auto& [w, mat] : m.coef) {
            const PathData& pw = A.path(w);
            for (int r = 0; r < mat.rows; ++r)
                for (int c = 0; c < mat.cols; ++c) {
                    if (fld.is_zero(mat.at(r, c))) continue;
                    if (!keep(pw.src, r) || !keep(pw.tgt, c)) continue;
                    next.add_coef_entry(w, new_row(pw.src, r), new_row(pw.tgt, c), mat.at(r, c));
                }
        }
        // correction terms
        for (const auto& [w1, m1] : m.coef) {
            const PathData& p1 = A.path(w1);
            if (p1.tgt != vtx) continue;  // w1 : x-vertex -> vtx, entry [x][col]
            for (const auto& [w2s, u2] : uinv) {
                int w12 = A.compose(w1, w2s);
                if (w12 < 0) continue;
                for (const auto& [w3, m3] : m.coef) {
                    const PathData& p3 = A.path(w3);
                    if (p3.src != vtx) continue;  // w3 : vtx -> y-vertex, entry [row][y]
                    int w = A.compose(w12, w3);
                    if (w < 0) continue;
                    for (int x = 0; x < m1.rows; ++x) {
                        if (!keep(p1.src, x) || fld.is_zero(m1.at(x, col))) continue;
                        typename F::Elt left = fld.mul(m1.at(x, col), u2);
                        for (int y = 0; y < m3.cols; ++y) {
                            if (!keep(p3.tgt, y) || fld.is_zero(m3.at(row, y))) continue;
                            next.add_coef_entry(w, new_row(p1.src, x), new_row(p3.tgt, y),
                                                fld.neg(fld.mul(left, m3.at(row, y))));
                        }
                    }
                }
            }
        }
        for (auto it = next.coef.begin(); it != next.coef.end();)
            it = it->second.is_zero() ? next.coef.erase(it) : std::next(it);

        if (next.square_defect() >= 0) throw InternalError("peeling broke the square-zero law");
        ++peeled[vtx];
        m = std::move(next);
    }
    return SplitResult<F>{std::move(m), std::move(peeled)};
}

// ---- dump parsing ----------------------------------------------------------

template <class F>
DiffMod<F> DiffMod<F>::parse_dump(AlgebraPtr alg, F fld, const std::string& text) {
    DiffMod<F> m(alg, fld);
    std::istringstream in(text);
    std::string line;
    std::vector<bool> seen(alg->quiver.vertex_count(), false);
    int pending_path = -1, pending_rows = 0, pending_cols = 0, row_at = 0;
    Mat<F> pending(fld, 0, 0);
    std::map<int, Mat<F>> coefs;
    auto flush = [&]() {
        if (pending_path < 0) return;
        if (row_at != pending_rows) throw ParseError("truncated coefficient block");
        coefs[pending_path] = pending;
        pending_path = -1;
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "dim") {
            flush();
            std::string rest;
            if (!(ls >> rest)) throw ParseError("bad dim line");
            auto eq = rest.find('=');
            if (eq == std::string::npos) throw ParseError("bad dim line '" + line + "'");
            int v = alg->quiver.vertex_id(rest.substr(0, eq));
            if (v < 0) throw ParseError("unknown vertex in dim line '" + line + "'");
            m.mult[v] = std::stoi(rest.substr(eq + 1));
            if (m.mult[v] < 0) throw ParseError("negative multiplicity");
            seen[v] = true;
        } else if (tok == "coef") {
            flush();
            std::string pathlit, shape;
            if (!(ls >> pathlit >> shape)) throw ParseError("bad coef line '" + line + "'");
            auto x = shape.find('x');
            if (x == std::string::npos) throw ParseError("bad coef shape '" + shape + "'");
            pending_path = alg->parse_path_literal(pathlit);
            pending_rows = std::stoi(shape.substr(0, x));
            pending_cols = std::stoi(shape.substr(x + 1));
            pending = Mat<F>(fld, pending_rows, pending_cols);
            row_at = 0;
        } else if (pending_path >= 0) {
            if (row_at >= pending_rows) throw ParseError("too many rows in coefficient block");
            pending.at(row_at, 0) = fld.parse(tok);
            for (int c = 1; c < pending_cols; ++c) {
                std::string s;
                if (!(ls >> s)) throw ParseError("short row in coefficient block");
                pending.at(row_at, c) = fld.parse(s);
            }
            ++row_at;
        } else {
            throw ParseError("unexpected line '" + line + "' in module dump");
        }
    }
    flush();
    return make_module(alg, fld, m.mult, coefs);
}

}  // namespace gentle
