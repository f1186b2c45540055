// Homotopy strings and bands on the quiver of a gentle presentation:
// validation, canonical forms, enumeration, windings and gradings, and the
// string/band differential modules they define.
//
// A letter is a nonzero nontrivial path traversed forwards (direct) or
// backwards (inverse).  Letters chain like walks; consecutive letters of the
// same direction must meet in a relation, letters of opposite directions
// must meet at a shared endpoint without sharing their terminal arrow.
//
// The module map of a direct letter runs against the traversal direction
// (left multiplication maps P_{target} -> P_{source}), so a grading steps
// DOWN by one across a direct letter and UP by one across an inverse one.
// The winding number keeps the opposite sign convention (+1 per direct
// letter); only |w| and the w = 0 locus are observable, and all twist
// formulas below are stated and tested with this pairing.

#pragma once

#include <optional>

#include "gentle/diffmod.hpp"

namespace gentle {

struct Letter {
    int path = -1;         // nontrivial nonzero path id
    bool inverse = false;

    auto operator<=>(const Letter&) const = default;
};

struct HomotopyString {
    std::vector<Letter> letters;
    auto operator<=>(const HomotopyString&) const = default;
};

struct HomotopyBand {
    std::vector<Letter> letters;  // cyclic; the stored order fixes orientation and start
    auto operator<=>(const HomotopyBand&) const = default;
};

struct Grading {
    int anchor = 0;
    std::vector<int> values;  // one per crossing
};

// ---- walk endpoints --------------------------------------------------------

inline int walk_source(const GentlePresentation& A, const Letter& l) {
    const PathData& p = A.path(l.path);
    return l.inverse ? p.tgt : p.src;
}
inline int walk_target(const GentlePresentation& A, const Letter& l) {
    const PathData& p = A.path(l.path);
    return l.inverse ? p.src : p.tgt;
}
inline int first_arrow(const GentlePresentation& A, int path) { return A.path(path).arrows.front(); }
inline int last_arrow(const GentlePresentation& A, int path) { return A.path(path).arrows.back(); }

// junction conditions for consecutive letters x then y
inline bool valid_junction(const GentlePresentation& A, const Letter& x, const Letter& y) {
    if (walk_target(A, x) != walk_source(A, y)) return false;
    if (x.path == y.path && x.inverse != y.inverse) return false;  // immediate backtrack
    if (!x.inverse && !y.inverse) return A.is_relation(last_arrow(A, x.path), first_arrow(A, y.path));
    if (x.inverse && y.inverse) return A.is_relation(last_arrow(A, y.path), first_arrow(A, x.path));
    if (!x.inverse && y.inverse) return last_arrow(A, x.path) != last_arrow(A, y.path);
    return first_arrow(A, x.path) != first_arrow(A, y.path);
}

// explanation used in error messages
inline std::string junction_violation(const GentlePresentation& A, const Letter& x, const Letter& y) {
    if (walk_target(A, x) != walk_source(A, y)) return "letters do not chain at a common vertex";
    if (x.path == y.path && x.inverse != y.inverse) return "letter followed by its own inverse";
    if (!x.inverse && !y.inverse) return "consecutive direct letters must compose into a relation";
    if (x.inverse && y.inverse) return "consecutive inverse letters must compose into a relation";
    if (!x.inverse && y.inverse) return "peak letters share their last arrow";
    return "deep letters share their first arrow";
}

// ---- validation ------------------------------------------------------------

inline HomotopyString validate_string(const GentlePresentation& A, std::vector<Letter> letters) {
    if (letters.empty()) throw ValidationError("a homotopy string needs at least one letter");
    for (const Letter& l : letters) {
        if (l.path < 0 || l.path >= A.path_count()) throw ValidationError("unknown path in letter");
        if (A.path(l.path).trivial()) throw ValidationError("letters must be nontrivial paths");
    }
    for (std::size_t i = 0; i + 1 < letters.size(); ++i)
        if (!valid_junction(A, letters[i], letters[i + 1]))
            throw ValidationError("invalid string junction at position " + std::to_string(i + 1) + ": " +
                                  junction_violation(A, letters[i], letters[i + 1]));
    return HomotopyString{std::move(letters)};
}

inline bool is_primitive(const std::vector<Letter>& letters) {
    std::size_t r = letters.size();
    for (std::size_t period = 1; period < r; ++period) {
        if (r % period != 0) continue;
        bool repeats = true;
        for (std::size_t i = period; i < r && repeats; ++i) repeats = letters[i] == letters[i % period];
        if (repeats) return false;
    }
    return true;
}

inline HomotopyBand validate_band(const GentlePresentation& A, std::vector<Letter> letters) {
    if (letters.empty()) throw ValidationError("a homotopy band needs at least one letter");
    for (const Letter& l : letters) {
        if (l.path < 0 || l.path >= A.path_count()) throw ValidationError("unknown path in letter");
        if (A.path(l.path).trivial()) throw ValidationError("letters must be nontrivial paths");
    }
    for (std::size_t i = 0; i < letters.size(); ++i) {
        const Letter& x = letters[i];
        const Letter& y = letters[(i + 1) % letters.size()];
        if (!valid_junction(A, x, y))
            throw ValidationError("invalid band junction at position " + std::to_string(i + 1) + ": " +
                                  junction_violation(A, x, y));
    }
    if (!is_primitive(letters)) throw ValidationError("band is a proper power of a shorter band");
    return HomotopyBand{std::move(letters)};
}

// ---- canonical forms -------------------------------------------------------

inline std::vector<Letter> invert_letters(std::vector<Letter> letters) {
    std::reverse(letters.begin(), letters.end());
    for (Letter& l : letters) l.inverse = !l.inverse;
    return letters;
}

inline HomotopyString invert_string(const HomotopyString& s) { return {invert_letters(s.letters)}; }
inline HomotopyBand invert_band(const HomotopyBand& b) { return {invert_letters(b.letters)}; }

inline HomotopyBand rotate_band(const HomotopyBand& b, int k) {
    int r = static_cast<int>(b.letters.size());
    k = ((k % r) + r) % r;
    std::vector<Letter> rot(b.letters.begin() + k, b.letters.end());
    rot.insert(rot.end(), b.letters.begin(), b.letters.begin() + k);
    return {std::move(rot)};
}

inline HomotopyString canonical_string(const HomotopyString& s) {
    return std::min(s, invert_string(s));
}

inline HomotopyBand canonical_band(const HomotopyBand& b) {
    HomotopyBand best = b;
    int r = static_cast<int>(b.letters.size());
    HomotopyBand inv = invert_band(b);
    for (int k = 0; k < r; ++k) {
        best = std::min(best, rotate_band(b, k));
        best = std::min(best, rotate_band(inv, k));
    }
    return best;
}

// ---- enumeration -----------------------------------------------------------

inline std::vector<Letter> all_letters(const GentlePresentation& A) {
    std::vector<Letter> out;
    for (int p = 0; p < A.path_count(); ++p) {
        if (A.path(p).trivial()) continue;
        out.push_back({p, false});
        out.push_back({p, true});
    }
    return out;
}

inline std::vector<HomotopyString> enumerate_strings(const GentlePresentation& A, int max_letters) {
    if (max_letters < 1) throw ValidationError("enumeration bound must be >= 1");
    std::set<HomotopyString> canon;
    std::vector<Letter> letters = all_letters(A);
    std::vector<Letter> word;
    auto rec = [&](auto&& self) -> void {
        if (!word.empty()) canon.insert(canonical_string(HomotopyString{word}));
        if (static_cast<int>(word.size()) >= max_letters) return;
        for (const Letter& l : letters) {
            if (!word.empty() && !valid_junction(A, word.back(), l)) continue;
            word.push_back(l);
            self(self);
            word.pop_back();
        }
    };
    rec(rec);
    return {canon.begin(), canon.end()};
}

inline std::vector<HomotopyBand> enumerate_bands(const GentlePresentation& A, int max_letters) {
    if (max_letters < 1) throw ValidationError("enumeration bound must be >= 1");
    std::set<HomotopyBand> canon;
    std::vector<Letter> letters = all_letters(A);
    std::vector<Letter> word;
    auto rec = [&](auto&& self) -> void {
        if (!word.empty() && valid_junction(A, word.back(), word.front()) && is_primitive(word))
            canon.insert(canonical_band(HomotopyBand{word}));
        if (static_cast<int>(word.size()) >= max_letters) return;
        for (const Letter& l : letters) {
            if (!word.empty() && !valid_junction(A, word.back(), l)) continue;
            word.push_back(l);
            self(self);
            word.pop_back();
        }
    };
    rec(rec);
    return {canon.begin(), canon.end()};
}

// ---- crossings, windings, gradings ------------------------------------------

// vertex labels of the crossings p_0..p_n (strings) or p_0..p_{r-1} (bands)
inline std::vector<int> string_crossings(const GentlePresentation& A, const HomotopyString& s) {
    std::vector<int> v{walk_source(A, s.letters.front())};
    for (const Letter& l : s.letters) v.push_back(walk_target(A, l));
    return v;
}
inline std::vector<int> band_crossings(const GentlePresentation& A, const HomotopyBand& b) {
    std::vector<int> v{walk_source(A, b.letters.front())};
    for (std::size_t i = 0; i + 1 < b.letters.size(); ++i) v.push_back(walk_target(A, b.letters[i]));
    return v;
}

inline int grading_step(const Letter& l) { return l.inverse ? +1 : -1; }

inline int winding(const HomotopyBand& b) {
    int w = 0;
    for (const Letter& l : b.letters) w += l.inverse ? -1 : +1;
    return w;
}

inline Grading string_grading(const HomotopyString& s, int anchor) {
    Grading g;
    g.anchor = anchor;
    g.values.push_back(anchor);
    for (const Letter& l : s.letters) g.values.push_back(g.values.back() + grading_step(l));
    return g;
}

inline std::optional<Grading> band_grading(const HomotopyBand& b, int anchor) {
    if (winding(b) != 0) return std::nullopt;
    Grading g;
    g.anchor = anchor;
    g.values.push_back(anchor);
    for (std::size_t i = 0; i + 1 < b.letters.size(); ++i)
        g.values.push_back(g.values.back() + grading_step(b.letters[i]));
    return g;
}

// ---- string and band modules ------------------------------------------------

// copy layout: per vertex, crossings sorted by (relative grade, crossing index)
struct CrossingLayout {
    std::vector<int> vertex_of;  // per crossing
    std::vector<int> copy_of;    // per crossing: index within its vertex block
    std::vector<int> mult;       // per vertex
};

inline CrossingLayout string_layout(const GentlePresentation& A, const HomotopyString& s) {
    CrossingLayout L;
    L.vertex_of = string_crossings(A, s);
    int n = static_cast<int>(L.vertex_of.size());
    std::vector<int> grade(n, 0);
    for (int i = 1; i < n; ++i) grade[i] = grade[i - 1] + grading_step(s.letters[i - 1]);
    L.mult.assign(A.quiver.vertex_count(), 0);
    L.copy_of.assign(n, 0);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (grade[a] != grade[b]) return grade[a] < grade[b];
        return a < b;
    });
    for (int i : order)
        L.copy_of[i] = L.mult[L.vertex_of[i]]++;
    return L;
}

template <class F>
DiffMod<F> string_object(AlgebraPtr alg, F fld, const HomotopyString& input) {
    HomotopyString s = canonical_string(validate_string(*alg, input.letters));
    CrossingLayout L = string_layout(*alg, s);
    DiffMod<F> m(alg, fld);
    m.mult = L.mult;
    for (std::size_t i = 0; i < s.letters.size(); ++i) {
        const Letter& l = s.letters[i];
        int from = static_cast<int>(i);      // crossing at walk source of the letter
        int to = static_cast<int>(i) + 1;    // crossing at walk target
        if (!l.inverse) {
            // module map P_{target} -> P_{source}: row at the earlier crossing
            m.add_coef_entry(l.path, L.copy_of[from], L.copy_of[to], fld.one());
        } else {
            m.add_coef_entry(l.path, L.copy_of[to], L.copy_of[from], fld.one());
        }
    }
    int defect = m.square_defect();
    if (defect >= 0) throw InternalError("string module is not square-zero");
    return m;
}

// Band module for the stored decomposition (orientation and start as given),
// with module parameter J (invertible).  The final letter carries J; all
// others carry the identity.
template <class F>
DiffMod<F> band_object(AlgebraPtr alg, F fld, const HomotopyBand& input, const Mat<F>& J) {
    HomotopyBand b = validate_band(*alg, input.letters);
    if (J.rows != J.cols || J.rows < 1) throw ValidationError("band parameter must be square and nonempty");
    if (!J.is_invertible()) throw ValidationError("band parameter must be invertible");
    int r = static_cast<int>(b.letters.size());
    int n = J.rows;
    std::vector<int> vtx = band_crossings(*alg, b);

    DiffMod<F> m(alg, fld);
    std::vector<std::vector<int>> copy(r, std::vector<int>(n, 0));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j) copy[i][j] = m.mult[vtx[i]]++;

    for (int i = 0; i < r; ++i) {
        const Letter& l = b.letters[i];
        int from = i, to = (i + 1) % r;
        bool wrap = (i == r - 1);
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                typename F::Elt val = wrap ? J.at(a, c) : (a == c ? fld.one() : fld.zero());
                if (fld.is_zero(val)) continue;
                if (!l.inverse)
                    m.add_coef_entry(l.path, copy[from][a], copy[to][c], val);
                else
                    m.add_coef_entry(l.path, copy[to][a], copy[from][c], val);
            }
    }
    for (auto it = m.coef.begin(); it != m.coef.end();)
        it = it->second.is_zero() ? m.coef.erase(it) : std::next(it);
    int defect = m.square_defect();
    if (defect >= 0) throw InternalError("band module is not square-zero");
    return m;
}

// Parameter exponent of the one-step rotation: +1 when the first and last
// letters run on the same side (same direction flag), else -1.
inline int rotation_exponent(const HomotopyBand& b) {
    return b.letters.front().inverse == b.letters.back().inverse ? +1 : -1;
}

// Scaling the differential by lambda carries the band parameter J to
// lambda^(eps * w) J, where w is the winding number and eps = +1 exactly
// when the wrap letter is direct.
template <class F>
Mat<F> twist_target(F fld, const HomotopyBand& b, const Mat<F>& J, const typename F::Elt& lambda) {
    if (fld.is_zero(lambda)) throw ValidationError("twist parameter must be nonzero");
    int expo = winding(b) * (b.letters.back().inverse ? -1 : +1);
    typename F::Elt factor = fld.one();
    typename F::Elt base = expo >= 0 ? lambda : fld.inv(lambda);
    for (int i = 0; i < std::abs(expo); ++i) factor = fld.mul(factor, base);
    return J.scaled(factor);
}

// ---- literals ---------------------------------------------------------------

inline std::string letter_literal(const GentlePresentation& A, const Letter& l) {
    return A.path_literal(l.path) + (l.inverse ? "^-1" : "");
}

inline std::string letters_literal(const GentlePresentation& A, const std::vector<Letter>& ls) {
    std::string out;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        if (i) out += ",";
        out += letter_literal(A, ls[i]);
    }
    return out;
}

inline std::vector<Letter> parse_letters(const GentlePresentation& A, const std::string& text) {
    std::vector<Letter> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.erase(tok.begin());
        while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
        if (tok.empty()) throw ValidationError("empty letter in literal");
        Letter l;
        if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
            l.inverse = true;
            tok = tok.substr(0, tok.size() - 3);
        }
        l.path = A.parse_path_literal(tok);
        if (A.path(l.path).trivial()) throw ValidationError("trivial path cannot be a letter");
        out.push_back(l);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace gentle
