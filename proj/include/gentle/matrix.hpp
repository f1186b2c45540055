// Dense exact matrices over a field model (GF or QQ) with Gaussian
// elimination based rank / kernel / solve, plus the Jordan and companion
// constructors used for band parameters.

#pragma once

#include <optional>
#include <vector>

#include "gentle/scalar.hpp"

namespace gentle {

template <class F>
struct Mat {
    using Elt = typename F::Elt;

    F fld;
    int rows = 0;
    int cols = 0;
    std::vector<Elt> a;  // row-major

    Mat() = default;
    Mat(F f, int r, int c) : fld(f), rows(r), cols(c), a(static_cast<std::size_t>(r) * c, f.zero()) {
        if (r < 0 || c < 0) throw ValidationError("negative matrix dimension");
    }

    static Mat zero(F f, int r, int c) { return Mat(f, r, c); }
    static Mat identity(F f, int n) {
        Mat m(f, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = f.one();
        return m;
    }

    Elt& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    const Elt& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

    bool is_zero() const {
        for (const auto& x : a)
            if (!fld.is_zero(x)) return false;
        return true;
    }

    bool operator==(const Mat& o) const {
        if (rows != o.rows || cols != o.cols) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!fld.eq(a[i], o.a[i])) return false;
        return true;
    }

    Mat operator+(const Mat& o) const {
        require_shape(o.rows, o.cols, "add");
        Mat m = *this;
        for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = fld.add(a[i], o.a[i]);
        return m;
    }
    Mat operator-(const Mat& o) const {
        require_shape(o.rows, o.cols, "sub");
        Mat m = *this;
        for (std::size_t i = 0; i < a.size(); ++i) m.a[i] = fld.sub(a[i], o.a[i]);
        return m;
    }
    Mat operator-() const {
        Mat m = *this;
        for (auto& x : m.a) x = fld.neg(x);
        return m;
    }
    Mat operator*(const Mat& o) const {
        if (cols != o.rows) throw ValidationError("matrix shape mismatch in product");
        Mat m(fld, rows, o.cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k) {
                const Elt& x = at(i, k);
                if (fld.is_zero(x)) continue;
                for (int j = 0; j < o.cols; ++j)
                    m.at(i, j) = fld.add(m.at(i, j), fld.mul(x, o.at(k, j)));
            }
        return m;
    }

    Mat scaled(const Elt& c) const {
        Mat m = *this;
        for (auto& x : m.a) x = fld.mul(x, c);
        return m;
    }

    Mat transpose() const {
        Mat m(fld, cols, rows);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(j, i) = at(i, j);
        return m;
    }

    // Row echelon reduction of a working copy; returns pivot column per
    // eliminated row.
    static std::vector<int> rref(Mat& m) {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < m.cols && r < m.rows; ++c) {
            int piv = -1;
            for (int i = r; i < m.rows; ++i)
                if (!m.fld.is_zero(m.at(i, c))) { piv = i; break; }
            if (piv < 0) continue;
            if (piv != r)
                for (int j = 0; j < m.cols; ++j) std::swap(m.at(piv, j), m.at(r, j));
            Elt s = m.fld.inv(m.at(r, c));
            for (int j = c; j < m.cols; ++j) m.at(r, j) = m.fld.mul(m.at(r, j), s);
            for (int i = 0; i < m.rows; ++i) {
                if (i == r) continue;
                Elt f = m.at(i, c);
                if (m.fld.is_zero(f)) continue;
                for (int j = c; j < m.cols; ++j)
                    m.at(i, j) = m.fld.sub(m.at(i, j), m.fld.mul(f, m.at(r, j)));
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        Mat m = *this;
        return static_cast<int>(rref(m).size());
    }

    // Basis of { v : M v = 0 }, one vector per output entry.
    std::vector<std::vector<Elt>> kernel_basis() const {
        Mat m = *this;
        std::vector<int> pivots = rref(m);
        std::vector<bool> is_pivot(cols, false);
        for (int c : pivots) is_pivot[c] = true;
        std::vector<std::vector<Elt>> basis;
        for (int c = 0; c < cols; ++c) {
            if (is_pivot[c]) continue;
            std::vector<Elt> v(cols, fld.zero());
            v[c] = fld.one();
            for (std::size_t r = 0; r < pivots.size(); ++r)
                v[pivots[r]] = fld.neg(m.at(static_cast<int>(r), c));
            basis.push_back(std::move(v));
        }
        return basis;
    }

    // One solution of M x = rhs, if consistent.
    std::optional<std::vector<Elt>> solve(const std::vector<Elt>& rhs) const {
        if (static_cast<int>(rhs.size()) != rows) throw ValidationError("solve: rhs length mismatch");
        Mat m(fld, rows, cols + 1);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
            m.at(i, cols) = rhs[i];
        }
        std::vector<int> pivots = rref(m);
        std::vector<Elt> x(cols, fld.zero());
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            if (pivots[r] == cols) return std::nullopt;  // inconsistent row
            x[pivots[r]] = m.at(static_cast<int>(r), cols);
        }
        return x;
    }

    std::optional<Mat> inverse() const {
        if (rows != cols) return std::nullopt;
        Mat m(fld, rows, 2 * cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) m.at(i, j) = at(i, j);
            m.at(i, cols + i) = fld.one();
        }
        std::vector<int> pivots = rref(m);
        if (static_cast<int>(pivots.size()) != rows) return std::nullopt;
        for (int r = 0; r < rows; ++r)
            if (pivots[r] != r) return std::nullopt;
        Mat inv(fld, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) inv.at(i, j) = m.at(i, cols + j);
        return inv;
    }

    bool is_invertible() const {
        return rows == cols && rank() == rows;
    }

    // Jordan block J_n(lambda); lambda must be invertible so the block
    // defines a k[x,1/x]-module.
    static Mat jordan(F f, const Elt& lambda, int n) {
        if (f.is_zero(lambda)) throw ValidationError("Jordan block eigenvalue must be nonzero");
        if (n < 1) throw ValidationError("Jordan block size must be >= 1");
        Mat m(f, n, n);
        for (int i = 0; i < n; ++i) {
            m.at(i, i) = lambda;
            if (i + 1 < n) m.at(i, i + 1) = f.one();
        }
        return m;
    }

    // Companion matrix of the monic polynomial x^d + a_{d-1} x^{d-1} + ... + a_0,
    // given the coefficients a_0..a_{d-1}.  Constant term must be nonzero.
    static Mat companion(F f, const std::vector<Elt>& low_coeffs) {
        int d = static_cast<int>(low_coeffs.size());
        if (d < 1) throw ValidationError("companion: need degree >= 1");
        if (f.is_zero(low_coeffs[0]))
            throw ValidationError("companion: constant term must be nonzero (x must act invertibly)");
        Mat m(f, d, d);
        for (int i = 0; i + 1 < d; ++i) m.at(i + 1, i) = f.one();
        for (int i = 0; i < d; ++i) m.at(i, d - 1) = f.neg(low_coeffs[i]);
        return m;
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                if (j) s += ' ';
                s += fld.str(at(i, j));
            }
            s += '\n';
        }
        return s;
    }

  private:
    void require_shape(int r, int c, const char* what) const {
        if (rows != r || cols != c) throw ValidationError(std::string("matrix shape mismatch in ") + what);
    }
};

}  // namespace gentle
