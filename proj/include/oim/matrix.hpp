#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace oim {

// Dense matrix over Z with arbitrary-precision entries, row-major.
class IntMatrix {
  public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    bool operator==(const IntMatrix& o) const = default;

    void swap_rows(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
    }
    void swap_cols(std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, i), (*this)(r, j));
    }
    // row i -= q * row j
    void row_axpy(std::size_t i, std::size_t j, const mpz_class& q) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) -= q * (*this)(j, c);
    }
    // col i -= q * col j
    void col_axpy(std::size_t i, std::size_t j, const mpz_class& q) {
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, i) -= q * (*this)(r, j);
    }
    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) = -(*this)(i, c);
    }
    // row i += row j
    void row_add(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < cols_; ++c) (*this)(i, c) += (*this)(j, c);
    }

    void append_row(const std::vector<mpz_class>& row) {
        if (rows_ == 0 && cols_ == 0) cols_ = row.size();
        if (row.size() != cols_) throw std::invalid_argument("append_row: column count mismatch");
        a_.insert(a_.end(), row.begin(), row.end());
        ++rows_;
    }

    void truncate_rows(std::size_t r) {
        a_.resize(r * cols_);
        rows_ = r;
    }

    std::vector<mpz_class> row(std::size_t i) const {
        return {a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
    }

  private:
    std::size_t rows_, cols_;
    std::vector<mpz_class> a_;
};

inline IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

// Bareiss determinant (exact, integer).
inline mpz_class determinant(IntMatrix m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
    std::size_t n = m.rows();
    if (n == 0) return 1;
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            m.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(m(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
}

struct SnfResult {
    IntMatrix d; // diagonal, d_i | d_{i+1}, entries >= 0
    IntMatrix p; // unimodular, rows x rows
    IntMatrix q; // unimodular, cols x cols;  p * a * q = d
};

// Smith normal form with transform tracking. Pivot selection: smallest
// nonzero absolute value in the working submatrix.
inline SnfResult smith_normal_form(const IntMatrix& a) {
    std::size_t r = a.rows(), n = a.cols();
    SnfResult s{a, IntMatrix::identity(r), IntMatrix::identity(n)};
    IntMatrix& d = s.d;
    std::size_t t = 0;
    while (t < r && t < n) {
        // locate smallest-abs nonzero entry in d[t.., t..]
        bool found = false;
        std::size_t pi = t, pj = t;
        mpz_class best;
        for (std::size_t i = t; i < r; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (d(i, j) == 0) continue;
                mpz_class v = abs(d(i, j));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (!found) break;
        d.swap_rows(t, pi);
        s.p.swap_rows(t, pi);
        d.swap_cols(t, pj);
        s.q.swap_cols(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (d(i, t) == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
                if (q != 0) {
                    d.row_axpy(i, t, q);
                    s.p.row_axpy(i, t, q);
                }
                if (d(i, t) != 0) {
                    d.swap_rows(t, i);
                    s.p.swap_rows(t, i);
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0) continue;
                mpz_class q;
                mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
                if (q != 0) {
                    d.col_axpy(j, t, q);
                    s.q.col_axpy(j, t, q);
                }
                if (d(t, j) != 0) {
                    d.swap_cols(t, j);
                    s.q.swap_cols(t, j);
                    clean = false;
                    break;
                }
            }
            if (!clean) continue;
            // enforce d(t,t) | d(i,j) for the rest of the submatrix
            bool div_ok = true;
            for (std::size_t i = t + 1; i < r && div_ok; ++i)
                for (std::size_t j = t + 1; j < n && div_ok; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        d.row_add(t, i);
                        s.p.row_add(t, i);
                        div_ok = false;
                    }
            if (div_ok) break;
        }
        if (d(t, t) < 0) {
            d.negate_row(t);
            s.p.negate_row(t);
        }
        ++t;
    }
    return s;
}

// Row-style Hermite normal form: canonical basis of the row lattice.
// Zero rows are dropped; equal HNF <=> equal row span.
inline IntMatrix hermite_normal_form(IntMatrix a) {
    std::size_t r = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        if (r == a.rows()) break;
        for (;;) {
            // smallest-abs nonzero in column j among rows >= r
            bool found = false;
            std::size_t pi = r;
            mpz_class best;
            for (std::size_t i = r; i < a.rows(); ++i) {
                if (a(i, j) == 0) continue;
                mpz_class v = abs(a(i, j));
                if (!found || v < best) {
                    found = true;
                    best = v;
                    pi = i;
                }
            }
            if (!found) goto next_col;
            a.swap_rows(r, pi);
            {
                bool clean = true;
                for (std::size_t i = r + 1; i < a.rows(); ++i) {
                    if (a(i, j) == 0) continue;
                    mpz_class q;
                    mpz_tdiv_q(q.get_mpz_t(), a(i, j).get_mpz_t(), a(r, j).get_mpz_t());
                    if (q != 0) a.row_axpy(i, r, q);
                    if (a(i, j) != 0) clean = false;
                }
                if (clean) break;
            }
        }
        if (a(r, j) < 0) a.negate_row(r);
        // reduce entries above the pivot into [0, pivot)
        for (std::size_t i = 0; i < r; ++i) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), a(i, j).get_mpz_t(), a(r, j).get_mpz_t());
            if (q != 0) a.row_axpy(i, r, q);
        }
        ++r;
    next_col:;
    }
    a.truncate_rows(r);
    return a;
}

inline bool row_spans_equal(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("row_spans_equal: column count mismatch");
    return hermite_normal_form(a) == hermite_normal_form(b);
}

// JSON schema: {"cols": [labels], "rows": [[int,...],...]}
inline nlohmann::json matrix_to_json(const IntMatrix& m, const std::vector<std::string>& col_labels) {
    if (col_labels.size() != m.cols())
        throw std::invalid_argument("matrix_to_json: label count mismatch");
    nlohmann::json j;
    j["cols"] = col_labels;
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (!m(i, c).fits_slong_p())
                throw std::invalid_argument("matrix_to_json: entry exceeds JSON integer range");
            row.push_back(m(i, c).get_si());
        }
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j;
}

inline std::pair<IntMatrix, std::vector<std::string>> matrix_from_json(const nlohmann::json& j) {
    std::vector<std::string> labels = j.at("cols").get<std::vector<std::string>>();
    IntMatrix m(j.at("rows").size(), labels.size());
    std::size_t i = 0;
    for (const auto& row : j.at("rows")) {
        if (row.size() != labels.size())
            throw std::invalid_argument("matrix_from_json: ragged rows");
        std::size_t c = 0;
        for (const auto& v : row) m(i, c++) = mpz_class(v.get<long>());
        ++i;
    }
    return {std::move(m), std::move(labels)};
}

} // namespace oim
