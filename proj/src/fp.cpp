#include "rfcone/fp.hpp"

namespace rfcone {

namespace {

bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

} // namespace

GroundField::GroundField(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw domain_error("ground field characteristic must be prime, got " + std::to_string(p));
}

std::uint32_t GroundField::inv(std::uint32_t a) const {
    a %= p_;
    if (a == 0) throw domain_error("inverse of 0 in F_p");
    // extended Euclid
    long long t = 0, newt = 1, r = p_, newr = a;
    while (newr != 0) {
        long long q = r / newr;
        t = std::exchange(newt, t - q * newt);
        r = std::exchange(newr, r - q * newr);
    }
    return reduce(t);
}

bool FpMatrix::is_zero() const {
    for (auto v : a)
        if (v) return false;
    return true;
}

FpMatrix FpMatrix::identity(std::size_t n) {
    FpMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FpMatrix fp_mul(const GroundField& ff, const FpMatrix& x, const FpMatrix& y) {
    if (x.cols != y.rows) throw domain_error("matrix dimension mismatch in product");
    FpMatrix r(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            std::uint32_t v = x.at(i, k);
            if (!v) continue;
            for (std::size_t j = 0; j < y.cols; ++j)
                r.at(i, j) = ff.add(r.at(i, j), ff.mul(v, y.at(k, j)));
        }
    return r;
}

FpMatrix fp_add(const GroundField& ff, const FpMatrix& x, const FpMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw domain_error("matrix dimension mismatch in sum");
    FpMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = ff.add(x.a[i], y.a[i]);
    return r;
}

FpMatrix fp_sub(const GroundField& ff, const FpMatrix& x, const FpMatrix& y) {
    if (x.rows != y.rows || x.cols != y.cols) throw domain_error("matrix dimension mismatch in difference");
    FpMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = ff.sub(x.a[i], y.a[i]);
    return r;
}

FpMatrix fp_scale(const GroundField& ff, std::uint32_t k, const FpMatrix& x) {
    FpMatrix r(x.rows, x.cols);
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = ff.mul(k, x.a[i]);
    return r;
}

namespace {

// Row echelon; returns pivot columns.  Operates in place.
std::vector<std::size_t> echelon(const GroundField& ff, FpMatrix& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols && row < m.rows; ++col) {
        std::size_t sel = row;
        while (sel < m.rows && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows) continue;
        if (sel != row)
            for (std::size_t j = 0; j < m.cols; ++j) std::swap(m.at(sel, j), m.at(row, j));
        std::uint32_t piv = ff.inv(m.at(row, col));
        for (std::size_t j = col; j < m.cols; ++j) m.at(row, j) = ff.mul(piv, m.at(row, j));
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == row) continue;
            std::uint32_t f = m.at(i, col);
            if (!f) continue;
            for (std::size_t j = col; j < m.cols; ++j)
                m.at(i, j) = ff.sub(m.at(i, j), ff.mul(f, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

} // namespace

std::size_t fp_rank(const GroundField& ff, FpMatrix m) { return echelon(ff, m).size(); }

FpMatrix fp_kernel(const GroundField& ff, FpMatrix m) {
    std::size_t n = m.cols;
    auto pivots = echelon(ff, m);
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    FpMatrix ker(n, free_cols.size());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        std::size_t fc = free_cols[k];
        ker.at(fc, k) = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r)
            ker.at(pivots[r], k) = ff.neg(m.at(r, fc));
    }
    return ker;
}

FpMatrix fp_hcat(const FpMatrix& x, const FpMatrix& y) {
    if (x.rows != y.rows) throw domain_error("hcat row mismatch");
    FpMatrix r(x.rows, x.cols + y.cols);
    for (std::size_t i = 0; i < x.rows; ++i) {
        for (std::size_t j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
        for (std::size_t j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

std::optional<std::vector<std::uint32_t>> fp_solve(const GroundField& ff, FpMatrix m,
                                                   std::vector<std::uint32_t> b) {
    if (b.size() != m.rows) throw domain_error("solve: rhs size mismatch");
    FpMatrix aug(m.rows, m.cols + 1);
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols) = b[i];
    }
    auto pivots = echelon(ff, aug);
    if (!pivots.empty() && pivots.back() == m.cols) return std::nullopt; // pivot in rhs column
    std::vector<std::uint32_t> x(m.cols, 0);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, m.cols);
    return x;
}

std::optional<FpMatrix> fp_inverse(const GroundField& ff, FpMatrix m) {
    if (m.rows != m.cols) throw domain_error("inverse of non-square matrix");
    std::size_t n = m.rows;
    FpMatrix aug = fp_hcat(m, FpMatrix::identity(n));
    auto pivots = echelon(ff, aug);
    if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
    FpMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

} // namespace rfcone
