#pragma once

#include <cstdint>
#include <vector>

#include "rfcone/rational.hpp"

namespace rfcone {

// Prime field F_p with elements stored canonically in [0, p).
class GroundField {
public:
    explicit GroundField(std::uint32_t p = 2);

    std::uint32_t p() const { return p_; }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return (a + b) % p_; }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return (a + p_ - b % p_) % p_; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return static_cast<std::uint32_t>((std::uint64_t(a) * b) % p_);
    }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t inv(std::uint32_t a) const;
    std::uint32_t reduce(long long v) const {
        long long r = v % static_cast<long long>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }

    bool operator==(const GroundField& o) const { return p_ == o.p_; }
    bool operator!=(const GroundField& o) const { return p_ != o.p_; }

private:
    std::uint32_t p_;
};

// Dense matrix over F_p.  Entry (i, j) = a[i*cols + j]; column j holds the
// coefficients of the image of the j-th basis vector.
struct FpMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::uint32_t> a;

    FpMatrix() = default;
    FpMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0) {}

    std::uint32_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    std::uint32_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    bool is_zero() const;
    bool operator==(const FpMatrix& o) const { return rows == o.rows && cols == o.cols && a == o.a; }

    static FpMatrix identity(std::size_t n);
};

FpMatrix fp_mul(const GroundField& ff, const FpMatrix& x, const FpMatrix& y);
FpMatrix fp_add(const GroundField& ff, const FpMatrix& x, const FpMatrix& y);
FpMatrix fp_sub(const GroundField& ff, const FpMatrix& x, const FpMatrix& y);
FpMatrix fp_scale(const GroundField& ff, std::uint32_t k, const FpMatrix& x);

std::size_t fp_rank(const GroundField& ff, FpMatrix m);

// Basis of ker(m) as columns.
FpMatrix fp_kernel(const GroundField& ff, FpMatrix m);

// Columns of x and y concatenated side by side (same row count).
FpMatrix fp_hcat(const FpMatrix& x, const FpMatrix& y);

// Solve m * v = b; empty optional if inconsistent.
std::optional<std::vector<std::uint32_t>> fp_solve(const GroundField& ff, FpMatrix m,
                                                   std::vector<std::uint32_t> b);

// Inverse of a square matrix; empty optional if singular.
std::optional<FpMatrix> fp_inverse(const GroundField& ff, FpMatrix m);

} // namespace rfcone
