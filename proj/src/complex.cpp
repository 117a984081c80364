#include "rfcone/complex.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace rfcone {

int FilteredComplex::degree_mod(int d) const {
    if (grading_modulus == 0) return d;
    return ((d % grading_modulus) + grading_modulus) % grading_modulus;
}

std::uint32_t FilteredComplex::index_of(const std::string& name) const {
    for (std::uint32_t i = 0; i < basis.size(); ++i)
        if (basis[i].name == name) return i;
    throw domain_error("unknown basis element '" + name + "'");
}

std::optional<Action> FilteredComplex::min_action_gap() const {
    std::vector<Action> vals;
    for (const auto& b : basis) vals.push_back(b.action);
    std::sort(vals.begin(), vals.end(), ActionKeyLess{});
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    std::optional<Action> gap;
    for (std::size_t i = 1; i < vals.size(); ++i) {
        Action d = vals[i] - vals[i - 1];
        if (!gap || d < *gap) gap = d;
    }
    return gap;
}

std::vector<std::string> validate_complex(const FilteredComplex& c) {
    std::vector<std::string> v;
    const std::size_t n = c.dim();
    if (c.differential.rows != n || c.differential.cols != n) {
        v.push_back("differential matrix has wrong shape");
        return v;
    }
    {
        std::map<std::string, int> seen;
        for (const auto& b : c.basis)
            if (++seen[b.name] == 2) v.push_back("duplicate basis name '" + b.name + "'");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& b = c.basis[i];
        ExtAction a(b.action);
        if (a < c.window_lo || !(a < c.window_hi))
            v.push_back("basis element '" + b.name + "' action outside window");
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            if (c.differential.at(i, j) == 0) continue;
            if (!(c.basis[i].action < c.basis[j].action))
                v.push_back("differential entry ('" + c.basis[i].name + "','" + c.basis[j].name +
                            "') does not strictly decrease action");
            if (c.degree_mod(c.basis[i].degree) != c.degree_mod(c.basis[j].degree - 1))
                v.push_back("differential entry ('" + c.basis[i].name + "','" + c.basis[j].name +
                            "') is not of degree -1");
        }
    FpMatrix sq = fp_mul(c.field, c.differential, c.differential);
    if (!sq.is_zero()) v.push_back("differential does not square to zero");
    return v;
}

void require_valid(const FilteredComplex& c) {
    auto v = validate_complex(c);
    if (!v.empty()) {
        std::ostringstream os;
        os << "invalid filtered complex:";
        for (const auto& s : v) os << "\n  " << s;
        throw domain_error(os.str());
    }
}

std::map<int, std::size_t> homology_dims(const FilteredComplex& c) {
    // group columns by canonical degree
    std::map<int, std::vector<std::size_t>> by_deg;
    for (std::size_t i = 0; i < c.dim(); ++i) by_deg[c.degree_mod(c.basis[i].degree)].push_back(i);

    auto boundary_from = [&](int d) {
        // submatrix of columns in degree d (all rows)
        auto it = by_deg.find(c.degree_mod(d));
        std::size_t cols = (it == by_deg.end()) ? 0 : it->second.size();
        FpMatrix m(c.dim(), cols);
        if (it != by_deg.end())
            for (std::size_t k = 0; k < cols; ++k)
                for (std::size_t i = 0; i < c.dim(); ++i)
                    m.at(i, k) = c.differential.at(i, it->second[k]);
        return m;
    };

    std::map<int, std::size_t> result;
    for (const auto& [d, idx] : by_deg) {
        std::size_t dim_d = idx.size();
        std::size_t rank_d = fp_rank(c.field, boundary_from(d));
        std::size_t rank_above = fp_rank(c.field, boundary_from(d + 1));
        std::size_t h = dim_d - rank_d - rank_above;
        if (h) result[d] = h;
    }
    return result;
}

FilteredComplex window_subquotient(const FilteredComplex& c, const ExtAction& a, const ExtAction& b) {
    if (b < a) throw domain_error("window bounds out of order");
    FilteredComplex r;
    r.field = c.field;
    r.grading_modulus = c.grading_modulus;
    r.window_lo = c.window_lo < a ? a : c.window_lo;
    r.window_hi = b < c.window_hi ? b : c.window_hi;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        ExtAction act(c.basis[i].action);
        if (!(act < r.window_lo) && act < r.window_hi) keep.push_back(i);
    }
    for (auto i : keep) r.basis.push_back(c.basis[i]);
    r.differential = FpMatrix(keep.size(), keep.size());
    for (std::size_t jj = 0; jj < keep.size(); ++jj)
        for (std::size_t ii = 0; ii < keep.size(); ++ii)
            r.differential.at(ii, jj) = c.differential.at(keep[ii], keep[jj]);
    return r;
}

bool map_has_degree_eps(const DegreeEpsMap& f) {
    const auto& src = *f.source;
    const auto& dst = *f.target;
    for (std::size_t j = 0; j < src.dim(); ++j)
        for (std::size_t i = 0; i < dst.dim(); ++i) {
            if (f.matrix.at(i, j) == 0) continue;
            Action bound = src.basis[j].action + Action(f.eps);
            if (bound < dst.basis[i].action) return false;
        }
    return true;
}

bool is_chain_map(const DegreeEpsMap& f) {
    FpMatrix lhs = fp_mul(f.source->field, f.matrix, f.source->differential);
    FpMatrix rhs = fp_mul(f.source->field, f.target->differential, f.matrix);
    return lhs == rhs;
}

FilteredComplex build_cone(const ConeData& data, const ConeOptions& opts) {
    const auto& c01 = data.c01;
    const auto& c10 = data.c10;
    if (c01.field != c10.field) throw domain_error("cone blocks over different fields");
    if (c01.grading_modulus != c10.grading_modulus)
        throw domain_error("cone blocks with different grading moduli");
    require_valid(c01);
    require_valid(c10);
    if (data.banana.rows != c10.dim() || data.banana.cols != c01.dim())
        throw domain_error("B matrix has wrong shape");
    for (const auto& hi : c01.basis)
        for (const auto& lo : c10.basis)
            if (!(lo.action < hi.action))
                throw domain_error("action separation violated: '" + lo.name + "' is not below '" +
                                   hi.name + "'");
    // chain map: B d01 = d10 B
    FpMatrix lhs = fp_mul(c01.field, data.banana, c01.differential);
    FpMatrix rhs = fp_mul(c01.field, c10.differential, data.banana);
    if (!(lhs == rhs)) throw domain_error("B is not a chain map (B d01 != d10 B)");

    FilteredComplex cone;
    cone.field = c01.field;
    cone.grading_modulus = c01.grading_modulus;
    cone.window_lo = c10.window_lo < c01.window_lo ? c10.window_lo : c01.window_lo;
    cone.window_hi = c10.window_hi < c01.window_hi ? c01.window_hi : c10.window_hi;
    std::size_t n10 = c10.dim(), n01 = c01.dim();
    for (const auto& b : c10.basis) {
        BasisElement e = b;
        if (opts.rabinowitz_shift) e.degree = *opts.rabinowitz_shift - b.degree - 2;
        cone.basis.push_back(e);
    }
    for (const auto& b : c01.basis) cone.basis.push_back(b);
    cone.differential = FpMatrix(n10 + n01, n10 + n01);
    const auto& ff = cone.field;
    for (std::size_t i = 0; i < n10; ++i)
        for (std::size_t j = 0; j < n10; ++j)
            cone.differential.at(i, j) = ff.neg(c10.differential.at(i, j));
    for (std::size_t i = 0; i < n10; ++i)
        for (std::size_t j = 0; j < n01; ++j)
            cone.differential.at(i, n10 + j) = data.banana.at(i, j);
    for (std::size_t i = 0; i < n01; ++i)
        for (std::size_t j = 0; j < n01; ++j)
            cone.differential.at(n10 + i, n10 + j) = c01.differential.at(i, j);
    require_valid(cone);
    return cone;
}

ConeBlocks cone_blocks(const FilteredComplex& cone, std::size_t n10) {
    if (n10 > cone.dim()) throw domain_error("cone split out of range");
    std::size_t n01 = cone.dim() - n10;
    ConeBlocks b;
    b.n10 = n10;
    b.d10 = FpMatrix(n10, n10);
    b.d01 = FpMatrix(n01, n01);
    b.banana = FpMatrix(n10, n01);
    const auto& ff = cone.field;
    for (std::size_t i = 0; i < n10; ++i)
        for (std::size_t j = 0; j < n10; ++j) b.d10.at(i, j) = ff.neg(cone.differential.at(i, j));
    for (std::size_t i = 0; i < n10; ++i)
        for (std::size_t j = 0; j < n01; ++j) b.banana.at(i, j) = cone.differential.at(i, n10 + j);
    for (std::size_t i = 0; i < n01; ++i)
        for (std::size_t j = 0; j < n01; ++j) b.d01.at(i, j) = cone.differential.at(n10 + i, n10 + j);
    return b;
}

DegreeEpsMap cone_map(const FilteredComplex& cone_src, const FilteredComplex& cone_dst,
                      std::size_t n10_src, std::size_t n10_dst,
                      const DegreeEpsMap& f01, const DegreeEpsMap& f10, const FpMatrix& h) {
    std::size_t n01_src = cone_src.dim() - n10_src;
    std::size_t n01_dst = cone_dst.dim() - n10_dst;
    if (f10.matrix.rows != n10_dst || f10.matrix.cols != n10_src)
        throw domain_error("f10 block has wrong shape");
    if (f01.matrix.rows != n01_dst || f01.matrix.cols != n01_src)
        throw domain_error("f01 block has wrong shape");
    if (h.rows != n10_dst || h.cols != n01_src) throw domain_error("h block has wrong shape");

    DegreeEpsMap f;
    f.source = &cone_src;
    f.target = &cone_dst;
    f.eps = std::max(f01.eps, f10.eps);
    f.matrix = FpMatrix(cone_dst.dim(), cone_src.dim());
    for (std::size_t i = 0; i < n10_dst; ++i) {
        for (std::size_t j = 0; j < n10_src; ++j) f.matrix.at(i, j) = f10.matrix.at(i, j);
        for (std::size_t j = 0; j < n01_src; ++j) f.matrix.at(i, n10_src + j) = h.at(i, j);
    }
    for (std::size_t i = 0; i < n01_dst; ++i)
        for (std::size_t j = 0; j < n01_src; ++j)
            f.matrix.at(n10_dst + i, n10_src + j) = f01.matrix.at(i, j);
    if (!is_chain_map(f))
        throw domain_error("cone map is not a chain map: the homotopy identity fails");
    return f;
}

bool is_filtered_automorphism(const FilteredComplex& c, const FpMatrix& m) {
    if (m.rows != c.dim() || m.cols != c.dim()) return false;
    auto inv = fp_inverse(c.field, m);
    if (!inv) return false;
    auto filtration_ok = [&](const FpMatrix& x) {
        for (std::size_t j = 0; j < c.dim(); ++j)
            for (std::size_t i = 0; i < c.dim(); ++i) {
                if (x.at(i, j) == 0) continue;
                if (c.basis[j].action < c.basis[i].action) return false;
                if (c.degree_mod(c.basis[i].degree) != c.degree_mod(c.basis[j].degree)) return false;
            }
        return true;
    };
    if (!filtration_ok(m) || !filtration_ok(*inv)) return false;
    FpMatrix lhs = fp_mul(c.field, m, c.differential);
    FpMatrix rhs = fp_mul(c.field, c.differential, m);
    return lhs == rhs;
}

namespace {

// dK + Kd for K : C -> C' (here C = C' in the certificate identities).
FpMatrix homotopy_boundary(const GroundField& ff, const FpMatrix& d, const FpMatrix& k) {
    return fp_add(ff, fp_mul(ff, d, k), fp_mul(ff, k, d));
}

bool matrix_degree_eps(const FilteredComplex& src, const FilteredComplex& dst, const FpMatrix& m,
                       const Rat& eps) {
    DegreeEpsMap f;
    f.source = &src;
    f.target = &dst;
    f.matrix = m;
    f.eps = eps;
    return map_has_degree_eps(f);
}

std::vector<std::size_t> sorted_increasing(const FilteredComplex& c) {
    std::vector<std::size_t> idx(c.dim());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (c.basis[a].action != c.basis[b].action) return c.basis[a].action < c.basis[b].action;
        return a < b;
    });
    return idx;
}

} // namespace

Verdict check_simple_equivalence(const FilteredComplex& c, const FilteredComplex& c_prime,
                                 const EquivalenceCertificate& cert, const Rat& delta) {
    Verdict v;
    auto fail = [&](const std::string& msg) {
        v.messages.push_back(msg);
        return v;
    };
    if (delta <= 0) return fail("hypothesis violated: delta must be positive");
    if (!(delta > 4 * cert.eps)) return fail("hypothesis violated: need delta > 4*eps");
    // delta-gapped: distinct action values differ by at least delta
    {
        std::vector<Action> vals;
        for (const auto& b : c.basis) vals.push_back(b.action);
        std::sort(vals.begin(), vals.end(), ActionKeyLess{});
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] - vals[i - 1] < Action(delta))
                return fail("hypothesis violated: complex is not delta-gapped");
    }
    if (c.dim() != c_prime.dim())
        return fail("hypothesis violated: no action-compatible basis bijection (dimension mismatch)");
    {
        auto is = sorted_increasing(c);
        auto it = sorted_increasing(c_prime);
        for (std::size_t k = 0; k < is.size(); ++k)
            if (Action(cert.eps) < c.basis[is[k]].action - c_prime.basis[it[k]].action)
                return fail("hypothesis violated: basis bijection shifts action by more than eps");
    }
    const auto& ff = c.field;
    DegreeEpsMap phi{&c, &c_prime, cert.phi, cert.eps};
    DegreeEpsMap psi{&c_prime, &c, cert.psi, cert.eps};
    if (!is_chain_map(phi) || !map_has_degree_eps(phi))
        return fail("certificate failure: phi is not a degree-eps chain map");
    if (!is_chain_map(psi) || !map_has_degree_eps(psi))
        return fail("certificate failure: psi is not a degree-eps chain map");
    if (!is_filtered_automorphism(c, cert.auto_src))
        return fail("certificate failure: supplied source comparison map is not a filtered automorphism");
    if (!is_filtered_automorphism(c_prime, cert.auto_dst))
        return fail("certificate failure: supplied target comparison map is not a filtered automorphism");
    if (!matrix_degree_eps(c, c, cert.K, cert.eps))
        return fail("certificate failure: K exceeds degree eps");
    if (!matrix_degree_eps(c_prime, c_prime, cert.K_prime, cert.eps))
        return fail("certificate failure: K' exceeds degree eps");
    {
        FpMatrix lhs = fp_mul(ff, cert.psi, cert.phi);
        FpMatrix rhs = fp_add(ff, cert.auto_src, homotopy_boundary(ff, c.differential, cert.K));
        if (!(lhs == rhs)) return fail("certificate failure: psi phi != Phi + dK + Kd");
    }
    {
        FpMatrix lhs = fp_mul(ff, cert.phi, cert.psi);
        FpMatrix rhs =
            fp_add(ff, cert.auto_dst, homotopy_boundary(ff, c_prime.differential, cert.K_prime));
        if (!(lhs == rhs)) return fail("certificate failure: phi psi != Phi' + dK' + K'd");
    }
    v.hypotheses_ok = true;

    auto inv = fp_inverse(ff, cert.phi);
    if (!inv) {
        v.messages.push_back("phi is singular despite valid hypotheses");
        return v;
    }
    v.confirmed = true;

    // upper-triangular with unit diagonal in decreasing-action bases,
    // meaningful when all action values are distinct
    bool distinct = true;
    {
        std::vector<Action> vals;
        for (const auto& b : c.basis) vals.push_back(b.action);
        std::sort(vals.begin(), vals.end(), ActionKeyLess{});
        for (std::size_t i = 1; i < vals.size(); ++i)
            if (vals[i] == vals[i - 1]) distinct = false;
    }
    if (distinct) {
        // in bases sorted by action, entries sit at target action
        // <= source action (the eps slack is below the gap), with units on
        // the diagonal
        auto is = sorted_increasing(c);
        auto it = sorted_increasing(c_prime);
        bool ut = true;
        for (std::size_t jj = 0; jj < is.size() && ut; ++jj)
            for (std::size_t ii = 0; ii < it.size(); ++ii) {
                std::uint32_t e = cert.phi.at(it[ii], is[jj]);
                if (ii > jj && e != 0) { ut = false; break; }
                if (ii == jj && e == 0) { ut = false; break; }
            }
        v.upper_triangular_units = ut;
        if (!ut) v.messages.push_back("phi is not upper-triangular with unit diagonal");
    }
    return v;
}

BirthDeathVerdict check_birth_death_shape(const FilteredComplex& c, const FilteredComplex& c_prime,
                                          const Action& a, const Rat& delta,
                                          const EquivalenceCertificate& cert) {
    BirthDeathVerdict v;
    auto fail = [&](const std::string& msg) {
        v.messages.push_back(msg);
        return v;
    };
    if (delta <= 0) return fail("hypothesis violated: delta must be positive");
    if (!(Rat(cert.eps) < delta)) return fail("hypothesis violated: need delta > eps");
    Action d(delta);
    FilteredComplex inner = window_subquotient(c, a + d, a + d * 3);
    FilteredComplex outer = window_subquotient(c, a, a + d * 4);
    if (inner.dim() != 2 || outer.dim() != 2)
        return fail("window complex is not two-dimensional");
    {
        std::vector<std::string> ni, no;
        for (const auto& b : inner.basis) ni.push_back(b.name);
        for (const auto& b : outer.basis) no.push_back(b.name);
        std::sort(ni.begin(), ni.end());
        std::sort(no.begin(), no.end());
        if (ni != no) return fail("windows [a+d,a+3d) and [a,a+4d) disagree");
    }
    FilteredComplex other = window_subquotient(c_prime, a, a + d * 4);
    if (other.dim() != 0) return fail("second complex is nonempty in the window");

    const auto& ff = c.field;
    DegreeEpsMap phi{&c, &c_prime, cert.phi, cert.eps};
    DegreeEpsMap psi{&c_prime, &c, cert.psi, cert.eps};
    if (!is_chain_map(phi) || !map_has_degree_eps(phi))
        return fail("certificate failure: phi is not a degree-eps chain map");
    if (!is_chain_map(psi) || !map_has_degree_eps(psi))
        return fail("certificate failure: psi is not a degree-eps chain map");
    if (!is_filtered_automorphism(c, cert.auto_src))
        return fail("certificate failure: supplied source comparison map is not a filtered automorphism");
    if (!is_filtered_automorphism(c_prime, cert.auto_dst))
        return fail("certificate failure: supplied target comparison map is not a filtered automorphism");
    {
        FpMatrix lhs = fp_mul(ff, cert.psi, cert.phi);
        FpMatrix rhs = fp_add(ff, cert.auto_src, homotopy_boundary(ff, c.differential, cert.K));
        if (!(lhs == rhs)) return fail("certificate failure: psi phi != Phi + dK + Kd");
    }
    {
        FpMatrix lhs = fp_mul(ff, cert.phi, cert.psi);
        FpMatrix rhs =
            fp_add(ff, cert.auto_dst, homotopy_boundary(ff, c_prime.differential, cert.K_prime));
        if (!(lhs == rhs)) return fail("certificate failure: phi psi != Phi' + dK' + K'd");
    }
    v.hypotheses_ok = true;

    // the two-element window must be dx = k y with k a unit
    std::size_t x = inner.basis[0].action < inner.basis[1].action ? 1 : 0;
    std::size_t y = 1 - x;
    std::uint32_t k = inner.differential.at(y, x);
    if (k == 0) {
        v.messages.push_back("window complex not acyclic");
        return v;
    }
    v.confirmed = true;
    v.unit = k;
    v.x_name = inner.basis[x].name;
    v.y_name = inner.basis[y].name;
    return v;
}

std::optional<FpMatrix> solve_homotopy(const GroundField& ff, const FpMatrix& d_source,
                                       const FpMatrix& d_target, const FpMatrix& g) {
    std::size_t m = g.rows, n = g.cols;
    if (d_target.rows != m || d_target.cols != m || d_source.rows != n || d_source.cols != n)
        throw domain_error("solve_homotopy: dimension mismatch");
    // unknowns h_{ij} flattened as i*n + j
    FpMatrix sys(m * n, m * n);
    std::vector<std::uint32_t> rhs(m * n, 0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t eq = i * n + j;
            rhs[eq] = g.at(i, j);
            for (std::size_t k = 0; k < m; ++k)
                sys.at(eq, k * n + j) = ff.add(sys.at(eq, k * n + j), d_target.at(i, k));
            for (std::size_t k = 0; k < n; ++k)
                sys.at(eq, i * n + k) = ff.add(sys.at(eq, i * n + k), d_source.at(k, j));
        }
    auto sol = fp_solve(ff, sys, rhs);
    if (!sol) return std::nullopt;
    FpMatrix h(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) h.at(i, j) = (*sol)[i * n + j];
    return h;
}

} // namespace rfcone
