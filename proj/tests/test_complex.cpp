#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_util.hpp"
#include "rfcone/complex.hpp"

using namespace rfcone;
using testutil::Rng;

namespace {

FilteredComplex pair_complex(const Rat& ay, const Rat& ax) {
    // dx = y
    FilteredComplex c;
    c.field = GroundField(2);
    c.basis = {{"y", 0, Action(ay)}, {"x", 1, Action(ax)}};
    c.differential = FpMatrix(2, 2);
    c.differential.at(0, 1) = 1;
    return c;
}

} // namespace

TEST_CASE("window subquotient basics") {
    FilteredComplex c = pair_complex(1, 3);
    // full window is the identity
    FilteredComplex full = window_subquotient(c, ExtAction::neg_inf(), ExtAction::pos_inf());
    CHECK(full.dim() == 2);
    CHECK(full.differential == c.differential);
    // window [2,4): only x, zero differential
    FilteredComplex cut = window_subquotient(c, ExtAction(Action(Rat(2))), ExtAction(Action(Rat(4))));
    REQUIRE(cut.dim() == 1);
    CHECK(cut.basis[0].name == "x");
    CHECK(cut.differential.is_zero());
    // empty window [a, a)
    FilteredComplex none = window_subquotient(c, ExtAction(Action(Rat(2))), ExtAction(Action(Rat(2))));
    CHECK(none.dim() == 0);
}

TEST_CASE("window subquotient nests") {
    Rng rng(77);
    for (int t = 0; t < 40; ++t) {
        FilteredComplex c = testutil::random_complex(rng, 10, 2);
        Rat a(rng.uniform(30), 1 + rng.uniform(3));
        Rat b = a + Rat(1 + rng.uniform(40), 1 + rng.uniform(3));
        Rat a2(rng.uniform(30), 1 + rng.uniform(3));
        Rat b2 = a2 + Rat(1 + rng.uniform(40), 1 + rng.uniform(3));
        ExtAction lo{Action(a)}, hi{Action(b)}, lo2{Action(a2)}, hi2{Action(b2)};
        ExtAction mlo = lo < lo2 ? lo2 : lo;
        ExtAction mhi = hi < hi2 ? hi : hi2;
        if (mhi < mlo) mhi = mlo;
        FilteredComplex twice = window_subquotient(window_subquotient(c, lo, hi), lo2, hi2);
        FilteredComplex once = window_subquotient(c, mlo, mhi);
        CHECK(twice.dim() == once.dim());
        CHECK(twice.differential == once.differential);
    }
}

TEST_CASE("cone of the zero map is the direct sum") {
    ConeData data;
    data.c01 = pair_complex(5, 7);
    data.c10 = pair_complex(1, 3);
    data.c10.basis[0].name = "u";
    data.c10.basis[1].name = "v";
    data.banana = FpMatrix(2, 2);
    FilteredComplex cone = build_cone(data);
    CHECK(cone.dim() == 4);
    auto h = homology_dims(cone);
    CHECK(h.empty()); // two acyclic pairs
    // d^2 = 0 enforced
    CHECK(fp_mul(cone.field, cone.differential, cone.differential).is_zero());
}

TEST_CASE("cone rejects non-chain-map B and bad separation") {
    ConeData data;
    data.c01 = pair_complex(5, 7);
    data.c10 = pair_complex(1, 3);
    data.c10.basis[0].name = "u";
    data.c10.basis[1].name = "v";
    data.banana = FpMatrix(2, 2);
    data.banana.at(0, 1) = 1; // u <- x: B d01 has (u,y)... check fails
    // B d01 = 0 on y col, but d10 B (u,x)=... construct mismatch
    data.banana.at(1, 0) = 1; // v <- y breaks the chain identity
    CHECK_THROWS_AS(build_cone(data), domain_error);

    ConeData overlap;
    overlap.c01 = pair_complex(2, 7);
    overlap.c10 = pair_complex(1, 3); // 3 > 2: separation violated
    overlap.c10.basis[0].name = "u";
    overlap.c10.basis[1].name = "v";
    overlap.banana = FpMatrix(2, 2);
    CHECK_THROWS_AS(build_cone(overlap), domain_error);
}

TEST_CASE("cone long exact sequence rank identity") {
    Rng rng(4096);
    for (int t = 0; t < 60; ++t) {
        // random blocks, ungraded, separated actions
        FilteredComplex c10 = testutil::random_complex(rng, 6, 2);
        FilteredComplex c01 = testutil::random_complex(rng, 6, 2);
        Action shift(Rat(1000));
        for (auto& b : c01.basis) b.action = b.action + shift;
        for (std::size_t i = 0; i < c01.dim(); ++i) c01.basis[i].name = "p" + std::to_string(i);
        c10.grading_modulus = c01.grading_modulus = 1;
        for (auto& b : c10.basis) b.degree = 0;
        for (auto& b : c01.basis) b.degree = 0;
        const auto& ff = c10.field;

        // random chain map B: sample the kernel of X -> d10 X - X d01
        std::size_t m = c10.dim(), n = c01.dim();
        FpMatrix sylvester(m * n, m * n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t eq = i * n + j;
                for (std::size_t k = 0; k < m; ++k)
                    sylvester.at(eq, k * n + j) =
                        ff.add(sylvester.at(eq, k * n + j), c10.differential.at(i, k));
                for (std::size_t k = 0; k < n; ++k)
                    sylvester.at(eq, i * n + k) =
                        ff.sub(sylvester.at(eq, i * n + k), c01.differential.at(k, j));
            }
        FpMatrix ker = fp_kernel(ff, sylvester);
        FpMatrix banana(m, n);
        for (std::size_t col = 0; col < ker.cols; ++col) {
            if (!rng.chance(1, 2)) continue;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    banana.at(i, j) = ff.add(banana.at(i, j), ker.at(i * n + j, col));
        }

        ConeData data{c01, c10, banana};
        FilteredComplex cone = build_cone(data);

        auto dim_h = [](const FilteredComplex& c) {
            std::size_t total = 0;
            for (auto& [d, v] : homology_dims(c)) total += v;
            return total;
        };
        // rank of the connecting map = rank of B on homology:
        // rank[B Z01 | B10-boundaries] - rank[B10-boundaries]
        auto cycle_basis = [&](const FilteredComplex& c) { return fp_kernel(ff, c.differential); };
        FpMatrix bz = fp_mul(ff, banana, cycle_basis(c01));
        std::size_t rank_b10 = fp_rank(ff, c10.differential);
        std::size_t rank_conn = fp_rank(ff, fp_hcat(bz, c10.differential)) - rank_b10;

        std::size_t lhs = dim_h(cone);
        std::size_t h01 = dim_h(data.c01), h10 = dim_h(data.c10);
        CHECK(lhs == h01 + h10 - 2 * rank_conn);
    }
}

TEST_CASE("cone map blocks assemble to a chain map") {
    // identity maps with h = 0 on identical cones
    ConeData data;
    data.c01 = pair_complex(5, 7);
    data.c10 = pair_complex(1, 3);
    data.c10.basis[0].name = "u";
    data.c10.basis[1].name = "v";
    data.banana = FpMatrix(2, 2);
    data.banana.at(1, 1) = 1; // v <- x (degree -1 entry, chain map since dv=0... )
    // check chain identity holds: B d01 (col x) = B(y)=0 vs d10 B (col x) = d10 v = u?
    // d10 v = u, so this B is not a chain map; use B = 0 instead
    data.banana = FpMatrix(2, 2);
    FilteredComplex cone = build_cone(data);

    DegreeEpsMap f01{&data.c01, &data.c01, FpMatrix::identity(2), 0};
    DegreeEpsMap f10{&data.c10, &data.c10, FpMatrix::identity(2), 0};
    FpMatrix h(2, 2);
    DegreeEpsMap f = cone_map(cone, cone, 2, 2, f01, f10, h);
    CHECK(f.matrix == FpMatrix::identity(4));
    CHECK(is_chain_map(f));
}

TEST_CASE("cone map composition is homotopic to upper unitriangular") {
    // Lemma shape: g f - (d H + H d) = [[I, K], [0, I]] with K a chain map.
    Rng rng(5150);
    for (int t = 0; t < 20; ++t) {
        FilteredComplex c10 = testutil::random_complex(rng, 4, 2);
        FilteredComplex c01 = testutil::random_complex(rng, 4, 2);
        Action shift(Rat(1000));
        for (auto& b : c01.basis) b.action = b.action + shift;
        for (std::size_t i = 0; i < c01.dim(); ++i) c01.basis[i].name = "p" + std::to_string(i);
        c10.grading_modulus = c01.grading_modulus = 1;
        for (auto& b : c10.basis) b.degree = 0;
        for (auto& b : c01.basis) b.degree = 0;
        const auto& ff = c10.field;
        FpMatrix banana(c10.dim(), c01.dim()); // zero B on both sides
        ConeData data{c01, c10, banana};
        FilteredComplex cone = build_cone(data);

        // f = g = identity blocks with h = 0; H = diag(h10, h01) random
        // homotopies of identity to itself: take h10, h01 filtered maps and
        // define f' = Id + d h + h d (chain homotopic to identity)
        auto perturb = [&](const FilteredComplex& c) {
            FpMatrix h(c.dim(), c.dim());
            for (std::size_t j = 0; j < c.dim(); ++j)
                for (std::size_t i = 0; i < c.dim(); ++i)
                    if (c.basis[i].action < c.basis[j].action && rng.chance(1, 3))
                        h.at(i, j) = 1;
            FpMatrix m = fp_add(ff, FpMatrix::identity(c.dim()),
                                fp_add(ff, fp_mul(ff, c.differential, h),
                                       fp_mul(ff, h, c.differential)));
            return std::make_pair(m, h);
        };
        auto [m01, h01] = perturb(data.c01);
        auto [m10, h10] = perturb(data.c10);

        DegreeEpsMap f01{&data.c01, &data.c01, m01, 0};
        DegreeEpsMap f10{&data.c10, &data.c10, m10, 0};
        FpMatrix hblock(c10.dim(), c01.dim());
        DegreeEpsMap f = cone_map(cone, cone, c10.dim(), c10.dim(), f01, f10, hblock);
        DegreeEpsMap g = cone_map(cone, cone, c10.dim(), c10.dim(),
                                  DegreeEpsMap{&data.c01, &data.c01, FpMatrix::identity(c01.dim()), 0},
                                  DegreeEpsMap{&data.c10, &data.c10, FpMatrix::identity(c10.dim()), 0},
                                  FpMatrix(c10.dim(), c01.dim()));
        FpMatrix gf = fp_mul(ff, g.matrix, f.matrix);

        // H = diag(h10, h01)
        std::size_t n10 = c10.dim(), n = cone.dim();
        FpMatrix H(n, n);
        for (std::size_t i = 0; i < n10; ++i)
            for (std::size_t j = 0; j < n10; ++j) H.at(i, j) = h10.at(i, j);
        for (std::size_t i = n10; i < n; ++i)
            for (std::size_t j = n10; j < n; ++j) H.at(i, j) = h01.at(i - n10, j - n10);
        FpMatrix boundary = fp_add(ff, fp_mul(ff, cone.differential, H),
                                   fp_mul(ff, H, cone.differential));
        FpMatrix residue = fp_sub(ff, gf, boundary);

        // residue must be [[I, K], [0, I]] with K a chain map
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) CHECK(residue.at(i, j) == 1);
                else if (i >= n10 || j < n10) CHECK(residue.at(i, j) == 0);
            }
        FpMatrix K(n10, cone.dim() - n10);
        for (std::size_t i = 0; i < n10; ++i)
            for (std::size_t j = n10; j < n; ++j) K.at(i, j - n10) = residue.at(i, j);
        FpMatrix lhs = fp_mul(ff, K, data.c01.differential);
        FpMatrix rhs = fp_mul(ff, data.c10.differential, K);
        CHECK(lhs == rhs); // chain map over F_2
    }
}

TEST_CASE("simple equivalence accepts the identity certificate") {
    FilteredComplex c = pair_complex(0 + 1, 10 + 1); // actions 1 and 11, gap 10
    EquivalenceCertificate cert;
    cert.phi = cert.psi = FpMatrix::identity(2);
    cert.K = cert.K_prime = FpMatrix(2, 2);
    cert.auto_src = cert.auto_dst = FpMatrix::identity(2);
    cert.eps = 1;
    Verdict v = check_simple_equivalence(c, c, cert, Rat(10));
    CHECK(v.hypotheses_ok);
    CHECK(v.confirmed);
    CHECK(v.upper_triangular_units);
}

TEST_CASE("simple equivalence gate rejects delta <= 4 eps") {
    FilteredComplex c = pair_complex(1, 11);
    EquivalenceCertificate cert;
    cert.phi = cert.psi = FpMatrix::identity(2);
    cert.K = cert.K_prime = FpMatrix(2, 2);
    cert.auto_src = cert.auto_dst = FpMatrix::identity(2);
    cert.eps = 3; // 4 eps = 12 > 10
    Verdict v = check_simple_equivalence(c, c, cert, Rat(10));
    CHECK(!v.hypotheses_ok);
    CHECK(!v.confirmed);
    REQUIRE(!v.messages.empty());
    CHECK(v.messages.front().find("delta > 4*eps") != std::string::npos);
}

TEST_CASE("birth death window shape") {
    // C has the pair at actions 3, 13/4 inside [a+d, a+3d) with a = 3/2,
    // d = 1; C' is empty there
    FilteredComplex c = pair_complex(3, Rat(13, 4));
    FilteredComplex empty;
    empty.field = GroundField(2);
    empty.differential = FpMatrix(0, 0);

    EquivalenceCertificate cert;
    cert.phi = FpMatrix(0, 2);
    cert.psi = FpMatrix(2, 0);
    cert.K = FpMatrix(2, 2);
    cert.K.at(1, 0) = 1; // contraction y -> x: dK + Kd = Id over F_2
    cert.K_prime = FpMatrix(0, 0);
    cert.auto_src = FpMatrix::identity(2); // 0 = psi phi = Id + (dK + Kd) over F_2
    cert.auto_dst = FpMatrix(0, 0);
    cert.eps = Rat(1, 2);
    BirthDeathVerdict v = check_birth_death_shape(c, empty, Action(Rat(3, 2)), Rat(1), cert);
    CHECK(v.hypotheses_ok);
    CHECK(v.confirmed);
    CHECK(v.unit == 1);
    CHECK(v.x_name == "x");
    CHECK(v.y_name == "y");
}

TEST_CASE("birth death shape fails on non-acyclic window") {
    FilteredComplex c = pair_complex(3, Rat(13, 4));
    c.differential.at(0, 1) = 0; // no pairing: window not acyclic
    FilteredComplex empty;
    empty.field = GroundField(2);
    empty.differential = FpMatrix(0, 0);
    EquivalenceCertificate cert;
    cert.phi = FpMatrix(0, 2);
    cert.psi = FpMatrix(2, 0);
    cert.K = FpMatrix(2, 2);
    cert.K_prime = FpMatrix(0, 0);
    cert.auto_src = FpMatrix::identity(2);
    cert.auto_dst = FpMatrix(0, 0);
    cert.eps = Rat(1, 2);
    BirthDeathVerdict v = check_birth_death_shape(c, empty, Action(Rat(3, 2)), Rat(1), cert);
    CHECK(!v.confirmed);
    bool found = false;
    for (const auto& m : v.messages)
        if (m.find("not acyclic") != std::string::npos) found = true;
    // hypotheses fail earlier here: psi phi = 0 != Id + dK + Kd without the pairing
    CHECK((found || !v.hypotheses_ok));
}

TEST_CASE("solve_homotopy finds certificates") {
    Rng rng(31337);
    for (int t = 0; t < 20; ++t) {
        FilteredComplex c = testutil::random_complex(rng, 6, 2);
        const auto& ff = c.field;
        // g = dK + Kd for random K is always solvable
        FpMatrix k(c.dim(), c.dim());
        for (auto& v : k.a) v = static_cast<std::uint32_t>(rng.uniform(2));
        FpMatrix g = fp_add(ff, fp_mul(ff, c.differential, k), fp_mul(ff, k, c.differential));
        auto h = solve_homotopy(ff, c.differential, c.differential, g);
        REQUIRE(h.has_value());
        FpMatrix check = fp_add(ff, fp_mul(ff, c.differential, *h), fp_mul(ff, *h, c.differential));
        CHECK(check == g);
    }
}
