#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "spinlab/clifford.hpp"
#include "spinlab/core/rng.hpp"

using namespace spinlab;

TEST_CASE("relations, anti-Hermiticity and omega^2 are exact for n=1..12") {
    for (int n = 1; n <= 12; ++n) {
        clifford_rep rep = build_rep(n);
        CHECK(rep.N == (1 << (n / 2)));
        CHECK(clifford_relation_defect(rep) == 0.0);
        volume_element_t v = volume_element(rep);
        cmat sq = v.omega * v.omega;
        cmat want = double(v.square_sign) * cmat::Identity(rep.N, rep.N);
        CHECK((sq - want).cwiseAbs().maxCoeff() == 0.0);
        CHECK(v.square_sign == (((n * (n + 1) / 2) % 2) ? -1 : 1));
    }
}

TEST_CASE("entries lie exactly in {0,+-1,+-i}") {
    for (int n = 1; n <= 12; ++n) {
        clifford_rep rep = build_rep(n);
        for (const cmat& g : rep.gamma)
            for (int i = 0; i < rep.N; ++i)
                for (int j = 0; j < rep.N; ++j) {
                    double re = g(i, j).real(), im = g(i, j).imag();
                    CHECK((re == 0.0 || re == 1.0 || re == -1.0));
                    CHECK((im == 0.0 || im == 1.0 || im == -1.0));
                    CHECK(re * im == 0.0);
                }
    }
}

TEST_CASE("omega_sign selects the two inequivalent odd-n irreps") {
    for (int n = 1; n <= 11; n += 2) {
        clifford_rep rp = build_rep(n, +1);
        clifford_rep rm = build_rep(n, -1);
        CHECK(clifford_relation_defect(rm) == 0.0);
        cmat op = volume_element(rp).omega;
        cmat om = volume_element(rm).omega;
        CHECK((op + om).cwiseAbs().maxCoeff() == 0.0); // omega flips sign
        // scalars, and the +1 rep has omega in {Id, i Id}
        CHECK((op - op(0, 0) * cmat::Identity(rp.N, rp.N)).cwiseAbs().maxCoeff() == 0.0);
        CHECK(op(0, 0).real() + op(0, 0).imag() == 1.0);
    }
}

TEST_CASE("n=2,3 gammas are i*sigma_k") {
    clifford_rep rep = build_rep(3);
    const cplx I(0, 1);
    cmat s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -I, I, 0;
    s3 << 1, 0, 0, -1;
    CHECK((rep.gamma[0] - I * s1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((rep.gamma[1] - I * s2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((rep.gamma[2] - I * s3).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nu exists with zero defect iff n != 3 mod 4") {
    for (int n = 1; n <= 12; ++n) {
        clifford_rep rep = build_rep(n);
        if (n % 4 == 3) {
            CHECK_THROWS_AS((void)build_nu(rep), n_unavailable);
            continue;
        }
        symmetry_automorphism nu = build_nu(rep);
        CHECK(nu_anticommutator_defect(rep, nu) == 0.0);
        CHECK(nu.kind == (n % 2 == 0 ? nu_kind::complex_linear : nu_kind::conjugate_linear));
        // unitary B: preserves norms
        CHECK((nu.B.adjoint() * nu.B - cmat::Identity(rep.N, rep.N)).cwiseAbs().maxCoeff()
              == doctest::Approx(0.0));
    }
}

TEST_CASE("nu commutes with even gamma products") {
    rng r(421);
    for (int n : {2, 4, 5, 8, 9}) {
        clifford_rep rep = build_rep(n);
        symmetry_automorphism nu = build_nu(rep);
        for (int rep_i = 0; rep_i < 5; ++rep_i) {
            rvec x = r.point(n, -1, 1), y = r.point(n, -1, 1);
            cvec v = r.spinor(rep.N);
            cmat gg = rep.g(x) * rep.g(y);
            cvec a = nu.apply(gg * v);
            cvec b = gg * nu.apply(v);
            CHECK((a - b).norm() < 1e-13);
        }
    }
}

TEST_CASE("quaternionic structure exists iff n = 2,3,4 mod 8") {
    for (int n = 1; n <= 12; ++n) {
        clifford_rep rep = build_rep(n);
        int r = n % 8;
        bool expect = (r == 2 || r == 3 || r == 4);
        if (!expect) {
            CHECK_THROWS_AS((void)build_quaternionic(rep), q_unavailable);
            continue;
        }
        quaternionic_structure q = build_quaternionic(rep);
        CHECK(q_commutator_defect(rep, q) == 0.0);
        cmat sq = q.B * q.B.conjugate();
        CHECK((sq + cmat::Identity(rep.N, rep.N)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Q commutes with gamma(x) on random spinors") {
    rng r(77);
    for (int n : {2, 3, 4, 10, 11, 12}) {
        clifford_rep rep = build_rep(n);
        quaternionic_structure q = build_quaternionic(rep);
        for (int it = 0; it < 5; ++it) {
            rvec x = r.point(n, -1, 1);
            cvec v = r.spinor(rep.N);
            CHECK((q.apply(rep.g(x) * v) - rep.g(x) * q.apply(v)).norm() < 1e-13);
        }
    }
}

TEST_CASE("dimension guard") {
    CHECK_THROWS_AS((void)build_rep(0), dimension_out_of_range);
    CHECK_THROWS_AS((void)build_rep(13), dimension_out_of_range);
    CHECK_THROWS_AS((void)build_rep(3, 2), dimension_out_of_range);
}
