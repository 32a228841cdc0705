#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>

#include "spinlab/core/compensated.hpp"
#include "spinlab/core/extrapolate.hpp"
#include "spinlab/core/parallel.hpp"
#include "spinlab/core/quadrature.hpp"
#include "spinlab/core/rng.hpp"
#include "spinlab/core/types.hpp"

using namespace spinlab;

TEST_CASE("gauss_legendre integrates polynomials of degree 2n-1 exactly") {
    for (int n : {2, 5, 12, 24, 32}) {
        quad_rule q = gauss_legendre(n);
        double wsum = std::accumulate(q.w.begin(), q.w.end(), 0.0);
        CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
        for (int k = 0; k <= 2 * n - 1; ++k) {
            double s = 0;
            for (size_t i = 0; i < q.x.size(); ++i) s += q.w[i] * std::pow(q.x[i], k);
            double exact = (k % 2 == 0) ? 2.0 / (k + 1) : 0.0;
            CHECK(s == doctest::Approx(exact).epsilon(1e-12));
        }
    }
}

TEST_CASE("panel rules resolve oscillatory integrands") {
    quad_rule q = panel_rule(0.0, 2.0 * pi, 16, 12);
    double s = 0, c = 0;
    for (size_t i = 0; i < q.x.size(); ++i) {
        s += q.w[i] * std::sin(7.0 * q.x[i]) * std::sin(7.0 * q.x[i]);
        c += q.w[i] * std::cos(3.0 * q.x[i]);
    }
    CHECK(s == doctest::Approx(pi).epsilon(1e-12));
    CHECK(c == doctest::Approx(0.0).epsilon(1e-12));

    quad_rule qe = panel_rule_edges({0.0, 0.1, 0.5, 1.0}, 10);
    double t = 0;
    for (size_t i = 0; i < qe.x.size(); ++i) t += qe.w[i] * std::exp(qe.x[i]);
    CHECK(t == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}

TEST_CASE("sphere quadrature: surface measure and second moments") {
    for (int n : {2, 3}) {
        double om = 2.0 * std::pow(pi, 0.5 * (n)) / std::tgamma(0.5 * n); // omega_{n-1}
        sphere_rule sq = sphere_quadrature(n, 12);
        double wsum = std::accumulate(sq.w.begin(), sq.w.end(), 0.0);
        CHECK(wsum == doctest::Approx(om).epsilon(1e-12));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double s = 0;
                for (size_t i = 0; i < sq.w.size(); ++i)
                    s += sq.w[i] * sq.dir[i](a) * sq.dir[i](b);
                double exact = (a == b) ? om / n : 0.0;
                CHECK(s == doctest::Approx(exact).epsilon(1e-10));
            }
        // odd moment vanishes
        for (int a = 0; a < n; ++a) {
            double s = 0;
            for (size_t i = 0; i < sq.w.size(); ++i) s += sq.w[i] * sq.dir[i](a);
            CHECK(std::abs(s) < 1e-12);
        }
    }
}

TEST_CASE("half-line integral with tail substitution") {
    double v = integrate_halfline([](double r) { return r * r * std::exp(-r * r); }, 4.0, 24, 16);
    CHECK(v == doctest::Approx(0.25 * std::sqrt(pi)).epsilon(1e-12));
    double w = integrate_halfline([](double r) { return 1.0 / std::pow(1.0 + r * r, 3.0); }, 2.0, 24, 16);
    CHECK(w == doctest::Approx(3.0 * pi / 16.0).epsilon(1e-12));
}

TEST_CASE("neville extrapolation recovers the limit of polynomial data") {
    std::vector<double> t, vals;
    for (int k = 0; k < 5; ++k) {
        double h = 0.5 / (1 << k);
        t.push_back(h);
        vals.push_back(3.0 - 2.0 * h + 0.7 * h * h - 0.1 * h * h * h);
    }
    double res = 0;
    double lim = neville_scalar(t, vals, &res);
    CHECK(lim == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(res < 1e-10);

    std::vector<cmat> ms;
    for (double h : t) {
        cmat m(2, 2);
        m << 1.0 + h, h * h, cplx(0, 1) * h, 2.0 - h;
        ms.push_back(m);
    }
    double mres = 0;
    cmat mlim = neville_matrix(t, ms, &mres);
    cmat want(2, 2);
    want << 1, 0, 0, 2;
    CHECK((mlim - want).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("compensated sums") {
    compensated_sum s;
    s.add(1.0);
    for (int i = 0; i < 10000; ++i) s.add(1e-18);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-10));

    compensated_msum ms(2, 2);
    cmat a(2, 2), b(2, 2);
    a << 1, 2, 3, 4;
    b << 0.5, -2, 1, cplx(0, 1);
    ms.add(a);
    ms.add(b);
    CHECK((ms.value() - (a + b)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parallel_chunks matches serial sum and has worker-independent chunking") {
    const int nitems = 10000;
    std::vector<double> data(nitems);
    for (int i = 0; i < nitems; ++i) data[i] = std::sin(0.1 * i);

    auto run = [&](int workers) {
        size_t nchunks = chunk_count(nitems);
        std::vector<double> partial(nchunks, 0.0);
        size_t seen = 0;
        parallel_chunks(
            nitems,
            [&](size_t b, size_t e, size_t ci) {
                double s = 0;
                for (size_t i = b; i < e; ++i) s += data[i];
                partial[ci] = s;
            },
            &seen, workers);
        CHECK(seen == nchunks);
        compensated_sum total;
        for (double p : partial) total.add(p);
        return total.value();
    };
    double serial = run(1);
    double par4 = run(4);
    double par7 = run(7);
    CHECK(serial == par4); // bitwise: identical chunk boundaries + ordered reduce
    CHECK(serial == par7);
    double plain = std::accumulate(data.begin(), data.end(), 0.0);
    CHECK(serial == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("rng determinism and ranges") {
    rng a(1234), b(1234);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform(-2, 3) == b.uniform(-2, 3));
    rng c(99);
    for (int i = 0; i < 100; ++i) {
        double u = c.uniform(0.5, 0.6);
        CHECK(u >= 0.5);
        CHECK(u < 0.6);
    }
    rvec d = c.direction(3);
    CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-14));
    cvec s = c.spinor(4);
    CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-14));
}
