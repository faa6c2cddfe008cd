#include <doctest.h>

#include <cmath>
#include <random>

#include "lambekdm/errors.hpp"
#include "lambekdm/tensor.hpp"

using namespace lambekdm;

namespace {

Tensor random_tensor(std::mt19937& rng, int dim, std::vector<Variance> var) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Tensor t(dim, std::move(var));
    std::vector<double> comps(t.components().size());
    for (double& x : comps) x = u(rng);
    return Tensor(dim, t.variance(), std::move(comps));
}

// Laplace expansion; dims here are tiny.
double det_by_minors(int n, const std::vector<double>& a) {
    if (n == 1) return a[0];
    double s = 0.0;
    for (int c = 0; c < n; ++c) {
        std::vector<double> minor;
        minor.reserve(static_cast<size_t>((n - 1) * (n - 1)));
        for (int r = 1; r < n; ++r)
            for (int cc = 0; cc < n; ++cc)
                if (cc != c) minor.push_back(a[static_cast<size_t>(r * n + cc)]);
        s += (c % 2 == 0 ? 1.0 : -1.0) * a[static_cast<size_t>(c)] *
             det_by_minors(n - 1, minor);
    }
    return s;
}

Metric random_spd_metric(std::mt19937& rng, int dim) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> a(static_cast<size_t>(dim) * static_cast<size_t>(dim));
    for (double& x : a) x = u(rng);
    // a * a^T + I: symmetric, comfortably positive definite.
    std::vector<double> d(a.size(), 0.0);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double s = i == j ? 1.0 : 0.0;
            for (int k = 0; k < dim; ++k)
                s += a[static_cast<size_t>(i * dim + k)] * a[static_cast<size_t>(j * dim + k)];
            d[static_cast<size_t>(i * dim + j)] = s;
        }
    return Metric(dim, std::move(d));
}

const Metric& toy_metric() {
    static Metric m(2, {2, 1, 1, 5});
    return m;
}

} // namespace

TEST_SUITE("tensor") {

TEST_CASE("construction validates shapes") {
    CHECK_THROWS_AS(Tensor(2, {Variance::Up}, {1.0, 2.0, 3.0}), Error);
    CHECK_THROWS_AS(Tensor(0, {Variance::Up}), Error);
    Tensor t(2, {Variance::Up, Variance::Down});
    CHECK(t.components().size() == 4);
    CHECK(t.at({1, 1}) == 0.0);
    CHECK_THROWS_AS(t.at({2, 0}), Error);
    CHECK_THROWS_AS(t.at({0}), Error);
}

TEST_CASE("tensor product against explicit loops") {
    std::mt19937 rng(8801);
    Tensor a = random_tensor(rng, 3, {Variance::Up, Variance::Down});
    Tensor b = random_tensor(rng, 3, {Variance::Up});
    Tensor p = tensor_product(a, b);
    REQUIRE(p.variance() ==
            std::vector<Variance>{Variance::Up, Variance::Down, Variance::Up});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                CHECK(p.at({i, j, k}) == doctest::Approx(a.at({i, j}) * b.at({k})).epsilon(1e-15));

    CHECK_THROWS_AS(tensor_product(a, random_tensor(rng, 2, {Variance::Up})), Error);
}

TEST_CASE("contraction against explicit loops") {
    std::mt19937 rng(8802);
    Tensor t = random_tensor(rng, 3, {Variance::Up, Variance::Down, Variance::Up});
    Tensor c = contract(t, 0, 1);
    REQUIRE(c.variance() == std::vector<Variance>{Variance::Up});
    for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += t.at({j, j, k});
        CHECK(c.at({k}) == doctest::Approx(s).epsilon(1e-15));
    }

    Tensor c2 = contract(t, 2, 1);
    for (int i = 0; i < 3; ++i) {
        double s = 0.0;
        for (int j = 0; j < 3; ++j) s += t.at({i, j, j});
        CHECK(c2.at({i}) == doctest::Approx(s).epsilon(1e-15));
    }

    CHECK_THROWS_AS(contract(t, 1, 0), Error); // variance mismatch
    CHECK_THROWS_AS(contract(t, 0, 3), Error); // out of range
}

TEST_CASE("metric validates symmetry and invertibility") {
    CHECK_THROWS_AS(Metric(2, {1, 2, 3, 4}), Error);          // asymmetric
    CHECK_THROWS_AS(Metric(2, {1, 1, 1, 1}), Error);          // singular
    CHECK_THROWS_AS(Metric(2, {1, 0, 0}), Error);             // wrong count
    Metric m = toy_metric();
    CHECK(m.dinv(0, 0) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(m.dinv(0, 1) == doctest::Approx(-1.0 / 9.0).epsilon(1e-12));
    CHECK(m.dinv(1, 1) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("metric inverse identities hold tightly") {
    std::mt19937 rng(8803);
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 5);
        Metric m = random_spd_metric(rng, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double s = 0.0;
                for (int k = 0; k < dim; ++k) s += m.d(i, k) * m.dinv(k, j);
                CHECK(std::fabs(s - (i == j ? 1.0 : 0.0)) <= 1e-12);
            }
    }
}

TEST_CASE("worked two-dimensional example") {
    Metric m = toy_metric();
    Tensor v = Tensor::vector({0, 1});
    Tensor w = Tensor::vector({1, 0});

    CHECK(inner_product(m, v, w) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(metric_norm(m, v) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
    CHECK(metric_norm(m, w) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cosine_similarity(m, v, w) ==
          doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-12));

    Tensor dv = dual_vector(m, v);
    REQUIRE(dv.variance() == std::vector<Variance>{Variance::Down});
    CHECK(dv.at({0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(dv.at({1}) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("inner product is exactly symmetric") {
    std::mt19937 rng(8804);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 4);
        Metric m = random_spd_metric(rng, dim);
        Tensor v = random_tensor(rng, dim, {Variance::Up});
        Tensor w = random_tensor(rng, dim, {Variance::Up});
        CHECK(inner_product(m, v, w) == inner_product(m, w, v));
    }
}

TEST_CASE("inner product is bilinear") {
    std::mt19937 rng(8805);
    Metric m = random_spd_metric(rng, 3);
    Tensor v1 = random_tensor(rng, 3, {Variance::Up});
    Tensor v2 = random_tensor(rng, 3, {Variance::Up});
    Tensor w = random_tensor(rng, 3, {Variance::Up});
    double alpha = 0.37;
    std::vector<double> mix(3);
    for (int i = 0; i < 3; ++i)
        mix[static_cast<size_t>(i)] = alpha * v1.at({i}) + v2.at({i});
    CHECK(inner_product(m, Tensor::vector(mix), w) ==
          doctest::Approx(alpha * inner_product(m, v1, w) + inner_product(m, v2, w))
              .epsilon(1e-12));
}

TEST_CASE("duality folds the metric into the pairing") {
    std::mt19937 rng(8806);
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 4);
        Metric m = random_spd_metric(rng, dim);
        Tensor v = random_tensor(rng, dim, {Variance::Up});
        Tensor u = random_tensor(rng, dim, {Variance::Up});
        CHECK(eps_l(dual_vector(m, v), u) ==
              doctest::Approx(inner_product(m, u, v)).epsilon(1e-12));
        CHECK(eps_r(u, dual_vector(m, v)) ==
              doctest::Approx(inner_product(m, u, v)).epsilon(1e-12));
    }
}

TEST_CASE("lowering then raising an index is the identity") {
    std::mt19937 rng(8807);
    for (int trial = 0; trial < 30; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);
        Metric m = random_spd_metric(rng, dim);
        Tensor t = random_tensor(rng, dim, {Variance::Up, Variance::Down});
        Tensor back = raise_index(m, lower_index(m, t, 0), 0);
        for (size_t k = 0; k < t.components().size(); ++k)
            CHECK(back.components()[k] == doctest::Approx(t.components()[k]).epsilon(1e-9));
    }
    Metric m = toy_metric();
    Tensor v = Tensor::vector({0.3, -0.7});
    Tensor lowered = lower_index(m, v, 0);
    Tensor dual = dual_vector(m, v);
    for (int j = 0; j < 2; ++j)
        CHECK(lowered.at({j}) == doctest::Approx(dual.at({j})).epsilon(1e-15));
}

TEST_CASE("canonicalize_mixed against explicit loops") {
    std::mt19937 rng(8808);
    Metric m = random_spd_metric(rng, 3);
    Tensor t = random_tensor(rng, 3, {Variance::Down, Variance::Up});
    Tensor c = canonicalize_mixed(m, t);
    REQUIRE(c.variance() == std::vector<Variance>{Variance::Up, Variance::Down});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int i2 = 0; i2 < 3; ++i2)
                for (int j2 = 0; j2 < 3; ++j2)
                    s += m.dinv(i, i2) * m.d(j, j2) * t.at({i2, j2});
            CHECK(c.at({i, j}) == doctest::Approx(s).epsilon(1e-12));
        }

    CHECK_THROWS_AS(canonicalize_mixed(m, random_tensor(rng, 3, {Variance::Up, Variance::Down})),
                    Error);
}

TEST_CASE("canonicalize_mixed under the identity metric swaps roles only") {
    std::mt19937 rng(8809);
    Metric id = Metric::identity(3);
    Tensor t = random_tensor(rng, 3, {Variance::Down, Variance::Up});
    Tensor c = canonicalize_mixed(id, t);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(c.at({a, b}) == doctest::Approx(t.at({a, b})).epsilon(1e-15));
}

TEST_CASE("canonicalize with the metric then its inverse is the identity") {
    std::mt19937 rng(8810);
    Metric m = random_spd_metric(rng, 3);
    Metric minv(3, m.inverse_components());
    Tensor t = random_tensor(rng, 3, {Variance::Down, Variance::Up});
    Tensor c = canonicalize_mixed(m, t);
    // Reinterpret the canonical result in the mixed layout and undo it with
    // the inverse metric.
    Tensor c_mixed(3, {Variance::Down, Variance::Up}, c.components());
    Tensor back = canonicalize_mixed(minv, c_mixed);
    for (size_t k = 0; k < t.components().size(); ++k)
        CHECK(back.components()[k] == doctest::Approx(t.components()[k]).epsilon(1e-9));
}

TEST_CASE("worked basis change example") {
    BasisChange bc(2, {-1, 2, 1, 1});
    Tensor w2 = transform_vector(bc, Tensor::vector({1, 0}));
    Tensor v2 = transform_vector(bc, Tensor::vector({0, 1}));
    CHECK(w2.at({0}) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(w2.at({1}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(v2.at({0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v2.at({1}) == doctest::Approx(1.0).epsilon(1e-15));

    // The rotated pair under the plain Euclidean metric reproduces the toy
    // cosine, which is the whole point of carrying a metric.
    Metric id = Metric::identity(2);
    CHECK(cosine_similarity(id, v2, w2) ==
          doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-12));

    Metric moved = transform_metric(bc, id);
    CHECK(moved.d(0, 0) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(moved.d(0, 1) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(moved.d(1, 1) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));

    // Orthogonality of the original pair survives the change of basis.
    CHECK(std::fabs(inner_product(moved, v2, w2)) <= 1e-12);
}

TEST_CASE("inner products are invariant under random basis changes") {
    std::mt19937 rng(8811);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 4);
        Metric m = random_spd_metric(rng, dim);
        Tensor v = random_tensor(rng, dim, {Variance::Up});
        Tensor w = random_tensor(rng, dim, {Variance::Up});

        // Stay clear of near-singular draws; an almost-degenerate frame makes
        // the comparison a conditioning exercise instead of an algebra check.
        std::vector<double> lam;
        do {
            lam.assign(static_cast<size_t>(dim) * static_cast<size_t>(dim), 0.0);
            for (double& x : lam) x = u(rng);
        } while (std::fabs(det_by_minors(dim, lam)) < 0.3);
        BasisChange bc(dim, lam);
        double before = inner_product(m, v, w);
        double after =
            inner_product(transform_metric(bc, m), transform_vector(bc, v),
                          transform_vector(bc, w));
        CHECK(std::fabs(before - after) <= 1e-9);
    }
}

TEST_CASE("singular basis changes are rejected") {
    CHECK_THROWS_AS(BasisChange(2, {1, 2, 2, 4}), Error);
}

TEST_CASE("pairing units satisfy the snake identities") {
    std::mt19937 rng(8812);
    for (int dim : {2, 3, 5}) {
        Metric m = random_spd_metric(rng, dim);
        Tensor v = random_tensor(rng, dim, {Variance::Up});

        // (1 (x) eps) after (eta (x) 1) on the left.
        Tensor left = contract(tensor_product(eta_l(m), v), 2, 1);
        REQUIRE(left.variance() == std::vector<Variance>{Variance::Up});
        for (int i = 0; i < dim; ++i)
            CHECK(left.at({i}) == doctest::Approx(v.at({i})).epsilon(1e-12));

        // (eps (x) 1) after (1 (x) eta) on the right.
        Tensor right = contract(tensor_product(v, eta_r(m)), 0, 1);
        REQUIRE(right.variance() == std::vector<Variance>{Variance::Up});
        for (int i = 0; i < dim; ++i)
            CHECK(right.at({i}) == doctest::Approx(v.at({i})).epsilon(1e-12));

        // Closing the unit on itself counts the dimension.
        CHECK(contract(eta_l(m), 0, 1).at({}) == doctest::Approx(dim).epsilon(1e-15));
    }
}

TEST_CASE("zero vectors have no cosine") {
    Metric m = toy_metric();
    CHECK_THROWS_AS(cosine_similarity(m, Tensor::vector({0, 0}), Tensor::vector({1, 0})),
                    Error);
}

TEST_CASE("metric fit reproduces the toy cosine from one sample") {
    std::vector<SimilarityJudgment> samples{
        {Tensor::vector({0, 1}), Tensor::vector({1, 0}), 1.0 / std::sqrt(10.0)}};
    MetricFitOptions opts;
    opts.reg = 1e-6;
    MetricFitResult r = metric_fit(samples, 2, opts);
    double cs = cosine_similarity(r.metric, samples[0].v, samples[0].w);
    CHECK(std::fabs(cs - samples[0].target) <= 1e-6);
}

TEST_CASE("metric fit recovers consistent judgments") {
    std::mt19937 rng(8813);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Metric hidden = random_spd_metric(rng, 3);
    std::vector<SimilarityJudgment> samples;
    for (int i = 0; i < 12; ++i) {
        Tensor v = random_tensor(rng, 3, {Variance::Up});
        Tensor w = random_tensor(rng, 3, {Variance::Up});
        samples.push_back({v, w, cosine_similarity(hidden, v, w)});
    }
    MetricFitOptions opts;
    opts.reg = 0.0;
    MetricFitResult r = metric_fit(samples, 3, opts);
    CHECK(r.objective <= 1e-6);
    for (const SimilarityJudgment& s : samples)
        CHECK(std::fabs(cosine_similarity(r.metric, s.v, s.w) - s.target) <= 1e-3);
}

TEST_CASE("metric fit rejects zero-norm samples") {
    std::vector<SimilarityJudgment> samples{
        {Tensor::vector({0, 0}), Tensor::vector({1, 0}), 0.5}};
    CHECK_THROWS_AS(metric_fit(samples, 2), Error);
}

} // TEST_SUITE
