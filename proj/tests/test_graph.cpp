#include <doctest.h>

#include <cmath>
#include <set>

#include "cayheat/graph.hpp"
#include "cayheat/rng.hpp"

using namespace cayheat;

namespace {

BallFunction<Int> random_int_ball(const GroupSpec& spec, GenSet metric, int radius, Rng& rng) {
    GraphView carrier(spec, metric);
    BallFunction<Int> f = make_ball_function<Int>(carrier, identity_element(spec.d), radius);
    for (const Element& e : ball(carrier, identity_element(spec.d), radius))
        f.values[e] = static_cast<Int>(rng.below(2001)) - 1000;
    return f;
}

BallFunction<double> random_real_ball(const GroupSpec& spec, GenSet metric, int radius, Rng& rng) {
    GraphView carrier(spec, metric);
    BallFunction<double> f = make_ball_function<double>(carrier, identity_element(spec.d), radius);
    for (const Element& e : ball(carrier, identity_element(spec.d), radius))
        f.values[e] = rng.uniform(-1.0, 1.0);
    return f;
}

}  // namespace

TEST_CASE("neighbor counts and symmetry") {
    GroupSpec s = hexagonal_spec();
    GraphView full(s, GenSet::Full), abelian(s, GenSet::Abelian);
    auto nf = neighbors(full, identity_element(2));
    CHECK(nf.size() == 3);
    CHECK(std::set<std::pair<IntVec, int>>{{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}} ==
          std::set<std::pair<IntVec, int>>{{nf[0].vec, nf[0].fidx},
                                           {nf[1].vec, nf[1].fidx},
                                           {nf[2].vec, nf[2].fidx}});
    CHECK(neighbors(abelian, identity_element(2)).size() == 4);

    Rng rng(3);
    GraphView joint(s, GenSet::Joint);
    auto carrier = ball(joint, identity_element(2), 4);
    for (int i = 0; i < 30; ++i) {
        Element x = carrier[rng.below(carrier.size())];
        for (const Element& y : neighbors(full, x)) {
            auto back = neighbors(full, y);
            CHECK(std::count(back.begin(), back.end(), x) >= 1);
        }
    }
}

TEST_CASE("ball enumeration") {
    GroupSpec s = hexagonal_spec();
    GraphView full(s, GenSet::Full), abelian(s, GenSet::Abelian);
    CHECK(ball(full, identity_element(2), 0) == std::vector<Element>{identity_element(2)});
    CHECK(ball(full, identity_element(2), 1).size() == 4);  // center + degree 3

    // polynomial growth with exponent ~ d on the abelian view
    double b6 = static_cast<double>(ball(abelian, identity_element(2), 6).size());
    double b12 = static_cast<double>(ball(abelian, identity_element(2), 12).size());
    double exponent = std::log(b12 / b6) / std::log(2.0);
    CHECK(exponent > 1.6);
    CHECK(exponent < 2.4);
}

TEST_CASE("laplacian on delta, constants, and linear data") {
    GroupSpec s = hexagonal_spec();
    GraphView abelian(s, GenSet::Abelian);

    BallFunction<Int> delta = make_ball_function<Int>(abelian, identity_element(2), 2);
    delta.values[identity_element(2)] = 1;
    auto ld = laplacian_apply(abelian, delta);
    CHECK(ld.radius == 1);
    CHECK(ld.at_or_zero(identity_element(2)) == -4);
    CHECK(ld.at_or_zero(Element({1, 0}, 0)) == 1);
    CHECK(ld.at_or_zero(Element({-1, 0}, 0)) == 1);
    CHECK(ld.at_or_zero(Element({0, 1}, 0)) == 1);
    CHECK(ld.at_or_zero(Element({0, -1}, 0)) == 1);

    BallFunction<Int> c = make_ball_function<Int>(abelian, identity_element(2), 3);
    for (auto& [e, v] : c.values) v = 42;
    auto lc = laplacian_apply(abelian, c);
    for (const auto& [e, v] : lc.values) CHECK(v == 0);

    BallFunction<Int> lin = make_ball_function<Int>(abelian, identity_element(2), 3);
    for (auto& [e, v] : lin.values) v = e.vec[0];
    auto ll = laplacian_apply(abelian, lin);
    for (const auto& [e, v] : ll.values) CHECK(v == 0);

    // R = 0 shrinks to nothing, flagged
    BallFunction<Int> tiny = make_ball_function<Int>(abelian, identity_element(2), 0);
    auto lt = laplacian_apply(abelian, tiny);
    CHECK(lt.empty_warning);
    CHECK(lt.values.empty());
}

TEST_CASE("gamma on delta and positivity") {
    GroupSpec s = hexagonal_spec();
    GraphView abelian(s, GenSet::Abelian);
    BallFunction<Int> delta = make_ball_function<Int>(abelian, identity_element(2), 1);
    delta.values[identity_element(2)] = 1;
    auto gd = gamma_apply(abelian, delta);
    CHECK(gd.at_or_zero(identity_element(2)) == 4);

    Rng rng(5);
    auto f = random_int_ball(s, GenSet::Abelian, 4, rng);
    auto gf = gamma_apply(abelian, f);
    for (const auto& [e, v] : gf.values) CHECK(v >= 0);

    BallFunction<Int> c = make_ball_function<Int>(abelian, identity_element(2), 2);
    for (auto& [e, v] : c.values) v = -7;
    auto gc = gamma_apply(abelian, c);
    for (const auto& [e, v] : gc.values) CHECK(v == 0);
}

TEST_CASE("laplacians commute exactly on integer data") {
    for (const GroupSpec& spec : {hexagonal_spec(), klein_bottle_spec()}) {
        GraphView full(spec, GenSet::Full), abelian(spec, GenSet::Abelian), joint(spec, GenSet::Joint);
        Rng rng(23);
        for (int i = 0; i < 100; ++i) {
            auto f = random_int_ball(spec, GenSet::Joint, 6, rng);
            auto ab = laplacian_apply(abelian, laplacian_apply(full, f));
            auto ba = laplacian_apply(full, laplacian_apply(abelian, f));
            REQUIRE(ab.radius == 4);
            REQUIRE(ba.radius == 4);
            for (const Element& e : ball(joint, identity_element(spec.d), 4))
                CHECK(ab.at_or_zero(e) == ba.at_or_zero(e));
        }
    }
}

TEST_CASE("laplacians commute to 1e-12 on real data") {
    for (const GroupSpec& spec : {hexagonal_spec(), klein_bottle_spec()}) {
        GraphView full(spec, GenSet::Full), abelian(spec, GenSet::Abelian), joint(spec, GenSet::Joint);
        Rng rng(29);
        auto f = random_real_ball(spec, GenSet::Joint, 6, rng);
        auto ab = laplacian_apply(abelian, laplacian_apply(full, f));
        auto ba = laplacian_apply(full, laplacian_apply(abelian, f));
        for (const Element& e : ball(joint, identity_element(spec.d), 4))
            CHECK(std::abs(ab.at_or_zero(e) - ba.at_or_zero(e)) <= 1e-12);
    }
}

TEST_CASE("translation identities for right translates") {
    for (const GroupSpec& spec : {hexagonal_spec(), klein_bottle_spec()}) {
        GraphView joint(spec, GenSet::Joint);
        Rng rng(31);
        auto zs = ball(joint, identity_element(spec.d), 2);
        auto xs = ball(joint, identity_element(spec.d), 2);
        for (int rep = 0; rep < 50; ++rep) {
            auto f = random_real_ball(spec, GenSet::Joint, 6, rng);
            Element z = zs[rng.below(zs.size())];
            for (const Element& x : xs) {
                double lap_fz = 0, lap_f_at_xz = 0, gam_fz = 0, gam_f_at_xz = 0;
                Element xz = multiply(spec, x, z);
                bool trunc = false;
                double fxz = f.at_or_zero(xz, &trunc);
                for (const Element& s : spec.s_abelian) {
                    double a = f.at_or_zero(multiply(spec, multiply(spec, x, s), z), &trunc);
                    double b = f.at_or_zero(multiply(spec, xz, s), &trunc);
                    lap_fz += a - fxz;
                    lap_f_at_xz += b - fxz;
                    gam_fz += (a - fxz) * (a - fxz);
                    gam_f_at_xz += (b - fxz) * (b - fxz);
                }
                REQUIRE_FALSE(trunc);  // all lookups stay inside the stored ball
                CHECK(std::abs(lap_fz - lap_f_at_xz) <= 1e-12);
                CHECK(std::abs(gam_fz - gam_f_at_xz) <= 1e-12);
            }
        }
    }
}

TEST_CASE("shrinkage bookkeeping matches a larger-radius reference") {
    GroupSpec spec = klein_bottle_spec();
    GraphView joint(spec, GenSet::Joint), full(spec, GenSet::Full);
    auto fill = [&spec](BallFunction<Int>& f) {
        for (auto& [e, v] : f.values)
            v = 3 * e.vec[0] * e.vec[0] - 2 * e.vec[1] + 7 * e.fidx + e.vec[0] * e.vec[1];
    };
    const int R = 6;
    BallFunction<Int> f = make_ball_function<Int>(joint, identity_element(2), R);
    BallFunction<Int> ref = make_ball_function<Int>(joint, identity_element(2), R + 5);
    fill(f);
    fill(ref);
    const int m = 3;
    for (int i = 0; i < m; ++i) {
        f = laplacian_apply(full, f);
        ref = laplacian_apply(full, ref);
    }
    CHECK(f.radius == R - m);
    for (const Element& e : ball(joint, identity_element(2), R - m))
        CHECK(f.at_or_zero(e) == ref.at_or_zero(e));
}

TEST_CASE("step costs between metrics") {
    GroupSpec spec = hexagonal_spec();
    CHECK(step_cost(spec, GenSet::Full, GenSet::Joint) == 1);
    CHECK(step_cost(spec, GenSet::Abelian, GenSet::Joint) == 1);
    CHECK(step_cost(spec, GenSet::Abelian, GenSet::Full) == 2);  // each S~ element is a 2-letter S-word
    CHECK_THROWS_AS(step_cost(spec, GenSet::Full, GenSet::Abelian), SpecError);
}

TEST_CASE("word decompositions of the hexagonal group") {
    GroupSpec spec = hexagonal_spec();
    WordData wd = word_decompositions(spec);
    // S order: 0 = (0|s), 1 = (e1|s), 2 = (e2|s); S~ order: e1, -e1, e2, -e2
    CHECK(wd.words == std::vector<std::vector<int>>{{1, 0}, {0, 1}, {2, 0}, {0, 2}});
    CHECK(wd.r == 2);
    CHECK(wd.M == 4);
    CHECK(wd.K == 8);
    CHECK(wd.max_letter == 0);
}

TEST_CASE("word decompositions when S~ is contained in S") {
    WordData wd = word_decompositions(torus_spec(2));
    CHECK(wd.r == 1);
    CHECK(wd.M == 1);
    CHECK(wd.K == 1);

    // K >= 1 always
    CHECK(word_decompositions(klein_bottle_spec()).K >= 1);
}

TEST_CASE("word decomposition fails loudly when S cannot reach S~") {
    GroupSpec s = hexagonal_spec();
    s.s_full = {Element({0, 0}, 1)};  // involution only: reaches just two elements
    CHECK_THROWS_AS(word_decompositions(s, 8), SpecError);
}
