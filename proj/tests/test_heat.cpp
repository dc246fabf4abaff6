#include <doctest.h>

#include <unordered_map>

#include "cayheat/heat.hpp"
#include "cayheat/rng.hpp"
#include "oracles.hpp"

using namespace cayheat;

TEST_CASE("kernel at t=0 is exactly the point mass") {
    HeatState hs = heat_kernel_ball(hexagonal_spec(), GenSet::Abelian, 0.0);
    REQUIRE(hs.support.size() == 1);
    CHECK(hs.support[0] == identity_element(2));
    CHECK(hs.values[0] == 1.0);
    CHECK(hs.tail_bound == 0.0);
}

TEST_CASE("kernel matches the Z^2 Bessel product oracle") {
    GroupSpec spec = hexagonal_spec();
    HeatKernelOptions opts;
    opts.eps = 1e-12;
    for (double t : {0.5, 1.0, 5.0}) {
        HeatState hs = heat_kernel_ball(spec, GenSet::Abelian, t, opts);
        double worst = 0.0;
        for (std::size_t i = 0; i < hs.support.size(); ++i) {
            REQUIRE(hs.support[i].fidx == 0);
            worst = std::max(worst, std::abs(hs.values[i] - oracles::zd_kernel(hs.support[i].vec, t)));
        }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("mass accounting and positivity") {
    GroupSpec spec = hexagonal_spec();
    HeatKernelOptions opts;
    opts.eps = 1e-10;
    for (double t : {0.1, 1.0, 10.0}) {
        HeatState hs = heat_kernel_ball(spec, GenSet::Abelian, t, opts);
        CHECK(hs.mass <= 1.0 + 1e-11);
        CHECK(hs.mass + hs.tail_bound >= 1.0);
        CHECK(hs.tail_bound <= opts.eps + 1e-11);  // slack: summation roundoff over the ball
        for (double v : hs.values) CHECK(v >= 0.0);
    }
}

TEST_CASE("kernel on the full view conserves mass too") {
    HeatState hs = heat_kernel_ball(hexagonal_spec(), GenSet::Full, 1.0);
    CHECK(hs.mass <= 1.0 + 1e-12);
    CHECK(hs.mass + hs.tail_bound >= 1.0);
    for (double v : hs.values) CHECK(v >= 0.0);
}

TEST_CASE("semigroup property within combined tails") {
    GroupSpec spec = hexagonal_spec();
    HeatKernelOptions opts;
    opts.eps = 1e-12;
    HeatState w_half = heat_kernel_ball(spec, GenSet::Abelian, 0.5, opts);
    HeatState w_one = heat_kernel_ball(spec, GenSet::Abelian, 1.0, opts);
    std::unordered_map<Element, double, ElementHash> lut;
    for (std::size_t i = 0; i < w_half.support.size(); ++i) lut.emplace(w_half.support[i], w_half.values[i]);
    double worst = 0.0;
    for (std::size_t i = 0; i < w_one.support.size(); ++i) {
        double conv = 0.0;
        for (std::size_t yi = 0; yi < w_half.support.size(); ++yi) {
            Element rest = multiply(spec, inverse(spec, w_half.support[yi]), w_one.support[i]);
            auto it = lut.find(rest);
            if (it != lut.end()) conv += w_half.values[yi] * it->second;
        }
        worst = std::max(worst, std::abs(conv - w_one.values[i]));
    }
    CHECK(worst <= 2.0 * w_half.tail_bound + w_one.tail_bound + 1e-13);
}

TEST_CASE("scale-and-square path agrees with the direct series") {
    GroupSpec spec = hexagonal_spec();
    HeatKernelOptions direct;
    direct.eps = 1e-12;
    HeatKernelOptions squared = direct;
    squared.lambda_split = 2.0;  // forces several squarings at t = 1.5
    HeatState a = heat_kernel_ball(spec, GenSet::Abelian, 1.5, direct);
    HeatState b = heat_kernel_ball(spec, GenSet::Abelian, 1.5, squared);
    std::unordered_map<Element, double, ElementHash> lut;
    for (std::size_t i = 0; i < b.support.size(); ++i) lut.emplace(b.support[i], b.values[i]);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        auto it = lut.find(a.support[i]);
        worst = std::max(worst, std::abs(a.values[i] - (it == lut.end() ? 0.0 : it->second)));
    }
    CHECK(worst <= 1e-12);
    CHECK(a.tail_bound <= direct.eps + 1e-12);  // ~2e3 cells of roundoff
    CHECK(b.tail_bound <= squared.eps + 1e-12);
}

TEST_CASE("resource cap produces an explicit error") {
    HeatKernelOptions opts;
    opts.eps = 1e-12;
    opts.max_cells = 64;
    CHECK_THROWS_AS(heat_kernel_ball(hexagonal_spec(), GenSet::Abelian, 5.0, opts), ResourceError);
}

TEST_CASE("quotient heat solve: reconstruction, eigenflow, RK4 oracle") {
    GroupSpec spec = hexagonal_spec();
    QuotientGraph q = build_quotient(spec, 4);
    EigenBasis basis = assemble_eigenbasis(q);
    Rng rng(17);
    Eigen::VectorXd g(q.size);
    for (long long i = 0; i < q.size; ++i) g(i) = rng.uniform(-1, 1);

    CHECK((quotient_heat_solve_real(q, basis, g, 0.0) - g).cwiseAbs().maxCoeff() <= 1e-10);

    std::size_t pick = 7;
    Eigen::VectorXcd f = basis.functions.col(static_cast<long long>(pick));
    Eigen::VectorXcd evolved = quotient_heat_solve(q, basis, f, 0.9);
    double lam = basis.info[pick].lambda;
    CHECK((evolved - std::exp(lam * 0.9) * f).cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::VectorXd ref = oracles::rk4_heat(q, GenSet::Full, g, 1.0, 1e-3);
    CHECK((quotient_heat_solve_real(q, basis, g, 1.0) - ref).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("translate_sum of the zero function with shift 1 sums the kernel mass") {
    GroupSpec spec = hexagonal_spec();
    QuotientGraph q = build_quotient(spec, 2);
    std::vector<Element> pts = {identity_element(2), Element({1, 0}, 1), Element({2, -1}, 0)};
    double eps = 1e-10;
    TranslateSumResult ts =
        translate_sum(q, Eigen::VectorXcd::Zero(q.size), Complex(1, 0), 1.0, 0.8, eps, pts);
    for (long long i = 0; i < ts.values.size(); ++i)
        CHECK(std::abs(ts.values(i) - 1.0) <= eps);
}

TEST_CASE("translate_sum realizes the spectral flow of eigenfunction lifts") {
    GroupSpec spec = hexagonal_spec();
    QuotientGraph q = build_quotient(spec, 2);
    EigenBasis basis = assemble_eigenbasis(q);
    GraphView full(spec, GenSet::Full);
    auto pts = ball(full, identity_element(2), 3);
    double eps = 1e-10, t = 0.7;
    for (std::size_t b = 0; b < basis.info.size(); ++b) {
        const auto& inf = basis.info[b];
        if (!inf.beta) continue;
        Eigen::VectorXcd h = basis.functions.col(static_cast<long long>(b));
        Complex a(0.3, -0.2);
        TranslateSumResult ts = translate_sum(q, h, a, *inf.beta, t, eps, pts);
        double scale = std::exp(inf.lambda * t);
        double worst = 0.0;
        for (std::size_t p = 0; p < pts.size(); ++p)
            worst = std::max(worst, std::abs(ts.values(static_cast<long long>(p)) -
                                             (scale * h(q.index_of(pts[p])) + a)));
        CHECK(worst <= 2.0 * eps + 1e-12);
    }
}

TEST_CASE("translate_sum is linear in the weight function") {
    GroupSpec spec = klein_bottle_spec();
    QuotientGraph q = build_quotient(spec, 2);
    Rng rng(23);
    Eigen::VectorXcd h1(q.size), h2(q.size);
    for (long long i = 0; i < q.size; ++i) {
        h1(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
        h2(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    }
    std::vector<Element> pts = {identity_element(2), Element({1, 1}, 1)};
    double eps = 1e-11;
    auto s1 = translate_sum(q, h1, Complex(0.1, 0), 0.5, 1.0, eps, pts);
    auto s2 = translate_sum(q, h2, Complex(-0.2, 0.1), 0.5, 1.0, eps, pts);
    auto s12 = translate_sum(q, h1 + h2, Complex(-0.1, 0.1), 0.5, 1.0, eps, pts);
    for (long long i = 0; i < s12.values.size(); ++i)
        CHECK(std::abs(s12.values(i) - s1.values(i) - s2.values(i)) <= 2.0 * eps + 1e-12);
}

TEST_CASE("constructed translates solve the heat equation end to end") {
    // u(x,t) = sum_z f(z) w(x z^{-1}, beta t) with f = lift of f_{chi,j} + c
    // must satisfy Delta u = du/dt, with du/dt evaluated both through the
    // kernel's own Delta~ flow and by a centered difference.
    GroupSpec spec = hexagonal_spec();
    QuotientGraph q = build_quotient(spec, 2);
    EigenBasis basis = assemble_eigenbasis(q);
    GraphView full(spec, GenSet::Full);
    auto eval_pts = ball(full, identity_element(2), 3);
    auto inner_pts = ball(full, identity_element(2), 2);

    const std::size_t b = 3;  // a nontrivial-character eigenfunction
    REQUIRE(basis.info[b].beta.has_value());
    double beta = *basis.info[b].beta;
    Eigen::VectorXcd h = basis.functions.col(static_cast<long long>(b));
    Complex shift(0.4, 0.0);
    double t = 0.6, eps = 1e-12;

    KernelCache cache;
    auto at = [&](double tt, const std::vector<Element>& pts) {
        return translate_sum(q, h, shift, beta, tt, eps, pts, &cache);
    };
    TranslateSumResult u = at(t, eval_pts);
    std::unordered_map<Element, Complex, ElementHash> ulut;
    for (std::size_t i = 0; i < eval_pts.size(); ++i) ulut.emplace(eval_pts[i], u.values(static_cast<long long>(i)));

    // partial_t u via the kernel: beta sum_z (h(pi z^{-1} x) + a) (Delta~ w)(x z^{-1})
    HeatState w = heat_kernel_ball(spec, GenSet::Abelian, beta * t, {eps});
    BallFunction<double> wball = w.to_ball_function();
    GraphView abelian(spec, GenSet::Abelian);
    BallFunction<double> dw = laplacian_apply(abelian, wball);

    double h_fd = 1e-4;
    TranslateSumResult up = at(t + h_fd, inner_pts), um = at(t - h_fd, inner_pts);

    double worst_heat = 0.0, worst_fd = 0.0;
    for (std::size_t i = 0; i < inner_pts.size(); ++i) {
        const Element& x = inner_pts[i];
        Complex du(0, 0);
        for (const Element& s : full.gens) du += ulut.at(multiply(spec, x, s)) - ulut.at(x);

        Complex dt(0, 0);
        for (const auto& [y, dwy] : dw.values) {
            Element z_inv_x = multiply(spec, inverse(spec, y), x);
            dt += beta * dwy * (h(q.index_of(z_inv_x)) + shift);
        }
        worst_heat = std::max(worst_heat, std::abs(du - dt));
        Complex fd = (up.values(static_cast<long long>(i)) - um.values(static_cast<long long>(i))) /
                     (2.0 * h_fd);
        worst_fd = std::max(worst_fd, std::abs(du - fd));
    }
    CHECK(worst_heat <= 1e-8);
    CHECK(worst_fd <= 1e-6);
}

TEST_CASE("poisson tail radius is monotone and certified") {
    CHECK(poisson_radius(0.0, 1e-12) == 0);
    for (double lambda : {0.5, 4.0, 40.0}) {
        int r = poisson_radius(lambda, 1e-10);
        CHECK(poisson_tail(lambda, r) <= 1e-10);
        CHECK(poisson_tail(lambda, r - 1) > 1e-10);
    }
}
