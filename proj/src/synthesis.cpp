#include "cayheat/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>

#include <json.hpp>

namespace cayheat {

namespace {

std::vector<double> coset_sums(const QuotientGraph& q, const Eigen::VectorXd& g) {
    std::vector<double> sums(static_cast<std::size_t>(q.spec.f_order), 0.0);
    for (long long i = 0; i < q.size; ++i)
        sums[static_cast<std::size_t>(i / q.abelian_size)] += g(i);
    return sums;
}

}  // namespace

Eigen::VectorXcd coefficients(const QuotientGraph& q, const EigenBasis& basis,
                              const Eigen::VectorXcd& g) {
    // Equal coset sums <=> orthogonal to the non-constant trivial-character
    // eigenfunctions.
    const int k = q.spec.f_order;
    std::vector<Complex> sums(static_cast<std::size_t>(k), Complex(0, 0));
    for (long long i = 0; i < q.size; ++i) sums[static_cast<std::size_t>(i / q.abelian_size)] += g(i);
    double norm = g.norm();
    double tol = 1e-9 * std::max(norm, 1e-30);
    for (int f1 = 0; f1 < k; ++f1)
        for (int f2 = f1 + 1; f2 < k; ++f2)
            if (std::abs(sums[static_cast<std::size_t>(f1)] - sums[static_cast<std::size_t>(f2)]) > tol)
                throw SpecError("coefficients: coset sums differ (coset " + std::to_string(f1) + ": " +
                                std::to_string(sums[static_cast<std::size_t>(f1)].real()) + ", coset " +
                                std::to_string(f2) + ": " +
                                std::to_string(sums[static_cast<std::size_t>(f2)].real()) +
                                "); g is not orthogonal to the non-constant coset-flat eigenfunctions");

    Eigen::VectorXcd c = basis.functions.adjoint() * g;
    for (long long b = 0; b < c.size(); ++b) {
        const EigenFunctionInfo& inf = basis.info[static_cast<std::size_t>(b)];
        if (inf.chi.is_trivial() && inf.j >= 1) c(b) = Complex(0, 0);
    }
    double resid = (basis.functions * c - g).cwiseAbs().maxCoeff();
    if (resid > 1e-9 * std::max(1.0, norm))
        throw NumericalError("coefficients: reconstruction residual " + std::to_string(resid));
    return c;
}

SynthesisPlan make_plan(const QuotientGraph& q, const EigenBasis& basis, const Eigen::VectorXd& g) {
    const int k = q.spec.f_order;
    SynthesisPlan plan;
    plan.n = q.n;
    plan.g_norm2 = g.norm();
    plan.b_bound = std::sqrt(static_cast<double>(k)) * plan.g_norm2;

    Eigen::VectorXcd c = coefficients(q, basis, g.cast<Complex>());
    for (long long b = 0; b < c.size(); ++b) {
        const EigenFunctionInfo& inf = basis.info[static_cast<std::size_t>(b)];
        if (inf.chi.is_trivial() && inf.j >= 1) continue;  // excluded from the expansion
        PlanTerm term;
        term.chi_rank = inf.chi_rank;
        term.j = inf.j;
        term.basis_col = b;
        term.c = c(b);
        term.beta = *inf.beta;
        term.f_sup = inf.sup_norm;
        if (term.c != Complex(0, 0)) term.a = std::conj(term.c) / std::abs(term.c) * term.f_sup;
        plan.B += term.c * term.a;

        term.q.resize(q.size);
        for (long long i = 0; i < q.size; ++i) {
            double v = (term.c * (basis.functions(i, b) + term.a)).real();
            if (v < 0.0) {
                if (v < -1e-9)
                    throw NumericalError("plan weight q = " + std::to_string(v) +
                                         " is significantly negative; the eigenbasis is broken");
                plan.max_q_clamp = std::max(plan.max_q_clamp, -v);
                v = 0.0;
            }
            double cap = 2.0 * std::abs(term.c) * term.f_sup + 1e-12;
            if (v > cap)
                throw NumericalError("plan weight q = " + std::to_string(v) + " exceeds 2|c| ||f||_inf");
            term.q(i) = v;
        }
        plan.terms.push_back(std::move(term));
    }
    if (plan.B.real() > plan.b_bound + 1e-12)
        throw NumericalError("Re(B) = " + std::to_string(plan.B.real()) + " exceeds sqrt(k)||g||_2 = " +
                             std::to_string(plan.b_bound));
    return plan;
}

std::vector<Element> canonical_lifts(const QuotientGraph& q) { return q.elements; }

SynthesisResult synthesize(const QuotientGraph& q, const EigenBasis& basis, const SynthesisPlan& plan,
                           double t, std::span<const Element> points, double eps,
                           KernelCache* cache, int threads) {
    if (t < 0) throw SpecError("synthesize requires t >= 0");
    SynthesisResult res;
    res.points.assign(points.begin(), points.end());
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<long long>(points.size()));
    for (const PlanTerm& term : plan.terms) {
        if (term.c == Complex(0, 0)) continue;
        TranslateSumResult ts =
            translate_sum(q, basis.functions.col(term.basis_col), term.a, term.beta, t, eps, points,
                          cache, threads);
        acc += term.c * ts.values;
        res.err_bound += std::abs(term.c) * ts.err_bound;
    }
    res.values = (acc.array() - plan.B).real();
    return res;
}

PosCombReport pos_comb_check(const QuotientGraph& q, const EigenBasis& basis, const SynthesisPlan& plan,
                             double t, double eps, KernelCache* cache, int threads) {
    PosCombReport rep;
    rep.re_b = plan.B.real();
    rep.b_bound = plan.b_bound;
    rep.slack = rep.b_bound - rep.re_b;
    rep.min_q = 0.0;

    // reconstruct g from the plan and evolve it spectrally (the left side)
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(q.size);
    for (const PlanTerm& term : plan.terms) c(term.basis_col) = term.c;
    Eigen::VectorXcd g = basis.functions * c;
    Eigen::VectorXcd u = quotient_heat_solve(q, basis, g, t);

    std::vector<Element> points = canonical_lifts(q);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(q.size);
    double err = 0.0;
    bool first = true;
    for (const PlanTerm& term : plan.terms) {
        if (first) {
            rep.min_q = term.q.minCoeff();
            first = false;
        } else {
            rep.min_q = std::min(rep.min_q, term.q.minCoeff());
        }
        if (term.q.maxCoeff() == 0.0) continue;
        TranslateSumResult ts = translate_sum(q, term.q.cast<Complex>(), Complex(0, 0), term.beta, t,
                                              eps, points, cache, threads);
        rhs += ts.values.real();
        err += ts.err_bound;
    }
    rep.err_bound = err;
    for (long long i = 0; i < q.size; ++i)
        rep.residual_max = std::max(rep.residual_max, std::abs(rhs(i) - rep.re_b - u(i).real()));
    if (rep.min_q < 0.0) throw NumericalError("pos_comb_check: negative weight survived the plan");
    if (rep.slack < -1e-12)
        throw NumericalError("pos_comb_check: Re(B) exceeds sqrt(k)||g||_2");
    return rep;
}

PeriodizeResult periodize(const QuotientGraph& q, const BallFunction<double>& g) {
    const GroupSpec& spec = q.spec;
    const int n = q.n;
    if (n < 4 || n % 2 != 0)
        throw SpecError("periodize needs even n >= 4 (no room for the H_n \\ H_{n/2} annulus)");
    if (g.metric != GenSet::Full)
        throw SpecError("periodize expects initial data on a full-view ball");
    for (const auto& [e, v] : g.values)
        if (v < 0) throw SpecError("periodize requires non-negative data, found " + std::to_string(v) +
                                   " at " + to_string(e));

    // One BFS from 1 serves both transversals: the first visit of a pi_n
    // class lands in H_n, the first visit of a pi_{n/2} class in H_{n/2},
    // and first-visit transversals nest because n/2 divides n.
    const int half = n / 2;
    GraphView full(spec, GenSet::Full);
    PeriodizeResult res;
    res.H.assign(static_cast<std::size_t>(q.size), Element());
    res.inner.assign(static_cast<std::size_t>(q.size), 0);
    std::vector<char> have(static_cast<std::size_t>(q.size), 0);
    long long covered = 0;

    long long half_cells = 1;
    for (int i = 0; i < spec.d; ++i) half_cells *= half;
    auto half_rank = [&](const Element& x) {
        long long rank = 0, stride = 1;
        for (int i = 0; i < spec.d; ++i) {
            Int r = x.vec[static_cast<std::size_t>(i)] % half;
            if (r < 0) r += half;
            rank += r * stride;
            stride *= half;
        }
        return static_cast<long long>(x.fidx) * half_cells + rank;
    };
    std::vector<char> half_have(static_cast<std::size_t>(spec.f_order * half_cells), 0);

    std::unordered_map<Element, int, ElementHash> dist;
    std::vector<Element> order;
    Element id = identity_element(spec.d);
    dist.emplace(id, 0);
    order.push_back(id);
    std::size_t head = 0;
    int guard_radius = 8 * n + 32;
    while (covered < q.size) {
        if (head == order.size())
            throw SpecError("periodize: BFS exhausted before covering the quotient (S does not generate?)");
        // BFS layer discipline with deterministic intra-layer order
        std::size_t layer_end = order.size();
        std::vector<Element> next_layer;
        for (; head < layer_end; ++head) {
            const Element& x = order[head];
            int dx = dist[x];
            if (dx > guard_radius) throw SpecError("periodize: BFS radius guard exceeded");
            long long cls = q.index_of(x);
            if (!have[static_cast<std::size_t>(cls)]) {
                have[static_cast<std::size_t>(cls)] = 1;
                res.H[static_cast<std::size_t>(cls)] = x;
                ++covered;
                long long h = half_rank(x);
                if (!half_have[static_cast<std::size_t>(h)]) {
                    half_have[static_cast<std::size_t>(h)] = 1;
                    res.inner[static_cast<std::size_t>(cls)] = 1;
                }
            }
            for (const Element& s : full.gens) {
                Element y = multiply(spec, x, s);
                if (dist.emplace(y, dx + 1).second) next_layer.push_back(y);
            }
        }
        std::sort(next_layer.begin(), next_layer.end(), lex_less);
        order.insert(order.end(), next_layer.begin(), next_layer.end());
    }

    res.h.resize(q.size);
    for (long long i = 0; i < q.size; ++i) res.h(i) = g.at_or_zero(res.H[static_cast<std::size_t>(i)]);
    res.norm_g_restricted = res.h.norm();
    res.coset_sums_before = coset_sums(q, res.h);

    double target = *std::max_element(res.coset_sums_before.begin(), res.coset_sums_before.end());
    for (int f = 0; f < spec.f_order; ++f) {
        double deficit = target - res.coset_sums_before[static_cast<std::size_t>(f)];
        if (deficit <= 0.0) continue;
        std::vector<long long> annulus;
        for (long long r = 0; r < q.abelian_size; ++r) {
            long long i = static_cast<long long>(f) * q.abelian_size + r;
            if (!res.inner[static_cast<std::size_t>(i)]) annulus.push_back(i);
        }
        if (annulus.empty()) throw SpecError("periodize: empty annulus for coset " + std::to_string(f));
        double add = deficit / static_cast<double>(annulus.size());
        for (long long i : annulus) res.h(i) += add;
        res.added_mass += deficit;
    }
    res.coset_sums_after = coset_sums(q, res.h);
    res.norm_h = res.h.norm();

    double cert = std::sqrt(static_cast<double>(spec.f_order)) * res.norm_g_restricted;
    if (res.norm_h > cert + 1e-12)
        throw NumericalError("periodize: ||h'_n||_2 = " + std::to_string(res.norm_h) +
                             " exceeds the sqrt(k) certificate " + std::to_string(cert) +
                             " (data too concentrated on one coset)");
    return res;
}

}  // namespace cayheat
