#include "cayheat/heat.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <cmath>

#include "cayheat/parallel.hpp"

namespace cayheat {

double poisson_tail(double lambda, long long r) {
    if (r <= 0) return 1.0;
    if (lambda <= 0.0) return 0.0;
    // sum_{j >= r} e^{-lambda} lambda^j / j!, first term via lgamma
    double log_term = -lambda + static_cast<double>(r) * std::log(lambda) - std::lgamma(static_cast<double>(r) + 1.0);
    double term = std::exp(log_term);
    double sum = 0.0;
    for (long long j = r; j < r + 100000; ++j) {
        sum += term;
        term *= lambda / static_cast<double>(j + 1);
        if (term < sum * 1e-19 + 1e-320) break;
    }
    return sum;
}

int poisson_radius(double lambda, double eps) {
    if (lambda <= 0.0) return 0;
    int r = std::max(1, static_cast<int>(std::floor(lambda)));
    while (poisson_tail(lambda, r) > eps) ++r;
    return r;
}

BallFunction<double> HeatState::to_ball_function() const {
    BallFunction<double> f;
    f.metric = view;
    f.center = support.empty() ? Element() : support.front();
    f.radius = radius;
    for (std::size_t i = 0; i < support.size(); ++i) f.values.emplace(support[i], values[i]);
    return f;
}

namespace {

struct IndexedBall {
    std::vector<Element> elements;
    std::unordered_map<Element, int, ElementHash> index;
    std::vector<int> nbr;  // elements.size() * deg, -1 when outside
    int deg = 0;
};

IndexedBall indexed_ball(const GroupSpec& spec, const GraphView& view, int radius) {
    IndexedBall b;
    b.elements = ball(view, identity_element(spec.d), radius);
    b.index.reserve(b.elements.size() * 2);
    for (std::size_t i = 0; i < b.elements.size(); ++i) b.index.emplace(b.elements[i], static_cast<int>(i));
    b.deg = view.degree();
    b.nbr.assign(b.elements.size() * static_cast<std::size_t>(b.deg), -1);
    for (std::size_t i = 0; i < b.elements.size(); ++i)
        for (int g = 0; g < b.deg; ++g) {
            auto it = b.index.find(multiply(spec, b.elements[i], view.gens[static_cast<std::size_t>(g)]));
            if (it != b.index.end()) b.nbr[i * static_cast<std::size_t>(b.deg) + static_cast<std::size_t>(g)] = it->second;
        }
    return b;
}

/// exp(t Delta) delta computed as e^{-deg t} exp(t A) delta with the
/// all-positive adjacency series; every dropped contribution is
/// non-negative, so the result underestimates the true kernel.
std::vector<double> kernel_series(const IndexedBall& b, double t, double series_eps) {
    const double lambda = static_cast<double>(b.deg) * t;
    std::vector<double> acc(b.elements.size(), 0.0), cur(b.elements.size(), 0.0), next;
    cur[0] = std::exp(-lambda);  // identity element is first in ball order
    acc[0] = cur[0];
    next.assign(b.elements.size(), 0.0);
    double pois_term = std::exp(-lambda);  // e^{-lambda} lambda^j / j!
    double pois_cum = pois_term;
    for (long long j = 1;; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        double scale = t / static_cast<double>(j);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            double v = cur[i];
            if (v == 0.0) continue;
            double add = v * scale;
            for (int g = 0; g < b.deg; ++g) {
                int y = b.nbr[i * static_cast<std::size_t>(b.deg) + static_cast<std::size_t>(g)];
                if (y >= 0) next[static_cast<std::size_t>(y)] += add;
            }
        }
        std::swap(cur, next);
        for (std::size_t i = 0; i < cur.size(); ++i) acc[i] += cur[i];
        pois_term *= lambda / static_cast<double>(j);
        pois_cum += pois_term;
        if (1.0 - pois_cum <= series_eps && j >= static_cast<long long>(lambda)) break;
        if (j > static_cast<long long>(lambda) + 100000)
            throw NumericalError("heat kernel series failed to converge");
    }
    return acc;
}

/// Group-convolution squaring p <- p * p restricted to the ball.
std::vector<double> square_on_ball(const GroupSpec& spec, const IndexedBall& b,
                                   const std::vector<double>& p) {
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t yi = 0; yi < p.size(); ++yi) {
        if (p[yi] == 0.0) continue;
        const Element& y = b.elements[yi];
        for (std::size_t zi = 0; zi < p.size(); ++zi) {
            if (p[zi] == 0.0) continue;
            auto it = b.index.find(multiply(spec, y, b.elements[zi]));
            if (it != b.index.end()) out[static_cast<std::size_t>(it->second)] += p[yi] * p[zi];
        }
    }
    return out;
}

}  // namespace

HeatState heat_kernel_ball(const GroupSpec& spec, GenSet view, double t, const HeatKernelOptions& opts) {
    if (t < 0) throw SpecError("heat kernel requires t >= 0");
    GraphView gv(spec, view);
    HeatState hs;
    hs.view = view;
    hs.time = t;
    if (t == 0.0) {
        hs.radius = 0;
        hs.support = {identity_element(spec.d)};
        hs.values = {1.0};
        hs.mass = 1.0;
        hs.tail_bound = 0.0;
        return hs;
    }
    const double deg = static_cast<double>(gv.degree());
    const double lambda = deg * t;
    int m = 0;
    {
        double lam0 = lambda;
        while (lam0 > opts.lambda_split) {
            lam0 *= 0.5;
            ++m;
        }
    }
    // every squaring stage can drop boundary mass bounded by the spatial
    // tail, so the spatial budget is split across the m+1 stages
    const double eps_space = opts.eps * 0.5 / static_cast<double>(m + 1);
    int radius = poisson_radius(lambda, eps_space);

    // crude cell estimate before committing to the BFS
    double est = 1.0;
    for (int i = 0; i < spec.d; ++i) est *= 2.0 * radius + 1.0;
    est *= spec.f_order;
    if (est > static_cast<double>(opts.max_cells))
        throw ResourceError("heat kernel needs radius " + std::to_string(radius) +
                            " (~" + std::to_string(static_cast<long long>(est)) +
                            " cells) above the configured cap");
    IndexedBall b = indexed_ball(spec, gv, radius);
    if (b.elements.size() > opts.max_cells)
        throw ResourceError("heat kernel ball has " + std::to_string(b.elements.size()) +
                            " cells, above the configured cap");

    double series_eps = (opts.eps * 0.5) / std::pow(2.0, m);
    std::vector<double> p = kernel_series(b, t / std::pow(2.0, m), series_eps);
    for (int i = 0; i < m; ++i) p = square_on_ball(spec, b, p);

    for (double& v : p) {
        if (v < 0.0) {
            if (v < -1e-15) throw NumericalError("heat kernel produced a negative value " + std::to_string(v));
            v = 0.0;
        }
    }
    hs.radius = radius;
    hs.support = b.elements;
    hs.values = std::move(p);
    hs.mass = 0.0;
    for (double v : hs.values) hs.mass += v;
    // the summation of <= 1 total mass over N cells carries N ulp of roundoff
    hs.tail_bound = std::max(0.0, 1.0 - hs.mass) +
                    std::numeric_limits<double>::epsilon() * static_cast<double>(hs.values.size());
    return hs;
}

std::shared_ptr<const HeatState> KernelCache::get(const GroupSpec& spec, GenSet view, double t,
                                                  const HeatKernelOptions& opts) {
    auto key = std::make_tuple(static_cast<int>(view), std::bit_cast<std::uint64_t>(t),
                               std::bit_cast<std::uint64_t>(opts.eps));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto hs = std::make_shared<const HeatState>(heat_kernel_ball(spec, view, t, opts));
    cache_.emplace(key, hs);
    return hs;
}

Eigen::VectorXcd quotient_heat_solve(const QuotientGraph& q, const EigenBasis& basis,
                                     const Eigen::VectorXcd& g, double t) {
    (void)q;
    Eigen::VectorXcd coef = basis.functions.adjoint() * g;
    for (long long b = 0; b < coef.size(); ++b)
        coef(b) *= std::exp(basis.info[static_cast<std::size_t>(b)].lambda * t);
    return basis.functions * coef;
}

Eigen::VectorXd quotient_heat_solve_real(const QuotientGraph& q, const EigenBasis& basis,
                                         const Eigen::VectorXd& g, double t) {
    Eigen::VectorXcd u = quotient_heat_solve(q, basis, g.cast<Complex>(), t);
    double imag = u.imag().cwiseAbs().maxCoeff();
    if (imag > 1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff()))
        throw NumericalError("heat solution of real data has imaginary part " + std::to_string(imag));
    return u.real();
}

TranslateSumResult translate_sum(const QuotientGraph& q, const Eigen::VectorXcd& h, Complex a,
                                 double beta, double t, double eps, std::span<const Element> points,
                                 KernelCache* cache, int threads) {
    if (beta <= 0) throw SpecError("translate_sum requires beta > 0");
    if (h.size() != q.size) throw SpecError("translate_sum: h must live on the quotient");
    HeatKernelOptions opts;
    opts.eps = eps;
    std::shared_ptr<const HeatState> owned;
    const HeatState* w;
    if (cache) {
        owned = cache->get(q.spec, GenSet::Abelian, beta * t, opts);
        w = owned.get();
    } else {
        owned = std::make_shared<const HeatState>(heat_kernel_ball(q.spec, GenSet::Abelian, beta * t, opts));
        w = owned.get();
    }

    TranslateSumResult res;
    res.points.assign(points.begin(), points.end());
    res.values.resize(static_cast<long long>(points.size()));
    res.kernel_tail = w->tail_bound;
    res.kernel_radius = w->radius;

    const int n = q.n;
    const int d = q.spec.d;
    // strides for the little-endian vec rank
    std::vector<long long> stride(static_cast<std::size_t>(d));
    long long s = 1;
    for (int i = 0; i < d; ++i) {
        stride[static_cast<std::size_t>(i)] = s;
        s *= n;
    }

    parallel_for(points.size(), threads, [&](std::size_t pi) {
        const Element& x = points[pi];
        Complex acc(0.0, 0.0);
        for (std::size_t yi = 0; yi < w->support.size(); ++yi) {
            double wv = w->values[yi];
            if (wv == 0.0) continue;
            const IntVec& yv = w->support[yi].vec;
            long long rank = 0;
            for (int i = 0; i < d; ++i) {
                Int r = (x.vec[static_cast<std::size_t>(i)] - yv[static_cast<std::size_t>(i)]) % n;
                if (r < 0) r += n;
                rank += r * stride[static_cast<std::size_t>(i)];
            }
            acc += wv * (h(static_cast<long long>(x.fidx) * q.abelian_size + rank) + a);
        }
        res.values(static_cast<long long>(pi)) = acc;
    });

    double sup_h = h.cwiseAbs().maxCoeff();
    res.err_bound = (sup_h + std::abs(a)) * w->tail_bound;
    return res;
}

}  // namespace cayheat
