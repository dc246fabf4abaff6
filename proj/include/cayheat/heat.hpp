#pragma once

#include <map>
#include <memory>
#include <span>

#include "cayheat/quotient.hpp"

namespace cayheat {

struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// P(N >= r) for N ~ Poisson(lambda).
double poisson_tail(double lambda, long long r);

/// Smallest radius R with poisson_tail(lambda, R) <= eps. The number of
/// jumps of the rate-deg continuous-time walk dominates the word distance
/// travelled, so mass outside the radius-R ball is at most this tail.
int poisson_radius(double lambda, double eps);

struct HeatKernelOptions {
    double eps = 1e-12;
    std::size_t max_cells = 40'000'000;
    double lambda_split = 500.0;  // scale-and-square threshold for deg*t
};

/// Truncated heat kernel exp(t Delta) delta_1 on a certified ball of the
/// chosen view. Values are non-negative underestimates of the true kernel;
/// tail_bound bounds the total mass unaccounted for.
struct HeatState {
    GenSet view = GenSet::Abelian;
    double time = 0.0;
    double beta = 1.0;  // recorded time-scale multiplier; time already includes it
    int radius = 0;
    std::vector<Element> support;  // deterministic ball order
    std::vector<double> values;
    double mass = 0.0;
    double tail_bound = 0.0;

    BallFunction<double> to_ball_function() const;
};

HeatState heat_kernel_ball(const GroupSpec& spec, GenSet view, double t,
                           const HeatKernelOptions& opts = {});

/// Memoizes kernels by (view, time bits, eps bits); translate sums hit the
/// same (beta t) many times per synthesis.
class KernelCache {
  public:
    std::shared_ptr<const HeatState> get(const GroupSpec& spec, GenSet view, double t,
                                         const HeatKernelOptions& opts);

  private:
    std::map<std::tuple<int, std::uint64_t, std::uint64_t>, std::shared_ptr<const HeatState>> cache_;
};

/// Spectral solution of du/dt = Delta u on the quotient:
/// u = sum <g, f_b> e^{lambda_b t} f_b.
Eigen::VectorXcd quotient_heat_solve(const QuotientGraph& q, const EigenBasis& basis,
                                     const Eigen::VectorXcd& g, double t);
Eigen::VectorXd quotient_heat_solve_real(const QuotientGraph& q, const EigenBasis& basis,
                                         const Eigen::VectorXd& g, double t);

/// u(x) = sum_{z in Phi} (h(pi_n z) + a) w(x z^{-1}, beta t), truncated to
/// the certified kernel support. Periodic weights are passed as their
/// quotient values h, which makes non-periodic input unrepresentable.
struct TranslateSumResult {
    std::vector<Element> points;
    Eigen::VectorXcd values;
    double err_bound = 0.0;  // absolute, per evaluation point
    double kernel_tail = 0.0;
    int kernel_radius = 0;
};

TranslateSumResult translate_sum(const QuotientGraph& q, const Eigen::VectorXcd& h, Complex a,
                                 double beta, double t, double eps, std::span<const Element> points,
                                 KernelCache* cache = nullptr, int threads = 1);

}  // namespace cayheat
