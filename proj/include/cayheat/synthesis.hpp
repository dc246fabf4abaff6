#pragma once

#include "cayheat/heat.hpp"

namespace cayheat {

/// One (chi, j) term of a synthesis plan. q holds the non-negative weights
/// Re(c (f + a)) per quotient class; the weight of a group element z
/// depends on z only through pi_n(z).
struct PlanTerm {
    long long chi_rank = 0;
    int j = 0;
    long long basis_col = 0;
    Complex c{0.0, 0.0};
    Complex a{0.0, 0.0};
    double beta = 1.0;
    double f_sup = 0.0;
    Eigen::VectorXd q;
};

struct SynthesisPlan {
    int n = 0;
    std::vector<PlanTerm> terms;
    Complex B{0.0, 0.0};
    double g_norm2 = 0.0;
    double b_bound = 0.0;      // sqrt(k) ||g||_2
    double shift = 0.0;        // additive constant applied to the target solution
    double max_q_clamp = 0.0;  // largest negative q rounded up to 0
};

/// Expansion coefficients <g, f_{chi,j}> over the assembled basis, with the
/// trivial-character j >= 2 entries forced to zero. Requires all coset sums
/// of g to agree (the orthogonality precondition); reports the two worst
/// offenders otherwise.
Eigen::VectorXcd coefficients(const QuotientGraph& q, const EigenBasis& basis,
                              const Eigen::VectorXcd& g);

SynthesisPlan make_plan(const QuotientGraph& q, const EigenBasis& basis, const Eigen::VectorXd& g);

struct SynthesisResult {
    std::vector<Element> points;
    Eigen::VectorXd values;
    double err_bound = 0.0;
};

/// u(x, t) = Re( sum_{chi,j} c (TS of f_{chi,j} with shift a at beta t) ) - Re(B),
/// evaluated at the given group elements.
SynthesisResult synthesize(const QuotientGraph& q, const EigenBasis& basis, const SynthesisPlan& plan,
                           double t, std::span<const Element> points, double eps,
                           KernelCache* cache = nullptr, int threads = 1);

struct PosCombReport {
    double residual_max = 0.0;  // | sum q w - Re(B) - u |
    double min_q = 0.0;
    double re_b = 0.0;
    double b_bound = 0.0;  // sqrt(k) ||g||_2
    double slack = 0.0;    // b_bound - re_b >= 0
    double err_bound = 0.0;
};

/// Verifies u + Re(B) = sum_{chi,j,z} q(chi,j,z) w(x z^{-1}, beta t) with
/// the left side from the spectral quotient solver, and that every weight
/// is non-negative.
PosCombReport pos_comb_check(const QuotientGraph& q, const EigenBasis& basis, const SynthesisPlan& plan,
                             double t, double eps, KernelCache* cache = nullptr, int threads = 1);

struct PeriodizeResult {
    Eigen::VectorXd h;               // h'_n per quotient class
    std::vector<Element> H;          // transversal element per class (the set H_n)
    std::vector<char> inner;         // class representative lies in H_{n/2}
    double norm_h = 0.0;             // ||h'_n||_2
    double norm_g_restricted = 0.0;  // ||g restricted to H_n||_2
    double added_mass = 0.0;
    std::vector<double> coset_sums_before;
    std::vector<double> coset_sums_after;
};

/// Restriction of g through a BFS-ball-shaped transversal H_n containing 1,
/// with coset sums equalized by spreading the deficit uniformly over the
/// annulus H_n \ H_{n/2} of each deficient coset. Requires even n >= 4 and
/// g >= 0; certifies ||h'_n||_2 <= sqrt(k) ||g|_{H_n}||_2.
PeriodizeResult periodize(const QuotientGraph& q, const BallFunction<double>& g);

/// Canonical lift (one representative per quotient class, vec in [0,n)^d),
/// index-aligned with the quotient; the default evaluation points for
/// synthesis cross-checks.
std::vector<Element> canonical_lifts(const QuotientGraph& q);

/// Plan export: n, coefficients, shifts, B, per-class weights, certificates.
void save_plan_json(const SynthesisPlan& plan, const EigenBasis& basis, const std::string& path);

/// Solution snapshot rows (element, t, value).
void save_solution_csv(const SynthesisResult& res, double t, const std::string& path, bool append);

}  // namespace cayheat
