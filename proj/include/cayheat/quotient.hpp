#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "cayheat/graph.hpp"

namespace cayheat {

using Complex = std::complex<double>;

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The finite quotient by <s^n : s in S~> = n Z^d. Elements are indexed by
/// fidx * n^d + rank(vec) with rank = sum v_i n^i (little-endian), vec
/// reduced into [0,n)^d.
struct QuotientGraph {
    GroupSpec spec;
    int n = 0;
    long long abelian_size = 0;  // n^d
    long long size = 0;          // k n^d
    std::vector<Element> elements;
    std::vector<Element> transversal;     // (0, f) per F-index (lex-least representatives)
    Eigen::MatrixXi adj_full;             // size x |S|
    Eigen::MatrixXi adj_abelian;          // size x |S~|

    long long vec_rank(const IntVec& reduced) const;
    long long index_of(const Element& any) const;  // reduces mod n first
    Element project(const Element& x) const;
    long long project_index(const Element& x) const { return index_of(x); }
    bool connected_full() const;
};

QuotientGraph build_quotient(const GroupSpec& spec, int n);

/// Character of (Z/n)^d: chi(v) = exp(2 pi i <theta, v> / n).
struct Character {
    int n = 1;
    IntVec theta;

    Complex eval(const IntVec& v) const;
    bool is_trivial() const;
};

/// All n^d characters, ordered by little-endian rank of theta.
std::vector<Character> characters(int d, int n);

/// lambda_chi = sum_{s in S~} (chi(s) - 1); real and <= 0, zero only for
/// the trivial character.
double lambda_chi(const GroupSpec& spec, const Character& chi);

/// Per-character spectral block: the k x k matrix of the full Laplacian on
/// V_chi in the transversal basis, its eigenpairs (descending eigenvalue),
/// and the time-scale ratios beta.
struct ChiBlock {
    Character chi;
    double lambda = 0.0;            // lambda_chi
    Eigen::MatrixXcd matrix;        // k x k
    Eigen::VectorXd eigenvalues;    // descending
    Eigen::MatrixXcd eigenvectors;  // column j = transversal values of f_{chi,j},
                                    // normalized so sum_{Phi_n} |f|^2 = 1
    std::vector<std::optional<double>> betas;  // absent for trivial chi, j >= 2

    double sup_norm(int j) const;
};

ChiBlock chi_block(const QuotientGraph& q, const Character& chi);

struct EigenFunctionInfo {
    long long chi_rank = 0;
    Character chi;
    int j = 0;
    double lambda = 0.0;
    std::optional<double> beta;
    double sup_norm = 0.0;
};

/// The full orthonormal eigenbasis of the Laplacian on the quotient,
/// assembled character block by character block. Column order is
/// chi_rank * k + j.
struct EigenBasis {
    Eigen::MatrixXcd functions;  // size x size
    std::vector<EigenFunctionInfo> info;
    std::vector<ChiBlock> blocks;
};

EigenBasis assemble_eigenbasis(const QuotientGraph& q);

/// Laplacian / gradient form on quotient functions.
Eigen::VectorXd quotient_laplacian(const QuotientGraph& q, GenSet view, const Eigen::VectorXd& u);
Eigen::VectorXcd quotient_laplacian(const QuotientGraph& q, GenSet view, const Eigen::VectorXcd& u);
Eigen::VectorXd quotient_gamma(const QuotientGraph& q, GenSet view, const Eigen::VectorXd& u);

/// Lazy lift h o pi_n of a quotient function to the whole group.
class PeriodicLift {
  public:
    PeriodicLift(const QuotientGraph& q, Eigen::VectorXcd h) : q_(&q), h_(std::move(h)) {}
    Complex operator()(const Element& x) const { return h_(q_->index_of(x)); }
    const QuotientGraph& quotient() const { return *q_; }
    const Eigen::VectorXcd& values() const { return h_; }

  private:
    const QuotientGraph* q_;
    Eigen::VectorXcd h_;
};

}  // namespace cayheat
