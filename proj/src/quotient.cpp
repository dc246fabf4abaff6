#include "cayheat/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace cayheat {

namespace {

Int mod_reduce(Int v, int n) {
    Int r = v % n;
    return r < 0 ? r + n : r;
}

IntVec vec_mod(const IntVec& v, int n) {
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = mod_reduce(v[i], n);
    return r;
}

}  // namespace

long long QuotientGraph::vec_rank(const IntVec& reduced) const {
    long long rank = 0, stride = 1;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        rank += reduced[i] * stride;
        stride *= n;
    }
    return rank;
}

long long QuotientGraph::index_of(const Element& any) const {
    return static_cast<long long>(any.fidx) * abelian_size + vec_rank(vec_mod(any.vec, n));
}

Element QuotientGraph::project(const Element& x) const { return Element(vec_mod(x.vec, n), x.fidx); }

bool QuotientGraph::connected_full() const {
    std::vector<char> seen(static_cast<std::size_t>(size), 0);
    std::deque<long long> queue{0};
    seen[0] = 1;
    long long count = 1;
    while (!queue.empty()) {
        long long x = queue.front();
        queue.pop_front();
        for (int g = 0; g < adj_full.cols(); ++g) {
            long long y = adj_full(x, g);
            if (!seen[static_cast<std::size_t>(y)]) {
                seen[static_cast<std::size_t>(y)] = 1;
                ++count;
                queue.push_back(y);
            }
        }
    }
    return count == size;
}

QuotientGraph build_quotient(const GroupSpec& spec, int n) {
    if (n < 2) throw SpecError("quotient modulus must be >= 2, got " + std::to_string(n));
    QuotientGraph q;
    q.spec = spec;
    q.n = n;
    q.abelian_size = 1;
    for (int i = 0; i < spec.d; ++i) q.abelian_size *= n;
    q.size = q.abelian_size * spec.f_order;

    q.elements.resize(static_cast<std::size_t>(q.size));
    for (int f = 0; f < spec.f_order; ++f) {
        IntVec v(static_cast<std::size_t>(spec.d), 0);
        for (long long rank = 0; rank < q.abelian_size; ++rank) {
            q.elements[static_cast<std::size_t>(f) * static_cast<std::size_t>(q.abelian_size) +
                       static_cast<std::size_t>(rank)] = Element(v, f);
            for (int i = 0; i < spec.d; ++i) {  // little-endian increment
                if (++v[static_cast<std::size_t>(i)] < n) break;
                v[static_cast<std::size_t>(i)] = 0;
            }
        }
    }
    for (int f = 0; f < spec.f_order; ++f)
        q.transversal.push_back(Element(IntVec(static_cast<std::size_t>(spec.d), 0), f));

    GraphView full(spec, GenSet::Full), abelian(spec, GenSet::Abelian);
    q.adj_full.resize(q.size, full.degree());
    q.adj_abelian.resize(q.size, abelian.degree());
    for (long long i = 0; i < q.size; ++i) {
        const Element& x = q.elements[static_cast<std::size_t>(i)];
        for (int g = 0; g < full.degree(); ++g)
            q.adj_full(i, g) = static_cast<int>(q.index_of(multiply(spec, x, full.gens[static_cast<std::size_t>(g)])));
        for (int g = 0; g < abelian.degree(); ++g)
            q.adj_abelian(i, g) =
                static_cast<int>(q.index_of(multiply(spec, x, abelian.gens[static_cast<std::size_t>(g)])));
    }
    return q;
}

Complex Character::eval(const IntVec& v) const {
    Int dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
        dot = checked_add(dot, checked_mul(theta[i], v[i]));
    Int m = dot % n;
    if (m < 0) m += n;
    if (m == 0) return Complex(1.0, 0.0);
    return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
}

bool Character::is_trivial() const {
    return std::all_of(theta.begin(), theta.end(), [](Int t) { return t == 0; });
}

std::vector<Character> characters(int d, int n) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= n;
    std::vector<Character> out;
    out.reserve(static_cast<std::size_t>(count));
    IntVec theta(static_cast<std::size_t>(d), 0);
    for (long long r = 0; r < count; ++r) {
        out.push_back(Character{n, theta});
        for (int i = 0; i < d; ++i) {
            if (++theta[static_cast<std::size_t>(i)] < n) break;
            theta[static_cast<std::size_t>(i)] = 0;
        }
    }
    return out;
}

double lambda_chi(const GroupSpec& spec, const Character& chi) {
    Complex acc(0.0, 0.0);
    for (const Element& s : spec.s_abelian) acc += chi.eval(s.vec) - 1.0;
    if (std::abs(acc.imag()) > 1e-14)
        throw NumericalError("lambda_chi has imaginary part " + std::to_string(acc.imag()) +
                             "; S~ is not symmetric");
    return acc.real();
}

double ChiBlock::sup_norm(int j) const {
    return eigenvectors.col(j).cwiseAbs().maxCoeff();
}

ChiBlock chi_block(const QuotientGraph& q, const Character& chi) {
    const GroupSpec& spec = q.spec;
    const int k = spec.f_order;
    ChiBlock blk;
    blk.chi = chi;
    blk.lambda = lambda_chi(spec, chi);
    if (blk.lambda > 1e-12) throw NumericalError("lambda_chi positive: " + std::to_string(blk.lambda));
    if (chi.is_trivial() != (std::abs(blk.lambda) <= 1e-12))
        throw NumericalError("lambda_chi vanishes iff chi is trivial: violated");

    GraphView full(spec, GenSet::Full);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        for (const Element& s : full.gens) {
            Element y = q.project(multiply(spec, q.transversal[static_cast<std::size_t>(i)], s));
            // y = vtilde * x_j with x_j = (0, j), so vtilde has vector part y.vec
            a(i, y.fidx) += chi.eval(y.vec);
        }
        a(i, i) -= static_cast<double>(full.degree());
    }
    double herm = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-12)
        throw NumericalError("chi-block not Hermitian (residual " + std::to_string(herm) +
                             "); S~-invariance is broken");
    blk.matrix = a;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() != Eigen::Success) throw NumericalError("chi-block eigensolve failed");

    // Sort descending; tie-break on the phase-fixed eigenvector entries so
    // degenerate blocks still come out in a reproducible order.
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) perm[static_cast<std::size_t>(j)] = j;
    Eigen::MatrixXcd vecs = es.eigenvectors();
    for (int j = 0; j < k; ++j) {
        // phase fix: rotate the entry of largest modulus to the positive real axis
        int pivot = 0;
        double best = -1.0;
        for (int i = 0; i < k; ++i) {
            double m = std::abs(vecs(i, j));
            if (m > best + 1e-12) {
                best = m;
                pivot = i;
            }
        }
        Complex p = vecs(pivot, j);
        if (std::abs(p) > 0) vecs.col(j) *= std::conj(p) / std::abs(p);
    }
    auto rounded_lex_less = [&vecs, k](int a_, int b_) {
        for (int i = 0; i < k; ++i) {
            auto ra = std::llround(vecs(i, a_).real() * 1e9), rb = std::llround(vecs(i, b_).real() * 1e9);
            if (ra != rb) return ra < rb;
            auto ia = std::llround(vecs(i, a_).imag() * 1e9), ib = std::llround(vecs(i, b_).imag() * 1e9);
            if (ia != ib) return ia < ib;
        }
        return false;
    };
    std::sort(perm.begin(), perm.end(), [&](int a_, int b_) {
        double la = es.eigenvalues()(a_), lb = es.eigenvalues()(b_);
        if (std::abs(la - lb) > 1e-9) return la > lb;
        return rounded_lex_less(a_, b_);
    });

    blk.eigenvalues.resize(k);
    blk.eigenvectors.resize(k, k);
    for (int j = 0; j < k; ++j) {
        blk.eigenvalues(j) = es.eigenvalues()(perm[static_cast<std::size_t>(j)]);
        blk.eigenvectors.col(j) = vecs.col(perm[static_cast<std::size_t>(j)]);
    }

    // Re-orthonormalize (no-op away from degeneracies) and rescale so the
    // scalar product over the whole quotient is 1: |Phi~_n| sum_i |f(x_i)|^2 = 1.
    for (int j = 0; j < k; ++j) {
        for (int l = 0; l < j; ++l)
            blk.eigenvectors.col(j) -=
                (blk.eigenvectors.col(l).adjoint() * blk.eigenvectors.col(j))(0) * blk.eigenvectors.col(l);
        blk.eigenvectors.col(j).normalize();
    }
    double resid = (a * blk.eigenvectors - blk.eigenvectors * blk.eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
    if (resid > 1e-10) throw NumericalError("chi-block eigen residual " + std::to_string(resid));
    blk.eigenvectors /= std::sqrt(static_cast<double>(q.abelian_size));

    const bool trivial = chi.is_trivial();
    blk.betas.assign(static_cast<std::size_t>(k), std::nullopt);
    for (int j = 0; j < k; ++j) {
        double lam = blk.eigenvalues(j);
        if (trivial) {
            if (j == 0) {
                if (std::abs(lam) > 1e-10)
                    throw NumericalError("trivial-character top eigenvalue is not 0: " + std::to_string(lam));
                Eigen::VectorXcd c = blk.eigenvectors.col(0);
                if ((c.array() - c(0)).cwiseAbs().maxCoeff() > 1e-10)
                    throw NumericalError("trivial-character top eigenfunction is not constant");
                blk.betas[0] = 1.0;
            }
        } else {
            if (lam > -1e-10)
                throw NumericalError("nontrivial character has eigenvalue " + std::to_string(lam) +
                                     " >= 0 (quotient disconnected?)");
            blk.betas[static_cast<std::size_t>(j)] = lam / blk.lambda;
        }
        double sup = blk.sup_norm(j);
        double bound = std::sqrt(static_cast<double>(k) / static_cast<double>(q.size));
        if (sup > bound + 1e-12)
            throw NumericalError("sup-norm bound violated: " + std::to_string(sup) + " > " +
                                 std::to_string(bound));
    }
    return blk;
}

EigenBasis assemble_eigenbasis(const QuotientGraph& q) {
    const GroupSpec& spec = q.spec;
    const int k = spec.f_order;
    auto chis = characters(spec.d, q.n);
    EigenBasis basis;
    basis.functions.resize(q.size, q.size);
    basis.blocks.reserve(chis.size());
    basis.info.reserve(static_cast<std::size_t>(q.size));

    // Precompute chi values per abelian rank as we extend each block:
    // f(v * x_i) = chi(v) f(x_i) and the canonical element of index
    // f*n^d + rank has exactly vector part v.
    for (std::size_t ci = 0; ci < chis.size(); ++ci) {
        ChiBlock blk = chi_block(q, chis[ci]);
        Eigen::VectorXcd chi_vals(q.abelian_size);
        for (long long r = 0; r < q.abelian_size; ++r)
            chi_vals(r) = chis[ci].eval(q.elements[static_cast<std::size_t>(r)].vec);
        for (int j = 0; j < k; ++j) {
            long long col = static_cast<long long>(ci) * k + j;
            for (int f = 0; f < k; ++f)
                basis.functions.col(col).segment(static_cast<long long>(f) * q.abelian_size, q.abelian_size) =
                    chi_vals * blk.eigenvectors(f, j);
            EigenFunctionInfo inf;
            inf.chi_rank = static_cast<long long>(ci);
            inf.chi = chis[ci];
            inf.j = j;
            inf.lambda = blk.eigenvalues(j);
            inf.beta = blk.betas[static_cast<std::size_t>(j)];
            inf.sup_norm = blk.sup_norm(j);
            basis.info.push_back(inf);
        }
        basis.blocks.push_back(std::move(blk));
    }

    Eigen::MatrixXcd gram = basis.functions.adjoint() * basis.functions;
    double gram_resid = (gram - Eigen::MatrixXcd::Identity(q.size, q.size)).cwiseAbs().maxCoeff();
    if (gram_resid > 1e-10)
        throw NumericalError("eigenbasis Gram residual " + std::to_string(gram_resid) +
                             " (rank deficiency or broken block)");
    // Each column must be a Laplacian eigenfunction on the quotient.
    double worst = 0.0;
    for (long long col = 0; col < q.size; ++col) {
        Eigen::VectorXcd f = basis.functions.col(col);
        Eigen::VectorXcd lf = quotient_laplacian(q, GenSet::Full, f);
        worst = std::max(worst, (lf - basis.info[static_cast<std::size_t>(col)].lambda * f).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-10) throw NumericalError("assembled eigenfunction residual " + std::to_string(worst));
    return basis;
}

namespace {

template <typename Vec>
Vec laplacian_impl(const QuotientGraph& q, GenSet view, const Vec& u) {
    const Eigen::MatrixXi& adj = view == GenSet::Full ? q.adj_full : q.adj_abelian;
    if (view == GenSet::Joint) throw SpecError("joint view has no quotient Laplacian");
    Vec out(u.size());
    for (long long i = 0; i < u.size(); ++i) {
        typename Vec::Scalar acc(0);
        for (int g = 0; g < adj.cols(); ++g) acc += u(adj(i, g)) - u(i);
        out(i) = acc;
    }
    return out;
}

}  // namespace

Eigen::VectorXd quotient_laplacian(const QuotientGraph& q, GenSet view, const Eigen::VectorXd& u) {
    return laplacian_impl(q, view, u);
}

Eigen::VectorXcd quotient_laplacian(const QuotientGraph& q, GenSet view, const Eigen::VectorXcd& u) {
    return laplacian_impl(q, view, u);
}

Eigen::VectorXd quotient_gamma(const QuotientGraph& q, GenSet view, const Eigen::VectorXd& u) {
    const Eigen::MatrixXi& adj = view == GenSet::Full ? q.adj_full : q.adj_abelian;
    if (view == GenSet::Joint) throw SpecError("joint view has no quotient gradient form");
    Eigen::VectorXd out(u.size());
    for (long long i = 0; i < u.size(); ++i) {
        double acc = 0;
        for (int g = 0; g < adj.cols(); ++g) {
            double diff = u(adj(i, g)) - u(i);
            acc += diff * diff;
        }
        out(i) = acc;
    }
    return out;
}

}  // namespace cayheat
