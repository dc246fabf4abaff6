#pragma once

#include <complex>
#include <unordered_map>
#include <vector>

#include "cayheat/group_spec.hpp"

namespace cayheat {

/// Which generating set defines edges. Joint is the carrier metric used by
/// ball functions that must survive applications of both Laplacians with
/// one-ring shrinkage per application.
enum class GenSet { Full, Abelian, Joint };

struct GraphView {
    const GroupSpec* spec;
    GenSet set;
    std::vector<Element> gens;

    GraphView(const GroupSpec& s, GenSet g);
    GraphView(GroupSpec&&, GenSet) = delete;  // views keep a pointer into the spec
    int degree() const { return static_cast<int>(gens.size()); }
};

/// Right neighbors x*s, with multiplicity, in generator order.
std::vector<Element> neighbors(const GraphView& view, const Element& x);

/// BFS ball of the given radius, sorted by (distance, vec lex, fidx).
std::vector<Element> ball(const GraphView& view, const Element& center, int radius);

/// Word-metric distance of each generator of `op` in the metric of
/// `carrier`; this is how far one operator application can reach. Throws
/// if a generator is unreachable (e.g. S-steps on an S~-ball).
int step_cost(const GroupSpec& spec, GenSet op, GenSet carrier);

/// A function supported on a ball; the radius is the validity radius and
/// every ball point is stored explicitly, so a missing key means the
/// lookup left the certified domain.
template <typename T>
struct BallFunction {
    GenSet metric = GenSet::Joint;
    Element center;
    int radius = 0;
    bool empty_warning = false;  // set when an operator shrank the domain away
    std::unordered_map<Element, T, ElementHash> values;

    T at_or_zero(const Element& x, bool* truncated = nullptr) const {
        auto it = values.find(x);
        if (it == values.end()) {
            if (truncated) *truncated = true;
            return T(0);
        }
        return it->second;
    }
};

template <typename T>
BallFunction<T> make_ball_function(const GraphView& carrier, const Element& center, int radius) {
    BallFunction<T> f;
    f.metric = carrier.set;
    f.center = center;
    f.radius = radius;
    for (const Element& e : ball(carrier, center, radius)) f.values.emplace(e, T(0));
    return f;
}

/// Delta f(x) = sum_s f(x s) - deg f(x), valid radius shrinks by the step
/// cost of `op` generators in the carrier metric.
template <typename T>
BallFunction<T> laplacian_apply(const GraphView& op, const BallFunction<T>& f);

/// Gamma f(x) = sum_s (f(x s) - f(x))^2; real or integer inputs only.
template <typename T>
BallFunction<T> gamma_apply(const GraphView& op, const BallFunction<T>& f);

extern template BallFunction<double> laplacian_apply(const GraphView&, const BallFunction<double>&);
extern template BallFunction<Int> laplacian_apply(const GraphView&, const BallFunction<Int>&);
extern template BallFunction<std::complex<double>> laplacian_apply(const GraphView&,
                                                                   const BallFunction<std::complex<double>>&);
extern template BallFunction<double> gamma_apply(const GraphView&, const BallFunction<double>&);
extern template BallFunction<Int> gamma_apply(const GraphView&, const BallFunction<Int>&);

/// Shortest S-words for the elements of S~ (BFS, lexicographically least
/// shortest word in the spec's S order), with r = max word length, M = the
/// largest letter multiplicity across all words, K = r*M.
struct WordData {
    std::vector<std::vector<int>> words;  // per S~ element, indices into S
    int r = 0;
    int M = 0;
    long long K = 0;
    int max_letter = 0;  // index into S of the letter realizing M
};

WordData word_decompositions(const GroupSpec& spec, int max_radius = 24);

}  // namespace cayheat
