#include "cayheat/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace cayheat {

GraphView::GraphView(const GroupSpec& s, GenSet g) : spec(&s), set(g) {
    switch (g) {
        case GenSet::Full:
            gens = s.s_full;
            break;
        case GenSet::Abelian:
            gens = s.s_abelian;
            break;
        case GenSet::Joint:
            gens = s.s_full;
            gens.insert(gens.end(), s.s_abelian.begin(), s.s_abelian.end());
            break;
    }
}

std::vector<Element> neighbors(const GraphView& view, const Element& x) {
    std::vector<Element> out;
    out.reserve(view.gens.size());
    for (const Element& s : view.gens) out.push_back(multiply(*view.spec, x, s));
    return out;
}

std::vector<Element> ball(const GraphView& view, const Element& center, int radius) {
    std::unordered_map<Element, int, ElementHash> dist;
    std::deque<Element> queue;
    dist.emplace(center, 0);
    queue.push_back(center);
    while (!queue.empty()) {
        Element x = queue.front();
        queue.pop_front();
        int dx = dist[x];
        if (dx == radius) continue;
        for (const Element& s : view.gens) {
            Element y = multiply(*view.spec, x, s);
            if (dist.emplace(y, dx + 1).second) queue.push_back(y);
        }
    }
    std::vector<Element> out;
    out.reserve(dist.size());
    for (const auto& [e, _] : dist) out.push_back(e);
    std::sort(out.begin(), out.end(), [&dist](const Element& a, const Element& b) {
        int da = dist.at(a), db = dist.at(b);
        if (da != db) return da < db;
        return lex_less(a, b);
    });
    return out;
}

int step_cost(const GroupSpec& spec, GenSet op, GenSet carrier) {
    if (op == carrier || carrier == GenSet::Joint) return 1;
    GraphView opv(spec, op), cv(spec, carrier);
    std::unordered_map<Element, int, ElementHash> dist;
    std::deque<Element> queue;
    Element id = identity_element(spec.d);
    dist.emplace(id, 0);
    queue.push_back(id);
    const int cap = 16;
    int worst = 0;
    auto found_all = [&]() {
        for (const Element& s : opv.gens)
            if (!dist.count(s)) return false;
        return true;
    };
    while (!queue.empty() && !found_all()) {
        Element x = queue.front();
        queue.pop_front();
        int dx = dist[x];
        if (dx == cap) continue;
        for (const Element& s : cv.gens) {
            Element y = multiply(spec, x, s);
            if (dist.emplace(y, dx + 1).second) queue.push_back(y);
        }
    }
    for (const Element& s : opv.gens) {
        auto it = dist.find(s);
        if (it == dist.end())
            throw SpecError("operator generators unreachable in carrier metric (e.g. S-steps on an S~-ball)");
        worst = std::max(worst, it->second);
    }
    return std::max(worst, 1);
}

template <typename T>
BallFunction<T> laplacian_apply(const GraphView& op, const BallFunction<T>& f) {
    int cost = step_cost(*op.spec, op.set, f.metric);
    BallFunction<T> out;
    out.metric = f.metric;
    out.center = f.center;
    out.radius = f.radius - cost;
    if (out.radius < 0) {
        out.radius = -1;
        out.empty_warning = true;
        return out;
    }
    GraphView carrier(*op.spec, f.metric);
    for (const Element& x : ball(carrier, f.center, out.radius)) {
        T fx = f.at_or_zero(x);
        T acc(0);
        for (const Element& s : op.gens) acc += f.at_or_zero(multiply(*op.spec, x, s)) - fx;
        out.values.emplace(x, acc);
    }
    return out;
}

template <typename T>
BallFunction<T> gamma_apply(const GraphView& op, const BallFunction<T>& f) {
    int cost = step_cost(*op.spec, op.set, f.metric);
    BallFunction<T> out;
    out.metric = f.metric;
    out.center = f.center;
    out.radius = f.radius - cost;
    if (out.radius < 0) {
        out.radius = -1;
        out.empty_warning = true;
        return out;
    }
    GraphView carrier(*op.spec, f.metric);
    for (const Element& x : ball(carrier, f.center, out.radius)) {
        T fx = f.at_or_zero(x);
        T acc(0);
        for (const Element& s : op.gens) {
            T diff = f.at_or_zero(multiply(*op.spec, x, s)) - fx;
            acc += diff * diff;
        }
        out.values.emplace(x, acc);
    }
    return out;
}

template BallFunction<double> laplacian_apply(const GraphView&, const BallFunction<double>&);
template BallFunction<Int> laplacian_apply(const GraphView&, const BallFunction<Int>&);
template BallFunction<std::complex<double>> laplacian_apply(const GraphView&,
                                                            const BallFunction<std::complex<double>>&);
template BallFunction<double> gamma_apply(const GraphView&, const BallFunction<double>&);
template BallFunction<Int> gamma_apply(const GraphView&, const BallFunction<Int>&);

WordData word_decompositions(const GroupSpec& spec, int max_radius) {
    GraphView full(spec, GenSet::Full);
    struct Node {
        int parent;    // index into discovery order, -1 for root
        int letter;    // generator index used to reach this node
    };
    std::unordered_map<Element, int, ElementHash> seen;  // element -> discovery index
    std::vector<Node> nodes;
    std::vector<Element> order;
    std::vector<int> depth;

    Element id = identity_element(spec.d);
    seen.emplace(id, 0);
    nodes.push_back({-1, -1});
    order.push_back(id);
    depth.push_back(0);

    std::vector<int> targets(spec.s_abelian.size(), -1);
    auto record_targets = [&](const Element& e, int idx) {
        for (std::size_t t = 0; t < spec.s_abelian.size(); ++t)
            if (targets[t] < 0 && spec.s_abelian[t] == e) targets[t] = idx;
    };
    record_targets(id, 0);

    std::size_t head = 0;
    bool all_found = false;
    while (head < order.size() && !all_found) {
        int xi = static_cast<int>(head);
        Element x = order[head];
        ++head;
        if (depth[static_cast<std::size_t>(xi)] == max_radius) continue;
        for (int g = 0; g < full.degree(); ++g) {
            Element y = multiply(spec, x, full.gens[static_cast<std::size_t>(g)]);
            auto [it, fresh] = seen.emplace(y, static_cast<int>(order.size()));
            if (!fresh) continue;
            nodes.push_back({xi, g});
            order.push_back(y);
            depth.push_back(depth[static_cast<std::size_t>(xi)] + 1);
            record_targets(y, it->second);
        }
        all_found = std::all_of(targets.begin(), targets.end(), [](int v) { return v >= 0; });
    }

    WordData wd;
    wd.words.resize(spec.s_abelian.size());
    std::unordered_map<int, int> letter_count;
    for (std::size_t t = 0; t < spec.s_abelian.size(); ++t) {
        if (targets[t] < 0)
            throw SpecError("word_decompositions: " + to_string(spec.s_abelian[t]) +
                            " unreachable over S within radius " + std::to_string(max_radius) +
                            " (S does not generate, or the radius cap is too small)");
        std::vector<int> word;
        for (int cur = targets[t]; nodes[static_cast<std::size_t>(cur)].parent >= 0;
             cur = nodes[static_cast<std::size_t>(cur)].parent)
            word.push_back(nodes[static_cast<std::size_t>(cur)].letter);
        std::reverse(word.begin(), word.end());
        for (int g : word) ++letter_count[g];
        wd.r = std::max(wd.r, static_cast<int>(word.size()));
        wd.words[t] = std::move(word);
    }
    wd.M = 0;
    for (int g = 0; g < full.degree(); ++g) {
        auto it = letter_count.find(g);
        int c = it == letter_count.end() ? 0 : it->second;
        if (c > wd.M) {
            wd.M = c;
            wd.max_letter = g;
        }
    }
    wd.r = std::max(wd.r, 1);
    wd.M = std::max(wd.M, 1);
    wd.K = static_cast<long long>(wd.r) * wd.M;
    return wd;
}

}  // namespace cayheat
