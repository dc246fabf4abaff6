#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cayheat/element.hpp"

namespace cayheat {

struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A virtually Abelian group given as an extension of a finite group F of
/// order k by Z^d: multiplication is
///
///   (v, f) * (w, g) = (v + action[f] w + cocycle[f][g], f_table[f][g])
///
/// F-index 0 is the identity of F, and the cocycle is identity-normalized
/// (cocycle[0][.] = cocycle[.][0] = 0). S generates the whole group, S~ the
/// Z^d part; S~ must be invariant under every action matrix.
struct GroupSpec {
    std::string name;
    int d = 0;
    int f_order = 0;
    std::vector<std::vector<int>> f_table;   // k x k
    std::vector<IntMat> action;              // k matrices, d x d
    std::vector<std::vector<IntVec>> cocycle;  // k x k vectors of length d
    std::vector<Element> s_full;     // S
    std::vector<Element> s_abelian;  // S~

    int f_identity() const { return 0; }
    int f_multiply(int f, int g) const { return f_table[static_cast<std::size_t>(f)][static_cast<std::size_t>(g)]; }
    int f_inverse(int f) const;
};

struct Violation {
    std::string code;
    std::string message;
};

/// Checks every structural invariant of the spec; violations are returned
/// as data (with a witness in the message), never thrown.
std::vector<Violation> validate_spec(const GroupSpec& spec);

Element multiply(const GroupSpec& spec, const Element& a, const Element& b);
Element inverse(const GroupSpec& spec, const Element& a);

/// x^{-1} * y * x for y in the Z^d part; rejects y with a non-identity
/// F-index. The result lands back in the Z^d part.
Element conjugate(const GroupSpec& spec, const Element& y, const Element& x);

GroupSpec load_group_spec(const std::string& path);
void save_group_spec(const GroupSpec& spec, const std::string& path);

/// Hexagonal lattice group: Z^2 extended by Z_2 acting as -I, split
/// extension. S = {(0|s), (e1|s), (e2|s)}, S~ = {+-e1, +-e2}.
GroupSpec hexagonal_spec();

/// Glide-reflection (pg / Klein-bottle type) group: Z^2 extended by Z_2
/// acting as diag(1,-1) with cocycle tau(s,s) = e1 (non-split).
GroupSpec klein_bottle_spec();

/// Free Abelian Z^d with the standard symmetric generators; F is trivial
/// and S = S~, so both graph views coincide.
GroupSpec torus_spec(int d);

/// The Z^d subgroup of `spec` with its S~ generators, as a standalone
/// spec with trivial F (S = S~).
GroupSpec abelian_subgroup_spec(const GroupSpec& spec);

}  // namespace cayheat
