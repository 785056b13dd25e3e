#pragma once

#include "symerg/clopen.hpp"
#include "symerg/measure.hpp"
#include "symerg/subshift.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace symerg {

using Atom = std::uint32_t;
using Coords = std::vector<Atom>;

// A clopen partition read through the window [lo, hi]: every word of
// factors(hi - lo + 1) carries an atom subscript 1..m. Atom 1 holds 1^width
// and is the only infinite atom. Joins remember, per atom, the tuple of
// component subscripts it came from.
class WindowPartition {
public:
    WindowPartition(LanguagePtr lang, int lo, int hi, std::vector<Atom> labels, std::size_t atoms,
                    std::vector<Coords> coords = {});

    // Atoms = letters of x_0.
    static WindowPartition letter_partition(LanguagePtr lang);
    // Atom i+2 is finite[i]; atom 1 is the complement. The sets must be
    // compact, nonempty and pairwise disjoint.
    static WindowPartition from_clopens(LanguagePtr lang, const std::vector<Clopen>& finite);
    static WindowPartition from_json(LanguagePtr lang, const nlohmann::json& j);
    nlohmann::json to_json() const;

    const LanguagePtr& language() const { return lang_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    std::size_t width() const { return static_cast<std::size_t>(hi_ - lo_ + 1); }
    std::size_t size() const { return atoms_; }
    const std::vector<Word>& words() const;
    const std::vector<Atom>& labels() const { return labels_; }
    Atom label(WordView window_word) const;
    const std::vector<Coords>& coords() const { return coords_; }
    const Coords& coords_of(Atom a) const { return coords_.at(a - 1); }

    Clopen atom(Atom a) const;
    Clopen finite_support() const;
    Measure atom_measure(const CylinderMeasure& mu, Atom a) const;

    // Same partition read through a larger window.
    WindowPartition aligned(int lo, int hi) const;
    // T^(-j) alpha: the atom of x is the atom of T^j x under alpha.
    WindowPartition pullback(int j) const;
    // Atom a becomes atom f(a).
    WindowPartition coarsened(const SubscriptMap& f) const;
    // Minimal window, finite atoms numbered by their smallest word.
    WindowPartition canonical() const;

    // alpha-name of host positions [first, last) (0-based), each position p
    // read through host[p+lo .. p+hi].
    Word name(WordView host, std::size_t first, std::size_t last) const;

private:
    LanguagePtr lang_;
    int lo_, hi_;
    std::vector<Atom> labels_;
    std::size_t atoms_;
    std::vector<Coords> coords_;
};

// Join of a family: atoms are the nonempty intersections, atom 1 is
// (1,...,1), the rest ordered lexicographically by their component tuple.
WindowPartition join(const std::vector<WindowPartition>& parts);
WindowPartition join(const WindowPartition& a, const WindowPartition& b);
// T^(-l) alpha v ... v T^(-k) alpha, coordinates ordered by offset l..k.
WindowPartition iterated_join(const WindowPartition& alpha, int l, int k);
// The (2k-1)-block partition alpha_{-k+1}^{k-1}.
WindowPartition block_partition(const WindowPartition& alpha, int k);

// f_{alpha,beta}: subscripts of beta -> subscripts of alpha, when beta refines alpha.
std::optional<SubscriptMap> refinement_map(const WindowPartition& coarse, const WindowPartition& fine);
bool refines(const WindowPartition& fine, const WindowPartition& coarse);
bool same_up_to_relabeling(const WindowPartition& a, const WindowPartition& b);

// d(alpha, beta) = sum over i != 1 of mu(A_i symmetric-difference B_i).
Rational distance(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b);
// The same sum with atoms matched through their coordinate tuples.
Rational distance_by_coords(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b);

struct Remark31 {
    bool applicable = false;
    std::string diagnostic;
    Rational lhs{}, rhs{};
    bool pass = false;
};
Remark31 remark31_check(const CylinderMeasure& mu, const WindowPartition& a, const WindowPartition& b, int k);

struct Translate {
    Atom atom;
    int k;  // the set T^k A_atom
};
struct AlphaTApprox {
    std::vector<Translate> pieces;
    std::optional<Clopen> F;
    Rational error{};
    bool within = false;
};
AlphaTApprox alpha_T_approx(const CylinderMeasure& mu, const Clopen& E, const WindowPartition& alpha,
                            const Rational& eps, int range = 32);

}  // namespace symerg
