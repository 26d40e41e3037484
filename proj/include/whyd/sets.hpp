#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "whyd/model.hpp"

namespace whyd {

using AtomSet = std::set<GroundAtom>;
using AtomFamily = std::set<AtomSet>;

/// Sorted, duplicate-free list of element indices.
using IndexSet = std::vector<std::uint32_t>;

bool is_subset(const IndexSet& a, const IndexSet& b);
bool intersects(const IndexSet& a, const IndexSet& b);

/// Keeps only the inclusion-minimal members, without duplicates, sorted.
std::vector<IndexSet> minimize(std::vector<IndexSet> family);

/// All inclusion-minimal sets hitting every member of the family.
/// An empty family has the single transversal {}; a family containing {} has none.
std::vector<IndexSet> minimal_transversals(const std::vector<IndexSet>& family);

AtomFamily minimal_transversals(const AtomFamily& family);
AtomFamily minimize(const AtomFamily& family);

/// Members of the family with the fewest elements.
AtomFamily minimum_members(const AtomFamily& family);

bool is_subset(const AtomSet& a, const AtomSet& b);

/// Translates between atom sets and index sets over a fixed universe.
class Universe {
public:
    Universe() = default;
    explicit Universe(std::vector<GroundAtom> atoms);

    std::size_t size() const { return atoms_.size(); }
    const GroundAtom& at(std::uint32_t i) const { return atoms_[i]; }
    const std::vector<GroundAtom>& atoms() const { return atoms_; }
    /// Index of an atom, or size() when absent.
    std::uint32_t index(const GroundAtom& atom) const;

    IndexSet encode(const AtomSet& set) const;
    AtomSet decode(const IndexSet& set) const;

private:
    std::vector<GroundAtom> atoms_;
};

}  // namespace whyd
