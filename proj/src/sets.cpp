#include "whyd/sets.hpp"

#include <algorithm>

namespace whyd {

bool is_subset(const IndexSet& a, const IndexSet& b) {
    return a.size() <= b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const IndexSet& a, const IndexSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i; else ++j;
    }
    return false;
}

std::vector<IndexSet> minimize(std::vector<IndexSet> family) {
    std::sort(family.begin(), family.end(), [](const IndexSet& a, const IndexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    family.erase(std::unique(family.begin(), family.end()), family.end());
    std::vector<IndexSet> out;
    for (IndexSet& s : family) {
        bool dominated = std::any_of(out.begin(), out.end(),
                                     [&](const IndexSet& m) { return is_subset(m, s); });
        if (!dominated) out.push_back(std::move(s));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<IndexSet> minimal_transversals(const std::vector<IndexSet>& family) {
    std::vector<IndexSet> edges = minimize(family);
    std::sort(edges.begin(), edges.end(),
              [](const IndexSet& a, const IndexSet& b) { return a.size() < b.size(); });

    std::vector<IndexSet> current{IndexSet{}};
    for (const IndexSet& edge : edges) {
        if (edge.empty()) return {};
        std::vector<IndexSet> hitting;
        std::vector<IndexSet> missing;
        for (IndexSet& t : current) (intersects(t, edge) ? hitting : missing).push_back(std::move(t));

        std::vector<IndexSet> next = hitting;
        for (const IndexSet& t : missing) {
            for (std::uint32_t e : edge) {
                IndexSet grown = t;
                grown.insert(std::upper_bound(grown.begin(), grown.end(), e), e);
                bool dominated = std::any_of(hitting.begin(), hitting.end(),
                                             [&](const IndexSet& h) { return is_subset(h, grown); });
                if (!dominated) next.push_back(std::move(grown));
            }
        }
        current = minimize(std::move(next));
    }
    return current;
}

Universe::Universe(std::vector<GroundAtom> atoms) : atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

std::uint32_t Universe::index(const GroundAtom& atom) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), atom);
    if (it == atoms_.end() || !(*it == atom)) return static_cast<std::uint32_t>(atoms_.size());
    return static_cast<std::uint32_t>(it - atoms_.begin());
}

IndexSet Universe::encode(const AtomSet& set) const {
    IndexSet out;
    for (const GroundAtom& a : set) {
        std::uint32_t i = index(a);
        if (i < atoms_.size()) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

AtomSet Universe::decode(const IndexSet& set) const {
    AtomSet out;
    for (std::uint32_t i : set) out.insert(atoms_[i]);
    return out;
}

namespace {

Universe universe_of(const AtomFamily& family) {
    std::vector<GroundAtom> all;
    for (const AtomSet& s : family) all.insert(all.end(), s.begin(), s.end());
    return Universe(std::move(all));
}

}  // namespace

AtomFamily minimal_transversals(const AtomFamily& family) {
    Universe u = universe_of(family);
    std::vector<IndexSet> encoded;
    for (const AtomSet& s : family) encoded.push_back(u.encode(s));
    AtomFamily out;
    for (const IndexSet& t : minimal_transversals(encoded)) out.insert(u.decode(t));
    return out;
}

AtomFamily minimize(const AtomFamily& family) {
    Universe u = universe_of(family);
    std::vector<IndexSet> encoded;
    for (const AtomSet& s : family) encoded.push_back(u.encode(s));
    AtomFamily out;
    for (const IndexSet& t : minimize(std::move(encoded))) out.insert(u.decode(t));
    return out;
}

AtomFamily minimum_members(const AtomFamily& family) {
    if (family.empty()) return {};
    std::size_t best = family.begin()->size();
    for (const AtomSet& s : family) best = std::min(best, s.size());
    AtomFamily out;
    for (const AtomSet& s : family)
        if (s.size() == best) out.insert(s);
    return out;
}

bool is_subset(const AtomSet& a, const AtomSet& b) {
    return a.size() <= b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace whyd
