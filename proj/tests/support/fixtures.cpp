#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef WHYD_FIXTURE_DIR
#error "WHYD_FIXTURE_DIR must name the fixtures directory"
#endif

namespace whyd::testing {

std::string fixture_path(std::string_view name) { return std::string(WHYD_FIXTURE_DIR) + "/" + std::string(name); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Program load_program(std::string_view name) {
    std::string path = fixture_path(name);
    return parse_program(read_file(path), path);
}

ParsedInstance load_instance(std::string_view name) {
    std::string path = fixture_path(name);
    return parse_instance(read_file(path), path);
}

ConstraintSet load_constraints(std::string_view name) {
    std::string path = fixture_path(name);
    return parse_constraints(read_file(path), path);
}

GroundAtom atom(std::string_view text) { return parse_ground_atom(text); }

AtomSet atoms(std::initializer_list<std::string_view> texts) {
    AtomSet out;
    for (std::string_view t : texts) out.insert(atom(t));
    return out;
}

GroundAtom labelled(const Instance& d, std::string_view label) {
    auto found = d.find_label(label);
    if (!found) throw std::runtime_error("no tuple labelled " + std::string(label));
    return *found;
}

AtomSet labelled(const Instance& d, std::initializer_list<std::string_view> labels) {
    AtomSet out;
    for (std::string_view l : labels) out.insert(labelled(d, l));
    return out;
}

}  // namespace whyd::testing
