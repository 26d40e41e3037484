#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include "whyd/constraints.hpp"
#include "whyd/frontend.hpp"
#include "whyd/model.hpp"
#include "whyd/sets.hpp"

namespace whyd::testing {

std::string fixture_path(std::string_view name);
std::string read_file(const std::string& path);
Program load_program(std::string_view name);
ParsedInstance load_instance(std::string_view name);
ConstraintSet load_constraints(std::string_view name);

GroundAtom atom(std::string_view text);
AtomSet atoms(std::initializer_list<std::string_view> texts);
/// Tuple of the instance carrying the label; throws when absent.
GroundAtom labelled(const Instance& d, std::string_view label);
AtomSet labelled(const Instance& d, std::initializer_list<std::string_view> labels);

}  // namespace whyd::testing
