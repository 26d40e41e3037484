#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "whyd/abduction.hpp"
#include "whyd/constraints.hpp"
#include "whyd/model.hpp"

namespace whyd {

struct SourceSpan {
    std::string file;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// Rules `head :- body.` and facts `head.`; directives `#answer name[/arity]`
/// and `#extensional p, q`. Without #answer the answer predicate is `ans` when
/// present, else the head of the first rule. The result is validated.
Program parse_program(std::string_view text, const std::string& file = "<program>");

struct ParsedInstance {
    Instance instance;
    std::vector<GroundAtom> observations;
};

/// Facts `[label:] atom.` with section directives #endogenous, #exogenous,
/// #observe and the predicate marker #exogenous-predicates p, q.
ParsedInstance parse_instance(std::string_view text, const std::string& file = "<instance>");

/// One constraint per statement: `body => atoms.`, `body => X = Y.`,
/// `body => false.`, plus `fd p/n: 1,2 -> 3.` and `key p/n: 1,2.`
ConstraintSet parse_constraints(std::string_view text, const std::string& file = "<constraints>");

/// A single ground atom such as `ans(john,xml)`.
GroundAtom parse_ground_atom(std::string_view text);

/// Lines `a <- b c`, sections `#hyp` and `#obs`.
PropositionalAbduction parse_phca(std::string_view text, const std::string& file = "<phca>");

std::string to_text(const Program& program);
std::string to_text(const Instance& instance, const std::vector<GroundAtom>& observations = {});
std::string to_text(const ConstraintSet& sigma);
std::string to_text(const PropositionalAbduction& p);

struct Report {
    std::string task;
    nlohmann::json payload;
    /// Input file name to hex SHA-256 of its contents.
    std::map<std::string, std::string> provenance;
};

/// Deterministic JSON: sorted keys, two-space indent, trailing newline.
std::string emit_report(const Report& report);

std::string sha256_hex(std::string_view data);

}  // namespace whyd
