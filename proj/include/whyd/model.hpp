#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whyd/symbol.hpp"

namespace whyd {

/// A domain element. Unique names: distinct symbols are distinct elements.
class Constant {
public:
    Constant() = default;
    explicit Constant(Symbol symbol) : symbol_(symbol) {}
    explicit Constant(std::string_view text) : symbol_(Symbol::intern(text)) {}

    Symbol symbol() const { return symbol_; }
    const std::string& str() const { return symbol_.str(); }

    friend bool operator==(const Constant&, const Constant&) = default;
    friend auto operator<=>(const Constant&, const Constant&) = default;

private:
    Symbol symbol_;
};

class Variable {
public:
    Variable() = default;
    explicit Variable(Symbol symbol) : symbol_(symbol) {}
    explicit Variable(std::string_view text) : symbol_(Symbol::intern(text)) {}

    Symbol symbol() const { return symbol_; }
    const std::string& str() const { return symbol_.str(); }

    friend bool operator==(const Variable&, const Variable&) = default;
    friend auto operator<=>(const Variable&, const Variable&) = default;

private:
    Symbol symbol_;
};

class Term {
public:
    Term() = default;
    Term(Constant c) : value_(c) {}
    Term(Variable v) : value_(v) {}

    bool is_constant() const { return std::holds_alternative<Constant>(value_); }
    bool is_variable() const { return std::holds_alternative<Variable>(value_); }
    const Constant& constant() const { return std::get<Constant>(value_); }
    const Variable& variable() const { return std::get<Variable>(value_); }

    friend bool operator==(const Term&, const Term&) = default;
    friend auto operator<=>(const Term&, const Term&) = default;

private:
    std::variant<Constant, Variable> value_;
};

struct Predicate {
    Symbol name;
    std::uint32_t arity = 0;

    friend bool operator==(const Predicate&, const Predicate&) = default;
    friend auto operator<=>(const Predicate&, const Predicate&) = default;
};

struct Atom {
    Predicate predicate;
    std::vector<Term> args;

    bool is_ground() const;
    std::vector<Variable> variables() const;

    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A tuple. Identity is the atom itself; labels live in the Instance.
struct GroundAtom {
    Predicate predicate;
    std::vector<Constant> args;

    GroundAtom() = default;
    GroundAtom(Predicate p, std::vector<Constant> a) : predicate(p), args(std::move(a)) {}
    GroundAtom(std::string_view name, std::initializer_list<std::string_view> constants);

    Atom to_atom() const;

    friend bool operator==(const GroundAtom&, const GroundAtom&) = default;
    friend auto operator<=>(const GroundAtom&, const GroundAtom&) = default;
};

struct Builtin {
    enum class Op { Eq, Neq };
    Op op = Op::Eq;
    Term lhs;
    Term rhs;

    friend bool operator==(const Builtin&, const Builtin&) = default;
};

using Literal = std::variant<Atom, Builtin>;

struct Rule {
    Atom head;
    std::vector<Literal> body;

    std::vector<const Atom*> body_atoms() const;
    bool has_builtins() const;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Positive Datalog rules with a designated answer predicate.
class Program {
public:
    Program() = default;
    Program(std::vector<Rule> rules, Predicate answer, std::set<Symbol> declared_extensional = {});

    const std::vector<Rule>& rules() const { return rules_; }
    const Predicate& answer() const { return answer_; }
    const std::set<Symbol>& declared_extensional() const { return declared_extensional_; }

    std::set<Predicate> intensional() const;
    std::set<Predicate> extensional() const;
    std::set<Predicate> predicates() const;

    bool is_boolean() const { return answer_.arity == 0; }
    /// Exactly one rule, defining the answer predicate from extensional atoms.
    bool is_conjunctive() const;
    bool is_recursive() const;

    Program with_rule(Rule rule) const;
    Program with_answer(Predicate answer) const;

    friend bool operator==(const Program&, const Program&) = default;

private:
    std::vector<Rule> rules_;
    Predicate answer_;
    std::set<Symbol> declared_extensional_;
};

/// Finite set of tuples split into endogenous and exogenous parts.
class Instance {
public:
    Instance() = default;

    void add_endogenous(const GroundAtom& atom);
    void add_exogenous(const GroundAtom& atom);
    void set_label(const GroundAtom& atom, const std::string& label);

    const std::set<GroundAtom>& endogenous() const { return endogenous_; }
    const std::set<GroundAtom>& exogenous() const { return exogenous_; }
    const std::map<GroundAtom, std::string>& labels() const { return labels_; }

    std::vector<GroundAtom> atoms() const;
    std::size_t size() const { return endogenous_.size() + exogenous_.size(); }
    bool empty() const { return size() == 0; }
    bool contains(const GroundAtom& atom) const;
    bool is_endogenous(const GroundAtom& atom) const { return endogenous_.contains(atom); }

    std::optional<std::string> label(const GroundAtom& atom) const;
    std::optional<GroundAtom> find_label(std::string_view label) const;

    /// Copy without the given tuples; partition and labels of survivors kept.
    template <class Range>
    Instance without(const Range& removed) const {
        Instance out = *this;
        for (const GroundAtom& a : removed) out.erase(a);
        return out;
    }
    Instance all_endogenous() const;
    void erase(const GroundAtom& atom);

    friend bool operator==(const Instance&, const Instance&) = default;

private:
    std::set<GroundAtom> endogenous_;
    std::set<GroundAtom> exogenous_;
    std::map<GroundAtom, std::string> labels_;
};

void validate_program(const Program& program);
std::set<Constant> active_domain(const Instance& instance);

// Canonical text forms.
std::string to_string(const Constant& c);
std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const GroundAtom& a);
std::string to_string(const Builtin& b);
std::string to_string(const Rule& r);
std::string to_string(const Predicate& p);

struct GroundAtomHash {
    std::size_t operator()(const GroundAtom& a) const noexcept;
};

}  // namespace whyd
