#include "whyd/model.hpp"

#include <algorithm>
#include <functional>

#include "whyd/error.hpp"

namespace whyd {

// ---------------------------------------------------------------------------
// Atoms and rules

bool Atom::is_ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_constant(); });
}

std::vector<Variable> Atom::variables() const {
    std::vector<Variable> out;
    for (const Term& t : args) {
        if (t.is_variable() && std::find(out.begin(), out.end(), t.variable()) == out.end())
            out.push_back(t.variable());
    }
    return out;
}

GroundAtom::GroundAtom(std::string_view name, std::initializer_list<std::string_view> constants) {
    predicate = Predicate{Symbol::intern(name), static_cast<std::uint32_t>(constants.size())};
    args.reserve(constants.size());
    for (std::string_view c : constants) args.emplace_back(c);
}

Atom GroundAtom::to_atom() const {
    Atom a{predicate, {}};
    a.args.reserve(args.size());
    for (const Constant& c : args) a.args.emplace_back(c);
    return a;
}

std::vector<const Atom*> Rule::body_atoms() const {
    std::vector<const Atom*> out;
    for (const Literal& lit : body)
        if (const auto* a = std::get_if<Atom>(&lit)) out.push_back(a);
    return out;
}

bool Rule::has_builtins() const {
    return std::any_of(body.begin(), body.end(),
                       [](const Literal& l) { return std::holds_alternative<Builtin>(l); });
}

// ---------------------------------------------------------------------------
// Program

Program::Program(std::vector<Rule> rules, Predicate answer, std::set<Symbol> declared_extensional)
    : rules_(std::move(rules)), answer_(answer),
      declared_extensional_(std::move(declared_extensional)) {}

std::set<Predicate> Program::intensional() const {
    std::set<Predicate> out;
    for (const Rule& r : rules_) out.insert(r.head.predicate);
    return out;
}

std::set<Predicate> Program::predicates() const {
    std::set<Predicate> out;
    for (const Rule& r : rules_) {
        out.insert(r.head.predicate);
        for (const Atom* a : r.body_atoms()) out.insert(a->predicate);
    }
    out.insert(answer_);
    return out;
}

std::set<Predicate> Program::extensional() const {
    std::set<Predicate> idb = intensional();
    std::set<Predicate> out;
    for (const Predicate& p : predicates())
        if (!idb.contains(p) && !(p == answer_)) out.insert(p);
    return out;
}

bool Program::is_conjunctive() const {
    if (rules_.size() != 1) return false;
    const Rule& r = rules_.front();
    if (!(r.head.predicate == answer_)) return false;
    for (const Atom* a : r.body_atoms())
        if (a->predicate == answer_) return false;
    return true;
}

bool Program::is_recursive() const {
    std::set<Predicate> idb = intensional();
    std::map<Predicate, std::set<Predicate>> deps;
    for (const Rule& r : rules_)
        for (const Atom* a : r.body_atoms())
            if (idb.contains(a->predicate)) deps[r.head.predicate].insert(a->predicate);

    // Cycle detection by colouring.
    std::map<Predicate, int> colour;
    std::function<bool(const Predicate&)> visit = [&](const Predicate& p) {
        colour[p] = 1;
        for (const Predicate& q : deps[p]) {
            if (colour[q] == 1) return true;
            if (colour[q] == 0 && visit(q)) return true;
        }
        colour[p] = 2;
        return false;
    };
    for (const Predicate& p : idb)
        if (colour[p] == 0 && visit(p)) return true;
    return false;
}

Program Program::with_rule(Rule rule) const {
    Program out = *this;
    out.rules_.push_back(std::move(rule));
    return out;
}

Program Program::with_answer(Predicate answer) const {
    Program out = *this;
    out.answer_ = answer;
    return out;
}

void validate_program(const Program& program) {
    std::map<Symbol, std::uint32_t> arities;
    auto check_arity = [&](const Atom& a) {
        if (a.args.size() != a.predicate.arity)
            fail(ErrorKind::ArityMismatch, to_string(a) + " does not match arity " +
                                               std::to_string(a.predicate.arity));
        auto [it, inserted] = arities.emplace(a.predicate.name, a.predicate.arity);
        if (!inserted && it->second != a.predicate.arity)
            fail(ErrorKind::ArityMismatch, "predicate " + a.predicate.name.str() +
                                               " used with arities " + std::to_string(it->second) +
                                               " and " + std::to_string(a.predicate.arity));
    };

    for (const Rule& r : program.rules()) {
        check_arity(r.head);
        if (program.declared_extensional().contains(r.head.predicate.name))
            fail(ErrorKind::HeadExtensional, r.head.predicate.name.str() + " in " + to_string(r));

        std::set<Variable> bound;
        bool has_atom = false;
        for (const Literal& lit : r.body) {
            if (const auto* a = std::get_if<Atom>(&lit)) {
                check_arity(*a);
                has_atom = true;
                for (const Variable& v : a->variables()) bound.insert(v);
            }
        }
        if (!has_atom && !r.head.is_ground())
            fail(ErrorKind::UnsafeRule, to_string(r) + ": nonground head needs a body atom");
        for (const Variable& v : r.head.variables())
            if (!bound.contains(v))
                fail(ErrorKind::UnsafeRule, to_string(r) + ": variable " + v.str() + " unbound");
        for (const Literal& lit : r.body) {
            if (const auto* b = std::get_if<Builtin>(&lit)) {
                for (const Term* t : {&b->lhs, &b->rhs})
                    if (t->is_variable() && !bound.contains(t->variable()))
                        fail(ErrorKind::UnsafeRule,
                             to_string(r) + ": variable " + t->variable().str() + " unbound");
            }
        }
    }

    const Predicate& ans = program.answer();
    if (program.declared_extensional().contains(ans.name))
        fail(ErrorKind::HeadExtensional, "answer predicate " + to_string(ans) + " declared extensional");
    if (auto it = arities.find(ans.name); it != arities.end() && it->second != ans.arity)
        fail(ErrorKind::ArityMismatch, "answer predicate " + to_string(ans) + " used with arity " +
                                           std::to_string(it->second));
}

// ---------------------------------------------------------------------------
// Instance

void Instance::add_endogenous(const GroundAtom& atom) {
    if (exogenous_.contains(atom))
        fail(ErrorKind::DuplicateFactAcrossPartitions, to_string(atom));
    endogenous_.insert(atom);
}

void Instance::add_exogenous(const GroundAtom& atom) {
    if (endogenous_.contains(atom))
        fail(ErrorKind::DuplicateFactAcrossPartitions, to_string(atom));
    exogenous_.insert(atom);
}

void Instance::set_label(const GroundAtom& atom, const std::string& label) {
    for (const auto& [a, l] : labels_)
        if (l == label && !(a == atom))
            fail(ErrorKind::DuplicateLabel, label + " names both " + to_string(a) + " and " +
                                                to_string(atom));
    labels_[atom] = label;
}

std::vector<GroundAtom> Instance::atoms() const {
    std::vector<GroundAtom> out;
    out.reserve(size());
    std::merge(endogenous_.begin(), endogenous_.end(), exogenous_.begin(), exogenous_.end(),
               std::back_inserter(out));
    return out;
}

bool Instance::contains(const GroundAtom& atom) const {
    return endogenous_.contains(atom) || exogenous_.contains(atom);
}

std::optional<std::string> Instance::label(const GroundAtom& atom) const {
    if (auto it = labels_.find(atom); it != labels_.end()) return it->second;
    return std::nullopt;
}

std::optional<GroundAtom> Instance::find_label(std::string_view label) const {
    for (const auto& [a, l] : labels_)
        if (l == label) return a;
    return std::nullopt;
}

Instance Instance::all_endogenous() const {
    Instance out;
    for (const GroundAtom& a : atoms()) out.endogenous_.insert(a);
    out.labels_ = labels_;
    return out;
}

void Instance::erase(const GroundAtom& atom) {
    endogenous_.erase(atom);
    exogenous_.erase(atom);
    labels_.erase(atom);
}

std::set<Constant> active_domain(const Instance& instance) {
    std::set<Constant> out;
    for (const auto* part : {&instance.endogenous(), &instance.exogenous()})
        for (const GroundAtom& a : *part) out.insert(a.args.begin(), a.args.end());
    return out;
}

// ---------------------------------------------------------------------------
// Text

namespace {

bool plain_constant(const std::string& s) {
    if (s.empty()) return false;
    unsigned char first = static_cast<unsigned char>(s[0]);
    if (!(std::islower(first) || std::isdigit(first))) return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

}  // namespace

std::string to_string(const Constant& c) {
    const std::string& s = c.str();
    if (plain_constant(s)) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
    return out;
}

std::string to_string(const Term& t) {
    return t.is_constant() ? to_string(t.constant()) : t.variable().str();
}

namespace {

template <class Args>
std::string atom_text(const Predicate& p, const Args& args) {
    std::string out = p.name.str();
    if (args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i) out += ',';
        out += to_string(args[i]);
    }
    out += ')';
    return out;
}

}  // namespace

std::string to_string(const Atom& a) { return atom_text(a.predicate, a.args); }
std::string to_string(const GroundAtom& a) { return atom_text(a.predicate, a.args); }

std::string to_string(const Builtin& b) {
    return to_string(b.lhs) + (b.op == Builtin::Op::Eq ? " = " : " != ") + to_string(b.rhs);
}

std::string to_string(const Rule& r) {
    std::string out = to_string(r.head);
    if (r.body.empty()) return out + ".";
    out += " :- ";
    for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) out += ", ";
        std::visit([&](const auto& lit) { out += to_string(lit); }, r.body[i]);
    }
    return out + ".";
}

std::string to_string(const Predicate& p) { return p.name.str() + "/" + std::to_string(p.arity); }

std::size_t GroundAtomHash::operator()(const GroundAtom& a) const noexcept {
    std::size_t h = a.predicate.name.hash() * 31 + a.predicate.arity;
    for (const Constant& c : a.args) h = h * 1000003u ^ c.symbol().hash();
    return h;
}

}  // namespace whyd
