#include "whyd/evaluator.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

#include "whyd/error.hpp"

namespace whyd {

// ---------------------------------------------------------------------------
// MinimalModel / Provenance

bool MinimalModel::contains(const GroundAtom& atom) const { return rounds_.contains(atom); }

std::optional<std::size_t> MinimalModel::round(const GroundAtom& atom) const {
    if (auto it = rounds_.find(atom); it != rounds_.end()) return it->second;
    return std::nullopt;
}

std::set<GroundAtom> MinimalModel::extension(const Predicate& predicate) const {
    if (auto it = relations_.find(predicate); it != relations_.end()) return it->second;
    return {};
}

std::set<GroundAtom> MinimalModel::atoms() const {
    std::set<GroundAtom> out;
    for (const auto& [atom, round] : rounds_) out.insert(atom);
    return out;
}

std::optional<std::uint32_t> Provenance::id(const GroundAtom& atom) const {
    for (std::uint32_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == atom) return i;
    return std::nullopt;
}

std::set<GroundAtom> Provenance::support(const std::vector<GroundAtom>& goals) const {
    std::vector<std::vector<std::uint32_t>> by_head(atoms.size());
    for (std::uint32_t d = 0; d < derivations.size(); ++d) by_head[derivations[d].head].push_back(d);

    std::unordered_map<GroundAtom, std::uint32_t, GroundAtomHash> ids;
    for (std::uint32_t i = 0; i < atoms.size(); ++i) ids.emplace(atoms[i], i);

    std::vector<bool> seen(atoms.size(), false);
    std::vector<std::uint32_t> stack;
    for (const GroundAtom& g : goals)
        if (auto it = ids.find(g); it != ids.end() && !seen[it->second]) {
            seen[it->second] = true;
            stack.push_back(it->second);
        }
    while (!stack.empty()) {
        std::uint32_t a = stack.back();
        stack.pop_back();
        for (std::uint32_t d : by_head[a])
            for (std::uint32_t b : derivations[d].body)
                if (!seen[b]) {
                    seen[b] = true;
                    stack.push_back(b);
                }
    }
    std::set<GroundAtom> out;
    for (std::uint32_t i = 0; i < atoms.size(); ++i)
        if (seen[i]) out.insert(atoms[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

enum class SlotKind { Const, Check, Bind };

struct Slot {
    SlotKind kind = SlotKind::Const;
    Symbol value;            // Const
    std::uint32_t var = 0;   // Check / Bind
};

struct CompiledBuiltin {
    Builtin::Op op = Builtin::Op::Eq;
    Slot lhs;
    Slot rhs;
};

struct CompiledAtom {
    std::uint32_t relation = 0;
    std::vector<Slot> slots;
    /// Positions known before this atom is matched (constants, earlier variables).
    std::vector<std::uint32_t> key_positions;
    std::uint32_t index_slot = 0;   // into Relation::indexes; unused when key_positions is empty
    std::vector<CompiledBuiltin> checks_after;
};

struct CompiledRule {
    std::uint32_t head_relation = 0;
    std::vector<Slot> head;
    std::vector<CompiledAtom> atoms;
    std::vector<CompiledBuiltin> ground_checks;
    std::uint32_t variables = 0;
};

struct RelationSpec {
    Predicate predicate;
    std::vector<std::vector<std::uint32_t>> index_keys;
};

}  // namespace

struct Evaluator::Compiled {
    Program program;
    std::vector<RelationSpec> relations;
    std::map<Predicate, std::uint32_t> relation_ids;
    std::vector<CompiledRule> rules;
    std::uint32_t answer_relation = 0;

    std::uint32_t relation_id(const Predicate& p) {
        auto [it, inserted] = relation_ids.emplace(p, static_cast<std::uint32_t>(relations.size()));
        if (inserted) relations.push_back(RelationSpec{p, {}});
        return it->second;
    }

    std::uint32_t index_slot(std::uint32_t relation, const std::vector<std::uint32_t>& key) {
        auto& keys = relations[relation].index_keys;
        auto it = std::find(keys.begin(), keys.end(), key);
        if (it != keys.end()) return static_cast<std::uint32_t>(it - keys.begin());
        keys.push_back(key);
        return static_cast<std::uint32_t>(keys.size() - 1);
    }
};

namespace {

struct VarTable {
    std::map<Variable, std::uint32_t> ids;
    std::uint32_t id(const Variable& v) {
        auto [it, inserted] = ids.emplace(v, static_cast<std::uint32_t>(ids.size()));
        return it->second;
    }
};

Slot slot_for(const Term& t, VarTable& vars, SlotKind var_kind) {
    Slot s;
    if (t.is_constant()) {
        s.kind = SlotKind::Const;
        s.value = t.constant().symbol();
    } else {
        s.kind = var_kind;
        s.var = vars.id(t.variable());
    }
    return s;
}

CompiledRule compile_rule(const Rule& rule, Evaluator::Compiled& c) {
    CompiledRule out;
    VarTable vars;
    std::set<Variable> bound;
    std::map<Variable, int> bound_at;   // atom index after which the variable is bound

    std::vector<const Atom*> atoms = rule.body_atoms();
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const Atom& a = *atoms[j];
        CompiledAtom ca;
        ca.relation = c.relation_id(a.predicate);
        std::set<Variable> local;
        for (std::uint32_t pos = 0; pos < a.args.size(); ++pos) {
            const Term& t = a.args[pos];
            if (t.is_constant()) {
                ca.slots.push_back(slot_for(t, vars, SlotKind::Const));
                ca.key_positions.push_back(pos);
            } else if (bound.contains(t.variable())) {
                ca.slots.push_back(slot_for(t, vars, SlotKind::Check));
                ca.key_positions.push_back(pos);
            } else if (local.contains(t.variable())) {
                ca.slots.push_back(slot_for(t, vars, SlotKind::Check));
            } else {
                ca.slots.push_back(slot_for(t, vars, SlotKind::Bind));
                local.insert(t.variable());
            }
        }
        for (const Variable& v : local) {
            bound.insert(v);
            bound_at.emplace(v, static_cast<int>(j));
        }
        if (!ca.key_positions.empty()) ca.index_slot = c.index_slot(ca.relation, ca.key_positions);
        out.atoms.push_back(std::move(ca));
    }

    for (const Literal& lit : rule.body) {
        const auto* b = std::get_if<Builtin>(&lit);
        if (!b) continue;
        CompiledBuiltin cb;
        cb.op = b->op;
        cb.lhs = slot_for(b->lhs, vars, SlotKind::Check);
        cb.rhs = slot_for(b->rhs, vars, SlotKind::Check);
        int at = -1;
        for (const Term* t : {&b->lhs, &b->rhs})
            if (t->is_variable()) at = std::max(at, bound_at.at(t->variable()));
        if (at < 0) out.ground_checks.push_back(cb);
        else out.atoms[static_cast<std::size_t>(at)].checks_after.push_back(cb);
    }

    out.head_relation = c.relation_id(rule.head.predicate);
    for (const Term& t : rule.head.args) out.head.push_back(slot_for(t, vars, SlotKind::Check));
    out.variables = static_cast<std::uint32_t>(vars.ids.size());
    return out;
}

}  // namespace

Evaluator::Evaluator(const Program& program) {
    auto c = std::make_shared<Compiled>();
    c->program = program;
    for (const Predicate& p : program.predicates()) c->relation_id(p);
    for (const Rule& r : program.rules()) c->rules.push_back(compile_rule(r, *c));
    c->answer_relation = c->relation_id(program.answer());
    compiled_ = std::move(c);
}

Evaluator::~Evaluator() = default;
Evaluator::Evaluator(const Evaluator&) = default;
Evaluator& Evaluator::operator=(const Evaluator&) = default;

const Program& Evaluator::program() const { return compiled_->program; }

// ---------------------------------------------------------------------------
// Runtime

namespace {

std::size_t mix(std::size_t h, Symbol s) {
    return (h ^ s.hash()) * 0x100000001b3ull + 0x9e3779b97f4a7c15ull;
}

struct Relation;

struct RowHash {
    const Relation* rel;
    std::size_t operator()(std::uint32_t row) const;
};
struct RowEq {
    const Relation* rel;
    bool operator()(std::uint32_t a, std::uint32_t b) const;
};

struct Index {
    std::vector<std::uint32_t> positions;
    std::unordered_map<std::size_t, std::vector<std::uint32_t>> buckets;
    std::uint32_t built = 0;
};

struct Relation {
    Predicate predicate;
    std::uint32_t arity = 0;
    std::vector<Symbol> cells;
    std::uint32_t rows = 0;
    std::vector<std::uint32_t> round;
    std::vector<std::uint32_t> gid;
    std::unordered_set<std::uint32_t, RowHash, RowEq> dedup;
    std::vector<Index> indexes;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;

    explicit Relation(const RelationSpec& spec)
        : predicate(spec.predicate), arity(spec.predicate.arity),
          dedup(16, RowHash{this}, RowEq{this}) {
        for (const auto& key : spec.index_keys) indexes.push_back(Index{key, {}, 0});
    }
    Relation(const Relation&) = delete;
    Relation& operator=(const Relation&) = delete;

    const Symbol* row(std::uint32_t r) const { return cells.data() + static_cast<std::size_t>(r) * arity; }

    /// Appends the tuple unless present; returns (row, inserted).
    std::pair<std::uint32_t, bool> insert(const Symbol* tuple) {
        cells.insert(cells.end(), tuple, tuple + arity);
        auto [it, inserted] = dedup.insert(rows);
        if (!inserted) {
            cells.resize(cells.size() - arity);
            return {*it, false};
        }
        return {rows++, true};
    }

    std::optional<std::uint32_t> find(const Symbol* tuple) {
        cells.insert(cells.end(), tuple, tuple + arity);
        auto it = dedup.find(rows);
        cells.resize(cells.size() - arity);
        if (it == dedup.end()) return std::nullopt;
        return *it;
    }

    void catch_up_indexes() {
        for (Index& idx : indexes) {
            for (; idx.built < rows; ++idx.built) {
                const Symbol* r = row(idx.built);
                std::size_t h = 0;
                for (std::uint32_t p : idx.positions) h = mix(h, r[p]);
                idx.buckets[h].push_back(idx.built);
            }
        }
    }
};

std::size_t RowHash::operator()(std::uint32_t row) const {
    const Symbol* r = rel->row(row);
    std::size_t h = 0;
    for (std::uint32_t i = 0; i < rel->arity; ++i) h = mix(h, r[i]);
    return h;
}

bool RowEq::operator()(std::uint32_t a, std::uint32_t b) const {
    const Symbol* ra = rel->row(a);
    const Symbol* rb = rel->row(b);
    return std::equal(ra, ra + rel->arity, rb);
}

struct Goal {
    std::uint32_t relation;
    std::vector<Symbol> tuple;
};

class Run {
public:
    Run(const Evaluator::Compiled& c, bool track_provenance)
        : c_(c), track_provenance_(track_provenance) {
        for (const RelationSpec& spec : c.relations) relations_.emplace_back(spec);
    }

    void seed(const std::vector<const GroundAtom*>& facts) {
        std::vector<Symbol> tuple;
        for (const GroundAtom* a : facts) {
            tuple.clear();
            for (const Constant& k : a->args) tuple.push_back(k.symbol());
            add(relation_for(a->predicate), tuple.data(), 0);
        }
        std::vector<Symbol> env;
        for (std::size_t ri = 0; ri < c_.rules.size(); ++ri) {
            const CompiledRule& rule = c_.rules[ri];
            if (!rule.atoms.empty() || !ground_checks_hold(rule)) continue;
            env.assign(rule.variables, Symbol());
            emit(ri, rule, env, {}, 0);
        }
    }

    /// Runs to the fixpoint, or until every goal is present when goals are given.
    void saturate(const std::vector<Goal>* goals) {
        if (goals && all_present(*goals)) return;
        std::vector<Symbol> env;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> matched;
        for (std::uint32_t iteration = 1;; ++iteration) {
            bool any_delta = false;
            for (Relation& r : relations_) {
                r.lo = r.hi;
                r.hi = r.rows;
                if (r.hi > r.lo) any_delta = true;
                r.catch_up_indexes();
            }
            if (!any_delta) return;
            iteration_ = iteration;
            for (std::size_t ri = 0; ri < c_.rules.size(); ++ri) {
                const CompiledRule& rule = c_.rules[ri];
                if (rule.atoms.empty() || !ground_checks_hold(rule)) continue;
                for (std::size_t d = 0; d < rule.atoms.size(); ++d) {
                    const Relation& dr = relations_[rule.atoms[d].relation];
                    if (dr.hi == dr.lo) continue;
                    env.assign(rule.variables, Symbol());
                    matched.assign(rule.atoms.size(), {0, 0});
                    join(ri, rule, d, 0, env, matched);
                }
            }
            if (goals && all_present(*goals)) return;
        }
    }

    std::optional<Goal> goal_for(const GroundAtom& atom) {
        Goal g{relation_for(atom.predicate), {}};
        for (const Constant& k : atom.args) g.tuple.push_back(k.symbol());
        return g;
    }

    bool all_present(const std::vector<Goal>& goals) {
        return std::all_of(goals.begin(), goals.end(), [&](const Goal& g) {
            return relations_[g.relation].find(g.tuple.data()).has_value();
        });
    }

    GroundAtom atom_at(const Relation& r, std::uint32_t row) const {
        std::vector<Constant> args;
        args.reserve(r.arity);
        const Symbol* cells = r.row(row);
        for (std::uint32_t i = 0; i < r.arity; ++i) args.emplace_back(cells[i]);
        return GroundAtom(r.predicate, std::move(args));
    }

    const std::deque<Relation>& relations() const { return relations_; }
    const std::vector<Derivation>& derivations() const { return derivations_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& gids() const { return gids_; }

private:
    std::uint32_t relation_for(const Predicate& p) {
        if (auto it = c_.relation_ids.find(p); it != c_.relation_ids.end()) return it->second;
        auto [it, inserted] =
            extra_ids_.emplace(p, static_cast<std::uint32_t>(relations_.size()));
        if (inserted) relations_.emplace_back(RelationSpec{p, {}});
        return it->second;
    }

    std::pair<std::uint32_t, bool> add(std::uint32_t rel, const Symbol* tuple, std::uint32_t round) {
        Relation& r = relations_[rel];
        auto result = r.insert(tuple);
        if (result.second) {
            r.round.push_back(round);
            if (track_provenance_) {
                r.gid.push_back(static_cast<std::uint32_t>(gids_.size()));
                gids_.emplace_back(rel, result.first);
            }
        }
        return result;
    }

    static Symbol value(const Slot& s, const std::vector<Symbol>& env) {
        return s.kind == SlotKind::Const ? s.value : env[s.var];
    }

    static bool check(const CompiledBuiltin& b, const std::vector<Symbol>& env) {
        bool eq = value(b.lhs, env) == value(b.rhs, env);
        return b.op == Builtin::Op::Eq ? eq : !eq;
    }

    static bool ground_checks_hold(const CompiledRule& rule) {
        static const std::vector<Symbol> none;
        return std::all_of(rule.ground_checks.begin(), rule.ground_checks.end(),
                           [](const CompiledBuiltin& b) { return check(b, none); });
    }

    void emit(std::size_t ri, const CompiledRule& rule, const std::vector<Symbol>& env,
              const std::vector<std::pair<std::uint32_t, std::uint32_t>>& matched,
              std::uint32_t round) {
        head_.clear();
        for (const Slot& s : rule.head) head_.push_back(value(s, env));
        auto [row, inserted] = add(rule.head_relation, head_.data(), round);
        if (!track_provenance_) return;
        Derivation d;
        d.rule = ri;
        d.head = relations_[rule.head_relation].gid[row];
        for (const auto& [rel, r] : matched) d.body.push_back(relations_[rel].gid[r]);
        derivations_.push_back(std::move(d));
    }

    bool match_row(const CompiledAtom& atom, const Symbol* cells, std::vector<Symbol>& env) const {
        for (std::size_t p = 0; p < atom.slots.size(); ++p) {
            const Slot& s = atom.slots[p];
            switch (s.kind) {
                case SlotKind::Const:
                    if (!(cells[p] == s.value)) return false;
                    break;
                case SlotKind::Check:
                    if (!(cells[p] == env[s.var])) return false;
                    break;
                case SlotKind::Bind:
                    env[s.var] = cells[p];
                    break;
            }
        }
        return std::all_of(atom.checks_after.begin(), atom.checks_after.end(),
                           [&](const CompiledBuiltin& b) { return check(b, env); });
    }

    void join(std::size_t ri, const CompiledRule& rule, std::size_t delta, std::size_t j,
              std::vector<Symbol>& env, std::vector<std::pair<std::uint32_t, std::uint32_t>>& matched) {
        if (j == rule.atoms.size()) {
            emit(ri, rule, env, matched, iteration_);
            return;
        }
        const CompiledAtom& atom = rule.atoms[j];
        Relation& rel = relations_[atom.relation];
        std::uint32_t begin = 0;
        std::uint32_t end = rel.hi;
        if (j < delta) end = rel.lo;
        else if (j == delta) begin = rel.lo;
        if (begin >= end) return;

        auto visit = [&](std::uint32_t row) {
            if (match_row(atom, rel.row(row), env)) {
                matched[j] = {atom.relation, row};
                join(ri, rule, delta, j + 1, env, matched);
            }
        };

        if (atom.key_positions.empty()) {
            for (std::uint32_t row = begin; row < end; ++row) visit(row);
            return;
        }
        std::size_t h = 0;
        for (std::uint32_t p : atom.key_positions) h = mix(h, value(atom.slots[p], env));
        const Index& idx = rel.indexes[atom.index_slot];
        auto it = idx.buckets.find(h);
        if (it == idx.buckets.end()) return;
        const std::vector<std::uint32_t>& rows = it->second;
        for (auto r = std::lower_bound(rows.begin(), rows.end(), begin); r != rows.end() && *r < end; ++r)
            visit(*r);
    }

    const Evaluator::Compiled& c_;
    bool track_provenance_;
    std::deque<Relation> relations_;
    std::map<Predicate, std::uint32_t> extra_ids_;
    std::vector<Derivation> derivations_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> gids_;
    std::vector<Symbol> head_;
    std::uint32_t iteration_ = 0;
};

std::vector<const GroundAtom*> pointers(const std::vector<GroundAtom>& facts) {
    std::vector<const GroundAtom*> out;
    out.reserve(facts.size());
    for (const GroundAtom& a : facts) out.push_back(&a);
    return out;
}

}  // namespace

MinimalModel Evaluator::model(const std::vector<GroundAtom>& facts) const {
    Run run(*compiled_, false);
    run.seed(pointers(facts));
    run.saturate(nullptr);
    MinimalModel m;
    for (const Relation& r : run.relations()) {
        auto& ext = m.relations_[r.predicate];
        for (std::uint32_t row = 0; row < r.rows; ++row) {
            GroundAtom a = run.atom_at(r, row);
            ext.insert(a);
            m.rounds_.emplace(std::move(a), r.round[row]);
        }
    }
    return m;
}

bool Evaluator::entails(const std::vector<const GroundAtom*>& facts,
                        const std::vector<GroundAtom>& goals) const {
    Run run(*compiled_, false);
    run.seed(facts);
    std::vector<Goal> resolved;
    for (const GroundAtom& g : goals) resolved.push_back(*run.goal_for(g));
    run.saturate(&resolved);
    return run.all_present(resolved);
}

bool Evaluator::entails(const std::vector<GroundAtom>& facts, const std::vector<GroundAtom>& goals) const {
    return entails(pointers(facts), goals);
}

std::set<GroundAtom> Evaluator::answers(const std::vector<const GroundAtom*>& facts) const {
    Run run(*compiled_, false);
    run.seed(facts);
    run.saturate(nullptr);
    const Relation& r = run.relations()[compiled_->answer_relation];
    std::set<GroundAtom> out;
    for (std::uint32_t row = 0; row < r.rows; ++row) out.insert(run.atom_at(r, row));
    return out;
}

std::set<GroundAtom> Evaluator::answers(const std::vector<GroundAtom>& facts) const {
    return answers(pointers(facts));
}

Provenance Evaluator::provenance(const std::vector<GroundAtom>& facts) const {
    Run run(*compiled_, true);
    run.seed(pointers(facts));
    run.saturate(nullptr);
    Provenance p;
    p.atoms.reserve(run.gids().size());
    for (const auto& [rel, row] : run.gids()) p.atoms.push_back(run.atom_at(run.relations()[rel], row));
    p.derivations = run.derivations();
    return p;
}

MinimalModel evaluate_fixpoint(const Program& program, const Instance& instance) {
    return Evaluator(program).model(instance.atoms());
}

bool holds(const Program& program, const Instance& instance, const GroundAtom& atom) {
    if (!program.predicates().contains(atom.predicate))
        fail(ErrorKind::UnknownPredicate, to_string(atom.predicate) + " does not occur in the program");
    return Evaluator(program).entails(instance.atoms(), {atom});
}

std::set<GroundAtom> answers(const Program& program, const Instance& instance) {
    return Evaluator(program).answers(instance.atoms());
}

}  // namespace whyd
