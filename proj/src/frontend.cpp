#include "whyd/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "whyd/error.hpp"

namespace whyd {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok {
    Ident,      // constant or predicate name: starts lowercase or with a digit
    Var,        // starts uppercase or with '_'
    String,     // quoted constant
    LParen, RParen, Comma, Dot, Colon, Slash,
    Implies,    // :-
    Arrow,      // =>
    FdArrow,    // ->
    Eq, Neq,
    Directive,  // #name
    Disjunction,   // ; or |
    End,
};

std::string describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Var: return "variable";
        case Tok::String: return "string";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Dot: return "'.'";
        case Tok::Colon: return "':'";
        case Tok::Slash: return "'/'";
        case Tok::Implies: return "':-'";
        case Tok::Arrow: return "'=>'";
        case Tok::FdArrow: return "'->'";
        case Tok::Eq: return "'='";
        case Tok::Neq: return "'!='";
        case Tok::Directive: return "directive";
        case Tok::Disjunction: return "disjunction";
        case Tok::End: return "end of input";
    }
    return "token";
}

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

[[noreturn]] void syntax_error(const std::string& file, std::size_t line, std::size_t column,
                               const std::string& message) {
    fail(ErrorKind::SyntaxError,
         file + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + message);
}

std::vector<Token> lex(std::string_view text, const std::string& file) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t line_start = 0;
    auto push = [&](Tok kind, std::string s, std::size_t start) {
        out.push_back(Token{kind, std::move(s), line, start - line_start + 1});
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            line_start = ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
        if (c == '%') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_char(c)) {
            while (i < text.size() && ident_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
            push(var ? Tok::Var : Tok::Ident, std::move(word), start);
            continue;
        }
        if (c == '"') {
            std::string value;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                char ch = text[i++];
                if (ch == '"') { closed = true; break; }
                if (ch == '\n') break;
                if (ch == '\\' && i < text.size()) ch = text[i++];
                value += ch;
            }
            if (!closed) syntax_error(file, line, start - line_start + 1, "unterminated string");
            if (value.empty()) syntax_error(file, line, start - line_start + 1, "empty constant");
            push(Tok::String, std::move(value), start);
            continue;
        }
        if (c == '#') {
            ++i;
            while (i < text.size() && (ident_char(text[i]) || text[i] == '-')) ++i;
            push(Tok::Directive, std::string(text.substr(start + 1, i - start - 1)), start);
            continue;
        }
        auto two = text.substr(i, 2);
        if (two == ":-") { push(Tok::Implies, ":-", start); i += 2; continue; }
        if (two == "=>") { push(Tok::Arrow, "=>", start); i += 2; continue; }
        if (two == "->") { push(Tok::FdArrow, "->", start); i += 2; continue; }
        if (two == "!=") { push(Tok::Neq, "!=", start); i += 2; continue; }
        switch (c) {
            case '(': push(Tok::LParen, "(", start); break;
            case ')': push(Tok::RParen, ")", start); break;
            case ',': push(Tok::Comma, ",", start); break;
            case '.': push(Tok::Dot, ".", start); break;
            case ':': push(Tok::Colon, ":", start); break;
            case '/': push(Tok::Slash, "/", start); break;
            case '=': push(Tok::Eq, "=", start); break;
            case ';': case '|': push(Tok::Disjunction, std::string(1, c), start); break;
            default:
                syntax_error(file, line, start - line_start + 1,
                             std::string("unexpected character '") + c + "'");
        }
        ++i;
    }
    out.push_back(Token{Tok::End, "", line, i - line_start + 1});
    return out;
}

// ---------------------------------------------------------------------------
// Parser core

class Parser {
public:
    Parser(std::string_view text, std::string file) : file_(std::move(file)), toks_(lex(text, file_)) {}

    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }
    bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
    bool done() const { return at(Tok::End); }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    const Token& previous() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }

    [[noreturn]] void error(const Token& t, const std::string& expected) const {
        std::string found = t.kind == Tok::End ? describe(t.kind) : describe(t.kind) + " '" + t.text + "'";
        syntax_error(file_, t.line, t.column, "expected " + expected + ", found " + found);
    }

    const Token& expect(Tok k, const std::string& what) {
        if (!at(k)) error(peek(), what);
        return next();
    }

    bool accept(Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }

    /// Statement terminator: a '.' or, when lenient, the end of the line.
    void end_statement(bool lenient) {
        if (accept(Tok::Dot)) return;
        if (lenient && (done() || peek().line > previous().line)) return;
        error(peek(), "'.'");
    }

    /// Tokens on the same line as the directive just consumed.
    bool same_line() const { return !done() && peek().line == previous().line; }

    Term term() {
        const Token& t = peek();
        if (t.kind == Tok::Var) {
            next();
            if (t.text == "_") return Variable("_G" + std::to_string(++fresh_));
            return Variable(t.text);
        }
        if (t.kind == Tok::Ident || t.kind == Tok::String) {
            next();
            return Constant(t.text);
        }
        error(t, "term");
    }

    Atom atom() {
        const Token& name = peek();
        if (name.kind != Tok::Ident) error(name, "predicate name");
        next();
        Atom a;
        if (accept(Tok::LParen)) {
            do {
                a.args.push_back(term());
            } while (accept(Tok::Comma));
            expect(Tok::RParen, "')' or ','");
        }
        a.predicate = Predicate{Symbol::intern(name.text), static_cast<std::uint32_t>(a.args.size())};
        return a;
    }

    bool builtin_ahead() const {
        if (at(Tok::Var) || at(Tok::String)) return true;
        return at(Tok::Ident) && (at(Tok::Eq, 1) || at(Tok::Neq, 1));
    }

    Builtin builtin() {
        Builtin b;
        b.lhs = term();
        if (accept(Tok::Eq)) b.op = Builtin::Op::Eq;
        else if (accept(Tok::Neq)) b.op = Builtin::Op::Neq;
        else error(peek(), "'=' or '!='");
        b.rhs = term();
        return b;
    }

    /// Comma-separated atoms and builtins.
    std::vector<Literal> body(ErrorKind negation_kind) {
        std::vector<Literal> out;
        do {
            const Token& t = peek();
            if (t.kind == Tok::Ident && t.text == "not" && (at(Tok::Ident, 1) || at(Tok::Var, 1)))
                fail(negation_kind, file_ + ":" + std::to_string(t.line) + ":" +
                                        std::to_string(t.column) + ": negated literal");
            if (builtin_ahead()) out.emplace_back(builtin());
            else out.emplace_back(atom());
            if (at(Tok::Disjunction))
                fail(ErrorKind::NonConjunctiveBody, file_ + ":" + std::to_string(peek().line) + ":" +
                                                        std::to_string(peek().column) +
                                                        ": bodies are conjunctions");
        } while (accept(Tok::Comma));
        return out;
    }

    std::uint32_t number() {
        const Token& t = expect(Tok::Ident, "number");
        if (t.text.empty() || !std::all_of(t.text.begin(), t.text.end(), ::isdigit)) error(t, "number");
        return static_cast<std::uint32_t>(std::stoul(t.text));
    }

    void reset_fresh() { fresh_ = 0; }
    const std::string& file() const { return file_; }

private:
    std::string file_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int fresh_ = 0;
};

GroundAtom ground(const Atom& a, const Parser& p, const Token& at) {
    std::vector<Constant> args;
    for (const Term& t : a.args) {
        if (!t.is_constant()) p.error(at, "ground atom (constants only)");
        args.push_back(t.constant());
    }
    return GroundAtom(a.predicate, std::move(args));
}

}  // namespace

// ---------------------------------------------------------------------------
// Programs

Program parse_program(std::string_view text, const std::string& file) {
    Parser p(text, file);
    std::vector<Rule> rules;
    std::optional<std::string> answer_name;
    std::optional<std::uint32_t> answer_arity;
    std::set<Symbol> extensional;

    while (!p.done()) {
        if (p.at(Tok::Directive)) {
            Token d = p.next();
            if (d.text == "answer") {
                if (!p.same_line()) p.error(p.peek(), "predicate name after #answer");
                answer_name = p.expect(Tok::Ident, "predicate name").text;
                if (p.same_line() && p.accept(Tok::Slash)) answer_arity = p.number();
            } else if (d.text == "extensional") {
                while (p.same_line()) {
                    extensional.insert(Symbol::intern(p.expect(Tok::Ident, "predicate name").text));
                    if (p.same_line() && p.accept(Tok::Slash)) p.number();
                    if (p.same_line()) p.expect(Tok::Comma, "','");
                }
            } else {
                p.error(d, "#answer or #extensional");
            }
            continue;
        }
        p.reset_fresh();
        Rule r;
        r.head = p.atom();
        if (p.accept(Tok::Implies)) {
            if (p.at(Tok::Dot)) p.error(p.peek(), "body literal");
            r.body = p.body(ErrorKind::NegationUnsupported);
        }
        p.end_statement(false);
        rules.push_back(std::move(r));
    }

    auto arity_of = [&](const std::string& name) -> std::optional<std::uint32_t> {
        Symbol s = Symbol::intern(name);
        for (const Rule& r : rules) {
            if (r.head.predicate.name == s) return r.head.predicate.arity;
            for (const Atom* a : r.body_atoms())
                if (a->predicate.name == s) return a->predicate.arity;
        }
        return std::nullopt;
    };

    Predicate answer;
    if (answer_name) {
        std::uint32_t arity = answer_arity ? *answer_arity : arity_of(*answer_name).value_or(0);
        answer = Predicate{Symbol::intern(*answer_name), arity};
    } else if (auto a = arity_of("ans")) {
        answer = Predicate{Symbol::intern("ans"), *a};
    } else if (!rules.empty()) {
        answer = rules.front().head.predicate;
    } else {
        answer = Predicate{Symbol::intern("ans"), 0};
    }

    Program program(std::move(rules), answer, std::move(extensional));
    validate_program(program);
    return program;
}

std::string to_text(const Program& program) {
    std::string out = "#answer " + program.answer().name.str() + "/" +
                      std::to_string(program.answer().arity) + "\n";
    if (!program.declared_extensional().empty()) {
        out += "#extensional ";
        bool first = true;
        for (Symbol s : program.declared_extensional()) {
            if (!first) out += ", ";
            out += s.str();
            first = false;
        }
        out += "\n";
    }
    for (const Rule& r : program.rules()) out += to_string(r) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Instances

ParsedInstance parse_instance(std::string_view text, const std::string& file) {
    Parser p(text, file);
    enum class Section { Endogenous, Exogenous, Observe };
    Section section = Section::Endogenous;

    struct Entry {
        GroundAtom atom;
        Section section;
        std::optional<std::string> label;
    };
    std::vector<Entry> entries;
    std::set<Symbol> exogenous_predicates;
    std::vector<GroundAtom> observations;

    while (!p.done()) {
        if (p.at(Tok::Directive)) {
            Token d = p.next();
            if (d.text == "endogenous") section = Section::Endogenous;
            else if (d.text == "exogenous") section = Section::Exogenous;
            else if (d.text == "observe") section = Section::Observe;
            else if (d.text == "exogenous-predicates") {
                while (p.same_line()) {
                    exogenous_predicates.insert(
                        Symbol::intern(p.expect(Tok::Ident, "predicate name").text));
                    if (p.same_line() && p.accept(Tok::Slash)) p.number();
                    if (p.same_line()) p.expect(Tok::Comma, "','");
                }
            } else {
                p.error(d, "#endogenous, #exogenous, #exogenous-predicates or #observe");
            }
            continue;
        }
        std::optional<std::string> label;
        if (p.at(Tok::Ident) && p.at(Tok::Colon, 1)) {
            label = p.next().text;
            p.next();
        }
        const Token& start = p.peek();
        Atom a = p.atom();
        GroundAtom g = ground(a, p, start);
        p.end_statement(false);
        if (section == Section::Observe) {
            if (std::find(observations.begin(), observations.end(), g) == observations.end())
                observations.push_back(g);
        } else {
            entries.push_back(Entry{std::move(g), section, std::move(label)});
        }
    }

    ParsedInstance out;
    std::set<GroundAtom> listed_endo;
    std::set<GroundAtom> listed_exo;
    for (const Entry& e : entries) {
        (e.section == Section::Endogenous ? listed_endo : listed_exo).insert(e.atom);
        if (listed_endo.contains(e.atom) && listed_exo.contains(e.atom))
            fail(ErrorKind::DuplicateFactAcrossPartitions, to_string(e.atom));
    }
    for (const Entry& e : entries) {
        bool exo = e.section == Section::Exogenous || exogenous_predicates.contains(e.atom.predicate.name);
        if (exo) out.instance.add_exogenous(e.atom);
        else out.instance.add_endogenous(e.atom);
        if (e.label) out.instance.set_label(e.atom, *e.label);
    }
    out.observations = std::move(observations);
    return out;
}

std::string to_text(const Instance& instance, const std::vector<GroundAtom>& observations) {
    std::string out;
    auto section = [&](const char* name, const std::set<GroundAtom>& atoms) {
        if (atoms.empty()) return;
        out += name;
        out += "\n";
        for (const GroundAtom& a : atoms) {
            if (auto l = instance.label(a)) out += *l + ": ";
            out += to_string(a) + ".\n";
        }
    };
    section("#endogenous", instance.endogenous());
    section("#exogenous", instance.exogenous());
    if (!observations.empty()) {
        out += "#observe\n";
        for (const GroundAtom& a : observations) out += to_string(a) + ".\n";
    }
    return out;
}

GroundAtom parse_ground_atom(std::string_view text) {
    Parser p(text, "<atom>");
    const Token& start = p.peek();
    Atom a = p.atom();
    GroundAtom g = ground(a, p, start);
    p.accept(Tok::Dot);
    if (!p.done()) p.error(p.peek(), "end of atom");
    return g;
}

// ---------------------------------------------------------------------------
// Constraints

namespace {

std::vector<std::uint32_t> positions(Parser& p, std::uint32_t arity) {
    std::vector<std::uint32_t> out;
    do {
        const Token& t = p.peek();
        std::uint32_t n = p.number();
        if (n < 1 || n > arity) p.error(t, "position between 1 and " + std::to_string(arity));
        out.push_back(n - 1);
    } while (p.accept(Tok::Comma));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void check_constraint_safety(const Constraint& c, const Parser& p, const Token& at) {
    std::set<Variable> bound;
    for (const Atom* a : c.body_atoms())
        for (const Variable& v : a->variables()) bound.insert(v);
    std::string where = p.file() + ":" + std::to_string(at.line) + ":" + std::to_string(at.column) + ": ";
    if (c.body_atoms().empty()) fail(ErrorKind::SyntaxError, where + "constraint body has no atom");
    auto need = [&](const Term& t) {
        if (t.is_variable() && !bound.contains(t.variable()))
            fail(ErrorKind::SyntaxError, where + "variable " + t.variable().str() + " does not occur in a body atom");
    };
    for (const Literal& lit : c.body)
        if (const auto* b = std::get_if<Builtin>(&lit)) {
            need(b->lhs);
            need(b->rhs);
        }
    if (c.kind == Constraint::Kind::Egd) {
        need(c.lhs);
        need(c.rhs);
    }
}

}  // namespace

ConstraintSet parse_constraints(std::string_view text, const std::string& file) {
    Parser p(text, file);
    ConstraintSet out;
    while (!p.done()) {
        p.reset_fresh();
        const Token& start = p.peek();
        bool sugar = start.kind == Tok::Ident && (start.text == "fd" || start.text == "key") &&
                     p.at(Tok::Ident, 1) && p.at(Tok::Slash, 2);
        if (sugar) {
            p.next();
            FunctionalDependency fd;
            fd.is_key = start.text == "key";
            std::string name = p.expect(Tok::Ident, "predicate name").text;
            p.expect(Tok::Slash, "'/'");
            std::uint32_t arity = p.number();
            fd.predicate = Predicate{Symbol::intern(name), arity};
            p.expect(Tok::Colon, "':'");
            fd.lhs = positions(p, arity);
            if (fd.is_key) {
                for (std::uint32_t i = 0; i < arity; ++i)
                    if (!std::binary_search(fd.lhs.begin(), fd.lhs.end(), i)) fd.rhs.push_back(i);
            } else {
                p.expect(Tok::FdArrow, "'->'");
                fd.rhs = positions(p, arity);
            }
            p.end_statement(true);
            out.dependencies.push_back(std::move(fd));
            continue;
        }

        Constraint c;
        c.body = p.body(ErrorKind::NonConjunctiveBody);
        p.expect(Tok::Arrow, "'=>'");
        if (p.at(Tok::Ident) && p.peek().text == "false" && !p.at(Tok::LParen, 1) &&
            !p.at(Tok::Eq, 1)) {
            p.next();
            c.kind = Constraint::Kind::Denial;
        } else if (p.builtin_ahead()) {
            c.kind = Constraint::Kind::Egd;
            c.lhs = p.term();
            p.expect(Tok::Eq, "'='");
            c.rhs = p.term();
        } else {
            c.kind = Constraint::Kind::Tgd;
            do {
                c.head.push_back(p.atom());
            } while (p.accept(Tok::Comma));
            if (p.at(Tok::Disjunction))
                fail(ErrorKind::NonConjunctiveBody, p.file() + ":" + std::to_string(p.peek().line) +
                                                        ": tgd heads are conjunctions");
        }
        p.end_statement(true);
        check_constraint_safety(c, p, start);
        out.constraints.push_back(std::move(c));
    }
    return out;
}

std::string to_text(const ConstraintSet& sigma) {
    std::string out;
    for (const Constraint& c : sigma.constraints) out += to_string(c) + "\n";
    auto list = [](const std::vector<std::uint32_t>& ps) {
        std::string s;
        for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? "," : "") + std::to_string(ps[i] + 1);
        return s;
    };
    for (const FunctionalDependency& fd : sigma.dependencies) {
        out += (fd.is_key ? "key " : "fd ") + to_string(fd.predicate) + ": " + list(fd.lhs);
        if (!fd.is_key) out += " -> " + list(fd.rhs);
        out += ".\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Propositional Horn abduction

PropositionalAbduction parse_phca(std::string_view text, const std::string& file) {
    PropositionalAbduction out;
    enum class Section { Clauses, Hyp, Obs };
    Section section = Section::Clauses;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    auto names = [&](std::string s, std::size_t column) {
        std::vector<std::string> out_names;
        std::replace(s.begin(), s.end(), ',', ' ');
        std::istringstream words(s);
        std::string w;
        while (words >> w) {
            if (!std::all_of(w.begin(), w.end(), ident_char))
                syntax_error(file, line_no, column, "invalid propositional variable '" + w + "'");
            out_names.push_back(w);
        }
        return out_names;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('%'));
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
        if (!line.empty() && line.back() == '.') line.pop_back();
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        line = line.substr(first);

        if (line[0] == '#') {
            std::size_t end = line.find_first_of(" \t");
            std::string name = line.substr(1, end == std::string::npos ? std::string::npos : end - 1);
            if (name == "hyp") section = Section::Hyp;
            else if (name == "obs") section = Section::Obs;
            else if (name == "clauses") section = Section::Clauses;
            else syntax_error(file, line_no, 1, "expected #hyp, #obs or #clauses, found #" + name);
            if (end == std::string::npos) continue;
            line = line.substr(end);
            if (line.find_first_not_of(" \t") == std::string::npos) continue;
        }

        std::size_t arrow = line.find("<-");
        if (arrow != std::string::npos) {
            std::vector<std::string> head = names(line.substr(0, arrow), 1);
            if (head.size() != 1)
                fail(ErrorKind::NonHornClause, file + ":" + std::to_string(line_no) + ": clause '" +
                                                   line + "' needs exactly one head");
            out.clauses.push_back(HornClause{head.front(), names(line.substr(arrow + 2), arrow + 3)});
            continue;
        }
        std::vector<std::string> ws = names(line, 1);
        if (section == Section::Hyp) {
            out.hypotheses.insert(ws.begin(), ws.end());
        } else if (section == Section::Obs) {
            out.observations.insert(ws.begin(), ws.end());
        } else {
            if (ws.size() != 1)
                fail(ErrorKind::NonHornClause, file + ":" + std::to_string(line_no) + ": clause '" +
                                                   line + "' needs exactly one head");
            out.clauses.push_back(HornClause{ws.front(), {}});
        }
    }
    return out;
}

std::string to_text(const PropositionalAbduction& p) {
    std::string out;
    for (const HornClause& c : p.clauses) {
        out += c.head + " <-";
        for (const std::string& b : c.body) out += " " + b;
        out += "\n";
    }
    auto section = [&](const char* name, const std::set<std::string>& items) {
        out += name;
        for (const std::string& s : items) out += " " + s;
        out += "\n";
    };
    section("#hyp", p.hypotheses);
    section("#obs", p.observations);
    return out;
}

// ---------------------------------------------------------------------------
// Reports

std::string emit_report(const Report& report) {
    nlohmann::json j;
    j["schema"] = "whyd/1";
    j["task"] = report.task;
    j["payload"] = report.payload;
    j["provenance"]["inputs"] = nlohmann::json::object();
    for (const auto& [name, digest] : report.provenance) j["provenance"]["inputs"][name] = digest;
    return j.dump(2) + "\n";
}

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

}  // namespace whyd
