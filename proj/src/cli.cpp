#include "whyd/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "whyd/abduction.hpp"
#include "whyd/causality.hpp"
#include "whyd/constraints.hpp"
#include "whyd/error.hpp"
#include "whyd/evaluator.hpp"
#include "whyd/frontend.hpp"
#include "whyd/vc_causality.hpp"
#include "whyd/viewupdate.hpp"

namespace whyd::cli {

namespace {

using nlohmann::json;

/// Failures that are the caller's fault before any analysis starts.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string program;
    std::string data;
    std::string constraints;
    std::string target;
    std::string tuple;
    std::string mode = "minimal";
    std::string phca;
    bool endogenous_only = false;
    std::size_t max_contingency_sets = 0;
    std::optional<std::size_t> obs_bound;
    std::size_t jobs = 0;
    bool pretty = false;
};

class Inputs {
public:
    std::string read(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw UsageError("cannot read " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        digests_[std::filesystem::path(path).filename().string()] = sha256_hex(text);
        return text;
    }
    const std::map<std::string, std::string>& digests() const { return digests_; }

private:
    std::map<std::string, std::string> digests_;
};

json atom_list(const AtomSet& atoms) {
    json out = json::array();
    for (const GroundAtom& a : atoms) out.push_back(to_string(a));
    return out;
}

json family_json(const AtomFamily& family) {
    json out = json::array();
    for (const AtomSet& s : canonical_order(family)) out.push_back(atom_list(s));
    return out;
}

json tuple_entry(const Instance& d, const GroundAtom& a) {
    json out;
    out["tuple"] = to_string(a);
    if (auto l = d.label(a)) out["label"] = *l;
    return out;
}

std::string shown(const Instance& d, const GroundAtom& a) {
    auto l = d.label(a);
    return l ? *l + " " + to_string(a) : to_string(a);
}

std::string shown_set(const Instance& d, const AtomSet& s) {
    std::string out = "{";
    bool first = true;
    for (const GroundAtom& a : s) {
        if (!first) out += ", ";
        auto l = d.label(a);
        out += l ? *l : to_string(a);
        first = false;
    }
    return out + "}";
}

GroundAtom parse_target(const std::string& text, const char* flag) {
    try {
        return parse_ground_atom(text);
    } catch (const Error& e) {
        throw UsageError(std::string("bad ") + flag + " '" + text + "': " + e.what());
    }
}

GroundAtom resolve_tuple(const Instance& d, const std::string& text) {
    if (auto labelled = d.find_label(text)) return *labelled;
    return parse_target(text, "--tuple");
}

struct Loaded {
    Program program;
    ParsedInstance data;
    ConstraintSet sigma;
    bool has_constraints = false;
};

Loaded load(const Options& o, Inputs& in, bool need_program, bool need_data) {
    Loaded l;
    if (need_program && o.program.empty()) throw UsageError("--program is required");
    if (need_data && o.data.empty()) throw UsageError("--data is required");
    if (!o.program.empty()) {
        std::string text = in.read(o.program);
        l.program = parse_program(text, o.program);
    }
    if (!o.data.empty()) {
        std::string text = in.read(o.data);
        l.data = parse_instance(text, o.data);
    }
    if (!o.constraints.empty()) {
        std::string text = in.read(o.constraints);
        l.sigma = parse_constraints(text, o.constraints);
        l.has_constraints = true;
    }
    return l;
}

GroundAtom require_target(const Options& o) {
    if (o.target.empty()) throw UsageError("--target is required");
    return parse_target(o.target, "--target");
}

SearchOptions search_options(const Options& o) {
    SearchOptions s;
    s.jobs = resolve_jobs(o.jobs);
    s.max_contingency_sets = o.max_contingency_sets;
    return s;
}

struct Output {
    Report report;
    std::string pretty;
};

// ---------------------------------------------------------------------------
// Subcommands

Output do_eval(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    MinimalModel m = evaluate_fixpoint(l.program, l.data.instance);
    AtomSet ans = m.extension(l.program.answer());
    Output out;
    out.report.task = "eval";
    out.report.payload["answer_predicate"] = to_string(l.program.answer());
    out.report.payload["answers"] = atom_list(ans);
    out.report.payload["model_size"] = m.size();
    out.pretty = std::to_string(ans.size()) + " answers for " + to_string(l.program.answer()) + "\n";
    for (const GroundAtom& a : ans) out.pretty += "  " + to_string(a) + "\n";
    return out;
}

json cause_entry(const Instance& d, const GroundAtom& cause, const AtomFamily& family,
                 const Ratio& rho, bool truncated) {
    json e = tuple_entry(d, cause);
    e["responsibility"] = rho.str();
    e["counterfactual"] = family.contains(AtomSet{});
    e["contingency_sets"] = family_json(family);
    e["truncated"] = truncated;
    return e;
}

Output do_causes(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    GroundAtom target = require_target(o);
    const Instance& d = l.data.instance;
    Output out;
    out.report.task = "causes";
    out.report.payload["answer"] = to_string(target);
    out.report.payload["under_constraints"] = l.has_constraints;
    json list = json::array();
    out.pretty = "causes of " + to_string(target) + (l.has_constraints ? " under constraints" : "") + "\n";
    auto add = [&](const GroundAtom& c, const AtomFamily& f, const Ratio& rho, bool truncated) {
        list.push_back(cause_entry(d, c, f, rho, truncated));
        out.pretty += "  " + shown(d, c) + "  rho=" + rho.str() + "\n";
        for (const AtomSet& g : canonical_order(f)) out.pretty += "    contingency " + shown_set(d, g) + "\n";
    };
    if (l.has_constraints) {
        IcSearchOptions ic;
        static_cast<SearchOptions&>(ic) = search_options(o);
        for (const ConstrainedCauseReport& r : causes_under_ics(d, l.program, target, l.sigma, ic))
            add(r.cause, r.minimal_contingency_sets, r.responsibility, r.truncated);
    } else {
        for (const CauseReport& r : cause_reports(d, l.program, target, search_options(o)))
            add(r.cause, r.minimal_contingency_sets, r.responsibility, r.truncated);
    }
    out.report.payload["causes"] = list;
    return out;
}

Output do_responsibility(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    GroundAtom target = require_target(o);
    if (o.tuple.empty()) throw UsageError("--tuple is required");
    const Instance& d = l.data.instance;
    GroundAtom tuple = resolve_tuple(d, o.tuple);
    Ratio rho;
    if (l.has_constraints) {
        IcSearchOptions ic;
        static_cast<SearchOptions&>(ic) = search_options(o);
        rho = responsibility_under_ics(d, l.program, target, tuple, l.sigma, ic);
    } else {
        rho = responsibility(d, l.program, target, tuple, search_options(o));
    }
    Output out;
    out.report.task = "responsibility";
    out.report.payload["answer"] = to_string(target);
    out.report.payload["tuple"] = tuple_entry(d, tuple);
    out.report.payload["responsibility"] = rho.str();
    out.report.payload["is_cause"] = !rho.is_zero();
    out.report.payload["under_constraints"] = l.has_constraints;
    out.pretty = "rho(" + shown(d, tuple) + ") = " + rho.str() + " for " + to_string(target) + "\n";
    return out;
}

Output do_mrc(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    GroundAtom target = require_target(o);
    const Instance& d = l.data.instance;
    std::vector<CauseReport> reports = cause_reports(d, l.program, target, search_options(o));
    Ratio best = Ratio::zero();
    for (const CauseReport& r : reports) best = std::max(best, r.responsibility);
    json list = json::array();
    Output out;
    out.pretty = "most responsible causes of " + to_string(target) + " (rho=" + best.str() + ")\n";
    for (const CauseReport& r : reports) {
        if (best.is_zero() || !(r.responsibility == best)) continue;
        list.push_back(tuple_entry(d, r.cause));
        out.pretty += "  " + shown(d, r.cause) + "\n";
    }
    out.report.task = "mrc";
    out.report.payload["answer"] = to_string(target);
    out.report.payload["responsibility"] = best.str();
    out.report.payload["most_responsible_causes"] = list;
    return out;
}

Output do_vc_causes(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    GroundAtom target = require_target(o);
    const Instance& d = l.data.instance;
    VcOptions vc;
    static_cast<SearchOptions&>(vc) = search_options(o);
    json list = json::array();
    Output out;
    out.pretty = "vc-causes of " + to_string(target) + "\n";
    for (const VcCauseReport& r : vc_causes(d, l.program, target, vc)) {
        json e = tuple_entry(d, r.cause);
        e["vc_responsibility"] = r.vc_responsibility.str();
        e["vcc"] = r.counterfactual();
        e["contingency_sets"] = family_json(r.minimal_contingency_sets);
        e["truncated"] = r.truncated;
        list.push_back(e);
        out.pretty += "  " + shown(d, r.cause) + "  vc-rho=" + r.vc_responsibility.str() + "\n";
        for (const AtomSet& g : canonical_order(r.minimal_contingency_sets))
            out.pretty += "    contingency " + shown_set(d, g) + "\n";
    }
    if (list.empty()) out.pretty += "  none\n";
    out.report.task = "vc-causes";
    out.report.payload["answer"] = to_string(target);
    out.report.payload["vc_causes"] = list;
    return out;
}

json abduction_payload(const AbductionProblem& ap, const AtomFamily& sol, std::string& pretty) {
    json p;
    AtomFamily nsets = necessary_sets_from(sol);
    p["diagnoses"] = family_json(sol);
    p["relevant"] = atom_list(relevant_from(sol));
    p["necessary"] = atom_list(necessary_from(sol));
    p["necessary_sets"] = family_json(nsets);
    json eta = json::object();
    for (const GroundAtom& h : ap.hypotheses)
        if (!ap.extensional.contains(h)) eta[to_string(h)] = necessity_degree_from(nsets, h).str();
    p["necessity_degree"] = eta;
    pretty += std::to_string(sol.size()) + " diagnoses\n";
    for (const AtomSet& s : canonical_order(sol)) {
        pretty += "  {";
        bool first = true;
        for (const GroundAtom& a : s) {
            pretty += (first ? "" : ", ") + to_string(a);
            first = false;
        }
        pretty += "}\n";
    }
    return p;
}

Output do_abduce(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    const Instance& d = l.data.instance;
    AbductionProblem ap = make_abduction_problem(l.program, d.exogenous(), d.endogenous(),
                                                 l.data.observations, o.obs_bound);
    AtomFamily sol = solve_diagnoses(ap, search_options(o));
    Output out;
    out.report.task = "abduce";
    out.report.payload = abduction_payload(ap, sol, out.pretty);
    json obs = json::array();
    for (const GroundAtom& a : ap.observation) obs.push_back(to_string(a));
    out.report.payload["observation"] = obs;
    return out;
}

Output do_delprop(const Options& o, Inputs& in) {
    Loaded l = load(o, in, true, true);
    GroundAtom target = require_target(o);
    const Instance& d = l.data.instance;
    DeletionOptions del;
    static_cast<SearchOptions&>(del) = search_options(o);
    del.endogenous_only = o.endogenous_only;
    std::vector<DeletionSolution> sols;
    if (o.mode == "minimal") sols = minimal_source_solutions(d, l.program, target, del);
    else if (o.mode == "minimum") sols = minimum_source_solutions(d, l.program, target, del);
    else if (o.mode == "view-safe") sols = vsef_solutions(d, l.program, target, del);
    else throw UsageError("--mode must be minimal, minimum or view-safe");

    json list = json::array();
    Output out;
    out.pretty = std::to_string(sols.size()) + " " + o.mode + " deletions for " + to_string(target) + "\n";
    for (const DeletionSolution& s : sols) {
        json e;
        e["removed"] = atom_list(s.removed);
        e["residual_view"] = atom_list(s.residual_view);
        list.push_back(e);
        out.pretty += "  remove " + shown_set(d, s.removed) + "\n";
    }
    out.report.task = "delprop";
    out.report.payload["answer"] = to_string(target);
    out.report.payload["mode"] = o.mode;
    out.report.payload["endogenous_only"] = o.endogenous_only;
    out.report.payload["solutions"] = list;
    return out;
}

Output do_check_ics(const Options& o, Inputs& in) {
    if (o.constraints.empty()) throw UsageError("--constraints is required");
    Loaded l = load(o, in, false, true);
    const Instance& d = l.data.instance;
    SatisfactionResult res = check_constraints(d, l.sigma);
    Output out;
    out.report.task = "check-ics";
    out.report.payload["satisfied"] = res.satisfied;
    json violations = json::array();
    for (const Violation& v : res.violations) {
        json e;
        e["constraint"] = v.text;
        e["witness"] = atom_list(AtomSet(v.witness.begin(), v.witness.end()));
        violations.push_back(e);
    }
    out.report.payload["violations"] = violations;
    out.pretty = res.satisfied ? "constraints satisfied\n" : "constraints violated\n";
    for (const Violation& v : res.violations) out.pretty += "  " + v.text + "\n";

    if (!o.program.empty()) {
        if (l.program.is_conjunctive()) {
            bool kp = is_key_preserving(l.program, l.sigma.keys());
            out.report.payload["key_preserving"] = kp;
            out.pretty += std::string("query is ") + (kp ? "" : "not ") + "key-preserving\n";
        }
        if (!o.target.empty() && res.satisfied) {
            GroundAtom target = require_target(o);
            json subs = json::array();
            for (const Instance& e : maximal_admissible_subinstances(d, l.program, target, l.sigma,
                                                                     search_options(o))) {
                AtomSet removed;
                for (const GroundAtom& a : d.atoms())
                    if (!e.contains(a)) removed.insert(a);
                json entry;
                entry["removed"] = atom_list(removed);
                subs.push_back(entry);
                out.pretty += "  admissible: remove " + shown_set(d, removed) + "\n";
            }
            out.report.payload["answer"] = to_string(target);
            out.report.payload["admissible_subinstances"] = subs;
        }
    }
    return out;
}

Output do_encode_phca(const Options& o, Inputs& in) {
    if (o.phca.empty()) throw UsageError("a PHCA input file is required");
    PropositionalAbduction p = parse_phca(in.read(o.phca), o.phca);
    AbductionProblem ap = encode_phca(p);
    Output out;
    out.report.task = "encode-phca";
    out.report.payload["program"] = to_text(ap.program);
    out.report.payload["extensional"] = atom_list(ap.extensional);
    out.report.payload["hypotheses"] = atom_list(ap.hypotheses);
    json obs = json::array();
    for (const GroundAtom& a : ap.observation) obs.push_back(to_string(a));
    out.report.payload["observation"] = obs;
    AtomFamily sol = solve_diagnoses(ap, search_options(o));
    json ab = abduction_payload(ap, sol, out.pretty);
    out.report.payload["diagnoses"] = ab["diagnoses"];
    out.report.payload["relevant"] = ab["relevant"];
    return out;
}

void emit_error(std::ostream& out, std::ostream& err, const std::string& kind, const std::string& message) {
    json j;
    j["schema"] = "whyd/1";
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    out << j.dump(2) << "\n";
    err << "whyd: " << message << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Causal explanations for Datalog query answers", "whyd"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub, bool target) {
        sub->add_option("-p,--program", o.program, "Datalog program file");
        sub->add_option("-d,--data", o.data, "instance file");
        sub->add_option("-c,--constraints", o.constraints, "integrity constraints file");
        if (target) sub->add_option("-t,--target", o.target, "answer atom, e.g. 'ans(john,xml)'");
        sub->add_option("--max-contingency-sets", o.max_contingency_sets,
                        "cap on reported contingency sets per cause (0 = all)");
        sub->add_option("--jobs", o.jobs, "worker threads (default: WHYD_JOBS or all cores)");
        sub->add_flag("--pretty", o.pretty, "human-readable summary instead of JSON");
    };

    std::map<std::string, Output (*)(const Options&, Inputs&)> handlers{
        {"eval", do_eval},           {"causes", do_causes},       {"responsibility", do_responsibility},
        {"mrc", do_mrc},             {"vc-causes", do_vc_causes}, {"abduce", do_abduce},
        {"delprop", do_delprop},     {"check-ics", do_check_ics}, {"encode-phca", do_encode_phca},
    };

    common(app.add_subcommand("eval", "evaluate the program and list its answers"), false);
    common(app.add_subcommand("causes", "actual causes with contingency sets and responsibility"), true);
    auto* resp = app.add_subcommand("responsibility", "responsibility of one tuple");
    common(resp, true);
    resp->add_option("--tuple", o.tuple, "tuple atom or label");
    common(app.add_subcommand("mrc", "most responsible causes"), true);
    common(app.add_subcommand("vc-causes", "view-conditioned causes"), true);
    auto* abduce = app.add_subcommand("abduce", "abductive diagnoses (E exogenous, Hyp endogenous, #observe)");
    common(abduce, false);
    abduce->add_option("--obs-bound", o.obs_bound, "maximum number of observation atoms");
    auto* delprop = app.add_subcommand("delprop", "delete propagation");
    common(delprop, true);
    delprop->add_option("--mode", o.mode, "minimal, minimum or view-safe");
    delprop->add_flag("--endogenous-only", o.endogenous_only, "only endogenous tuples may be deleted");
    common(app.add_subcommand("check-ics", "check integrity constraints"), true);
    auto* phca = app.add_subcommand("encode-phca", "encode propositional Horn abduction and solve it");
    phca->add_option("input", o.phca, "PHCA file");
    phca->add_option("--jobs", o.jobs, "worker threads");
    phca->add_flag("--pretty", o.pretty, "human-readable summary instead of JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        emit_error(out, err, "UsageError", e.what());
        return Usage;
    }

    CLI::App* chosen = app.get_subcommands().front();
    try {
        Inputs inputs;
        Output result = handlers.at(chosen->get_name())(o, inputs);
        result.report.provenance = inputs.digests();
        out << (o.pretty ? result.pretty : emit_report(result.report));
        return Ok;
    } catch (const UsageError& e) {
        emit_error(out, err, "UsageError", e.what());
        return Usage;
    } catch (const Error& e) {
        emit_error(out, err, std::string(to_string(e.kind())), e.what());
        return Semantic;
    } catch (const std::exception& e) {
        emit_error(out, err, "InternalError", e.what());
        return Semantic;
    }
}

}  // namespace whyd::cli
