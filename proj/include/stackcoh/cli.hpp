#pragma once

// Command-line front end.  Every command turns a Request into a Reply
// (exit code, human text, JSON report); `run` replays a manifest's tasks.

#include "stackcoh/manifest.hpp"
#include "stackcoh/selfcheck.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <future>
#include <iostream>

namespace stackcoh::cli {

using manifest::json;

enum Exit : int { ok = 0, check_failed = 1, input_error = 2 };

struct Request {
    std::string command;
    std::string space;
    std::string prestack;
    std::string morphism;
    std::string mode = "cech";
    std::string cover;
    std::string point;
    std::string suite = "all";
    int max_degree = 2;
    bool secondary = false;
    std::string expect;  // cohomology only: the table must read exactly this
};

struct Reply {
    int code = ok;
    std::string text;
    json report;
};

inline json invariants_json(const Pic2Group& p) {
    Pic2Invariants inv = invariants(p);
    return {{"pi0", inv.pi0.str()}, {"pi1", inv.pi1.str()}, {"q", inv.q_nontrivial() ? "nontrivial" : "trivial"}};
}

inline json sequence_json(const ExactSequence& s) {
    json groups = json::array();
    for (std::size_t i = 0; i < s.groups.size(); ++i) {
        json g{{"label", s.labels[i]}, {"group", s.groups[i].str()}};
        for (const auto& sp : s.spots)
            if (sp.index == i) g["exact"] = sp.exact;
        groups.push_back(g);
    }
    return {{"groups", groups}, {"verdict", s.verdict() ? "exact" : "not exact"}};
}

inline json suite_json(const SuiteReport& r) {
    json items = json::array();
    for (const auto& i : r.items) items.push_back({{"name", i.name}, {"passed", i.passed}, {"witness", i.witness}});
    return items;
}

namespace detail {

/// STACKCOH_MAX_DEGREE, when set, replaces the requested maximal degree.
inline int effective_max_degree(int requested) {
    int n = requested;
    if (const char* env = std::getenv("STACKCOH_MAX_DEGREE")) {
        try {
            std::size_t used = 0;
            n = std::stoi(env, &used);
            if (used != std::string(env).size()) throw std::invalid_argument(env);
        } catch (const std::exception&) {
            throw manifest::InputError("STACKCOH_MAX_DEGREE", std::string("not an integer: '") + env + "'");
        }
    }
    if (n < 0) throw manifest::InputError("max-degree", "unsatisfiable degree window 0.." + std::to_string(n));
    return n;
}

struct Setup {
    Prestack p;
    Mode mode = Mode::cech;
    PipelineOptions opt;
    int requested = 0;  // after the environment override
    int top = 0;        // highest degree computed
    std::optional<int> bound;
};

inline Setup setup(const manifest::Manifest& m, const Request& r) {
    if (r.space.empty() || r.prestack.empty()) throw manifest::InputError("", r.command + " needs --space and --prestack");
    Setup s{.p = m.prestack(r.prestack, r.space), .mode = Mode::cech, .opt = {}, .requested = 0, .top = 0, .bound = {}};
    try {
        s.mode = parse_mode(r.mode);
    } catch (const ValidationError& e) {
        throw manifest::InputError("mode", e.what());
    }
    const manifest::SpaceDef& sp = m.space(r.space);
    if (!r.cover.empty()) {
        SpecialCover c = m.cover(r.cover, r.space);
        if (s.mode == Mode::cech) s.opt.cech_cover = c.as_family(sp.space);
        else s.opt.berishvili_base = c;
    } else if (s.mode == Mode::cech && sp.stars) {
        s.opt.cech_cover = *sp.stars;
    }
    s.requested = effective_max_degree(r.max_degree);
    s.bound = vanishing_bound(sp.space, s.mode, s.opt);
    s.top = s.bound ? std::min(s.requested, std::max(*s.bound, 0)) : s.requested;
    return s;
}

inline json header(const Request& r) {
    json j{{"schema", 1}, {"command", r.command}};
    if (!r.space.empty()) j["space"] = r.space;
    if (!r.prestack.empty()) j["prestack"] = r.prestack;
    return j;
}

}  // namespace detail

inline Reply cohomology_cmd(const manifest::Manifest& m, const Request& r) {
    detail::Setup s = detail::setup(m, r);
    CohomologyResult h = cohomology(s.p, s.mode, s.top, r.secondary, s.opt);
    Reply out;
    out.report = detail::header(r);
    out.report["mode"] = mode_name(s.mode);
    out.report["max_degree"] = s.requested;
    if (s.bound) out.report["vanishing_above"] = *s.bound;
    json degs = json::array();
    std::ostringstream os;
    os << "cohomology of " << r.prestack << " on " << r.space << " (" << mode_name(s.mode) << ")\n" << h.table() << "\n";
    for (const auto& d : h.degrees) {
        json dj{{"degree", d.degree}, {"tu", d.tu.str()}};
        if (d.secondary) {
            dj["secondary"] = invariants_json(*d.secondary);
            os << "bold H^" << d.degree << ": " << describe(*d.secondary) << "\n";
        }
        degs.push_back(dj);
    }
    if (s.bound && s.requested > *s.bound) os << "H^n_U = 0 for n > " << *s.bound << " (cover dimension)\n";
    out.report["degrees"] = degs;
    out.report["table"] = h.table();
    if (!r.expect.empty()) {
        const bool match = h.table() == r.expect;
        out.report["expected"] = r.expect;
        out.report["matches"] = match;
        if (!match) {
            out.code = check_failed;
            os << "FAIL expected " << r.expect << "\n";
        }
    }
    out.text = os.str();
    return out;
}

inline Reply tu_sequence_cmd(const manifest::Manifest& m, const Request& r) {
    detail::Setup s = detail::setup(m, r);
    SpaceTuSequence t = space_tu_sequence(s.p, s.mode, s.top, s.opt);
    Reply out;
    out.code = t.verdict() ? ok : check_failed;
    out.report = detail::header(r);
    out.report["mode"] = mode_name(s.mode);
    out.report["sequence"] = sequence_json(t.sequence);
    out.report["pi_groups_match"] = t.pi_groups_match;
    out.report["mismatches"] = t.mismatches;
    std::ostringstream os;
    os << "TU sequence of " << r.prestack << " on " << r.space << " (" << mode_name(s.mode) << ")\n"
       << t.sequence.str() << "pi presheaf terms match the pipeline: " << (t.pi_groups_match ? "yes" : "no") << "\n";
    for (const auto& mm : t.mismatches) os << "  " << mm << "\n";
    out.text = os.str();
    return out;
}

inline Reply gz_sequence_cmd(const manifest::Manifest& m, const Request& r) {
    if (r.morphism.empty()) throw manifest::InputError("", "gz-sequence needs --morphism");
    ExactSequence s = gz_sequence(m.morphism(r.morphism));
    Reply out;
    out.code = s.verdict() ? ok : check_failed;
    out.report = detail::header(r);
    out.report["morphism"] = r.morphism;
    out.report["sequence"] = sequence_json(s);
    out.text = "six-term sequence of " + r.morphism + "\n" + s.str();
    return out;
}

inline Reply stalk_cmd(const manifest::Manifest& m, const Request& r) {
    if (r.space.empty() || r.prestack.empty()) throw manifest::InputError("", "stalk needs --space and --prestack");
    Prestack p = m.prestack(r.prestack, r.space);
    const FiniteSpace& x = p.space();
    Reply out;
    out.report = detail::header(r);
    json stalks = json::object();
    std::ostringstream os;
    bool found = r.point.empty();
    for (std::size_t pt = 0; pt < x.size(); ++pt) {
        if (!r.point.empty() && x.name(pt) != r.point) continue;
        found = true;
        stalks[x.name(pt)] = invariants_json(p.stalk(pt));
        os << x.name(pt) << ": " << describe(p.stalk(pt)) << "\n";
    }
    if (!found) throw manifest::InputError("point", "unknown point '" + r.point + "'");
    out.report["stalks"] = stalks;
    out.text = os.str();
    return out;
}

inline Reply stackify_cmd(const manifest::Manifest& m, const Request& r) {
    if (r.space.empty() || r.prestack.empty()) throw manifest::InputError("", "stackify needs --space and --prestack");
    Prestack p = m.prestack(r.prestack, r.space);
    const FiniteSpace& x = p.space();
    DescentReport before = stack_check(p);
    Reply out;
    out.report = detail::header(r);
    out.report["was_stack"] = before.holds;
    if (!before.holds) out.report["witness"] = before.witness;
    std::ostringstream os;
    os << r.prestack << " on " << r.space << " is " << (before.holds ? "" : "not ") << "a stack";
    if (!before.holds) os << " (" << before.witness << ")";
    os << "\n";
    try {
        Prestack s = stackify(p);
        json vals = json::object();
        os << "stackification:\n";
        for (Open u : x.all_opens()) {
            if (!u) continue;
            vals[x.open_str(u)] = invariants_json(s.value(u));
            os << "  " << x.open_str(u) << ": " << describe(s.value(u)) << "\n";
        }
        out.report["values"] = vals;
        out.report["is_stack"] = true;
    } catch (const Error& e) {
        out.code = check_failed;
        out.report["is_stack"] = false;
        out.report["error"] = e.what();
        os << e.what() << "\n";
    }
    out.text = os.str();
    return out;
}

inline Reply compare_cmd(const manifest::Manifest& m, const Request& r) {
    if (r.space.empty() || r.prestack.empty()) throw manifest::InputError("", "compare needs --space and --prestack");
    Prestack p = m.prestack(r.prestack, r.space);
    const int top = detail::effective_max_degree(r.max_degree);
    PipelineOptions opt;
    if (!r.cover.empty()) opt.cech_cover = m.cover(r.cover, r.space).as_family(p.space());
    CompareReport c = compare(p, top, opt);
    Reply out;
    out.report = detail::header(r);
    out.report["direction"] = c.direction;
    json rows = json::array();
    for (const auto& row : c.rows)
        rows.push_back({{"degree", row.degree}, {"cech", row.cech}, {"berishvili", row.berishvili}, {"equal", row.equal()}});
    out.report["rows"] = rows;
    out.report["agree"] = c.agree();
    out.text = c.str();
    return out;
}

inline Reply verify_cmd(const manifest::Manifest& m, const Request& r) {
    static const std::vector<std::string> suites{"snf", "picard", "complex2", "site", "prestack"};
    if (r.suite != "all" && std::find(suites.begin(), suites.end(), r.suite) == suites.end())
        throw manifest::InputError("suite", "unknown suite '" + r.suite + "' (snf, picard, complex2, site, prestack, all)");
    Reply out;
    out.report = detail::header(r);
    out.report["suite"] = r.suite;
    json results = json::object();
    std::ostringstream os;
    bool all = true;
    for (const auto& name : suites) {
        if (r.suite != "all" && r.suite != name) continue;
        SuiteReport rep;
        if (name == "snf") rep = selfcheck::snf();
        if (name == "picard") rep = selfcheck::picard();
        if (name == "complex2") rep = selfcheck::complex2();
        if (name == "site") rep = selfcheck::site();
        if (name == "prestack")
            for (const auto& c : m.checks()) {
                SuiteReport part = selfcheck::prestack(m.prestack(c.prestack, c.space), c.max_degree);
                for (auto& it : part.items) {
                    it.name = c.space + "/" + it.name;
                    rep.items.push_back(it);
                }
            }
        results[name] = suite_json(rep);
        all = all && rep.passed();
        for (const auto& it : rep.items)
            os << (it.passed ? "PASS " : "FAIL ") << name << ": " << it.name
               << (it.witness.empty() ? "" : "  (" + it.witness + ")") << "\n";
    }
    os << (all ? "all checks passed" : "some checks failed") << "\n";
    out.report["results"] = results;
    out.report["passed"] = all;
    out.code = all ? ok : check_failed;
    out.text = os.str();
    return out;
}

inline Reply dispatch(const manifest::Manifest& m, const Request& r) {
    if (r.command == "cohomology") return cohomology_cmd(m, r);
    if (r.command == "tu-sequence") return tu_sequence_cmd(m, r);
    if (r.command == "gz-sequence") return gz_sequence_cmd(m, r);
    if (r.command == "stalk") return stalk_cmd(m, r);
    if (r.command == "stackify") return stackify_cmd(m, r);
    if (r.command == "compare") return compare_cmd(m, r);
    if (r.command == "verify") return verify_cmd(m, r);
    throw manifest::InputError("", "unknown command '" + r.command + "'");
}

/// A manifest task object uses the flag names with underscores.
inline Request request_of(const json& t) {
    Request r;
    r.command = t.at("command").get<std::string>();
    r.space = t.value("space", r.space);
    r.prestack = t.value("prestack", r.prestack);
    r.morphism = t.value("morphism", r.morphism);
    r.mode = t.value("mode", r.mode);
    r.cover = t.value("cover", r.cover);
    r.point = t.value("point", r.point);
    r.suite = t.value("suite", r.suite);
    r.max_degree = t.value("max_degree", r.max_degree);
    r.secondary = t.value("secondary", r.secondary);
    r.expect = t.value("expect", r.expect);
    if (r.command == "run") throw manifest::InputError("/tasks", "tasks cannot run other task lists");
    return r;
}

inline Reply run_tasks(const manifest::Manifest& m) {
    Reply out;
    out.report = {{"schema", 1}, {"command", "run"}, {"tasks", json::array()}};
    std::vector<Request> reqs;
    for (std::size_t i = 0; i < m.tasks().size(); ++i) {
        try {
            reqs.push_back(request_of(m.tasks()[i]));
        } catch (const json::exception& e) {
            throw manifest::InputError("/tasks/" + std::to_string(i), e.what());
        }
    }
    // Tasks are independent; the report still follows manifest order, and the
    // first error in that order is the one reported.
    std::vector<std::future<Reply>> running;
    for (const auto& r : reqs) running.push_back(std::async(std::launch::async, [&m, r] { return dispatch(m, r); }));
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        Reply one = running[i].get();
        out.code = std::max(out.code, one.code);
        out.report["tasks"].push_back(one.report);
        out.text += "== task " + std::to_string(i + 1) + ": " + reqs[i].command + "\n" + one.text;
    }
    return out;
}

/// Parses argv, loads the manifest and runs one command.  Input errors
/// exit with 2, failed checks with 1.
inline int main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr,
                const std::string& default_manifest = "") {
    CLI::App app{"stackcoh: cohomology of prestacks of abelian 2-groups on finite spaces"};
    app.require_subcommand(1);
    std::string manifest_path;
    bool as_json = false;
    app.add_option("--manifest,-m", manifest_path, "manifest file (JSON, schema 1)")->envname("STACKCOH_MANIFEST");
    app.add_flag("--json", as_json, "print the JSON report instead of the table");
    Request req;

    auto with_target = [&](CLI::App* c) {
        c->add_option("--space", req.space, "space name")->required();
        c->add_option("--prestack", req.prestack, "prestack name")->required();
    };
    auto with_window = [&](CLI::App* c) {
        c->add_option("--mode", req.mode, "cech or berishvili")->check(CLI::IsMember({"cech", "berishvili"}));
        c->add_option("--max-degree", req.max_degree, "highest degree (STACKCOH_MAX_DEGREE overrides)");
        c->add_option("--cover", req.cover, "named special cover instead of the default");
    };
    auto* coh = app.add_subcommand("cohomology", "H^n_U per degree");
    with_target(coh);
    with_window(coh);
    coh->add_flag("--secondary", req.secondary, "also print the secondary 2-groups");
    coh->add_option("--expect", req.expect, "expected table; a mismatch exits with 1");
    auto* tu = app.add_subcommand("tu-sequence", "TU exact sequence of a prestack");
    with_target(tu);
    with_window(tu);
    auto* gz = app.add_subcommand("gz-sequence", "six-term sequence of a morphism");
    gz->add_option("--morphism", req.morphism, "morphism name")->required();
    auto* st = app.add_subcommand("stalk", "stalk invariants");
    with_target(st);
    st->add_option("--point", req.point, "only this point");
    auto* sf = app.add_subcommand("stackify", "stack check and stackification");
    with_target(sf);
    auto* cmp = app.add_subcommand("compare", "Cech against Berishvili cohomology");
    with_target(cmp);
    cmp->add_option("--max-degree", req.max_degree, "highest degree (STACKCOH_MAX_DEGREE overrides)");
    cmp->add_option("--cover", req.cover, "named special cover for the Cech side");
    auto* ver = app.add_subcommand("verify", "self checks");
    ver->add_option("--suite", req.suite, "snf, picard, complex2, site, prestack or all")
        ->check(CLI::IsMember({"snf", "picard", "complex2", "site", "prestack", "all"}));
    app.add_subcommand("run", "run the manifest's task list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    }
    req.command = app.get_subcommands().front()->get_name();
    if (manifest_path.empty()) manifest_path = default_manifest;
    try {
        if (manifest_path.empty()) throw manifest::InputError("", "no manifest given (--manifest or STACKCOH_MANIFEST)");
        manifest::Manifest m = manifest::Manifest::load(manifest_path);
        Reply rep = req.command == "run" ? run_tasks(m) : dispatch(m, req);
        if (as_json) out << rep.report.dump(2) << "\n";
        else out << rep.text;
        return rep.code;
    } catch (const manifest::InputError& e) {
        err << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const ValidationError& e) {
        err << "input error: " << e.what() << "\n";
        return input_error;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return check_failed;
    }
}

}  // namespace stackcoh::cli
