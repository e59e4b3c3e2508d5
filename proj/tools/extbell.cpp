// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Exit codes: 0 success, 1 verification failure,
// 2 input error, 3 resource limit.

#include <CLI11.hpp>

#include <cctype>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "extbell/error.hpp"
#include "extbell/fine.hpp"
#include "extbell/io.hpp"
#include "extbell/membership.hpp"
#include "extbell/polytope.hpp"
#include "extbell/quantum.hpp"
#include "extbell/reproduce.hpp"
#include "extbell/sets.hpp"

namespace fs = std::filesystem;
using namespace extbell;

namespace {

struct Args {
    std::string scenario;
    std::string behaviour;
    std::string set_class;
    std::string labels = "NS,ND,NSND,NC,L_nc,L_nd,L_G,L_ND";
    std::string inequality;
    std::string cache;
    std::string model;
    std::string joint;
    std::string party;
    std::string fixtures = "data";
    std::string out_dir;
    std::vector<std::string> skip;
    std::vector<std::size_t> dims;
    std::uint64_t seed = 1;
    unsigned budget = 16;
    unsigned workers = 1;
    std::size_t max_rays = 2'000'000;
};

// What a run produced; written next to the artifacts as report-<command>.txt.
// Timing goes to stdout only so that reruns give byte-identical files.
struct RunReport {
    std::string command;
    std::string scenario_hash;
    std::vector<std::string> outputs;
    std::vector<std::string> claims;
};
RunReport report;

// Prints a result line and keeps it for the report.
void claim(const std::string& line) {
    std::cout << line << "\n";
    report.claims.push_back(line);
}

// Artifacts go under <out-dir>/<scenario hash>/; nothing is written without --out-dir.
void artifact(const Args& a, const Scenario& s, const std::string& file, const std::string& text) {
    if (a.out_dir.empty()) return;
    report.scenario_hash = scenario_hash(s);
    fs::path dir = fs::path(a.out_dir) / report.scenario_hash;
    fs::create_directories(dir);
    write_text_file((dir / file).string(), text);
    report.outputs.push_back(file);
    std::cout << "wrote " << (dir / file).string() << "\n";
}

void write_report(const Args& a, int status) {
    if (a.out_dir.empty()) return;
    std::ostringstream out;
    out << "command " << report.command << "\n";
    if (!report.scenario_hash.empty()) out << "scenario-hash " << report.scenario_hash << "\n";
    for (const auto& o : report.outputs) out << "output " << o << "\n";
    for (const auto& c : report.claims) out << "claim " << c << "\n";
    out << "exit " << status << "\n";
    fs::path dir = fs::path(a.out_dir);
    if (!report.scenario_hash.empty()) dir /= report.scenario_hash;
    fs::create_directories(dir);
    write_text_file((dir / ("report-" + report.command + ".txt")).string(), out.str());
}

// "--class" takes a set name (L_nd, L_{G,ND}, L_ND) or a class pair "g,g".
AtomicSet hull_set(const std::string& text) {
    if (auto comma = text.find(','); comma != std::string::npos && text.find('{') == std::string::npos)
        return AtomicSet::local(parse_response_class(text.substr(0, comma)), parse_response_class(text.substr(comma + 1)));
    auto label = SetLabel::parse(text);
    if (label.parts.size() != 1) throw Error(ErrorKind::Input, "--class takes a single set, got " + text);
    auto set = label.parts.front();
    if (set.kind != AtomicSet::Kind::Local && set.kind != AtomicSet::Kind::LocalNonDisturbing)
        throw Error(ErrorKind::Input, "--class must be a local set (L_{I,J} or L_ND), got " + text);
    return set;
}

std::string file_tag(const AtomicSet& set) {
    std::string out;
    for (char c : to_string(set))
        if (std::isalnum(static_cast<unsigned char>(c))) out += c;
    return out;
}

std::optional<VertexCache> read_cache(const Args& a, const std::string& hash, const std::vector<std::string>& classes) {
    if (a.cache.empty() || !fs::exists(a.cache)) return std::nullopt;
    auto c = parse_vertex_cache(read_text_file(a.cache));
    if (c.scenario_hash != hash || (!classes.empty() && c.classes != classes)) return std::nullopt;
    return c;
}

int run_vertices(const Args& a) {
    auto s = load_scenario(a.scenario);
    DdOptions dd;
    dd.max_rays = a.max_rays;
    std::string hash = scenario_hash(*s);

    std::vector<std::string> classes;
    std::string tag;
    std::function<std::vector<RVector>()> compute;
    if (!a.party.empty()) {
        std::size_t q = s->party_index(a.party);
        auto cls = parse_response_class(a.set_class);
        classes = {a.party, to_string(cls)};
        tag = a.party + "-" + to_string(cls);
        compute = [&, q, cls] {
            std::vector<RVector> out;
            for (auto& f : enumerate_vertices(s->party(q), cls, dd)) out.push_back(std::move(f.values));
            return out;
        };
    } else {
        auto set = hull_set(a.set_class);
        classes = {to_string(set)};
        tag = file_tag(set);
        compute = [&, set] { return set_vertices(s, set, a.workers, dd).vertices; };
    }

    auto cached = read_cache(a, hash, classes);
    VertexCache c = cached ? *cached : VertexCache{hash, classes, compute()};
    if (!cached && !a.cache.empty()) write_text_file(a.cache, serialize_vertex_cache(c));
    claim(std::to_string(c.vertices.size()) + (a.party.empty() ? " joint vertices" : " vertices") + " (" +
          classes.back() + " on " + s->name() + ")" + (cached ? " from cache" : ""));
    std::size_t dim = c.vertices.empty() ? 0 : c.vertices.front().size();
    artifact(a, *s, "vertices-" + tag + ".vrep", serialize_vrep(VRep{dim, c.vertices}));
    return 0;
}

int run_facets(const Args& a) {
    auto s = load_scenario(a.scenario);
    DdOptions dd;
    dd.max_rays = a.max_rays;
    HRep h;
    std::string name;
    if (a.set_class.empty()) {
        // Facets of the joint vertices stored in a cache built by `vertices`.
        auto c = read_cache(a, scenario_hash(*s), {});
        if (!c) throw Error(ErrorKind::Input, "vertex cache " + a.cache + " is missing or was built for another scenario");
        if (c->classes.size() != 1) throw Error(ErrorKind::Input, "vertex cache " + a.cache + " holds single-party vertices");
        name = c->classes.front();
        h = vertices_to_facets(VRep{s->dimension(), c->vertices}, dd);
    } else {
        auto set = hull_set(a.set_class);
        name = to_string(set);
        h = set_facets(s, set, a.workers, dd);
    }
    claim(std::to_string(h.inequalities.size()) + " facets, " + std::to_string(h.equalities.size()) + " equalities (" +
          name + " on " + s->name() + ")");
    std::string tag;
    for (char ch : name)
        if (std::isalnum(static_cast<unsigned char>(ch))) tag += ch;
    artifact(a, *s, "facets-" + tag + ".hrep", serialize_hrep(h));
    if (a.inequality.empty()) return 0;

    auto named = load_inequality(a.inequality, *s);
    bool found = contains_facet(h, LinearConstraint{named.inequality.coeffs, named.inequality.bound});
    claim((named.name.empty() ? a.inequality : named.name) + (found ? " is" : " is not") + " a facet of " + name);
    return found ? 0 : 1;
}

int run_classify(const Args& a) {
    auto s = load_scenario(a.scenario);
    auto b = load_behaviour(a.behaviour, s);
    Classifier classifier(s, a.workers);
    auto report_of = classifier.classify(b, parse_labels(a.labels));
    auto table = report_of.render(*s);
    std::cout << table;
    artifact(a, *s, "classify.report", table);
    for (const auto& atom : report_of.atoms)
        if (atom.certificate)
            artifact(a, *s, "certificate-" + file_tag(atom.set) + ".cert", serialize_certificate(*atom.certificate, *s));
    if (!a.inequality.empty()) {
        auto named = load_inequality(a.inequality, *s);
        claim("value of " + (named.name.empty() ? a.inequality : named.name) + ": " +
              to_string(evaluate(named.inequality, b)) + " (bound " + to_string(named.inequality.bound) + ")");
    }
    return 0;
}

int run_fine(const Args& a) {
    auto s = load_scenario(a.scenario);
    if (!a.joint.empty()) {
        auto w = parse_joint(read_text_file(a.joint), *s);
        auto b = behaviour_from_joint(w, s);
        std::cout << serialize_behaviour_table(b);
        return 0;
    }
    auto set = hull_set(a.set_class.empty() ? "L_nc" : a.set_class);
    if (set.kind != AtomicSet::Kind::Local || set.a != set.b || set.a == ResponseClass::ND)
        throw Error(ErrorKind::Input, "fine models exist for L_nc and L_G only");
    auto b = load_behaviour(a.behaviour, s);
    Certificate separation;
    auto m = local_model(b, set.a, set.b, &separation, a.workers);
    if (!m) {
        std::cout << "no " << to_string(set) << " model; separating inequality:\n"
                  << serialize_certificate(separation, *s);
        return 1;
    }
    auto w = set.a == ResponseClass::NC ? joint_from_nc_decomposition(*s, *m) : joint_from_g_decomposition(*s, *m);
    auto text = serialize_joint(w, *s);
    if (behaviour_from_joint(w, s) != b) throw Error(ErrorKind::Verification, "joint distribution does not reproduce the behaviour");
    std::cout << text;
    artifact(a, *s, "joint-" + file_tag(set) + ".joint", text);
    return 0;
}

std::string format_real(const RealBehaviour& p, const Scenario& s) {
    std::ostringstream out;
    out << std::setprecision(10);
    for (std::size_t i = 0; i < p.size(); ++i) out << coordinate_name(s, i) << " = " << p[i] << "\n";
    return out.str();
}

int run_quantum(const Args& a) {
    auto s = load_scenario(a.scenario);
    std::optional<NamedInequality> named;
    if (!a.inequality.empty()) named = load_inequality(a.inequality, *s);

    if (!a.model.empty()) {
        auto m = parse_quantum_model(read_text_file(a.model), *s);
        auto p = evaluate(m, *s);
        std::cout << format_real(p, *s) << std::setprecision(10) << "ns residual " << ns_residual(p, *s) << "\n";
        for (std::size_t q = 0; q < s->party_count(); ++q)
            std::cout << "nd residual party " << q << " " << nd_residual(p, *s, q) << "\n";
        if (named) std::cout << "value " << value(named->inequality, p) << " (bound " << to_string(named->inequality.bound) << ")\n";
        return 0;
    }
    if (!named) throw Error(ErrorKind::Input, "quantum needs --inequality or --model");
    SearchOptions o;
    o.seed = a.seed;
    o.restarts = a.budget;
    o.dims = a.dims;
    o.workers = a.workers;
    auto r = violation_search(named->inequality, *s, o);
    double bound = named->inequality.bound.get_d();
    std::cout << std::setprecision(10) << "best value " << r.value << " over " << r.restarts_run << " restarts (bound "
              << to_string(named->inequality.bound) << ")" << (r.value > bound + 1e-9 ? ", violated" : "") << "\n";
    std::cout << "ns residual " << ns_residual(r.behaviour, *s) << "\n";
    for (std::size_t q = 0; q < s->party_count(); ++q)
        std::cout << "nd residual party " << q << " " << nd_residual(r.behaviour, *s, q) << "\n";
    artifact(a, *s, "search.model", serialize_quantum_model(r.model, *s));
    return 0;
}

int run_reproduce(const Args& a) {
    SuiteOptions o;
    o.fixtures = a.fixtures;
    o.skip = {a.skip.begin(), a.skip.end()};
    o.seed = a.seed;
    o.restarts = a.budget;
    o.workers = a.workers;
    o.out_dir = a.out_dir;
    bool ok = true;
    for (const auto& r : run_acceptance_suite(o)) {
        std::cout << format_result(r) << std::endl;
        report.claims.push_back(std::string(r.skipped ? "skip " : r.passed ? "pass " : "fail ") + std::to_string(r.id) + " " +
                                r.title + ": " + r.detail);
        ok = ok && (r.passed || r.skipped);
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact classification of behaviours with contextual parties"};
    app.require_subcommand(1);
    Args a;

    auto add_scenario = [&](CLI::App* c) {
        c->add_option("--scenario", a.scenario, "scenario file")->required()->check(CLI::ExistingFile);
    };
    auto add_common = [&](CLI::App* c) {
        c->add_option("--workers", a.workers, "worker threads")->check(CLI::Range(1u, 256u));
        c->add_option("--out-dir", a.out_dir, "directory for artifacts");
    };

    auto* vertices = app.add_subcommand("vertices", "enumerate the vertices of a local set");
    add_scenario(vertices);
    vertices->add_option("--class", a.set_class, "L_{I,J}, L_ND or a class pair such as g,g; with --party nc, nd or g")
        ->required();
    vertices->add_option("--party", a.party, "enumerate one party's response functions");
    vertices->add_option("--cache", a.cache, "vertex cache file (read if it matches, written otherwise)");
    vertices->add_option("--max-rays", a.max_rays, "double description ray cap");
    add_common(vertices);

    auto* facets = app.add_subcommand("facets", "facets of a local set");
    add_scenario(facets);
    auto* fc = facets->add_option("--class", a.set_class, "L_{I,J}, L_ND or a class pair");
    auto* fcache = facets->add_option("--cache", a.cache, "vertex cache written by `vertices`")->check(CLI::ExistingFile);
    fc->excludes(fcache);
    facets->add_option("--inequality", a.inequality, "check that this inequality is a facet")->check(CLI::ExistingFile);
    facets->add_option("--max-rays", a.max_rays, "double description ray cap");
    add_common(facets);

    auto* classify = app.add_subcommand("classify", "decide membership in the set hierarchy");
    add_scenario(classify);
    classify->add_option("--behaviour", a.behaviour, "behaviour table")->required()->check(CLI::ExistingFile);
    classify->add_option("--labels", a.labels, "comma-separated sets or intersections");
    classify->add_option("--inequality", a.inequality, "also evaluate this inequality")->check(CLI::ExistingFile);
    add_common(classify);

    auto* fine = app.add_subcommand("fine", "joint distributions for L_nc and L_G models");
    add_scenario(fine);
    auto* fb = fine->add_option("--behaviour", a.behaviour, "behaviour table")->check(CLI::ExistingFile);
    auto* fj = fine->add_option("--joint", a.joint, "joint distribution to marginalize")->check(CLI::ExistingFile);
    fb->excludes(fj);
    fine->add_option("--class", a.set_class, "L_nc (default) or L_G");
    add_common(fine);

    auto* quantum = app.add_subcommand("quantum", "seesaw search or model evaluation");
    add_scenario(quantum);
    quantum->add_option("--inequality", a.inequality, "inequality to maximize")->check(CLI::ExistingFile);
    quantum->add_option("--model", a.model, "evaluate this quantum model instead")->check(CLI::ExistingFile);
    quantum->add_option("--dims", a.dims, "local dimension per party")->expected(2);
    quantum->add_option("--seed", a.seed, "random seed");
    quantum->add_option("--budget", a.budget, "number of restarts")->check(CLI::Range(1u, 100000u));
    add_common(quantum);

    auto* reproduce = app.add_subcommand("reproduce", "run the reproduction checks");
    reproduce->add_option("--fixtures", a.fixtures, "fixture directory")->check(CLI::ExistingDirectory);
    reproduce->add_option("--skip", a.skip, "item numbers or 'quantum'")->delimiter(',');
    reproduce->add_option("--seed", a.seed, "random seed");
    reproduce->add_option("--budget", a.budget, "restarts for the quantum items")->check(CLI::Range(1u, 100000u));
    add_common(reproduce);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    report.command = app.get_subcommands().front()->get_name();
    int status = 0;
    try {
        if (*vertices) status = run_vertices(a);
        if (*facets) {
            if (a.set_class.empty() && a.cache.empty()) throw Error(ErrorKind::Input, "facets needs --class or --cache");
            status = run_facets(a);
        }
        if (*classify) status = run_classify(a);
        if (*fine) {
            if (a.behaviour.empty() && a.joint.empty()) throw Error(ErrorKind::Input, "fine needs --behaviour or --joint");
            status = run_fine(a);
        }
        if (*quantum) status = run_quantum(a);
        if (*reproduce) status = run_reproduce(a);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        report.claims.push_back(std::string("error ") + e.what());
        status = exit_code_for(e.kind());
    } catch (const std::bad_alloc&) {
        std::cerr << "error (resource): out of memory\n";
        status = 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = 2;
    }
    try {
        write_report(a, status);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (status == 0) status = 2;
    }
    return status;
}
