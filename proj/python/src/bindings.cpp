// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
// Python bindings. Exact numbers cross the boundary as strings ("3/4"); the
// Python package turns them into fractions.Fraction.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <random>

#include "extbell/fine.hpp"
#include "extbell/io.hpp"
#include "extbell/quantum.hpp"
#include "extbell/sets.hpp"

namespace py = pybind11;
using namespace extbell;

namespace {

using Strings = std::vector<std::string>;

Strings to_strings(const RVector& v) {
    Strings out;
    out.reserve(v.size());
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

RVector to_rationals(const Strings& v) {
    RVector out;
    out.reserve(v.size());
    for (const auto& s : v) out.push_back(parse_rational(s));
    return out;
}

Behaviour behaviour(const ScenarioPtr& s, const Strings& values) { return Behaviour(s, to_rationals(values)); }

py::list constraints(const std::vector<LinearConstraint>& rows) {
    py::list out;
    for (const auto& r : rows) out.append(py::make_tuple(to_strings(r.coeffs), to_string(r.rhs)));
    return out;
}

py::dict hrep_dict(const HRep& h) {
    py::dict d;
    d["dimension"] = h.dimension;
    d["equalities"] = constraints(h.equalities);
    d["inequalities"] = constraints(h.inequalities);
    return d;
}

AtomicSet single_set(const std::string& label) {
    auto l = SetLabel::parse(label);
    if (l.parts.size() != 1) throw Error(ErrorKind::Input, "expected a single set, got " + label);
    return l.parts.front();
}

}  // namespace

PYBIND11_MODULE(_extbell, m) {
    m.doc() = "Exact computations on behaviours of sequential-measurement Bell scenarios.";

    static py::exception<Error> error(m, "ExtbellError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(to_string(e.kind())) + ": " + e.what()).c_str());
        }
    });

    py::class_<Scenario, std::shared_ptr<Scenario>>(m, "Scenario")
        .def_static("from_text", [](const std::string& text) { return std::make_shared<Scenario>(parse_scenario(text)); })
        .def_static("from_file", [](const std::string& path) {
            return std::make_shared<Scenario>(parse_scenario(read_text_file(path)));
        })
        .def_property_readonly("name", &Scenario::name)
        .def_property_readonly("dimension", &Scenario::dimension)
        .def_property_readonly("parties", [](const Scenario& s) {
            Strings out;
            for (const auto& p : s.parties()) out.push_back(p.id());
            return out;
        })
        .def_property_readonly("hash", [](const Scenario& s) { return scenario_hash(s); })
        .def("coordinate_names", [](const Scenario& s) {
            Strings out;
            for (std::size_t i = 0; i < s.dimension(); ++i) out.push_back(coordinate_name(s, i));
            return out;
        })
        .def("coordinate", [](const Scenario& s, const std::string& row, const std::string& column) {
            return coordinate_of(s, row, column);
        })
        .def("to_text", [](const Scenario& s) { return serialize_scenario(s); })
        .def("__eq__", [](const Scenario& a, const Scenario& b) { return a == b; });

    m.def("parse_table", [](const std::shared_ptr<Scenario>& s, const std::string& text) {
        return to_strings(parse_behaviour_table(text, s).values());
    }, py::arg("scenario"), py::arg("text"));

    m.def("table_text", [](const std::shared_ptr<Scenario>& s, const Strings& values) {
        return serialize_behaviour_table(behaviour(s, values));
    }, py::arg("scenario"), py::arg("values"));

    m.def("classify", [](const std::shared_ptr<Scenario>& s, const Strings& values, const std::string& labels) {
        auto list = parse_labels(labels);
        auto r = classify(behaviour(s, values), list);
        check_inclusions(r);
        py::dict verdicts;
        for (const auto& l : list) verdicts[py::str(l.str())] = r.member(l);
        return py::make_tuple(verdicts, r.render(*s));
    }, py::arg("scenario"), py::arg("values"), py::arg("labels"));

    m.def("joint_vertices", [](const std::shared_ptr<Scenario>& s, const std::string& a, const std::string& b) {
        std::vector<Strings> out;
        for (const auto& v : behaviour_vectors(joint_vertices(parse_response_class(a), parse_response_class(b), *s)))
            out.push_back(to_strings(v));
        return out;
    }, py::arg("scenario"), py::arg("class_a"), py::arg("class_b"));

    m.def("party_vertices", [](const std::shared_ptr<Scenario>& s, const std::string& party, const std::string& cls) {
        std::vector<Strings> out;
        for (const auto& f : enumerate_vertices(s->party(s->party_index(party)), parse_response_class(cls)))
            out.push_back(to_strings(f.values));
        return out;
    }, py::arg("scenario"), py::arg("party"), py::arg("cls"));

    m.def("set_facets", [](const std::shared_ptr<Scenario>& s, const std::string& label) {
        return hrep_dict(set_facets(s, single_set(label)));
    }, py::arg("scenario"), py::arg("label"));

    m.def("evaluate_inequality", [](const std::shared_ptr<Scenario>& s, const std::string& text, const Strings& values) {
        auto f = parse_inequality(text, *s);
        return py::make_tuple(f.name, to_string(evaluate(f.inequality, behaviour(s, values))), to_string(f.inequality.bound));
    }, py::arg("scenario"), py::arg("inequality"), py::arg("values"));

    m.def("local_joint", [](const std::shared_ptr<Scenario>& s, const Strings& values, const std::string& cls) -> py::object {
        auto c = parse_response_class(cls);
        auto model = local_model(behaviour(s, values), c, c);
        if (!model) return py::none();
        auto w = c == ResponseClass::NC ? joint_from_nc_decomposition(*s, *model) : joint_from_g_decomposition(*s, *model);
        return py::str(serialize_joint(w, *s));
    }, py::arg("scenario"), py::arg("values"), py::arg("cls"));

    m.def("quantum_behaviour", [](const std::shared_ptr<Scenario>& s, const std::string& model) {
        return evaluate(parse_quantum_model(model, *s), *s);
    }, py::arg("scenario"), py::arg("model"));

    m.def("violation_search", [](const std::shared_ptr<Scenario>& s, const std::string& inequality, std::uint64_t seed,
                                 unsigned restarts, std::vector<std::size_t> dims) {
        SearchOptions o;
        o.seed = seed;
        o.restarts = restarts;
        o.dims = std::move(dims);
        SearchResult r;
        {
            py::gil_scoped_release release;
            r = violation_search(parse_inequality(inequality, *s).inequality, *s, o);
        }
        return py::make_tuple(r.value, serialize_quantum_model(r.model, *s));
    }, py::arg("scenario"), py::arg("inequality"), py::arg("seed") = 1, py::arg("restarts") = 16,
       py::arg("dims") = std::vector<std::size_t>{});

    m.def("rationalize", [](const std::shared_ptr<Scenario>& s, const std::vector<double>& p) -> py::object {
        auto b = rationalize(p, s);
        if (!b) return py::none();
        return py::cast(to_strings(b->values()));
    }, py::arg("scenario"), py::arg("probabilities"));
}
