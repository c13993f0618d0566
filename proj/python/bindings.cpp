#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bonusrank/arrangement.hpp"
#include "bonusrank/baselines.hpp"
#include "bonusrank/core.hpp"
#include "bonusrank/datagen.hpp"
#include "bonusrank/ermb.hpp"
#include "bonusrank/io.hpp"
#include "bonusrank/milp.hpp"
#include "bonusrank/sequence.hpp"
#include "bonusrank/skyline.hpp"

namespace py = pybind11;
using namespace bonusrank;

namespace {

Ranking as_ranking(const std::vector<std::string>& ids) { return Ranking{ids}; }

Quadrant as_quadrant(const std::string& q) {
    if (q == "positive") return Quadrant::Positive;
    if (q == "full") return Quadrant::Full;
    throw ContractError("quadrant must be 'positive' or 'full'");
}

py::dict ermb_dict(const ErmbResult& r) {
    py::dict d;
    d["status"] = to_string(r.status);
    d["explanation"] = r.explanation ? py::cast(*r.explanation) : py::none();
    d["min_k"] = r.min_k ? py::cast(*r.min_k) : py::none();
    d["regions"] = r.regions;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Explain rankings by linear scoring functions with additive group bonuses";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<InvariantError>(m, "InvariantError", base.ptr());
    py::register_exception<DegenerateColumnError>(m, "DegenerateColumnError", PyExc_ValueError);
    py::register_exception<InternalConsistencyError>(m, "InternalConsistencyError", base.ptr());
    py::register_exception<RefusalError>(m, "RefusalError", base.ptr());

    py::class_<Dataset>(m, "Dataset")
        .def(py::init([](std::vector<std::string> ids, const std::vector<std::vector<double>>& rows,
                         std::vector<std::string> attr_names) {
                 return Dataset(std::move(ids), rows, std::move(attr_names));
             }),
             py::arg("ids"), py::arg("rows"), py::arg("attr_names") = std::vector<std::string>{})
        .def_property_readonly("n", &Dataset::n)
        .def_property_readonly("d", &Dataset::d)
        .def_property_readonly("ids", &Dataset::ids)
        .def_property_readonly("attr_names", &Dataset::attr_names)
        .def_property_readonly("planted", &Dataset::planted)
        .def("row", [](const Dataset& ds, std::size_t i) {
            if (i >= ds.n()) throw py::index_error();
            auto r = ds.row(i);
            return std::vector<double>(r.begin(), r.end());
        })
        .def("__len__", &Dataset::n)
        .def_static("read_csv", &read_dataset_csv_file, py::arg("path"))
        .def("write_csv", [](const Dataset& ds, const std::string& path) { write_dataset_csv_file(path, ds); });

    py::class_<Group>(m, "Group")
        .def(py::init([](std::vector<std::string> members, double bonus) { return Group{std::move(members), bonus}; }),
             py::arg("members"), py::arg("bonus"))
        .def_readwrite("members", &Group::members)
        .def_readwrite("bonus", &Group::bonus)
        .def("__repr__", [](const Group& g) {
            return "Group(" + std::to_string(g.members.size()) + " members, bonus=" + format_double(g.bonus) + ")";
        });

    py::class_<Explanation>(m, "Explanation")
        .def(py::init([](std::vector<double> w, std::vector<Group> groups, bool strict, double epsilon) {
                 Explanation e;
                 e.weights = std::move(w);
                 e.groups = std::move(groups);
                 e.regime = strict ? Regime::strict_eps(epsilon) : Regime::non_strict();
                 return e;
             }),
             py::arg("weights"), py::arg("groups") = std::vector<Group>{}, py::arg("strict") = false,
             py::arg("epsilon") = 0.0)
        .def_readwrite("weights", &Explanation::weights)
        .def_readwrite("groups", &Explanation::groups)
        .def_property_readonly("strict", [](const Explanation& e) { return e.regime.strict; })
        .def_property_readonly("epsilon", [](const Explanation& e) { return e.regime.epsilon; })
        .def_property_readonly("solver", [](const Explanation& e) { return e.provenance.solver; })
        .def("bonus_count", &Explanation::bonus_count)
        .def("to_json", [](const Explanation& e) { return explanation_to_json(e); })
        .def_static("from_json", &explanation_from_json)
        .def_static("read", &read_explanation_file, py::arg("path"));

    m.def("read_ranking", [](const std::string& path) { return read_ranking_file(path).order; });

    m.def(
        "verify",
        [](const Dataset& ds, const std::vector<std::string>& pi, const Explanation& e, double tol) {
            auto r = verify_realization(ds, as_ranking(pi), e, tol);
            py::dict d;
            d["ok"] = r.ok;
            d["min_gap"] = r.min_gap;
            d["first_violation"] = r.first_violation ? py::cast(*r.first_violation) : py::none();
            return d;
        },
        py::arg("dataset"), py::arg("ranking"), py::arg("explanation"), py::arg("tol") = kVerifyTol);

    m.def("ranking_from_weights",
          [](const Dataset& ds, const std::vector<double>& w) { return ranking_from_weights(ds, w).order; });

    m.def(
        "explain_singleton",
        [](const Dataset& ds, const std::vector<std::string>& pi, std::size_t k, const std::string& q) {
            return ermb_dict(explain_singleton(ds, as_ranking(pi), k, as_quadrant(q)));
        },
        py::arg("dataset"), py::arg("ranking"), py::arg("k"), py::arg("quadrant") = "positive");

    m.def(
        "explain_multigroup",
        [](const Dataset& ds, const std::vector<std::string>& pi, std::size_t g, std::size_t k, const std::string& q) {
            return ermb_dict(explain_multigroup(ds, as_ranking(pi), g, k, as_quadrant(q)));
        },
        py::arg("dataset"), py::arg("ranking"), py::arg("g"), py::arg("k"), py::arg("quadrant") = "positive");

    m.def(
        "explain_milp",
        [](const Dataset& ds, const std::vector<std::string>& pi, std::size_t g, std::size_t k,
           const std::string& encoding, double epsilon, double vmax, double big_m, bool skyline, double time_limit,
           std::size_t node_limit) {
            Ranking r = as_ranking(pi);
            MilpModel model;
            if (encoding == "refined") {
                std::set<std::string> forced;
                if (skyline)
                    for (const auto& rec : forced_bonus_tuples(ds, r)) forced.insert(rec.forced_id);
                model = encode_refined(ds, r, g, k, epsilon, vmax, forced);
            } else if (encoding == "base") {
                model = encode_base(ds, r, g, k, big_m);
            } else {
                throw ContractError("encoding must be 'refined' or 'base'");
            }
            MilpLimits lim;
            lim.time_limit = time_limit;
            lim.node_limit = node_limit;
            MilpSolution s;
            {
                py::gil_scoped_release release;
                s = solve_bnb(model, lim);
            }
            py::dict d;
            d["status"] = to_string(s.status);
            d["explanation"] = s.status == SolveStatus::Feasible ? py::cast(decode(model, s, ds)) : py::none();
            d["nodes"] = s.node_count;
            d["wall_time"] = s.wall_time;
            return d;
        },
        py::arg("dataset"), py::arg("ranking"), py::arg("g"), py::arg("k"), py::arg("encoding") = "refined",
        py::arg("epsilon") = kDefaultEpsilon, py::arg("vmax") = kDefaultVmax, py::arg("big_m") = kDefaultVmax,
        py::arg("skyline") = true, py::arg("time_limit") = 0.0, py::arg("node_limit") = 0);

    m.def(
        "export_model",
        [](const Dataset& ds, const std::vector<std::string>& pi, std::size_t g, std::size_t k,
           const std::string& encoding, const std::string& format, double epsilon, double vmax, double big_m) {
            Ranking r = as_ranking(pi);
            MilpModel model = encoding == "base" ? encode_base(ds, r, g, k, big_m) : encode_refined(ds, r, g, k, epsilon, vmax);
            return export_model(model, format == "mps" ? ModelFormat::Mps : ModelFormat::Lp);
        },
        py::arg("dataset"), py::arg("ranking"), py::arg("g"), py::arg("k"), py::arg("encoding") = "refined",
        py::arg("format") = "lp", py::arg("epsilon") = kDefaultEpsilon, py::arg("vmax") = kDefaultVmax,
        py::arg("big_m") = kDefaultVmax);

    m.def("forced_bonus_tuples", [](const Dataset& ds, const std::vector<std::string>& pi) {
        std::vector<std::tuple<std::string, std::string, std::size_t>> out;
        for (const auto& r : forced_bonus_tuples(ds, as_ranking(pi))) out.emplace_back(r.forced_id, r.witness_id, r.iteration);
        return out;
    });

    m.def(
        "count_regions",
        [](const Dataset& ds, const std::string& q) {
            std::size_t c = 0;
            enumerate_regions(ds, as_quadrant(q), [&](const SignRegion&) {
                ++c;
                return true;
            });
            return c;
        },
        py::arg("dataset"), py::arg("quadrant") = "positive");

    m.def("lis", [](const std::vector<int>& seq) {
        auto r = lis(seq);
        return py::make_tuple(r.length, r.kept);
    });

    m.def(
        "sampling_baseline",
        [](const Dataset& ds, const std::vector<std::string>& pi, std::size_t samples, std::uint64_t seed,
           const std::string& q) {
            auto r = sampling_baseline(ds, as_ranking(pi), SamplingBudget{samples, 0.0}, seed, as_quadrant(q));
            py::dict d;
            d["weights"] = r.weights;
            d["bonus_count"] = r.bonus_count;
            d["samples_tried"] = r.samples_tried;
            return d;
        },
        py::arg("dataset"), py::arg("ranking"), py::arg("samples"), py::arg("seed") = 0,
        py::arg("quadrant") = "positive");

    m.def(
        "pairwise_logistic",
        [](const Dataset& ds, const std::vector<std::string>& pi, std::size_t iterations, double step,
           const std::string& q) { return pairwise_logistic(ds, as_ranking(pi), iterations, step, as_quadrant(q)); },
        py::arg("dataset"), py::arg("ranking"), py::arg("iterations"), py::arg("step") = 0.1,
        py::arg("quadrant") = "full");

    m.def("bonus_count_for", [](const Dataset& ds, const std::vector<std::string>& pi, const std::vector<double>& w) {
        return bonus_count_for(ds, as_ranking(pi), w);
    });

    m.def(
        "gen_synthetic",
        [](std::size_t n, std::size_t d, std::size_t g, std::size_t k, const std::string& dist, std::uint64_t seed) {
            auto inst = gen_synthetic(n, d, g, k, parse_distribution(dist), seed);
            py::dict out;
            out["dataset"] = inst.dataset;
            out["ranking"] = inst.pi.order;
            out["weights"] = inst.true_weights;
            out["groups"] = inst.true_bonuses;
            out["explanation"] = inst.explanation();
            return out;
        },
        py::arg("n"), py::arg("d"), py::arg("g"), py::arg("k"), py::arg("dist") = "uniform", py::arg("seed") = 0);

    m.def(
        "max1in2sat",
        [](std::size_t n_vars, const std::vector<std::pair<int, int>>& clauses, std::size_t r) {
            TwoCnf f{n_vars, clauses};
            auto inst = reduce_max1in2sat(f, r);
            py::dict out;
            out["dataset"] = inst.dataset;
            out["ranking"] = inst.pi.order;
            out["k_decision"] = inst.k_decision;
            out["ell"] = inst.ell;
            out["oracle_max1in2sat"] = oracle_max1in2sat(f);
            out["oracle_min_bonuses"] = oracle_reduction_min_bonuses(inst);
            return out;
        },
        py::arg("n_vars"), py::arg("clauses"), py::arg("r"));
}
