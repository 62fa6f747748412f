#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "citorder/coupling.hpp"
#include "citorder/eord.hpp"
#include "citorder/error.hpp"
#include "citorder/minij.hpp"
#include "citorder/orders.hpp"
#include "citorder/pmif.hpp"
#include "citorder/report.hpp"
#include "citorder/stats.hpp"
#include "citorder/synth.hpp"

namespace py = pybind11;
using namespace citorder;

namespace {

// Owns the model behind a stable address so Analyzer's back pointer survives
// moves of the wrapper.
class Model {
public:
    explicit Model(ProgramModel model)
        : model_(std::make_unique<ProgramModel>(std::move(model))) {}

    const std::string& name() const { return model_->name; }

    std::vector<std::string> classes() const {
        std::vector<std::string> out;
        for (const auto& cls : model_->classes) out.push_back(cls.name);
        return out;
    }

    std::string to_pmif() const { return save_pmif(*model_); }

    std::string analyze_json(int max_chain_len, bool transitive, double wa,
                             double wm, double wt) const {
        const auto [eord, analyzer] = build(max_chain_len, transitive, wa, wm, wt);
        ordered_json out;
        out["graph"] = graph_json(eord);
        out["stats"] = stats_json(relationship_stats(eord));
        out["chains_by_length"] = chain_length_counts(eord.chains, max_chain_len);
        out["histogram"] = histogram_json(eord.chains);
        out["chains"] = chains_json(eord.chains);
        out["explain"] = explain_json(*analyzer);
        return out.dump(2);
    }

    std::string order_json(const std::string& strategy, int max_chain_len,
                           bool transitive, double wa, double wm, double wt,
                           bool break_any, std::uint64_t cycle_cap,
                           std::uint64_t seed, int iterations,
                           double sa_temp) const {
        const auto [eord, analyzer] = build(max_chain_len, transitive, wa, wm, wt);
        const Weights w{wa, wm, wt};
        TestOrder order;
        if (strategy == "graph") {
            order = graph_based(eord, w, GraphOptions{break_any, cycle_cap});
        } else if (strategy == "feedback") {
            order = multilevel_feedback(eord, w);
        } else if (strategy == "ria") {
            RiaOptions opts;
            opts.seed = seed;
            opts.iterations = iterations;
            opts.sa_temp = sa_temp;
            order = ria(eord, w, opts);
        } else {
            throw InputError("unknown strategy '" + strategy +
                             "' (use graph, feedback, or ria)");
        }
        ordered_json out;
        out["strategy"] = order.strategy;
        out["order"] = order.order;
        out["cost"] = cost_json(ocplx(eord, order.order, w));
        ordered_json stubs = ordered_json::array();
        for (const auto& [from, to] : stub_set(eord, order.order))
            stubs.push_back(ordered_json::array({from, to}));
        out["stubs"] = stubs;
        if (!order.removed_edges.empty()) {
            ordered_json removed = ordered_json::array();
            for (const auto& [from, to] : order.removed_edges)
                removed.push_back(ordered_json::array({from, to}));
            out["removed_edges"] = removed;
        }
        if (order.strategy == "random_iterative") {
            out["seed"] = order.seed;
            out["iterations"] = order.iterations;
            out["accepted_costs"] = order.accepted_costs;
        }
        return out.dump(2);
    }

private:
    std::pair<Eord, std::unique_ptr<Analyzer>> build(int max_chain_len,
                                                     bool transitive, double wa,
                                                     double wm,
                                                     double wt) const {
        EordOptions opts;
        opts.max_chain_len = max_chain_len;
        opts.transitive = transitive;
        opts.weights = Weights{wa, wm, wt};
        validate_weights(opts.weights);
        auto analyzer = std::make_unique<Analyzer>(*model_);
        Eord eord = build_eord(*model_, *analyzer, opts);
        return {std::move(eord), std::move(analyzer)};
    }

    std::unique_ptr<ProgramModel> model_;
};

Model parse_minij_sources(const std::vector<std::string>& sources,
                          const std::string& name) {
    std::vector<minij::Unit> units;
    for (std::size_t i = 0; i < sources.size(); ++i)
        units.push_back(minij::parse_unit(
            sources[i], "<source " + std::to_string(i + 1) + ">"));
    return Model(minij::lower(units, name));
}

std::string wilcoxon_json_str(const std::vector<double>& a,
                              const std::vector<double>& b, double alpha) {
    return wilcoxon_json(wilcoxon_signed_rank(a, b, alpha)).dump(2);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "class integration test order analysis";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);

    py::class_<Model>(m, "Model")
        .def_property_readonly("name", &Model::name)
        .def_property_readonly("classes", &Model::classes)
        .def("to_pmif", &Model::to_pmif)
        .def("analyze_json", &Model::analyze_json, py::arg("max_chain_len") = 3,
             py::arg("transitive") = true, py::arg("wa") = 1.0 / 3.0,
             py::arg("wm") = 1.0 / 3.0, py::arg("wt") = 1.0 / 3.0)
        .def("order_json", &Model::order_json, py::arg("strategy"),
             py::arg("max_chain_len") = 3, py::arg("transitive") = true,
             py::arg("wa") = 1.0 / 3.0, py::arg("wm") = 1.0 / 3.0,
             py::arg("wt") = 1.0 / 3.0, py::arg("break_any") = false,
             py::arg("cycle_cap") = std::uint64_t{1000000},
             py::arg("seed") = std::uint64_t{0}, py::arg("iterations") = 1000,
             py::arg("sa_temp") = 0.0);

    m.def(
        "load_pmif",
        [](const std::string& text) { return Model(load_pmif(text)); },
        py::arg("text"));
    m.def(
        "load_pmif_file",
        [](const std::string& path) { return Model(load_pmif_file(path)); },
        py::arg("path"));
    m.def("parse_minij", &parse_minij_sources, py::arg("sources"),
          py::arg("name") = "model");
    m.def(
        "generate",
        [](int classes, double edge_density, double branch_density,
           double chain_fraction, std::uint64_t seed) {
            SynthSpec spec;
            spec.classes = classes;
            spec.edge_density = edge_density;
            spec.branch_density = branch_density;
            spec.chain_fraction = chain_fraction;
            spec.seed = seed;
            return Model(generate_synthetic(spec));
        },
        py::arg("classes"), py::arg("edge_density") = 0.25,
        py::arg("branch_density") = 0.5, py::arg("chain_fraction") = 0.5,
        py::arg("seed") = std::uint64_t{0});
    m.def("wilcoxon_json", &wilcoxon_json_str, py::arg("a"), py::arg("b"),
          py::arg("alpha") = 0.05);
}
