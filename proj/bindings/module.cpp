#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cibench/dataset.hpp"
#include "cibench/gan.hpp"
#include "cibench/harness.hpp"
#include "cibench/metrics.hpp"

namespace py = pybind11;
using namespace cibench;

namespace {

Matrix matrix_from_rows(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.push_row(r);
    return m;
}

std::vector<std::vector<double>> matrix_to_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows[i].assign(m.row(i).begin(), m.row(i).end());
    return rows;
}

py::dict summary_to_dict(const RunSummary& summary) {
    py::dict metrics;
    for (const auto& [name, stat] : summary.metrics) {
        py::dict s;
        s["mean"] = stat.mean;
        s["best"] = stat.best;
        s["std"] = stat.stddev;
        metrics[py::str(name)] = s;
    }
    py::dict out;
    out["dataset"] = summary.dataset;
    out["augmenter"] = summary.augmenter;
    out["model"] = summary.model;
    out["metrics"] = metrics;
    out["n_ok"] = summary.n_ok;
    out["n_err"] = summary.n_err;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "imbalanced-classification toolkit: datasets, augmenters, ensemble learners, "
              "metrics and the benchmark grid";

    py::register_exception<Error>(m, "CibenchError");

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("name", &Dataset::name)
        .def_readonly("y", &Dataset::y)
        .def_readonly("class_names", &Dataset::class_names)
        .def_readonly("positive_class", &Dataset::positive_class)
        .def_property_readonly("X", [](const Dataset& ds) { return matrix_to_rows(ds.X); })
        .def_property_readonly("n_classes", &Dataset::n_classes)
        .def("__len__", &Dataset::size);

    py::class_<Catalog>(m, "Catalog")
        .def(py::init<const std::string&, const std::string&>(), py::arg("catalog_path"),
             py::arg("data_dir"))
        .def("names", &Catalog::names)
        .def("materialize", &Catalog::materialize);

    m.def("imbalance_ratio", &imbalance_ratio);

    m.def(
        "split",
        [](const Dataset& ds, double train_fraction, std::int64_t seed) {
            SplitPair pair = split(ds, train_fraction, seed);
            return py::make_tuple(pair.train, pair.test);
        },
        py::arg("dataset"), py::arg("train_fraction") = 0.6, py::arg("seed") = 0);

    m.def(
        "augment",
        [](const Dataset& train, const std::string& method, std::uint64_t seed, std::size_t k,
           std::size_t gan_epochs) {
            AugmenterSpec spec;
            spec.method = augment_method_from_string(method);
            spec.seed = seed;
            spec.smote_k = k;
            spec.adasyn_k = k;
            spec.gan_epochs = gan_epochs;
            ResampledTrain res = augment(train, spec);
            std::vector<std::string> tags(res.y.size());
            for (std::size_t i = 0; i < res.y.size(); ++i) {
                switch (res.provenance[i].origin) {
                    case RowOrigin::Original: tags[i] = "original"; break;
                    case RowOrigin::Duplicate: tags[i] = "duplicate"; break;
                    case RowOrigin::Synthetic: tags[i] = "synthetic"; break;
                }
            }
            return py::make_tuple(matrix_to_rows(res.X), res.y, tags);
        },
        py::arg("train"), py::arg("method"), py::arg("seed") = 0, py::arg("k") = 5,
        py::arg("gan_epochs") = 300);

    py::class_<Classifier>(m, "Classifier")
        .def("fit",
             [](Classifier& self, const std::vector<std::vector<double>>& X, const Labels& y,
                int n_classes) { self.fit(matrix_from_rows(X), y, n_classes); })
        .def("predict_proba",
             [](const Classifier& self, const std::vector<double>& x) {
                 return self.predict_proba(x);
             })
        .def("predict",
             [](const Classifier& self, const std::vector<double>& x) { return self.predict(x); })
        .def("predict_batch", [](const Classifier& self, const std::vector<std::vector<double>>& X) {
            return self.predict_batch(matrix_from_rows(X));
        });

    m.def(
        "make_model",
        [](const std::string& kind, std::uint64_t seed) {
            ModelSpec spec;
            spec.kind = model_kind_from_string(kind);
            spec.seed = seed;
            return make_classifier(spec);
        },
        py::arg("kind"), py::arg("seed") = 0);

    m.def("model_kinds", [] {
        std::vector<std::string> kinds;
        for (const auto& arm : default_model_arms()) kinds.push_back(arm.name);
        return kinds;
    });
    m.def("augmenter_names", [] {
        std::vector<std::string> names;
        for (const auto& arm : default_augmenter_arms()) names.push_back(arm.name);
        return names;
    });

    m.def("roc_auc_binary", &roc_auc_binary, py::arg("y_true"), py::arg("scores"));
    m.def(
        "score_predictions",
        [](const Labels& y_true, const Labels& y_pred,
           const std::vector<std::vector<double>>& proba, int n_classes, int positive_class) {
            MetricsRecord rec = score_predictions(y_true, y_pred, matrix_from_rows(proba),
                                                  n_classes, positive_class);
            py::dict out;
            for (const auto& [k, v] : rec.values) out[py::str(k)] = v;
            return out;
        },
        py::arg("y_true"), py::arg("y_pred"), py::arg("proba"), py::arg("n_classes"),
        py::arg("positive_class") = 1);

    m.def(
        "run_cell",
        [](const Dataset& ds, const std::string& augmenter, const std::string& model,
           std::size_t n_runs, std::uint64_t base_seed) {
            CellResult cell = run_cell(ds, make_augmenter_arm(augmenter), make_model_arm(model),
                                       n_runs, base_seed);
            return summary_to_dict(cell.summary);
        },
        py::arg("dataset"), py::arg("augmenter"), py::arg("model"), py::arg("n_runs") = 5,
        py::arg("base_seed") = 42);
}
