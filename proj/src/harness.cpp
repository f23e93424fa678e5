#include "cibench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "cibench/ini.hpp"
#include "cibench/metrics.hpp"

namespace cibench {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Default arms (published hyperparameters)
// ---------------------------------------------------------------------------

AugmenterArm make_augmenter_arm(const std::string& name) {
    AugmenterArm arm;
    arm.name = name;
    arm.spec.method = augment_method_from_string(name);
    return arm;
}

ModelArm make_model_arm(const std::string& name) {
    ModelArm arm;
    arm.name = name;
    arm.spec.kind = model_kind_from_string(name);
    return arm;
}

std::vector<AugmenterArm> default_augmenter_arms() {
    std::vector<AugmenterArm> arms;
    for (const char* name : {"none", "ros", "rus", "smote", "smote_enn", "borderline_smote",
                             "svm_smote", "kmeans_smote", "adasyn", "ctgan"})
        arms.push_back(make_augmenter_arm(name));
    return arms;
}

std::vector<ModelArm> default_model_arms() {
    std::vector<ModelArm> arms;
    for (const char* name : {"histgbm", "adaboost", "xgbm", "gbm", "forest", "voting_i_hard",
                             "voting_i_soft", "stacking_i", "stacking_ii"})
        arms.push_back(make_model_arm(name));
    return arms;
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

namespace {

void apply_augmenter_param(AugmenterSpec& spec, const std::string& method,
                           const std::string& param, const std::string& value) {
    auto num = [&] { return to_double(value, method + "." + param); };
    auto count = [&] { return static_cast<std::size_t>(to_int(value, method + "." + param)); };
    if (method == "smote" || method == "smote_enn" || method == "borderline_smote" ||
        method == "svm_smote" || method == "kmeans_smote") {
        if (param == "k_neighbors") {
            if (method == "kmeans_smote") spec.kmeans_k = count();
            else spec.smote_k = count();
            return;
        }
    }
    if (method == "smote_enn" && param == "enn_neighbors") { spec.enn_k = count(); return; }
    if ((method == "borderline_smote" || method == "svm_smote") && param == "m_neighbors") {
        spec.m_neighbors = count();
        return;
    }
    if (method == "svm_smote") {
        if (param == "out_step") { spec.out_step = num(); return; }
        if (param == "c") { spec.svm_c = num(); return; }
    }
    if (method == "kmeans_smote") {
        if (param == "n_clusters") { spec.kmeans_clusters = count(); return; }
        if (param == "cluster_balance_threshold") { spec.kmeans_balance_threshold = num(); return; }
    }
    if (method == "adasyn" && param == "n_neighbors") { spec.adasyn_k = count(); return; }
    if (method == "ctgan") {
        if (param == "epochs") { spec.gan_epochs = count(); return; }
        if (param == "batch") { spec.gan_batch = count(); return; }
        if (param == "noise_dim") { spec.gan_noise_dim = count(); return; }
        if (param == "step_size") { spec.gan_step = num(); return; }
        if (param == "trace_path") { spec.gan_trace_path = value; return; }
    }
    throw ConfigError("unknown augmenter parameter '" + method + "." + param + "'");
}

void apply_model_param(ModelSpec& spec, const std::string& model, const std::string& param,
                       const std::string& value) {
    auto num = [&] { return to_double(value, model + "." + param); };
    auto count = [&] { return static_cast<std::size_t>(to_int(value, model + "." + param)); };
    auto depth = [&] { return static_cast<int>(to_int(value, model + "." + param)); };
    if (model == "forest") {
        if (param == "n_estimators") { spec.forest.n_trees = count(); return; }
        if (param == "max_depth") { spec.forest.max_depth = depth(); return; }
    }
    if (model == "knn" && param == "k") { spec.knn.k = count(); return; }
    if (model == "adaboost") {
        if (param == "n_estimators") { spec.adaboost.n_rounds = count(); return; }
        if (param == "learning_rate") { spec.adaboost.learning_rate = num(); return; }
    }
    if (model == "gbm") {
        if (param == "n_estimators") { spec.gbm.n_stages = count(); return; }
        if (param == "learning_rate") { spec.gbm.learning_rate = num(); return; }
        if (param == "max_depth") { spec.gbm.max_depth = depth(); return; }
        if (param == "min_samples_split") { spec.gbm.min_split = count(); return; }
        if (param == "min_samples_leaf") { spec.gbm.min_leaf = count(); return; }
    }
    if (model == "xgbm") {
        if (param == "n_estimators") { spec.xgb.n_rounds = count(); return; }
        if (param == "eta") { spec.xgb.eta = num(); return; }
        if (param == "lambda") { spec.xgb.lambda = num(); return; }
        if (param == "gamma") { spec.xgb.gamma_leaf = num(); return; }
        if (param == "max_depth") { spec.xgb.max_depth = depth(); return; }
        if (param == "min_child_weight") { spec.xgb.min_child_weight = num(); return; }
    }
    if (model == "histgbm") {
        if (param == "n_estimators") { spec.hist.n_rounds = count(); return; }
        if (param == "learning_rate") { spec.hist.learning_rate = num(); return; }
        if (param == "num_leaves") { spec.hist.num_leaves = count(); return; }
        if (param == "max_bin") { spec.hist.max_bin = count(); return; }
        if (param == "min_data_in_leaf") { spec.hist.min_data_in_leaf = count(); return; }
        if (param == "goss_a") { spec.hist.goss_a = num(); return; }
        if (param == "goss_b") { spec.hist.goss_b = num(); return; }
    }
    if (model == "stacking" && param == "n_folds") { spec.stacking_folds = count(); return; }
    if (model == "cart") {
        if (param == "max_depth") { spec.cart.max_depth = depth(); return; }
        if (param == "min_samples_leaf") { spec.cart.min_leaf = count(); return; }
    }
    throw ConfigError("unknown model parameter '" + model + "." + param + "'");
}

}  // namespace

GridConfig load_grid_config(const std::string& path) {
    IniFile ini = parse_ini(path);
    GridConfig cfg;

    if (const IniSection* run = ini.find("run")) {
        if (run->has("runs")) cfg.n_runs = static_cast<std::size_t>(to_int(run->get("runs"), "runs"));
        if (run->has("base_seed"))
            cfg.base_seed = static_cast<std::uint64_t>(to_int(run->get("base_seed"), "base_seed"));
        if (run->has("train_fraction"))
            cfg.train_fraction = to_double(run->get("train_fraction"), "train_fraction");
        if (run->has("out")) cfg.out_dir = run->get("out");
        if (run->has("threads"))
            cfg.threads = static_cast<std::size_t>(to_int(run->get("threads"), "threads"));
        if (run->has("skip_ctgan")) cfg.skip_ctgan = to_bool(run->get("skip_ctgan"), "skip_ctgan");
        if (run->has("persist_runs"))
            cfg.persist_runs = to_bool(run->get("persist_runs"), "persist_runs");
    }
    if (const IniSection* ds = ini.find("datasets")) {
        if (ds->has("catalog")) cfg.catalog_path = ds->get("catalog");
        if (ds->has("data_dir")) cfg.data_dir = ds->get("data_dir");
        if (ds->has("use")) cfg.dataset_names = split_list(ds->get("use"));
    }

    if (const IniSection* aug = ini.find("augmenters")) {
        std::vector<std::string> use =
            aug->has("use") ? split_list(aug->get("use")) : std::vector<std::string>{};
        std::vector<AugmenterArm> arms;
        if (use.empty()) arms = default_augmenter_arms();
        else
            for (const auto& name : use) arms.push_back(make_augmenter_arm(name));
        for (const auto& [key, value] : aug->entries) {
            if (key == "use") continue;
            std::size_t dot = key.find('.');
            if (dot == std::string::npos)
                throw ConfigError("[augmenters] keys look like method.param; got '" + key + "'");
            std::string method = key.substr(0, dot), param = key.substr(dot + 1);
            for (auto& arm : arms)
                if (arm.name == method) apply_augmenter_param(arm.spec, method, param, value);
        }
        cfg.augmenters = std::move(arms);
    } else {
        cfg.augmenters = default_augmenter_arms();
    }

    if (const IniSection* mdl = ini.find("models")) {
        std::vector<std::string> use =
            mdl->has("use") ? split_list(mdl->get("use")) : std::vector<std::string>{};
        std::vector<ModelArm> arms;
        if (use.empty()) arms = default_model_arms();
        else
            for (const auto& name : use) arms.push_back(make_model_arm(name));
        for (const auto& [key, value] : mdl->entries) {
            if (key == "use") continue;
            std::size_t dot = key.find('.');
            if (dot == std::string::npos)
                throw ConfigError("[models] keys look like model.param; got '" + key + "'");
            std::string model = key.substr(0, dot), param = key.substr(dot + 1);
            // every arm carries the full parameter record, so pool members
            // (voting/stacking) pick up base-learner settings too
            for (auto& arm : arms) apply_model_param(arm.spec, model, param, value);
        }
        cfg.models = std::move(arms);
    } else {
        cfg.models = default_model_arms();
    }

    return cfg;
}

std::string grid_config_signature(const GridConfig& cfg) {
    std::stringstream sig;
    sig << cfg.n_runs << "|" << cfg.base_seed << "|" << cfg.train_fraction << "|"
        << cfg.skip_ctgan;
    for (const auto& n : cfg.dataset_names) sig << "|" << n;
    for (const auto& a : cfg.augmenters) sig << "|" << a.name;
    for (const auto& m : cfg.models) sig << "|" << m.name;
    char hex[32];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(hash_str(sig.str())));
    return hex;
}

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

const RunSummary* ResultTable::find(const std::string& dataset, const std::string& augmenter,
                                    const std::string& model) const {
    for (const auto& row : rows)
        if (row.dataset == dataset && row.augmenter == augmenter && row.model == model)
            return &row;
    return nullptr;
}

CellResult run_cell(const Dataset& ds, const AugmenterArm& augmenter, const ModelArm& model,
                    std::size_t n_runs, std::uint64_t base_seed, double train_fraction) {
    CellResult cell;
    cell.summary.dataset = ds.name;
    cell.summary.augmenter = augmenter.name;
    cell.summary.model = model.name;

    std::string cell_id = ds.name + "|" + augmenter.name + "|" + model.name;
    std::uint64_t cell_hash = hash_str(cell_id);

    for (std::size_t r = 0; r < n_runs; ++r) {
        RunRecord record;
        record.run = r;
        record.seed = mix_seed(mix_seed(base_seed, cell_hash), r);
        try {
            SplitPair parts = split(ds, train_fraction, static_cast<std::int64_t>(record.seed));

            AugmenterSpec aug = augmenter.spec;
            aug.seed = mix_seed(record.seed, 0xa06);
            ResampledTrain resampled = augment(parts.train, aug);
            Dataset train = to_dataset(parts.train, resampled);

            ModelSpec mspec = model.spec;
            mspec.seed = mix_seed(record.seed, 0x30de1);
            ClassifierPtr learner = make_classifier(mspec);
            learner->fit(train.X, train.y, ds.n_classes());

            Matrix proba = learner->predict_proba_batch(parts.test.X);
            Labels pred(parts.test.size());
            for (std::size_t i = 0; i < parts.test.size(); ++i)
                pred[i] = argmax_lowest(proba.row(i));

            MetricsRecord metrics = score_predictions(parts.test.y, pred, proba, ds.n_classes(),
                                                      ds.positive_class);
            record.metrics = metrics.values;
            record.ok = true;
        } catch (const Error& e) {
            record.ok = false;
            record.error = e.what();
        }
        cell.runs.push_back(std::move(record));
    }

    // aggregate over the non-errored runs only
    std::map<std::string, std::vector<double>> series;
    for (const auto& record : cell.runs) {
        if (!record.ok) {
            cell.summary.n_err++;
            cell.summary.errors.push_back(record.error);
            continue;
        }
        cell.summary.n_ok++;
        for (const auto& [key, value] : record.metrics) series[key].push_back(value);
    }
    for (const auto& [key, values] : series) {
        MetricStat stat;
        double sum = 0.0;
        stat.best = values.front();
        for (double v : values) {
            sum += v;
            stat.best = std::max(stat.best, v);
        }
        stat.mean = sum / static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - stat.mean) * (v - stat.mean);
        stat.stddev = std::sqrt(var / static_cast<double>(values.size()));
        cell.summary.metrics[key] = stat;
    }
    return cell;
}

ResultTable run_grid(const GridConfig& config) {
    Catalog catalog(config.catalog_path, config.data_dir);

    std::vector<std::string> names = config.dataset_names;
    if (names.empty()) names = catalog.names();

    std::vector<Dataset> datasets;
    for (const auto& name : names) {
        // allow "Glass-*" style family patterns
        if (!name.empty() && name.back() == '*') {
            std::string prefix = name.substr(0, name.size() - 1);
            for (const auto& rn : catalog.names())
                if (rn.rfind(prefix, 0) == 0) datasets.push_back(catalog.materialize(rn));
        } else {
            datasets.push_back(catalog.materialize(name));
        }
    }

    struct CellJob {
        std::size_t dataset;
        std::size_t augmenter;
        std::size_t model;
    };
    std::vector<CellJob> jobs;
    for (std::size_t d = 0; d < datasets.size(); ++d)
        for (std::size_t a = 0; a < config.augmenters.size(); ++a) {
            if (config.skip_ctgan && config.augmenters[a].spec.method == AugmentMethod::Ctgan)
                continue;
            for (std::size_t m = 0; m < config.models.size(); ++m) jobs.push_back({d, a, m});
        }

    std::vector<CellResult> cells(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const CellJob& job = jobs[i];
            cells[i] = run_cell(datasets[job.dataset], config.augmenters[job.augmenter],
                                config.models[job.model], config.n_runs, config.base_seed,
                                config.train_fraction);
        }
    };
    std::size_t n_threads = std::max<std::size_t>(1, config.threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    ResultTable table;
    table.base_seed = config.base_seed;
    table.config_hash = grid_config_signature(config);
    if (config.persist_runs) {
        for (const auto& cell : cells) persist_run_records(cell, config.out_dir + "/runs");
    }
    for (auto& cell : cells) table.rows.push_back(std::move(cell.summary));

    // dataset blocks in config order, best mean accuracy first inside a block
    std::map<std::string, std::size_t> dataset_order;
    for (std::size_t d = 0; d < datasets.size(); ++d)
        dataset_order.emplace(datasets[d].name, d);
    std::stable_sort(table.rows.begin(), table.rows.end(),
                     [&](const RunSummary& a, const RunSummary& b) {
                         std::size_t da = dataset_order[a.dataset], db = dataset_order[b.dataset];
                         if (da != db) return da < db;
                         const MetricStat* ma = a.metric("accuracy");
                         const MetricStat* mb = b.metric("accuracy");
                         double va = ma ? ma->mean : -1.0, vb = mb ? mb->mean : -1.0;
                         return va > vb;
                     });
    return table;
}

// ---------------------------------------------------------------------------
// Rankings
// ---------------------------------------------------------------------------

namespace {

bool dataset_in_family(const std::string& dataset, const std::string& family) {
    if (family.empty()) return true;
    std::string lower_ds, lower_fam;
    for (char c : dataset) lower_ds += static_cast<char>(std::tolower(c));
    for (char c : family) lower_fam += static_cast<char>(std::tolower(c));
    return lower_ds.rfind(lower_fam, 0) == 0;
}

std::vector<RankEntry> rank_axis(const ResultTable& table, const std::string& family,
                                 const std::string& metric, bool rank_augmenters_axis,
                                 const std::string& fixed) {
    std::set<std::string> datasets;
    std::vector<std::string> axis;  // in first-appearance order
    for (const auto& row : table.rows) {
        if (!dataset_in_family(row.dataset, family)) continue;
        const std::string& fixed_name = rank_augmenters_axis ? row.model : row.augmenter;
        if (fixed_name != fixed) continue;
        datasets.insert(row.dataset);
        const std::string& name = rank_augmenters_axis ? row.augmenter : row.model;
        if (std::find(axis.begin(), axis.end(), name) == axis.end()) axis.push_back(name);
    }
    if (datasets.empty() || axis.empty())
        throw RankError("no rows for family '" + family + "' with fixed arm '" + fixed + "'");

    std::vector<RankEntry> out;
    for (const auto& name : axis) {
        std::vector<double> values;
        for (const auto& ds : datasets) {
            const RunSummary* row = rank_augmenters_axis ? table.find(ds, name, fixed)
                                                         : table.find(ds, fixed, name);
            if (!row)
                throw RankError("missing cell (" + ds + ", " +
                                (rank_augmenters_axis ? name + ", " + fixed
                                                      : fixed + ", " + name) +
                                ")");
            const MetricStat* stat = row->metric(metric);
            if (!stat)
                throw RankError("cell (" + ds + ", " + name + ") lacks metric '" + metric + "'");
            values.push_back(stat->mean);
        }
        RankEntry entry;
        entry.name = name;
        double sum = 0.0;
        for (double v : values) sum += v;
        entry.mean = sum / static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - entry.mean) * (v - entry.mean);
        entry.stddev = std::sqrt(var / static_cast<double>(values.size()));
        out.push_back(entry);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RankEntry& a, const RankEntry& b) { return a.mean > b.mean; });
    return out;
}

}  // namespace

std::vector<RankEntry> rank_augmenters(const ResultTable& table, const std::string& family,
                                       const std::string& fixed_model, const std::string& metric) {
    return rank_axis(table, family, metric, true, fixed_model);
}

std::vector<RankEntry> rank_models(const ResultTable& table, const std::string& family,
                                   const std::string& fixed_augmenter, const std::string& metric) {
    return rank_axis(table, family, metric, false, fixed_augmenter);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

void emit_csv(const ResultTable& table, const std::string& path) {
    if (table.rows.empty()) throw IoError("emit_csv: empty table");
    fs::create_directories(fs::path(path).parent_path().empty()
                               ? "."
                               : fs::path(path).parent_path().string());
    std::ofstream out(path);
    if (!out) throw IoError("emit_csv: cannot write " + path);
    out << "dataset,augmenter,model,metric,mean,best,std,n_ok,n_err\n";
    for (const auto& row : table.rows)
        for (const auto& [metric, stat] : row.metrics)
            out << row.dataset << "," << row.augmenter << "," << row.model << "," << metric << ","
                << format_value(stat.mean) << "," << format_value(stat.best) << ","
                << format_value(stat.stddev) << "," << row.n_ok << "," << row.n_err << "\n";
}

ResultTable parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != "dataset,augmenter,model,metric,mean,best,std,n_ok,n_err")
        throw IoError("parse_csv: unexpected header in " + path);

    ResultTable table;
    std::map<std::string, std::size_t> row_of;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto fields = split_list(line, ',');
        if (fields.size() != 9)
            throw IoError("parse_csv:" + std::to_string(lineno) + ": expected 9 fields");
        std::string key = fields[0] + "|" + fields[1] + "|" + fields[2];
        auto it = row_of.find(key);
        if (it == row_of.end()) {
            RunSummary row;
            row.dataset = fields[0];
            row.augmenter = fields[1];
            row.model = fields[2];
            row.n_ok = static_cast<std::size_t>(to_int(fields[7], "n_ok"));
            row.n_err = static_cast<std::size_t>(to_int(fields[8], "n_err"));
            it = row_of.emplace(key, table.rows.size()).first;
            table.rows.push_back(std::move(row));
        }
        MetricStat stat;
        stat.mean = to_double(fields[4], "mean");
        stat.best = to_double(fields[5], "best");
        stat.stddev = to_double(fields[6], "std");
        table.rows[it->second].metrics[fields[3]] = stat;
    }
    return table;
}

void emit_markdown(const ResultTable& table, const std::string& path) {
    if (table.rows.empty()) throw IoError("emit_markdown: empty table");
    std::ofstream out(path);
    if (!out) throw IoError("emit_markdown: cannot write " + path);

    auto cell = [](const RunSummary& row, const std::string& metric) -> std::string {
        const MetricStat* stat = row.metric(metric);
        if (!stat) return "-";
        return format_value(stat->mean) + "(" + format_value(stat->best) + ", " +
               format_value(stat->stddev) + ")";
    };

    std::string current;
    for (const auto& row : table.rows) {
        if (row.dataset != current) {
            current = row.dataset;
            out << "\n## " << current << "\n\n";
            out << "| Data Augmentation | Ensemble Model | Accuracy (Best, Std) | F1 (Best, Std) | AUC (Best, Std) |\n";
            out << "|---|---|---|---|---|\n";
        }
        out << "| " << row.augmenter << " | " << row.model << " | " << cell(row, "accuracy")
            << " | " << cell(row, "f1") << " | " << cell(row, "auc") << " |\n";
    }
}

namespace {

// blue -> yellow -> red, v in [0, 100].
std::string heat_color(double v) {
    double t = std::clamp(v / 100.0, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        double u = t / 0.5;
        r = static_cast<int>(40 + u * (250 - 40));
        g = static_cast<int>(70 + u * (220 - 70));
        b = static_cast<int>(160 - u * 110);
    } else {
        double u = (t - 0.5) / 0.5;
        r = 250;
        g = static_cast<int>(220 - u * 160);
        b = static_cast<int>(50 - u * 10);
    }
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

void emit_heatmap(const ResultTable& table, const std::string& dataset, const std::string& metric,
                  const std::string& path) {
    std::vector<std::string> augmenters, models;
    for (const auto& row : table.rows) {
        if (row.dataset != dataset) continue;
        if (std::find(augmenters.begin(), augmenters.end(), row.augmenter) == augmenters.end())
            augmenters.push_back(row.augmenter);
        if (std::find(models.begin(), models.end(), row.model) == models.end())
            models.push_back(row.model);
    }
    if (augmenters.empty()) throw IoError("emit_heatmap: no rows for dataset " + dataset);

    const int cell_w = 86, cell_h = 34, left = 150, top = 60;
    int width = left + cell_w * static_cast<int>(models.size()) + 20;
    int height = top + cell_h * static_cast<int>(augmenters.size()) + 20;

    std::ofstream out(path);
    if (!out) throw IoError("emit_heatmap: cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out << "<text x=\"" << left << "\" y=\"20\" font-size=\"14\">" << dataset << " - " << metric
        << "</text>\n";
    for (std::size_t m = 0; m < models.size(); ++m)
        out << "<text x=\"" << left + static_cast<int>(m) * cell_w + cell_w / 2 << "\" y=\""
            << top - 8 << "\" text-anchor=\"middle\">" << models[m] << "</text>\n";
    for (std::size_t a = 0; a < augmenters.size(); ++a)
        out << "<text x=\"" << left - 8 << "\" y=\""
            << top + static_cast<int>(a) * cell_h + cell_h / 2 + 4
            << "\" text-anchor=\"end\">" << augmenters[a] << "</text>\n";

    for (std::size_t a = 0; a < augmenters.size(); ++a)
        for (std::size_t m = 0; m < models.size(); ++m) {
            const RunSummary* row = table.find(dataset, augmenters[a], models[m]);
            const MetricStat* stat = row ? row->metric(metric) : nullptr;
            int x = left + static_cast<int>(m) * cell_w;
            int y = top + static_cast<int>(a) * cell_h;
            std::string fill = stat ? heat_color(stat->mean) : "#cccccc";
            out << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w
                << "\" height=\"" << cell_h << "\" fill=\"" << fill
                << "\" stroke=\"#ffffff\"/>\n";
            out << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 4
                << "\" text-anchor=\"middle\">"
                << (stat ? format_value(stat->mean) : std::string("err")) << "</text>\n";
        }
    out << "</svg>\n";
}

void persist_run_records(const CellResult& cell, const std::string& dir) {
    fs::create_directories(dir);
    json doc;
    doc["dataset"] = cell.summary.dataset;
    doc["augmenter"] = cell.summary.augmenter;
    doc["model"] = cell.summary.model;
    doc["runs"] = json::array();
    for (const auto& record : cell.runs) {
        json r;
        r["run"] = record.run;
        r["seed"] = record.seed;
        r["ok"] = record.ok;
        if (!record.ok) r["error"] = record.error;
        r["metrics"] = record.metrics;
        doc["runs"].push_back(std::move(r));
    }
    std::string name = cell.summary.dataset + "__" + cell.summary.augmenter + "__" +
                       cell.summary.model + ".json";
    std::ofstream out(dir + "/" + name);
    if (!out) throw IoError("persist_run_records: cannot write " + dir + "/" + name);
    out << doc.dump(1) << "\n";
}

}  // namespace cibench
