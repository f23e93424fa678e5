#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cibench/dataset.hpp"
#include "cibench/ensembles.hpp"
#include "cibench/resampling.hpp"

namespace cibench {

/// One grid axis entry: display name plus the spec to run.
struct AugmenterArm {
    std::string name;
    AugmenterSpec spec;
};

struct ModelArm {
    std::string name;
    ModelSpec spec;
};

struct GridConfig {
    std::string catalog_path = "data/catalog.ini";
    std::string data_dir = "data";
    std::vector<std::string> dataset_names;
    std::vector<AugmenterArm> augmenters;
    std::vector<ModelArm> models;
    std::size_t n_runs = 30;
    std::uint64_t base_seed = 42;
    double train_fraction = 0.6;
    std::string out_dir = "results";
    bool skip_ctgan = false;
    std::size_t threads = 1;
    bool persist_runs = true;
};

/// Parses the [run]/[datasets]/[augmenters]/[models] config file; any field
/// may be overridden afterwards by the CLI.
GridConfig load_grid_config(const std::string& path);

std::string grid_config_signature(const GridConfig& cfg);

/// The paper-grid defaults: nine model arms and the none + nine augmentation
/// arms, all at published hyperparameters.
std::vector<ModelArm> default_model_arms();
std::vector<AugmenterArm> default_augmenter_arms();

AugmenterArm make_augmenter_arm(const std::string& name);
ModelArm make_model_arm(const std::string& name);

struct RunRecord {
    std::size_t run = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    std::map<std::string, double> metrics;
};

struct MetricStat {
    double mean = 0.0;
    double best = 0.0;
    double stddev = 0.0;  // population
};

struct RunSummary {
    std::string dataset;
    std::string augmenter;
    std::string model;
    std::map<std::string, MetricStat> metrics;
    std::size_t n_ok = 0;
    std::size_t n_err = 0;
    std::vector<std::string> errors;

    const MetricStat* metric(const std::string& name) const {
        auto it = metrics.find(name);
        return it == metrics.end() ? nullptr : &it->second;
    }
};

struct CellResult {
    RunSummary summary;
    std::vector<RunRecord> runs;
};

struct ResultTable {
    std::vector<RunSummary> rows;
    std::uint64_t base_seed = 0;
    std::string config_hash;

    const RunSummary* find(const std::string& dataset, const std::string& augmenter,
                           const std::string& model) const;
};

/// Runs one (dataset, augmenter, model) cell: per run, seeded split, train-only
/// augmentation, fit, scoring at threshold 0.5. Per-run seeds derive from the
/// cell identity so results are independent of scheduling. Failed runs are
/// recorded and excluded from the mean/best/std aggregation.
CellResult run_cell(const Dataset& ds, const AugmenterArm& augmenter, const ModelArm& model,
                    std::size_t n_runs, std::uint64_t base_seed, double train_fraction = 0.6);

ResultTable run_grid(const GridConfig& config);

struct RankEntry {
    std::string name;
    double mean = 0.0;    // mean of per-dataset cell means
    double stddev = 0.0;  // spread across the family's datasets
};

/// Orders augmenters by mean F1 across a dataset family with the model fixed
/// (histogram boosting unless told otherwise).
std::vector<RankEntry> rank_augmenters(const ResultTable& table, const std::string& family,
                                       const std::string& fixed_model = "histgbm",
                                       const std::string& metric = "f1");

/// Orders models by mean F1 across a family with the augmenter fixed (none).
std::vector<RankEntry> rank_models(const ResultTable& table, const std::string& family,
                                   const std::string& fixed_augmenter = "none",
                                   const std::string& metric = "f1");

// Report artifacts. CSV schema (exact header):
// dataset,augmenter,model,metric,mean,best,std,n_ok,n_err
void emit_csv(const ResultTable& table, const std::string& path);
ResultTable parse_csv(const std::string& path);
void emit_markdown(const ResultTable& table, const std::string& path);
void emit_heatmap(const ResultTable& table, const std::string& dataset, const std::string& metric,
                  const std::string& path);

void persist_run_records(const CellResult& cell, const std::string& dir);

std::string format_value(double v);  // fixed 3 decimals, the paper's table style

}  // namespace cibench
