// Command-line front end: grid runs, rankings and report artifacts.
// Exit codes: 0 success, 1 configuration error, 2 partial grid (errored cells).

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "cibench/dataset.hpp"
#include "cibench/harness.hpp"
#include "cibench/ini.hpp"
#include "cibench/metrics.hpp"

namespace fs = std::filesystem;
using namespace cibench;

namespace {

int cmd_run(const std::string& config_path, int runs_override, const std::string& dataset_pattern,
            bool skip_ctgan, const std::string& out_override, int threads_override) {
    GridConfig config = load_grid_config(config_path);
    if (runs_override > 0) config.n_runs = static_cast<std::size_t>(runs_override);
    if (!dataset_pattern.empty()) config.dataset_names = split_list(dataset_pattern);
    if (skip_ctgan) config.skip_ctgan = true;
    if (!out_override.empty()) config.out_dir = out_override;
    if (threads_override > 0) config.threads = static_cast<std::size_t>(threads_override);

    ResultTable table = run_grid(config);
    fs::create_directories(config.out_dir);
    emit_csv(table, config.out_dir + "/results.csv");
    emit_markdown(table, config.out_dir + "/results.md");

    std::size_t errored_cells = 0, total_errors = 0;
    for (const auto& row : table.rows) {
        if (row.n_err > 0) ++errored_cells;
        total_errors += row.n_err;
    }
    std::cout << "grid complete: " << table.rows.size() << " cells, " << errored_cells
              << " with errors (" << total_errors << " errored runs)\n"
              << "results: " << config.out_dir << "/results.csv\n";
    return errored_cells > 0 ? 2 : 0;
}

void print_ranking(const std::vector<RankEntry>& entries, const std::string& out_path) {
    for (std::size_t i = 0; i < entries.size(); ++i)
        std::cout << (i + 1) << ". " << entries[i].name << "  mean=" << format_value(entries[i].mean)
                  << "  std=" << format_value(entries[i].stddev) << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write " + out_path);
        out << "rank,name,mean,std\n";
        for (std::size_t i = 0; i < entries.size(); ++i)
            out << (i + 1) << "," << entries[i].name << "," << format_value(entries[i].mean) << ","
                << format_value(entries[i].stddev) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"imbalanced-classification benchmark harness"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "run the (dataset x augmenter x model) grid");
    std::string config_path = "configs/default.ini";
    int runs_override = 0;
    std::string dataset_pattern, out_override;
    bool skip_ctgan = false;
    int threads_override = 0;
    run_cmd->add_option("--config", config_path, "grid config file")->required();
    run_cmd->add_option("--runs", runs_override, "override the number of seeded runs");
    run_cmd->add_option("--datasets", dataset_pattern,
                        "comma list of recipe names (suffix * for families)");
    run_cmd->add_flag("--skip-ctgan", skip_ctgan, "drop the ctgan arm");
    run_cmd->add_option("--out", out_override, "output directory");
    run_cmd->add_option("--threads", threads_override, "worker threads over grid cells");

    // rank-augmenters / rank-models
    auto* rank_aug = app.add_subcommand("rank-augmenters",
                                        "order augmenters by mean F1 over a dataset family");
    auto* rank_mdl = app.add_subcommand("rank-models",
                                        "order models by mean F1 over a dataset family");
    std::string family, results_path = "results/results.csv", fixed_model = "histgbm";
    std::string fixed_augmenter = "none", rank_out;
    for (auto* cmd : {rank_aug, rank_mdl}) {
        cmd->add_option("--family", family, "dataset family prefix (glass|yeast|ecoli|abalone)")
            ->required();
        cmd->add_option("--results", results_path, "results csv from a grid run");
        cmd->add_option("--out", rank_out, "optional csv output");
    }
    rank_aug->add_option("--model", fixed_model, "fixed model arm");
    rank_mdl->add_option("--augmenter", fixed_augmenter, "fixed augmenter arm");

    // datasets
    auto* datasets_cmd = app.add_subcommand("datasets", "dataset catalog utilities");
    auto* datasets_list = datasets_cmd->add_subcommand("list", "list catalog recipes");
    std::string catalog_path = "data/catalog.ini", data_dir = "data";
    bool materialize = false;
    datasets_list->add_option("--catalog", catalog_path, "catalog file");
    datasets_list->add_option("--data-dir", data_dir, "directory holding the source tables");
    datasets_list->add_flag("--materialize", materialize,
                            "load every recipe and print instance counts");

    // report
    auto* report_cmd = app.add_subcommand("report", "render report artifacts from a results csv");
    std::string heatmap_dataset, metric = "f1", report_out;
    report_cmd->add_option("--heatmap", heatmap_dataset, "dataset to render as a heatmap")
        ->required();
    report_cmd->add_option("--metric", metric, "metric name (default f1)");
    report_cmd->add_option("--results", results_path, "results csv from a grid run");
    report_cmd->add_option("--out", report_out, "output svg path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd)
            return cmd_run(config_path, runs_override, dataset_pattern, skip_ctgan, out_override,
                           threads_override);
        if (*rank_aug) {
            ResultTable table = parse_csv(results_path);
            print_ranking(rank_augmenters(table, family, fixed_model), rank_out);
            return 0;
        }
        if (*rank_mdl) {
            ResultTable table = parse_csv(results_path);
            print_ranking(rank_models(table, family, fixed_augmenter), rank_out);
            return 0;
        }
        if (*datasets_list) {
            Catalog catalog(catalog_path, data_dir);
            for (const auto& recipe : catalog.recipes()) {
                std::cout << recipe.name;
                if (materialize) {
                    Dataset ds = recipe.materialize();
                    std::cout << ": " << ds.size() << " instances, " << ds.X.cols()
                              << " attributes, " << ds.n_classes() << " classes";
                    if (ds.is_binary())
                        std::cout << ", IR " << format_value(imbalance_ratio(ds));
                }
                std::cout << "\n";
            }
            return 0;
        }
        if (*report_cmd) {
            ResultTable table = parse_csv(results_path);
            std::string out = report_out.empty()
                                  ? ("results/heatmap_" + heatmap_dataset + "_" + metric + ".svg")
                                  : report_out;
            emit_heatmap(table, heatmap_dataset, metric, out);
            std::cout << "wrote " << out << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
