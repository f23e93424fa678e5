#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cibench/common.hpp"

namespace cibench {

/// A parsed delimiter-separated source table: real-valued features plus the
/// original label strings, before any recipe is applied.
struct RawTable {
    Matrix rows;
    std::vector<std::string> labels;
    std::vector<std::string> feature_names;
};

/// A benchmark dataset: feature matrix, class indices in 0..C-1 and the
/// recipe identity. For binary recipes class 0 is the negative set and
/// class 1 the positive (minority) set.
struct Dataset {
    std::string name;
    Matrix X;
    Labels y;
    std::vector<std::string> class_names;
    int positive_class = 1;

    int n_classes() const { return static_cast<int>(class_names.size()); }
    std::size_t size() const { return y.size(); }
    bool is_binary() const { return n_classes() == 2; }

    void validate() const;
};

struct SplitPair {
    Dataset train;
    Dataset test;
    std::int64_t seed = 0;
    double train_fraction = 0.6;
};

/// label_column: 0-based column index, or "last".
RawTable load_table(const std::string& path, const std::string& label_column);

Dataset derive_binary(const RawTable& raw, const std::set<std::string>& positive_labels,
                      const std::set<std::string>& negative_labels, const std::string& name);

/// Integer ring-age bins, each inclusive [lo, hi]; rows outside every bin are
/// dropped.
Dataset bin_rings(const RawTable& raw, const std::vector<std::pair<int, int>>& bins,
                  const std::string& name);

Dataset merge_classes(const Dataset& ds, const std::vector<std::vector<int>>& groups,
                      const std::string& name);

double imbalance_ratio(const Dataset& ds);

/// Seeded shuffle then prefix split with train size floor(n * fraction).
/// If some class is missing from the train part the draw is repeated with
/// seed+1, seed+2, ... up to 100 attempts.
SplitPair split(const Dataset& ds, double train_fraction, std::int64_t seed);

struct Recipe {
    std::string name;
    std::vector<std::string> aliases;
    std::function<Dataset()> materialize;
};

/// Recipe registry loaded from a catalog file; source tables are cached so
/// repeated materializations parse each file once.
class Catalog {
public:
    Catalog(const std::string& catalog_path, const std::string& data_dir);

    const std::vector<Recipe>& recipes() const { return recipes_; }
    std::vector<std::string> names() const;
    /// Looks up by primary name or alias; unknown name -> RecipeError.
    Dataset materialize(const std::string& name) const;
    bool has(const std::string& name) const;

private:
    std::vector<Recipe> recipes_;
    std::shared_ptr<std::map<std::string, RawTable>> cache_;
};

}  // namespace cibench
