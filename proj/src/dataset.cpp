#include "cibench/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cibench/ini.hpp"

namespace cibench {

void Dataset::validate() const {
    if (X.rows() != y.size()) throw RecipeError(name + ": X/y length mismatch");
    int c = n_classes();
    if (c < 2) throw RecipeError(name + ": needs at least 2 classes");
    if (size() < static_cast<std::size_t>(c))
        throw RecipeError(name + ": fewer rows than classes");
    auto counts = class_counts(y, c);
    for (int k = 0; k < c; ++k)
        if (counts[static_cast<std::size_t>(k)] == 0)
            throw RecipeError(name + ": class " + std::to_string(k) + " is empty");
}

namespace {

std::vector<std::string> tokenize_row(const std::string& line) {
    std::string norm = line;
    std::replace(norm.begin(), norm.end(), ',', ' ');
    std::vector<std::string> toks;
    std::stringstream ss(norm);
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
}

}  // namespace

RawTable load_table(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open data file: " + path);

    RawTable table;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    long long label_index = -1;  // resolved on the first data row
    bool label_last = (label_column == "last");
    if (!label_last) label_index = to_int(label_column, "label_column");

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto toks = tokenize_row(t);
        if (width == 0) {
            width = toks.size();
            if (width < 2) throw IngestError(path + ": rows need at least one feature and a label");
            if (label_last) label_index = static_cast<long long>(width) - 1;
            if (label_index < 0 || label_index >= static_cast<long long>(width))
                throw IngestError(path + ": label column " + std::to_string(label_index) +
                                  " out of range for width " + std::to_string(width));
            for (std::size_t j = 0; j + 1 < width; ++j)
                table.feature_names.push_back("f" + std::to_string(j));
        }
        if (toks.size() != width)
            throw IngestError(path + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(width) + " columns, got " + std::to_string(toks.size()));
        std::vector<double> feats;
        feats.reserve(width - 1);
        for (std::size_t j = 0; j < width; ++j) {
            if (static_cast<long long>(j) == label_index) continue;
            try {
                std::size_t pos = 0;
                double v = std::stod(toks[j], &pos);
                if (pos != toks[j].size()) throw std::invalid_argument(toks[j]);
                feats.push_back(v);
            } catch (const std::exception&) {
                throw IngestError(path + ":" + std::to_string(lineno) + ": column " +
                                  std::to_string(j) + ": non-numeric feature '" + toks[j] + "'");
            }
        }
        table.rows.push_row(feats);
        table.labels.push_back(trim(toks[static_cast<std::size_t>(label_index)]));
    }
    if (table.rows.rows() == 0) throw IngestError(path + ": no data rows");
    return table;
}

Dataset derive_binary(const RawTable& raw, const std::set<std::string>& positive_labels,
                      const std::set<std::string>& negative_labels, const std::string& name) {
    for (const auto& l : positive_labels)
        if (negative_labels.count(l))
            throw RecipeError(name + ": label '" + l + "' in both positive and negative sets");

    Dataset ds;
    ds.name = name;
    ds.class_names = {"negative", "positive"};
    ds.positive_class = 1;
    for (std::size_t i = 0; i < raw.labels.size(); ++i) {
        int cls;
        if (positive_labels.count(raw.labels[i])) cls = 1;
        else if (negative_labels.count(raw.labels[i])) cls = 0;
        else continue;
        ds.X.push_row(raw.rows.row(i));
        ds.y.push_back(cls);
    }
    auto counts = class_counts(ds.y, 2);
    if (counts[1] == 0) throw RecipeError(name + ": positive label set absent from the table");
    if (counts[0] == 0) throw RecipeError(name + ": negative label set absent from the table");
    ds.validate();
    return ds;
}

Dataset bin_rings(const RawTable& raw, const std::vector<std::pair<int, int>>& bins,
                  const std::string& name) {
    if (bins.empty()) throw RecipeError(name + ": no bins");
    for (std::size_t b = 0; b < bins.size(); ++b) {
        if (bins[b].first > bins[b].second)
            throw RecipeError(name + ": bin " + std::to_string(b) + " has lo > hi");
        if (b > 0 && bins[b].first <= bins[b - 1].second)
            throw RecipeError(name + ": bins must be strictly increasing");
    }

    Dataset ds;
    ds.name = name;
    for (const auto& [lo, hi] : bins)
        ds.class_names.push_back("rings " + std::to_string(lo) + "-" + std::to_string(hi));

    for (std::size_t i = 0; i < raw.labels.size(); ++i) {
        long long rings;
        try {
            rings = to_int(raw.labels[i], "ring label");
        } catch (const ConfigError&) {
            throw IngestError(name + ": ring label '" + raw.labels[i] + "' is not an integer");
        }
        int cls = -1;
        for (std::size_t b = 0; b < bins.size(); ++b)
            if (rings >= bins[b].first && rings <= bins[b].second) {
                cls = static_cast<int>(b);
                break;
            }
        if (cls < 0) continue;  // outside every bin
        ds.X.push_row(raw.rows.row(i));
        ds.y.push_back(cls);
    }

    auto counts = class_counts(ds.y, static_cast<int>(bins.size()));
    for (std::size_t b = 0; b < bins.size(); ++b)
        if (counts[b] == 0)
            throw RecipeError(name + ": bin " + std::to_string(b) + " received no rows");
    ds.validate();
    return ds;
}

Dataset merge_classes(const Dataset& ds, const std::vector<std::vector<int>>& groups,
                      const std::string& name) {
    if (groups.size() < 2) throw RecipeError(name + ": need at least 2 groups");
    std::map<int, int> assign;  // old class -> new class
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) throw RecipeError(name + ": empty group");
        for (int cls : groups[g]) {
            if (cls < 0 || cls >= ds.n_classes())
                throw RecipeError(name + ": class index " + std::to_string(cls) + " out of range");
            if (!assign.emplace(cls, static_cast<int>(g)).second)
                throw RecipeError(name + ": class " + std::to_string(cls) + " appears in two groups");
        }
    }

    Dataset out;
    out.name = name;
    for (const auto& group : groups) {
        std::string cname;
        for (int cls : group) {
            if (!cname.empty()) cname += "+";
            cname += ds.class_names[static_cast<std::size_t>(cls)];
        }
        out.class_names.push_back(cname);
    }
    for (std::size_t i = 0; i < ds.size(); ++i) {
        auto it = assign.find(ds.y[i]);
        if (it == assign.end()) continue;  // class not mentioned: dropped
        out.X.push_row(ds.X.row(i));
        out.y.push_back(it->second);
    }
    out.validate();
    return out;
}

double imbalance_ratio(const Dataset& ds) {
    if (!ds.is_binary()) throw MetricError(ds.name + ": imbalance ratio is defined for binary datasets");
    auto counts = class_counts(ds.y, 2);
    double a = static_cast<double>(counts[0]);
    double b = static_cast<double>(counts[1]);
    return std::max(a, b) / std::min(a, b);
}

SplitPair split(const Dataset& ds, double train_fraction, std::int64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw SplitError(ds.name + ": train_fraction must be in (0, 1)");
    std::size_t n = ds.size();
    std::size_t n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n)));
    if (n_train == 0 || n_train == n)
        throw SplitError(ds.name + ": degenerate split sizes");

    for (int attempt = 0; attempt < 100; ++attempt) {
        std::int64_t s = seed + attempt;
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        Rng rng(static_cast<std::uint64_t>(s));
        rng.shuffle(order);

        std::vector<bool> in_train(ds.class_names.size(), false);
        for (std::size_t i = 0; i < n_train; ++i)
            in_train[static_cast<std::size_t>(ds.y[order[i]])] = true;
        if (std::find(in_train.begin(), in_train.end(), false) != in_train.end())
            continue;  // some class missing from train: re-draw

        SplitPair pair;
        pair.seed = seed;
        pair.train_fraction = train_fraction;
        pair.train.name = ds.name + "/train";
        pair.test.name = ds.name + "/test";
        pair.train.class_names = pair.test.class_names = ds.class_names;
        pair.train.positive_class = pair.test.positive_class = ds.positive_class;
        for (std::size_t i = 0; i < n; ++i) {
            Dataset& part = (i < n_train) ? pair.train : pair.test;
            part.X.push_row(ds.X.row(order[i]));
            part.y.push_back(ds.y[order[i]]);
        }
        return pair;
    }
    throw SplitError(ds.name + ": could not place every class in the train split after 100 attempts");
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

std::set<std::string> to_label_set(const std::string& csv) {
    auto items = split_list(csv);
    return {items.begin(), items.end()};
}

std::vector<std::pair<int, int>> parse_bins(const std::string& spec, const std::string& what) {
    std::vector<std::pair<int, int>> bins;
    for (const auto& item : split_list(spec)) {
        std::size_t dash = item.find('-');
        if (dash == std::string::npos)
            throw ConfigError(what + ": bin '" + item + "' must look like lo-hi");
        bins.emplace_back(static_cast<int>(to_int(trim(item.substr(0, dash)), what)),
                          static_cast<int>(to_int(trim(item.substr(dash + 1)), what)));
    }
    return bins;
}

std::vector<std::vector<int>> parse_groups(const std::string& spec, const std::string& what) {
    std::vector<std::vector<int>> groups;
    for (const auto& item : split_list(spec)) {
        std::vector<int> group;
        for (const auto& part : split_list(item, '+'))
            group.push_back(static_cast<int>(to_int(part, what)));
        groups.push_back(group);
    }
    return groups;
}

}  // namespace

Catalog::Catalog(const std::string& catalog_path, const std::string& data_dir)
    : cache_(std::make_shared<std::map<std::string, RawTable>>()) {
    IniFile ini = parse_ini(catalog_path);

    struct Source {
        std::string file;
        std::string label_column;
    };
    std::map<std::string, Source> sources;
    for (const auto* sec : ini.find_all_with_prefix("source:")) {
        std::string key = sec->name.substr(7);
        sources[key] = {sec->require("file"), sec->get("label_column", "last")};
    }

    std::string dir = data_dir;
    if (!dir.empty() && dir.back() != '/') dir += '/';
    auto cache = cache_;
    auto load_source = [sources, dir, cache](const std::string& key) -> const RawTable& {
        auto hit = cache->find(key);
        if (hit != cache->end()) return hit->second;
        auto it = sources.find(key);
        if (it == sources.end()) throw ConfigError("catalog references unknown source '" + key + "'");
        RawTable t = load_table(dir + it->second.file, it->second.label_column);
        return cache->emplace(key, std::move(t)).first->second;
    };

    // Recipes materialize lazily; merge recipes reference an earlier recipe by
    // name, so keep a name -> materializer map as we go.
    auto made = std::make_shared<std::map<std::string, std::function<Dataset()>>>();
    for (const auto* sec : ini.find_all_with_prefix("recipe:")) {
        Recipe rec;
        rec.name = sec->name.substr(7);
        if (sec->has("alias")) rec.aliases = split_list(sec->get("alias"));
        std::string transform = sec->require("transform");

        if (transform == "binary") {
            auto src = sec->require("source");
            auto pos = to_label_set(sec->require("positive"));
            auto neg = to_label_set(sec->require("negative"));
            std::string name = rec.name;
            rec.materialize = [load_source, src, pos, neg, name]() {
                return derive_binary(load_source(src), pos, neg, name);
            };
        } else if (transform == "bins") {
            auto src = sec->require("source");
            auto bins = parse_bins(sec->require("bins"), rec.name);
            std::string name = rec.name;
            rec.materialize = [load_source, src, bins, name]() {
                return bin_rings(load_source(src), bins, name);
            };
        } else if (transform == "merge") {
            auto base = sec->require("base");
            auto groups = parse_groups(sec->require("groups"), rec.name);
            std::string name = rec.name;
            rec.materialize = [made, base, groups, name]() {
                auto it = made->find(base);
                if (it == made->end())
                    throw RecipeError(name + ": base recipe '" + base + "' not defined earlier");
                return merge_classes(it->second(), groups, name);
            };
        } else {
            throw ConfigError("recipe " + rec.name + ": unknown transform '" + transform + "'");
        }
        (*made)[rec.name] = rec.materialize;
        recipes_.push_back(std::move(rec));
    }
    if (recipes_.empty()) throw ConfigError(catalog_path + ": no recipes defined");
}

std::vector<std::string> Catalog::names() const {
    std::vector<std::string> out;
    for (const auto& r : recipes_) out.push_back(r.name);
    return out;
}

bool Catalog::has(const std::string& name) const {
    for (const auto& r : recipes_) {
        if (r.name == name) return true;
        for (const auto& a : r.aliases)
            if (a == name) return true;
    }
    return false;
}

Dataset Catalog::materialize(const std::string& name) const {
    for (const auto& r : recipes_) {
        if (r.name == name) return r.materialize();
        for (const auto& a : r.aliases)
            if (a == name) return r.materialize();
    }
    throw RecipeError("unknown dataset recipe '" + name + "'");
}

}  // namespace cibench
