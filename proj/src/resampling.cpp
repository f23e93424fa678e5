#include "cibench/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "cibench/knn.hpp"
#include "cibench/linear.hpp"

namespace cibench {

AugmentMethod augment_method_from_string(const std::string& name) {
    static const std::map<std::string, AugmentMethod> table = {
        {"none", AugmentMethod::None},
        {"ros", AugmentMethod::Ros},
        {"rus", AugmentMethod::Rus},
        {"smote", AugmentMethod::Smote},
        {"smote_enn", AugmentMethod::SmoteEnn},
        {"borderline_smote", AugmentMethod::BorderlineSmote},
        {"svm_smote", AugmentMethod::SvmSmote},
        {"kmeans_smote", AugmentMethod::KmeansSmote},
        {"adasyn", AugmentMethod::Adasyn},
        {"ctgan", AugmentMethod::Ctgan},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown augmentation method '" + name + "'");
    return it->second;
}

std::string augment_method_name(AugmentMethod m) {
    switch (m) {
        case AugmentMethod::None: return "none";
        case AugmentMethod::Ros: return "ros";
        case AugmentMethod::Rus: return "rus";
        case AugmentMethod::Smote: return "smote";
        case AugmentMethod::SmoteEnn: return "smote_enn";
        case AugmentMethod::BorderlineSmote: return "borderline_smote";
        case AugmentMethod::SvmSmote: return "svm_smote";
        case AugmentMethod::KmeansSmote: return "kmeans_smote";
        case AugmentMethod::Adasyn: return "adasyn";
        case AugmentMethod::Ctgan: return "ctgan";
    }
    return "?";
}

namespace {

struct ClassIndex {
    std::vector<std::vector<std::size_t>> by_class;
    std::size_t majority_count = 0;
    std::size_t minority_count = 0;

    explicit ClassIndex(const Dataset& train) {
        by_class.resize(static_cast<std::size_t>(train.n_classes()));
        for (std::size_t i = 0; i < train.size(); ++i)
            by_class[static_cast<std::size_t>(train.y[i])].push_back(i);
        minority_count = train.size();
        for (const auto& rows : by_class) {
            majority_count = std::max(majority_count, rows.size());
            minority_count = std::min(minority_count, rows.size());
        }
    }
};

ResampledTrain originals_only(const Dataset& train) {
    ResampledTrain out;
    out.X = train.X;
    out.y = train.y;
    out.provenance.resize(train.size());
    for (std::size_t i = 0; i < train.size(); ++i)
        out.provenance[i] = {RowOrigin::Original, i, static_cast<std::size_t>(-1), 0.0, false};
    return out;
}

void append_duplicate(ResampledTrain& out, const Dataset& train, std::size_t src) {
    out.X.push_row(train.X.row(src));
    out.y.push_back(train.y[src]);
    out.provenance.push_back({RowOrigin::Duplicate, src, static_cast<std::size_t>(-1), 0.0, false});
}

void append_interpolated(ResampledTrain& out, const Dataset& train, std::size_t a, std::size_t b,
                         double u) {
    std::vector<double> row(train.X.cols());
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = train.X(a, j) + u * (train.X(b, j) - train.X(a, j));
    out.X.push_row(row);
    out.y.push_back(train.y[a]);
    out.provenance.push_back({RowOrigin::Synthetic, a, b, u, false});
}

void append_extrapolated(ResampledTrain& out, const Dataset& train, std::size_t a, std::size_t b,
                         double step) {
    std::vector<double> row(train.X.cols());
    for (std::size_t j = 0; j < row.size(); ++j)
        row[j] = train.X(a, j) + step * (train.X(a, j) - train.X(b, j));
    out.X.push_row(row);
    out.y.push_back(train.y[a]);
    out.provenance.push_back({RowOrigin::Synthetic, a, b, step, true});
}

// Per-class neighbour table in scaled space; neighbours are global row ids.
std::map<std::size_t, std::vector<std::size_t>> class_neighbors(
    const Matrix& scaled, const std::vector<std::size_t>& rows, std::size_t k) {
    KnnIndex index(scaled.select(rows));
    std::map<std::size_t, std::vector<std::size_t>> out;
    for (std::size_t local = 0; local < rows.size(); ++local) {
        auto found = index.query_excluding(scaled.row(rows[local]), k, local);
        auto& lst = out[rows[local]];
        for (std::size_t nb : found) lst.push_back(rows[nb]);
    }
    return out;
}

// Shared interpolation loop: draw (seed from pool, neighbour of seed, u) until
// `deficit` synthetics are appended.
void smote_fill(ResampledTrain& out, const Dataset& train, Rng& rng,
                const std::vector<std::size_t>& seed_pool,
                const std::map<std::size_t, std::vector<std::size_t>>& neighbors,
                std::size_t deficit) {
    for (std::size_t s = 0; s < deficit; ++s) {
        std::size_t a = seed_pool[rng.uniform_index(seed_pool.size())];
        const auto& nbs = neighbors.at(a);
        std::size_t b = nbs[rng.uniform_index(nbs.size())];
        append_interpolated(out, train, a, b, rng.u01());
    }
}

}  // namespace

ResampledTrain ros(const Dataset& train, std::uint64_t seed) {
    if (train.n_classes() < 2) throw FitError("ros: need at least 2 classes");
    ClassIndex ci(train);
    ResampledTrain out = originals_only(train);
    Rng rng(seed);
    for (std::size_t c = 0; c < ci.by_class.size(); ++c) {
        const auto& rows = ci.by_class[c];
        for (std::size_t s = rows.size(); s < ci.majority_count; ++s)
            append_duplicate(out, train, rows[rng.uniform_index(rows.size())]);
    }
    return out;
}

ResampledTrain rus(const Dataset& train, std::uint64_t seed) {
    ClassIndex ci(train);
    if (ci.minority_count < 1) throw FitError("rus: minority class empty");
    Rng rng(seed);
    std::vector<bool> keep(train.size(), false);
    for (auto rows : ci.by_class) {
        rng.shuffle(rows);
        for (std::size_t s = 0; s < ci.minority_count; ++s) keep[rows[s]] = true;
    }
    ResampledTrain out;
    for (std::size_t i = 0; i < train.size(); ++i) {
        if (!keep[i]) {
            out.removed.push_back(i);
            continue;
        }
        out.X.push_row(train.X.row(i));
        out.y.push_back(train.y[i]);
        out.provenance.push_back({RowOrigin::Original, i, static_cast<std::size_t>(-1), 0.0, false});
    }
    return out;
}

ResampledTrain smote(const Dataset& train, std::size_t k, std::uint64_t seed) {
    ClassIndex ci(train);
    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix scaled = scaler.transform(train.X);

    ResampledTrain out = originals_only(train);
    Rng rng(seed);
    for (std::size_t c = 0; c < ci.by_class.size(); ++c) {
        const auto& rows = ci.by_class[c];
        if (rows.size() >= ci.majority_count) continue;
        std::size_t deficit = ci.majority_count - rows.size();
        if (rows.size() == 1) {
            for (std::size_t s = 0; s < deficit; ++s) append_duplicate(out, train, rows[0]);
            continue;
        }
        std::size_t k_eff = std::min(k, rows.size() - 1);
        auto neighbors = class_neighbors(scaled, rows, k_eff);
        smote_fill(out, train, rng, rows, neighbors, deficit);
    }
    return out;
}

ResampledTrain smote_enn(const Dataset& train, std::size_t k_smote, std::size_t k_enn,
                         std::uint64_t seed) {
    ResampledTrain oversampled = smote(train, k_smote, seed);
    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix scaled = scaler.transform(oversampled.X);

    std::size_t n = oversampled.y.size();
    std::size_t k_eff = std::min(k_enn, n - 1);
    KnnIndex index(scaled);

    // keep a row iff its own class is one of the modal classes of its k-NN vote
    std::vector<bool> keep(n, true);
    int n_classes = train.n_classes();
    for (std::size_t i = 0; i < n; ++i) {
        auto nbs = index.query_excluding(scaled.row(i), k_eff, i);
        std::vector<std::size_t> votes(static_cast<std::size_t>(n_classes), 0);
        for (std::size_t nb : nbs) votes[static_cast<std::size_t>(oversampled.y[nb])]++;
        std::size_t own = votes[static_cast<std::size_t>(oversampled.y[i])];
        for (std::size_t v : votes)
            if (v > own) { keep[i] = false; break; }
    }

    std::vector<std::size_t> surviving(static_cast<std::size_t>(n_classes), 0);
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) surviving[static_cast<std::size_t>(oversampled.y[i])]++;
    for (std::size_t c = 0; c < surviving.size(); ++c) {
        if (surviving[c] == 0) {
            oversampled.warning = true;
            oversampled.warning_message =
                "enn would remove every row of class " + std::to_string(c) +
                "; returning the pre-cleaning result";
            return oversampled;
        }
    }

    ResampledTrain out;
    out.warning = oversampled.warning;
    out.warning_message = oversampled.warning_message;
    for (std::size_t i = 0; i < n; ++i) {
        if (!keep[i]) {
            if (oversampled.provenance[i].origin == RowOrigin::Original)
                out.removed.push_back(oversampled.provenance[i].source_a);
            continue;
        }
        out.X.push_row(oversampled.X.row(i));
        out.y.push_back(oversampled.y[i]);
        out.provenance.push_back(oversampled.provenance[i]);
    }
    return out;
}

ResampledTrain borderline_smote(const Dataset& train, std::size_t k, std::size_t m,
                                std::uint64_t seed) {
    ClassIndex ci(train);
    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix scaled = scaler.transform(train.X);
    KnnIndex all_index(scaled);
    std::size_t m_eff = std::min(m, train.size() - 1);

    ResampledTrain out = originals_only(train);
    Rng rng(seed);
    for (std::size_t c = 0; c < ci.by_class.size(); ++c) {
        const auto& rows = ci.by_class[c];
        if (rows.size() >= ci.majority_count) continue;
        std::size_t deficit = ci.majority_count - rows.size();
        if (rows.size() == 1) {
            for (std::size_t s = 0; s < deficit; ++s) append_duplicate(out, train, rows[0]);
            continue;
        }

        // DANGER membership: at least half but not all of the m neighbours
        // belong to other classes
        std::vector<std::size_t> danger;
        for (std::size_t i : rows) {
            auto nbs = all_index.query_excluding(scaled.row(i), m_eff, i);
            std::size_t other = 0;
            for (std::size_t nb : nbs)
                if (train.y[nb] != static_cast<int>(c)) ++other;
            double half = static_cast<double>(m_eff) / 2.0;
            if (static_cast<double>(other) >= half && other < m_eff) danger.push_back(i);
        }

        std::size_t k_eff = std::min(k, rows.size() - 1);
        auto neighbors = class_neighbors(scaled, rows, k_eff);
        const auto& seed_pool = danger.empty() ? rows : danger;  // empty DANGER: plain smote
        smote_fill(out, train, rng, seed_pool, neighbors, deficit);
    }
    return out;
}

ResampledTrain svm_smote(const Dataset& train, std::size_t k, std::size_t m, double out_step,
                         double c, std::size_t epochs, std::uint64_t seed) {
    ClassIndex ci(train);
    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix scaled = scaler.transform(train.X);
    KnnIndex all_index(scaled);
    std::size_t m_eff = std::min(m, train.size() - 1);

    ResampledTrain out = originals_only(train);
    Rng rng(seed);
    for (std::size_t cls = 0; cls < ci.by_class.size(); ++cls) {
        const auto& rows = ci.by_class[cls];
        if (rows.size() >= ci.majority_count) continue;
        std::size_t deficit = ci.majority_count - rows.size();
        if (rows.size() == 1) {
            for (std::size_t s = 0; s < deficit; ++s) append_duplicate(out, train, rows[0]);
            continue;
        }

        // this-class-vs-rest margin; seeds are the minority-side support vectors
        Labels y_bin(train.size());
        for (std::size_t i = 0; i < train.size(); ++i)
            y_bin[i] = (train.y[i] == static_cast<int>(cls)) ? 1 : 0;
        SvmParams sp;
        sp.c = c;
        sp.epochs = epochs;
        sp.seed = mix_seed(seed, cls);
        LinearModel svm = fit_linear_svm(scaled, y_bin, sp);
        std::vector<std::size_t> seeds;
        for (std::size_t i : svm.support_indices)
            if (y_bin[i] == 1) seeds.push_back(i);

        std::size_t k_eff = std::min(k, rows.size() - 1);
        auto neighbors = class_neighbors(scaled, rows, k_eff);
        if (seeds.empty()) {
            out.warning = true;
            out.warning_message = "svm_smote: no minority support vectors; plain smote fallback";
            smote_fill(out, train, rng, rows, neighbors, deficit);
            continue;
        }

        for (std::size_t s = 0; s < deficit; ++s) {
            std::size_t a = seeds[rng.uniform_index(seeds.size())];
            auto nbs_all = all_index.query_excluding(scaled.row(a), m_eff, a);
            std::size_t other = 0;
            for (std::size_t nb : nbs_all)
                if (train.y[nb] != static_cast<int>(cls)) ++other;
            const auto& own_nbs = neighbors.at(a);
            std::size_t b = own_nbs[rng.uniform_index(own_nbs.size())];
            double u = rng.u01();
            if (2 * other > m_eff)
                append_interpolated(out, train, a, b, u);  // crowded side: stay inside
            else
                append_extrapolated(out, train, a, b, u * out_step);  // expand the region
        }
    }
    return out;
}

ResampledTrain kmeans_smote(const Dataset& train, std::size_t k, std::size_t n_clusters,
                            double balance_threshold, std::uint64_t seed) {
    ClassIndex ci(train);
    if (ci.minority_count < 1) throw FitError("kmeans_smote: empty class");
    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix scaled = scaler.transform(train.X);
    KMeansResult clusters = kmeans(scaled, n_clusters, mix_seed(seed, 0x6b31), 100);

    ResampledTrain out = originals_only(train);
    Rng rng(seed);
    for (std::size_t cls = 0; cls < ci.by_class.size(); ++cls) {
        const auto& rows = ci.by_class[cls];
        if (rows.size() >= ci.majority_count) continue;
        std::size_t deficit = ci.majority_count - rows.size();
        if (rows.size() == 1) {
            for (std::size_t s = 0; s < deficit; ++s) append_duplicate(out, train, rows[0]);
            continue;
        }

        // filter step: clusters dominated by this class
        std::vector<std::vector<std::size_t>> cluster_rows(clusters.n_clusters);
        std::vector<std::size_t> cluster_size(clusters.n_clusters, 0);
        for (std::size_t i = 0; i < train.size(); ++i) {
            cluster_size[static_cast<std::size_t>(clusters.assignment[i])]++;
            if (train.y[i] == static_cast<int>(cls))
                cluster_rows[static_cast<std::size_t>(clusters.assignment[i])].push_back(i);
        }
        std::vector<std::size_t> kept;
        for (std::size_t cj = 0; cj < clusters.n_clusters; ++cj) {
            if (cluster_rows[cj].empty()) continue;
            double prop = static_cast<double>(cluster_rows[cj].size()) /
                          static_cast<double>(cluster_size[cj]);
            if (prop > balance_threshold) kept.push_back(cj);
        }

        std::size_t k_eff_global = std::min(k, rows.size() - 1);
        if (kept.empty()) {  // no cluster passes: plain smote fallback
            auto neighbors = class_neighbors(scaled, rows, k_eff_global);
            smote_fill(out, train, rng, rows, neighbors, deficit);
            continue;
        }

        // sparsity weights: mean pairwise distance of this class inside the cluster
        std::vector<double> sparsity(kept.size(), 0.0);
        double total_sparsity = 0.0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            const auto& cr = cluster_rows[kept[j]];
            if (cr.size() >= 2) {
                double sum = 0.0;
                std::size_t pairs = 0;
                for (std::size_t a = 0; a < cr.size(); ++a)
                    for (std::size_t b = a + 1; b < cr.size(); ++b) {
                        sum += std::sqrt(squared_distance(scaled.row(cr[a]), scaled.row(cr[b])));
                        ++pairs;
                    }
                sparsity[j] = sum / static_cast<double>(pairs);
            }
            total_sparsity += sparsity[j];
        }
        std::vector<double> weight(kept.size());
        for (std::size_t j = 0; j < kept.size(); ++j)
            weight[j] = total_sparsity > 0 ? sparsity[j] / total_sparsity
                                           : 1.0 / static_cast<double>(kept.size());

        // largest-remainder allocation of the deficit
        std::vector<std::size_t> alloc(kept.size(), 0);
        std::vector<std::pair<double, std::size_t>> remainder;
        std::size_t assigned = 0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            double exact = weight[j] * static_cast<double>(deficit);
            alloc[j] = static_cast<std::size_t>(std::floor(exact));
            assigned += alloc[j];
            remainder.emplace_back(-(exact - std::floor(exact)), j);
        }
        std::sort(remainder.begin(), remainder.end());
        for (std::size_t r = 0; assigned < deficit; ++r, ++assigned) alloc[remainder[r % remainder.size()].second]++;

        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (alloc[j] == 0) continue;
            const auto& cr = cluster_rows[kept[j]];
            if (cr.size() == 1) {
                for (std::size_t s = 0; s < alloc[j]; ++s) append_duplicate(out, train, cr[0]);
                continue;
            }
            std::size_t k_eff = std::min(k, cr.size() - 1);
            auto neighbors = class_neighbors(scaled, cr, k_eff);
            smote_fill(out, train, rng, cr, neighbors, alloc[j]);
        }
    }
    return out;
}

ResampledTrain adasyn(const Dataset& train, std::size_t k, std::uint64_t seed) {
    ClassIndex ci(train);
    MinMaxScaler scaler;
    scaler.fit(train.X);
    Matrix scaled = scaler.transform(train.X);
    KnnIndex all_index(scaled);
    std::size_t k_all = std::min(k, train.size() - 1);

    ResampledTrain out = originals_only(train);
    Rng rng(seed);
    for (std::size_t cls = 0; cls < ci.by_class.size(); ++cls) {
        const auto& rows = ci.by_class[cls];
        if (rows.size() >= ci.majority_count) continue;
        std::size_t deficit = ci.majority_count - rows.size();
        if (rows.size() == 1) {
            for (std::size_t s = 0; s < deficit; ++s) append_duplicate(out, train, rows[0]);
            continue;
        }

        // difficulty ratios from all-class neighbourhoods
        std::vector<double> r(rows.size(), 0.0);
        double r_sum = 0.0;
        for (std::size_t li = 0; li < rows.size(); ++li) {
            auto nbs = all_index.query_excluding(scaled.row(rows[li]), k_all, rows[li]);
            std::size_t other = 0;
            for (std::size_t nb : nbs)
                if (train.y[nb] != static_cast<int>(cls)) ++other;
            r[li] = static_cast<double>(other) / static_cast<double>(k_all);
            r_sum += r[li];
        }

        std::vector<std::size_t> g(rows.size(), 0);
        long long total = 0;
        if (r_sum <= 0.0) {
            // uniform fallback when every neighbourhood is pure
            for (std::size_t s = 0; s < deficit; ++s) g[s % rows.size()]++;
            total = static_cast<long long>(deficit);
        } else {
            for (std::size_t li = 0; li < rows.size(); ++li) {
                g[li] = static_cast<std::size_t>(
                    std::llround(r[li] / r_sum * static_cast<double>(deficit)));
                total += static_cast<long long>(g[li]);
            }
            // exact balance: absorb the rounding drift into the largest g
            long long drift = static_cast<long long>(deficit) - total;
            while (drift != 0) {
                std::size_t big = 0;
                for (std::size_t li = 1; li < g.size(); ++li)
                    if (g[li] > g[big]) big = li;
                if (drift > 0) { g[big]++; --drift; }
                else if (g[big] > 0) { g[big]--; ++drift; }
                else break;
            }
        }

        std::size_t k_eff = std::min(k, rows.size() - 1);
        auto neighbors = class_neighbors(scaled, rows, k_eff);
        for (std::size_t li = 0; li < rows.size(); ++li) {
            const auto& nbs = neighbors.at(rows[li]);
            for (std::size_t s = 0; s < g[li]; ++s) {
                std::size_t b = nbs[rng.uniform_index(nbs.size())];
                append_interpolated(out, train, rows[li], b, rng.u01());
            }
        }
    }
    return out;
}

Dataset to_dataset(const Dataset& train, const ResampledTrain& resampled) {
    Dataset out;
    out.name = train.name;
    out.class_names = train.class_names;
    out.positive_class = train.positive_class;
    out.X = resampled.X;
    out.y = resampled.y;
    return out;
}

}  // namespace cibench
