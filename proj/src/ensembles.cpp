#include "cibench/ensembles.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace cibench {

ModelKind model_kind_from_string(const std::string& name) {
    static const std::map<std::string, ModelKind> table = {
        {"cart", ModelKind::Cart},
        {"forest", ModelKind::Forest},
        {"knn", ModelKind::Knn},
        {"logistic", ModelKind::Logistic},
        {"adaboost", ModelKind::AdaBoost},
        {"gbm", ModelKind::Gbm},
        {"xgbm", ModelKind::Xgbm},
        {"histgbm", ModelKind::HistGbm},
        {"voting_i_hard", ModelKind::VotingIHard},
        {"voting_i_soft", ModelKind::VotingISoft},
        {"voting_ii_hard", ModelKind::VotingIIHard},
        {"voting_ii_soft", ModelKind::VotingIISoft},
        {"stacking_i", ModelKind::StackingI},
        {"stacking_ii", ModelKind::StackingII},
        {"majority", ModelKind::Majority},
    };
    auto it = table.find(name);
    if (it == table.end()) throw ConfigError("unknown model kind '" + name + "'");
    return it->second;
}

std::string model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Cart: return "cart";
        case ModelKind::Forest: return "forest";
        case ModelKind::Knn: return "knn";
        case ModelKind::Logistic: return "logistic";
        case ModelKind::AdaBoost: return "adaboost";
        case ModelKind::Gbm: return "gbm";
        case ModelKind::Xgbm: return "xgbm";
        case ModelKind::HistGbm: return "histgbm";
        case ModelKind::VotingIHard: return "voting_i_hard";
        case ModelKind::VotingISoft: return "voting_i_soft";
        case ModelKind::VotingIIHard: return "voting_ii_hard";
        case ModelKind::VotingIISoft: return "voting_ii_soft";
        case ModelKind::StackingI: return "stacking_i";
        case ModelKind::StackingII: return "stacking_ii";
        case ModelKind::Majority: return "majority";
    }
    return "?";
}

std::vector<ModelSpec> pool_one(const ModelSpec& base) {
    std::vector<ModelSpec> pool;
    for (ModelKind kind : {ModelKind::Cart, ModelKind::Forest, ModelKind::Knn, ModelKind::Xgbm}) {
        ModelSpec m = base;
        m.kind = kind;
        pool.push_back(m);
    }
    return pool;
}

std::vector<ModelSpec> pool_two(const ModelSpec& base) {
    std::vector<ModelSpec> pool;
    for (ModelKind kind : {ModelKind::Forest, ModelKind::Xgbm}) {
        ModelSpec m = base;
        m.kind = kind;
        pool.push_back(m);
    }
    return pool;
}

ClassifierPtr make_classifier(const ModelSpec& spec) {
    switch (spec.kind) {
        case ModelKind::Cart: {
            CartParams p = spec.cart;
            p.seed = spec.seed;
            return std::make_unique<CartClassifier>(p);
        }
        case ModelKind::Forest: {
            ForestParams p = spec.forest;
            p.seed = spec.seed;
            return std::make_unique<ForestClassifier>(p);
        }
        case ModelKind::Knn:
            return std::make_unique<KnnClassifier>(spec.knn);
        case ModelKind::Logistic:
            return std::make_unique<LogisticClassifier>(spec.logistic);
        case ModelKind::AdaBoost: {
            AdaBoostParams p = spec.adaboost;
            p.seed = spec.seed;
            return std::make_unique<AdaBoostClassifier>(p);
        }
        case ModelKind::Gbm:
            return std::make_unique<GbmClassifier>(spec.gbm);
        case ModelKind::Xgbm:
            return std::make_unique<XgbClassifier>(spec.xgb);
        case ModelKind::HistGbm: {
            HistParams p = spec.hist;
            p.seed = spec.seed;
            return std::make_unique<HistGbmClassifier>(p);
        }
        case ModelKind::VotingIHard:
            return std::make_unique<VotingClassifier>(pool_one(spec), VotingMode::Hard, spec.seed);
        case ModelKind::VotingISoft:
            return std::make_unique<VotingClassifier>(pool_one(spec), VotingMode::Soft, spec.seed);
        case ModelKind::VotingIIHard:
            return std::make_unique<VotingClassifier>(pool_two(spec), VotingMode::Hard, spec.seed);
        case ModelKind::VotingIISoft:
            return std::make_unique<VotingClassifier>(pool_two(spec), VotingMode::Soft, spec.seed);
        case ModelKind::StackingI:
            return std::make_unique<StackingClassifier>(pool_one(spec), spec.stacking_folds,
                                                        spec.seed);
        case ModelKind::StackingII:
            return std::make_unique<StackingClassifier>(pool_two(spec), spec.stacking_folds,
                                                        spec.seed);
        case ModelKind::Majority:
            return std::make_unique<MajorityClassifier>();
    }
    throw ConfigError("make_classifier: unknown kind");
}

int hard_vote(const Labels& label_votes) {
    if (label_votes.empty()) throw VoteError("hard_vote: no votes");
    int n_classes = count_classes(label_votes);
    std::vector<std::size_t> tally(static_cast<std::size_t>(n_classes), 0);
    for (int v : label_votes) tally[static_cast<std::size_t>(v)]++;
    int best = 0;
    for (int c = 1; c < n_classes; ++c)
        if (tally[static_cast<std::size_t>(c)] > tally[static_cast<std::size_t>(best)]) best = c;
    return best;
}

std::vector<double> soft_vote(const std::vector<std::vector<double>>& prob_rows) {
    if (prob_rows.empty()) throw VoteError("soft_vote: no rows");
    std::size_t width = prob_rows[0].size();
    std::vector<double> mean(width, 0.0);
    for (const auto& row : prob_rows) {
        if (row.size() != width) throw VoteError("soft_vote: mismatched widths");
        for (std::size_t c = 0; c < width; ++c) mean[c] += row[c];
    }
    for (double& v : mean) v /= static_cast<double>(prob_rows.size());
    return mean;
}

// ---------------------------------------------------------------------------
// Voting
// ---------------------------------------------------------------------------

VotingClassifier::VotingClassifier(std::vector<ModelSpec> pool, VotingMode mode,
                                   std::uint64_t seed)
    : pool_(std::move(pool)), mode_(mode), seed_(seed) {}

void VotingClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    n_classes_ = n_classes;
    members_.clear();
    for (std::size_t b = 0; b < pool_.size(); ++b) {
        ModelSpec m = pool_[b];
        m.seed = mix_seed(seed_, b + 11);
        members_.push_back(make_classifier(m));
        members_.back()->fit(X, y, n_classes);
    }
}

std::vector<double> VotingClassifier::predict_proba(std::span<const double> x) const {
    if (members_.empty()) throw PredictError("VotingClassifier: not fitted");
    if (mode_ == VotingMode::Soft) {
        std::vector<std::vector<double>> rows;
        rows.reserve(members_.size());
        for (const auto& m : members_) rows.push_back(m->predict_proba(x));
        return soft_vote(rows);
    }
    // hard: vote fractions serve as the probability row
    std::vector<double> fractions(static_cast<std::size_t>(n_classes_), 0.0);
    for (const auto& m : members_)
        fractions[static_cast<std::size_t>(m->predict(x))] += 1.0;
    for (double& v : fractions) v /= static_cast<double>(members_.size());
    return fractions;
}

// ---------------------------------------------------------------------------
// Stacking
// ---------------------------------------------------------------------------

std::vector<int> make_folds(const Labels& y, int n_classes, std::size_t n_folds,
                            std::uint64_t seed) {
    std::size_t n = y.size();
    for (std::size_t folds = n_folds; folds >= 2; --folds) {
        if (n < folds) continue;
        for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            Rng rng(mix_seed(seed, attempt * 1000 + folds));
            rng.shuffle(order);

            std::vector<int> fold_of(n);
            for (std::size_t i = 0; i < n; ++i)
                fold_of[order[i]] = static_cast<int>(i % folds);

            // every class must appear in every training fold (= complement)
            bool ok = true;
            for (std::size_t f = 0; f < folds && ok; ++f) {
                std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
                for (std::size_t i = 0; i < n; ++i)
                    if (fold_of[i] != static_cast<int>(f)) seen[static_cast<std::size_t>(y[i])] = true;
                for (bool s : seen) ok &= s;
            }
            if (ok) return fold_of;
        }
    }
    throw FitError("make_folds: could not build class-covering folds");
}

StackingClassifier::StackingClassifier(std::vector<ModelSpec> pool, std::size_t n_folds,
                                       std::uint64_t seed)
    : pool_(std::move(pool)), n_folds_(n_folds), seed_(seed) {}

void StackingClassifier::fit(const Matrix& X, const Labels& y, int n_classes) {
    n_classes_ = n_classes;
    std::size_t n = X.rows();
    if (n < n_folds_) throw FitError("fit_stacking: fewer rows than folds");

    fold_of_ = make_folds(y, n_classes, n_folds_, mix_seed(seed_, 0xf01d));
    int actual_folds = 1 + *std::max_element(fold_of_.begin(), fold_of_.end());

    std::size_t width = pool_.size() * static_cast<std::size_t>(n_classes);
    meta_features_ = Matrix(n, width);

    for (int f = 0; f < actual_folds; ++f) {
        std::vector<std::size_t> train_idx, held_idx;
        for (std::size_t i = 0; i < n; ++i)
            (fold_of_[i] == f ? held_idx : train_idx).push_back(i);
        Matrix x_fold = X.select(train_idx);
        Labels y_fold(train_idx.size());
        for (std::size_t i = 0; i < train_idx.size(); ++i) y_fold[i] = y[train_idx[i]];

        for (std::size_t b = 0; b < pool_.size(); ++b) {
            ModelSpec m = pool_[b];
            m.seed = mix_seed(seed_, static_cast<std::uint64_t>(f) * 131 + b);
            auto learner = make_classifier(m);
            learner->fit(x_fold, y_fold, n_classes);
            for (std::size_t i : held_idx) {
                auto proba = learner->predict_proba(X.row(i));
                for (int c = 0; c < n_classes; ++c)
                    meta_features_(i, b * static_cast<std::size_t>(n_classes) +
                                          static_cast<std::size_t>(c)) =
                        proba[static_cast<std::size_t>(c)];
            }
        }
    }

    meta_ = LogisticClassifier();
    meta_.fit(meta_features_, y, n_classes);

    // refit the bases on the full train split for inference
    members_.clear();
    for (std::size_t b = 0; b < pool_.size(); ++b) {
        ModelSpec m = pool_[b];
        m.seed = mix_seed(seed_, 0xf011u * 31 + b);
        members_.push_back(make_classifier(m));
        members_.back()->fit(X, y, n_classes);
    }
}

std::vector<double> StackingClassifier::predict_proba(std::span<const double> x) const {
    if (members_.empty()) throw PredictError("StackingClassifier: not fitted");
    std::vector<double> meta_row(members_.size() * static_cast<std::size_t>(n_classes_));
    for (std::size_t b = 0; b < members_.size(); ++b) {
        auto proba = members_[b]->predict_proba(x);
        for (int c = 0; c < n_classes_; ++c)
            meta_row[b * static_cast<std::size_t>(n_classes_) + static_cast<std::size_t>(c)] =
                proba[static_cast<std::size_t>(c)];
    }
    return meta_.predict_proba(meta_row);
}

// ---------------------------------------------------------------------------
// Majority baseline
// ---------------------------------------------------------------------------

void MajorityClassifier::fit(const Matrix&, const Labels& y, int n_classes) {
    n_classes_ = n_classes;
    auto counts = class_counts(y, n_classes);
    majority_ = 0;
    for (int c = 1; c < n_classes; ++c)
        if (counts[static_cast<std::size_t>(c)] > counts[static_cast<std::size_t>(majority_)])
            majority_ = c;
}

std::vector<double> MajorityClassifier::predict_proba(std::span<const double>) const {
    std::vector<double> proba(static_cast<std::size_t>(n_classes_), 0.0);
    proba[static_cast<std::size_t>(majority_)] = 1.0;
    return proba;
}

}  // namespace cibench
