// Generates the bundled benchmark tables under data/. Each file mirrors the
// schema and the exact per-class instance counts of the corresponding UCI
// source; feature values are drawn from per-class Gaussian profiles chosen so
// the derived recipes span the same easy-to-extreme difficulty range.
// Deterministic for a given seed, so the committed files are reproducible.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cibench/common.hpp"

namespace {

using cibench::Rng;

struct FeatureProfile {
    double mean;
    double sd;
};

struct ClassProfile {
    std::string label;
    std::size_t count;
    std::vector<FeatureProfile> features;
};

struct Limits {
    double lo;
    double hi;
};

std::string format_row(const std::vector<double>& feats, const std::string& label) {
    std::string out;
    char buf[32];
    for (double v : feats) {
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        out += buf;
        out += ',';
    }
    out += label;
    return out;
}

void write_gaussian_table(const std::string& path, const std::vector<ClassProfile>& classes,
                          const std::vector<Limits>& limits, Rng& rng) {
    std::vector<std::string> rows;
    for (const auto& cls : classes) {
        for (std::size_t i = 0; i < cls.count; ++i) {
            std::vector<double> feats(cls.features.size());
            for (std::size_t j = 0; j < feats.size(); ++j) {
                double v = cls.features[j].mean + cls.features[j].sd * rng.normal();
                feats[j] = std::clamp(v, limits[j].lo, limits[j].hi);
            }
            rows.push_back(format_row(feats, cls.label));
        }
    }
    rng.shuffle(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : rows) out << r << "\n";
    std::cout << path << ": " << rows.size() << " rows\n";
}

// ---------------------------------------------------------------------------
// Glass: 214 rows, 9 features (RI, Na, Mg, Al, Si, K, Ca, Ba, Fe), classes
// 1,2,3,5,6,7 sized 70/76/17/13/9/29. Float/non-float window glass carries
// high Mg; containers/tableware/headlamps carry low Mg and high Al or Ba.
// ---------------------------------------------------------------------------

void generate_glass(const std::string& path, Rng& rng) {
    std::vector<Limits> limits = {{1.505, 1.535}, {10.7, 17.4}, {0.0, 4.5},  {0.29, 3.5},
                                  {69.8, 75.4},   {0.0, 6.2},   {5.4, 16.2}, {0.0, 3.2},
                                  {0.0, 0.51}};
    std::vector<ClassProfile> classes = {
        // building float: tight high-Mg high-RI signature
        {"1", 70, {{1.5212, 0.0007}, {13.2, 0.35}, {3.72, 0.08}, {1.10, 0.10},
                   {72.6, 0.45}, {0.45, 0.12}, {8.8, 0.40}, {0.02, 0.04}, {0.06, 0.06}}},
        // building non-float
        {"2", 76, {{1.5180, 0.0012}, {13.1, 0.55}, {2.85, 0.22}, {1.48, 0.18},
                   {72.6, 0.65}, {0.52, 0.25}, {9.3, 0.85}, {0.04, 0.08}, {0.07, 0.08}}},
        // vehicle float: sits between the two building kinds
        {"3", 17, {{1.5191, 0.0010}, {13.3, 0.50}, {3.28, 0.22}, {1.28, 0.16},
                   {72.4, 0.55}, {0.44, 0.18}, {9.0, 0.60}, {0.03, 0.05}, {0.08, 0.08}}},
        // containers
        {"5", 13, {{1.5190, 0.0025}, {13.0, 0.85}, {0.85, 0.45}, {2.05, 0.30},
                   {72.2, 0.80}, {1.55, 0.90}, {10.1, 1.40}, {0.12, 0.18}, {0.06, 0.07}}},
        // tableware
        {"6", 9, {{1.5175, 0.0015}, {14.4, 0.60}, {1.35, 0.45}, {1.30, 0.22},
                  {73.2, 0.65}, {0.05, 0.05}, {9.6, 0.70}, {0.0, 0.02}, {0.0, 0.02}}},
        // headlamps
        {"7", 29, {{1.5170, 0.0012}, {14.3, 0.55}, {0.45, 0.40}, {2.20, 0.28},
                   {72.9, 0.60}, {0.25, 0.25}, {8.6, 0.70}, {1.05, 0.40}, {0.02, 0.04}}},
    };
    write_gaussian_table(path, classes, limits, rng);
}

// ---------------------------------------------------------------------------
// Ecoli: 336 rows, 7 features (mcg, gvh, lip, chg, aac, alm1, alm2), eight
// localization classes. Inner membrane (im*) carries high alm scores;
// periplasm and outer membrane carry high mcg/lip.
// ---------------------------------------------------------------------------

void generate_ecoli(const std::string& path, Rng& rng) {
    std::vector<Limits> limits(7, Limits{0.0, 1.0});
    std::vector<ClassProfile> classes = {
        {"cp", 143, {{0.36, 0.10}, {0.40, 0.09}, {0.48, 0.02}, {0.50, 0.01},
                     {0.46, 0.10}, {0.32, 0.08}, {0.36, 0.08}}},
        {"im", 77, {{0.46, 0.11}, {0.48, 0.10}, {0.48, 0.02}, {0.50, 0.01},
                    {0.51, 0.10}, {0.78, 0.08}, {0.74, 0.09}}},
        {"imS", 2, {{0.58, 0.06}, {0.55, 0.06}, {0.75, 0.05}, {0.50, 0.01},
                    {0.52, 0.06}, {0.70, 0.06}, {0.63, 0.06}}},
        {"imL", 2, {{0.55, 0.06}, {0.50, 0.06}, {0.95, 0.03}, {0.70, 0.05},
                    {0.50, 0.06}, {0.72, 0.06}, {0.66, 0.06}}},
        // imU blends into im: the hard minority of the family
        {"imU", 35, {{0.50, 0.11}, {0.51, 0.10}, {0.48, 0.02}, {0.50, 0.01},
                     {0.53, 0.10}, {0.70, 0.10}, {0.67, 0.10}}},
        {"om", 20, {{0.71, 0.08}, {0.56, 0.09}, {0.59, 0.10}, {0.50, 0.01},
                    {0.72, 0.08}, {0.42, 0.08}, {0.40, 0.08}}},
        {"omL", 5, {{0.70, 0.07}, {0.57, 0.07}, {0.96, 0.03}, {0.50, 0.01},
                    {0.63, 0.07}, {0.44, 0.07}, {0.43, 0.07}}},
        {"pp", 52, {{0.72, 0.09}, {0.74, 0.09}, {0.48, 0.02}, {0.50, 0.01},
                    {0.49, 0.10}, {0.36, 0.09}, {0.34, 0.09}}},
    };
    write_gaussian_table(path, classes, limits, rng);
}

// ---------------------------------------------------------------------------
// Yeast: 1484 rows, 8 features (mcg, gvh, alm, mit, erl, pox, vac, nuc), ten
// localization classes. CYT/NUC/VAC overlap heavily; ME3/ME1/ERL carry
// distinctive single-feature signatures.
// ---------------------------------------------------------------------------

void generate_yeast(const std::string& path, Rng& rng) {
    std::vector<Limits> limits(8, Limits{0.0, 1.0});
    std::vector<ClassProfile> classes = {
        {"CYT", 463, {{0.47, 0.11}, {0.47, 0.10}, {0.48, 0.08}, {0.24, 0.09},
                      {0.50, 0.01}, {0.0, 0.02}, {0.50, 0.06}, {0.25, 0.09}}},
        {"NUC", 429, {{0.50, 0.11}, {0.49, 0.10}, {0.50, 0.08}, {0.26, 0.09},
                      {0.50, 0.01}, {0.0, 0.02}, {0.51, 0.06}, {0.36, 0.11}}},
        {"MIT", 244, {{0.52, 0.11}, {0.50, 0.10}, {0.44, 0.09}, {0.52, 0.10},
                      {0.50, 0.01}, {0.0, 0.02}, {0.50, 0.06}, {0.26, 0.09}}},
        // ME3 is the separable mid-size minority (mit + alm signature)
        {"ME3", 163, {{0.52, 0.10}, {0.53, 0.10}, {0.70, 0.06}, {0.80, 0.06},
                      {0.50, 0.01}, {0.0, 0.02}, {0.51, 0.06}, {0.28, 0.09}}},
        {"ME2", 51, {{0.51, 0.11}, {0.52, 0.10}, {0.54, 0.09}, {0.55, 0.10},
                     {0.50, 0.01}, {0.0, 0.02}, {0.50, 0.06}, {0.28, 0.09}}},
        {"ME1", 44, {{0.54, 0.10}, {0.77, 0.08}, {0.56, 0.09}, {0.40, 0.10},
                     {0.50, 0.01}, {0.0, 0.02}, {0.50, 0.06}, {0.27, 0.09}}},
        {"EXC", 35, {{0.66, 0.09}, {0.70, 0.09}, {0.49, 0.09}, {0.32, 0.10},
                     {0.50, 0.01}, {0.0, 0.02}, {0.50, 0.06}, {0.26, 0.09}}},
        // VAC sits inside the CYT/NUC cloud: effectively unlearnable
        {"VAC", 30, {{0.50, 0.13}, {0.50, 0.12}, {0.49, 0.09}, {0.30, 0.12},
                     {0.50, 0.01}, {0.0, 0.02}, {0.52, 0.07}, {0.30, 0.11}}},
        {"POX", 20, {{0.48, 0.11}, {0.48, 0.10}, {0.48, 0.08}, {0.26, 0.10},
                     {0.50, 0.01}, {0.55, 0.28}, {0.50, 0.06}, {0.26, 0.09}}},
        {"ERL", 5, {{0.52, 0.09}, {0.51, 0.09}, {0.50, 0.08}, {0.30, 0.09},
                    {1.00, 0.01}, {0.0, 0.02}, {0.50, 0.06}, {0.27, 0.09}}},
    };
    write_gaussian_table(path, classes, limits, rng);
}

// ---------------------------------------------------------------------------
// Abalone: 4177 rows, 8 features (sex as -1/0/1, length, diameter, height,
// whole, shucked, viscera, shell weight), ring-age label. Sizes follow a
// saturating growth curve of the ring count, so adjacent high-age bins
// overlap just as they do in the real measurements.
// ---------------------------------------------------------------------------

void generate_abalone(const std::string& path, Rng& rng, double size_noise) {
    // per-ring counts; bin sums are 189 / 2577 / 1186 / 225 (rings 1-20)
    const std::vector<std::pair<int, std::size_t>> ring_counts = {
        {1, 1},   {2, 1},   {3, 15},  {4, 57},  {5, 115},
        {6, 263}, {7, 397}, {8, 576}, {9, 699}, {10, 642},
        {11, 487}, {12, 267}, {13, 203}, {14, 126}, {15, 103},
        {16, 67}, {17, 58}, {18, 42}, {19, 32}, {20, 26},
    };

    std::vector<std::string> rows;
    for (const auto& [rings, count] : ring_counts) {
        for (std::size_t i = 0; i < count; ++i) {
            double r = static_cast<double>(rings);
            double p_infant = std::clamp(0.92 - 0.085 * r, 0.02, 0.95);
            double sex;
            double roll = rng.u01();
            if (roll < p_infant) sex = 0.0;               // infant
            else sex = (rng.u01() < 0.5) ? 1.0 : -1.0;     // male / female

            double growth = 0.75 * (1.0 - std::exp(-0.11 * r));
            // heavy-tailed individual growth: a minority of slow/fast growers
            double sigma = (rng.u01() < 0.2) ? 2.4 * size_noise : size_noise;
            double length = growth * std::exp(sigma * rng.normal());
            if (sex == 0.0) length *= 0.96;
            length = std::clamp(length, 0.05, 0.83);

            double diameter = length * (0.78 + 0.02 * rng.normal());
            double height = std::clamp(length * (0.345 + 0.05 * rng.normal()), 0.01, 1.1);
            double whole = 6.2 * std::pow(length, 3.0) * std::exp(0.12 * rng.normal());
            double shucked = whole * std::clamp(0.44 - 0.002 * r + 0.045 * rng.normal(), 0.15, 0.65);
            double viscera = whole * std::clamp(0.22 + 0.03 * rng.normal(), 0.08, 0.40);
            double shell = whole * std::clamp(0.25 + 0.003 * r + 0.04 * rng.normal(), 0.12, 0.55);

            rows.push_back(format_row({sex, length, diameter, height, whole, shucked, viscera,
                                       shell},
                                      std::to_string(rings)));
        }
    }
    rng.shuffle(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& r : rows) out << r << "\n";
    std::cout << path << ": " << rows.size() << " rows\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generate the bundled benchmark tables"};
    std::string out_dir = "data";
    std::uint64_t seed = 20240817;
    double abalone_noise = 0.12;
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--abalone-noise", abalone_noise, "size noise of the abalone growth curve");
    CLI11_PARSE(app, argc, argv);

    std::filesystem::create_directories(out_dir);
    try {
        Rng glass_rng(cibench::mix_seed(seed, 1));
        generate_glass(out_dir + "/glass.data", glass_rng);
        Rng ecoli_rng(cibench::mix_seed(seed, 2));
        generate_ecoli(out_dir + "/ecoli.data", ecoli_rng);
        Rng yeast_rng(cibench::mix_seed(seed, 3));
        generate_yeast(out_dir + "/yeast.data", yeast_rng);
        Rng abalone_rng(cibench::mix_seed(seed, 4));
        generate_abalone(out_dir + "/abalone.data", abalone_rng, abalone_noise);
    } catch (const std::exception& e) {
        std::cerr << "datagen failed: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
