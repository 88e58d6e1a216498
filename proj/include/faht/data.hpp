#ifndef FAHT_DATA_HPP_
#define FAHT_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "faht/core.hpp"

namespace faht {

// SplitMix64; used only to expand a user seed into generator state.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}
    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    uint64_t state_;
};

// xoshiro256** seeded via SplitMix64. The exact algorithm is pinned so that
// shuffled streams reproduce bit-identically across platforms and
// implementations; see README for the reference vectors.
class Xoshiro256StarStar {
  public:
    explicit Xoshiro256StarStar(uint64_t seed) {
        SplitMix64 sm(seed);
        for (auto& s : state_) s = sm.next();
    }

    uint64_t next() {
        uint64_t result = rotl(state_[1] * 5, 7) * 9;
        uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform draw in [0, n) by 128-bit multiply-shift.
    uint64_t next_below(uint64_t n) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t state_[4];
};

// In-place Fisher-Yates: i from n-1 down to 1, j = next_below(i+1), swap.
template <typename T>
void fisher_yates_shuffle(std::vector<T>& items, uint64_t seed) {
    Xoshiro256StarStar rng(seed);
    for (size_t i = items.size(); i > 1; --i) {
        size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

enum class DatasetFormat { Csv, Arff };

// Declarative dataset description, usually parsed from a .conf file:
//
//   path = adult.csv            # relative paths resolve against the config file
//   format = csv                # csv | arff
//   class = income
//   positive = >50K
//   sensitive = sex
//   deprived = Female
//   seed = 7                    # optional; omitted = keep file order
//   domain.sex = Male|Female    # optional pinned domain order (ordinal encoding)
//   numeric = age|fnlwgt        # optional; force columns numeric (csv only)
//
// Lines starting with '#' are comments; keys split on the first '='.
struct DatasetConfig {
    std::filesystem::path source;
    DatasetFormat format = DatasetFormat::Csv;
    std::string class_attribute;
    std::string positive_class;
    std::string sensitive_attribute;
    std::string deprived_value;
    std::optional<uint64_t> shuffle_seed;
    std::map<std::string, std::vector<std::string>> declared_domains;
    std::vector<std::string> force_numeric;

    static DatasetConfig parse_file(const std::filesystem::path& path);
    static DatasetConfig parse(std::istream& is, const std::filesystem::path& base_dir);
};

struct Dataset {
    StreamSchema schema;
    std::vector<Instance> instances;
};

// Reads the source file, closes all nominal domains (appending the reserved
// missing symbol to every nominal predictor), validates the schema roles and
// applies the Fisher-Yates shuffle when a seed is configured. Throws
// ParseError with a line number on malformed rows and SchemaError on values
// outside a declared domain.
Dataset load(const DatasetConfig& config);

// Statistical parity of the true labels, i.e. the discrimination of the
// dataset itself.
double dataset_discrimination(const Dataset& data);

// Writes the instances back out as CSV (header row, reserved symbol for
// missing) plus a config file that pins every nominal domain, so that
// load(exported config) reproduces the dataset bit-exactly.
void export_csv(const Dataset& data, std::ostream& os);
void export_dataset(const Dataset& data, const std::filesystem::path& csv_path,
                    const std::filesystem::path& config_path);

// Ordinal encoding of one attribute column (domain index for nominals, raw
// value for numerics, NaN for missing) and of the label column; feeds the
// correlation analysis.
std::vector<double> encode_attribute(const Dataset& data, int attribute);
std::vector<double> encode_labels(const Dataset& data);
std::vector<double> encode_labels(std::span<const int> labels);

// Parameter segment of a synthetic stream; see generate().
struct DriftPoint {
    long index = 0;
    double base_positive_rate = 0.0;
    double discrimination = 0.0;
};

// Synthetic binary-class / binary-SA stream generator. Instances carry two
// label-informative predictors (one numeric, one nominal), one noise
// predictor of each kind, and the sensitive attribute. Group positive rates
// are base (deprived) and base + discrimination (favored), so the empirical
// dataset discrimination converges to the target at the usual 1/sqrt(n)
// rate. With `mirrored` set, every draw is emitted twice with the sensitive
// value flipped and everything else shared, making the dataset
// discrimination exactly zero by construction.
struct SyntheticStreamSpec {
    long n = 0;
    double base_positive_rate = 0.3;
    double discrimination = 0.0;
    std::vector<DriftPoint> drift_points;
    uint64_t seed = 0;
    bool mirrored = false;
};

Dataset generate(const SyntheticStreamSpec& spec);

}  // namespace faht

#endif  // FAHT_DATA_HPP_
