#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace retailsim {

class BadDistributionParams : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// SplitMix64 finalizer; used to mix seeds and stream labels.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, std::string_view label);
std::uint64_t derive_seed(std::uint64_t master, double level, std::uint64_t index);

/// A distribution request: exponential(mean), uniform(a,b), triangular(a,m,b)
/// or bernoulli(p). Parameters are validated at sampling time.
struct Distribution {
    enum class Kind { Exponential, Uniform, Triangular, Bernoulli };

    Kind kind = Kind::Exponential;
    double a = 1.0;  // mean | lower | lower | p
    double b = 0.0;  // -    | upper | mode  | -
    double c = 0.0;  // -    | -     | upper | -

    static Distribution exponential(double mean) { return {Kind::Exponential, mean, 0.0, 0.0}; }
    static Distribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi, 0.0}; }
    static Distribution triangular(double lo, double mode, double hi) {
        return {Kind::Triangular, lo, mode, hi};
    }
    static Distribution bernoulli(double p) { return {Kind::Bernoulli, p, 0.0, 0.0}; }

    // Throws BadDistributionParams.
    void validate() const;
    double mean() const;

    bool operator==(const Distribution&) const = default;
};

std::string to_string(const Distribution& d);

/// Named random stream. The generator state depends only on (master seed,
/// name), so draws on one stream never perturb another.
class RngStream {
  public:
    RngStream(std::uint64_t master_seed, std::string name);

    const std::string& name() const { return name_; }

    // Uniform on [0, 1) with 53 random bits.
    double uniform01();
    double sample(const Distribution& d);
    bool bernoulli(double p);
    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

  private:
    std::string name_;
    std::mt19937_64 engine_;
};

}  // namespace retailsim
