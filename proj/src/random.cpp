#include "retailsim/random.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace retailsim {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
    std::uint64_t h = basis;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    return mix64(mix64(master) ^ fnv1a64(label));
}

std::uint64_t derive_seed(std::uint64_t master, double level, std::uint64_t index) {
    // +0.0 and -0.0 must map to the same replication seed
    if (level == 0.0) level = 0.0;
    std::uint64_t h = mix64(master);
    h = mix64(h ^ std::bit_cast<std::uint64_t>(level));
    return mix64(h ^ index);
}

void Distribution::validate() const {
    auto fail = [this](const char* why) {
        throw BadDistributionParams(to_string(*this) + ": " + why);
    };
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) fail("non-finite parameter");
    switch (kind) {
        case Kind::Exponential:
            if (!(a > 0.0)) fail("mean must be > 0");
            break;
        case Kind::Uniform:
            if (!(a <= b)) fail("requires a <= b");
            break;
        case Kind::Triangular:
            if (!(a <= b && b <= c)) fail("requires a <= mode <= b");
            break;
        case Kind::Bernoulli:
            if (!(a >= 0.0 && a <= 1.0)) fail("p must lie in [0, 1]");
            break;
    }
}

double Distribution::mean() const {
    switch (kind) {
        case Kind::Exponential: return a;
        case Kind::Uniform: return 0.5 * (a + b);
        case Kind::Triangular: return (a + b + c) / 3.0;
        case Kind::Bernoulli: return a;
    }
    return 0.0;
}

std::string to_string(const Distribution& d) {
    std::ostringstream os;
    switch (d.kind) {
        case Distribution::Kind::Exponential: os << "exponential(" << d.a << ")"; break;
        case Distribution::Kind::Uniform: os << "uniform(" << d.a << ", " << d.b << ")"; break;
        case Distribution::Kind::Triangular:
            os << "triangular(" << d.a << ", " << d.b << ", " << d.c << ")";
            break;
        case Distribution::Kind::Bernoulli: os << "bernoulli(" << d.a << ")"; break;
    }
    return os.str();
}

RngStream::RngStream(std::uint64_t master_seed, std::string name)
    : name_(std::move(name)), engine_(derive_seed(master_seed, name_)) {}

double RngStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

bool RngStream::bernoulli(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw BadDistributionParams("bernoulli: p must lie in [0, 1]");
    return uniform01() < p;
}

std::uint64_t RngStream::below(std::uint64_t n) {
    if (n == 0) throw BadDistributionParams("below: n must be > 0");
    // plain rejection sampling; std::uniform_int_distribution differs across stdlibs
    const std::uint64_t limit = ~0ULL - (~0ULL % n);
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

double RngStream::sample(const Distribution& d) {
    d.validate();
    switch (d.kind) {
        case Distribution::Kind::Exponential:
            return -d.a * std::log1p(-uniform01());
        case Distribution::Kind::Uniform:
            return d.a + (d.b - d.a) * uniform01();
        case Distribution::Kind::Triangular: {
            const double lo = d.a, mode = d.b, hi = d.c;
            if (hi == lo) return lo;
            const double u = uniform01();
            const double cut = (mode - lo) / (hi - lo);
            if (u < cut) return lo + std::sqrt(u * (hi - lo) * (mode - lo));
            return hi - std::sqrt((1.0 - u) * (hi - lo) * (hi - mode));
        }
        case Distribution::Kind::Bernoulli:
            return uniform01() < d.a ? 1.0 : 0.0;
    }
    return 0.0;
}

}  // namespace retailsim
