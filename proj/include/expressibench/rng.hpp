// Copyright 2026 The Expressibench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <string_view>

namespace expressibench {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace detail

/**
 * Deterministic random stream identified by a (seed, stream id) pair.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the
 * standard. Distributions are implemented here rather than taken from
 * <random> so that draws are identical across standard library vendors.
 * A stream is owned by a single worker; independent workers get their
 * own stream through split().
 */
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::string_view stream_id = {})
        : seed_(seed), stream_id_(stream_id),
          engine_(detail::splitmix64(seed ^ detail::splitmix64(detail::fnv1a(stream_id)))) {}

    std::uint64_t seed() const { return seed_; }
    const std::string &stream_id() const { return stream_id_; }

    /// Child stream whose id is "<this id>/<label>".
    RngStream split(std::string_view label) const {
        std::string id = stream_id_;
        id += '/';
        id += label;
        return RngStream(seed_, id);
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [0, 2*pi).
    double angle() {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double v = two_pi * uniform();
        return v < two_pi ? v : std::nextafter(two_pi, 0.0);
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() {
        if (spare_) {
            double v = *spare_;
            spare_.reset();
            return v;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double phi = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(phi);
        return r * std::cos(phi);
    }

    /// Standard complex Gaussian: E|z|^2 = 1.
    std::complex<double> complex_normal() {
        double re = normal();
        double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

  private:
    std::uint64_t seed_;
    std::string stream_id_;
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace expressibench
