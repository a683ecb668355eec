#pragma once

#include <cstdint>
#include <random>

namespace rydberg {

/// Independent random stream identified by (seed, stream index). Workers
/// derive one stream per shot, so results do not depend on how shots are
/// distributed over threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    double uniform(); // [0, 1)
    double normal();  // N(0, 1)
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Stream index for shot `shot` of scan point `point`.
constexpr std::uint64_t shot_stream(std::uint64_t point, std::uint64_t shot,
                                    std::uint64_t shots_per_point) {
    return point * shots_per_point + shot;
}

} // namespace rydberg
