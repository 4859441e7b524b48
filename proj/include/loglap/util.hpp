#pragma once

#include "loglap/manifold.hpp"

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace loglap {

/// splitmix64-based generator; fully specified so seeded runs are
/// bit-reproducible across platforms and standard libraries.
class DeterministicRng {
public:
    explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller.
    double normal();

    DeterministicRng fork(std::uint64_t stream) {
        DeterministicRng child(state_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
        child.next_u64();
        return child;
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

Field random_field(const ManifoldPtr& mf, DeterministicRng& rng);

/// Runs fn(i) for i in [0, n) across at most `threads` workers. Each index is
/// an independent unit; callers store results by index so the reduction order
/// is fixed regardless of the worker count.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

} // namespace loglap
