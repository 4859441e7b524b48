#include "loglap/util.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

namespace loglap {

double DeterministicRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    have_spare_ = true;
    return r * std::cos(angle);
}

Field random_field(const ManifoldPtr& mf, DeterministicRng& rng) {
    Eigen::VectorXd values(mf->node_count());
    for (int i = 0; i < values.size(); ++i) values[i] = rng.normal();
    return Field(std::move(values), mf);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int used = std::min(threads, n);
    pool.reserve(used);
    for (int t = 0; t < used; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace loglap
