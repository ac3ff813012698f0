#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "mecsched/schedulers.hpp"

namespace mecsched {

namespace {

// Savings of the same accepted set summed in different orders differ only in
// the last bits; such branches count as tied and the earlier finish wins.
bool same_saving(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

DpResult dp_cpu_schedule(std::span<const DpCandidate> candidates, std::size_t cap) {
    const std::size_t n = candidates.size();
    if (n > cap || n > 30) {
        throw BudgetExceeded("dp_cpu_schedule: " + std::to_string(n) + " candidates exceed the cap of " +
                             std::to_string(std::min<std::size_t>(cap, 30)));
    }
    DpResult result;
    if (n == 0) return result;

    const std::size_t size = std::size_t{1} << n;
    std::vector<double> saving(size, 0.0);
    std::vector<double> time(size, 0.0);
    std::vector<std::uint8_t> last(size, 0);
    std::vector<std::uint8_t> accepted(size, 0);

    // Numeric order visits every U - {i} before U.
    for (std::size_t mask = 1; mask < size; ++mask) {
        bool have = false;
        double best_saving = 0.0;
        double best_time = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t bit = std::size_t{1} << i;
            if ((mask & bit) == 0) continue;
            const std::size_t rest = mask ^ bit;
            const DpCandidate& c = candidates[i];
            double s = saving[rest];
            double t = time[rest];
            const double finish = std::max(c.tx_time_s, t) + c.exec_time_s;
            const bool fits = finish <= c.deadline_s;
            if (fits) {
                s += c.saving_j;
                t = finish;
            }
            const bool better = !have || (same_saving(s, best_saving) ? t < best_time : s > best_saving);
            if (better) {
                have = true;
                best_saving = s;
                best_time = t;
                last[mask] = static_cast<std::uint8_t>(i);
                accepted[mask] = fits ? 1 : 0;
            }
        }
        saving[mask] = best_saving;
        time[mask] = best_time;
    }

    std::size_t mask = size - 1;
    result.total_saving_j = saving[mask];
    result.completion_time_s = time[mask];
    while (mask != 0) {
        const std::size_t i = last[mask];
        if (accepted[mask] != 0) result.exec_order.push_back(i);
        mask ^= std::size_t{1} << i;
    }
    std::reverse(result.exec_order.begin(), result.exec_order.end());
    result.accepted = result.exec_order;
    std::sort(result.accepted.begin(), result.accepted.end());
    return result;
}

}  // namespace mecsched
