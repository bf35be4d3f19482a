#include "cellwalk/rng.hpp"

#include <stdexcept>
#include <vector>

namespace cellwalk {

AliasTable::AliasTable(const std::vector<double>& weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw std::invalid_argument("alias table requires at least one outcome");
    size_ = n;
    accept_.assign(n, 1.0);
    alias_.assign(n, 0);

    double total = 0.0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / total;

    std::vector<int> small, large;
    for (std::size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));

    while (!small.empty() && !large.empty()) {
        const int s = small.back();
        small.pop_back();
        const int l = large.back();
        large.pop_back();
        accept_[static_cast<std::size_t>(s)] = scaled[static_cast<std::size_t>(s)];
        alias_[static_cast<std::size_t>(s)] = l;
        scaled[static_cast<std::size_t>(l)] =
            scaled[static_cast<std::size_t>(l)] + scaled[static_cast<std::size_t>(s)] - 1.0;
        (scaled[static_cast<std::size_t>(l)] < 1.0 ? small : large).push_back(l);
    }
    for (int i : large) accept_[static_cast<std::size_t>(i)] = 1.0;
    for (int i : small) accept_[static_cast<std::size_t>(i)] = 1.0;
}

}  // namespace cellwalk
