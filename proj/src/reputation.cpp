#include "p2pctrl/reputation.hpp"

#include <numeric>
#include <stdexcept>

namespace p2pctrl {

double trust(const TrustSample& sample) {
    if (!(sample.demanded > 0.0)) throw std::domain_error("no demand, trust undefined");
    return sample.received / sample.demanded;
}

double update_reputation(double prev, std::span<const double> trusts, double alpha) {
    if (trusts.empty()) return prev;
    const double mean =
        std::accumulate(trusts.begin(), trusts.end(), 0.0) / static_cast<double>(trusts.size());
    return alpha * prev + (1.0 - alpha) * mean;
}

} // namespace p2pctrl
