#pragma once

#include "hcs/dictionary.hpp"
#include "hcs/sensing.hpp"

#include <cstdint>
#include <vector>

namespace hcs {

enum class DesignStrategy { GreedyForward, RandomBaseline };

struct DesignConfig {
    int L = 1;
    std::vector<int> candidate_shifts;  // empty selects all n shifts
    DesignStrategy strategy = DesignStrategy::GreedyForward;
    int restarts = 1;
    std::uint64_t seed = 0;
};

struct DesignReport {
    std::vector<int> shifts;
    CoherenceReport coherence;
};

// Selects L mask shifts. GreedyForward starts from a seeded scan of single
// shifts and repeatedly adds the shift minimizing the coherence of the
// effective matrix (S*D when a stack is given, S alone otherwise); ties go to
// the lowest shift index. RandomBaseline samples L distinct shifts uniformly.
// The best design across restarts wins. Greedy shifts come back in selection
// order, so every prefix is itself the greedy design of that size; the forced
// full selection (L == candidate count) is returned in ascending order.
SensingMatrix design_rows(const MaskMatrix& mask, const DictionaryStack* stack,
                          const DesignConfig& cfg);

// Recomputes the coherence metrics of an existing design.
DesignReport design_report(const SensingMatrix& s, const DictionaryStack* stack);

}  // namespace hcs
