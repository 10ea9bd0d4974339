#pragma once

// Output of tests/oracles/mps_oracle.py on host101.tpg x host499.tpg (exact
// Jaccard, J_T = 0.6).

#include <set>
#include <string>
#include <utility>

namespace crosshunt::testing {

inline const std::set<std::pair<std::string, std::string>> kCrossHostPairs = {
    {"p2", "q2"}, {"p4", "q4"}, {"p5", "q5"}, {"f1", "g1"}, {"f2", "g2"},
};

}  // namespace crosshunt::testing
