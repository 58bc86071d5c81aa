#pragma once

#include "secrescope/channels.hpp"

namespace secrescope {

// Relay hops: the first hop feeds K relays, the second hop fans out to M
// legitimate receivers and N eavesdroppers.
struct HopPair {
    LinkSpec first;
    LinkSpec second;
    int scenario = 1;

    // Scenario 1 pairs (EtaMu, EtaMuIG); scenario 2 pairs (KappaMu, KappaMuIG).
    void validate() const;
};

struct SystemConfig {
    int scenario = 1;
    LinkSpec first_hop;
    LinkSpec multicast_hop;
    LinkSpec eaves_hop;
    int K = 1;
    int M = 1;
    int N = 1;
    double target_rate = 0.0;  // bits/s/Hz

    void validate() const;
    HopPair main_pair() const { return {first_hop, multicast_hop, scenario}; }
    HopPair eaves_pair() const { return {first_hop, eaves_hop, scenario}; }
};

}  // namespace secrescope
