// Copyright (c) extbell contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "extbell/scenario.hpp"

namespace extbell::testing {

inline Measurement binary(const std::string& label) { return Measurement{label, {"0", "1"}}; }

inline Party singleton_party(const std::string& id, int count) {
    std::vector<Measurement> ms;
    std::vector<std::vector<std::string>> ctx;
    for (int i = 0; i < count; ++i) {
        ms.push_back(binary(id + std::to_string(i)));
        ctx.push_back({id + std::to_string(i)});
    }
    return Party(id, ms, ctx);
}

inline Party path_party(const std::string& id) {
    return Party(id, {binary(id + "0"), binary(id + "1"), binary(id + "2")},
                 {{id + "0", id + "1"}, {id + "1", id + "2"}});
}

inline Party triangle_party(const std::string& id) {
    return Party(id, {binary(id + "0"), binary(id + "1"), binary(id + "2")},
                 {{id + "0", id + "1"}, {id + "1", id + "2"}, {id + "2", id + "0"}});
}

inline Party cycle_party(const std::string& id, int n) {
    std::vector<Measurement> ms;
    std::vector<std::vector<std::string>> ctx;
    for (int i = 0; i < n; ++i) {
        ms.push_back(binary(id + std::to_string(i)));
        ctx.push_back({id + std::to_string(i), id + std::to_string((i + 1) % n)});
    }
    return Party(id, ms, ctx);
}

inline ScenarioPtr chsh() { return std::make_shared<Scenario>("chsh", std::vector{singleton_party("A", 2), singleton_party("B", 2)}); }
inline ScenarioPtr chain() { return std::make_shared<Scenario>("chain", std::vector{singleton_party("A", 2), path_party("B")}); }
inline ScenarioPtr triangle() { return std::make_shared<Scenario>("triangle", std::vector{singleton_party("A", 2), triangle_party("B")}); }
inline ScenarioPtr square() { return std::make_shared<Scenario>("square", std::vector{singleton_party("A", 2), cycle_party("B", 4)}); }

}  // namespace extbell::testing
