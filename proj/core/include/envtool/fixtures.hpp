#pragma once

#include <string>
#include <vector>

#include "envtool/frame.hpp"

namespace envtool {

// Named family: surface, frame, radius, domain and a default grid.
struct Fixture {
    std::string name;
    std::string x;
    std::string n;  // empty = derive
    std::string s;
    std::string lambda;
    Domain domain;
    GridSpec grid;
};

const std::vector<Fixture>& fixtureRegistry();
const Fixture* findFixture(const std::string& name);

SphereFamily makeFamily(const Fixture& fx, const Bindings& bindings = {});

}  // namespace envtool
