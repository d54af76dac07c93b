#pragma once

#include <optional>
#include <string>

#include "envtool/fixtures.hpp"

namespace envtool {

// Sectioned key=value family description; see README for the grammar.
// A [fixture] section pre-fills surface/radius/domain/grid from the named
// registry entry; explicitly given keys override it. Unknown sections or
// keys are rejected.
struct FamilyConfig {
    std::optional<std::string> fixtureName;
    std::string xText, nText, sText;
    std::string lambdaText;
    Domain domain;
    GridSpec grid;
    Tolerances tol;
    Bindings bindings;
    std::string branchThetaText, branchPhiText;

    static FamilyConfig parseText(const std::string& text);
    static FamilyConfig parseFile(const std::string& path);

    SphereFamily family() const;
};

}  // namespace envtool
