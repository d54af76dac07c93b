#pragma once

#include <string>

#include "envtool/config.hpp"
#include "envtool/vec.hpp"

namespace envtool {

// Exit codes shared by the command layer and the CLI front end.
enum ExitCode {
    kExitOk = 0,
    kExitVerifyFailed = 1,
    kExitConfig = 2,
    kExitNotCreative = 3,
    kExitBranchUnavailable = 4,
    kExitHypothesisNotMet = 5,
};

// Each command writes its outputs under outDir and returns an exit code.
// Configuration/expression problems throw ConfigError; domain-specific
// failures throw the module errors, which the front end maps to exit codes.

int cmdClassify(const FamilyConfig& cfg, const std::string& outDir);
int cmdEnvelope(const FamilyConfig& cfg, const std::string& branchName, const std::string& outDir);
int cmdDiscriminant(const FamilyConfig& cfg, const std::string& outDir, std::size_t m = 64);
int cmdEvolute(const FamilyConfig& cfg, const std::string& outDir);
int cmdPedal(const FamilyConfig& cfg, const Vec3& P, const std::string& outDir);
int cmdVerify(const FamilyConfig& cfg, const std::string& candidateText, const std::string& outDir);

int exitCodeFor(const std::exception& e);

}  // namespace envtool
