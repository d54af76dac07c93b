// Batch front end: classify / envelope / discriminant / evolute / pedal /
// verify over a family described by a config file. See README for the config
// grammar, output formats and exit codes.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "envtool/commands.hpp"

namespace {

envtool::Vec3 parsePoint(const std::string& text) {
    envtool::Vec3 p;
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &p.x, &p.y, &p.z, &trailing) != 3)
        throw envtool::ConfigError("--point expects x,y,z");
    return p;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"envelopes of sphere families: classification, construction and verification"};
    app.require_subcommand(1);

    std::string configPath, outDir = ".", branch = "plus", point = "0,0,0", candidate;
    std::size_t sphereSamples = 64;

    auto addCommon = [&](CLI::App* cmd) {
        cmd->add_option("--config", configPath, "family config file")->required();
        cmd->add_option("--out", outDir, "output directory (default: current)");
    };

    CLI::App* cClassify = app.add_subcommand("classify", "label grid points Sigma1..Sigma5 and count envelopes");
    addCommon(cClassify);
    CLI::App* cEnvelope = app.add_subcommand("envelope", "sample an envelope branch as an OBJ mesh");
    addCommon(cEnvelope);
    cEnvelope->add_option("--branch", branch, "plus|minus|unique|custom (default plus)");
    CLI::App* cDiscriminant = app.add_subcommand("discriminant", "sample the discriminant set decomposition");
    addCommon(cDiscriminant);
    cDiscriminant->add_option("--samples", sphereSamples, "points per circle/sphere component (default 64)");
    CLI::App* cEvolute = app.add_subcommand("evolute", "solve the evolute roots over the grid");
    addCommon(cEvolute);
    CLI::App* cPedal = app.add_subcommand("pedal", "pedal surface relative to a base point");
    addCommon(cPedal);
    cPedal->add_option("--point", point, "base point P as x,y,z (default origin)");
    CLI::App* cVerify = app.add_subcommand("verify", "check a candidate map against the envelope conditions");
    addCommon(cVerify);
    cVerify->add_option("--candidate", candidate, "candidate map \"(ex, ey, ez)\"")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const envtool::FamilyConfig cfg = envtool::FamilyConfig::parseFile(configPath);
        int rc = envtool::kExitOk;
        if (cClassify->parsed()) rc = envtool::cmdClassify(cfg, outDir);
        else if (cEnvelope->parsed()) rc = envtool::cmdEnvelope(cfg, branch, outDir);
        else if (cDiscriminant->parsed()) rc = envtool::cmdDiscriminant(cfg, outDir, sphereSamples);
        else if (cEvolute->parsed()) rc = envtool::cmdEvolute(cfg, outDir);
        else if (cPedal->parsed()) rc = envtool::cmdPedal(cfg, parsePoint(point), outDir);
        else if (cVerify->parsed()) rc = envtool::cmdVerify(cfg, candidate, outDir);
        if (rc != envtool::kExitOk) std::fprintf(stderr, "exit code %d\n", rc);
        return rc;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return envtool::exitCodeFor(e);
    }
}
