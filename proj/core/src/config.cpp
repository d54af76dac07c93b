#include "envtool/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace envtool {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

double toDouble(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("value of '" + key + "' is not a number: " + s);
    return v;
}

std::size_t toCount(const std::string& s, const std::string& key) {
    const double v = toDouble(s, key);
    if (v < 2 || v != static_cast<double>(static_cast<std::size_t>(v)))
        throw ConfigError("value of '" + key + "' must be an integer >= 2: " + s);
    return static_cast<std::size_t>(v);
}

}  // namespace

FamilyConfig FamilyConfig::parseText(const std::string& text) {
    FamilyConfig cfg;
    bool haveDomain[4] = {false, false, false, false};
    bool haveGridNu = false, haveGridNv = false;

    std::istringstream in(text);
    std::string line, section;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineNo) + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "fixture" && section != "surface" && section != "radius" &&
                section != "domain" && section != "grid" && section != "tolerances" &&
                section != "bindings" && section != "branch")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineNo) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineNo) + ": key outside any section");

        if (section == "fixture") {
            if (key != "name") throw ConfigError("unknown key '" + key + "' in [fixture]");
            const Fixture* fx = findFixture(value);
            if (!fx) throw ConfigError("unknown fixture '" + value + "'");
            cfg.fixtureName = value;
            cfg.xText = fx->x;
            cfg.nText = fx->n;
            cfg.sText = fx->s;
            cfg.lambdaText = fx->lambda;
            cfg.domain = fx->domain;
            cfg.grid = fx->grid;
            for (bool& h : haveDomain) h = true;
            haveGridNu = haveGridNv = true;
        } else if (section == "surface") {
            if (key == "x") cfg.xText = value;
            else if (key == "n") cfg.nText = value;
            else if (key == "s") cfg.sText = value;
            else throw ConfigError("unknown key '" + key + "' in [surface]");
        } else if (section == "radius") {
            if (key == "lambda") cfg.lambdaText = value;
            else throw ConfigError("unknown key '" + key + "' in [radius]");
        } else if (section == "domain") {
            if (key == "u_min") { cfg.domain.uMin = toDouble(value, key); haveDomain[0] = true; }
            else if (key == "u_max") { cfg.domain.uMax = toDouble(value, key); haveDomain[1] = true; }
            else if (key == "v_min") { cfg.domain.vMin = toDouble(value, key); haveDomain[2] = true; }
            else if (key == "v_max") { cfg.domain.vMax = toDouble(value, key); haveDomain[3] = true; }
            else if (key == "exclude") cfg.domain.exclusions = parseExclusions(value);
            else throw ConfigError("unknown key '" + key + "' in [domain]");
        } else if (section == "grid") {
            if (key == "nu") { cfg.grid.nu = toCount(value, key); haveGridNu = true; }
            else if (key == "nv") { cfg.grid.nv = toCount(value, key); haveGridNv = true; }
            else throw ConfigError("unknown key '" + key + "' in [grid]");
        } else if (section == "tolerances") {
            if (key == "eps_zero") cfg.tol.eps_zero = toDouble(value, key);
            else if (key == "eps_class") cfg.tol.eps_class = toDouble(value, key);
            else if (key == "eps_residual") cfg.tol.eps_residual = toDouble(value, key);
            else throw ConfigError("unknown key '" + key + "' in [tolerances]");
        } else if (section == "bindings") {
            cfg.bindings[key] = toDouble(value, key);
        } else if (section == "branch") {
            if (key == "theta") cfg.branchThetaText = value;
            else if (key == "phi") cfg.branchPhiText = value;
            else throw ConfigError("unknown key '" + key + "' in [branch]");
        }
    }

    if (cfg.xText.empty()) throw ConfigError("missing surface x");
    if (cfg.lambdaText.empty()) throw ConfigError("missing radius lambda");
    if (!(haveDomain[0] && haveDomain[1] && haveDomain[2] && haveDomain[3]))
        throw ConfigError("missing domain bounds");
    if (!(haveGridNu && haveGridNv)) throw ConfigError("missing grid size");
    if (cfg.domain.uMin >= cfg.domain.uMax || cfg.domain.vMin >= cfg.domain.vMax)
        throw ConfigError("domain bounds must satisfy u_min < u_max and v_min < v_max");
    try {
        cfg.tol.validate();
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

FamilyConfig FamilyConfig::parseFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parseText(ss.str());
}

SphereFamily FamilyConfig::family() const {
    SphereFamily fam;
    try {
        fam.fs.x = VecExpr::parse(xText, bindings);
        if (!nText.empty()) fam.fs.n = VecExpr::parse(nText, bindings);
        if (!sText.empty()) fam.fs.s = VecExpr::parse(sText, bindings);
        fam.lambda = Expr::parse(lambdaText, bindings);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("expression error: ") + e.what());
    }
    fam.fs.domain = domain;
    return fam;
}

}  // namespace envtool
