#include "envtool/commands.hpp"

#include <cmath>
#include <filesystem>

#include "envtool/applications.hpp"
#include "envtool/discriminant.hpp"
#include "envtool/envelope.hpp"
#include "envtool/mesh.hpp"
#include "envtool/parallel.hpp"

namespace envtool {

namespace {

std::string outPath(const std::string& outDir, const std::string& name) {
    std::filesystem::create_directories(outDir);
    return (std::filesystem::path(outDir) / name).string();
}

Branch branchFromName(const FamilyConfig& cfg, const std::string& name) {
    if (name == "plus") return Branch::plusGamma();
    if (name == "minus") return Branch::minusGamma();
    if (name == "unique") return Branch::uniqueGammaZero();
    if (name == "custom") {
        // [branch] theta/phi expressions, or plain numeric bindings of the
        // same names when the section is absent.
        std::string thetaText = cfg.branchThetaText;
        std::string phiText = cfg.branchPhiText;
        auto fromBinding = [&](const char* key) -> std::string {
            auto it = cfg.bindings.find(key);
            return it == cfg.bindings.end() ? std::string() : fmt17(it->second);
        };
        if (thetaText.empty()) thetaText = fromBinding("theta");
        if (phiText.empty()) phiText = fromBinding("phi");
        if (thetaText.empty())
            throw ConfigError("custom branch requires [branch] theta or a theta binding");
        const JetFn theta = jetFnFromExpr(Expr::parse(thetaText, cfg.bindings));
        if (phiText.empty()) return Branch::customTheta(theta);
        return Branch::customThetaPhi(theta, jetFnFromExpr(Expr::parse(phiText, cfg.bindings)));
    }
    throw ConfigError("unknown branch '" + name + "' (expected plus|minus|unique|custom)");
}

void appendClassificationSummary(CsvWriter& csv, const GridClassification& cls,
                                 const EnvelopeCountResult& count) {
    csv.comment("summary");
    csv.comment("valid_points=" + std::to_string(cls.validCount));
    for (Sigma s : {Sigma::S1, Sigma::S2, Sigma::S3, Sigma::S4, Sigma::S5, Sigma::NotCreative,
                    Sigma::Ambiguous}) {
        csv.comment(std::string(sigmaName(s)) + "_count=" +
                    std::to_string(cls.counts[static_cast<std::size_t>(s)]) + " fraction=" +
                    fmt17(cls.fraction(s)));
    }
    csv.comment(std::string("dense_Sigma1=") + (cls.denseS1 ? "yes" : "no"));
    csv.comment(std::string("dense_Sigma2=") + (cls.denseS2 ? "yes" : "no"));
    csv.comment(std::string("dense_Sigma3=") + (cls.denseS3 ? "yes" : "no"));
    csv.comment(std::string("dense_Sigma123=") + (cls.denseS123 ? "yes" : "no"));
    csv.comment(std::string("open_witness_Sigma45=") + (cls.openWitnessS45 ? "yes" : "no"));
    csv.comment("density_threshold=" + fmt17(cls.densityThreshold));
    csv.comment(std::string("count=") + countName(count.kind));
}

}  // namespace

int cmdClassify(const FamilyConfig& cfg, const std::string& outDir) {
    const SphereFamily fam = cfg.family();
    const EnvelopeCountResult count = envelopeCount(fam, cfg.grid, cfg.tol);
    const GridClassification& cls = count.evidence;

    CsvWriter csv({"u", "v", "sigma", "J_F", "J_a", "J_b", "alpha", "beta"});
    for (std::size_t j = 0; j < cfg.grid.nv; ++j) {
        const double v = cfg.grid.vAt(cfg.domain, j);
        for (std::size_t i = 0; i < cfg.grid.nu; ++i) {
            const double u = cfg.grid.uAt(cfg.domain, i);
            const PointClass& pc = cls.points[cfg.grid.index(i, j)];
            if (!pc.valid) continue;
            const bool empty = pc.kind == SolutionKind::Empty;
            csv.row({fmt17(u), fmt17(v), sigmaName(pc.sigma), fmt17(pc.jF), fmt17(pc.jA),
                     fmt17(pc.jB), empty ? "nan" : fmt17(pc.alpha), empty ? "nan" : fmt17(pc.beta)});
        }
    }
    appendClassificationSummary(csv, cls, count);
    csv.save(outPath(outDir, "classify.csv"));
    return cls.anyEmpty ? kExitNotCreative : kExitOk;
}

int cmdEnvelope(const FamilyConfig& cfg, const std::string& branchName, const std::string& outDir) {
    const SphereFamily fam = cfg.family();
    const Branch branch = branchFromName(cfg, branchName);

    // Branch sampling is parallel per row; CSV/OBJ assembly stays serial and
    // ordered.
    struct Sample {
        Vec3 f;
        double rOn, rU, rV;
    };
    std::vector<std::optional<Sample>> computed(cfg.grid.size());
    parallelForRows(cfg.grid.nv, [&](std::size_t j) {
        const double v = cfg.grid.vAt(cfg.domain, j);
        for (std::size_t i = 0; i < cfg.grid.nu; ++i) {
            const double u = cfg.grid.uAt(cfg.domain, i);
            if (cfg.domain.excluded(u, v, cfg.tol)) continue;
            const CreatorJet cj = creatorJet(fam, u, v, branch, cfg.tol);
            const Vec3 d = value(cj.f) - value(toJet1(cj.frame.x));
            Sample smp;
            smp.f = value(cj.f);
            smp.rOn = std::abs(dot(d, d) - cj.lambda.val * cj.lambda.val);
            smp.rU = std::abs(dot(duValue(cj.f), d));
            smp.rV = std::abs(dot(dvValue(cj.f), d));
            computed[cfg.grid.index(i, j)] = smp;
        }
    });

    std::vector<std::optional<Vec3>> samples(cfg.grid.size());
    CsvWriter csv({"u", "v", "res_on_sphere", "res_tan_u", "res_tan_v"});
    double maxOn = 0, maxU = 0, maxV = 0;
    for (std::size_t j = 0; j < cfg.grid.nv; ++j) {
        const double v = cfg.grid.vAt(cfg.domain, j);
        for (std::size_t i = 0; i < cfg.grid.nu; ++i) {
            const double u = cfg.grid.uAt(cfg.domain, i);
            const auto& smp = computed[cfg.grid.index(i, j)];
            if (!smp) continue;
            samples[cfg.grid.index(i, j)] = smp->f;
            maxOn = std::max(maxOn, smp->rOn);
            maxU = std::max(maxU, smp->rU);
            maxV = std::max(maxV, smp->rV);
            csv.row({fmt17(u), fmt17(v), fmt17(smp->rOn), fmt17(smp->rU), fmt17(smp->rV)});
        }
    }
    csv.comment("max_res_on_sphere=" + fmt17(maxOn));
    csv.comment("max_res_tan_u=" + fmt17(maxU));
    csv.comment("max_res_tan_v=" + fmt17(maxV));

    ObjWriter obj;
    obj.object("envelope_" + branchName);
    emitGridMesh(obj, cfg.grid, samples);

    obj.save(outPath(outDir, "envelope_" + branchName + ".obj"));
    csv.save(outPath(outDir, "envelope_" + branchName + "_residuals.csv"));
    return kExitOk;
}

int cmdDiscriminant(const FamilyConfig& cfg, const std::string& outDir, std::size_t m) {
    const SphereFamily fam = cfg.family();
    const DiscriminantSample ds = decomposeD(fam, cfg.grid, m, cfg.tol);

    ObjWriter obj;
    CsvWriter csv({"component", "kind", "points", "max_F", "max_Fu", "max_Fv"});
    for (const auto& comp : ds.components) {
        obj.object(comp.tag);
        double mF = 0, mU = 0, mV = 0;
        if (comp.kind == DComponent::Kind::EnvelopeSheet) {
            // Sheet points arrive in row-major grid order; rebuild the grid
            // layout so faces can be emitted.
            std::vector<std::optional<Vec3>> samples(cfg.grid.size());
            std::size_t cursor = 0;
            for (std::size_t j = 0; j < cfg.grid.nv; ++j)
                for (std::size_t i = 0; i < cfg.grid.nu; ++i) {
                    if (cursor >= comp.points.size()) break;
                    const double u = cfg.grid.uAt(cfg.domain, i);
                    const double v = cfg.grid.vAt(cfg.domain, j);
                    const DPoint& dp = comp.points[cursor];
                    if (dp.at.x == u && dp.at.y == v) {
                        samples[cfg.grid.index(i, j)] = dp.p;
                        ++cursor;
                    }
                }
            emitGridMesh(obj, cfg.grid, samples);
        } else {
            std::vector<std::size_t> idx;
            idx.reserve(comp.points.size());
            for (const auto& dp : comp.points) idx.push_back(obj.vertex(dp.p));
            if (comp.kind == DComponent::Kind::Circle) {
                obj.polyline(idx, true);
            } else {
                for (std::size_t k : idx) obj.point(k);
            }
        }
        for (const auto& dp : comp.points) {
            mF = std::max(mF, std::abs(dp.res.F));
            mU = std::max(mU, std::abs(dp.res.Fu));
            mV = std::max(mV, std::abs(dp.res.Fv));
        }
        const char* kindName = comp.kind == DComponent::Kind::EnvelopeSheet ? "envelope"
                               : comp.kind == DComponent::Kind::Circle      ? "circle"
                                                                            : "sphere";
        csv.row({comp.tag, kindName, std::to_string(comp.points.size()), fmt17(mF), fmt17(mU),
                 fmt17(mV)});
    }
    csv.comment("total_points=" + std::to_string(ds.totalPoints));
    csv.comment("max_F=" + fmt17(ds.maxF));
    csv.comment("max_Fu=" + fmt17(ds.maxFu));
    csv.comment("max_Fv=" + fmt17(ds.maxFv));

    obj.save(outPath(outDir, "discriminant.obj"));
    csv.save(outPath(outDir, "discriminant_summary.csv"));
    return ds.anyNotCreative ? kExitNotCreative : kExitOk;
}

int cmdEvolute(const FamilyConfig& cfg, const std::string& outDir) {
    const SphereFamily fam = cfg.family();
    CsvWriter csv({"u", "v", "root_index", "delta", "theta", "residual", "double_root",
                   "rows_degenerate", "continuity_break"});
    // Roots tracked per sheet by ascending order; a change in root count
    // against the left neighbor is reported instead of silently patched.
    std::vector<std::vector<std::optional<Vec3>>> sheets;
    std::vector<int> prevCount(cfg.grid.nu, -1);
    for (std::size_t j = 0; j < cfg.grid.nv; ++j) {
        const double v = cfg.grid.vAt(cfg.domain, j);
        int leftCount = -1;
        for (std::size_t i = 0; i < cfg.grid.nu; ++i) {
            const double u = cfg.grid.uAt(cfg.domain, i);
            if (cfg.domain.excluded(u, v, cfg.tol)) { leftCount = -1; continue; }
            const EvoluteSolution sol = evoluteAt(fam.fs, u, v, cfg.tol);
            const int count = static_cast<int>(sol.roots.size());
            const bool breakFlag = (leftCount >= 0 && leftCount != count);
            for (std::size_t k = 0; k < sol.roots.size(); ++k) {
                const EvoluteRoot& r = sol.roots[k];
                if (k >= sheets.size()) sheets.emplace_back(cfg.grid.size());
                sheets[k][cfg.grid.index(i, j)] = sol.point(r);
                csv.row({fmt17(u), fmt17(v), std::to_string(k), fmt17(r.delta),
                         r.theta ? fmt17(*r.theta) : "nan", fmt17(r.residual),
                         r.doubleRoot ? "1" : "0", r.rowsDegenerate ? "1" : "0",
                         breakFlag ? "1" : "0"});
            }
            if (sol.detIdenticallyZero)
                csv.row({fmt17(u), fmt17(v), "-1", "nan", "nan", "0", "0", "1", "0"});
            leftCount = count;
        }
    }
    ObjWriter obj;
    for (std::size_t k = 0; k < sheets.size(); ++k) {
        obj.object("evolute_sheet_" + std::to_string(k));
        emitGridMesh(obj, cfg.grid, sheets[k]);
    }
    obj.save(outPath(outDir, "evolute.obj"));
    csv.save(outPath(outDir, "evolute.csv"));
    return kExitOk;
}

int cmdPedal(const FamilyConfig& cfg, const Vec3& P, const std::string& outDir) {
    const SphereFamily fam = cfg.family();
    CsvWriter csv({"u", "v", "pe_x", "pe_y", "pe_z"});
    std::vector<std::optional<Vec3>> samples(cfg.grid.size());
    for (std::size_t j = 0; j < cfg.grid.nv; ++j) {
        const double v = cfg.grid.vAt(cfg.domain, j);
        for (std::size_t i = 0; i < cfg.grid.nu; ++i) {
            const double u = cfg.grid.uAt(cfg.domain, i);
            if (cfg.domain.excluded(u, v, cfg.tol)) continue;
            const PedalPoint pp = pedalAt(fam.fs, P, u, v, cfg.tol);
            samples[cfg.grid.index(i, j)] = pp.pe;
            csv.row({fmt17(u), fmt17(v), fmt17(pp.pe.x), fmt17(pp.pe.y), fmt17(pp.pe.z)});
        }
    }
    ObjWriter obj;
    obj.object("pedal");
    emitGridMesh(obj, cfg.grid, samples);
    obj.save(outPath(outDir, "pedal.obj"));
    csv.save(outPath(outDir, "pedal.csv"));
    return kExitOk;
}

int cmdVerify(const FamilyConfig& cfg, const std::string& candidateText, const std::string& outDir) {
    const SphereFamily fam = cfg.family();
    VecExpr cand;
    try {
        cand = VecExpr::parse(candidateText, cfg.bindings);
    } catch (const ParseError& e) {
        throw ConfigError(std::string("candidate expression error: ") + e.what());
    }
    const ResidualReport rep = verifyEnvelope(cand, fam, cfg.grid, cfg.tol);
    std::string txt;
    txt += std::string("verdict: ") + (rep.pass ? "PASS" : "FAIL") + "\n";
    txt += "candidate: " + cand.print() + "\n";
    txt += "points_checked: " + std::to_string(rep.checked) + "\n";
    txt += "max |f-x|^2-lambda^2 : " + fmt17(rep.maxOnSphere) + "\n";
    txt += "max |f_u.(f-x)|      : " + fmt17(rep.maxTanU) + "\n";
    txt += "max |f_v.(f-x)|      : " + fmt17(rep.maxTanV) + "\n";
    txt += "max scaled residual  : " + fmt17(rep.maxScaled) + "\n";
    txt += "tolerance            : " + fmt17(rep.tolUsed) + "\n";
    txt += "on_sphere_fail_fraction: " + fmt17(rep.fracOnSphereFail) + "\n";
    writeFile(outPath(outDir, "verify_report.txt"), txt);
    return rep.pass ? kExitOk : kExitVerifyFailed;
}

int exitCodeFor(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e))
        return kExitConfig;
    if (dynamic_cast<const NotCreativeError*>(&e)) return kExitNotCreative;
    if (dynamic_cast<const BranchUnavailableError*>(&e)) return kExitBranchUnavailable;
    if (dynamic_cast<const HypothesisNotMetError*>(&e)) return kExitHypothesisNotMet;
    return kExitConfig;
}

}  // namespace envtool
