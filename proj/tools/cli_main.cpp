// entropylab-cli: batch front-end.  Subcommands construct / entropy / gaussian
// / verify; all outputs are deterministic functions of the flags (plus seed),
// so re-running a command reproduces its artifacts byte for byte.
//
// Exit codes: 0 ok, 1 statistical failure, 2 search-budget exhaustion,
// 3 verification or input failure, 64 usage error.

#include "entropylab/construction.hpp"
#include "entropylab/gaussian_lab.hpp"
#include "entropylab/io.hpp"
#include "entropylab/pseudometric.hpp"
#include "entropylab/rng.hpp"
#include "entropylab/torus_ops.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace entropylab;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitStatistical = 1;
constexpr int kExitBudget = 2;
constexpr int kExitVerification = 3;
constexpr int kExitUsage = 64;

AveragingFamily make_family(const std::string& spec) {
    if (spec == "reciprocal") return AveragingFamily::reciprocal();
    if (spec == "dyadic") return AveragingFamily::dyadic(1 << 20);  // search needs headroom
    const std::string prefix = "explicit:";
    if (spec.rfind(prefix, 0) == 0)
        return io::family_from_json(io::read_file(spec.substr(prefix.size())));
    throw CLI::ValidationError("--family", "expected reciprocal, dyadic or explicit:<path>");
}

VerifyMode make_mode(const std::string& spec, uint64_t seed) {
    if (spec == "full") return VerifyMode::Full();
    const std::string prefix = "sampled:";
    if (spec.rfind(prefix, 0) == 0) {
        std::size_t count = std::stoul(spec.substr(prefix.size()));
        if (count == 0) throw CLI::ValidationError("--mode", "sample count must be positive");
        return VerifyMode::Sampled(count, seed);
    }
    throw CLI::ValidationError("--mode", "expected full or sampled:<count>");
}

void ensure_out(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
    return dir.empty() ? name : (std::filesystem::path(dir) / name).string();
}

int cmd_construct(const std::string& family_spec, int r0, uint64_t seed,
                  const std::string& mode_spec, const std::string& out_dir, bool verify_only,
                  const std::string& in_path) {
    AveragingFamily family = make_family(family_spec);
    VerifyMode vmode = make_mode(mode_spec, seed);

    if (verify_only) {
        if (in_path.empty()) {
            std::cerr << "verify needs --in <certificate.json>\n";
            return kExitUsage;
        }
        AveragingFamily cert_family = family;
        Certificate cert = io::certificate_from_json(io::read_file(in_path), &cert_family);
        VerifyReport rep = verify_certificate(cert, cert_family, vmode);
        std::cout << "mode=" << rep.mode << " ok=" << (rep.ok ? "yes" : "no")
                  << " worst_zero=" << rep.worst_zero_case
                  << " worst_one=" << rep.worst_one_case
                  << " min_pairwise_gap=" << rep.min_pairwise_gap << "\n";
        if (!rep.ok) {
            std::cerr << "verification failed: " << rep.failure << "\n";
            return kExitVerification;
        }
        if (!out_dir.empty()) {
            ensure_out(out_dir);
            cert.verified_mode = rep.mode;
            cert.worst_zero_case = rep.worst_zero_case;
            cert.worst_one_case = rep.worst_one_case;
            io::write_file(join(out_dir, "certificate.json"),
                           io::certificate_to_json(cert, cert_family));
        }
        return kExitOk;
    }

    SearchLimits limits;
    limits.seed = seed;
    CounterexampleResult res = assemble_counterexample(family, r0, limits);

    TrigPoly g = build_g(res.cert);
    FinitePseudoMetric sep = separation_matrix(res.cert, g, family);
    FinitePseudoMetric orbit = orbit_metric(res.f, family, res.witness_J);
    std::size_t packing = packing_number(orbit, 1.0 / 40.0, Mode::exact);
    bool verdict = packing >= static_cast<std::size_t>(r0);

    ensure_out(out_dir);
    io::write_file(join(out_dir, "certificate.json"), io::certificate_to_json(res.cert, family));
    io::write_file(join(out_dir, "f.json"), io::trigpoly_to_json(res.f));
    io::write_file(join(out_dir, "separation.csv"), io::metric_to_csv(sep));
    json summary;
    summary["r0"] = r0;
    summary["r"] = res.cert.r;
    summary["family"] = family.id();
    summary["part"] = res.witness.part == Part::real ? "re" : "im";
    summary["witness_indices"] = res.witness.indices;
    summary["witness_J"] = res.witness_J;
    if (std::isfinite(res.witness.min_gap)) summary["min_gap"] = res.witness.min_gap;
    summary["packing_at_1_40"] = packing;
    summary["packing_verdict"] = verdict ? "pass" : "fail";
    summary["sup_norm_grid"] = res.sup_norm_grid;
    summary["worst_zero_case"] = res.cert.worst_zero_case;
    summary["worst_one_case"] = res.cert.worst_one_case;
    io::write_file(join(out_dir, "summary.json"), summary.dump(2) + "\n");

    std::cout << "certificate r=" << res.cert.r << " J_r=" << res.cert.J.back()
              << " witness size=" << res.witness.indices.size()
              << " N_f(1/40)=" << packing << (verdict ? " >= " : " < ") << r0 << "\n";
    return verdict ? kExitOk : kExitVerification;
}

TrigPoly trigpoly_from_args(const std::string& in_path) {
    if (in_path.empty()) throw std::invalid_argument("entropy needs --in <f.json>");
    return io::trigpoly_from_json(io::read_file(in_path));
}

int cmd_entropy(const std::string& in_path, const std::string& family_spec,
                std::vector<double> deltas, long nmax, const std::string& out_dir, bool svg) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (deltas[i] >= deltas[i - 1]) {
            std::cerr << "--deltas must be strictly descending\n";
            return kExitUsage;
        }
    TrigPoly f = trigpoly_from_args(in_path);
    AveragingFamily family = make_family(family_spec);
    std::vector<long> ns;
    for (long n = 1; n <= std::min(nmax, family.length); ++n) ns.push_back(n);
    FinitePseudoMetric orbit = orbit_metric(f, family, ns);
    if (deltas.empty()) {
        // default: 64-point geometric grid from the diameter down
        double diam = 0.0;
        for (std::size_t i = 0; i < orbit.size(); ++i)
            for (std::size_t jx = i + 1; jx < orbit.size(); ++jx)
                diam = std::max(diam, orbit.dist(i, jx));
        if (diam == 0.0) diam = 1.0;
        for (int i = 0; i < 64; ++i) deltas.push_back(diam * std::pow(0.9, i));
    }
    Mode mode = orbit.size() <= kDefaultExactCap ? Mode::exact : Mode::greedy;
    std::vector<EntropyRow> rows = entropy_profile(orbit, deltas, mode);
    ensure_out(out_dir);
    io::write_file(join(out_dir, "entropy.csv"), io::entropy_rows_to_csv(rows));
    if (svg) {
        std::vector<double> xs, ys;
        for (const auto& row : rows) {
            xs.push_back(row.delta);
            ys.push_back(row.delta * std::sqrt(std::log(static_cast<double>(row.covering))));
        }
        std::reverse(xs.begin(), xs.end());
        std::reverse(ys.begin(), ys.end());
        io::write_file(join(out_dir, "entropy.svg"),
                       io::svg_line_plot(xs, ys, "delta", "delta*sqrt(log N)"));
    }
    for (const auto& row : rows)
        std::cout << "delta=" << row.delta << " covering=" << row.covering
                  << " packing=" << row.packing << "\n";
    return kExitOk;
}

GaussianFamily random_family(RngStream& rng, std::size_t index) {
    std::size_t N = 2 + (index % 11);
    std::size_t J = 2 + ((index * 7 + 3) % 15);
    GaussianFamily fam;
    fam.A.assign(N, std::vector<double>(J));
    for (auto& row : fam.A)
        for (double& v : row) v = rng.next_normal();
    return fam;
}

int cmd_gaussian(const std::string& suite, int families, std::size_t samples, uint64_t seed,
                 std::vector<double> deltas, const std::string& out_dir) {
    const bool all = suite == "all";
    if (!all && suite != "fernique" && suite != "sudakov" && suite != "rotation" &&
        suite != "scalar") {
        std::cerr << "unknown suite '" << suite << "'\n";
        return kExitUsage;
    }
    if (deltas.empty()) deltas = {1.6, 1.2, 0.9, 0.6, 0.4, 0.25, 0.15};

    std::size_t pass = 0, fail = 0, inconclusive = 0;
    json reports = json::array();
    auto record = [&](const std::string& name, const McReport& rep) {
        switch (rep.verdict) {
            case Verdict::pass: ++pass; break;
            case Verdict::fail: ++fail; break;
            case Verdict::inconclusive: ++inconclusive; break;
        }
        json r = json::parse(io::mc_report_to_json(rep));
        r["check"] = name;
        reports.push_back(std::move(r));
        std::cout << name << ": " << to_string(rep.verdict) << " (estimate=" << rep.estimate
                  << (rep.bound ? " bound=" + std::to_string(*rep.bound) : std::string())
                  << ")\n";
    };

    RngStream famgen(seed, 0xFA111E5);
    std::string sudakov_csv;
    for (int i = 0; i < families; ++i) {
        GaussianFamily fam = random_family(famgen, static_cast<std::size_t>(i));
        uint64_t fseed = seed + 1000 + static_cast<uint64_t>(i);
        if (all || suite == "fernique")
            record("fernique[" + std::to_string(i) + "]", fernique_check(fam, samples, fseed));
        if (all || suite == "sudakov") {
            SudakovReport sr = sudakov_ratio(fam, deltas, samples, fseed);
            McReport rep = sr.sup_report;
            rep.estimate = sr.ratio;
            rep.std_error = 0.0;
            rep.bound = 6.0;
            rep.note = sr.greedy_covering ? "greedy covering (upper bound)" : "exact covering";
            rep.verdict = sr.ratio <= 6.0 ? Verdict::pass : Verdict::fail;
            record("sudakov[" + std::to_string(i) + "]", rep);
            sudakov_csv += io::sudakov_detail_to_csv(sr.detail);
        }
        if (all || suite == "rotation")
            record("rotation[" + std::to_string(i) + "]",
                   rotation_test(fam, 0.7 + 0.1 * i, samples, fseed));
    }
    if (all || suite == "scalar") {
        record("scalar.mgf(0.8,1)", scalar_identity_check(ScalarIdentity::Mgf(0.8, 1.0), samples, seed + 11));
        record("scalar.mgf(1.5,0.5)",
               scalar_identity_check(ScalarIdentity::Mgf(1.5, 0.5), samples, seed + 12));
        record("scalar.tail_integral",
               scalar_identity_check(ScalarIdentity::TailIntegral(), samples, seed + 13));
        record("scalar.moment_ratio(4)",
               scalar_identity_check(ScalarIdentity::MomentRatio(4.0), samples, seed + 14));
        record("scalar.moment_ratio(3)",
               scalar_identity_check(ScalarIdentity::MomentRatio(3.0), samples, seed + 15));
    }

    json out;
    out["suite"] = suite;
    out["samples"] = samples;
    out["seed"] = seed;
    out["pass"] = pass;
    out["fail"] = fail;
    out["inconclusive"] = inconclusive;
    out["reports"] = std::move(reports);
    if (!out_dir.empty()) {
        ensure_out(out_dir);
        io::write_file(join(out_dir, "gaussian_report.json"), out.dump(2) + "\n");
        if (!sudakov_csv.empty())
            io::write_file(join(out_dir, "sudakov_detail.csv"), sudakov_csv);
    }
    std::cout << "suite=" << suite << " pass=" << pass << " fail=" << fail
              << " inconclusive=" << inconclusive << "\n";
    if (fail > 0) return kExitStatistical;
    if (inconclusive > 0)
        std::cerr << "warning: " << inconclusive << " inconclusive check(s); raise --samples\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy-lab: certificates, entropy profiles and Gaussian checks"};
    app.require_subcommand(1);

    std::string family_spec = "reciprocal";
    int r0 = 0;
    uint64_t seed = 1;
    std::string mode_spec = "full";
    std::string out_dir;
    std::string in_path;
    std::vector<double> deltas;
    bool svg = false;
    long nmax = 24;
    std::string suite = "all";
    int families = 20;
    std::size_t samples = 100000;

    auto* construct = app.add_subcommand("construct", "search, verify and assemble a counterexample");
    construct->add_option("--family", family_spec, "reciprocal | dyadic | explicit:<path>");
    construct->add_option("--r0", r0, "witness size (r = 4 r0^2 + 2 r0)")->required();
    construct->add_option("--seed", seed, "search seed");
    construct->add_option("--mode", mode_spec, "full | sampled:<count>");
    construct->add_option("--out", out_dir, "artifact directory");
    bool verify_only = false;
    construct->add_flag("--verify-only", verify_only, "only re-verify --in certificate");
    construct->add_option("--in", in_path, "certificate JSON (with --verify-only)");

    auto* verify = app.add_subcommand("verify", "re-verify a certificate (construct --verify-only)");
    verify->add_option("--in", in_path, "certificate JSON")->required();
    verify->add_option("--mode", mode_spec, "full | sampled:<count>");
    verify->add_option("--seed", seed, "sampling seed");
    verify->add_option("--out", out_dir, "rewrite the re-verified certificate here");

    auto* entropy = app.add_subcommand("entropy", "orbit metric entropy profile of f");
    entropy->add_option("--in", in_path, "trig polynomial JSON")->required();
    entropy->add_option("--family", family_spec, "reciprocal | dyadic | explicit:<path>");
    entropy->add_option("--deltas", deltas, "descending delta grid")->delimiter(',');
    entropy->add_option("--nmax", nmax, "orbit truncation N_max");
    entropy->add_option("--out", out_dir, "artifact directory");
    entropy->add_flag("--svg", svg, "also emit delta*sqrt(log N) plot");

    auto* gaussian = app.add_subcommand("gaussian", "Monte Carlo suites");
    gaussian->add_option("--suite", suite, "fernique | sudakov | rotation | scalar | all");
    gaussian->add_option("--families", families, "number of random families");
    gaussian->add_option("--samples", samples, "Monte Carlo samples per check");
    gaussian->add_option("--seed", seed, "RNG seed");
    gaussian->add_option("--deltas", deltas, "delta grid for sudakov")->delimiter(',');
    gaussian->add_option("--out", out_dir, "artifact directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (construct->parsed()) {
            if (r0 < 1 && !verify_only) {
                std::cerr << "--r0 must be >= 1\n";
                return kExitUsage;
            }
            return cmd_construct(family_spec, r0, seed, mode_spec, out_dir, verify_only, in_path);
        }
        if (verify->parsed())
            return cmd_construct(family_spec, 0, seed, mode_spec, out_dir, true, in_path);
        if (entropy->parsed()) return cmd_entropy(in_path, family_spec, deltas, nmax, out_dir, svg);
        if (gaussian->parsed()) return cmd_gaussian(suite, families, samples, seed, deltas, out_dir);
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return kExitBudget;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitUsage;
}
