// Command-line front end: single-geometry simulation, visibility sweeps,
// permanent-invariance certification runs, and the three-mode search.
//
// Exit codes: 0 ok, 2 usage error, 3 unwritable output, 4 property failure.

#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptperm/correlations.hpp"
#include "ptperm/invariance.hpp"
#include "ptperm/io.hpp"
#include "ptperm/propagator.hpp"
#include "ptperm/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitPropertyFailure = 4;

/// Expands `--params file.json` into flags: every key in the file whose flag
/// is absent from the command line is appended as `--key value`, so explicit
/// flags always win.
std::vector<std::string> expand_params(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--params") {
            path = args[i + 1];
            break;
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--params", "cannot open '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw CLI::ValidationError("--params", "file must hold a JSON object");
    for (auto& [key, value] : j.items()) {
        const std::string flag = "--" + key;
        if (std::find(args.begin(), args.end(), flag) != args.end()) continue;
        args.push_back(flag);
        if (value.is_string()) {
            args.push_back(value.get<std::string>());
        } else if (value.is_number_integer()) {
            args.push_back(std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            args.push_back(ptperm::fmt17(value.get<double>()));
        } else {
            throw CLI::ValidationError("--params", "unsupported value type for key '" + key + "'");
        }
    }
    return args;
}

struct OutputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw OutputError("cannot write '" + path + "'");
    return out;
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
    std::string geometry;
    double kappa{};
    double gamma_re{};
    double gamma_im{0.0};
    double length{};
    double indist{1.0};
};

int run_simulate(const SimulateOpts& o) {
    const ptperm::Geometry g = ptperm::parse_geometry(o.geometry);
    const ptperm::CouplerParams p{o.kappa, {o.gamma_re, o.gamma_im}, o.length};
    const ptperm::Mat2 t = ptperm::compose_geometry(g, p);
    const ptperm::TwoPhotonResult res = ptperm::two_photon(t, o.indist);

    ptperm::RunManifest manifest;
    manifest.command = "simulate";
    manifest.params = {{"geometry", o.geometry},   {"kappa", o.kappa},
                       {"gamma-re", o.gamma_re},   {"gamma-im", o.gamma_im},
                       {"length", o.length},       {"indist", o.indist}};

    nlohmann::json out{{"geometry", o.geometry},
                       {"matrix", ptperm::to_json(t)},
                       {"perm", ptperm::to_json(ptperm::perm2(t))},
                       {"p_indist", res.p_indist},
                       {"p_dist", res.p_dist},
                       {"visibility", ptperm::to_json(res.visibility)},
                       {"manifest", ptperm::to_json(manifest)}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct SweepOpts {
    std::string geometry;
    double kappa{0.85};
    double kl_min{}, kl_max{};
    long kl_steps{-1};
    double gok_min{}, gok_max{};
    long gok_steps{-1};
    double gok_re{}, gok_im{0.0};
    bool gok_re_set{false};
    double len_min{}, len_max{};
    long len_steps{-1};
    double indist{1.0};
    std::string out_path, svg_path, json_path;
};

int run_sweep(const SweepOpts& o) {
    const ptperm::Geometry g = ptperm::parse_geometry(o.geometry);
    const bool map_mode = o.gok_steps >= 0;
    const bool curve_mode = o.gok_re_set && o.len_steps >= 0;
    if (map_mode == curve_mode) {
        throw CLI::ValidationError(
            "sweep", "use either --gok-min/--gok-max/--gok-steps (map mode) or "
                     "--gok-re [--gok-im] with --len-min/--len-max/--len-steps (curve mode)");
    }

    ptperm::RunManifest manifest;
    manifest.command = "sweep";
    manifest.params = {{"geometry", o.geometry}, {"indist", o.indist}};

    if (map_mode) {
        if (o.kl_steps < 2 || o.gok_steps < 2) {
            throw CLI::ValidationError("sweep", "axis steps must be >= 2");
        }
        manifest.params["kl-min"] = o.kl_min;
        manifest.params["kl-max"] = o.kl_max;
        manifest.params["kl-steps"] = o.kl_steps;
        manifest.params["gok-min"] = o.gok_min;
        manifest.params["gok-max"] = o.gok_max;
        manifest.params["gok-steps"] = o.gok_steps;
        ptperm::VisibilityGrid grid;
        try {
            grid = ptperm::visibility_map(
                g, {o.kl_min, o.kl_max, static_cast<std::size_t>(o.kl_steps)},
                {o.gok_min, o.gok_max, static_cast<std::size_t>(o.gok_steps)});
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("sweep", e.what());
        }
        if (o.indist != 1.0) {
            for (auto& v : grid.values)
                if (v) *v *= o.indist;
        }
        auto csv = open_output(o.out_path);
        ptperm::write_map_csv(csv, grid, manifest);
        if (!o.svg_path.empty()) {
            auto svg = open_output(o.svg_path);
            ptperm::write_map_svg(svg, grid);
        }
        if (!o.json_path.empty()) {
            auto js = open_output(o.json_path);
            js << ptperm::map_to_json(grid, manifest).dump(2) << "\n";
        }
    } else {
        if (o.len_steps < 2) throw CLI::ValidationError("sweep", "--len-steps must be >= 2");
        if (!(o.len_min < o.len_max) || o.len_min < 0.0) {
            throw CLI::ValidationError("sweep", "need 0 <= len-min < len-max");
        }
        manifest.params["kappa"] = o.kappa;
        manifest.params["gok-re"] = o.gok_re;
        manifest.params["gok-im"] = o.gok_im;
        manifest.params["len-min"] = o.len_min;
        manifest.params["len-max"] = o.len_max;
        manifest.params["len-steps"] = o.len_steps;
        std::vector<double> lengths;
        lengths.reserve(static_cast<std::size_t>(o.len_steps));
        for (long i = 0; i < o.len_steps; ++i) {
            lengths.push_back(o.len_min + (o.len_max - o.len_min) * static_cast<double>(i) /
                                              static_cast<double>(o.len_steps - 1));
        }
        const ptperm::Cplx gamma =
            ptperm::Cplx(o.gok_re, o.gok_im) * o.kappa;  // flags give gamma/kappa
        ptperm::CurveSet cs;
        try {
            cs = ptperm::visibility_curves({g}, o.kappa, gamma, std::move(lengths), o.indist);
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("sweep", e.what());
        }
        auto csv = open_output(o.out_path);
        ptperm::write_curve_csv(csv, cs, 0, manifest);
        if (!o.svg_path.empty()) {
            auto svg = open_output(o.svg_path);
            ptperm::write_curves_svg(svg, cs);
        }
        if (!o.json_path.empty()) {
            auto js = open_output(o.json_path);
            js << ptperm::curves_to_json(cs, manifest).dump(2) << "\n";
        }
    }
    return kExitOk;
}

struct InvarianceOpts {
    std::string mode;
    long trials{};
    std::uint64_t seed{1};
    int max_len{10};
    double tol{ptperm::kDefaultTol};
};

int run_invariance(const InvarianceOpts& o) {
    if (o.trials <= 0) throw CLI::ValidationError("invariance", "--trials must be > 0");
    const auto trials = static_cast<std::uint64_t>(o.trials);
    ptperm::InvarianceReport report;
    if (o.mode == "pair") {
        report = ptperm::run_pair_invariance(trials, o.seed, o.tol);
    } else if (o.mode == "sequence") {
        report = ptperm::run_sequence_reversal(trials, o.max_len, o.seed, o.tol);
    } else if (o.mode == "lemma") {
        report = ptperm::run_antidiagonal_lemma(trials, o.seed, o.tol);
    } else if (o.mode == "unitary") {
        report = ptperm::run_unitary_phase(trials, o.seed, o.tol);
    } else if (o.mode == "antidiag-seq") {
        report = ptperm::run_antidiag_sequences(trials, o.max_len, o.seed, o.tol);
    } else {
        throw CLI::ValidationError("invariance", "unknown --mode '" + o.mode + "'");
    }

    ptperm::RunManifest manifest;
    manifest.command = "invariance";
    manifest.seed = o.seed;
    manifest.params = {{"mode", o.mode},
                       {"trials", o.trials},
                       {"seed", o.seed},
                       {"max-len", o.max_len},
                       {"tol", o.tol}};
    nlohmann::json out = ptperm::to_json(report);
    out["manifest"] = ptperm::to_json(manifest);
    std::cout << out.dump(2) << "\n";
    return report.max_residual <= o.tol ? kExitOk : kExitPropertyFailure;
}

struct Search3Opts {
    long trials{};
    std::uint64_t seed{1};
    double tol{ptperm::kDefaultTol};
};

int run_search3(const Search3Opts& o) {
    if (o.trials <= 0) throw CLI::ValidationError("search3", "--trials must be > 0");
    const ptperm::ThreeModeReport report =
        ptperm::search_3mode(static_cast<std::uint64_t>(o.trials), o.seed, o.tol);

    ptperm::RunManifest manifest;
    manifest.command = "search3";
    manifest.seed = o.seed;
    manifest.params = {{"trials", o.trials}, {"seed", o.seed}, {"tol", o.tol}};
    nlohmann::json out = ptperm::to_json(report);
    out["manifest"] = ptperm::to_json(manifest);
    std::cout << out.dump(2) << "\n";
    return report.failed_pmp_trials.empty() ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-photon quantum correlations in PT-symmetric two-mode networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ptperm::kVersion);

    std::string params_path;  // handled by expand_params; registered so CLI11 accepts it

    SimulateOpts sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Evaluate one geometry at one point");
    simulate->add_option("--geometry", sim.geometry, "m-xmtx | m-mt | mt-m | xmtx-m")->required();
    simulate->add_option("--kappa", sim.kappa, "Coupling constant (1/length)")->required();
    simulate->add_option("--gamma-re", sim.gamma_re, "Re of loss coefficient")->required();
    simulate->add_option("--gamma-im", sim.gamma_im, "Im of loss coefficient (detuning)");
    simulate->add_option("--length", sim.length, "Section length")->required();
    simulate->add_option("--indist", sim.indist, "Photon indistinguishability in [0,1]");
    simulate->add_option("--params", params_path, "JSON file with defaults for these flags");

    SweepOpts sw;
    CLI::App* sweep = app.add_subcommand("sweep", "Visibility map or length curves");
    sweep->add_option("--geometry", sw.geometry)->required();
    sweep->add_option("--kappa", sw.kappa, "Coupling constant, curve mode (default 0.85)");
    sweep->add_option("--kl-min", sw.kl_min);
    sweep->add_option("--kl-max", sw.kl_max);
    sweep->add_option("--kl-steps", sw.kl_steps);
    sweep->add_option("--gok-min", sw.gok_min);
    sweep->add_option("--gok-max", sw.gok_max);
    sweep->add_option("--gok-steps", sw.gok_steps);
    auto* gok_re_opt = sweep->add_option("--gok-re", sw.gok_re, "Re(gamma/kappa), curve mode");
    sweep->add_option("--gok-im", sw.gok_im, "Im(gamma/kappa), curve mode");
    sweep->add_option("--len-min", sw.len_min);
    sweep->add_option("--len-max", sw.len_max);
    sweep->add_option("--len-steps", sw.len_steps);
    sweep->add_option("--indist", sw.indist);
    sweep->add_option("--out", sw.out_path, "CSV output path")->required();
    sweep->add_option("--svg", sw.svg_path, "Optional SVG output path");
    sweep->add_option("--json", sw.json_path, "Optional JSON output path");
    sweep->add_option("--params", params_path, "JSON file with defaults for these flags");

    InvarianceOpts inv;
    CLI::App* invariance = app.add_subcommand("invariance", "Randomized invariance certification");
    invariance->add_option("--mode", inv.mode, "pair | sequence | lemma | unitary | antidiag-seq")
        ->required();
    invariance->add_option("--trials", inv.trials)->required();
    invariance->add_option("--seed", inv.seed);
    invariance->add_option("--max-len", inv.max_len, "Max sequence length (sequence modes)");
    invariance->add_option("--tol", inv.tol);
    invariance->add_option("--params", params_path, "JSON file with defaults for these flags");

    Search3Opts s3;
    CLI::App* search3 = app.add_subcommand("search3", "Three-mode N=PMP order-invariance search");
    search3->add_option("--trials", s3.trials)->required();
    search3->add_option("--seed", s3.seed);
    search3->add_option("--tol", s3.tol);
    search3->add_option("--params", params_path, "JSON file with defaults for these flags");

    try {
        std::vector<std::string> args = expand_params(argc, argv);
        std::reverse(args.begin(), args.end());  // CLI11 consumes back-to-front
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        sw.gok_re_set = gok_re_opt->count() > 0;
        if (simulate->parsed()) return run_simulate(sim);
        if (sweep->parsed()) return run_sweep(sw);
        if (invariance->parsed()) return run_invariance(inv);
        if (search3->parsed()) return run_search3(s3);
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const OutputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
