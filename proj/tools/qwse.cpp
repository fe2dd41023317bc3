// Command-line front end: engineer targets, export phase-space grids, run the
// built-in target suite, compile coin sequences to optics, and simulate coin
// sequences. Exit codes: 0 success, 1 completed but below the 0.999 fidelity
// gate, 2 usage/parse errors, 3 infeasible target.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <qwse/qwse.hpp>

namespace {

namespace fs = std::filesystem;

constexpr double k_fidelity_gate = 0.999;

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Default output directory: QWSE_OUT_DIR if set, else the working directory.
fs::path default_out_dir() {
    if (const char* dir = std::getenv("QWSE_OUT_DIR")) return fs::path(dir);
    return fs::path(".");
}

void write_text_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing: " + path.string());
}

std::vector<qwse::CoinParams> parse_coin_list(const std::string& text) {
    std::vector<qwse::CoinParams> coins;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        if (semi == std::string::npos) semi = text.size();
        const std::string item = text.substr(start, semi - start);
        double v[3];
        std::size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
            std::size_t comma = item.find(',', pos);
            const std::string num =
                item.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t used = 0;
            v[i] = std::stod(num, &used);
            if (used != num.size()) throw std::invalid_argument("bad coin angle '" + num + "'");
            if (i < 2) {
                if (comma == std::string::npos)
                    throw std::invalid_argument("coin needs theta,xi,zeta: '" + item + "'");
                pos = comma + 1;
            } else if (comma != std::string::npos) {
                throw std::invalid_argument("too many angles in coin '" + item + "'");
            }
        }
        coins.emplace_back(v[0], v[1], v[2]);
        start = semi + 1;
    }
    return coins;
}

std::vector<double> parse_semicolon_doubles(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t semi = text.find(';', start);
        if (semi == std::string::npos) semi = text.size();
        const std::string num = text.substr(start, semi - start);
        std::size_t used = 0;
        out.push_back(std::stod(num, &used));
        if (used != num.size()) throw std::invalid_argument("bad number '" + num + "'");
        start = semi + 1;
    }
    return out;
}

std::string file_slug(const std::string& name) {
    std::string out;
    for (char c : name)
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-') out += c;
    return out.empty() ? std::string("target") : out;
}

struct EngineerOptions {
    std::string target_spec;
    int steps = 5;
    std::optional<std::uint64_t> seed;
    int starts = 32;
    bool do_compile = false;
    double alpha0 = 0.0;
    double charge = 0.5;
    std::optional<long long> shots;
    int resamples = 200;
    bool no_refine = false;
    double refine_target = 0.5;
    std::string out_path;
};

/// Runs engineer for one target and fills a report. Returns the achieved
/// fidelity. Throws qwse exceptions upward for exit-code mapping.
qwse::RunReport run_engineer(const EngineerOptions& opt) {
    const qwse::Lattice lattice(opt.steps);
    const qwse::WalkerState target = qwse::parse_target_spec(opt.target_spec, lattice);
    const qwse::EngineeringProblem problem(opt.steps, target);

    qwse::OptimizerConfig config;
    config.multistarts = opt.starts;
    config.seed = opt.seed.value_or(fresh_seed());
    config.refine_probability = !opt.no_refine;
    config.probability_target = opt.refine_target;

    qwse::RunReport report;
    report.target_spec = opt.target_spec;
    report.lattice = lattice;
    report.result = qwse::optimize(problem, config);
    report.master_seed = config.seed;
    report.timestamp = qwse::iso8601_utc_now();

    const auto engineered =
        qwse::project_coin(qwse::evolve(problem.initial, report.result.coins), problem.projection);

    if (opt.do_compile) {
        const qwse::QPlateParams qplate(qwse::pi, opt.alpha0, opt.charge);
        qwse::OpticsReport optics;
        optics.circuit = qwse::compile(report.result.coins, qplate, problem.projection,
                                       lattice.oam_step);
        const auto physical = qwse::simulate_physical(optics.circuit, problem.initial);
        optics.fidelity_vs_ideal = qwse::fidelity(engineered.first, physical.first);
        optics.probability = physical.second;
        report.optics = std::move(optics);
    }

    const auto basis = qwse::gram_schmidt_basis(target);
    report.basis_probabilities = qwse::basis_probabilities(engineered.first, basis);

    if (opt.shots) {
        qwse::SimEstimateReport sim;
        sim.shots = *opt.shots;
        sim.seed = qwse::substream_seed(config.seed, 10001);
        sim.counts = qwse::simulate_counts(engineered.first, basis, sim.shots, sim.seed);
        const auto est = qwse::estimate_fidelity_mc(sim.counts, 0, opt.resamples,
                                                    qwse::substream_seed(config.seed, 10002));
        sim.f_hat = est.f_hat;
        sim.sigma = est.sigma;
        sim.resamples = est.resamples;
        report.sim_estimate = std::move(sim);
    }
    return report;
}

int cmd_engineer(const EngineerOptions& opt) {
    const qwse::RunReport report = run_engineer(opt);
    const fs::path out = opt.out_path.empty()
                             ? default_out_dir() / "engineer-report.json"
                             : fs::path(opt.out_path);
    write_text_file(out, qwse::serialize_report(report));
    std::cout << "target:      " << report.target_spec << "\n"
              << "fidelity:    " << std::setprecision(12) << report.result.fidelity << "\n"
              << "probability: " << report.result.probability << "\n"
              << "seed:        " << report.master_seed << "\n"
              << "report:      " << out.string() << "\n";
    if (report.result.fidelity < k_fidelity_gate) {
        std::cerr << "warning: fidelity below " << k_fidelity_gate << " gate\n";
        return 1;
    }
    return 0;
}

int cmd_qfunc(const std::string& state, const std::string& field, const std::string& grid_spec,
              double s, double theta, bool polar, const std::string& out_path) {
    const std::size_t x = grid_spec.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= grid_spec.size())
        throw CLI::ValidationError("--grid", "expected AxB, e.g. 128x256");
    int n_alpha = 0, n_beta = 0;
    try {
        std::size_t ua = 0, ub = 0;
        const std::string sa = grid_spec.substr(0, x), sb = grid_spec.substr(x + 1);
        n_alpha = std::stoi(sa, &ua);
        n_beta = std::stoi(sb, &ub);
        if (ua != sa.size() || ub != sb.size()) throw std::invalid_argument(grid_spec);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--grid", "expected AxB with integer A, B");
    }
    const qwse::SphericalGrid grid = qwse::SphericalGrid::uniform(n_alpha, n_beta);

    int j = 0;  // 0 = incoherent "state"
    if (state == "psi1") j = 1;
    else if (state == "psi2") j = 2;
    else if (state != "inc") throw CLI::ValidationError("--state", "must be psi1, psi2 or inc");

    qwse::QField out_field = [&]() -> qwse::QField {
        if (field == "q")
            return j == 0 ? qwse::q_incoherent(grid, s, theta) : qwse::husimi_q(j, grid, s, theta);
        if (field == "qinc") return qwse::q_incoherent(grid, s, theta);
        if (field == "interf") return qwse::interference_term(grid, s, theta);
        if (field == "ratio") {
            if (j == 0) {
                // Incoherent baseline against itself: identically 1 where defined.
                qwse::QField f = qwse::coherence_ratio(1, grid, s, theta);
                qwse::QField inc2 = qwse::q_incoherent(grid, s, theta);
                for (std::size_t i = 0; i < f.values.size(); ++i)
                    f.values[i] = inc2.values[i] <= 1e-12
                                      ? std::numeric_limits<double>::quiet_NaN()
                                      : 1.0;
                f.sign_j = 0;
                return f;
            }
            return qwse::coherence_ratio(j, grid, s, theta);
        }
        throw CLI::ValidationError("--field", "must be q, qinc, interf or ratio");
    }();

    const fs::path out =
        out_path.empty() ? default_out_dir() / "qfunc.csv" : fs::path(out_path);
    std::ostringstream os;
    if (polar)
        qwse::write_polar_csv(out_field, os);
    else
        qwse::write_field_csv(out_field, os);
    write_text_file(out, os.str());
    std::cout << "grid:   " << n_alpha << "x" << n_beta << "\n"
              << "masked: " << out_field.masked_count << "\n"
              << "csv:    " << out.string() << "\n";
    return 0;
}

int cmd_batch(const std::string& suite, std::optional<std::uint64_t> seed_opt, int starts,
              const std::string& out_dir_path) {
    if (suite != "table1") throw CLI::ValidationError("--suite", "only 'table1' is available");
    const fs::path dir = out_dir_path.empty() ? default_out_dir() : fs::path(out_dir_path);
    fs::create_directories(dir);
    const std::uint64_t master = seed_opt.value_or(fresh_seed());

    const auto catalog = qwse::table1_catalog();
    std::ostringstream csv;
    csv << "target,fidelity,probability\n" << std::setprecision(17);
    bool any_below = false;
    for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& entry = catalog[i];
        EngineerOptions opt;
        opt.target_spec = entry.spec;
        opt.steps = 5;
        opt.seed = qwse::substream_seed(master, i);
        opt.starts = starts;
        const qwse::RunReport report = run_engineer(opt);
        std::ostringstream name;
        name << std::setw(2) << std::setfill('0') << (i + 1) << "-" << file_slug(entry.name)
             << ".json";
        write_text_file(dir / name.str(), qwse::serialize_report(report));
        csv << entry.name << ',' << report.result.fidelity << ',' << report.result.probability
            << '\n';
        const bool ok = report.result.fidelity >= k_fidelity_gate;
        any_below = any_below || !ok;
        std::cout << entry.name << ": F=" << std::setprecision(10) << report.result.fidelity
                  << " p=" << std::setprecision(4) << report.result.probability
                  << (ok ? "" : "  [below gate]") << "\n";
    }
    write_text_file(dir / "summary.csv", csv.str());
    std::cout << "master seed: " << master << "\nsummary: " << (dir / "summary.csv").string()
              << "\n";
    return any_below ? 1 : 0;
}

int cmd_compile(const std::string& coins_text, const std::string& alpha0_text, double charge,
                const std::string& json_path) {
    const std::vector<qwse::CoinParams> coins = parse_coin_list(coins_text);
    std::vector<double> alpha0s = parse_semicolon_doubles(alpha0_text);
    if (alpha0s.size() == 1) alpha0s.assign(coins.size(), alpha0s.front());
    if (alpha0s.size() != coins.size())
        throw CLI::ValidationError("--alpha0", "need one value, or one per coin");
    std::vector<qwse::QPlateParams> qplates;
    qplates.reserve(coins.size());
    for (double a : alpha0s) qplates.emplace_back(qwse::pi, a, charge);

    const qwse::PhysicalCircuit circuit = qwse::compile(coins, qplates);
    std::cout << qwse::format_circuit_table(circuit);

    if (!json_path.empty()) {
        qwse::OpticsReport optics;
        optics.circuit = circuit;
        const auto ideal =
            qwse::project_coin(qwse::evolve(qwse::WalkerCoinState::initial(), coins),
                               circuit.projection);
        const auto physical = qwse::simulate_physical(circuit, qwse::WalkerCoinState::initial());
        optics.fidelity_vs_ideal = qwse::fidelity(ideal.first, physical.first);
        optics.probability = physical.second;

        qwse::ordered_json j;
        j["schema"] = 1;
        j["coins"] = qwse::ordered_json::array();
        for (const auto& c : coins)
            j["coins"].push_back({{"theta", c.theta}, {"xi", c.xi}, {"zeta", c.zeta}});
        qwse::ordered_json steps = qwse::ordered_json::array();
        for (const auto& step : circuit.steps) {
            qwse::ordered_json s;
            s["waveplates"] = qwse::ordered_json::array();
            for (const auto& wp : step.waveplates)
                s["waveplates"].push_back(
                    {{"kind", wp.kind == qwse::WaveplateKind::QWP ? "QWP" : "HWP"},
                     {"angle", wp.angle}});
            s["qplate"] = {{"delta", step.qplate.delta},
                           {"alpha0", step.qplate.alpha0},
                           {"q", step.qplate.q}};
            steps.push_back(std::move(s));
        }
        j["steps"] = std::move(steps);
        j["compensation"] = qwse::ordered_json::array();
        for (const auto& wp : circuit.compensation)
            j["compensation"].push_back(
                {{"kind", wp.kind == qwse::WaveplateKind::QWP ? "QWP" : "HWP"},
                 {"angle", wp.angle}});
        j["fidelity_vs_ideal"] = optics.fidelity_vs_ideal;
        j["probability"] = optics.probability;
        j["version"] = qwse::version;
        write_text_file(fs::path(json_path), j.dump(2) + "\n");
        std::cout << "json: " << json_path << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& coins_text, std::optional<long long> shots,
                 std::optional<std::uint64_t> seed_opt, const std::string& out_path) {
    const std::vector<qwse::CoinParams> coins = parse_coin_list(coins_text);
    const auto projected =
        qwse::project_coin(qwse::evolve(qwse::WalkerCoinState::initial(), coins),
                           qwse::CoinKet::plus());
    const qwse::WalkerState& state = projected.first;
    const qwse::Lattice lattice = state.lattice();

    qwse::ordered_json j;
    j["schema"] = 1;
    j["coins"] = qwse::ordered_json::array();
    for (const auto& c : coins)
        j["coins"].push_back({{"theta", c.theta}, {"xi", c.xi}, {"zeta", c.zeta}});
    j["lattice"] = {{"n_steps", lattice.n_steps}, {"oam_step", lattice.oam_step}};
    j["probability"] = projected.second;
    j["amplitudes"] = qwse::ordered_json::array();
    j["site_probabilities"] = qwse::ordered_json::array();
    for (int i = 0; i < lattice.dim(); ++i) {
        const qwse::cdouble a = state[static_cast<std::size_t>(i)];
        j["amplitudes"].push_back({a.real(), a.imag()});
        j["site_probabilities"].push_back(std::norm(a));
    }
    if (shots) {
        const std::uint64_t seed = seed_opt.value_or(fresh_seed());
        std::vector<qwse::WalkerState> basis;
        for (int i = 0; i < lattice.dim(); ++i) {
            std::vector<qwse::cdouble> v(static_cast<std::size_t>(lattice.dim()));
            v[static_cast<std::size_t>(i)] = 1.0;
            basis.emplace_back(lattice, std::move(v));
        }
        j["shots"] = *shots;
        j["seed"] = seed;
        j["counts"] = qwse::simulate_counts(state, basis, *shots, seed);
    }
    j["version"] = qwse::version;

    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(fs::path(out_path), text);
        std::cout << "report: " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Qudit engineering via discrete-time quantum walks"};
    app.require_subcommand(1);

    // engineer
    EngineerOptions eng;
    std::uint64_t eng_seed = 0;
    auto* engineer = app.add_subcommand("engineer", "Find coins for a target state");
    engineer->add_option("--target", eng.target_spec, "target spec, e.g. cat:phi=0")->required();
    engineer->add_option("--steps", eng.steps, "walk length n")->capture_default_str();
    auto* eng_seed_opt = engineer->add_option("--seed", eng_seed, "master seed");
    engineer->add_option("--starts", eng.starts, "multistart count")->capture_default_str();
    engineer->add_flag("--compile", eng.do_compile, "attach compiled optics");
    engineer->add_option("--alpha0", eng.alpha0, "q-plate orientation phase (with --compile)")
        ->capture_default_str();
    engineer->add_option("--q", eng.charge, "q-plate topological charge (with --compile)")
        ->capture_default_str();
    long long eng_shots = 0;
    auto* eng_shots_opt =
        engineer->add_option("--shots", eng_shots, "simulate counting with this many shots");
    engineer->add_option("--resamples", eng.resamples, "Monte Carlo resamples for sigma")
        ->capture_default_str();
    engineer->add_flag("--no-refine", eng.no_refine,
                       "skip the probability-budget refinement pass");
    engineer->add_option("--refine-target", eng.refine_target,
                         "post-selection probability budget")
        ->capture_default_str();
    engineer->add_option("--out", eng.out_path, "report path (default: engineer-report.json)");

    // qfunc
    std::string qf_state = "psi1", qf_field = "q", qf_grid = "128x256", qf_out;
    double qf_s = 2.5, qf_theta = qwse::pi / 2.0;
    bool qf_polar = false;
    auto* qfunc = app.add_subcommand("qfunc", "Export phase-space fields");
    qfunc->add_option("--state", qf_state, "psi1 | psi2 | inc")->capture_default_str();
    qfunc->add_option("--field", qf_field, "q | qinc | interf | ratio")->capture_default_str();
    qfunc->add_option("--grid", qf_grid, "alpha x beta resolution, e.g. 128x256")
        ->capture_default_str();
    qfunc->add_option("--s", qf_s, "spin s (half-integer)")->capture_default_str();
    qfunc->add_option("--theta", qf_theta, "SCS polar angle")->capture_default_str();
    qfunc->add_flag("--polar", qf_polar, "emit x,y,z,value rows instead of alpha,beta,value");
    qfunc->add_option("--out", qf_out, "CSV path (default: qfunc.csv)");

    // batch
    std::string batch_suite = "table1", batch_out;
    std::uint64_t batch_seed = 0;
    int batch_starts = 32;
    auto* batch = app.add_subcommand("batch", "Run the built-in target suite");
    batch->add_option("--suite", batch_suite, "suite name (table1)")->capture_default_str();
    auto* batch_seed_opt = batch->add_option("--seed", batch_seed, "master seed");
    batch->add_option("--starts", batch_starts, "multistart count")->capture_default_str();
    batch->add_option("--out", batch_out, "output directory (default: QWSE_OUT_DIR or .)");

    // compile
    std::string cp_coins, cp_alpha0 = "0", cp_json;
    double cp_q = 0.5;
    auto* compile_cmd = app.add_subcommand("compile", "Decompose coins into waveplates + q-plates");
    compile_cmd->add_option("--coins", cp_coins, "semicolon list theta,xi,zeta;...")->required();
    compile_cmd->add_option("--alpha0", cp_alpha0, "q-plate phase(s): one value or one per coin")
        ->capture_default_str();
    compile_cmd->add_option("--q", cp_q, "topological charge")->capture_default_str();
    compile_cmd->add_option("--json", cp_json, "also write the circuit as JSON here");

    // simulate
    std::string sim_coins, sim_out;
    long long sim_shots = 0;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand("simulate", "Run a coin sequence and project the coin");
    simulate->add_option("--coins", sim_coins, "semicolon list theta,xi,zeta;...")->required();
    auto* sim_shots_opt = simulate->add_option("--shots", sim_shots, "site-basis counting shots");
    auto* sim_seed_opt = simulate->add_option("--seed", sim_seed, "counting seed");
    simulate->add_option("--out", sim_out, "JSON path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*engineer) {
            if (eng_seed_opt->count()) eng.seed = eng_seed;
            if (eng_shots_opt->count()) eng.shots = eng_shots;
            return cmd_engineer(eng);
        }
        if (*qfunc) return cmd_qfunc(qf_state, qf_field, qf_grid, qf_s, qf_theta, qf_polar, qf_out);
        if (*batch)
            return cmd_batch(batch_suite,
                             batch_seed_opt->count()
                                 ? std::optional<std::uint64_t>(batch_seed)
                                 : std::nullopt,
                             batch_starts, batch_out);
        if (*compile_cmd) return cmd_compile(cp_coins, cp_alpha0, cp_q, cp_json);
        if (*simulate)
            return cmd_simulate(sim_coins,
                                sim_shots_opt->count() ? std::optional<long long>(sim_shots)
                                                       : std::nullopt,
                                sim_seed_opt->count() ? std::optional<std::uint64_t>(sim_seed)
                                                      : std::nullopt,
                                sim_out);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const qwse::infeasible_target_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const qwse::unsupported_configuration_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
