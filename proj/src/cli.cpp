#include "qdq/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "qdq/circuit.hpp"
#include "qdq/error.hpp"
#include "qdq/link.hpp"
#include "qdq/noise.hpp"
#include "qdq/protocols.hpp"
#include "qdq/simulator.hpp"

namespace qdq::cli {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path + "'");
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

json matrix_json(const Eigen::MatrixXcd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

double required(const std::optional<double>& v, const char* flag) {
    if (!v) throw DomainError(std::string("missing required flag ") + flag);
    return *v;
}

json error_line(const char* kind, const std::string& message, std::optional<std::size_t> line = std::nullopt) {
    json j = {{"error", kind}, {"message", message}};
    if (line) j["line"] = *line;
    return j;
}

}  // namespace

json RunReport::to_json() const {
    return {{"command", command},
            {"inputs", inputs},
            {"outputs", outputs},
            {"seed", seed ? json(*seed) : json(nullptr)},
            {"versions", {{"artifact", kArtifactVersion}, {"format", kFormatVersion}}}};
}

RunReport RunReport::from_json(const json& j) {
    RunReport r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.outputs = j.at("outputs");
    if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
    return r;
}

std::string render(const RunReport& report) { return report.to_json().dump(2) + "\n"; }

RunReport cmd_simulate(const SimulateArgs& args) {
    const Circuit circuit = parse_circuit(read_file(args.circuit_file));
    const Backend backend = parse_backend(args.backend);
    SimOptions opts;
    opts.chi_max = args.chi_max;
    opts.trunc_tol = args.trunc_tol;

    RunReport report;
    report.command = "simulate";
    report.inputs = {{"circuit_file", args.circuit_file},
                     {"n_qubits", circuit.n_qubits()},
                     {"gates", circuit.gates().size()},
                     {"measured_qubits", circuit.effective_measured_qubits()},
                     {"backend", std::string(to_string(backend))},
                     {"mode", args.mode},
                     {"chi_max", args.chi_max ? json(*args.chi_max) : json(nullptr)},
                     {"trunc_tol", args.trunc_tol}};

    if (args.mode == "strong") {
        const OutcomeDistribution dist = strong_simulate(circuit, backend, opts);
        report.outputs = {{"distribution", {{"n_bits", dist.n_bits()}, {"qubits", dist.qubits()},
                                            {"probabilities", dist.probabilities()}}}};
    } else if (args.mode == "weak") {
        if (!args.shots) throw DomainError("weak mode requires --shots");
        const SampleSet samples = weak_simulate(circuit, backend, *args.shots, args.seed, opts);
        report.inputs["shots"] = *args.shots;
        report.outputs = {{"samples", {{"shots", samples.shots}, {"seed", samples.seed}, {"qubits", samples.qubits},
                                       {"counts", samples.counts}}}};
        report.seed = args.seed;
    } else {
        throw DomainError("unknown mode '" + args.mode + "' (expected strong or weak)");
    }
    return report;
}

RunReport cmd_linksim(const LinksimArgs& args) {
    json cfg_json = args.config_file ? json::parse(read_file(*args.config_file), nullptr, false) : json::object();
    if (cfg_json.is_discarded()) throw DomainError("link config file is not valid JSON");
    if (!cfg_json.is_object()) throw DomainError("link config must be a JSON object");
    auto set = [&](const char* key, const auto& v) {
        if (v) cfg_json[key] = *v;
    };
    set("p_gen", args.p_gen);
    set("slot_duration", args.slot_duration);
    set("tau", args.tau);
    set("f_init", args.f_init);
    set("f_min", args.f_min);
    set("hold_slots", args.hold_slots);
    set("n_slots", args.n_slots);
    set("seed", args.seed);
    const LinkConfig cfg = link_config_from_json(cfg_json);

    const LinkTrace trace = run_link_simulation(cfg);
    if (args.stats_csv_file) write_file(*args.stats_csv_file, stats_csv(trace.stats));

    RunReport report;
    report.command = "linksim";
    report.inputs = to_json(cfg);
    report.outputs = {{"trace", to_json(trace)}, {"analytic_delivery_fidelity", analytic_delivery_fidelity(cfg)}};
    report.seed = cfg.seed;
    return report;
}

RunReport cmd_fidelity(const FidelityArgs& args) {
    RunReport report;
    report.command = "fidelity";
    if (args.tool == "werner-from-p") {
        const double p = required(args.p, "--p");
        const DensityMatrix rho = werner_from_p(p);
        report.inputs = {{"tool", args.tool}, {"p", p}};
        report.outputs = {{"fidelity", fidelity(rho, phi_plus())}, {"matrix", matrix_json(rho.matrix())}};
    } else if (args.tool == "werner-from-f") {
        const double f = required(args.f, "--f");
        const DensityMatrix rho = werner_from_fidelity(f);
        report.inputs = {{"tool", args.tool}, {"f", f}};
        report.outputs = {{"p", werner_p_from_fidelity(f)},
                          {"fidelity", fidelity(rho, phi_plus())},
                          {"matrix", matrix_json(rho.matrix())}};
    } else if (args.tool == "decay") {
        const double f = required(args.f, "--f");
        const double dt = required(args.dt, "--dt");
        const double tau = required(args.tau, "--tau");
        report.inputs = {{"tool", args.tool}, {"f", f}, {"dt", dt}, {"tau", tau}};
        report.outputs = {{"fidelity", decay_fidelity(f, dt, tau)}};
    } else {
        throw DomainError("unknown fidelity tool '" + args.tool + "'");
    }
    return report;
}

RunReport cmd_superdense(const SuperdenseArgs& args) {
    const DensityMatrix pair = args.fidelity ? materialize_pair(*args.fidelity) : DensityMatrix::from_pure(bell_pair());
    RunReport report;
    report.command = "superdense";
    report.seed = args.seed;
    report.inputs = {{"a", args.a}, {"b", args.b}, {"fidelity", args.fidelity ? json(*args.fidelity) : json(nullptr)}};

    Rng rng = Rng::stream(args.seed, 0);
    const DenseCodingResult single = superdense_send(args.a, args.b, pair, rng);
    report.outputs = {{"decoded", {single.decoded_bits.first, single.decoded_bits.second}},
                      {"success", single.success},
                      {"channel_fidelity", single.channel_fidelity},
                      {"analytic_success", superdense_success_probability(args.a, args.b, pair)}};
    if (args.fidelity) {
        const SuperdenseTrials t = superdense_trials(args.a, args.b, pair, args.trials, args.seed);
        report.inputs["trials"] = args.trials;
        report.outputs["trials"] = {{"trials", t.trials},
                                    {"successes", t.successes},
                                    {"empirical_success", t.success_rate},
                                    {"standard_error", t.standard_error}};
    }
    return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quantum circuit and entanglement-link simulator"};
    app.require_subcommand(1);
    std::optional<std::string> output_file;
    bool entropy = false;
    std::uint64_t seed = kDefaultSeed;

    auto add_common = [&](CLI::App* sub, bool seeded) {
        sub->add_option("-o,--output", output_file, "Write the JSON report here instead of stdout");
        if (seeded) {
            sub->add_option("--seed", seed, "RNG seed")->capture_default_str();
            sub->add_flag("--entropy", entropy, "Draw a fresh seed from the OS (recorded in the report)");
        }
    };

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a circuit file (strong or weak simulation)");
    simulate->add_option("circuit", sim.circuit_file, "Circuit text file")->required();
    simulate->add_option("--backend", sim.backend, "statevector | mps")->capture_default_str();
    simulate->add_option("--mode", sim.mode, "strong | weak")->capture_default_str();
    simulate->add_option("--shots", sim.shots, "Samples for weak mode");
    simulate->add_option("--chi-max", sim.chi_max, "MPS bond limit (default exact)");
    simulate->add_option("--trunc-tol", sim.trunc_tol, "Relative singular-value cutoff")->capture_default_str();
    add_common(simulate, true);

    LinksimArgs link;
    auto* linksim = app.add_subcommand("linksim", "Discrete-event heralded entanglement link");
    linksim->add_option("--config", link.config_file, "JSON config; flags override its fields");
    linksim->add_option("--p-gen", link.p_gen);
    linksim->add_option("--slot-duration", link.slot_duration);
    linksim->add_option("--tau", link.tau);
    linksim->add_option("--f-init", link.f_init);
    linksim->add_option("--f-min", link.f_min);
    linksim->add_option("--hold-slots", link.hold_slots);
    linksim->add_option("--n-slots", link.n_slots);
    linksim->add_option("--stats-csv", link.stats_csv_file, "Also write a stats CSV");
    std::optional<std::uint64_t> link_seed;
    linksim->add_option("--seed", link_seed, "RNG seed (default from config, else built-in)");
    linksim->add_flag("--entropy", entropy, "Draw a fresh seed from the OS");
    linksim->add_option("-o,--output", output_file);

    FidelityArgs fid;
    auto* fidelity_cmd = app.add_subcommand("fidelity", "Werner-state and decay calculators");
    fidelity_cmd->add_option("tool", fid.tool, "werner-from-p | werner-from-f | decay")->required();
    fidelity_cmd->add_option("--p", fid.p);
    fidelity_cmd->add_option("--f", fid.f);
    fidelity_cmd->add_option("--dt", fid.dt);
    fidelity_cmd->add_option("--tau", fid.tau);
    add_common(fidelity_cmd, false);

    SuperdenseArgs dense;
    auto* superdense = app.add_subcommand("superdense", "Superdense coding over a perfect or Werner pair");
    superdense->add_option("--a", dense.a)->required();
    superdense->add_option("--b", dense.b)->required();
    superdense->add_option("--fidelity", dense.fidelity, "Werner pair fidelity in [1/4, 1]");
    superdense->add_option("--trials", dense.trials)->capture_default_str();
    add_common(superdense, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << error_line("usage", e.what()).dump() << '\n';
        return kUsageOrDomain;
    }

    try {
        if (entropy) seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
        RunReport report;
        if (*simulate) {
            sim.seed = seed;
            report = cmd_simulate(sim);
        } else if (*linksim) {
            if (entropy) link.seed = seed;
            else link.seed = link_seed;
            report = cmd_linksim(link);
        } else if (*fidelity_cmd) {
            report = cmd_fidelity(fid);
        } else {
            dense.seed = seed;
            report = cmd_superdense(dense);
        }
        const std::string text = render(report);
        if (output_file) write_file(*output_file, text);
        else out << text;
        return kOk;
    } catch (const ParseError& e) {
        err << error_line("parse", e.message(), e.line()).dump() << '\n';
        return kUsageOrDomain;
    } catch (const ResourceLimit& e) {
        err << error_line("resource_limit", e.what()).dump() << '\n';
        return kResourceLimit;
    } catch (const IoError& e) {
        err << error_line("io", e.what()).dump() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << error_line("domain", e.what()).dump() << '\n';
        return kUsageOrDomain;
    } catch (const json::exception& e) {
        err << error_line("domain", e.what()).dump() << '\n';
        return kUsageOrDomain;
    }
}

}  // namespace qdq::cli
