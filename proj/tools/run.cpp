#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

#include <CLI11.hpp>

#include "quasifree/analytics.hpp"
#include "quasifree/ed_oracle.hpp"
#include "quasifree/errors.hpp"
#include "quasifree/parallel.hpp"
#include "quasifree/stochastic.hpp"

#ifndef QUASIFREE_VERSION
#define QUASIFREE_VERSION "unknown"
#endif

namespace quasifree::cli {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Artifact {
    std::string csv;
    json data = json::object();
    json summary = json::object();
    int status = kExitOk;
};

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& columns) {
        buf_.imbue(std::locale::classic());
        buf_ << std::setprecision(17);
        for (std::size_t i = 0; i < columns.size(); ++i) buf_ << (i ? "," : "") << columns[i];
        buf_ << '\n';
    }
    template <class... T>
    void row(const T&... values) {
        bool first = true;
        ((buf_ << (first ? "" : ",") << values, first = false), ...);
        buf_ << '\n';
    }
    std::string str() const { return buf_.str(); }

private:
    std::ostringstream buf_;
};

// JSON has no NaN; non-finite values become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json matrix_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

double mean_polarization(const RealMatrix& g) {
    const Eigen::Index n = g.rows() / 2;
    double sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) sum += g(2 * j, 2 * j + 1);
    return sum / static_cast<double>(n);
}

TIBlockSpec site_blocks(const RunConfig& cfg, double field, double anisotropy) {
    if (cfg.model.type == "blocks") return cfg.model.blocks;
    return xy_blocks(XYParams{cfg.model.sites, cfg.model.coupling, anisotropy, field});
}

AntisymmetricMatrix hamiltonian(const RunConfig& cfg, double field, double anisotropy) {
    if (cfg.model.type == "blocks") return from_blocks(cfg.model.blocks, cfg.tolerances);
    return xy_chain(XYParams{cfg.model.sites, cfg.model.coupling, anisotropy, field});
}

AntisymmetricMatrix hamiltonian(const RunConfig& cfg) {
    return hamiltonian(cfg, cfg.model.field.front(), cfg.model.anisotropy);
}

Channel channel(const RunConfig& cfg) { return make_channel(cfg.preset, cfg.model.sites, cfg.strengths); }

CovarianceMatrix initial_state(const InitialState& init, const AntisymmetricMatrix& h, const Tolerances& tol) {
    const int n = h.modes();
    if (init.kind == "ground") return ground_state_cm(to_momentum(h, tol), tol);
    if (init.kind == "mixed") return CovarianceMatrix::maximally_mixed(n);
    if (init.kind == "vacuum") return CovarianceMatrix::fock(std::vector<int>(static_cast<std::size_t>(n), 0));
    return CovarianceMatrix::fock(init.occupations);
}

json spectrum_summary(const LiouvillianSpectrum& sp) {
    return json{{"adr", sp.adr},
                {"zero_threshold", sp.zero_threshold},
                {"zero_cluster", sp.zero_cluster},
                {"adr_cluster", sp.adr_cluster},
                {"max_real_part", sp.max_real_part},
                {"dimension", sp.eigenvalues.size()},
                {"sector", sp.sector == Sector::Antisymmetric ? "antisymmetric" : "full"}};
}

Artifact run_spectrum(const RunConfig& cfg) {
    const Superoperator s = assemble(hamiltonian(cfg), channel(cfg));
    LiouvillianSpectrum sp = spectrum(s, {cfg.sector, cfg.tolerances});
    std::sort(sp.eigenvalues.begin(), sp.eigenvalues.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
    });
    Artifact out;
    out.summary = spectrum_summary(sp);
    CsvWriter csv({"re_lambda", "im_lambda"});
    json eig = json::array();
    for (const Complex& z : sp.eigenvalues) {
        csv.row(z.real(), z.imag());
        eig.push_back({z.real(), z.imag()});
    }
    out.csv = csv.str();
    out.data = out.summary;
    out.data["eigenvalues"] = std::move(eig);
    return out;
}

Artifact run_steady(const RunConfig& cfg, std::ostream& log) {
    const Superoperator s = assemble(hamiltonian(cfg), channel(cfg));
    const int n = cfg.model.sites;
    Artifact out;
    CovarianceMatrix gamma;
    if (s.kind() == ChannelClass::Linear) {
        const SteadyStateResult r = steady_state_linear(s, cfg.tolerances);
        gamma = r.gamma;
        out.summary = {{"method", "linear-solve"},
                       {"residual", r.residual},
                       {"condition_ratio", r.condition_ratio},
                       {"max_eigenvalue", r.diagnostics.max_eigenvalue},
                       {"valid", r.diagnostics.valid},
                       {"pure", r.diagnostics.pure}};
    } else {
        // Homogeneous flow: Gamma = 0 is stationary and unique iff the kernel is trivial.
        const LiouvillianSpectrum sp = spectrum(s, {Sector::Antisymmetric, cfg.tolerances});
        if (sp.zero_cluster > 0) {
            throw SingularSuperoperatorError(sp.zero_cluster, "steady state is not unique: kernel dimension " +
                                                                  std::to_string(sp.zero_cluster));
        }
        log << "steady: quadratic channel with trivial kernel, the steady state is maximally mixed\n";
        gamma = CovarianceMatrix::maximally_mixed(n);
        out.summary = {{"method", "kernel-check"}, {"adr", sp.adr}, {"residual", 0.0}};
    }
    const ComplexMatrix q = pairing_matrix(gamma);
    out.summary["max_pairing"] = q.cwiseAbs().maxCoeff();
    out.summary["mean_polarization"] = mean_polarization(gamma.matrix());

    CsvWriter csv({"site", "polarization", "occupation"});
    json pol = json::array();
    for (int j = 0; j < n; ++j) {
        csv.row(j, gamma.polarization(j), gamma.occupation(j));
        pol.push_back(gamma.polarization(j));
    }
    out.csv = csv.str();
    out.data = out.summary;
    out.data["polarization"] = std::move(pol);
    out.data["gamma"] = matrix_json(gamma.matrix());
    return out;
}

Artifact run_evolve(const RunConfig& cfg) {
    const AntisymmetricMatrix h = hamiltonian(cfg);
    const Superoperator s = assemble(h, channel(cfg));
    const EvolveConfig& e = cfg.evolve;

    EvolutionOptions options;
    options.t_end = e.t_end;
    options.dt = e.dt;
    options.sample_interval = e.sample_interval;
    options.stepping = e.stepping;
    options.tol = cfg.tolerances;
    if (s.kind() == ChannelClass::Quadratic) {
        options.reference = RealMatrix::Zero(h.dimension(), h.dimension());
    } else {
        try {
            options.reference = steady_state_linear(s, cfg.tolerances).gamma.matrix();
        } catch (const SingularSuperoperatorError&) {
            if (e.fit) throw;
        }
    }

    const Trajectory traj = evolve(initial_state(e.initial, h, cfg.tolerances), s, options);
    Artifact out;
    std::ostringstream csv;
    traj.write_csv(csv);
    out.csv = csv.str();

    out.summary = {{"samples", traj.time.size()},
                   {"steps", traj.steps},
                   {"stepping_used", traj.stepping_used == Stepping::Direct       ? "direct"
                                     : traj.stepping_used == Stepping::Propagator ? "propagator"
                                     : traj.stepping_used == Stepping::Exact      ? "exact"
                                                                                  : "automatic"},
                   {"max_cm_eigenvalue", traj.max_cm_eigenvalue},
                   {"max_antisymmetry_defect", traj.max_antisymmetry_defect},
                   {"max_norm_increase", traj.max_norm_increase},
                   {"final_mean_mag", traj.mean_polarization.back()},
                   {"final_dist_ss", number(traj.distance_to_reference.back())}};
    if (e.fit) {
        const double asymptote = mean_polarization(*options.reference);
        const DecayFit fit = fit_decay_rate(traj.time, traj.mean_polarization, asymptote);
        out.summary["decay_fit"] = {{"rate", fit.rate},
                                    {"intercept", fit.intercept},
                                    {"r_squared", fit.r_squared},
                                    {"window_begin", fit.window_begin},
                                    {"window_end", fit.window_end},
                                    {"points", fit.points},
                                    {"envelope", fit.envelope},
                                    {"asymptote", asymptote}};
    }
    out.data = out.summary;
    json series = json::object();
    series["t"] = traj.time;
    series["mean_mag"] = traj.mean_polarization;
    json dist = json::array();
    for (double d : traj.distance_to_reference) dist.push_back(number(d));
    series["dist_ss"] = std::move(dist);
    json sites = json::array();
    for (int j = 0; j < traj.sites(); ++j) {
        const RealVector col = traj.site_polarization.col(j);
        sites.push_back(std::vector<double>(col.data(), col.data() + col.size()));
    }
    series["site"] = std::move(sites);
    out.data["series"] = std::move(series);
    return out;
}

struct SweepPoint {
    double gamma = 0.0;
    double field = 0.0;
    double adr = kNaN;
    double polarization = kNaN;
    std::string status = "ok";
};

Artifact run_sweep(const RunConfig& cfg) {
    const std::vector<double>& fields = cfg.model.field;
    const std::vector<double>& gammas = cfg.sweep.anisotropy;
    const double g = cfg.strengths.g;
    const double mu = cfg.strengths.mu;
    const double nu = cfg.strengths.nu;
    const double coupling = cfg.model.coupling;

    std::vector<SweepPoint> grid(gammas.size() * fields.size());
    parallel_for(
        grid.size(),
        [&](std::size_t i) {
            SweepPoint& p = grid[i];
            p.gamma = gammas[i / fields.size()];
            p.field = fields[i % fields.size()];
            try {
                switch (cfg.sweep.method) {
                    case SweepMethod::ClosedForm:
                        p.adr = xy_adr_closed_form(p.gamma, p.field, coupling, g);
                        p.polarization = xy_polarization_closed_form(p.gamma, p.field, coupling, mu, nu);
                        break;
                    case SweepMethod::MomentumSum: {
                        const MomentumBlocks blocks = to_momentum(site_blocks(cfg, p.field, p.gamma), cfg.tolerances);
                        p.adr = adr_weak_coupling_sum(blocks, g, cfg.tolerances);
                        p.polarization = particle_number_sum(blocks, mu, nu, cfg.tolerances);
                        break;
                    }
                    case SweepMethod::Spectral: {
                        const Superoperator s = assemble(hamiltonian(cfg, p.field, p.gamma), channel(cfg));
                        p.adr = spectrum(s, {Sector::Antisymmetric, cfg.tolerances}).adr;
                        if (s.kind() == ChannelClass::Linear) {
                            p.polarization = mean_polarization(steady_state_linear(s, cfg.tolerances).gamma.matrix());
                        }
                        break;
                    }
                }
            } catch (const DegenerateModeError&) {
                p.status = "critical";
            } catch (const SingularSuperoperatorError&) {
                p.status = "degenerate";
            }
        },
        cfg.workers);

    Artifact out;
    CsvWriter csv({"gamma", "B", "adr", "adr_over_g2", "polarization", "status"});
    json rows = json::array();
    int failed = 0;
    for (const SweepPoint& p : grid) {
        const double scaled = p.adr / (g * g);
        csv.row(p.gamma, p.field, p.adr, scaled, p.polarization, p.status);
        rows.push_back({{"gamma", p.gamma},
                        {"B", p.field},
                        {"adr", number(p.adr)},
                        {"adr_over_g2", number(scaled)},
                        {"polarization", number(p.polarization)},
                        {"status", p.status}});
        failed += p.status != "ok";
    }
    out.csv = csv.str();
    out.summary = {{"points", grid.size()}, {"failed_points", failed}};
    out.data = out.summary;
    out.data["points"] = std::move(rows);
    return out;
}

Artifact run_oracle(const RunConfig& cfg) {
    ed::OracleOptions options;
    options.t_end = cfg.oracle.t_end;
    options.samples = cfg.oracle.samples;
    options.seed = static_cast<unsigned>(cfg.seed);
    options.tolerance = cfg.oracle.tolerance;
    const ed::OracleReport report = ed::oracle_compare(hamiltonian(cfg), channel(cfg), options);

    Artifact out;
    out.summary = report.to_json();
    out.data = out.summary;
    CsvWriter csv({"modes", "channel_class", "trajectory_deviation", "spectrum_deviation", "steady_deviation",
                   "dense_kernel_dimension", "cm_zero_cluster", "passed"});
    csv.row(report.modes, report.linear ? "linear" : "quadratic", report.trajectory_deviation,
            report.spectrum_deviation, report.steady_deviation, report.dense_kernel_dimension,
            report.cm_zero_cluster, report.passed ? 1 : 0);
    out.csv = csv.str();
    if (!report.passed) out.status = kExitNumerical;
    return out;
}

Artifact run_stochastic(const RunConfig& cfg, std::ostream& log) {
    const AntisymmetricMatrix h = hamiltonian(cfg);
    const StochasticConfig& st = cfg.stochastic;
    NoiseSpec noise;
    noise.variance = st.variance;
    noise.correlation_time = st.correlation_time;
    noise.seed = cfg.seed;

    StochasticOptions options;
    options.t_end = st.t_end;
    options.dt = st.dt;
    options.sample_interval = st.sample_interval;
    options.trajectories = st.trajectories;
    options.bootstrap = st.bootstrap;
    options.constant = st.constant;
    options.workers = cfg.workers;
    options.warn = false;
    options.tol = cfg.tolerances;
    if (cfg.model.type == "xy") options.omega = xy_spectral_width(cfg.model.field.front(), cfg.model.coupling);

    const StochasticResult result = averaged_evolution(h, noise, initial_state(st.initial, h, cfg.tolerances), options);
    if (result.comparison.markov_warning) {
        log << "stochastic: Markov parameter T*omega = " << result.comparison.markov_parameter
            << " exceeds " << kMarkovWarning << "; the dephasing limit is not expected to hold\n";
    }
    Artifact out;
    std::ostringstream csv;
    result.write_csv(csv);
    out.csv = csv.str();
    out.summary = result.comparison.to_json();
    out.data = out.summary;
    out.data["series"] = {{"t", result.average.time},
                          {"mean_mag", result.average.mean_polarization},
                          {"mean_mag_sigma", result.mean_polarization_sigma},
                          {"lindblad_mean_mag", result.lindblad.mean_polarization},
                          {"colored_mean_mag", result.colored.mean_polarization}};
    return out;
}

Artifact run_analytics(const RunConfig& cfg) {
    const AntisymmetricMatrix h = hamiltonian(cfg);
    const MomentumBlocks blocks = to_momentum(h, cfg.tolerances);
    const PerturbationData pd = perturbation_data(blocks, cfg.tolerances);
    const std::vector<ExcitationPair> energies = excitation_energies(blocks);
    const double g = cfg.strengths.g;
    const double mu = cfg.strengths.mu;
    const double nu = cfg.strengths.nu;

    Artifact out;
    CsvWriter csv({"n", "theta", "h_re", "h_im", "k", "l", "eps_plus", "eps_minus", "alpha", "beta", "a", "b", "c"});
    json modes = json::array();
    for (int m = 0; m < blocks.size(); ++m) {
        const ModeBlock& mb = blocks[m];
        const double theta = blocks.wavenumber(m);
        const auto i = static_cast<Eigen::Index>(m);
        csv.row(m, theta, mb.h.real(), mb.h.imag(), mb.k, mb.l, energies[static_cast<std::size_t>(m)].plus,
                energies[static_cast<std::size_t>(m)].minus, pd.alpha(i), pd.beta(i), pd.a(i), pd.b(i), pd.c(i));
        modes.push_back({{"n", m},
                         {"theta", theta},
                         {"h", {mb.h.real(), mb.h.imag()}},
                         {"k", mb.k},
                         {"l", mb.l},
                         {"beta", pd.beta(i)},
                         {"abc", {pd.a(i), pd.b(i), pd.c(i)}}});
    }
    out.csv = csv.str();

    const PerturbationMatrix pm = perturbation_matrix(blocks, cfg.tolerances);
    const RatePair rates = two_lowest_rates(blocks, g, mu, nu, cfg.tolerances);
    out.summary = {{"adr_weak_coupling_sum", adr_weak_coupling_sum(blocks, g, cfg.tolerances)},
                   {"particle_number_sum", particle_number_sum(blocks, mu, nu, cfg.tolerances)},
                   {"normalization_defect", pd.normalization_defect()},
                   {"perturbation_matrix",
                    {{"delta_p", pm.delta_p},
                     {"overlap_ca", pm.overlap_ca},
                     {"overlap_cb", pm.overlap_cb},
                     {"reconstruction_defect", pm.reconstruction_defect}}},
                   {"two_lowest_rates",
                    {{"plus", rates.plus},
                     {"minus", rates.minus},
                     {"eps_z", rates.eps_z},
                     {"eps_x", rates.eps_x},
                     {"eps", rates.eps}}}};
    const double b = cfg.model.field.front();
    const double j = cfg.model.coupling;
    const double gamma = cfg.model.anisotropy;
    // Thermodynamic-limit forms exist for the XY chain with B >= 0, J > 0, |gamma| <= 1.
    if (cfg.model.type == "xy" && b >= 0.0 && j > 0.0 && std::abs(gamma) <= 1.0) {
        out.summary["closed_form"] = {{"adr", xy_adr_closed_form(gamma, b, j, g)},
                                      {"polarization", xy_polarization_closed_form(gamma, b, j, mu, nu)}};
        if (gamma != -1.0) {
            const PoleSet ps = poles(b, j, gamma);
            auto pole = [](const Pole& p) {
                return json{{"z", {p.z.real(), p.z.imag()}}, {"inside", p.inside}, {"critical", p.critical}};
            };
            out.summary["poles"] = {{"zero", pole(ps.zero)}, {"plus", pole(ps.plus)}, {"minus", pole(ps.minus)}};
        }
    }
    out.data = out.summary;
    out.data["modes"] = std::move(modes);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("/output/path", "cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw ConfigError("/output/path", "failed writing '" + path + "'");
}

std::optional<Task> subcommand_task(const CLI::App& app) {
    for (const CLI::App* sub : app.get_subcommands()) return parse_task(sub->get_name());
    return std::nullopt;
}

}  // namespace

json provenance(const RunConfig& cfg) {
    return json{{"program", "quasifree"}, {"version", QUASIFREE_VERSION}, {"config", cfg.resolved}};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
    Artifact a;
    switch (cfg.task) {
        case Task::Spectrum: a = run_spectrum(cfg); break;
        case Task::Steady: a = run_steady(cfg, log); break;
        case Task::Evolve: a = run_evolve(cfg); break;
        case Task::SweepAdr: a = run_sweep(cfg); break;
        case Task::Oracle: a = run_oracle(cfg); break;
        case Task::Stochastic: a = run_stochastic(cfg, log); break;
        case Task::Analytics: a = run_analytics(cfg); break;
    }
    const json record = provenance(cfg);
    if (cfg.format == Format::Json) {
        const std::string text = json{{"provenance", record}, {"summary", a.summary}, {"data", a.data}}.dump(2) + "\n";
        if (cfg.output_path) {
            write_file(*cfg.output_path, text);
        } else {
            out << text;
        }
    } else if (cfg.output_path) {
        write_file(*cfg.output_path, a.csv);
        write_file(*cfg.output_path + ".provenance.json",
                   json{{"provenance", record}, {"summary", a.summary}}.dump(2) + "\n");
    } else {
        out << a.csv;
    }
    if (cfg.output_path) log << task_name(cfg.task) << ": " << a.summary.dump() << "\n";
    return a.status;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Quasi-free open fermionic chains: spectra, steady states, dynamics and analytics", "quasifree"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", QUASIFREE_VERSION);

    std::string config_path;
    std::optional<std::string> out_path, format, preset;
    std::optional<int> sites;
    std::optional<double> coupling, anisotropy, field, g, mu, nu;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::vector<std::string> sets;

    app.add_option("-c,--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("-o,--out", out_path, "output path (default: standard output)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--N", sites, "number of sites");
    app.add_option("--J", coupling, "XY coupling J");
    app.add_option("--gamma", anisotropy, "XY anisotropy");
    app.add_option("--B", field, "transverse field (scalar)");
    app.add_option("--preset", preset, "channel preset");
    app.add_option("--g", g, "channel strength g");
    app.add_option("--mu", mu, "channel weight mu");
    app.add_option("--nu", nu, "channel weight nu");
    app.add_option("--seed", seed, "random seed");
    app.add_option("--workers", workers, "worker threads (default: QUASIFREE_WORKERS or hardware)");
    app.add_option("--set", sets, "override any field: /json/pointer=<json value>");

    const char* descriptions[][2] = {
        {"spectrum", "Liouvillian spectrum on covariance-matrix space"},
        {"steady", "steady-state covariance matrix"},
        {"evolve", "time evolution of the covariance matrix"},
        {"sweep-adr", "asymptotic decay rate over a (gamma, B) grid"},
        {"oracle", "compare with the exact density-matrix reference (N <= 4)"},
        {"stochastic", "ensemble of fluctuating-field trajectories against dephasing"},
        {"analytics", "per-mode data and closed forms"}};
    for (const auto& d : descriptions) app.add_subcommand(d[0], d[1]);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << QUASIFREE_VERSION << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        json doc = config_path.empty() ? json::object() : load_config_file(config_path);
        if (!doc.is_object()) throw ConfigError("/", "expected an object");
        auto put = [&doc](const char* pointer, const json& value) { doc[json::json_pointer(pointer)] = value; };
        if (sites) put("/model/N", *sites);
        if (coupling) put("/model/J", *coupling);
        if (anisotropy) put("/model/gamma", *anisotropy);
        if (field) put("/model/B", *field);
        if (preset) put("/channel/preset", *preset);
        if (g) put("/channel/g", *g);
        if (mu) put("/channel/mu", *mu);
        if (nu) put("/channel/nu", *nu);
        if (seed) put("/seed", *seed);
        if (workers) put("/workers", *workers);
        if (out_path) put("/output/path", *out_path);
        if (format) put("/output/format", *format);
        for (const std::string& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || s.empty() || s[0] != '/') {
                throw ConfigError("--set", "expected /json/pointer=<json value>, got '" + s + "'");
            }
            const std::string pointer = s.substr(0, eq);
            json value;
            try {
                value = json::parse(s.substr(eq + 1));
            } catch (const json::parse_error&) {
                value = s.substr(eq + 1);  // bare words are strings
            }
            try {
                doc[json::json_pointer(pointer)] = value;
            } catch (const json::exception& e) {
                throw ConfigError(pointer, e.what());
            }
        }
        const RunConfig cfg = parse_config(doc, subcommand_task(app));
        return run(cfg, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kExitConfig;
    } catch (const json::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace quasifree::cli
