#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "quasifree/errors.hpp"

namespace quasifree::cli {

using nlohmann::json;

namespace {

constexpr int kMaxRangePoints = 1000000;

// Typed access to one JSON object; every key read is remembered so that
// finish() can reject unknown keys.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ConfigError(path_.empty() ? "/" : path_, "expected an object");
    }

    std::string at(const std::string& key) const { return path_ + "/" + key; }
    bool has(const std::string& key) {
        seen_.insert(key);
        return node_.contains(key) && !node_.at(key).is_null();
    }
    const json& raw(const std::string& key) {
        seen_.insert(key);
        return node_.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return to_number(raw(key), at(key));
    }
    double required_number(const std::string& key) {
        if (!has(key)) throw ConfigError(at(key), "required field is missing");
        return to_number(raw(key), at(key));
    }
    long long integer(const std::string& key, long long fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
        return v.get<long long>();
    }
    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
        return v.get<bool>();
    }
    std::string text(const std::string& key, const std::string& fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key), "expected a string");
        return v.get<std::string>();
    }

    void finish() const {
        for (const auto& item : node_.items()) {
            if (!seen_.count(item.key())) throw ConfigError(at(item.key()), "unknown field");
        }
    }

    static double to_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
        return x;
    }

private:
    const json& node_;
    std::string path_;
    std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
    if (!ok) throw ConfigError(path, what);
}

// Scalar, explicit list, or {start, stop, points} with endpoints included.
std::vector<double> parse_values(const json& v, const std::string& path) {
    if (v.is_number()) return {Section::to_number(v, path)};
    if (v.is_array()) {
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(Section::to_number(v[i], path + "/" + std::to_string(i)));
        require(!out.empty(), path, "sweep range is empty");
        return out;
    }
    if (v.is_object()) {
        Section s(v, path);
        const double start = s.required_number("start");
        const double stop = s.required_number("stop");
        const long long points = s.integer("points", 0);
        s.finish();
        require(points >= 1, s.at("points"), "sweep range is empty (points must be at least 1)");
        require(points <= kMaxRangePoints, s.at("points"), "too many points");
        require(points > 1 || start == stop, s.at("points"), "a single point needs start == stop");
        std::vector<double> out(static_cast<std::size_t>(points));
        for (long long i = 0; i < points; ++i) {
            out[static_cast<std::size_t>(i)] =
                points == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
        }
        return out;
    }
    throw ConfigError(path, "expected a number, an array or a {start, stop, points} range");
}

Block2 parse_block(const json& v, const std::string& path) {
    require(v.is_array() && v.size() == 2, path, "expected a 2x2 array");
    Block2 b;
    for (int r = 0; r < 2; ++r) {
        const json& row = v[static_cast<std::size_t>(r)];
        const std::string rp = path + "/" + std::to_string(r);
        require(row.is_array() && row.size() == 2, rp, "expected a row of two numbers");
        for (int c = 0; c < 2; ++c) b(r, c) = Section::to_number(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
    }
    return b;
}

std::map<int, Block2> parse_blocks(const json& v, const std::string& path) {
    require(v.is_object() && !v.empty(), path, "expected a non-empty object of offset -> 2x2 block");
    std::map<int, Block2> out;
    for (const auto& item : v.items()) {
        const std::string p = path + "/" + item.key();
        std::size_t used = 0;
        int offset = 0;
        try {
            offset = std::stoi(item.key(), &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == item.key().size() && used > 0, p, "block offsets must be integers");
        out[offset] = parse_block(item.value(), p);
    }
    return out;
}

InitialState parse_initial(const json& v, const std::string& path, int sites, InitialState fallback) {
    InitialState st = std::move(fallback);
    if (v.is_string()) {
        st.kind = v.get<std::string>();
        st.occupations.clear();
    } else {
        Section s(v, path);
        st.kind = s.text("kind", st.kind);
        if (s.has("occupations")) {
            const json& occ = s.raw("occupations");
            require(occ.is_array(), s.at("occupations"), "expected an array of 0/1");
            st.occupations.clear();
            for (std::size_t i = 0; i < occ.size(); ++i) {
                require(occ[i].is_number_integer() && (occ[i] == 0 || occ[i] == 1),
                        s.at("occupations") + "/" + std::to_string(i), "expected 0 or 1");
                st.occupations.push_back(occ[i].get<int>());
            }
        }
        s.finish();
    }
    const std::string kp = v.is_string() ? path : path + "/kind";
    require(st.kind == "ground" || st.kind == "vacuum" || st.kind == "mixed" || st.kind == "fock", kp,
            "expected ground, vacuum, mixed or fock");
    if (st.kind == "fock") {
        if (st.occupations.empty()) {
            st.occupations.assign(static_cast<std::size_t>(sites), 0);
            st.occupations[0] = 1;
        }
        require(static_cast<int>(st.occupations.size()) == sites, path + "/occupations",
                "needs one entry per site (" + std::to_string(sites) + ")");
    } else {
        st.occupations.clear();
    }
    return st;
}

json initial_json(const InitialState& s) {
    json j{{"kind", s.kind}};
    if (s.kind == "fock") j["occupations"] = s.occupations;
    return j;
}

Stepping parse_stepping(const std::string& name, const std::string& path) {
    if (name == "automatic") return Stepping::Automatic;
    if (name == "direct") return Stepping::Direct;
    if (name == "propagator") return Stepping::Propagator;
    if (name == "exact") return Stepping::Exact;
    throw ConfigError(path, "expected automatic, direct, propagator or exact");
}

std::string stepping_name(Stepping s) {
    switch (s) {
        case Stepping::Automatic: return "automatic";
        case Stepping::Direct: return "direct";
        case Stepping::Propagator: return "propagator";
        case Stepping::Exact: return "exact";
    }
    return "automatic";
}

std::string method_name(SweepMethod m) {
    switch (m) {
        case SweepMethod::ClosedForm: return "closed-form";
        case SweepMethod::MomentumSum: return "momentum-sum";
        case SweepMethod::Spectral: return "spectral";
    }
    return "closed-form";
}

json block_json(const Block2& b) { return json::array({{b(0, 0), b(0, 1)}, {b(1, 0), b(1, 1)}}); }

Tolerances parse_tolerances(Section& s) {
    Tolerances t;
    t.structural = s.number("structural", t.structural);
    t.spectral = s.number("spectral", t.spectral);
    t.antisymmetry_input = s.number("antisymmetry_input", t.antisymmetry_input);
    t.zero_absolute = s.number("zero_absolute", t.zero_absolute);
    t.zero_relative = s.number("zero_relative", t.zero_relative);
    t.singular_relative = s.number("singular_relative", t.singular_relative);
    t.steady_residual = s.number("steady_residual", t.steady_residual);
    t.cm_bound = s.number("cm_bound", t.cm_bound);
    t.critical_beta = s.number("critical_beta", t.critical_beta);
    t.dense_dimension_cap = static_cast<int>(s.integer("dense_dimension_cap", t.dense_dimension_cap));
    for (const char* key : {"structural", "spectral", "antisymmetry_input", "zero_absolute", "zero_relative",
                            "singular_relative", "steady_residual", "cm_bound", "critical_beta"}) {
        if (s.has(key)) require(s.raw(key).get<double>() > 0.0, s.at(key), "must be positive");
    }
    require(t.dense_dimension_cap > 0, s.at("dense_dimension_cap"), "must be positive");
    return t;
}

json tolerances_json(const Tolerances& t) {
    return json{{"structural", t.structural},
                {"spectral", t.spectral},
                {"antisymmetry_input", t.antisymmetry_input},
                {"zero_absolute", t.zero_absolute},
                {"zero_relative", t.zero_relative},
                {"singular_relative", t.singular_relative},
                {"steady_residual", t.steady_residual},
                {"cm_bound", t.cm_bound},
                {"critical_beta", t.critical_beta},
                {"dense_dimension_cap", t.dense_dimension_cap}};
}

void parse_model(RunConfig& cfg, Section& root) {
    const bool closed_form_sweep = cfg.task == Task::SweepAdr;  // N is optional until the method is known
    require(root.has("model"), "/model", "required field is missing");
    Section m(root.raw("model"), "/model");
    ModelConfig& model = cfg.model;
    model.type = m.text("type", "xy");
    if (model.type == "xy") {
        model.coupling = m.number("J", 1.0);
        model.anisotropy = m.number("gamma", 0.0);
        require(m.has("B"), m.at("B"), "required field is missing");
        model.field = parse_values(m.raw("B"), m.at("B"));
        if (cfg.task != Task::SweepAdr) {
            require(model.field.size() == 1, m.at("B"), "a sweep range is only accepted by sweep-adr");
        }
        if (m.has("N")) {
            model.sites = static_cast<int>(m.integer("N", 0));
        } else {
            require(closed_form_sweep, m.at("N"), "required field is missing");
        }
    } else if (model.type == "blocks") {
        json source;
        std::string source_path;
        if (m.has("file")) {
            require(!m.has("blocks"), m.at("blocks"), "give either file or blocks, not both");
            const std::string file = m.text("file", "");
            source = load_config_file(file);
            source_path = m.at("file");
            require(source.is_object(), source_path, "blocks file must hold an object");
            Section f(source, "");
            if (f.has("N")) {
                require(!m.has("N"), m.at("N"), "N is given by the blocks file");
                model.sites = static_cast<int>(f.integer("N", 0));
            } else {
                model.sites = static_cast<int>(m.integer("N", 0));
            }
            require(f.has("blocks"), source_path, "blocks file has no 'blocks' field");
            model.blocks.blocks = parse_blocks(f.raw("blocks"), source_path + "#/blocks");
            f.finish();
        } else {
            require(m.has("blocks"), m.at("blocks"), "blocks model needs 'file' or 'blocks'");
            model.blocks.blocks = parse_blocks(m.raw("blocks"), m.at("blocks"));
            model.sites = static_cast<int>(m.integer("N", 0));
        }
        model.blocks.sites = model.sites;
        require(cfg.task != Task::SweepAdr, "/task", "sweep-adr needs an xy model");
    } else {
        throw ConfigError(m.at("type"), "expected xy or blocks");
    }
    if (model.sites != 0 || !closed_form_sweep) {
        require(model.sites >= 2, m.at("N"), "needs at least 2 sites");
        require(model.sites <= 100000, m.at("N"), "too many sites");
    }
    m.finish();
}

}  // namespace

Task parse_task(const std::string& name) {
    if (name == "spectrum") return Task::Spectrum;
    if (name == "steady") return Task::Steady;
    if (name == "evolve") return Task::Evolve;
    if (name == "sweep-adr") return Task::SweepAdr;
    if (name == "oracle") return Task::Oracle;
    if (name == "stochastic") return Task::Stochastic;
    if (name == "analytics") return Task::Analytics;
    throw ConfigError("/task", "unknown task '" + name + "'");
}

std::string task_name(Task t) {
    switch (t) {
        case Task::Spectrum: return "spectrum";
        case Task::Steady: return "steady";
        case Task::Evolve: return "evolve";
        case Task::SweepAdr: return "sweep-adr";
        case Task::Oracle: return "oracle";
        case Task::Stochastic: return "stochastic";
        case Task::Analytics: return "analytics";
    }
    return "spectrum";
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("", "'" + path + "' is not valid JSON: " + e.what());
    }
}

RunConfig parse_config(const json& doc, std::optional<Task> task) {
    RunConfig cfg;
    Section root(doc, "");

    if (root.has("task")) {
        const json& t = root.raw("task");
        require(t.is_string(), "/task", "expected a string");
        cfg.task = parse_task(t.get<std::string>());
        if (task && *task != cfg.task) {
            throw ConfigError("/task", "config names task '" + task_name(cfg.task) + "' but '" + task_name(*task) +
                                           "' was requested");
        }
    } else {
        require(task.has_value(), "/task", "required field is missing");
        cfg.task = *task;
    }

    parse_model(cfg, root);
    const int n = cfg.model.sites;

    if (root.has("channel")) {
        Section c(root.raw("channel"), "/channel");
        const std::string preset = c.text("preset", "dephasing-z");
        try {
            cfg.preset = parse_preset(preset);
        } catch (const InvalidArgument& e) {
            throw ConfigError(c.at("preset"), e.what());
        }
        cfg.strengths.g = c.number("g", cfg.strengths.g);
        cfg.strengths.mu = c.number("mu", cfg.strengths.mu);
        cfg.strengths.nu = c.number("nu", cfg.strengths.nu);
        require(cfg.strengths.g >= 0.0, c.at("g"), "must be non-negative");
        c.finish();
    }

    if (root.has("spectrum")) {
        Section s(root.raw("spectrum"), "/spectrum");
        const std::string sector = s.text("sector", "antisymmetric");
        if (sector == "antisymmetric") {
            cfg.sector = Sector::Antisymmetric;
        } else if (sector == "full") {
            cfg.sector = Sector::Full;
        } else {
            throw ConfigError(s.at("sector"), "expected antisymmetric or full");
        }
        s.finish();
    }

    {
        EvolveConfig& e = cfg.evolve;
        const json empty = json::object();
        const bool given = root.has("evolve");
        Section s(given ? root.raw("evolve") : empty, "/evolve");
        e.t_end = s.number("t_end", e.t_end);
        e.dt = s.number("dt", e.dt);
        e.sample_interval = s.number("sample_interval", e.sample_interval);
        e.stepping = parse_stepping(s.text("stepping", "automatic"), s.at("stepping"));
        e.fit = s.boolean("fit", e.fit);
        if (s.has("initial")) {
            e.initial = parse_initial(s.raw("initial"), s.at("initial"), std::max(n, 1), e.initial);
        }
        require(e.t_end > 0.0, s.at("t_end"), "must be positive");
        require(e.dt > 0.0 && e.dt <= e.t_end, s.at("dt"), "must lie in (0, t_end]");
        require(e.sample_interval >= 0.0, s.at("sample_interval"), "must be non-negative");
        require(e.t_end / e.dt <= 1e8, s.at("dt"), "more than 1e8 steps");
        s.finish();
    }

    {
        SweepConfig& w = cfg.sweep;
        const json empty = json::object();
        Section s(root.has("sweep") ? root.raw("sweep") : empty, "/sweep");
        if (s.has("gamma")) w.anisotropy = parse_values(s.raw("gamma"), s.at("gamma"));
        const std::string method = s.text("method", "closed-form");
        if (method == "closed-form") {
            w.method = SweepMethod::ClosedForm;
        } else if (method == "momentum-sum") {
            w.method = SweepMethod::MomentumSum;
        } else if (method == "spectral") {
            w.method = SweepMethod::Spectral;
        } else {
            throw ConfigError(s.at("method"), "expected closed-form, momentum-sum or spectral");
        }
        s.finish();
        if (w.anisotropy.empty()) w.anisotropy = {cfg.model.anisotropy};
        if (cfg.task == Task::SweepAdr) {
            require(w.method == SweepMethod::ClosedForm || n >= 2, "/model/N", "required by the " + method + " method");
            require(cfg.strengths.g > 0.0, "/channel/g", "sweep-adr reports Delta / g^2 and needs g > 0");
            if (w.method != SweepMethod::Spectral) {
                require(cfg.preset == Preset::DephasingZ, "/channel/preset",
                        "the " + method + " method describes dephasing-z only");
            }
            require(w.anisotropy.size() * cfg.model.field.size() <= static_cast<std::size_t>(kMaxRangePoints),
                    "/sweep", "grid has too many points");
        }
    }

    {
        StochasticConfig& st = cfg.stochastic;
        const json empty = json::object();
        const bool given = root.has("stochastic");
        Section s(given ? root.raw("stochastic") : empty, "/stochastic");
        st.variance = s.number("variance", st.variance);
        st.correlation_time = s.number("T", st.correlation_time);
        st.trajectories = static_cast<int>(s.integer("trajectories", st.trajectories));
        st.t_end = s.number("t_end", st.t_end);
        st.dt = s.number("dt", st.dt);
        st.sample_interval = s.number("sample_interval", st.sample_interval);
        st.bootstrap = static_cast<int>(s.integer("bootstrap", st.bootstrap));
        st.constant = s.number("constant", st.constant);
        if (s.has("initial")) st.initial = parse_initial(s.raw("initial"), s.at("initial"), std::max(n, 1), st.initial);
        if (cfg.task == Task::Stochastic) {
            require(given, "/stochastic", "required by the stochastic task");
            require(st.variance > 0.0, s.at("variance"), "must be positive");
            require(st.correlation_time > 0.0, s.at("T"), "must be positive");
            require(st.trajectories >= 20, s.at("trajectories"), "needs at least 20 trajectories");
            require(st.t_end > 0.0, s.at("t_end"), "must be positive");
            require(st.dt >= 0.0, s.at("dt"), "must be non-negative (0 selects T/5)");
            require(st.sample_interval > 0.0, s.at("sample_interval"), "must be positive");
            require(st.bootstrap >= 10, s.at("bootstrap"), "needs at least 10 replicas");
            require(st.constant > 0.0, s.at("constant"), "must be positive");
            if (st.initial.kind == "fock") {
                InitialState fixed = parse_initial(initial_json(st.initial), s.at("initial"), n, st.initial);
                st.initial = fixed;
            }
        }
        s.finish();
    }

    {
        OracleConfig& o = cfg.oracle;
        const json empty = json::object();
        Section s(root.has("oracle") ? root.raw("oracle") : empty, "/oracle");
        o.t_end = s.number("t_end", o.t_end);
        o.samples = static_cast<int>(s.integer("samples", o.samples));
        o.tolerance = s.number("tolerance", o.tolerance);
        require(o.t_end > 0.0, s.at("t_end"), "must be positive");
        require(o.samples >= 2, s.at("samples"), "needs at least 2 samples");
        require(o.tolerance > 0.0, s.at("tolerance"), "must be positive");
        s.finish();
        if (cfg.task == Task::Oracle) require(n <= 4, "/model/N", "the density-matrix oracle handles at most 4 sites");
    }

    if (root.has("output")) {
        Section s(root.raw("output"), "/output");
        if (s.has("path")) {
            cfg.output_path = s.text("path", "");
            require(!cfg.output_path->empty(), s.at("path"), "must not be empty");
        }
        const std::string format = s.text("format", "csv");
        if (format == "csv") {
            cfg.format = Format::Csv;
        } else if (format == "json") {
            cfg.format = Format::Json;
        } else {
            throw ConfigError(s.at("format"), "expected csv or json");
        }
        s.finish();
    }

    if (root.has("tolerances")) {
        Section s(root.raw("tolerances"), "/tolerances");
        cfg.tolerances = parse_tolerances(s);
        s.finish();
    }

    if (root.has("seed")) {
        const json& v = root.raw("seed");
        require(v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0), "/seed",
                "expected a non-negative integer");
        cfg.seed = v.get<std::uint64_t>();
    }
    cfg.workers = static_cast<int>(root.integer("workers", 0));
    require(cfg.workers >= 0, "/workers", "must be non-negative (0 selects the environment or hardware)");
    root.finish();

    // Canonical record: every value that influences the result, defaults included.
    json model{{"type", cfg.model.type}};
    if (cfg.model.sites > 0) model["N"] = cfg.model.sites;
    if (cfg.model.type == "xy") {
        model["J"] = cfg.model.coupling;
        model["gamma"] = cfg.model.anisotropy;
        model["B"] = cfg.model.field.size() == 1 && cfg.task != Task::SweepAdr ? json(cfg.model.field[0])
                                                                                : json(cfg.model.field);
    } else {
        json blocks = json::object();
        for (const auto& [offset, b] : cfg.model.blocks.blocks) blocks[std::to_string(offset)] = block_json(b);
        model["blocks"] = blocks;
    }
    json resolved{{"task", task_name(cfg.task)},
                  {"model", model},
                  {"channel",
                   {{"preset", std::string(preset_name(cfg.preset))},
                    {"g", cfg.strengths.g},
                    {"mu", cfg.strengths.mu},
                    {"nu", cfg.strengths.nu}}},
                  {"tolerances", tolerances_json(cfg.tolerances)},
                  {"seed", cfg.seed},
                  {"output", {{"format", cfg.format == Format::Csv ? "csv" : "json"}}}};
    switch (cfg.task) {
        case Task::Spectrum:
        case Task::Steady:
            resolved["spectrum"] = {{"sector", cfg.sector == Sector::Antisymmetric ? "antisymmetric" : "full"}};
            break;
        case Task::Evolve:
            resolved["evolve"] = {{"t_end", cfg.evolve.t_end},
                                  {"dt", cfg.evolve.dt},
                                  {"sample_interval", cfg.evolve.sample_interval},
                                  {"stepping", stepping_name(cfg.evolve.stepping)},
                                  {"initial", initial_json(cfg.evolve.initial)},
                                  {"fit", cfg.evolve.fit}};
            break;
        case Task::SweepAdr:
            resolved["sweep"] = {{"gamma", cfg.sweep.anisotropy}, {"method", method_name(cfg.sweep.method)}};
            break;
        case Task::Oracle:
            resolved["oracle"] = {
                {"t_end", cfg.oracle.t_end}, {"samples", cfg.oracle.samples}, {"tolerance", cfg.oracle.tolerance}};
            break;
        case Task::Stochastic:
            resolved["stochastic"] = {{"variance", cfg.stochastic.variance},
                                      {"T", cfg.stochastic.correlation_time},
                                      {"trajectories", cfg.stochastic.trajectories},
                                      {"t_end", cfg.stochastic.t_end},
                                      {"dt", cfg.stochastic.dt},
                                      {"sample_interval", cfg.stochastic.sample_interval},
                                      {"bootstrap", cfg.stochastic.bootstrap},
                                      {"constant", cfg.stochastic.constant},
                                      {"initial", initial_json(cfg.stochastic.initial)}};
            break;
        case Task::Analytics:
            break;
    }
    cfg.resolved = std::move(resolved);
    return cfg;
}

}  // namespace quasifree::cli
