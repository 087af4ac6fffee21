#include "equivibe/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "equivibe/degrees.hpp"
#include "equivibe/dynamics.hpp"
#include "equivibe/errors.hpp"
#include "equivibe/io.hpp"
#include "equivibe/kernels.hpp"
#include "equivibe/lattice.hpp"
#include "equivibe/spectrum.hpp"

namespace equivibe {

using json = nlohmann::json;

void RunConfig::validate() const {
    if (params.n < 3) throw ConfigError("n must be >= 3");
    if (params.B < 0) throw ConfigError("B must be >= 0");
    if (l_max < 1) throw ConfigError("l-max must be >= 1");
    parse_omega_mode(omega_mode);
    if (!(eps_rel > 0)) throw ConfigError("eps must be > 0");
    if (!(dt > 0)) throw ConfigError("dt must be > 0");
    if (periods < 1) throw ConfigError("periods must be >= 1");
    if (sample_every < 1) throw ConfigError("sample-every must be >= 1");
    if (wave != "standing" && wave != "rotating") throw ConfigError("wave must be standing or rotating");
    if (format != "json" && format != "table") throw ConfigError("format must be json or table");
}

int thread_budget() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* s = std::getenv("EQUIVIBE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(s, &end, 10);
        if (end != s && *end == '\0' && v >= 1) return static_cast<int>(std::min<long>(v, hw));
    }
    return hw;
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Flags registered on one subcommand, keyed by their config-file name.
using OptionMap = std::map<std::string, CLI::Option*>;

void add_common(CLI::App* sub, RunConfig& c, OptionMap& m, std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file; flags win over its keys");
    m["n"] = sub->add_option("--n", c.params.n, "number of particles");
    m["A"] = sub->add_option("--A", c.params.A, "pair attraction coefficient");
    m["B"] = sub->add_option("--B", c.params.B, "pair repulsion coefficient");
    m["sigma"] = sub->add_option("--sigma", c.params.sigma, "Coulomb coefficient");
    m["eigenvalues"] =
        sub->add_option("--eigenvalues", c.eigenvalues, "use these slice eigenvalues: tag=mu,... (e.g. 2+=11.4)");
}

void add_spectral(CLI::App* sub, RunConfig& c, OptionMap& m) {
    m["l_max"] = sub->add_option("--l-max", c.l_max, "largest Fourier mode in the critical set");
}

void add_shooting(CLI::App* sub, RunConfig& c, OptionMap& m) {
    m["eps_rel"] = sub->add_option("--eps", c.eps_rel, "shooting amplitude as a fraction of r0");
    m["dt"] = sub->add_option("--dt", c.dt, "integrator step in normalised time");
    m["wave"] = sub->add_option("--wave", c.wave, "seed for two-dimensional components: standing|rotating");
    m["out_dir"] = sub->add_option("--out", c.out_dir, "directory for artifacts");
}

template <class T>
void take(const json& j, const char* key, T& dst) {
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

// Applies JSON keys whose flag was not given on the command line.
void merge_config(const std::string& path, RunConfig& c, const OptionMap& m) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
    static const std::map<std::string, std::function<void(const json&, RunConfig&)>> setters = {
        {"n", [](const json& j, RunConfig& c) { take(j, "n", c.params.n); }},
        {"A", [](const json& j, RunConfig& c) { take(j, "A", c.params.A); }},
        {"B", [](const json& j, RunConfig& c) { take(j, "B", c.params.B); }},
        {"sigma", [](const json& j, RunConfig& c) { take(j, "sigma", c.params.sigma); }},
        {"l_max", [](const json& j, RunConfig& c) { take(j, "l_max", c.l_max); }},
        {"omega_mode", [](const json& j, RunConfig& c) { take(j, "omega_mode", c.omega_mode); }},
        {"eigenvalues", [](const json& j, RunConfig& c) { take(j, "eigenvalues", c.eigenvalues); }},
        {"crossings", [](const json& j, RunConfig& c) { take(j, "crossings", c.crossings); }},
        {"modes", [](const json& j, RunConfig& c) { take(j, "modes", c.modes); }},
        {"eps_rel", [](const json& j, RunConfig& c) { take(j, "eps_rel", c.eps_rel); }},
        {"dt", [](const json& j, RunConfig& c) { take(j, "dt", c.dt); }},
        {"periods", [](const json& j, RunConfig& c) { take(j, "periods", c.periods); }},
        {"sample_every", [](const json& j, RunConfig& c) { take(j, "sample_every", c.sample_every); }},
        {"wave", [](const json& j, RunConfig& c) { take(j, "wave", c.wave); }},
        {"out_dir", [](const json& j, RunConfig& c) { take(j, "out_dir", c.out_dir); }},
        {"format", [](const json& j, RunConfig& c) { take(j, "format", c.format); }},
        {"with_orbits", [](const json& j, RunConfig& c) { take(j, "with_orbits", c.with_orbits); }},
    };
    for (auto it = j.begin(); it != j.end(); ++it) {
        auto s = setters.find(it.key());
        if (s == setters.end()) throw ConfigError("unknown config key '" + it.key() + "'");
        auto f = m.find(it.key());
        if (f != m.end() && f->second->count() > 0) continue;  // flag wins
        s->second(j, c);
    }
}

json params_json(const RunConfig& c) {
    return {{"n", c.params.n},
            {"A", round12(c.params.A)},
            {"B", round12(c.params.B)},
            {"sigma", round12(c.params.sigma)}};
}

SpectralReport spectrum_for(const RunConfig& c, const Equilibrium& eq) {
    if (c.eigenvalues.empty()) return isotypical_blocks(eq, c.params);
    auto r = spectral_report_from_eigenvalues(c.params.n, parse_eigenvalue_list(c.eigenvalues));
    r.r0 = eq.r0;
    return r;
}

std::vector<std::string> default_tags(const std::vector<CriticalValue>& lam) {
    std::vector<std::string> tags;
    for (const auto& cv : lam)
        if (cv.label.l == 1) tags.push_back(cv.tag());
    return tags;
}

json equilibrium_json(const Equilibrium& eq) {
    json u = json::array();
    for (const auto& z : eq.u0) u.push_back({round12(z.real()), round12(z.imag())});
    return {{"r0", round12(eq.r0)},
            {"u0", u},
            {"gradient_norm", round12(eq.grad_norm)},
            {"phi_min", round12(eq.phi_min)},
            {"iterations", eq.iterations}};
}

std::string slug(const std::string& tag) {
    std::string s;
    for (char ch : tag) {
        if (ch == ',') s += '_';
        else if (ch == '+') s += "p";
        else if (ch == '-') s += "m";
        else if (ch == '\'') s += "prime";
        else s += ch;
    }
    return s;
}

void ensure_dir(const std::string& d) {
    std::error_code ec;
    std::filesystem::create_directories(d, ec);
    if (ec) throw ConfigError("cannot create output directory " + d + ": " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write " + path);
    f << text;
}

ShootingOptions shooting_options(const RunConfig& c) {
    ShootingOptions o;
    o.dt = c.dt;
    o.rotating = c.wave == "rotating";
    return o;
}

json orbit_entry(const RunConfig& c, const Equilibrium& eq, const SpectralReport& spec, const CriticalValue& cv,
                 bool write_files) {
    if (spec.synthetic) throw DomainError("shooting needs eigenvectors; drop --eigenvalues");
    auto orbit = find_periodic_orbit(eq, c.params, spec, cv, c.eps_rel * eq.r0, shooting_options(c));
    json j = to_json(orbit);
    j["wave"] = c.wave;
    if (c.periods > 1 || write_files) {
        IntegrateOptions io;
        io.dt = c.dt;
        io.sample_every = c.sample_every;
        auto tr = integrate(orbit.u0, orbit.v0, orbit.lambda, two_pi * c.periods, c.params, io);
        tr.seed = orbit.seed;
        tr.amplitude = orbit.amplitude;
        j["periods"] = c.periods;
        j["energy_drift_over_periods"] = round12(tr.max_relative_energy_drift());
        j["collided"] = tr.collided;
        if (write_files) {
            const std::string base = c.out_dir + "/orbit_" + slug(cv.tag());
            write_csv(tr, base + ".csv");
            write_text(base + ".svg", trajectory_svg(tr, eq.u0));
            j["csv"] = base + ".csv";
            j["svg"] = base + ".svg";
        }
    }
    return j;
}

json omega_entry(const SpectralReport& spec, const CriticalValue& cv, OmegaMode mode) {
    try {
        return to_json(omega_invariant(spec, cv, mode));
    } catch (const UnsupportedError& e) {
        return {{"crossing", to_json(cv)}, {"error", {{"kind", "unsupported"}, {"message", e.what()}}}};
    }
}

// Runs f(i) for i in [0, count) on up to thread_budget() workers; results
// land in their own slots so the output order never depends on scheduling.
void parallel_for(int count, const std::function<void(int)>& f) {
    const int workers = std::max(1, std::min(thread_budget(), count));
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errs(count);
    auto body = [&] {
        for (int i; (i = next++) < count;) {
            try {
                f(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

std::string critical_table(const std::vector<CriticalValue>& lam) {
    std::ostringstream s;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %18s %18s %18s\n", "crossing", "mu", "lambda", "2 pi lambda");
    s << buf;
    for (const auto& cv : lam) {
        std::snprintf(buf, sizeof buf, "%-10s %18.12g %18.12g %18.12g\n", cv.tag().c_str(), cv.mu, cv.lambda,
                      cv.period);
        s << buf;
    }
    return s.str();
}

int exit_code(ErrorKind k) {
    switch (k) {
    case ErrorKind::Config:
    case ErrorKind::Unsupported: return kConfigError;
    case ErrorKind::Domain:
    case ErrorKind::Solver: return kNumericalError;
    case ErrorKind::Consistency: return kConsistencyError;
    }
    return kNumericalError;
}

void emit_error(std::ostream& out, const std::string& kind, const std::string& msg) {
    out << json{{"error", {{"kind", kind}, {"message", msg}}}}.dump(2) << "\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string config_path;
    CLI::App app{"Vibration modes of a symmetric particle ring"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "equivibe 1.0");

    std::map<std::string, OptionMap> maps;
    auto* eq_cmd = app.add_subcommand("equilibrium", "radius of the regular-polygon equilibrium");
    auto* sp_cmd = app.add_subcommand("spectrum", "isotypical blocks of the Hessian and slice eigenvalues");
    auto* cs_cmd = app.add_subcommand("critical-set", "critical frequencies lambda = l / sqrt(mu)");
    auto* in_cmd = app.add_subcommand("invariants", "equivariant invariants omega at crossings");
    auto* si_cmd = app.add_subcommand("simulate", "periodic orbits near crossings, CSV/SVG output");
    auto* at_cmd = app.add_subcommand("atlas", "all of the above per crossing");
    for (auto* s : {eq_cmd, sp_cmd, cs_cmd, in_cmd, si_cmd, at_cmd}) add_common(s, c, maps[s->get_name()], config_path);
    for (auto* s : {cs_cmd, in_cmd, at_cmd}) add_spectral(s, c, maps[s->get_name()]);
    for (auto* s : {si_cmd, at_cmd}) add_shooting(s, c, maps[s->get_name()]);
    maps["critical-set"]["format"] = cs_cmd->add_option("--format", c.format, "json|table");
    for (auto* s : {in_cmd, at_cmd})
        maps[s->get_name()]["omega_mode"] = s->add_option("--mode", c.omega_mode, "reduced|literal");
    maps["invariants"]["crossings"] = in_cmd->add_option("--crossing", c.crossings, "e.g. 2,1,+ (repeatable)");
    maps["simulate"]["modes"] = si_cmd->add_option("--mode", c.modes, "crossing to shoot from, e.g. 3,1");
    maps["simulate"]["periods"] = si_cmd->add_option("--periods", c.periods, "periods to integrate");
    maps["simulate"]["sample_every"] = si_cmd->add_option("--sample-every", c.sample_every, "CSV/SVG thinning");
    maps["atlas"]["with_orbits"] = at_cmd->add_flag("--with-orbits", c.with_orbits, "shoot every l = 1 crossing");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << "equivibe 1.0\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        emit_error(out, "config", e.what());
        return kConfigError;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        const std::string cmd = sub->get_name();
        merge_config(config_path, c, maps[cmd]);
        c.validate();
        c.params.validate();
        const auto eq = find_equilibrium(c.params);

        json result;
        result["command"] = cmd;
        result["params"] = params_json(c);
        if (cmd == "equilibrium") {
            result["equilibrium"] = equilibrium_json(eq);
        } else if (cmd == "spectrum") {
            const auto spec = spectrum_for(c, eq);
            result["spectrum"] = to_json(spec);
            json recs = json::array();
            for (const auto& r : eigenvalues_with_multiplicity(spec)) {
                json comps = json::array();
                for (const auto& [tag, m] : r.components) comps.push_back({{"component", tag}, {"multiplicity", m}});
                recs.push_back(
                    {{"mu", round12(r.mu)}, {"components", comps}, {"real_multiplicity", r.real_multiplicity}});
            }
            result["distinct_eigenvalues"] = recs;
        } else if (cmd == "critical-set") {
            const auto lam = critical_set(spectrum_for(c, eq), c.l_max);
            if (c.format == "table") {
                out << critical_table(lam);
                return kOk;
            }
            json a = json::array();
            for (const auto& cv : lam) a.push_back(to_json(cv));
            result["l_max"] = c.l_max;
            result["r0"] = round12(eq.r0);
            result["critical_values"] = a;
        } else if (cmd == "invariants") {
            subgroup_classes(c.params.n);  // odd n has no lattice: fail before the sweep hides it
            const auto spec = spectrum_for(c, eq);
            const auto lam = critical_set(spec, c.l_max);
            const auto mode = parse_omega_mode(c.omega_mode);
            const auto tags = c.crossings.empty() ? default_tags(lam) : c.crossings;
            json a = json::array();
            // Default sweep: crossings beyond the frame cap become error rows; explicit ones still fail.
            for (const auto& t : tags)
                a.push_back(c.crossings.empty() ? omega_entry(spec, find_crossing(lam, t), mode)
                                                : to_json(omega_invariant(spec, find_crossing(lam, t), mode)));
            result["mode"] = to_string(mode);
            result["invariants"] = a;
        } else if (cmd == "simulate") {
            const auto spec = spectrum_for(c, eq);
            const auto lam = critical_set(spec, std::max(c.l_max, 1));
            if (!c.out_dir.empty()) ensure_dir(c.out_dir);
            const auto tags = c.modes.empty() ? default_tags(lam) : c.modes;
            json a = json::array();
            for (const auto& t : tags) a.push_back(orbit_entry(c, eq, spec, find_crossing(lam, t), !c.out_dir.empty()));
            result["eps"] = round12(c.eps_rel * eq.r0);
            result["isa"] = kernels::isa_name(kernels::active_isa());
            result["orbits"] = a;
        } else {  // atlas
            const auto spec = spectrum_for(c, eq);
            const auto lam = critical_set(spec, c.l_max);
            const auto mode = parse_omega_mode(c.omega_mode);
            if (c.with_orbits && !c.out_dir.empty()) ensure_dir(c.out_dir);
            std::vector<json> rows(lam.size());
            parallel_for(static_cast<int>(lam.size()), [&](int i) {
                const auto& cv = lam[i];
                json row = to_json(cv);
                row["limit_period"] = round12(two_pi * cv.lambda);
                const json w = omega_entry(spec, cv, mode);
                if (w.contains("error")) {
                    row["omega"] = nullptr;
                    row["omega_error"] = w["error"];
                } else {
                    row["omega"] = w["expansion"];
                    row["predicted_orbit_types"] = w["maximal_orbit_types"];
                    row["predicted_branches"] = w["predicted_branches"];
                }
                if (c.with_orbits && cv.label.l == 1) {
                    try {
                        row["orbit"] = orbit_entry(c, eq, spec, cv, !c.out_dir.empty());
                    } catch (const Error& e) {
                        row["orbit"] = {{"error", {{"kind", to_string(e.kind())}, {"message", e.what()}}}};
                    }
                }
                rows[i] = std::move(row);
            });
            result["equilibrium"] = equilibrium_json(eq);
            json ev = json::array();
            for (const auto& e : spec.entries) ev.push_back({{"component", e.tag()}, {"mu", round12(e.mu)}});
            result["slice_eigenvalues"] = ev;
            result["spectrum_source"] = spec.synthetic ? "supplied" : "computed";
            result["mode"] = to_string(mode);
            result["l_max"] = c.l_max;
            result["crossings"] = rows;
            if (!c.out_dir.empty()) {
                ensure_dir(c.out_dir);
                write_text(c.out_dir + "/atlas.json", result.dump(2) + "\n");
            }
        }
        out << result.dump(2) << "\n";
        return kOk;
    } catch (const Error& e) {
        emit_error(out, to_string(e.kind()), e.what());
        err << "equivibe: " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        emit_error(out, "internal", e.what());
        err << "equivibe: " << e.what() << "\n";
        return kNumericalError;
    }
}

} // namespace equivibe
