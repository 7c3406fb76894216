// pdm: command-line front end for the position-dependent-mass oscillator
// catalog. Data goes out as CSV, reports as JSON; errors are JSON on stderr.
//
// Exit status: 0 ok, 1 validation error, 2 runtime/domain error,
// 3 invariant failure.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdm/dynamics.hpp"
#include "pdm/errors.hpp"
#include "pdm/model_json.hpp"
#include "pdm/models.hpp"
#include "pdm/solutions.hpp"
#include "pdm/transform.hpp"
#include "pdm/verify.hpp"

namespace {

using namespace pdm;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitInvariant = 3;

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io_error", what) {}
};

struct ModelFlags {
    std::string family;
    std::string model_file;
    std::optional<std::string> sign;
    std::map<std::string, std::optional<double>> numbers{
        {"lambda", {}}, {"omega", {}}, {"xi", {}},  {"beta", {}},
        {"alpha", {}},  {"eta", {}},   {"A", {}},   {"phi", {}},
    };
};

struct Tolerances {
    double rtol;
    double atol = 1e-12;
};

double default_rtol() {
    const char* env = std::getenv("PDM_DEFAULT_TOL");
    if (env == nullptr || *env == '\0') return 1e-10;
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0))
        throw InvalidParameter(std::string("PDM_DEFAULT_TOL must be a positive number, got '") + env + "'");
    return v;
}

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
    cmd->add_option("family", f.family, "ml1, ml2, shifted_ml, quadratic, morse, isotonic or sho");
    cmd->add_option("--model", f.model_file, "JSON model definition; flags override its fields");
    cmd->add_option("--sign", f.sign, "branch sigma: + or -");
    cmd->add_option("--lambda", f.numbers["lambda"], "nonlinearity lambda");
    cmd->add_option("--omega", f.numbers["omega"], "reference frequency omega");
    cmd->add_option("--xi", f.numbers["xi"], "shift xi (shifted_ml)");
    cmd->add_option("--beta", f.numbers["beta"], "map scale (ml2) or isotonic strength");
    cmd->add_option("--alpha", f.numbers["alpha"], "x-space frequency (quadratic, morse)");
    cmd->add_option("--eta", f.numbers["eta"], "Morse range parameter eta");
    cmd->add_option("--A", f.numbers["A"], "amplitude A of the closed-form solution");
    cmd->add_option("--phi", f.numbers["phi"], "phase phi (delta for isotonic)");
}

void add_tolerance_flags(CLI::App* cmd, std::optional<double>& rtol, std::optional<double>& atol) {
    cmd->add_option("--rtol", rtol, "relative tolerance (default 1e-10 or PDM_DEFAULT_TOL)");
    cmd->add_option("--atol", atol, "absolute tolerance (default 1e-12)");
}

Tolerances resolve_tolerances(const std::optional<double>& rtol, const std::optional<double>& atol) {
    Tolerances t{rtol ? *rtol : default_rtol()};
    if (atol) t.atol = *atol;
    if (!(t.rtol > 0.0) || !(t.atol > 0.0)) throw InvalidParameter("tolerances must be positive");
    return t;
}

nlohmann::json model_document(const ModelFlags& f) {
    nlohmann::json doc = nlohmann::json::object();
    if (!f.model_file.empty()) {
        std::ifstream in(f.model_file);
        if (!in) throw InvalidParameter("cannot read model file '" + f.model_file + "'");
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidParameter(std::string("malformed model JSON: ") + e.what());
        }
        if (!doc.is_object()) throw InvalidParameter("model definition must be a JSON object");
    }
    if (!f.family.empty()) doc["family"] = f.family;
    if (!doc.contains("family")) throw InvalidParameter("no model family given");
    if (f.sign) doc["sign"] = *f.sign;
    for (const auto& [key, value] : f.numbers)
        if (value) doc[key] = *value;
    return doc;
}

ModelFamily resolve_model(const nlohmann::json& doc) { return normalized(model_from_json(doc)); }

// Parameters a sweep may vary, per family.
std::set<std::string> sweepable(const std::string& family_name, Family family) {
    if (family_name == "sho") return {"omega", "A", "phi"};
    switch (family) {
        case Family::ml1: return {"lambda", "omega", "A", "phi"};
        case Family::ml2: return {"lambda", "omega", "beta", "A", "phi"};
        case Family::shifted_ml: return {"lambda", "omega", "xi", "A", "phi"};
        case Family::quadratic: return {"lambda", "omega", "alpha", "A", "phi"};
        case Family::morse: return {"eta", "omega", "alpha", "A", "phi"};
        case Family::isotonic: return {"lambda", "omega", "beta", "A", "phi"};
    }
    return {};
}

// Writes to the --out path, or stdout when it is empty or "-".
template <class F>
void emit(const std::string& path, F&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    body(out);
    if (!out) throw IoError("write to '" + path + "' failed");
}

void print_error(const std::string& message, const std::string& kind) {
    nlohmann::json err{{"error", message}, {"kind", kind}};
    std::cerr << err.dump() << '\n';
}

// ---- list-models ----------------------------------------------------------

int run_list_models() {
    struct Row {
        const char* name;
        const char* mass;
        const char* potential;
        const char* params;
    };
    static const Row rows[] = {
        {"ml1", "1/(1+s*lambda*x^2)", "m*omega^2*x^2/2", "sign lambda omega A phi"},
        {"ml2", "1/(1+s*lambda*x^2)", "-s*omega^2*m/(2*lambda)", "sign lambda omega beta A phi"},
        {"shifted_ml", "1/(1+s*lambda*(x+xi)^2)", "m*omega^2*(x+xi)^2/2", "sign lambda omega xi A phi"},
        {"quadratic", "(1+lambda*x)^-4", "-(alpha^2/2lambda^2)(1+2*lambda*x)/(1+lambda*x)^2",
         "lambda omega|alpha A phi"},
        {"morse", "exp(2*eta*x)", "omega^2*(exp(eta*x)-1)^2/2", "eta omega|alpha A phi"},
        {"isotonic", "1/(1+s*lambda*x^2)", "m*omega^2*x^2/2 + beta*(1+s*lambda*x^2)/x^2",
         "sign lambda omega beta A phi"},
        {"sho", "1", "omega^2*x^2/2", "omega A phi"},
    };
    for (const auto& r : rows)
        std::cout << r.name << "\tm(x) = " << r.mass << "\tV(x) = " << r.potential << "\tparams: " << r.params
                  << '\n';
    return kExitOk;
}

// ---- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::optional<double> x0, v0, t_end, rtol, atol;
    double dt = 0.01;
    std::string out;
};

int run_simulate(const ModelFlags& flags, const SimulateArgs& a) {
    const ModelFamily fam = resolve_model(model_document(flags));
    const Tolerances tol = resolve_tolerances(a.rtol, a.atol);
    if (!(a.dt > 0.0)) throw InvalidParameter("--dt must be positive");

    const PdmSystem sys = build_model(fam);
    const NonlocalMap map = catalog_map(fam);
    const ClosedFormSolution sol(fam);
    const auto k0 = sol.evaluate(0.0);
    const InitialState ic{a.x0.value_or(k0.x), a.v0.value_or(k0.xdot)};
    const double t_end = a.t_end.value_or(sol.period());
    if (!(t_end > 0.0)) throw InvalidParameter("--t-end must be positive");
    if (!sys.contains(ic.x0)) throw InvalidParameter("initial position lies outside the model domain");

    IntegratorOptions io;
    io.rtol = tol.rtol;
    io.atol = tol.atol;
    io.sample_dt = a.dt;
    const Trajectory traj = integrate_pdm(sys, map, ic, t_end, io);
    emit(a.out, [&](std::ostream& os) { write_trajectory_csv(os, traj); });
    return kExitOk;
}

// ---- verify / transform-check ----------------------------------------------

struct VerifyArgs {
    std::optional<double> rtol, atol;
    int periods = 10;
    std::string out;
};

int run_verify(const ModelFlags& flags, const VerifyArgs& a) {
    const ModelFamily fam = resolve_model(model_document(flags));
    const Tolerances tol = resolve_tolerances(a.rtol, a.atol);
    if (a.periods < 2) throw InvalidParameter("--periods must be at least 2");
    VerifyOptions opts;
    opts.rtol = tol.rtol;
    opts.atol = tol.atol;
    opts.periods = a.periods;
    const VerifyReport report = verify_family(fam, opts);

    std::size_t failed = 0;
    emit(a.out, [&](std::ostream& os) {
        os.precision(10);
        os << "model " << model_to_json(report.family).dump() << '\n';
        for (const auto& c : report.checks) {
            if (!c.passed) ++failed;
            os << (c.passed ? "PASS " : "FAIL ") << c.name << "  measured=" << c.measured
               << "  tolerance=" << c.tolerance;
            if (!c.detail.empty()) os << "  (" << c.detail << ')';
            os << '\n';
        }
        for (const auto& [key, value] : report.info) os << "info " << key << " = " << value << '\n';
        os << (failed == 0 ? "all " : "") << report.checks.size() - failed << " of " << report.checks.size()
           << " invariants passed\n";
    });
    return failed == 0 ? kExitOk : kExitInvariant;
}

int run_transform_check(const ModelFlags& flags, const std::string& out) {
    const ModelFamily fam = resolve_model(model_document(flags));
    VerifyOptions opts;
    opts.dynamics = false;
    const VerifyReport report = verify_family(fam, opts);
    const PdmSystem sys = build_model(fam);
    const NonlocalMap map = catalog_map(fam);

    nlohmann::json doc;
    doc["model"] = model_to_json(report.family);
    doc["domain"] = {sys.domain.lo, sys.domain.hi};
    doc["monotone"] = map.monotone;
    doc["checks"] = nlohmann::json::array();
    for (const auto& c : report.checks)
        doc["checks"].push_back(
            {{"name", c.name}, {"measured", c.measured}, {"tolerance", c.tolerance}, {"passed", c.passed},
             {"detail", c.detail}});
    doc["passed"] = report.all_passed();
    emit(out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
    return report.all_passed() ? kExitOk : kExitInvariant;
}

// ---- sweep --------------------------------------------------------------------

struct SweepArgs {
    std::string param;
    double lo = 0.0, hi = 0.0;
    int count = 11;
    int periods = 10;
    unsigned jobs = 0;
    std::optional<double> rtol, atol;
    std::string out;
};

struct SweepRow {
    double value = 0.0, measured = 0.0, predicted = 0.0, energy = 0.0, drift = 0.0;
};

SweepRow sweep_point(nlohmann::json doc, const std::string& param, double value, int periods,
                     const Tolerances& tol) {
    doc[param] = value;
    const ModelFamily fam = resolve_model(doc);
    const PdmSystem sys = build_model(fam);
    const NonlocalMap map = catalog_map(fam);
    const ClosedFormSolution sol(fam);
    const auto k0 = sol.evaluate(0.0);
    IntegratorOptions io;
    io.rtol = tol.rtol;
    io.atol = tol.atol;
    io.sample_dt = sol.period() / 2000.0;
    const Trajectory traj = integrate_pdm(sys, map, {k0.x, k0.xdot}, periods * sol.period(), io);
    return {value, estimate_period(traj), sol.period(), traj.samples.front().energy, max_energy_drift(traj)};
}

int run_sweep(const ModelFlags& flags, const SweepArgs& a) {
    const nlohmann::json doc = model_document(flags);
    const Tolerances tol = resolve_tolerances(a.rtol, a.atol);
    const ModelFamily base = model_from_json(doc);
    const auto allowed = sweepable(doc["family"].get<std::string>(), base.family);
    if (!allowed.count(a.param)) {
        std::string list;
        for (const auto& p : allowed) list += (list.empty() ? "" : ", ") + p;
        throw InvalidParameter("'" + a.param + "' is not a parameter of " + doc["family"].get<std::string>() +
                               " (expected one of: " + list + ")");
    }
    if (a.count < 2) throw InvalidParameter("--count must be at least 2");
    if (a.periods < 2) throw InvalidParameter("--periods must be at least 2");

    const auto n = static_cast<std::size_t>(a.count);
    std::vector<SweepRow> rows(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            const double v = a.lo + (a.hi - a.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
            try {
                rows[i] = sweep_point(doc, a.param, v, a.periods, tol);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min<unsigned>(jobs, static_cast<unsigned>(n));
    std::vector<std::future<void>> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
    // Report the first failing row by index, independent of scheduling.
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    emit(a.out, [&](std::ostream& os) {
        os.precision(17);
        os << "param,measured_period,predicted_period,energy,drift\n";
        for (const auto& r : rows)
            os << r.value << ',' << r.measured << ',' << r.predicted << ',' << r.energy << ',' << r.drift << '\n';
    });
    return kExitOk;
}

// ---- map-table ------------------------------------------------------------------

struct MapTableArgs {
    std::optional<double> lo, hi;
    int count = 201;
    std::string out;
};

int run_map_table(const ModelFlags& flags, const MapTableArgs& a) {
    const ModelFamily fam = resolve_model(model_document(flags));
    const PdmSystem sys = build_model(fam);
    const NonlocalMap map = catalog_map(fam);
    const Interval win = sys.sampling_window();
    const double lo = a.lo.value_or(win.lo), hi = a.hi.value_or(win.hi);
    if (a.count < 2) throw InvalidParameter("--count must be at least 2");
    if (!(lo < hi)) throw InvalidParameter("--lo must be below --hi");
    if (!sys.contains(lo) || !sys.contains(hi)) throw InvalidParameter("table range leaves the model domain");

    emit(a.out, [&](std::ostream& os) {
        os.precision(17);
        os << "x,q,qprime,f,g\n";
        for (int i = 0; i < a.count; ++i) {
            const double x = lo + (hi - lo) * i / (a.count - 1);
            os << x << ',' << map.q(x) << ',' << map.q.derivative(x) << ',' << map.f(x) << ',' << map.g(x) << '\n';
        }
    });
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Position-dependent-mass oscillators: simulation, nonlocal maps and invariant checks"};
    app.require_subcommand(1);

    auto* list_cmd = app.add_subcommand("list-models", "List the model catalog");

    ModelFlags sim_model, tc_model, ver_model, sw_model, mt_model;

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Integrate a model and write the trajectory as CSV");
    add_model_flags(sim_cmd, sim_model);
    sim_cmd->add_option("--x0", sim.x0, "initial position (default: closed form at t = 0)");
    sim_cmd->add_option("--v0", sim.v0, "initial velocity (default: closed form at t = 0)");
    sim_cmd->add_option("--t-end", sim.t_end, "final time (default: one closed-form period)");
    sim_cmd->add_option("--dt", sim.dt, "output sample spacing");
    sim_cmd->add_option("--out", sim.out, "output file (default stdout)");
    add_tolerance_flags(sim_cmd, sim.rtol, sim.atol);

    std::string tc_out;
    auto* tc_cmd = app.add_subcommand("transform-check", "Compatibility and linearization report (JSON)");
    add_model_flags(tc_cmd, tc_model);
    tc_cmd->add_option("--out", tc_out, "output file (default stdout)");

    VerifyArgs ver;
    auto* ver_cmd = app.add_subcommand("verify", "Run the invariant suite for a model");
    add_model_flags(ver_cmd, ver_model);
    ver_cmd->add_option("--periods", ver.periods, "closed-form periods to integrate");
    ver_cmd->add_option("--out", ver.out, "output file (default stdout)");
    add_tolerance_flags(ver_cmd, ver.rtol, ver.atol);

    SweepArgs sw;
    auto* sw_cmd = app.add_subcommand("sweep", "Measured vs predicted period over a parameter range (CSV)");
    add_model_flags(sw_cmd, sw_model);
    sw_cmd->add_option("--param", sw.param, "parameter to vary")->required();
    sw_cmd->add_option("--lo", sw.lo, "first value")->required();
    sw_cmd->add_option("--hi", sw.hi, "last value")->required();
    sw_cmd->add_option("--count", sw.count, "number of grid points (>= 2)");
    sw_cmd->add_option("--periods", sw.periods, "closed-form periods integrated per point");
    sw_cmd->add_option("--jobs", sw.jobs, "worker threads (default: hardware concurrency)");
    sw_cmd->add_option("--out", sw.out, "output file (default stdout)");
    add_tolerance_flags(sw_cmd, sw.rtol, sw.atol);

    MapTableArgs mt;
    auto* mt_cmd = app.add_subcommand("map-table", "Sample the nonlocal map as CSV (x, q, q', f, g)");
    add_model_flags(mt_cmd, mt_model);
    mt_cmd->add_option("--lo", mt.lo, "first x (default: sampling window)");
    mt_cmd->add_option("--hi", mt.hi, "last x (default: sampling window)");
    mt_cmd->add_option("--count", mt.count, "number of rows");
    mt_cmd->add_option("--out", mt.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error(e.what(), "usage");
        return kExitValidation;
    }

    try {
        if (*list_cmd) return run_list_models();
        if (*sim_cmd) return run_simulate(sim_model, sim);
        if (*tc_cmd) return run_transform_check(tc_model, tc_out);
        if (*ver_cmd) return run_verify(ver_model, ver);
        if (*sw_cmd) return run_sweep(sw_model, sw);
        if (*mt_cmd) return run_map_table(mt_model, mt);
    } catch (const Error& e) {
        print_error(e.what(), e.kind());
        return e.is_validation() ? kExitValidation : kExitRuntime;
    } catch (const std::exception& e) {
        print_error(e.what(), "internal");
        return kExitRuntime;
    }
    return kExitRuntime;
}
