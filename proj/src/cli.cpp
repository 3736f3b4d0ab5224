#include "ndsys/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "ndsys/analysis.hpp"
#include "ndsys/errors.hpp"
#include "ndsys/io.hpp"
#include "ndsys/lax_phillips.hpp"
#include "ndsys/linalg.hpp"
#include "ndsys/realization.hpp"
#include "ndsys/sampling.hpp"
#include "ndsys/simulation.hpp"
#include "ndsys/transfer.hpp"

namespace ndsys::cli {

namespace {

using io::json;

/// A failure that maps to a specific exit code and carries report data.
struct CommandFailure {
    int code;
    std::string message;
    json details;
};

struct Common {
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::string config;
};

struct Report {
    std::string command;
    std::vector<std::string> inputs;
    json results = json::object();
    json warnings = json::array();
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) {
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return os.str();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string digest_of(const std::vector<std::string>& paths) {
    std::string all;
    for (const auto& p : paths) {
        all += p;
        all += '\0';
        all += slurp(p);
        all += '\0';
    }
    return sha256_hex(all);
}

/// Box format: "lo:hi" (cube) or "lo1,..,loN:hi1,..,hiN".
Box parse_box(const std::string& spec, std::size_t n) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("box must look like lo:hi");
    auto ints = [](const std::string& s) {
        std::vector<int> v;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                v.push_back(std::stoi(item, &used));
                if (used != item.size()) throw ParseError("bad integer in box: " + item);
            } catch (const std::logic_error&) {
                throw ParseError("bad integer in box: " + item);
            }
        }
        return v;
    };
    auto lo = ints(spec.substr(0, colon));
    auto hi = ints(spec.substr(colon + 1));
    if (lo.size() == 1) lo.assign(n, lo.front());
    if (hi.size() == 1) hi.assign(n, hi.front());
    if (lo.size() != n || hi.size() != n) throw ParseError("box arity does not match N");
    try {
        return Box(lo, hi);
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

json scan_to_json(const TorusScanReport& r) {
    return {{"max_norm", r.max_norm},
            {"argmax", io::point_to_json(r.argmax)},
            {"samples", r.samples},
            {"refined", r.refined},
            {"dissipative", r.dissipative}};
}

json certificate_to_json(const ConservativityCertificate& c) {
    return {{"gram_sum", c.gram_sum},
            {"gram_cross", c.gram_cross},
            {"cogram_sum", c.cogram_sum},
            {"cogram_cross", c.cogram_cross},
            {"pass", c.pass}};
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
    std::string system;
    std::size_t samples = 0;
    bool refine = false;
};

void cmd_check(const CheckArgs& a, const Common& c, Report& rep) {
    rep.inputs = {a.system};
    const MultiLSDS sys = io::system_from_json(io::read_json_file(a.system));
    const std::size_t samples = a.samples > 0 ? a.samples : default_scan_samples(sys.n());
    const auto scan = dissipativity_scan(sys, samples, a.refine, c.tol);
    const auto cert = conservativity_check(sys, c.tol);
    const auto cc = closely_connected_subspace(sys);
    rep.results["dissipativity"] = scan_to_json(scan);
    rep.results["conservativity"] = certificate_to_json(cert);
    rep.results["conservative"] = cert.pass;
    rep.results["dim_x"] = sys.dim_x();
    rep.results["cc_dim"] = cc.dim();
    rep.results["closely_connected"] = cc.dim() == sys.dim_x();
    if (cert.pass) {
        const auto bs = block_structure(sys, c.tol);
        rep.results["block_structure"] = {{"dims_minus", bs.dims_minus},
                                          {"dims_plus", bs.dims_plus},
                                          {"unitarity_residual", bs.unitarity_residual}};
        rep.results["completely_nonunitary"] = cc.dim() == sys.dim_x();
    }
    rep.warnings.push_back("dissipativity verdict is based on " + std::to_string(scan.samples) +
                           " torus samples and is not a certificate");
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
    std::string system;
    std::string input;
    std::string init;
    std::string box;
    int nmax = 4;
    std::string energy;
    std::string out;
};

void write_energy_csv(const std::string& path, const std::vector<EnergyRow>& rows) {
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write " + path);
    f << "n,E_minus,E_plus,E_x,lhs,rhs,contaminated\n";
    f << std::setprecision(17);
    for (const auto& r : rows) {
        f << r.n << ',' << r.e_minus << ',' << r.e_plus << ',' << r.e_x << ',' << r.lhs << ','
          << r.rhs << ',' << (r.contaminated ? "true" : "false") << '\n';
    }
}

void cmd_simulate(const SimulateArgs& a, const Common& c, Report& rep) {
    rep.inputs = {a.system};
    const MultiLSDS sys = io::system_from_json(io::read_json_file(a.system));
    LatticeSignal input(sys.n(), sys.dim_nm());
    LatticeSignal init(sys.n(), sys.dim_x());
    if (!a.input.empty()) {
        rep.inputs.push_back(a.input);
        input = io::signal_from_json(io::read_json_file(a.input));
    }
    if (!a.init.empty()) {
        rep.inputs.push_back(a.init);
        init = io::signal_from_json(io::read_json_file(a.init));
    }
    if (a.nmax < 1) throw ParseError("--nmax must be at least 1");
    const Box box = a.box.empty() ? Box::cube(sys.n(), -a.nmax, a.nmax) : parse_box(a.box, sys.n());
    const SimulationWindow window{box, a.nmax};
    const Trajectory tr = simulate(sys, init, input, window);
    const auto rows = energy_balance_report(sys, init, input, window, c.tol);

    json ledger = json::array();
    for (const auto& r : rows) {
        ledger.push_back({{"n", r.n},
                          {"E_minus", r.e_minus},
                          {"E_plus", r.e_plus},
                          {"E_x", r.e_x},
                          {"E_x_prev", r.e_x_prev},
                          {"lhs", r.lhs},
                          {"rhs", r.rhs},
                          {"difference", r.difference},
                          {"contaminated", r.contaminated},
                          {"dissipative_ok", r.dissipative_ok},
                          {"conservative_ok", r.conservative_ok}});
    }
    json traj = {{"states", io::signal_to_json(tr.states)},
                 {"outputs", io::signal_to_json(tr.outputs)},
                 {"contaminated", json(std::vector<LatticePoint>(tr.contaminated.begin(),
                                                                 tr.contaminated.end()))}};
    if (!a.out.empty()) {
        std::ofstream f(a.out);
        if (!f) throw ParseError("cannot write " + a.out);
        f << traj.dump(2) << '\n';
        rep.results["trajectory_file"] = a.out;
    } else {
        rep.results["trajectory"] = traj;
    }
    rep.results["box"] = io::box_to_json(box);
    rep.results["energy"] = ledger;
    if (!a.energy.empty()) {
        write_energy_csv(a.energy, rows);
        rep.results["energy_file"] = a.energy;
    }
    if (!tr.contaminated.empty()) {
        rep.warnings.push_back(std::to_string(tr.contaminated.size()) +
                               " window points depend on values outside the box");
    }
}

// ---- transfer -------------------------------------------------------------

struct TransferArgs {
    std::string system;
    std::string points;
    std::size_t grid = 0;
    int coeffs = 0;
};

void cmd_transfer(const TransferArgs& a, const Common& /*c*/, Report& rep) {
    rep.inputs = {a.system};
    const MultiLSDS sys = io::system_from_json(io::read_json_file(a.system));
    std::vector<Point> pts;
    if (!a.points.empty()) {
        rep.inputs.push_back(a.points);
        json j = io::read_json_file(a.points);
        if (j.is_object() && j.contains("points")) j = j["points"];
        if (!j.is_array()) throw ParseError("points file must hold an array of points");
        for (const auto& p : j) {
            Point z = io::point_from_json(p);
            if (z.size() != sys.n()) throw ParseError("point arity does not match N");
            pts.push_back(std::move(z));
        }
    }
    std::size_t grid = a.grid;
    if (pts.empty() && grid == 0 && a.coeffs == 0) grid = 10;
    if (grid > 0) {
        auto g = sobol_polydisc(sys.n(), grid, 0.9);
        pts.insert(pts.end(), g.begin(), g.end());
    }
    json evals = json::array();
    std::size_t failures = 0;
    for (const auto& z : pts) {
        json e = {{"z", io::point_to_json(z)}};
        try {
            e["value"] = io::matrix_to_json(transfer_eval(sys, z));
        } catch (const SingularityError& s) {
            e["error"] = s.what();
            e["smallest_singular_value"] = s.smallest_singular_value();
            ++failures;
        }
        evals.push_back(std::move(e));
    }
    rep.results["evaluations"] = evals;
    if (a.coeffs > 0) {
        rep.results["coefficients"] = io::polynomial_to_json(maclaurin_polynomial(sys, a.coeffs));
    }
    if (failures > 0) {
        rep.warnings.push_back(std::to_string(failures) + " points hit a singular resolvent");
    }
}

// ---- realize --------------------------------------------------------------

struct RealizeArgs {
    std::string agler;
    std::size_t grid_size = 200;
    long padding = 0;
    std::string out;
};

void cmd_realize(const RealizeArgs& a, const Common& c, Report& rep) {
    rep.inputs = {a.agler};
    const AglerData data = io::agler_from_json(io::read_json_file(a.agler));
    RealizeOptions opt;
    opt.grid_size = a.grid_size;
    opt.seed = c.seed;
    opt.extra_padding = a.padding;
    const double agler = verify_agler_identity(data, 50, c.seed);
    rep.results["agler_residual"] = agler;
    try {
        const RealizationResult r = realize(data, opt);
        rep.results["state_dim"] = r.state_dim;
        rep.results["padding"] = r.padding;
        rep.results["grid_size"] = r.grid_size;
        rep.results["dim_history"] = r.dim_history;
        rep.results["residuals"] = r.residuals;
        const json sys = io::system_to_json(r.system);
        rep.results["system"] = sys;
        if (!a.out.empty()) {
            std::ofstream f(a.out);
            if (!f) throw ParseError("cannot write " + a.out);
            f << sys.dump(2) << '\n';
            rep.results["system_file"] = a.out;
        }
    } catch (const RealizationError& e) {
        throw CommandFailure{kVerificationFailure, e.what(), {{"residuals", e.residuals()}}};
    } catch (const PreconditionError& e) {
        throw CommandFailure{kVerificationFailure, e.what(), {{"agler_residual", agler}}};
    } catch (const RankAmbiguityError& e) {
        throw CommandFailure{kVerificationFailure, e.what(), json::object()};
    }
    rep.warnings.push_back("spans are sampled on a finite grid; L is unique only up to grid density");
}

// ---- laxphillips ----------------------------------------------------------

struct LaxPhillipsArgs {
    std::string system;
    std::string op = "metric";
    int k = 0;
    int j = 0;
    std::string box;
    int trials = 5;
    std::string vector;
};

void cmd_laxphillips(const LaxPhillipsArgs& a, const Common& c, Report& rep) {
    rep.inputs = {a.system};
    const MultiLSDS sys = io::system_from_json(io::read_json_file(a.system));
    const auto n = static_cast<int>(sys.n());
    auto index = [&](int v, const char* name) {
        if (v < 1 || v > n) {
            throw ParseError(std::string("--") + name + " must lie in 1.." + std::to_string(n));
        }
        return static_cast<std::size_t>(v - 1);
    };
    const Box box = a.box.empty() ? Box::cube(sys.n(), -4, 4) : parse_box(a.box, sys.n());
    rep.results["box"] = io::box_to_json(box);

    if (a.op == "generator" || a.op == "adjoint") {
        const std::size_t k = index(a.k == 0 ? 1 : a.k, "k");
        std::mt19937_64 rng(c.seed);
        LPVector h = zero_lp_vector(sys, box);
        if (!a.vector.empty()) {
            rep.inputs.push_back(a.vector);
            h = io::lp_vector_from_json(io::read_json_file(a.vector));
        } else {
            h = random_interior_vector(sys, box, 1, rng);
        }
        const LPVector h2 = random_interior_vector(sys, box, 1, rng);
        const bool gen = a.op == "generator";
        const LPResult r = gen ? apply_generator(sys, k, h) : apply_adjoint(sys, k, h);
        const Complex lhs = gen ? inner_product(r.value, h2)
                                : inner_product(apply_generator(sys, k, h2).value, h);
        const Complex rhs = gen ? inner_product(h, apply_adjoint(sys, k, h2).value)
                                : inner_product(h2, r.value);
        rep.results["result"] = io::lp_vector_to_json(r.value);
        rep.results["contaminated_points"] =
            r.contaminated.u_plus.size() + r.contaminated.y.size() + r.contaminated.u_minus.size();
        rep.results["adjointness_residual"] = std::abs(lhs - rhs);
        rep.results["norm_ratio"] = norm(h) > 0.0 ? norm(r.value) / norm(h) : 0.0;
    } else if (a.op == "commute") {
        json pairs = json::array();
        double worst = 0.0;
        std::vector<std::pair<std::size_t, std::size_t>> which;
        if (a.k != 0 || a.j != 0) {
            const std::size_t k = index(a.k, "k"), j = index(a.j, "j");
            if (k == j && n > 1) throw ParseError("--k and --j must differ");
            which.emplace_back(k, j);
        } else {
            for (std::size_t k = 0; k < sys.n(); ++k) {
                for (std::size_t j = k + 1; j < sys.n(); ++j) which.emplace_back(k, j);
            }
        }
        for (const auto& [k, j] : which) {
            const double r = k == j ? 0.0 : commutation_residual(sys, k, j, a.trials, box, c.seed);
            pairs.push_back({{"k", k + 1}, {"j", j + 1}, {"residual", r}});
            worst = std::max(worst, r);
        }
        rep.results["pairs"] = pairs;
        rep.results["max_residual"] = worst;
    } else if (a.op == "metric") {
        if (a.k != 0) index(a.k, "k");
        const MetricReport m = metric_check(sys, a.trials, box, c.seed, c.tol);
        const auto cert = conservativity_check(sys, c.tol);
        rep.results["min_ratio"] = m.min_ratio;
        rep.results["max_ratio"] = m.max_ratio;
        rep.results["contractive"] = m.contractive;
        rep.results["isometric"] = m.isometric;
        rep.results["conservative"] = cert.pass;
    } else {
        throw ParseError("unknown --op " + a.op);
    }
    rep.warnings.push_back("vectors are supported away from the box faces; truncation is exact there");
}

// ---- config injection -----------------------------------------------------

std::optional<std::string> find_config(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
    }
    return std::nullopt;
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
    for (const auto& a : args) {
        if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
}

/// Appends config values for options of `sub` not already on the command line,
/// so the order is flag > config > environment > default.
std::vector<std::string> inject_config(std::vector<std::string> args, const json& cfg,
                                       CLI::App& sub) {
    if (!cfg.is_object()) throw ParseError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        const std::string flag = "--" + key;
        if (key == "config" || given(args, flag)) continue;
        const CLI::Option* opt = sub.get_option_no_throw(flag);
        if (opt == nullptr) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            args.push_back(flag);
            args.push_back(value.dump());
        } else {
            throw ParseError("config value for " + key + " must be a scalar");
        }
    }
    return args;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--tol", c.tol, "Absolute tolerance for verdicts")->envname("NDSYS_TOL");
    sub->add_option("--seed", c.seed, "Seed for every randomized step");
    sub->add_option("--config", c.config, "JSON file with default flag values");
}

json error_report(const std::string& command, int code, const std::string& message,
                  const json& details) {
    json e = {{"code", code}, {"message", message}};
    if (!details.is_null() && !details.empty()) e["details"] = details;
    return {{"schema", "ndsys/1"}, {"command", command}, {"error", e}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Toolkit for multiparametric linear stationary dynamical systems", "ndsys"};
    app.require_subcommand(1);

    Common common;
    CheckArgs check;
    SimulateArgs simulate_args;
    TransferArgs transfer_args;
    RealizeArgs realize_args;
    LaxPhillipsArgs lp;

    auto* c_check = app.add_subcommand("check", "Dissipativity, conservativity, close connectedness");
    c_check->add_option("system", check.system, "System file")->required();
    c_check->add_option("--samples", check.samples, "Torus samples (default min(32^N, 1e5))");
    c_check->add_flag("--refine", check.refine, "Gradient refinement from the best sample");
    add_common(c_check, common);

    auto* c_sim = app.add_subcommand("simulate", "Front-by-front simulation and energy ledger");
    c_sim->add_option("system", simulate_args.system, "System file")->required();
    c_sim->add_option("--input", simulate_args.input, "Input signal file");
    c_sim->add_option("--init", simulate_args.init, "Initial states on front 0");
    c_sim->add_option("--box", simulate_args.box, "Window lo:hi or lo1,..:hi1,..");
    c_sim->add_option("--nmax", simulate_args.nmax, "Last front to compute");
    c_sim->add_option("--energy", simulate_args.energy, "Write the energy ledger CSV here");
    c_sim->add_option("--out", simulate_args.out, "Write the trajectory JSON here");
    add_common(c_sim, common);

    auto* c_tr = app.add_subcommand("transfer", "Transfer function values and coefficients");
    c_tr->add_option("system", transfer_args.system, "System file")->required();
    c_tr->add_option("--points", transfer_args.points, "JSON array of evaluation points");
    c_tr->add_option("--grid", transfer_args.grid, "Number of Sobol points in (0.9 D)^N");
    c_tr->add_option("--coeffs", transfer_args.coeffs, "Maclaurin coefficients up to this order");
    add_common(c_tr, common);

    auto* c_re = app.add_subcommand("realize", "Conservative realization from Agler data");
    c_re->add_option("agler", realize_args.agler, "Agler data file")->required();
    c_re->add_option("--grid-size", realize_args.grid_size, "Initial sample grid size");
    c_re->add_option("--padding", realize_args.padding, "Extra dimensions appended to M");
    c_re->add_option("--out", realize_args.out, "Write the realized system here");
    add_common(c_re, common);

    auto* c_lp = app.add_subcommand("laxphillips", "Lax-Phillips generator checks");
    c_lp->add_option("system", lp.system, "System file")->required();
    c_lp->add_option("--op", lp.op, "generator | adjoint | commute | metric");
    c_lp->add_option("--k", lp.k, "Generator index, 1-based");
    c_lp->add_option("--j", lp.j, "Second generator index, 1-based");
    c_lp->add_option("--box", lp.box, "Box lo:hi or lo1,..:hi1,..");
    c_lp->add_option("--trials", lp.trials, "Random vectors per check");
    c_lp->add_option("--vector", lp.vector, "Vector file for generator/adjoint");
    add_common(c_lp, common);

    std::string command = args.empty() ? "" : args.front();
    std::vector<std::string> argv_store{"ndsys"};
    try {
        std::vector<std::string> effective = args;
        if (auto cfg_path = find_config(args)) {
            CLI::App* sub = nullptr;
            for (auto* s : {c_check, c_sim, c_tr, c_re, c_lp}) {
                if (s->get_name() == command) sub = s;
            }
            if (sub != nullptr) effective = inject_config(args, io::read_json_file(*cfg_path), *sub);
        }
        argv_store.insert(argv_store.end(), effective.begin(), effective.end());
    } catch (const ParseError& e) {
        out << error_report(command, kInputError, e.what(), json()).dump(2) << '\n';
        err << "ndsys: " << e.what() << '\n';
        return kInputError;
    }

    std::vector<char*> argv;
    for (auto& s : argv_store) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        out << error_report(command, kInputError, e.what(), json()).dump(2) << '\n';
        err << "ndsys: " << e.what() << '\n';
        return kInputError;
    }

    Report rep;
    rep.command = command;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (c_check->parsed()) cmd_check(check, common, rep);
        if (c_sim->parsed()) cmd_simulate(simulate_args, common, rep);
        if (c_tr->parsed()) cmd_transfer(transfer_args, common, rep);
        if (c_re->parsed()) cmd_realize(realize_args, common, rep);
        if (c_lp->parsed()) cmd_laxphillips(lp, common, rep);
    } catch (const CommandFailure& f) {
        out << error_report(command, f.code, f.message, f.details).dump(2) << '\n';
        err << "ndsys: " << f.message << '\n';
        return f.code;
    } catch (const Error& e) {
        out << error_report(command, kInputError, e.what(), json()).dump(2) << '\n';
        err << "ndsys: " << e.what() << '\n';
        return kInputError;
    }
    const auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start)
                        .count();

    json report = {{"schema", "ndsys/1"},
                   {"command", rep.command},
                   {"inputs_digest", digest_of(rep.inputs)},
                   {"tol", common.tol},
                   {"seed", common.seed},
                   {"results", rep.results},
                   {"warnings", rep.warnings},
                   {"timing_ms", ms}};
    out << report.dump(2) << '\n';
    return kOk;
}

}  // namespace ndsys::cli
