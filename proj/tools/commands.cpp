#include "commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "g2kit/deformations.hpp"
#include "g2kit/dirac.hpp"
#include "g2kit/error.hpp"
#include "g2kit/grassmann.hpp"
#include "g2kit/random.hpp"
#include "g2kit/sw.hpp"
#include "g2kit/verify.hpp"
#include "g2kit/version.hpp"

namespace g2kit::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Common {
    std::uint64_t seed = 1;
    double tol = 1e-10;
    std::string output;
    std::string format;
    bool timing = false;
};

void add_common(CLI::App* sub, Common& c, const std::string& format, double tol, const std::string& tol_help) {
    c.format = format;
    c.tol = tol;
    sub->add_option("--seed", c.seed, "seed of the mt19937_64 stream (Box-Muller normals)")->capture_default_str();
    sub->add_option("--tol", c.tol, tol_help)->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--output", c.output, "write to this path instead of stdout");
    sub->add_option("--format", c.format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
}

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

Json header(const std::string& command, const Common& c) {
    Json j;
    j["schema"] = 1;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = c.seed;
    return j;
}

std::string csv_header(const std::string& command, const Common& c) {
    return "# g2kit " + std::string(kVersion) + " " + command + " seed=" + std::to_string(c.seed) + "\n";
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Writes to --output or out; false (with a diagnostic) if the file cannot be written.
bool emit(const std::string& text, const Common& c, std::ostream& out, std::ostream& err) {
    if (c.output.empty()) {
        out << text;
        return true;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f || !(f << text)) {
        err << "error: cannot write " << c.output << "\n";
        return false;
    }
    return true;
}

// ---- verify ----

struct VerifyArgs {
    Common c;
    std::size_t samples = 10000;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    VerifyConfig cfg;
    cfg.seed = a.c.seed;
    cfg.samples = a.samples;
    cfg.tol = a.c.tol;
    cfg.timing = a.c.timing;
    const VerificationReport r = run_verify(cfg);
    std::string text;
    if (a.c.format == "json") {
        Json j = header("verify", a.c);
        j["suite"] = r.suite;
        j["samples"] = r.samples;
        j["tol"] = a.c.tol;
        j["pass"] = r.pass();
        Json checks = Json::array();
        for (const Check& k : r.checks) {
            Json e;
            e["name"] = k.name;
            e["ref"] = k.ref;
            e["max_error"] = std::isfinite(k.max_error) ? Json(k.max_error) : Json(num(k.max_error));
            e["threshold"] = k.threshold;
            e["pass"] = k.pass;
            checks.push_back(e);
        }
        j["checks"] = checks;
        if (r.wall_time >= 0) j["wall_time"] = r.wall_time;
        text = dump(j);
    } else {
        std::ostringstream s;
        s << csv_header("verify", a.c) << "# samples=" << r.samples << " pass=" << (r.pass() ? 1 : 0) << "\n";
        if (r.wall_time >= 0) s << "# wall_time=" << num(r.wall_time) << "\n";
        s << "name,max_error,threshold,pass\n";
        for (const Check& k : r.checks)
            s << k.name << "," << num(k.max_error) << "," << num(k.threshold) << "," << (k.pass ? 1 : 0) << "\n";
        text = s.str();
    }
    if (!emit(text, a.c, out, err)) return 1;
    for (const Check& k : r.checks)
        if (!k.pass) err << "FAIL " << k.name << ": " << num(k.max_error) << " > " << num(k.threshold) << "\n";
    return r.pass() ? 0 : 1;
}

// ---- grassmann-sample ----

struct SampleArgs {
    Common c;
    std::size_t count = 10000;
};

int cmd_grassmann_sample(const SampleArgs& a, std::ostream& out, std::ostream& err) {
    const auto frames = sample_grassmann(a.c.seed, a.count);
    std::vector<double> phi(frames.size()), chin(frames.size());
    double sum = 0, sum2 = 0, chi_sum = 0, ident = 0, phimin = 1e300, phimax = -1e300, chimax = 0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const CalibrationReport r = associative_test(frames[i], a.c.tol);
        phi[i] = r.phi_value;
        chin[i] = r.defect_norm;
        sum += r.phi_value;
        sum2 += r.phi_value * r.phi_value;
        chi_sum += r.defect_norm;
        phimin = std::min(phimin, r.phi_value);
        phimax = std::max(phimax, r.phi_value);
        chimax = std::max(chimax, r.defect_norm);
        ident = std::max(ident, std::abs(r.phi_value * r.phi_value + r.defect_norm * r.defect_norm - 1));
    }
    const double n = static_cast<double>(frames.size());
    const double mean = sum / n, var = std::max(0.0, sum2 / n - mean * mean);
    const double maxabs = std::max(std::abs(phimin), std::abs(phimax));
    const bool pass = maxabs <= 1 + a.c.tol && ident <= a.c.tol;
    std::string text;
    if (a.c.format == "json") {
        Json j = header("grassmann-sample", a.c);
        j["count"] = a.count;
        Json p;
        p["mean"] = mean;
        p["std"] = std::sqrt(var);
        p["min"] = phimin;
        p["max"] = phimax;
        p["max_abs"] = maxabs;
        j["phi"] = p;
        Json c;
        c["mean"] = chi_sum / n;
        c["max"] = chimax;
        j["chi_norm"] = c;
        j["calibration_identity_error"] = ident;
        j["pass"] = pass;
        text = dump(j);
    } else {
        std::ostringstream s;
        s << csv_header("grassmann-sample", a.c) << "sample,phi,chi_norm\n";
        for (std::size_t i = 0; i < frames.size(); ++i) s << i << "," << num(phi[i]) << "," << num(chin[i]) << "\n";
        text = s.str();
    }
    if (!emit(text, a.c, out, err)) return 1;
    if (!pass) err << "FAIL calibration bound or identity exceeded tol\n";
    return pass ? 0 : 1;
}

// ---- chi-flow ----

struct FlowArgs {
    Common c;
    int n = 8;
    int steps = 50;
    double dt = 1e-3;
    double epsilon = 1e-2;
    std::string mode = "sin";
    std::string snapshot;
};

int cmd_chi_flow(const FlowArgs& a, std::ostream& out, std::ostream& err) {
    const std::map<std::string, FlowPerturbation> modes = {{"none", FlowPerturbation::None},
                                                           {"sin", FlowPerturbation::Sin},
                                                           {"eigen", FlowPerturbation::Eigen},
                                                           {"random", FlowPerturbation::Random}};
    auto Y = Immersion3Lattice::flat_torus(a.n);
    perturb(Y, modes.at(a.mode), a.epsilon, a.c.seed);
    FlowTrace tr;
    try {
        tr = chi_flow(Y, a.steps, a.dt);
    } catch (const FrameError& e) {
        err << "error: chi-flow aborted: " << e.what() << "\n";
        return 1;
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < tr.max_defect.size(); ++k) decreasing = decreasing && tr.max_defect[k] < tr.max_defect[k - 1];

    std::string text;
    if (a.c.format == "json") {
        Json j = header("chi-flow", a.c);
        j["n"] = a.n;
        j["steps"] = a.steps;
        j["dt"] = a.dt;
        j["epsilon"] = a.epsilon;
        j["mode"] = a.mode;
        j["first_step_displacement"] = tr.first_step_displacement;
        j["monotone_decreasing"] = decreasing;
        j["max_defect"] = tr.max_defect;
        text = dump(j);
    } else {
        std::ostringstream s;
        s << csv_header("chi-flow", a.c) << "# n=" << a.n << " dt=" << num(a.dt) << " epsilon=" << num(a.epsilon)
          << " mode=" << a.mode << "\n";
        s << "step,time,max_defect\n";
        for (std::size_t k = 0; k < tr.max_defect.size(); ++k)
            s << k << "," << num(k * a.dt) << "," << num(tr.max_defect[k]) << "\n";
        text = s.str();
    }
    if (!emit(text, a.c, out, err)) return 1;
    if (!a.snapshot.empty()) {
        std::ostringstream s;
        s << csv_header("chi-flow snapshot", a.c) << "site,x1,x2,x3,x4,x5,x6,x7,defect_norm\n";
        const auto norms = Y.defect_norms();
        for (std::size_t i = 0; i < Y.sites(); ++i) {
            s << i;
            for (int c = 0; c < 7; ++c) s << "," << num(Y.point(i)[c]);
            s << "," << num(norms[i]) << "\n";
        }
        std::ofstream f(a.snapshot, std::ios::binary);
        if (!f || !(f << s.str())) {
            err << "error: cannot write " << a.snapshot << "\n";
            return 1;
        }
    }
    return 0;
}

// ---- dirac ----

struct DiracArgs {
    Common c;
    int n = 8;
    std::vector<double> twist = {0, 0, 0};
    int count = 32;
    std::string stencil = "lifted";
    double r = 0.5;
};

int cmd_dirac(const DiracArgs& a, std::ostream& out, std::ostream& err) {
    DiracOptions opt;
    opt.stencil = a.stencil == "central" ? Stencil::Central : Stencil::Lifted;
    opt.r = a.r;
    SpectrumOptions so;
    so.seed = a.c.seed;
    const Connection1Form conn = Connection1Form::constant(a.n, {a.twist[0], a.twist[1], a.twist[2]});
    const int M = 4 * a.n * a.n * a.n;
    if (a.count > M) {
        err << "error: --count exceeds the operator dimension " << M << "\n";
        return 1;
    }
    std::vector<double> sp;
    try {
        sp = dirac_spectrum(conn, a.count, opt, so);
    } catch (const NoConvergenceError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    const double asym = dirac_asymmetry(assemble_dirac(conn, opt));
    double mirror = 0;
    for (std::size_t i = 0; i < sp.size(); ++i) mirror = std::max(mirror, std::abs(sp[i] + sp[sp.size() - 1 - i]));
    const int kernel = count_below(sp, a.c.tol);

    std::string text;
    if (a.c.format == "json") {
        Json j = header("dirac", a.c);
        j["n"] = a.n;
        j["twist"] = a.twist;
        j["stencil"] = a.stencil;
        j["r"] = a.r;
        j["count"] = a.count;
        j["asymmetry"] = asym;
        j["symmetry_error"] = mirror;
        j["kernel_dim"] = kernel;
        j["zero_tol"] = a.c.tol;
        j["eigenvalues"] = sp;
        text = dump(j);
    } else {
        std::ostringstream s;
        s << csv_header("dirac", a.c) << "# n=" << a.n << " twist=" << num(a.twist[0]) << ";" << num(a.twist[1]) << ";"
          << num(a.twist[2]) << " stencil=" << a.stencil << " kernel_dim=" << kernel
          << " symmetry_error=" << num(mirror) << "\n";
        s << "index,eigenvalue\n";
        for (std::size_t i = 0; i < sp.size(); ++i) s << i << "," << num(sp[i]) << "\n";
        text = s.str();
    }
    return emit(text, a.c, out, err) ? 0 : 1;
}

// ---- sw-residual ----

struct SwArgs {
    Common c;
    std::string input;
    int n = 4;
    double scale = 0.0;
    std::string stencil = "lifted";
};

SWState read_state(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    const Json j = Json::parse(f);
    if (j.value("schema", 0) != 1) throw std::runtime_error("unsupported schema");
    const int n = j.at("n").get<int>();
    if (n < 1) throw std::runtime_error("n must be >= 1");
    SWState s(n);
    const std::size_t sites = s.v.sites();
    auto fill = [&](const char* key, std::size_t width, double* dst) {
        if (!j.contains(key)) return;
        const Json& arr = j.at(key);
        if (arr.size() != sites) throw GridMismatchError();
        for (std::size_t x = 0; x < sites; ++x) {
            if (arr[x].size() != width) throw GridMismatchError();
            for (std::size_t c = 0; c < width; ++c) dst[width * x + c] = arr[x][c].get<double>();
        }
    };
    fill("v", 4, s.v.data().data());
    fill("a", 3, s.a.data().data());
    fill("delta", 3, s.delta.data());
    return s;
}

int cmd_sw_residual(const SwArgs& a, std::ostream& out, std::ostream& err) {
    std::optional<SWState> st;
    try {
        if (!a.input.empty()) {
            st = read_state(a.input);
        } else {
            st.emplace(a.n);
            Rng rng(a.c.seed);
            for (double& x : st->v.data()) x = a.scale * rng.normal();
            for (double& x : st->a.data()) x = a.scale * rng.normal();
            for (double& x : st->delta) x = a.scale * rng.normal();
        }
    } catch (const std::exception& e) {
        err << "error: bad state: " << e.what() << "\n";
        return 1;
    }
    DiracOptions opt;
    opt.stencil = a.stencil == "central" ? Stencil::Central : Stencil::Lifted;
    const SWResidual r = sw_residual(*st, opt);
    std::string text;
    if (a.c.format == "json") {
        Json j = header("sw-residual", a.c);
        j["n"] = st->n();
        j["source"] = a.input.empty() ? "generated" : "input";
        j["stencil"] = a.stencil;
        j["dirac_l2"] = r.dirac_l2();
        j["dirac_max"] = r.dirac_max();
        j["curvature_l2"] = r.curvature_l2();
        j["curvature_max"] = r.curvature_max();
        text = dump(j);
    } else {
        std::ostringstream s;
        s << csv_header("sw-residual", a.c) << "n,dirac_l2,dirac_max,curvature_l2,curvature_max\n"
          << st->n() << "," << num(r.dirac_l2()) << "," << num(r.dirac_max()) << "," << num(r.curvature_l2()) << ","
          << num(r.curvature_max()) << "\n";
        text = s.str();
    }
    return emit(text, a.c, out, err) ? 0 : 1;
}

// ---- deform ----

struct DeformArgs {
    Common c;
    std::size_t samples = 1000;
};

int cmd_deform(const DeformArgs& a, std::ostream& out, std::ostream& err) {
    Rng rng(a.c.seed);
    const SplitFrame sf(Vector7::Unit(0), Vector7::Unit(1));
    struct Row {
        double a;
        Vector7 alpha;
        double metric, cross, F;
    };
    std::vector<Row> rows;
    double worst = 0;
    for (std::size_t i = 0; i < a.samples; ++i) {
        const Vector8 x = rng.unit_vec<8>();
        const LambdaParam l(x[0], x.tail<7>());
        const AlternatingForm p = phi_lambda(l);
        double metric;
        try {
            metric = (metric_from_phi(p).g - Matrix7::Identity()).cwiseAbs().maxCoeff();
        } catch (const Error&) {
            metric = std::numeric_limits<double>::infinity();
        }
        const Vector7 u = rng.unit_vec<7>(), v = rng.unit_vec<7>();
        const double cross =
            (cross_lambda(l, u, v) - cross_from_phi(p, Metric7::identity(), u, v)).cwiseAbs().maxCoeff();
        rows.push_back({l.a(), l.alpha(), metric, cross, f_locus_defect(l, sf).norm()});
        worst = std::max(worst, metric);
    }
    const bool pass = worst <= a.c.tol;
    std::string text;
    if (a.c.format == "json") {
        Json j = header("deform", a.c);
        j["samples"] = a.samples;
        j["max_metric_error"] = worst;
        j["pass"] = pass;
        Json arr = Json::array();
        for (const Row& r : rows) {
            Json e;
            e["a"] = r.a;
            e["alpha"] = std::vector<double>(r.alpha.data(), r.alpha.data() + 7);
            e["metric_err"] = r.metric;
            e["cross_dev_err"] = r.cross;
            e["F_norm"] = r.F;
            arr.push_back(e);
        }
        j["rows"] = arr;
        text = dump(j);
    } else {
        std::ostringstream s;
        s << csv_header("deform", a.c) << "# F_norm uses the 2-frame (e1, e2)\n"
          << "a,alpha1,alpha2,alpha3,alpha4,alpha5,alpha6,alpha7,metric_err,cross_dev_err,F_norm\n";
        for (const Row& r : rows) {
            s << num(r.a);
            for (int c = 0; c < 7; ++c) s << "," << num(r.alpha[c]);
            s << "," << num(r.metric) << "," << num(r.cross) << "," << num(r.F) << "\n";
        }
        text = s.str();
    }
    if (!emit(text, a.c, out, err)) return 1;
    if (!pass) err << "FAIL metric error " << num(worst) << " > " << num(a.c.tol) << "\n";
    return pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"g2kit: associative calibration, G2 and Spin(7) identities, lattice Dirac and SW checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run every identity suite; exit 0 iff all checks pass");
    add_common(verify, va.c, "json", 1e-10, "threshold for multi-operation identities");
    verify->add_option("--samples", va.samples, "random samples per suite (capped per suite)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    verify->add_flag("--timing", va.c.timing, "record wall time (output is then not reproducible)");
    verify->footer("CSV columns: name,max_error,threshold,pass");

    SampleArgs sa;
    auto* sample = app.add_subcommand("grassmann-sample", "statistics of phi and |chi| over Haar-random 3-planes");
    add_common(sample, sa.c, "json", 1e-10, "tolerance of the calibration bound and identity");
    sample->add_option("--count", sa.count, "number of planes")->capture_default_str()->check(CLI::PositiveNumber);
    sample->footer("CSV columns: sample,phi,chi_norm");

    FlowArgs fa;
    auto* flow = app.add_subcommand("chi-flow", "explicit chi-flow of a perturbed flat torus; writes the defect trace");
    add_common(flow, fa.c, "csv", 1e-10, "unused");
    flow->add_option("--n", fa.n, "lattice size N (>= 4)")->capture_default_str()->check(CLI::Range(4, 64));
    flow->add_option("--steps", fa.steps, "number of steps")->capture_default_str()->check(CLI::NonNegativeNumber);
    flow->add_option("--dt", fa.dt, "time step")->capture_default_str()->check(CLI::NonNegativeNumber);
    flow->add_option("--epsilon", fa.epsilon, "perturbation amplitude")->capture_default_str();
    flow->add_option("--mode", fa.mode, "perturbation: none, sin, eigen or random")
        ->capture_default_str()
        ->check(CLI::IsMember({"none", "sin", "eigen", "random"}));
    flow->add_option("--snapshot", fa.snapshot, "write the final lattice as CSV");
    flow->footer("CSV columns: step,time,max_defect\nSnapshot columns: site,x1..x7,defect_norm");

    DiracArgs da;
    auto* dirac = app.add_subcommand("dirac", "lowest |lambda| eigenvalues of the flat-torus lattice Dirac operator");
    add_common(dirac, da.c, "csv", 1e-8, "eigenvalues below this count as kernel");
    dirac->add_option("--n", da.n, "lattice size N")->capture_default_str()->check(CLI::Range(2, 32));
    dirac->add_option("--twist", da.twist, "constant connection theta (3 values)")->expected(3)->capture_default_str();
    dirac->add_option("--count", da.count, "number of eigenvalues")->capture_default_str()->check(CLI::PositiveNumber);
    dirac->add_option("--stencil", da.stencil, "lifted or central")
        ->capture_default_str()
        ->check(CLI::IsMember({"lifted", "central"}));
    dirac->add_option("--r", da.r, "lifting coefficient")->capture_default_str()->check(CLI::NonNegativeNumber);
    dirac->footer("CSV columns: index,eigenvalue (ascending)");

    SwArgs wa;
    auto* sw = app.add_subcommand("sw-residual", "norms of the Seiberg-Witten residual of a lattice state");
    add_common(sw, wa.c, "json", 1e-10, "unused");
    sw->add_option("--input", wa.input, "state JSON {schema: 1, n, v: [[4]], a: [[3]], delta: [[3]]}");
    sw->add_option("--n", wa.n, "lattice size of a generated state")->capture_default_str()->check(CLI::Range(1, 64));
    sw->add_option("--scale", wa.scale, "normal entries times scale for a generated state (0: zero state)")
        ->capture_default_str();
    sw->add_option("--stencil", wa.stencil, "lifted or central")
        ->capture_default_str()
        ->check(CLI::IsMember({"lifted", "central"}));
    sw->footer("CSV columns: n,dirac_l2,dirac_max,curvature_l2,curvature_max");

    DeformArgs dfa;
    auto* deform = app.add_subcommand("deform", "scan of the metric-fixing deformation family over random lambda");
    add_common(deform, dfa.c, "csv", 1e-10, "threshold for the metric error");
    deform->add_option("--samples", dfa.samples, "number of lambda points")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    deform->footer("CSV columns: a,alpha1..alpha7,metric_err,cross_dev_err,F_norm");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Help and version requests exit 0; everything else is a flag error.
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(va, out, err);
        if (sample->parsed()) return cmd_grassmann_sample(sa, out, err);
        if (flow->parsed()) return cmd_chi_flow(fa, out, err);
        if (dirac->parsed()) return cmd_dirac(da, out, err);
        if (sw->parsed()) return cmd_sw_residual(wa, out, err);
        if (deform->parsed()) return cmd_deform(dfa, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"g2kit"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace g2kit::cli
