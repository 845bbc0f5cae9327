// Command-line front end: validate, realize, koebe and simplex subcommands.
//
// Exit status: 0 success, 1 inadmissible input, 2 unreadable or malformed
// input, 3 solver failure.

#include "hyperideal/circles.hpp"
#include "hyperideal/io.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

namespace fs = std::filesystem;
using namespace hyperideal;

namespace {

constexpr double kPi = std::numbers::pi;

enum Exit : int { kOk = 0, kInadmissible = 1, kBadInput = 2, kSolverFailure = 3 };

/// Unreadable files and malformed documents.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::Parse:
        case ErrorCode::NotASphere:
        case ErrorCode::NonManifoldEdge:
        case ErrorCode::InvalidFace: return kBadInput;
        case ErrorCode::InadmissibleAngles:
        case ErrorCode::Infeasible: return kInadmissible;
        default: return kSolverFailure;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string fmt_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string edge_list(const Cellulation& s, const std::vector<int>& edges) {
    std::string out;
    for (int e : edges) out += (out.empty() ? "" : " ") + s.edge_key(e);
    return out;
}

void print_verdict(const char* name, const Cellulation& s, const Verdict& v, const std::string& extra) {
    std::cout << name << ": " << (v.accepted ? "ok" : "FAILED") << extra << "\n";
    if (v.accepted) return;
    std::cout << "  reason: " << v.reason << "\n";
    if (!v.witness.empty())
        std::cout << "  witness: " << edge_list(s, v.witness) << " (weight " << fmt_num(v.witness_weight) << ")\n";
}

struct Tolerances {
    double solver = 1e-9;
    double geometry = 1e-7;
    double quadrature = 1e-8;
    int max_iter = 200;
};

RealizeOptions realize_options(const Tolerances& t) {
    RealizeOptions o;
    o.solver.gradient_tol = t.solver;
    o.solver.max_iter = t.max_iter;
    o.geometry_tol = t.geometry;
    o.quadrature.tolerance = t.quadrature;
    return o;
}

/// Runs body, translating failures into exit codes with a message on stderr.
template <class F>
int guarded(const std::string& what, F&& body) {
    try {
        return body();
    } catch (const InadmissibleInput& e) {
        spdlog::error("{}: inadmissible: {}", what, e.what());
        return kInadmissible;
    } catch (const Error& e) {
        spdlog::error("{}: {}", what, e.what());
        return exit_code(e.code());
    } catch (const InputError& e) {
        spdlog::error("{}: {}", what, e.what());
        return kBadInput;
    }
}

// ---- validate ----

int cmd_validate(const std::string& input, double tol) {
    return guarded(input, [&] {
        const Instance in = to_instance(CellulationDocument::parse(read_file(input)));
        const Cellulation& s = in.sigma;
        std::cout << "cellulation: " << s.num_vertices() << " vertices, " << s.num_edges() << " edges, "
                  << s.num_faces() << " faces\n";
        const Verdict bounds = check_angle_bounds(s, in.angles, tol);
        print_verdict("angle bounds", s, bounds, "");
        const CircuitReport circuits = check_circuits(s, in.angles.w, tol);
        print_verdict("closed dual paths", s, circuits.verdict,
                      " (lightest vertex link " + fmt_num(circuits.min_link_weight) + ", lightest other " +
                          fmt_num(circuits.min_nonelementary_weight) + ")");
        const PathReport paths = check_simple_paths(s, in.angles.w, tol);
        print_verdict("open dual paths", s, paths.verdict, " (lightest " + fmt_num(paths.min_weight) + ")");
        const bool ok = bounds.accepted && circuits.verdict.accepted && paths.verdict.accepted;
        std::cout << (ok ? "admissible" : "inadmissible") << "\n";
        return ok ? kOk : kInadmissible;
    });
}

// ---- realize ----

struct RealizeJob {
    std::string input;
    std::string out;
    std::string svg;
};

/// Realizes one document; the summary is returned rather than printed so batch
/// runs can report in input order.
int realize_one(const RealizeJob& job, const RealizeOptions& opt, std::string& summary) {
    return guarded(job.input, [&] {
        const Instance in = to_instance(CellulationDocument::parse(read_file(job.input)));
        const Realization r = realize(in.sigma, in.angles.ideal, in.angles.w, opt);
        const Diagnostics& d = r.diagnostics;
        std::ostringstream ss;
        ss << job.input << ": volume " << fmt_num(r.volume) << ", iterations " << d.iterations
           << ", reduced gradient " << fmt_num(d.reduced_gradient) << ", angle error " << fmt_num(d.angle_error)
           << ", length mismatch " << fmt_num(d.length_mismatch) << ", shear " << fmt_num(d.shear) << "\n";
        summary = ss.str();
        if (!job.out.empty()) write_file(job.out, dump(realization_to_json(r)));
        if (!job.svg.empty()) write_file(job.svg, emit_svg(config_from_realization(r)));
        return kOk;
    });
}

int cmd_realize(const std::vector<std::string>& inputs, const std::string& out, const std::string& out_dir,
                const std::string& svg, const Tolerances& tol, int jobs) {
    RealizeOptions opt = realize_options(tol);
    std::vector<RealizeJob> work;
    for (const auto& input : inputs) {
        RealizeJob job{input, out, svg};
        if (!out_dir.empty()) job.out = (fs::path(out_dir) / (fs::path(input).stem().string() + ".json")).string();
        work.push_back(job);
    }
    const int n = static_cast<int>(work.size());
    std::vector<int> codes(n, kOk);
    std::vector<std::string> summaries(n);
    if (n > 1 && jobs > 1) {
        // One instance per thread; the quadrature inside stays serial.
        opt.quadrature.parallel = false;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
        for (int i = 0; i < n; ++i) codes[i] = realize_one(work[i], opt, summaries[i]);
    } else {
        for (int i = 0; i < n; ++i) codes[i] = realize_one(work[i], opt, summaries[i]);
    }
    int worst = kOk;
    for (int i = 0; i < n; ++i) {
        std::cout << summaries[i];
        worst = std::max(worst, codes[i]);
    }
    return worst;
}

// ---- koebe ----

int cmd_koebe(const std::string& input, int steps, const std::string& out, const std::string& svg,
              const Tolerances& tol) {
    return guarded(input, [&] {
        const CellulationDocument doc = CellulationDocument::parse(read_file(input));
        const Instance in = to_instance(doc, false);
        if (!doc.ideal.empty()) spdlog::info("ignoring the ideal set: every vertex is hyperideal near the limit");
        KoebeOptions opt;
        opt.steps = steps;
        opt.realize = realize_options(tol);
        const KoebeResult k = koebe_continuation(in.sigma, std::nullopt, opt);
        for (const auto& st : k.steps)
            spdlog::debug("deficit {:.6e}: volume {:.12f}, {} iterations, black gap {:.3e}", st.deficit, st.volume,
                          st.iterations, st.black_gap);
        std::cout << "circles: " << k.config.count(CircleColor::Black) << " black, "
                  << k.config.count(CircleColor::Red) << " red\n"
                  << "continuation: " << k.steps.size() << " steps, " << k.solves << " solves, final volume "
                  << fmt_num(k.steps.back().volume) << "\n"
                  << "tangency residual: " << fmt_num(k.tangency_residual) << "\n"
                  << "orthogonality residual: " << fmt_num(k.orthogonality_residual) << "\n";
        if (!out.empty()) write_file(out, dump(config_to_json(k.config, in.sigma)));
        if (!svg.empty()) write_file(svg, emit_svg(k.config, SvgOptions{800, true, 0.05}));
        return kOk;
    });
}

// ---- simplex ----

void print_vec(const char* name, const Vec6& v) {
    std::cout << name << ":";
    for (int i = 0; i < 6; ++i) std::cout << " " << fmt_num(v[i]);
    std::cout << "\n";
}

int cmd_simplex_regular(double l0) {
    const RegularSimplexReport rep = regular_simplex_appendix_check(l0);
    std::cout << "regular simplex, edge length " << fmt_num(rep.l0) << "\n"
              << "interior dihedral angle: " << fmt_num(rep.angle) << "\n"
              << "closed forms: a " << fmt_num(rep.a) << ", b " << fmt_num(rep.b) << ", c " << fmt_num(rep.c) << "\n"
              << "geometric family: a " << fmt_num(rep.a_geom) << ", b " << fmt_num(rep.b_geom) << ", c "
              << fmt_num(rep.c_geom) << " (largest discrepancy " << fmt_num(rep.max_discrepancy) << ")\n"
              << "matrix:\n";
    for (int i = 0; i < 6; ++i) {
        std::cout << " ";
        for (int j = 0; j < 6; ++j) std::cout << " " << fmt_num(rep.matrix(i, j));
        std::cout << "\n";
    }
    print_vec("eigenvalues", rep.eigenvalues);
    std::cout << (rep.all_positive ? "all eigenvalues positive" : "NOT all eigenvalues positive") << "\n";
    return rep.all_positive ? kOk : kSolverFailure;
}

int cmd_simplex_angles(Vec6 theta, double tol) {
    return guarded("simplex", [&] {
        IdealTags ideal{};
        for (int v = 0; v < 4; ++v) {
            double sum = 0;
            for (int e : vertex_edges(v)) sum += theta[e];
            ideal[v] = std::abs(sum - 2 * kPi) <= tol;
        }
        const AngleVerdict verdict = admissible_simplex_angles(theta, ideal, tol);
        std::cout << "vertex sums:";
        for (double s : verdict.vertex_sums) std::cout << " " << fmt_num(s);
        std::cout << "\n";
        if (!verdict.accepted) {
            std::cout << "inadmissible\n";
            for (const auto& r : verdict.reasons) std::cout << "  " << r << "\n";
            return kInadmissible;
        }
        std::cout << "admissible, ideal vertices:";
        for (int v = 0; v < 4; ++v)
            if (ideal[v]) std::cout << " " << v + 1;
        std::cout << "\n";

        const HyperidealSimplex s = simplex_from_angles(theta, ideal);
        const EdgeLengthClass lengths = edge_lengths(s);
        print_vec("edge lengths (unit horoscales)", lengths.raw);
        const VolumeOptions vopt{1e-10, 40, true};
        const VolumeResult vol = volume_detailed(s, vopt);
        std::cout << "volume: " << fmt_num(vol.value) << " (error bound " << fmt_num(vol.error_bound) << ")\n";

        // Central differences of the volume along the stratum, in interior angles.
        const Vec6 grad = schlafli_gradient(s);
        const Eigen::MatrixXd basis = stratum_tangent_basis(ideal);
        const Vec6 alpha = s.interior_angles();
        const double h = 1e-4;
        double worst = 0;
        for (int k = 0; k < basis.cols(); ++k) {
            const Vec6 d = basis.col(k);
            const double fd = (volume(simplex_from_interior_angles(alpha + h * d, ideal), vopt) -
                               volume(simplex_from_interior_angles(alpha - h * d, ideal), vopt)) /
                              (2 * h);
            const double exact = grad.dot(d);
            worst = std::max(worst, std::abs(fd - exact) / std::max(1.0, std::abs(exact)));
        }
        std::cout << "gradient check: largest relative error " << fmt_num(worst) << " over " << basis.cols()
                  << " stratum directions\n";
        const Eigen::MatrixXd hess = volume_hessian(s);
        const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess).eigenvalues();
        std::cout << "hessian eigenvalues:";
        for (int i = 0; i < eig.size(); ++i) std::cout << " " << fmt_num(eig[i]);
        std::cout << "\n";
        return kOk;
    });
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("hyperideal");
    logger->set_pattern("%^%l%$: %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("HYPERIDEAL_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off
        if (level == spdlog::level::off && std::string(env) != "off")
            spdlog::warn("unknown HYPERIDEAL_LOG level '{}'", env);
        else
            spdlog::set_level(level);
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Hyperideal polyhedra from combinatorics and dihedral angles"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Tolerances tol;
    auto add_tolerances = [&](CLI::App* sub) {
        sub->add_option("--tol", tol.solver, "Reduced-gradient tolerance of the solver")->capture_default_str();
        sub->add_option("--geom-tol", tol.geometry, "Geometry check tolerance")->capture_default_str();
        sub->add_option("--quad-tol", tol.quadrature, "Volume quadrature tolerance")->capture_default_str();
        sub->add_option("--max-iter", tol.max_iter, "Solver iteration cap")->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "Check the admissibility conditions of a cellulation document");
    std::string validate_input;
    double validate_tol = 1e-9;
    validate->add_option("input", validate_input, "Cellulation JSON")->required();
    validate->add_option("--tol", validate_tol, "Tolerance on angle sums")->capture_default_str();

    auto* realize_cmd = app.add_subcommand("realize", "Realize a polyhedron by volume maximization");
    std::vector<std::string> realize_inputs;
    std::string realize_out, realize_out_dir, realize_svg;
    int jobs = 1;
    realize_cmd->add_option("input", realize_inputs, "Cellulation JSON documents")->required();
    auto* out_opt = realize_cmd->add_option("--out", realize_out, "Realization JSON (single input)");
    auto* dir_opt = realize_cmd->add_option("--out-dir", realize_out_dir, "Directory for one document per input")
                        ->check(CLI::ExistingDirectory);
    auto* svg_opt = realize_cmd->add_option("--svg", realize_svg, "Circle configuration SVG (single input)");
    out_opt->excludes(dir_opt);
    realize_cmd->add_option("--jobs", jobs, "Instances realized in parallel")->check(CLI::PositiveNumber);
    add_tolerances(realize_cmd);

    auto* koebe = app.add_subcommand("koebe", "Continue the angles to pi and report the limiting circle configuration");
    std::string koebe_input, koebe_out, koebe_svg;
    int steps = KoebeOptions{}.steps;
    koebe->add_option("input", koebe_input, "Cellulation JSON (angles ignored)")->required();
    koebe->add_option("--steps", steps, "Continuation steps")->check(CLI::Range(3, 200))->capture_default_str();
    koebe->add_option("--out", koebe_out, "Circle configuration JSON");
    koebe->add_option("--svg", koebe_svg, "Circle configuration SVG");
    add_tolerances(koebe);

    auto* simplex = app.add_subcommand("simplex", "Diagnostics of a single hyperideal simplex");
    std::vector<double> angles;
    double regular = 0;
    bool degrees = false;
    double simplex_tol = 1e-9;
    auto* angles_opt =
        simplex->add_option("--angles", angles, "Exterior angles a12 a13 a14 a23 a24 a34")->expected(6);
    auto* regular_opt = simplex->add_option("--regular", regular, "Edge length of a regular simplex");
    angles_opt->excludes(regular_opt);
    simplex->add_flag("--degrees", degrees, "Angles given in degrees");
    simplex->add_flag("--report", "Print the full report (always on)");
    simplex->add_option("--tol", simplex_tol, "Tolerance on vertex sums")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    if (*validate) return cmd_validate(validate_input, validate_tol);
    if (*realize_cmd) {
        if (realize_inputs.size() > 1 && (*out_opt || *svg_opt)) {
            spdlog::error("--out and --svg take a single input; use --out-dir for batches");
            return kBadInput;
        }
        return cmd_realize(realize_inputs, realize_out, realize_out_dir, realize_svg, tol, jobs);
    }
    if (*koebe) return cmd_koebe(koebe_input, steps, koebe_out, koebe_svg, tol);
    if (*regular_opt) {
        if (!(regular > 0)) {
            spdlog::error("--regular needs a positive edge length");
            return kBadInput;
        }
        return cmd_simplex_regular(regular);
    }
    if (*angles_opt) {
        Vec6 theta;
        for (int i = 0; i < 6; ++i) theta[i] = degrees ? angles[i] * kPi / 180 : angles[i];
        return cmd_simplex_angles(theta, simplex_tol);
    }
    spdlog::error("simplex needs --angles or --regular");
    return kBadInput;
}
