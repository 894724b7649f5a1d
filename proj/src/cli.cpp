#include "ttvp/cli.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ttvp/analysis.hpp"
#include "ttvp/errors.hpp"
#include "ttvp/experiments.hpp"
#include "ttvp/shooting.hpp"
#include "ttvp/solvers.hpp"

namespace ttvp::cli {

namespace {

/// Accumulates validation problems so they can be reported together.
class Problems {
public:
    void add(std::string msg) { items_.push_back(std::move(msg)); }
    bool empty() const { return items_.empty(); }
    void raise() const {
        if (items_.empty()) return;
        std::string msg = "invalid arguments:";
        for (const auto& m : items_) msg += "\n  " + m;
        throw InvalidArgument(msg);
    }

private:
    std::vector<std::string> items_;
};

/// Real number, or a fraction p/q.
std::optional<double> parse_real(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        auto p = parse_real(text.substr(0, slash));
        auto q = parse_real(text.substr(slash + 1));
        if (!p || !q || *q == 0.0) return std::nullopt;
        return *p / *q;
    }
    if (text.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (errno != 0 || end != text.c_str() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<int> parse_int(const std::string& text) {
    if (text.empty()) return std::nullopt;
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (errno != 0 || end != text.c_str() + text.size() || v < std::numeric_limits<int>::min() ||
        v > std::numeric_limits<int>::max()) {
        return std::nullopt;
    }
    return static_cast<int>(v);
}

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return parts;
}

std::vector<double> real_list(const std::string& flag, const std::string& text, Problems& problems) {
    std::vector<double> out;
    for (const auto& part : split_csv(text)) {
        if (auto v = parse_real(part)) {
            out.push_back(*v);
        } else {
            problems.add(flag + ": '" + part + "' is not a number");
        }
    }
    if (out.empty()) problems.add(flag + ": empty list");
    return out;
}

std::vector<int> int_list(const std::string& flag, const std::string& text, Problems& problems) {
    std::vector<int> out;
    for (const auto& part : split_csv(text)) {
        auto v = parse_int(part);
        if (!v || *v < 1) {
            problems.add(flag + ": '" + part + "' is not a positive integer");
        } else {
            out.push_back(*v);
        }
    }
    if (out.empty()) problems.add(flag + ": empty list");
    return out;
}

struct Options {
    std::string example = "2";
    std::string alpha = "0.5";
    double lambda = 2.0;
    std::string method = "abm";
    int colloc_order = 1;
    std::string colloc_points;
    std::string n;
    double eps = 1e-10;
    std::optional<double> horizon;
    std::string perturb = "bc";
    std::string eps_list = "0.1,0.01,0.001,0.0001,0.00001";
    std::string out_path;
    int jobs = 1;
    double newton_tol = 1e-12;
    double y0 = 0.0;
};

/// Parsed, validated form of the common flags.
struct Resolved {
    Example example = Example::Two;
    std::vector<double> alphas;
    std::vector<int> ns;
    MethodChoice method;
    ShootingConfig shooting;
};

Resolved resolve(const Options& o, const std::string& default_n, bool single_alpha, bool single_n) {
    Problems problems;
    Resolved r;
    try {
        r.example = parse_example(o.example);
    } catch (const InvalidArgument& e) {
        problems.add(std::string("--example: ") + e.what());
    }
    r.alphas = real_list("--alpha", o.alpha, problems);
    for (double a : r.alphas) {
        if (!(a > 0.0 && a < 1.0)) problems.add("--alpha: " + format_real(a) + " is outside (0, 1)");
    }
    if (single_alpha && r.alphas.size() > 1) problems.add("--alpha: this command takes a single value");
    if (!(o.lambda >= 0.0)) problems.add("--lambda: must be >= 0");
    r.ns = int_list("--n", o.n.empty() ? default_n : o.n, problems);
    if (single_n && r.ns.size() > 1) problems.add("--n: this command takes a single value");
    if (!(o.eps > 0.0)) problems.add("--eps: must be positive");
    if (!(o.newton_tol > 0.0)) problems.add("--newton-tol: must be positive");
    if (o.horizon && !(*o.horizon > 0.0)) problems.add("--horizon: must be positive");
    if (o.jobs < 1) problems.add("--jobs: must be >= 1");

    if (o.method == "bdq") {
        r.method = BackwardDifference{};
    } else if (o.method == "abm") {
        r.method = PredictorCorrector{};
    } else if (o.method == "colloc") {
        if (o.colloc_order != 1 && o.colloc_order != 2) {
            problems.add("--colloc-order: must be 1 or 2");
        } else {
            NonpolyCollocation m = NonpolyCollocation::with_defaults(o.colloc_order);
            if (!o.colloc_points.empty()) m.points = real_list("--colloc-points", o.colloc_points, problems);
            try {
                m.validate();
            } catch (const InvalidArgument& e) {
                problems.add(std::string("--colloc-points: ") + e.what());
            }
            r.method = m;
        }
    } else {
        problems.add("--method: '" + o.method + "' is not one of bdq|abm|colloc");
    }
    if (o.method != "colloc" && !o.colloc_points.empty()) {
        problems.add("--colloc-points: only valid with --method colloc");
    }
    problems.raise();

    r.shooting.epsilon = o.eps;
    r.shooting.method = r.method;
    r.shooting.newton.tol = o.newton_tol;
    return r;
}

/// Writes to --out atomically, or to the stream.
void deliver(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out_path.empty()) {
        out << text;
        out.flush();
    } else {
        write_file_atomic(o.out_path, text);
    }
}

int steps_to_a(const TvpSpec& tvp, int n) {
    const double s = static_cast<double>(n) * tvp.a / tvp.horizon;
    const long r = std::lround(s);
    if (r < 1 || std::abs(s - static_cast<double>(r)) > 1e-9 * s) {
        throw InvalidArgument("--n: " + std::to_string(n) + " steps over the horizon do not place t = a on the grid");
    }
    return static_cast<int>(r);
}

int cmd_solve_ivp(const Options& o, std::ostream& out) {
    const Resolved r = resolve(o, "40", true, true);
    const TvpSpec tvp = registry_build(r.example, r.alphas.front(), o.lambda);
    const IvpSpec ivp{tvp.order, tvp.f, o.y0, o.horizon.value_or(tvp.horizon)};
    ivp.validate();
    const Trajectory y = solve_ivp(ivp, r.ns.front(), r.method, r.shooting.newton);
    std::ostringstream csv;
    csv << "t,y\n";
    for (int i = 0; i < y.size(); ++i) csv << format_real(y.grid().node(i)) << ',' << format_real(y[i]) << '\n';
    deliver(o, csv.str(), out);
    return kSuccess;
}

int cmd_solve_tvp(const Options& o, std::ostream& out) {
    const Resolved r = resolve(o, "40", true, true);
    TvpSpec tvp = registry_build(r.example, r.alphas.front(), o.lambda);
    if (o.horizon) tvp.horizon = *o.horizon;
    ShootingConfig cfg = r.shooting;
    cfg.ivp_n = steps_to_a(tvp, r.ns.front());
    const TvpSolution sol = solve_tvp(tvp, cfg);

    std::ostringstream summary;
    summary << "y0=" << format_real(sol.y0) << '\n'
            << "terminal_mismatch=" << format_real(sol.terminal_mismatch) << '\n'
            << "bisections=" << sol.bisection_count << '\n'
            << "bracket=" << format_real(sol.bracket_lo) << ',' << format_real(sol.bracket_hi) << '\n';
    if (tvp.f.exact_solution) {
        const auto& exact = *tvp.f.exact_solution;
        const Trajectory& y = sol.trajectory;
        summary << "err_a=" << format_real(std::abs(y[cfg.ivp_n] - exact(tvp.a))) << '\n'
                << "err_b=" << format_real(std::abs(y[y.size() - 1] - exact(tvp.horizon))) << '\n';
    }
    out << summary.str();
    if (!o.out_path.empty()) {
        std::ostringstream csv;
        csv << "t,y\n";
        const Trajectory& y = sol.trajectory;
        for (int i = 0; i < y.size(); ++i) csv << format_real(y.grid().node(i)) << ',' << format_real(y[i]) << '\n';
        write_file_atomic(o.out_path, csv.str());
    }
    return kSuccess;
}

int cmd_converge(const Options& o, std::ostream& out, std::ostream& err) {
    const Resolved r = resolve(o, "10,20,40,80,160,320", false, false);
    ConvergenceRequest req;
    req.example = r.example;
    req.alphas = r.alphas;
    req.lambda = o.lambda;
    req.method = r.method;
    req.n_list = r.ns;
    req.shooting = r.shooting;
    req.horizon = o.horizon;
    req.jobs = o.jobs;
    if (r.example == Example::One && !std::holds_alternative<BackwardDifference>(r.method)) {
        err << "note: the example 1 reference tables are reproduced with --method bdq\n";
    }
    const StudyTable table = convergence_study(req);
    std::ostringstream csv;
    emit_csv(table, csv);
    deliver(o, csv.str(), out);
    int code = kSuccess;
    for (const auto& row : table.rows) {
        if (row.failure) {
            err << "cell alpha=" << format_real(row.alpha) << " n=" << row.n << " failed: " << *row.failure << '\n';
            code = kNumericalError;
        }
    }
    return code;
}

int cmd_perturb(const Options& o, std::ostream& out, std::ostream& err) {
    Options local = o;
    local.example = "4";
    const Resolved r = resolve(local, "20,40,80,160", true, false);
    PerturbKind kind{};
    Problems problems;
    try {
        kind = parse_perturb_kind(o.perturb);
    } catch (const InvalidArgument& e) {
        problems.add(std::string("--perturb: ") + e.what());
    }
    const std::vector<double> eps = real_list("--eps-list", o.eps_list, problems);
    for (double e : eps) {
        if (!(e > 0.0)) problems.add("--eps-list: " + format_real(e) + " is not positive");
    }
    if (!std::holds_alternative<PredictorCorrector>(r.method)) {
        problems.add("--method: perturbation studies use abm");
    }
    if (problems.empty() && kind == PerturbKind::Alpha && (eps.size() != 1 || r.ns.size() != 1)) {
        problems.add("--perturb alpha: give exactly one --eps-list value and one --n");
    }
    problems.raise();

    std::ostringstream csv;
    if (kind == PerturbKind::Alpha) {
        emit_csv(alpha_perturbation_trajectories(eps.front(), r.ns.front(), r.shooting, r.alphas.front(), o.lambda), csv);
        deliver(o, csv.str(), out);
        return kSuccess;
    }
    PerturbRequest req;
    req.kind = kind;
    req.eps_list = eps;
    req.n_list = r.ns;
    req.alpha = r.alphas.front();
    req.lambda = o.lambda;
    req.shooting = r.shooting;
    req.jobs = o.jobs;
    const PerturbTable table = perturbation_study(req);
    emit_csv(table, csv);
    deliver(o, csv.str(), out);
    int code = kSuccess;
    for (const auto& row : table.rows) {
        if (row.failure) {
            err << "cell eps=" << format_real(row.eps) << " n=" << row.n << " failed: " << *row.failure << '\n';
            code = kNumericalError;
        }
    }
    return code;
}

int cmd_wellposed(const Options& o, std::ostream& out) {
    const Resolved r = resolve(o, "1", true, true);
    const TvpSpec tvp = registry_build(r.example, r.alphas.front(), o.lambda);
    const WellPosednessReport rep = assess_well_posedness(tvp);
    std::ostringstream text;
    text << "gamma=" << format_real(rep.gamma) << '\n'
         << "f_sup=" << format_real(rep.f_sup) << (rep.f_sup_estimated ? " (estimated)" : "") << '\n'
         << "lipschitz=" << format_real(rep.lipschitz) << (rep.lipschitz_estimated ? " (estimated)" : "") << '\n'
         << "lipschitz_threshold=" << format_real(rep.lipschitz_threshold) << '\n'
         << "beta=" << format_real(rep.beta) << '\n'
         << "contraction_holds=" << (rep.contraction_holds ? "true" : "false") << '\n'
         << "domain=[" << format_real(rep.domain_rect.t_lo) << ',' << format_real(rep.domain_rect.t_hi) << "]x["
         << format_real(rep.domain_rect.y_lo) << ',' << format_real(rep.domain_rect.y_hi) << "]\n";
    deliver(o, text.str(), out);
    return kSuccess;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--example", o.example, "Built-in problem 1..4")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "Fractional order(s), comma separated; p/q accepted")->capture_default_str();
    sub->add_option("--lambda", o.lambda, "Tempering parameter")->capture_default_str();
    sub->add_option("--method", o.method, "bdq | abm | colloc")->capture_default_str();
    sub->add_option("--colloc-order", o.colloc_order, "Collocation space order m (1 or 2)")->capture_default_str();
    sub->add_option("--colloc-points", o.colloc_points, "Collocation points in (0,1], comma separated");
    sub->add_option("--n", o.n, "Step count(s) over the horizon, comma separated");
    sub->add_option("--eps", o.eps, "Bisection tolerance on y(0)")->capture_default_str();
    sub->add_option("--horizon", o.horizon, "Final time b");
    sub->add_option("--out", o.out_path, "Write results to this file instead of standard output");
    sub->add_option("--jobs", o.jobs, "Worker threads for study cells")->capture_default_str();
    sub->add_option("--newton-tol", o.newton_tol, "Newton tolerance for implicit steps")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Tempered fractional terminal value problems: shooting, solvers and studies", "ttvp"};
    app.require_subcommand(1);
    Options o;

    auto* ivp = app.add_subcommand("solve-ivp", "Solve an initial value problem from a registry right-hand side");
    add_common(ivp, o);
    ivp->add_option("--y0", o.y0, "Initial value")->capture_default_str();
    auto* tvp = app.add_subcommand("solve-tvp", "Solve a terminal value problem by shooting");
    add_common(tvp, o);
    auto* conv = app.add_subcommand("converge", "Convergence study with EOC");
    add_common(conv, o);
    auto* pert = app.add_subcommand("perturb", "Perturbation study on example 4");
    add_common(pert, o);
    pert->add_option("--perturb", o.perturb, "bc | f | lambda | alpha")->capture_default_str();
    pert->add_option("--eps-list", o.eps_list, "Perturbation sizes, comma separated")->capture_default_str();
    auto* wp = app.add_subcommand("wellposed", "Existence, uniqueness and stability constants");
    add_common(wp, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (ivp->parsed()) return cmd_solve_ivp(o, out);
        if (tvp->parsed()) return cmd_solve_tvp(o, out);
        if (conv->parsed()) return cmd_converge(o, out, err);
        if (pert->parsed()) return cmd_perturb(o, out, err);
        if (wp->parsed()) return cmd_wellposed(o, out);
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace ttvp::cli
