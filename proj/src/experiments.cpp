#include "ttvp/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <thread>

#include <sys/stat.h>
#include <unistd.h>

#include "ttvp/errors.hpp"
#include "ttvp/special.hpp"

namespace ttvp {

namespace {

constexpr double kTerminalTime = 0.5;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

TvpSpec build_example1(double alpha, double lambda) {
    const double c = gamma_fn(alpha + 1.0) / (std::pow(2.0, 1.0 - alpha) * std::exp(lambda / 2.0));
    const double g3 = gamma_fn(3.0) / gamma_fn(3.0 - alpha);
    const double g5 = gamma_fn(5.0) / gamma_fn(5.0 - alpha);
    RhsFunction f;
    f.eval = [=](double t, double y) {
        const double t2 = t * t;
        const double src = 0.75 * g3 * std::pow(t, 2.0 - alpha) + g5 * std::pow(t, 4.0 - alpha) + c * (t2 * t2 + 0.75 * t2);
        return std::exp(-lambda * t) * src - c * y;
    };
    f.lipschitz_estimate = c;
    f.exact_solution = [=](double t) { return (t * t * t * t + 0.75 * t * t) * std::exp(-lambda * t); };
    return TvpSpec{TemperedOrder(alpha, lambda), f, kTerminalTime, 0.25, 1.0};
}

TvpSpec build_example2(double alpha, double lambda) {
    const double g3 = gamma_fn(3.0) / gamma_fn(3.0 - alpha);
    RhsFunction f;
    f.eval = [=](double t, double y) {
        const double t2 = t * t;
        return std::exp(-lambda * t) * g3 * std::pow(t, 2.0 - alpha) - 3.0 * t2 * t2 * std::exp(-2.0 * lambda * t) +
               3.0 * y * y;
    };
    f.exact_solution = [=](double t) { return std::exp(-lambda * t) * t * t; };
    return TvpSpec{TemperedOrder(alpha, lambda), f, kTerminalTime, 0.25, 1.0};
}

TvpSpec build_example3(double alpha, double lambda) {
    const double g = gamma_fn(2.5) / gamma_fn(2.5 - alpha);
    RhsFunction f;
    f.eval = [=](double t, double) { return std::exp(-lambda * t) * g * std::pow(t, 1.5 - alpha); };
    f.lipschitz_estimate = 0.0;
    f.exact_solution = [=](double t) { return std::exp(-lambda * t) * std::pow(t, 1.5); };
    return TvpSpec{TemperedOrder(alpha, lambda), f, kTerminalTime, std::sqrt(0.125), 1.0};
}

/// Example 4 family: f = 2t + k sin(y) + shift e^{-lambda t}.
TvpSpec build_example4(double alpha, double lambda, double k, double ya, double shift = 0.0) {
    const double a = kTerminalTime;
    RhsFunction f;
    if (shift == 0.0) {
        f.eval = [=](double t, double y) { return 2.0 * t + k * std::sin(y); };
    } else {
        f.eval = [=](double t, double y) { return 2.0 * t + k * std::sin(y) + shift * std::exp(-lambda * t); };
    }
    f.lipschitz_estimate = std::abs(k);
    f.sup_estimate = 2.0 * a + std::abs(k) + std::abs(shift);
    return TvpSpec{TemperedOrder(alpha, lambda), f, a, ya, a};
}

double max_abs_error(const Trajectory& y, const TimeFunction& exact) {
    double e = 0.0;
    for (int i = 0; i < y.size(); ++i) e = std::max(e, std::abs(y[i] - exact(y.grid().node(i))));
    return e;
}

/// Runs job(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(int count, int jobs, const std::function<void(int)>& job) {
    const int workers = std::max(1, std::min(jobs, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) job(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::string describe_failure(const std::exception& e) { return e.what(); }

}  // namespace

Example parse_example(std::string_view name) {
    std::string s = lower(name);
    if (s.rfind("example", 0) == 0) s = s.substr(7);
    if (s == "1") return Example::One;
    if (s == "2") return Example::Two;
    if (s == "3") return Example::Three;
    if (s == "4") return Example::Four;
    throw InvalidArgument("unknown example '" + std::string(name) + "' (expected 1..4)");
}

std::string example_name(Example ex) { return "example" + std::to_string(static_cast<int>(ex)); }

double example4_coefficient(double alpha, double lambda, double a) {
    return gamma_fn(alpha + 1.0) / (3.0 * std::exp(lambda * a) * std::pow(a, alpha));
}

TvpSpec registry_build(Example ex, double alpha, double lambda) {
    switch (ex) {
        case Example::One: return build_example1(alpha, lambda);
        case Example::Two: return build_example2(alpha, lambda);
        case Example::Three: return build_example3(alpha, lambda);
        case Example::Four:
            return build_example4(alpha, lambda, example4_coefficient(alpha, lambda),
                                  std::exp(lambda * kTerminalTime));
    }
    throw InvalidArgument("unknown example");
}

TvpSpec registry_build(std::string_view name, double alpha, double lambda) {
    return registry_build(parse_example(name), alpha, lambda);
}

std::vector<std::optional<double>> eoc(const std::vector<double>& max_errors) {
    std::vector<std::optional<double>> out;
    for (std::size_t i = 0; i + 1 < max_errors.size(); ++i) {
        const double e0 = max_errors[i];
        const double e1 = max_errors[i + 1];
        if (e0 > 0.0 && e1 > 0.0 && std::isfinite(e0) && std::isfinite(e1)) {
            out.emplace_back(std::log2(e0 / e1));
        } else {
            out.emplace_back(std::nullopt);
        }
    }
    return out;
}

StudyTable convergence_study(const ConvergenceRequest& request) {
    if (request.alphas.empty()) throw InvalidArgument("convergence study needs at least one alpha");
    if (request.n_list.empty()) throw InvalidArgument("convergence study needs at least one n");
    if (request.jobs < 1) throw InvalidArgument("jobs must be >= 1");
    for (double alpha : request.alphas) {
        TvpSpec probe = registry_build(request.example, alpha, request.lambda);
        if (!probe.f.exact_solution) {
            throw InvalidArgument(example_name(request.example) + " has no exact solution; convergence study not possible");
        }
    }

    const std::size_t n_count = request.n_list.size();
    std::vector<StudyRow> rows(request.alphas.size() * n_count);
    parallel_for(static_cast<int>(rows.size()), request.jobs, [&](int cell) {
        const double alpha = request.alphas[static_cast<std::size_t>(cell) / n_count];
        const int n = request.n_list[static_cast<std::size_t>(cell) % n_count];
        StudyRow& row = rows[static_cast<std::size_t>(cell)];
        row = StudyRow{alpha, n, 0.0, NAN, NAN, NAN, NAN, std::nullopt, 0, std::nullopt};
        try {
            TvpSpec tvp = registry_build(request.example, alpha, request.lambda);
            if (request.horizon) tvp.horizon = *request.horizon;
            row.h = tvp.horizon / n;
            ShootingConfig cfg = request.shooting;
            cfg.method = request.method;
            const double steps_to_a = static_cast<double>(n) * tvp.a / tvp.horizon;
            cfg.ivp_n = static_cast<int>(std::lround(steps_to_a));
            if (cfg.ivp_n < 1 || std::abs(steps_to_a - cfg.ivp_n) > 1e-9 * steps_to_a) {
                throw InvalidArgument("n = " + std::to_string(n) + " does not place t = a on the grid");
            }
            const TvpSolution sol = solve_tvp(tvp, cfg);
            const TimeFunction& exact = *tvp.f.exact_solution;
            const Trajectory& y = sol.trajectory;
            row.y0 = sol.y0;
            row.err_a = std::abs(y[cfg.ivp_n] - exact(tvp.a));
            row.err_b = std::abs(y[y.size() - 1] - exact(tvp.horizon));
            row.max_err = max_abs_error(y, exact);
            row.bisections = sol.bisection_count;
        } catch (const NumericalError& e) {
            row.failure = describe_failure(e);
        } catch (const InvalidArgument& e) {
            row.failure = describe_failure(e);
        }
    });

    for (std::size_t ia = 0; ia < request.alphas.size(); ++ia) {
        for (std::size_t j = 1; j < n_count; ++j) {
            const StudyRow& prev = rows[ia * n_count + j - 1];
            StudyRow& cur = rows[ia * n_count + j];
            if (prev.failure || cur.failure) continue;
            cur.eoc = eoc({prev.max_err, cur.max_err}).front();
        }
    }
    return StudyTable{std::move(rows)};
}

PerturbKind parse_perturb_kind(std::string_view name) {
    const std::string s = lower(name);
    if (s == "bc" || s == "terminal") return PerturbKind::TerminalValue;
    if (s == "f" || s == "rhs") return PerturbKind::RhsShift;
    if (s == "lambda") return PerturbKind::Lambda;
    if (s == "alpha") return PerturbKind::Alpha;
    throw InvalidArgument("unknown perturbation kind '" + std::string(name) + "' (expected bc|f|lambda|alpha)");
}

std::string perturb_kind_name(PerturbKind kind) {
    switch (kind) {
        case PerturbKind::TerminalValue: return "bc";
        case PerturbKind::RhsShift: return "f";
        case PerturbKind::Lambda: return "lambda";
        case PerturbKind::Alpha: return "alpha";
    }
    return "unknown";
}

TvpSpec perturbed_problem(PerturbKind kind, double eps, double alpha, double lambda) {
    if (!(eps > 0.0)) throw InvalidArgument("perturbation epsilon must be positive");
    const double a = kTerminalTime;
    const double k = example4_coefficient(alpha, lambda);
    switch (kind) {
        case PerturbKind::TerminalValue:
            return build_example4(alpha, lambda, k, std::exp(lambda * a) * (1.0 + eps));
        case PerturbKind::RhsShift:
            return build_example4(alpha, lambda, k, std::exp(lambda * a), eps);
        case PerturbKind::Lambda: {
            const double lp = lambda + eps;
            return build_example4(alpha, lp, example4_coefficient(alpha, lp), std::exp((2.0 * lp - lambda) * a));
        }
        case PerturbKind::Alpha: {
            const double ap = alpha + eps;
            if (!(ap < 1.0)) throw InvalidArgument("alpha + eps must stay below 1");
            return build_example4(ap, lambda, k, std::exp(lambda * a));
        }
    }
    throw InvalidArgument("unknown perturbation kind");
}

PerturbTable perturbation_study(const PerturbRequest& request) {
    if (request.kind == PerturbKind::Alpha) {
        throw InvalidArgument("alpha perturbation produces trajectories, not a deviation table");
    }
    if (request.eps_list.empty() || request.n_list.empty()) {
        throw InvalidArgument("perturbation study needs at least one eps and one n");
    }
    if (request.jobs < 1) throw InvalidArgument("jobs must be >= 1");
    for (double e : request.eps_list) {
        if (!(e > 0.0)) throw InvalidArgument("perturbation epsilon must be positive");
    }

    const TvpSpec base = registry_build(Example::Four, request.alpha, request.lambda);
    const std::size_t eps_count = request.eps_list.size();

    // One base solve per n, shared by every eps.
    std::vector<std::optional<Trajectory>> base_sol(request.n_list.size());
    std::vector<std::string> base_err(request.n_list.size());
    parallel_for(static_cast<int>(request.n_list.size()), request.jobs, [&](int i) {
        ShootingConfig cfg = request.shooting;
        cfg.method = PredictorCorrector{};
        cfg.ivp_n = request.n_list[static_cast<std::size_t>(i)];
        try {
            base_sol[static_cast<std::size_t>(i)] = solve_tvp(base, cfg).trajectory;
        } catch (const std::exception& e) {
            base_err[static_cast<std::size_t>(i)] = describe_failure(e);
        }
    });

    std::vector<PerturbRow> rows(request.n_list.size() * eps_count);
    parallel_for(static_cast<int>(rows.size()), request.jobs, [&](int cell) {
        const std::size_t in = static_cast<std::size_t>(cell) / eps_count;
        const double eps = request.eps_list[static_cast<std::size_t>(cell) % eps_count];
        const int n = request.n_list[in];
        PerturbRow& row = rows[static_cast<std::size_t>(cell)];
        row = PerturbRow{eps, n, base.a / n, NAN, std::nullopt};
        if (!base_sol[in]) {
            row.failure = base_err[in];
            return;
        }
        try {
            ShootingConfig cfg = request.shooting;
            cfg.method = PredictorCorrector{};
            cfg.ivp_n = n;
            const TvpSolution z = solve_tvp(perturbed_problem(request.kind, eps, request.alpha, request.lambda), cfg);
            const Trajectory& y = *base_sol[in];
            double dev = 0.0;
            for (int i = 0; i < y.size(); ++i) dev = std::max(dev, std::abs(y[i] - z.trajectory[i]));
            row.dev = dev;
        } catch (const NumericalError& e) {
            row.failure = describe_failure(e);
        }
    });
    return PerturbTable{request.kind, std::move(rows)};
}

TrajectoryPair alpha_perturbation_trajectories(double eps, int n, const ShootingConfig& shooting, double alpha,
                                               double lambda) {
    ShootingConfig cfg = shooting;
    cfg.method = PredictorCorrector{};
    cfg.ivp_n = n;
    const TvpSolution y = solve_tvp(registry_build(Example::Four, alpha, lambda), cfg);
    const TvpSolution z = solve_tvp(perturbed_problem(PerturbKind::Alpha, eps, alpha, lambda), cfg);
    TrajectoryPair out;
    out.t = y.trajectory.grid().nodes();
    out.y.assign(y.trajectory.values().begin(), y.trajectory.values().end());
    out.z.assign(z.trajectory.values().begin(), z.trajectory.values().end());
    return out;
}

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void emit_csv(const StudyTable& table, std::ostream& out) {
    out << "n,h,alpha,y0,err_a,err_b,max_err,eoc\n";
    for (const StudyRow& r : table.rows) {
        out << r.n << ',' << format_real(r.h) << ',' << format_real(r.alpha) << ',' << format_real(r.y0) << ','
            << format_real(r.err_a) << ',' << format_real(r.err_b) << ',' << format_real(r.max_err) << ','
            << (r.eoc ? format_real(*r.eoc) : std::string()) << '\n';
    }
}

void emit_csv(const PerturbTable& table, std::ostream& out) {
    out << "eps,h,dev\n";
    for (const PerturbRow& r : table.rows) {
        out << format_real(r.eps) << ',' << format_real(r.h) << ',' << format_real(r.dev) << '\n';
    }
}

void emit_csv(const TrajectoryPair& pair, std::ostream& out) {
    out << "t,y,z\n";
    for (std::size_t i = 0; i < pair.t.size(); ++i) {
        out << format_real(pair.t[i]) << ',' << format_real(pair.y[i]) << ',' << format_real(pair.z[i]) << '\n';
    }
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::string tmpl = (dir / (target.filename().string() + ".tmpXXXXXX")).string();
    const int fd = ::mkstemp(tmpl.data());
    if (fd < 0) throw std::runtime_error("cannot create temporary file next to " + path + ": " + std::strerror(errno));
    bool ok = ::fchmod(fd, 0644) == 0;
    const char* p = contents.data();
    std::size_t left = contents.size();
    while (ok && left > 0) {
        const ssize_t w = ::write(fd, p, left);
        if (w < 0) {
            ok = errno == EINTR;
            continue;
        }
        p += w;
        left -= static_cast<std::size_t>(w);
    }
    ok = (::fsync(fd) == 0) && ok;
    ok = (::close(fd) == 0) && ok;
    std::error_code ec;
    if (ok) fs::rename(tmpl, target, ec);
    if (!ok || ec) {
        fs::remove(tmpl, ec);
        throw std::runtime_error("cannot write " + path);
    }
}

}  // namespace ttvp
