// acoelab command-line laboratory: discounted and average-cost solves,
// structure verification, simulation, and parameter sweeps over inventory
// instances. All numerical work goes through the C API in acoelab.h.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acoelab.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNoConvergence = 3;

struct CliError {
    int exit_code;
    std::string message;
};

[[noreturn]] void die(int exit_code, const std::string& message) {
    throw CliError{exit_code, message};
}

int exit_code_for(int acoe_status) {
    return acoe_status == ACOE_ERR_NON_CONVERGENCE ? kExitNoConvergence : kExitInputError;
}

void check(int acoe_status) {
    if (acoe_status != ACOE_OK)
        die(exit_code_for(acoe_status), acoe_last_error());
}

struct InstanceHandle {
    acoe_instance* ptr = nullptr;

    explicit InstanceHandle(const std::string& path) {
        check(acoe_instance_load_file(path.c_str(), &ptr));
    }
    InstanceHandle(const InstanceHandle& base, const std::string& param, double value) {
        check(acoe_instance_with_param(base.ptr, param.c_str(), value, &ptr));
    }
    ~InstanceHandle() { acoe_instance_free(ptr); }
    InstanceHandle(const InstanceHandle&) = delete;
    InstanceHandle& operator=(const InstanceHandle&) = delete;

    int64_t size() const {
        int64_t n = 0;
        check(acoe_instance_lattice(ptr, nullptr, nullptr, nullptr, &n));
        return n;
    }
    std::vector<double> xs() const {
        double x_min = 0, step = 0;
        int64_t n = 0;
        check(acoe_instance_lattice(ptr, &x_min, nullptr, &step, &n));
        std::vector<double> out(static_cast<size_t>(n));
        for (int64_t i = 0; i < n; ++i)
            out[static_cast<size_t>(i)] = x_min + step * static_cast<double>(i);
        return out;
    }
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        die(kExitInputError, "cannot write " + path.string());
    out << text;
}

void write_csv(const fs::path& path, const std::string& header,
               const std::vector<std::vector<double>>& columns) {
    std::ostringstream out;
    out << header << "\n";
    const size_t rows = columns.empty() ? 0 : columns.front().size();
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < columns.size(); ++c) {
            if (c)
                out << ",";
            out << fmt17(columns[c][r]);
        }
        out << "\n";
    }
    write_text(path, out.str());
}

std::vector<std::vector<double>> read_csv(const fs::path& path, size_t expect_cols) {
    std::ifstream in(path);
    if (!in)
        die(kExitInputError, "cannot open " + path.string());
    std::vector<std::vector<double>> cols(expect_cols);
    std::string line;
    std::getline(in, line); // header
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::stringstream row(line);
        std::string cell;
        for (size_t c = 0; c < expect_cols; ++c) {
            if (!std::getline(row, cell, ','))
                die(kExitInputError,
                    path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(expect_cols) + " columns");
            try {
                cols[c].push_back(std::stod(cell));
            } catch (const std::exception&) {
                die(kExitInputError, path.string() + ":" + std::to_string(lineno) +
                                         ": cannot parse '" + cell + "' as a number");
            }
        }
    }
    return cols;
}

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        die(kExitInputError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        die(kExitInputError, path.string() + ": " + e.what());
    }
}

std::vector<double> parse_schedule(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            die(kExitInputError, "cannot parse schedule entry '" + item + "'");
        }
    }
    if (out.empty())
        die(kExitInputError, "schedule is empty");
    return out;
}

std::vector<double> default_schedule(const InstanceHandle& inst) {
    double astar = 0.0;
    check(acoe_instance_alpha_star(inst.ptr, &astar));
    std::vector<double> out;
    for (int n = 1; n <= 6; ++n) {
        const double alpha = 1.0 - std::pow(2.0, -(n + 1));
        if (alpha > astar + 0.05)
            out.push_back(alpha);
    }
    if (out.empty())
        die(kExitInputError,
            "no default schedule entries clear alpha* + 0.05 = " + fmt17(astar + 0.05) +
                "; pass --schedule explicitly");
    return out;
}

struct Manifest {
    std::string command;
    json parameters = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

    void write(const fs::path& dir) const {
        json j;
        j["command"] = command;
        j["parameters"] = parameters;
        j["outputs"] = outputs;
        j["tool_version"] = acoe_version();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        j["wall_clock_seconds"] = secs;
        const std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["timestamp_utc"] = stamp;
        write_text(dir / "manifest.json", j.dump(2) + "\n");
    }
};

fs::path prepare_out_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        die(kExitInputError, "cannot create output directory " + dir.string());
    return dir;
}

// ---- solve-discounted ------------------------------------------------------

int cmd_solve_discounted(const std::string& instance_path, double alpha, double tol,
                         int64_t max_iter, const std::string& out) {
    Manifest manifest;
    manifest.command = "solve-discounted";
    manifest.parameters = {{"instance", instance_path},
                           {"alpha", alpha},
                           {"tol", tol},
                           {"max_iter", max_iter}};
    InstanceHandle inst(instance_path);
    const fs::path dir = prepare_out_dir(out);

    acoe_discounted* sol = nullptr;
    check(acoe_solve_discounted(inst.ptr, alpha, tol, max_iter, &sol));

    const int64_t n = inst.size();
    const std::vector<double> xs = inst.xs();
    std::vector<double> v(static_cast<size_t>(n)), u(static_cast<size_t>(n)),
        g(static_cast<size_t>(n)), orders(static_cast<size_t>(n));
    check(acoe_discounted_table(sol, ACOE_TABLE_V, v.data(), n));
    check(acoe_discounted_table(sol, ACOE_TABLE_U, u.data(), n));
    check(acoe_discounted_table(sol, ACOE_TABLE_G, g.data(), n));
    check(acoe_discounted_policy(sol, orders.data(), n));
    double s = 0, S = 0, m = 0;
    int64_t iters = 0;
    check(acoe_discounted_info(sol, &s, &S, &iters, &m));

    int g_kc = 0, u_kc = 0;
    double g_worst = 0, u_worst = 0, K = 0;
    check(acoe_instance_params(inst.ptr, &K, nullptr, nullptr));
    check(acoe_check_k_convex(g.data(), n, K, 1e-9, &g_kc, &g_worst, nullptr, nullptr, nullptr));
    check(acoe_check_k_convex(u.data(), n, K, 1e-9, &u_kc, &u_worst, nullptr, nullptr, nullptr));
    acoe_discounted_free(sol);

    write_csv(dir / "v_alpha.csv", "x,v", {xs, v});
    write_csv(dir / "u_alpha.csv", "x,u", {xs, u});
    write_csv(dir / "g_alpha.csv", "x,g", {xs, g});
    write_csv(dir / "greedy_orders.csv", "x,order", {xs, orders});
    json policy = {{"type", "sS"}, {"s", s}, {"S", S}};
    write_text(dir / "policy.json", policy.dump(2) + "\n");
    json report;
    report["alpha"] = alpha;
    report["tol"] = tol;
    report["iterations"] = iters;
    report["m_alpha"] = m;
    report["s"] = s;
    report["S"] = S;
    report["k_convexity"] = {{"g_alpha", {{"is_k_convex", g_kc != 0}, {"worst", g_worst}}},
                             {"u_alpha", {{"is_k_convex", u_kc != 0}, {"worst", u_worst}}}};
    write_text(dir / "report.json", report.dump(2) + "\n");

    manifest.outputs = {"v_alpha.csv",       "u_alpha.csv", "g_alpha.csv", "greedy_orders.csv",
                        "policy.json",       "report.json", "manifest.json"};
    manifest.write(dir);

    std::cout << "alpha=" << fmt17(alpha) << " converged in " << iters << " sweeps; (s, S) = ("
              << fmt17(s) << ", " << fmt17(S) << "), m_alpha = " << fmt17(m) << "\n"
              << "wrote " << dir.string() << "\n";
    return kExitOk;
}

// ---- solve-average ---------------------------------------------------------

int cmd_solve_average(const std::string& instance_path, const std::string& schedule_text,
                      double tol, uint64_t seed, int64_t paths, const std::string& out) {
    Manifest manifest;
    manifest.command = "solve-average";
    InstanceHandle inst(instance_path);
    const std::vector<double> schedule =
        schedule_text.empty() ? default_schedule(inst) : parse_schedule(schedule_text);
    manifest.parameters = {{"instance", instance_path},
                           {"schedule", schedule},
                           {"tol", tol},
                           {"seed", seed},
                           {"paths", paths}};
    const fs::path dir = prepare_out_dir(out);

    acoe_average* sol = nullptr;
    check(acoe_solve_average(inst.ptr, schedule.data(), static_cast<int64_t>(schedule.size()), tol,
                             seed, paths, &sol));

    const int64_t n = inst.size();
    const int64_t N = static_cast<int64_t>(schedule.size());
    const std::vector<double> xs = inst.xs();

    double w = 0, s_star = 0, S_star = 0, residual = 0, argmax_x = 0;
    int settled = 0;
    check(acoe_average_info(sol, &w, &s_star, &S_star, &residual, &argmax_x, &settled));
    std::vector<double> w_seq(static_cast<size_t>(N)), s_seq(static_cast<size_t>(N)),
        S_seq(static_cast<size_t>(N)), argmins(static_cast<size_t>(N));
    std::vector<int64_t> iters(static_cast<size_t>(N));
    check(acoe_average_sequences(sol, w_seq.data(), s_seq.data(), S_seq.data(), iters.data(),
                                 argmins.data(), N));
    std::vector<double> u_tilde(static_cast<size_t>(n)), H(static_cast<size_t>(n)),
        upper(static_cast<size_t>(n)), upper_se(static_cast<size_t>(n));
    check(acoe_average_table(sol, ACOE_TABLE_U_TILDE, u_tilde.data(), n));
    check(acoe_average_table(sol, ACOE_TABLE_H, H.data(), n));
    check(acoe_average_table(sol, ACOE_TABLE_UPPER, upper.data(), n));
    check(acoe_average_table(sol, ACOE_TABLE_UPPER_SE, upper_se.data(), n));
    double x_lower = 0, x_upper = 0, max_excess = 0;
    int bounds_ok = 0;
    check(acoe_average_bounds(sol, &x_lower, &x_upper, &max_excess, &bounds_ok));
    double worst_kc = 0, equi = 0, gap = 0;
    check(acoe_average_diagnostics(sol, &worst_kc, &equi, &gap));

    write_csv(dir / "u_tilde.csv", "x,u_tilde", {xs, u_tilde});
    write_csv(dir / "h_function.csv", "x,H", {xs, H});
    write_csv(dir / "upper_bound.csv", "x,U,se", {xs, upper, upper_se});
    manifest.outputs = {"average_solution.json", "u_tilde.csv", "h_function.csv",
                       "upper_bound.csv"};
    for (int64_t k = 0; k < N; ++k) {
        std::vector<double> u_n(static_cast<size_t>(n));
        check(acoe_average_u_alpha(sol, k, u_n.data(), n));
        const std::string name = "u_alpha_" + std::to_string(k + 1) + ".csv";
        write_csv(dir / name, "x,u", {xs, u_n});
        manifest.outputs.push_back(name);
    }
    acoe_average_free(sol);

    json report;
    report["w"] = w;
    report["s_star"] = s_star;
    report["S_star"] = S_star;
    report["acoe_residual"] = residual;
    report["residual_argmax_x"] = argmax_x;
    report["alphas"] = schedule;
    report["w_sequence"] = w_seq;
    json ss = json::array();
    for (int64_t k = 0; k < N; ++k)
        ss.push_back(json::array({s_seq[static_cast<size_t>(k)], S_seq[static_cast<size_t>(k)]}));
    report["ss_sequence"] = ss;
    report["iterations"] = iters;
    report["argmin_xs"] = argmins;
    report["k_convexity"] = {{"worst_violation", worst_kc}, {"tol", 1e-9},
                             {"all_pass", worst_kc <= 1e-9}};
    report["bounds_check"] = {{"x_lower", x_lower},   {"x_upper", x_upper},
                              {"max_excess", max_excess}, {"ok", bounds_ok != 0},
                              {"seed", seed},         {"paths", paths}};
    report["equicontinuity"] = {{"delta", "one_step"}, {"modulus", equi}};
    report["two_actions_gap"] = gap;
    report["settled"] = settled != 0;
    report["dp_tol"] = tol;
    report["kconv_tol"] = 1e-9;
    write_text(dir / "average_solution.json", report.dump(2) + "\n");
    manifest.outputs.push_back("manifest.json");
    manifest.write(dir);

    std::cout << "w = " << fmt17(w) << ", (s*, S*) = (" << fmt17(s_star) << ", " << fmt17(S_star)
              << "), acoe_residual = " << fmt17(residual) << " at x = " << fmt17(argmax_x) << "\n";
    if (!settled)
        std::cout << "warning: (s, S) has not settled across the last two schedule entries\n";
    std::cout << "wrote " << dir.string() << "\n";
    return kExitOk;
}

// ---- verify ----------------------------------------------------------------

struct CheckRow {
    std::string name;
    bool pass;
    double measured;
    double threshold;
};

int cmd_verify(const std::string& instance_path, const std::string& solution_dir,
               const std::string& out) {
    Manifest manifest;
    manifest.command = "verify";
    manifest.parameters = {{"instance", instance_path}, {"solution", solution_dir}};
    InstanceHandle inst(instance_path);
    const fs::path sdir(solution_dir);
    const fs::path dir = prepare_out_dir(out.empty() ? solution_dir : out);

    const json report = load_json_file(sdir / "average_solution.json");
    for (const char* key : {"w", "s_star", "S_star", "acoe_residual", "two_actions_gap",
                            "kconv_tol", "bounds_check", "alphas"})
        if (!report.contains(key))
            die(kExitInputError, "average_solution.json is missing field '" + std::string(key) + "'");
    const double w = report["w"].get<double>();
    const double s_star = report["s_star"].get<double>();
    const double S_star = report["S_star"].get<double>();
    const double reported_residual = report["acoe_residual"].get<double>();
    const double reported_gap = report["two_actions_gap"].get<double>();
    const double kconv_tol = report["kconv_tol"].get<double>();
    const uint64_t seed = report["bounds_check"]["seed"].get<uint64_t>();
    const int64_t paths = report["bounds_check"]["paths"].get<int64_t>();
    const double x_lower = report["bounds_check"]["x_lower"].get<double>();
    const double x_upper = report["bounds_check"]["x_upper"].get<double>();
    const int64_t N = static_cast<int64_t>(report["alphas"].size());

    const int64_t n = inst.size();
    const std::vector<double> xs = inst.xs();
    auto load_column = [&](const fs::path& p) {
        auto cols = read_csv(p, 2);
        if (static_cast<int64_t>(cols[0].size()) != n)
            die(kExitInputError, p.string() + " does not match the instance lattice");
        for (size_t i = 0; i < cols[0].size(); ++i)
            if (std::abs(cols[0][i] - xs[i]) > 1e-9)
                die(kExitInputError, p.string() + " does not match the instance lattice");
        return cols[1];
    };
    const std::vector<double> u_tilde = load_column(sdir / "u_tilde.csv");
    const std::vector<double> H = load_column(sdir / "h_function.csv");

    double K = 0;
    check(acoe_instance_params(inst.ptr, &K, nullptr, nullptr));

    std::vector<CheckRow> rows;
    const auto add = [&rows](const std::string& name, bool pass, double measured,
                             double threshold) {
        rows.push_back(CheckRow{name, pass, measured, threshold});
    };

    int kc = 0;
    double worst = 0;
    check(acoe_check_k_convex(u_tilde.data(), n, K, kconv_tol, &kc, &worst, nullptr, nullptr,
                              nullptr));
    add("k_convex(u_tilde)", kc != 0, worst, kconv_tol);
    check(acoe_check_k_convex(H.data(), n, K, kconv_tol, &kc, &worst, nullptr, nullptr, nullptr));
    add("k_convex(H)", kc != 0, worst, kconv_tol);

    double residual = 0;
    check(acoe_acoe_residual(inst.ptr, w, u_tilde.data(), H.data(), n, &residual, nullptr));
    const double res_tol = 1e-9 * std::max(1.0, std::abs(reported_residual));
    add("acoe_residual matches report", std::abs(residual - reported_residual) <= res_tol,
        std::abs(residual - reported_residual), res_tol);

    double gap = 0;
    check(acoe_two_actions_gap(inst.ptr, H.data(), n, s_star, S_star, &gap));
    const double gap_tol = 1e-9 * std::max(1.0, std::abs(reported_gap));
    add("two_actions_gap matches report", std::abs(gap - reported_gap) <= gap_tol,
        std::abs(gap - reported_gap), gap_tol);

    double violation = 0;
    check(acoe_verify_acoi(inst.ptr, w, u_tilde.data(), n, s_star, S_star, 0, &violation));
    add("acoi(s*,S*)", violation <= residual + gap + 1e-9, violation, residual + gap);
    check(acoe_verify_acoi(inst.ptr, w, u_tilde.data(), n, s_star, S_star, 1, &violation));
    add("acoi(modified at s*)", violation <= residual + gap + 1e-9, violation, residual + gap);

    std::vector<double> upper(static_cast<size_t>(n)), upper_se(static_cast<size_t>(n));
    check(acoe_upper_bound(inst.ptr, x_lower, x_upper, seed, paths, upper.data(), upper_se.data(),
                           n));
    double bound_excess = -std::numeric_limits<double>::infinity();
    for (int64_t k = 0; k < N; ++k) {
        const fs::path p = sdir / ("u_alpha_" + std::to_string(k + 1) + ".csv");
        const std::vector<double> u_n = load_column(p);
        for (int64_t i = 0; i < n; ++i)
            bound_excess = std::max(bound_excess,
                                    u_n[static_cast<size_t>(i)] -
                                        (upper[static_cast<size_t>(i)] +
                                         3.0 * upper_se[static_cast<size_t>(i)]));
    }
    add("u_alpha <= U + 3se", bound_excess <= 0.0, bound_excess, 0.0);

    bool all_pass = true;
    json jchecks = json::array();
    std::cout << "check                               result   measured      threshold\n";
    for (const CheckRow& row : rows) {
        all_pass = all_pass && row.pass;
        std::printf("%-35s %-8s %-13.6g %-13.6g\n", row.name.c_str(),
                    row.pass ? "pass" : "FAIL", row.measured, row.threshold);
        jchecks.push_back({{"name", row.name},
                           {"pass", row.pass},
                           {"measured", row.measured},
                           {"threshold", row.threshold}});
    }
    json verdict;
    verdict["checks"] = jchecks;
    verdict["all_pass"] = all_pass;
    write_text(dir / "verification.json", verdict.dump(2) + "\n");
    manifest.outputs = {"verification.json", "manifest.json"};
    manifest.write(dir);
    std::cout << (all_pass ? "all checks passed\n" : "verification FAILED\n");
    return all_pass ? kExitOk : kExitVerifyFailed;
}

// ---- simulate --------------------------------------------------------------

void load_policy(const fs::path& path, const InstanceHandle& inst, double& s, double& S) {
    const json j = load_json_file(path);
    if (!j.contains("type"))
        die(kExitInputError, path.string() + ": policy needs a 'type' field");
    const std::string type = j["type"].get<std::string>();
    if (type == "sS") {
        if (!j.contains("s") || !j.contains("S"))
            die(kExitInputError, path.string() + ": sS policy needs 's' and 'S'");
        s = j["s"].get<double>();
        S = j["S"].get<double>();
        if (!(s <= S))
            die(kExitInputError, path.string() + ": sS policy needs s <= S");
        return;
    }
    if (type != "tabular")
        die(kExitInputError, path.string() + ": unknown policy type '" + type + "'");

    double x_min = 0, x_max = 0, step = 0;
    int64_t n = 0;
    check(acoe_instance_lattice(inst.ptr, &x_min, &x_max, &step, &n));
    if (!j.contains("lattice") || !j.contains("orders"))
        die(kExitInputError, path.string() + ": tabular policy needs 'lattice' and 'orders'");
    const json& l = j["lattice"];
    if (std::abs(l.value("x_min", 1e300) - x_min) > 1e-9 ||
        std::abs(l.value("x_max", 1e300) - x_max) > 1e-9 ||
        std::abs(l.value("step", 1e300) - step) > 1e-9)
        die(kExitInputError, path.string() + ": policy lattice mismatch with the instance");
    const auto orders = j["orders"].get<std::vector<double>>();
    if (static_cast<int64_t>(orders.size()) != n)
        die(kExitInputError, path.string() + ": policy lattice mismatch with the instance");

    // Simulation needs the (s, S) structure: a prefix of states ordering up to
    // one common target, nothing above.
    int64_t first_zero = 0;
    while (first_zero < n && orders[static_cast<size_t>(first_zero)] > 0.0)
        ++first_zero;
    double target = x_min; // all-zero policy: never order on the grid
    if (first_zero > 0)
        target = x_min + step * static_cast<double>(first_zero - 1) +
                 orders[static_cast<size_t>(first_zero - 1)];
    for (int64_t i = 0; i < n; ++i) {
        const double x = x_min + step * static_cast<double>(i);
        const double expected = i < first_zero ? target - x : 0.0;
        if (std::abs(orders[static_cast<size_t>(i)] - expected) > 1e-9)
            die(kExitInputError,
                path.string() + ": tabular policy is not (s, S)-structured; simulation "
                                "needs an order-up-to rule");
    }
    s = x_min + step * static_cast<double>(first_zero);
    S = first_zero > 0 ? target : x_min;
    if (!(s <= S))
        s = S;
}

int cmd_simulate(const std::string& instance_path, const std::string& policy_path,
                 std::optional<double> alpha, int64_t replications, int64_t horizon,
                 int64_t burn_in, uint64_t seed, double initial, const std::string& trajectory,
                 const std::string& out) {
    Manifest manifest;
    manifest.command = "simulate";
    InstanceHandle inst(instance_path);
    double s = 0, S = 0;
    load_policy(policy_path, inst, s, S);
    manifest.parameters = {{"instance", instance_path}, {"policy", policy_path},
                           {"s", s},                    {"S", S},
                           {"replications", replications}, {"horizon", horizon},
                           {"burn_in", burn_in},        {"seed", seed},
                           {"initial", initial}};
    if (alpha)
        manifest.parameters["alpha"] = *alpha;
    const fs::path dir = prepare_out_dir(out);

    json estimate;
    double mean = 0, hw = 0;
    check(acoe_simulate_average(inst.ptr, s, S, horizon, replications, burn_in, initial, seed,
                                &mean, &hw));
    estimate["average"] = {{"mean", mean},       {"half_width", hw},
                           {"replications", replications}, {"horizon", horizon},
                           {"burn_in", burn_in}, {"seed", seed},
                           {"initial", initial}};
    std::cout << "average cost estimate: " << fmt17(mean) << " +/- " << fmt17(hw) << "\n";
    if (alpha) {
        check(acoe_simulate_discounted(inst.ptr, s, S, *alpha, horizon, replications, initial,
                                       seed, &mean, &hw));
        estimate["discounted"] = {{"alpha", *alpha},  {"mean", mean},
                                  {"half_width", hw}, {"replications", replications},
                                  {"horizon", horizon}, {"seed", seed},
                                  {"initial", initial}};
        std::cout << "discounted cost estimate at alpha=" << fmt17(*alpha) << ": " << fmt17(mean)
                  << " +/- " << fmt17(hw) << "\n";
    }
    estimate["policy"] = {{"type", "sS"}, {"s", s}, {"S", S}};
    write_text(dir / "estimate.json", estimate.dump(2) + "\n");
    manifest.outputs = {"estimate.json", "manifest.json"};

    if (!trajectory.empty()) {
        std::vector<double> buf(static_cast<size_t>(5 * horizon));
        check(acoe_simulate_trajectory(inst.ptr, s, S, horizon, initial, seed, buf.data(),
                                       static_cast<int64_t>(buf.size())));
        std::vector<double> t(static_cast<size_t>(horizon)), x(static_cast<size_t>(horizon)),
            a(static_cast<size_t>(horizon)), d(static_cast<size_t>(horizon)),
            cost(static_cast<size_t>(horizon));
        for (int64_t i = 0; i < horizon; ++i) {
            t[static_cast<size_t>(i)] = buf[static_cast<size_t>(5 * i)];
            x[static_cast<size_t>(i)] = buf[static_cast<size_t>(5 * i + 1)];
            a[static_cast<size_t>(i)] = buf[static_cast<size_t>(5 * i + 2)];
            d[static_cast<size_t>(i)] = buf[static_cast<size_t>(5 * i + 3)];
            cost[static_cast<size_t>(i)] = buf[static_cast<size_t>(5 * i + 4)];
        }
        write_csv(trajectory, "t,x,a,d,cost", {t, x, a, d, cost});
        manifest.outputs.push_back(trajectory);
    }
    manifest.write(dir);
    std::cout << "wrote " << dir.string() << "\n";
    return kExitOk;
}

// ---- sweep -----------------------------------------------------------------

int cmd_sweep(const std::string& instance_path, const std::string& param,
              const std::string& values_text, const std::string& schedule_text, double tol,
              uint64_t seed, int64_t paths, const std::string& out) {
    if (param != "K" && param != "c_bar")
        die(kExitInputError, "--param must be K or c_bar");
    Manifest manifest;
    manifest.command = "sweep";
    InstanceHandle base(instance_path);
    const std::vector<double> values = parse_schedule(values_text);
    const std::vector<double> schedule =
        schedule_text.empty() ? default_schedule(base) : parse_schedule(schedule_text);
    manifest.parameters = {{"instance", instance_path}, {"param", param},
                           {"values", values},          {"schedule", schedule},
                           {"tol", tol},                {"seed", seed}};
    const fs::path dir = prepare_out_dir(out);

    std::vector<double> col_value, col_s, col_S, col_w, col_res;
    for (double v : values) {
        InstanceHandle inst(base, param, v);
        acoe_average* sol = nullptr;
        check(acoe_solve_average(inst.ptr, schedule.data(), static_cast<int64_t>(schedule.size()),
                                 tol, seed, paths, &sol));
        double w = 0, s_star = 0, S_star = 0, residual = 0;
        check(acoe_average_info(sol, &w, &s_star, &S_star, &residual, nullptr, nullptr));
        acoe_average_free(sol);
        col_value.push_back(v);
        col_s.push_back(s_star);
        col_S.push_back(S_star);
        col_w.push_back(w);
        col_res.push_back(residual);
        std::cout << param << " = " << fmt17(v) << ": (s*, S*) = (" << fmt17(s_star) << ", "
                  << fmt17(S_star) << "), w = " << fmt17(w) << "\n";
    }
    write_csv(dir / "sweep.csv", param + ",s_star,S_star,w,acoe_residual",
              {col_value, col_s, col_S, col_w, col_res});
    manifest.outputs = {"sweep.csv", "manifest.json"};
    manifest.write(dir);
    std::cout << "wrote " << dir.string() << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acoelab: an average-cost inventory-control laboratory"};
    app.require_subcommand(1);

    std::string instance_path, out = "out", schedule_text, policy_path, trajectory, solution_dir;
    std::string sweep_param = "K", sweep_values;
    double alpha = 0.9, tol = 1e-8;
    std::optional<double> sim_alpha;
    uint64_t seed = 12345;
    int64_t max_iter = 0, replications = 200, horizon = 20000, burn_in = 1000, paths = 100000;
    double initial = 0.0;

    CLI::App* sd = app.add_subcommand("solve-discounted", "value iteration at one discount factor");
    sd->add_option("--instance", instance_path, "instance JSON file")->required();
    sd->add_option("--alpha", alpha, "discount factor in [0, 1)")->required();
    sd->add_option("--tol", tol, "sup-norm tolerance on v");
    sd->add_option("--max-iter", max_iter, "iteration cap (0 = default)");
    sd->add_option("--out", out, "output directory");

    CLI::App* sa = app.add_subcommand("solve-average",
                                      "vanishing-discount average-cost construction");
    sa->add_option("--instance", instance_path, "instance JSON file")->required();
    sa->add_option("--schedule", schedule_text,
                   "comma-separated increasing discount factors (default: 1 - 2^-(n+1))");
    sa->add_option("--tol", tol, "per-solve sup-norm tolerance");
    sa->add_option("--seed", seed, "Monte Carlo seed for the upper bound");
    sa->add_option("--paths", paths, "Monte Carlo paths for the upper bound");
    sa->add_option("--out", out, "output directory");

    CLI::App* ve = app.add_subcommand("verify", "re-check a solve-average output directory");
    ve->add_option("--instance", instance_path, "instance JSON file")->required();
    ve->add_option("--solution", solution_dir, "solve-average output directory")->required();
    std::string verify_out;
    ve->add_option("--out", verify_out, "where to write verification.json (default: --solution)");

    CLI::App* si = app.add_subcommand("simulate", "Monte Carlo policy evaluation");
    si->add_option("--instance", instance_path, "instance JSON file")->required();
    si->add_option("--policy", policy_path, "policy JSON file (sS or tabular)")->required();
    si->add_option("--alpha", sim_alpha, "also estimate the discounted cost at this alpha");
    si->add_option("--replications", replications, "independent replications");
    si->add_option("--horizon", horizon, "periods per replication");
    si->add_option("--burn-in", burn_in, "periods discarded before averaging");
    si->add_option("--seed", seed, "demand stream seed");
    si->add_option("--initial", initial, "initial inventory level");
    si->add_option("--trajectory", trajectory, "also dump replication 0 as CSV here");
    si->add_option("--out", out, "output directory");

    CLI::App* sw = app.add_subcommand("sweep", "re-solve while sweeping K or c_bar");
    sw->add_option("--instance", instance_path, "instance JSON file")->required();
    sw->add_option("--param", sweep_param, "K or c_bar")->required();
    sw->add_option("--values", sweep_values, "comma-separated parameter values")->required();
    sw->add_option("--schedule", schedule_text, "discount schedule (default as in solve-average)");
    sw->add_option("--tol", tol, "per-solve sup-norm tolerance");
    sw->add_option("--seed", seed, "Monte Carlo seed");
    sw->add_option("--out", out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            app.exit(e);
            return kExitOk;
        }
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (sd->parsed())
            return cmd_solve_discounted(instance_path, alpha, tol, max_iter, out);
        if (sa->parsed())
            return cmd_solve_average(instance_path, schedule_text, tol, seed, paths, out);
        if (ve->parsed())
            return cmd_verify(instance_path, solution_dir, verify_out);
        if (si->parsed())
            return cmd_simulate(instance_path, policy_path, sim_alpha, replications, horizon,
                                burn_in, seed, initial, trajectory, out);
        if (sw->parsed())
            return cmd_sweep(instance_path, sweep_param, sweep_values, schedule_text, tol, seed,
                             paths, out);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
