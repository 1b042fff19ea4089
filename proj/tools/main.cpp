/**
 * @file main.cpp
 * @brief sparsezono-bench: runs the benchmark scenarios and writes records as
 * JSON and/or CSV.
 *
 * Exit codes: 0 success, 2 solver did not converge, 3 soundness violation or
 * step not certified, 64 bad usage.
 */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsezono/bench.hpp"
#include "sparsezono/io.hpp"

using namespace sparsezono;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_not_converged = 2;
constexpr int exit_unsound = 3;
constexpr int exit_usage = 64;

struct Output
{
    std::string dir;
    std::string format = "json";
};

struct Result
{
    std::vector<BenchRecord> records;
    nlohmann::json summary = nlohmann::json::object();
    int code = exit_ok;
};

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open " + path.string());
    f << text;
}

nlohmann::json settings_json(const AdmmSettings& s)
{
    return {{"eps_primal", s.eps_primal},
            {"eps_dual", s.eps_dual},
            {"rho", s.rho},
            {"k_inf", s.k_inf},
            {"max_iter", s.max_iter},
            {"norm", s.norm == ConvergenceNorm::inf ? "inf" : "l2"}};
}

/// Stdout when no directory is given, else <dir>/<scenario>.json and .csv.
void emit(const std::string& scenario, const Result& r, const Output& out)
{
    nlohmann::json j = r.summary;
    j["scenario"] = scenario;
    j["records"] = nlohmann::json::array();
    for (const BenchRecord& rec : r.records)
        j["records"].push_back(to_json(rec));
    std::string csv = bench_csv_header() + "\n";
    for (const BenchRecord& rec : r.records)
        csv += to_csv_row(rec) + "\n";

    const bool json = out.format != "csv";
    const bool table = out.format != "json";
    if (out.dir.empty())
    {
        if (json)
            std::cout << j.dump(2) << "\n";
        if (table)
            std::cout << csv;
        return;
    }
    const std::filesystem::path dir(out.dir);
    std::filesystem::create_directories(dir);
    if (json)
        write_text(dir / (scenario + ".json"), j.dump(2) + "\n");
    if (table)
        write_text(dir / (scenario + ".csv"), csv);
}

Result do_reach(const std::vector<int>& horizons)
{
    Result r;
    for (const int N : horizons)
    {
        const ReachRun run = run_reach(N);
        r.records.insert(r.records.end(), run.records.begin(), run.records.end());
        nlohmann::json sets = nlohmann::json::object();
        for (size_t m = 0; m < run.records.size(); ++m)
            sets[run.records[m].method] = to_json(run.final_sets[m]);
        r.summary["final_sets"][std::to_string(N)] = sets;
    }
    return r;
}

Result do_mpc(const CorridorConfig& cfg, const AdmmSettings& s, int closed_loop)
{
    const MpcRun run = run_mpc(cfg, s, closed_loop);
    Result r;
    r.records.push_back(run.record);
    r.records.insert(r.records.end(), run.closed_loop.begin(), run.closed_loop.end());
    r.summary = {{"nnz_M_structural", run.nnz_M_structural},
                 {"objective", run.result.objective},
                 {"states_contained", run.points_contained},
                 {"dynamics_residual", run.dynamics_residual}};
    nlohmann::json traj = nlohmann::json::array();
    for (const Vector& x : run.trajectory.states)
        traj.push_back(to_json(x));
    r.summary["planned_states"] = traj;
    if (closed_loop > 0)
    {
        nlohmann::json cl = nlohmann::json::array();
        for (const Vector& x : run.closed_loop_states)
            cl.push_back(to_json(x));
        r.summary["closed_loop_states"] = cl;
    }

    bool converged = run.result.status == AdmmStatus::converged;
    for (const BenchRecord& rec : run.closed_loop)
        converged = converged && rec.status == to_string(AdmmStatus::converged);
    if (!converged)
        r.code = exit_not_converged;
    else if (!run.points_contained)
        r.code = exit_unsound;
    return r;
}

Result do_mhe(const MheConfig& cfg, const AdmmSettings& s)
{
    const MheRun run = run_mhe(cfg, s);
    Result r;
    r.records = run.records;
    r.summary = {{"rms_estimate", run.rms_estimate},
                 {"rms_measurement", run.rms_measurement},
                 {"violations", run.violations}};
    nlohmann::json est = nlohmann::json::array();
    for (const MheStep& st : run.steps)
        est.push_back({{"truth", to_json(st.truth)},
                       {"measurement", to_json(st.measurement)},
                       {"estimate", to_json(st.estimate)},
                       {"contained", st.contained}});
    r.summary["steps"] = est;
    r.summary["final_set"] = to_json(run.steps.back().X0);
    if (run.violations > 0)
        r.code = exit_unsound;
    else if (!run.all_converged)
        r.code = exit_not_converged;
    return r;
}

Result do_verify(const SafetyConfig& cfg, const AdmmSettings& s)
{
    const SafetyRun run = run_safety(cfg, s);
    Result r;
    r.records = run.records;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [iters, count] : run.histogram)
        hist[std::to_string(iters)] = count;
    r.summary = {{"all_certified", run.report.all_certified()},
                 {"single_iteration_share", run.single_iteration_share},
                 {"median_iterations", run.median_iterations},
                 {"iteration_histogram", hist},
                 {"obstacle", to_json(run.obstacle)}};
    nlohmann::json sets = nlohmann::json::array();
    for (const ConZono& X : run.report.sets)
        sets.push_back(to_json(X));
    r.summary["reachable_sets"] = sets;
    if (!run.report.all_certified())
        r.code = exit_unsound;
    return r;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Sparse constrained zonotope benchmarks"};
    app.require_subcommand(1);

    AdmmSettings s;
    std::string norm = "l2";
    Output out;
    const auto add_solver_flags = [&](CLI::App* sub) {
        sub->add_option("--eps-primal", s.eps_primal, "primal tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--eps-dual", s.eps_dual, "dual tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--rho", s.rho, "ADMM penalty")->check(CLI::PositiveNumber);
        sub->add_option("--k-inf", s.k_inf, "infeasibility check period")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", s.max_iter, "iteration limit")->check(CLI::PositiveNumber);
        sub->add_option("--norm", norm, "convergence norm")->check(CLI::IsMember({"l2", "inf"}));
    };
    const auto add_output_flags = [&](CLI::App* sub) {
        sub->add_option("--out", out.dir, "output directory (stdout if omitted)");
        sub->add_option("--format", out.format, "json, csv or both")
            ->check(CLI::IsMember({"json", "csv", "both"}));
    };

    std::vector<int> horizons{10};
    CLI::App* reach = app.add_subcommand("reach", "second-order reachability, all three methods");
    reach->add_option("-n,--n", horizons, "horizon(s)")->delimiter(',')->check(CLI::NonNegativeNumber);
    add_output_flags(reach);

    CorridorConfig corridor;
    int closed_loop = 0;
    CLI::App* mpc = app.add_subcommand("mpc", "corridor MPC");
    mpc->add_option("--f", corridor.f, "refinement factor")->check(CLI::PositiveNumber);
    mpc->add_option("--closed-loop", closed_loop, "receding-horizon steps to simulate")
        ->check(CLI::NonNegativeNumber);
    add_solver_flags(mpc);
    add_output_flags(mpc);

    MheConfig mhe_cfg;
    CLI::App* mhe = app.add_subcommand("mhe", "recursive moving horizon estimation");
    mhe->add_option("--seed", mhe_cfg.seed, "noise seed");
    mhe->add_option("--steps", mhe_cfg.steps, "simulation steps")->check(CLI::PositiveNumber);
    mhe->add_option("--n", mhe_cfg.N, "horizon")->check(CLI::PositiveNumber);
    mhe->add_option("--reduce-every", mhe_cfg.reduce_cadence, "prior reduction cadence")
        ->check(CLI::PositiveNumber);
    mhe->add_flag("--zero-noise", mhe_cfg.zero_noise, "noise-free simulation");
    add_solver_flags(mhe);
    add_output_flags(mhe);

    SafetyConfig safety_cfg;
    CLI::App* verify = app.add_subcommand("verify", "closed-loop safety verification");
    verify->add_option("--n", safety_cfg.N, "horizon")->check(CLI::PositiveNumber);
    verify->add_flag("--obstacle-on-tube", safety_cfg.obstacle_on_tube,
                     "place the obstacle on the reachable tube");
    add_solver_flags(verify);
    add_output_flags(verify);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e)
    {
        app.exit(e);
        return exit_usage;
    }

    // scenario defaults unless overridden
    CLI::App* active = app.get_subcommands().front();
    if (active == verify && active->count("--k-inf") == 0)
        s.k_inf = 1;
    if (active == mpc || active == mhe)
    {
        if (active->count("--eps-primal") == 0)
            s.eps_primal = 1e-3;
        if (active->count("--eps-dual") == 0)
            s.eps_dual = 1e-3;
    }
    s.norm = norm == "inf" ? ConvergenceNorm::inf : ConvergenceNorm::l2_scaled;

    try
    {
        s.validate();
        Result r;
        if (active == reach)
            r = do_reach(horizons);
        else if (active == mpc)
        {
            r = do_mpc(corridor, s, closed_loop);
            r.summary["config"] = {{"f", corridor.f}, {"N", corridor.horizon()}, {"dt", corridor.dt()}};
        }
        else if (active == mhe)
        {
            r = do_mhe(mhe_cfg, s);
            r.summary["config"] = {{"seed", mhe_cfg.seed}, {"steps", mhe_cfg.steps},
                                   {"N", mhe_cfg.N}, {"reduce_every", mhe_cfg.reduce_cadence},
                                   {"zero_noise", mhe_cfg.zero_noise}};
        }
        else
        {
            r = do_verify(safety_cfg, s);
            r.summary["config"] = {{"N", safety_cfg.N},
                                   {"obstacle_on_tube", safety_cfg.obstacle_on_tube}};
        }
        if (active != reach)
            r.summary["settings"] = settings_json(s);
        emit(active->get_name(), r, out);
        return r.code;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
