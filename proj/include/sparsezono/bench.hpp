#ifndef SPARSEZONO_BENCH_HPP_
#define SPARSEZONO_BENCH_HPP_

/**
 * @file bench.hpp
 * @brief Desk-scale scenarios: second-order reachability, the corridor MPC,
 * recursive MHE and closed-loop safety verification.
 *
 * Each runner returns plain data so the CLI and the acceptance binary can
 * share it.
 */

#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsezono/builders.hpp"

namespace sparsezono
{

struct BenchRecord
{
    std::string scenario;
    std::string method;
    int N = 0;
    Index n_G = 0;
    Index n_C = 0;
    Index nnz_G = 0;
    Index nnz_A = 0;
    Index nnz_M = 0;
    int iterations = 0;
    double wall_ms = 0.0;
    std::string status;
};

std::string bench_csv_header();
std::string to_csv_row(const BenchRecord& r);
nlohmann::json to_json(const BenchRecord& r);

/// Planar double integrator x = (p_x, p_y, v_x, v_y), u = acceleration.
LinearSystem double_integrator(double dt);

/// Second-order example: omega_n = 0.3, zeta = 0.7, dt = 0.1, S = [-1, 1]^2,
/// U = [-1, 1], X0 = [-0.01, 0.01] x [0.49, 0.51].
std::pair<ConZono, LinearSystem> second_order_example();

struct ReachRun
{
    std::vector<BenchRecord> records;  ///< standard, graph, sparse
    std::vector<ConZono> final_sets;
};

ReachRun run_reach(int N);

struct CorridorConfig
{
    int f = 1;            ///< refinement: N = f N0, dt = dt0 / f
    int N0 = 55;
    double dt0 = 1.0;
    double hex_inradius = 2.0;
    double v_max = 5.0;
    double v_min = 0.1;
    double omega_max = 75.0 * 3.14159265358979323846 / 180.0;
    double v_nominal = 0.5;  ///< reference spacing is dt v_nominal
    Vector x0 = (Vector(4) << 0.0, -10.0, 0.0, 0.0).finished();

    int horizon() const { return f * N0; }
    double dt() const { return dt0 / f; }
};

/// Reference state at step k: point on the path, velocity v_nominal along it.
Vector corridor_reference(const CorridorConfig& cfg, int k);

/// Position set P_k: hexagon around the reference position.
ConZono corridor_position_set(const CorridorConfig& cfg, int k);

/// MPC over steps start .. start + N starting from x0.
MpcSpec make_corridor_mpc(const CorridorConfig& cfg, int start, const Vector& x0);

struct MpcRun
{
    BenchRecord record;
    AdmmResult result;
    Trajectory trajectory;
    Index nnz_M_structural = 0;
    bool points_contained = false;  ///< every x_k in P_k x V
    double dynamics_residual = 0.0;  ///< max |x_{k+1} - A x_k - B u_k|
    std::vector<BenchRecord> closed_loop;
    std::vector<Vector> closed_loop_states;
};

MpcRun run_mpc(const CorridorConfig& cfg, const AdmmSettings& s, int closed_loop_steps = 0);

struct MheConfig
{
    unsigned seed = 1;
    int steps = 40;
    int N = 15;
    int reduce_cadence = 10;
    bool zero_noise = false;
};

struct MheStep
{
    Vector truth;
    Vector measurement;
    Vector estimate;
    ConZono X0;
    bool contained = false;
    AdmmStatus status = AdmmStatus::iteration_limit;
    int iterations = 0;
};

struct MheRun
{
    std::vector<MheStep> steps;
    double rms_estimate = 0.0;     ///< per-axis position RMS of the estimate
    double rms_measurement = 0.0;  ///< per-axis position RMS of the raw measurement
    int violations = 0;            ///< steps whose set misses the true state
    bool all_converged = true;
    std::vector<BenchRecord> records;
};

MheRun run_mhe(const MheConfig& cfg, const AdmmSettings& s);

struct SafetyConfig
{
    int N = 20;
    /// Move the unsafe set onto the reachable tube (forces a failure).
    bool obstacle_on_tube = false;
};

struct SafetyRun
{
    SafetyReport report;
    ConZono obstacle;
    std::vector<Vector> x_ref;
    std::map<int, int> histogram;  ///< iterations -> number of certified steps
    double single_iteration_share = 0.0;
    double median_iterations = 0.0;
    std::vector<BenchRecord> records;
};

/// Default settings for the safety scenario use k_inf = 1.
SafetyRun run_safety(const SafetyConfig& cfg, const AdmmSettings& s);

/// Truncated normal sample on the hexagon of inradius 2 sigma (rejection).
Vector sample_hexagon_noise(std::mt19937& rng, double sigma);

}  // namespace sparsezono

#endif  // SPARSEZONO_BENCH_HPP_
