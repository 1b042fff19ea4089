#include "sparsezono/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace sparsezono
{

namespace
{

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

BenchRecord record_for(const std::string& scenario, const std::string& method, int N,
                       const ConZono& Z)
{
    BenchRecord r;
    r.scenario = scenario;
    r.method = method;
    r.N = N;
    r.n_G = Z.nG();
    r.n_C = Z.nC();
    r.nnz_G = Z.G().nnz();
    r.nnz_A = Z.A().nnz();
    return r;
}

constexpr double polygon_rotation = std::numbers::pi / 12.0;

/// S for the estimation and safety scenarios.
ConZono planar_state_set()
{
    return cartesian_product(make_regular_polygon(6, 500.0, Vector::Zero(2)),
                             make_regular_polygon(6, 1.0, Vector::Zero(2)));
}

ConZono hexagon_pair(double r_pos, const Vector& c_pos, double r_vel, const Vector& c_vel)
{
    return cartesian_product(make_regular_polygon(6, r_pos, c_pos),
                             make_regular_polygon(6, r_vel, c_vel));
}

Vector vec2(double a, double b)
{
    return (Vector(2) << a, b).finished();
}

// corridor path: north, then east after a single corner
constexpr double path_straight = 12.0;

void path_point(const CorridorConfig& cfg, double s, Vector& p, Vector& t)
{
    if (s <= path_straight)
    {
        p = vec2(cfg.x0[0], cfg.x0[1] + s);
        t = vec2(0.0, 1.0);
    }
    else
    {
        p = vec2(cfg.x0[0] + (s - path_straight), cfg.x0[1] + path_straight);
        t = vec2(1.0, 0.0);
    }
}

}  // namespace

std::string bench_csv_header()
{
    return "scenario,method,N,n_G,n_C,nnz_G,nnz_A,nnz_M,iterations,wall_ms,status";
}

std::string to_csv_row(const BenchRecord& r)
{
    std::ostringstream os;
    os << r.scenario << ',' << r.method << ',' << r.N << ',' << r.n_G << ',' << r.n_C << ','
       << r.nnz_G << ',' << r.nnz_A << ',' << r.nnz_M << ',' << r.iterations << ',' << r.wall_ms
       << ',' << r.status;
    return os.str();
}

nlohmann::json to_json(const BenchRecord& r)
{
    return {{"scenario", r.scenario}, {"method", r.method}, {"N", r.N},
            {"n_G", r.n_G},           {"n_C", r.n_C},       {"nnz_G", r.nnz_G},
            {"nnz_A", r.nnz_A},       {"nnz_M", r.nnz_M},   {"iterations", r.iterations},
            {"wall_ms", r.wall_ms},   {"status", r.status}};
}

LinearSystem double_integrator(double dt)
{
    DenseMatrix A = DenseMatrix::Identity(4, 4);
    A(0, 2) = A(1, 3) = dt;
    DenseMatrix B = DenseMatrix::Zero(4, 2);
    B(0, 0) = B(1, 1) = 0.5 * dt * dt;
    B(2, 0) = B(3, 1) = dt;
    LinearSystem sys;
    sys.A = SparseMat::from_dense(A);
    sys.B = SparseMat::from_dense(B);
    sys.S = planar_state_set();
    sys.U = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    return sys;
}

std::pair<ConZono, LinearSystem> second_order_example()
{
    const double dt = 0.1, wn = 0.3, zeta = 0.7;
    DenseMatrix A(2, 2);
    A << 1.0, dt, -wn * wn * dt, 1.0 - 2.0 * zeta * wn * dt;
    DenseMatrix B(2, 1);
    B << 0.0, dt;
    LinearSystem sys;
    sys.A = SparseMat::from_dense(A);
    sys.B = SparseMat::from_dense(B);
    sys.S = ConZono::zonotope(SparseMat::identity(2), Vector::Zero(2));
    sys.U = ConZono::zonotope(SparseMat::identity(1), Vector::Zero(1));
    const ConZono X0 = interval_to_zono(IntervalBox(vec2(-0.01, 0.49), vec2(0.01, 0.51)));
    return {X0, sys};
}

ReachRun run_reach(int N)
{
    const auto [X0, sys] = second_order_example();
    ReachRun run;
    for (const ReachMethod m : {ReachMethod::standard, ReachMethod::graph, ReachMethod::sparse})
    {
        const auto t0 = Clock::now();
        const std::vector<ConZono> sets = reach(m, X0, sys, N);
        const double wall = ms_since(t0);
        BenchRecord r = record_for("reach2nd", to_string(m), N, sets.back());
        r.wall_ms = wall;
        r.status = "ok";
        run.records.push_back(r);
        run.final_sets.push_back(sets.back());
    }
    return run;
}

Vector corridor_reference(const CorridorConfig& cfg, int k)
{
    Vector p, tangent;
    path_point(cfg, cfg.v_nominal * cfg.dt() * k, p, tangent);
    Vector x(4);
    x << p, cfg.v_nominal * tangent;
    return x;
}

ConZono corridor_position_set(const CorridorConfig& cfg, int k)
{
    return make_regular_polygon(6, cfg.hex_inradius, corridor_reference(cfg, k).head(2),
                                polygon_rotation);
}

MpcSpec make_corridor_mpc(const CorridorConfig& cfg, int start, const Vector& x0)
{
    if (cfg.f < 1)
        throw std::invalid_argument("corridor: refinement factor f must be at least 1");
    const int N = cfg.horizon();
    MpcSpec spec;
    spec.sys = double_integrator(cfg.dt());
    spec.sys.U = make_regular_polygon(12, cfg.v_min * cfg.omega_max, Vector::Zero(2),
                                      polygon_rotation);
    const ConZono V = make_regular_polygon(12, cfg.v_max, Vector::Zero(2), polygon_rotation);
    spec.sys.S = cartesian_product(corridor_position_set(cfg, start), V);
    spec.x0 = x0;
    spec.N = N;
    for (int k = 0; k <= N; ++k)
        spec.x_ref.push_back(corridor_reference(cfg, start + k));
    for (int k = 1; k <= N; ++k)
        spec.state_sets.push_back(cartesian_product(corridor_position_set(cfg, start + k), V));
    spec.Q = SparseMat::diagonal(Vector((Vector(4) << 1.0, 1.0, 0.0, 0.0).finished()));
    spec.Q_N = spec.Q;
    spec.R = scale(SparseMat::identity(2), 10.0);
    return spec;
}

MpcRun run_mpc(const CorridorConfig& cfg, const AdmmSettings& s, int closed_loop_steps)
{
    MpcRun run;
    const MpcSpec spec = make_corridor_mpc(cfg, 0, cfg.x0);
    const auto t0 = Clock::now();
    const MpcProblem p = build_mpc(spec);
    const ReducedQp r = reduce_qp(p.qp, s);
    run.result = admm_solve(r, s);
    const double wall = ms_since(t0);

    run.record = record_for("mpc-corridor", "sparse", spec.N, p.qp.Z);
    run.record.nnz_M = r.M().nnz();
    run.record.iterations = run.result.iterations;
    run.record.wall_ms = wall;
    run.record.status = to_string(run.result.status);
    run.nnz_M_structural = kkt_structural_nnz(p.qp.Z, p.qp.P);
    run.trajectory = extract_trajectory(run.result.x_star, p.index);

    const DenseMatrix A = spec.sys.A.to_dense();
    const DenseMatrix B = spec.sys.B.to_dense();
    AdmmSettings check = s;
    check.eps_primal = check.eps_dual = std::max(s.eps_primal, 1e-3);
    run.points_contained = true;
    for (int k = 0; k < spec.N; ++k)
    {
        const Vector& x = run.trajectory.states[static_cast<size_t>(k)];
        const Vector& xn = run.trajectory.states[static_cast<size_t>(k) + 1];
        const Vector& u = run.trajectory.inputs[static_cast<size_t>(k)];
        run.dynamics_residual =
            std::max(run.dynamics_residual, (xn - A * x - B * u).lpNorm<Eigen::Infinity>());
        try
        {
            if (!contains_point(spec.state_set(k + 1), xn, check))
                run.points_contained = false;
        }
        catch (const IndeterminateError&)
        {
            run.points_contained = false;
        }
    }

    Vector x = cfg.x0;
    run.closed_loop_states.push_back(x);
    for (int t = 0; t < closed_loop_steps; ++t)
    {
        const MpcSpec step_spec = make_corridor_mpc(cfg, t, x);
        const auto ts = Clock::now();
        const MpcProblem sp = build_mpc(step_spec);
        const ReducedQp sr = reduce_qp(sp.qp, s);
        const AdmmResult res = admm_solve(sr, s);
        BenchRecord rec = record_for("mpc-corridor", "closed-loop", step_spec.N, sp.qp.Z);
        rec.nnz_M = sr.M().nnz();
        rec.iterations = res.iterations;
        rec.wall_ms = ms_since(ts);
        rec.status = to_string(res.status);
        run.closed_loop.push_back(rec);
        const Vector u = extract_trajectory(res.x_star, sp.index).inputs.front();
        x = A * x + B * u;
        run.closed_loop_states.push_back(x);
    }
    return run;
}

Vector sample_hexagon_noise(std::mt19937& rng, double sigma)
{
    if (sigma <= 0.0)
        return Vector::Zero(2);
    std::normal_distribution<double> g(0.0, sigma);
    const double bound = 2.0 * sigma;
    for (;;)
    {
        const Vector v = vec2(g(rng), g(rng));
        bool inside = true;
        // facet normals of make_regular_polygon(6, ...) sit at pi / 2 + k pi / 3
        for (int k = 0; k < 3 && inside; ++k)
        {
            const double a = std::numbers::pi / 2.0 + k * std::numbers::pi / 3.0;
            inside = std::abs(std::cos(a) * v[0] + std::sin(a) * v[1]) <= bound;
        }
        if (inside)
            return v;
    }
}

MheRun run_mhe(const MheConfig& cfg, const AdmmSettings& s)
{
    const double sw_p = 0.001, sw_v = 0.01, sv_p = 0.5, sv_v = 0.2;
    const double scale_noise = cfg.zero_noise ? 0.0 : 1.0;

    MeasuredSystem ms;
    ms.sys = double_integrator(1.0);
    ms.C = SparseMat::identity(4);
    const ConZono W = hexagon_pair(2 * sw_p, Vector::Zero(2), 2 * sw_v, Vector::Zero(2));
    const ConZono V = hexagon_pair(2 * sv_p, Vector::Zero(2), 2 * sv_v, Vector::Zero(2));
    const ConZono X_init = hexagon_pair(2.0, vec2(-4.0, 1.0), 1.0, Vector::Zero(2));
    const SparseMat Q_inv = SparseMat::diagonal(Vector(
        (Vector(4) << 1 / (sw_p * sw_p), 1 / (sw_p * sw_p), 1 / (sw_v * sw_v), 1 / (sw_v * sw_v))
            .finished()));
    const SparseMat R_inv = SparseMat::diagonal(Vector(
        (Vector(4) << 1 / (sv_p * sv_p), 1 / (sv_p * sv_p), 1 / (sv_v * sv_v), 1 / (sv_v * sv_v))
            .finished()));
    const DenseMatrix A = ms.sys.A.to_dense();
    const DenseMatrix B = ms.sys.B.to_dense();

    std::mt19937 rng(cfg.seed);
    std::vector<Vector> x{(Vector(4) << -5.0, 2.0, -0.6, 0.2).finished()};
    std::vector<Vector> y{x[0]};  // y[0] is never used
    std::vector<Vector> u;
    for (int t = 0; t < cfg.steps; ++t)
    {
        u.push_back(vec2(0.03 * std::cos(0.15 * t), 0.03 * std::sin(0.15 * t)));
        Vector w(4);
        w << scale_noise * sample_hexagon_noise(rng, sw_p), scale_noise * sample_hexagon_noise(rng, sw_v);
        Vector v(4);
        v << scale_noise * sample_hexagon_noise(rng, sv_p), scale_noise * sample_hexagon_noise(rng, sv_v);
        x.push_back(A * x.back() + B * u.back() + w);
        y.push_back(x.back() + v);
    }

    MheRun run;
    ConZono prior = X_init;
    int prior_time = 0;
    Vector prior_estimate = X_init.c();
    std::vector<Vector> estimates{prior_estimate};
    double se_est = 0.0, se_meas = 0.0;
    for (int t = 1; t <= cfg.steps; ++t)
    {
        const int Nh = std::min(t, cfg.N);
        while (prior_time < t - Nh)
        {
            prior = svse_step_sparse(prior, ms, W, V, u[static_cast<size_t>(prior_time)],
                                     y[static_cast<size_t>(prior_time) + 1]);
            ++prior_time;
            prior = reduce_prior(prior, prior_time, s, cfg.reduce_cadence);
        }

        MheSpec spec;
        spec.ms = ms;
        spec.W = W;
        spec.V = V;
        spec.prior = prior;
        spec.prior_estimate = estimates[static_cast<size_t>(prior_time)];
        spec.prior_inv_cov = SparseMat(4, 4);
        spec.Q_inv = Q_inv;
        spec.R_inv = R_inv;
        for (int k = t - Nh; k < t; ++k)
        {
            spec.inputs.push_back(u[static_cast<size_t>(k)]);
            spec.measurements.push_back(y[static_cast<size_t>(k) + 1]);
        }

        const auto t0 = Clock::now();
        const MheProblem m = build_mhe(spec);
        const ReducedQp r = reduce_qp(m.qp, s);
        const AdmmResult res = admm_solve(r, s);
        const double wall = ms_since(t0);

        MheStep step;
        step.truth = x[static_cast<size_t>(t)];
        step.measurement = y[static_cast<size_t>(t)];
        step.estimate = extract_trajectory(res.x_star, m.index).states.back();
        step.X0 = m.X0;
        step.status = res.status;
        step.iterations = res.iterations;
        try
        {
            step.contained = contains_point(m.X0, step.truth, s);
        }
        catch (const IndeterminateError&)
        {
            step.contained = false;
        }
        run.violations += step.contained ? 0 : 1;
        run.all_converged = run.all_converged && res.status == AdmmStatus::converged;
        estimates.push_back(step.estimate);

        se_est += (step.estimate - step.truth).head(2).squaredNorm();
        se_meas += (step.measurement - step.truth).head(2).squaredNorm();

        BenchRecord rec = record_for("mhe-sim", "sparse", Nh, m.qp.Z);
        rec.nnz_M = r.M().nnz();
        rec.iterations = res.iterations;
        rec.wall_ms = wall;
        rec.status = to_string(res.status);
        run.records.push_back(rec);
        run.steps.push_back(std::move(step));
    }
    const double count = 2.0 * cfg.steps;
    run.rms_estimate = std::sqrt(se_est / count);
    run.rms_measurement = std::sqrt(se_meas / count);
    return run;
}

SafetyRun run_safety(const SafetyConfig& cfg, const AdmmSettings& s)
{
    const double dt = 0.5;
    LinearSystem sys = double_integrator(dt);
    const DenseMatrix Q = Vector((Vector(4) << 1.0, 1.0, 0.0, 0.0).finished()).asDiagonal();
    const DenseMatrix K =
        dlqr(sys.A.to_dense(), sys.B.to_dense(), Q, 0.1 * DenseMatrix::Identity(2, 2));
    const ConZono W = hexagon_pair(0.01, Vector::Zero(2), 0.2, vec2(0.0, 0.5));
    const ConZono X0 = hexagon_pair(0.5, vec2(1.0, 0.0), 0.5, Vector::Zero(2));
    const SparseMat R_map = selector(2, 4, 0);

    SafetyRun run;
    for (int k = 0; k < cfg.N; ++k)
        run.x_ref.push_back((Vector(4) << 1.0 + dt * k, 0.0, 1.0, 0.0).finished());

    run.obstacle = make_regular_polygon(6, 1.0, vec2(1.0 + dt * cfg.N / 2.0, -1.6));
    if (cfg.obstacle_on_tube)
    {
        const std::vector<ConZono> tube = [&] {
            std::vector<ConZono> sets{X0};
            const SparseMat Ac = add(sys.A, multiply(sys.B, SparseMat::from_dense(K)), -1.0);
            for (int k = 0; k < cfg.N; ++k)
                sets.push_back(sparse_reach_step(sets.back(), Ac, W, SparseMat::identity(4), sys.S,
                                                 -multiply(sys.B, Vector(K * run.x_ref[static_cast<size_t>(k)]))));
            return sets;
        }();
        // middle of the position box halfway through the horizon
        const IntervalBox box = bounding_box(tube[static_cast<size_t>(cfg.N / 2)], s);
        run.obstacle = make_regular_polygon(6, 0.25, vec2(box[0].center(), box[1].center()));
    }

    const auto t0 = Clock::now();
    run.report = safety_verify(sys, SparseMat::from_dense(K), run.x_ref, W, X0, run.obstacle, R_map,
                               cfg.N, s);
    const double wall = ms_since(t0);

    std::vector<int> iters;
    int single = 0;
    for (size_t k = 0; k < run.report.steps.size(); ++k)
    {
        const SafetyStep& st = run.report.steps[k];
        iters.push_back(st.iterations);
        if (st.certified)
        {
            ++run.histogram[st.iterations];
            single += st.iterations == 1 ? 1 : 0;
        }
        const ConZono& X = run.report.sets[k];
        BenchRecord rec = record_for("safety", "sparse", static_cast<int>(k), X);
        rec.iterations = st.iterations;
        rec.wall_ms = wall / static_cast<double>(run.report.steps.size());
        rec.status = st.certified ? "certified" : "not-certified";
        run.records.push_back(rec);
    }
    std::sort(iters.begin(), iters.end());
    const size_t n = iters.size();
    run.median_iterations =
        n % 2 == 1 ? iters[n / 2] : 0.5 * (iters[n / 2 - 1] + iters[n / 2]);
    run.single_iteration_share = static_cast<double>(single) / static_cast<double>(n);
    return run;
}

}  // namespace sparsezono
