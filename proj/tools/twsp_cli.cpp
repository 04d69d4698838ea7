// Command-line front end: matrix decomposition runs, benchmark sweeps over
// seeded synthetic data, per-iteration convergence traces, and the U-matrix
// application utilities. Data goes to files or stdout; diagnostics go to
// stderr; the exit code is 0 iff the run completed and its outputs were
// written.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <twsp/twsp.hpp>

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct SolverFlags {
    std::size_t k1 = 1;
    std::size_t k2 = 1;
    std::uint64_t seed = 0;
    std::size_t max_iter = 0;
    double tol = 1e-8;
    std::size_t window = 0;
    std::size_t restarts = 1;
    std::string matching_target = "data";
    std::size_t leverage_rank = 0;  // 0: derived from k1/k2

    twsp::SolverConfig config() const {
        twsp::SolverConfig cfg;
        cfg.k1 = k1;
        cfg.k2 = k2;
        cfg.seed = seed;
        cfg.max_iter = max_iter;
        cfg.saturation_tol = tol;
        cfg.saturation_window = window;
        cfg.restarts = restarts;
        cfg.matching_target =
            matching_target == "residual" ? twsp::MatchingTarget::residual : twsp::MatchingTarget::data;
        return cfg;
    }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool require_k) {
    auto* k1 = cmd->add_option("--k1", f.k1, "Number of columns to select");
    auto* k2 = cmd->add_option("--k2", f.k2, "Number of rows to select");
    if (require_k) {
        k1->required();
        k2->required();
    }
    cmd->add_option("--seed", f.seed, "Base seed for the solver stream");
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap (0: 30*max(k1,k2))");
    cmd->add_option("--tol", f.tol, "Relative saturation tolerance (0 disables saturation)");
    cmd->add_option("--window", f.window, "Saturation window in iterations (0: max(k1,k2))");
    cmd->add_option("--restarts", f.restarts, "Independent seeded restarts; the best run wins");
    cmd->add_option("--matching-target", f.matching_target,
                    "Correlation target when matching singular directions")
        ->check(CLI::IsMember({"data", "residual"}));
    cmd->add_option("--leverage-rank", f.leverage_rank,
                    "Target rank for leverage scores (0: max(k1,k2) capped at min(N,M))");
}

struct InputFlags {
    std::string path;
    std::string format = "csv";
    bool skip_header = false;
};

void add_input_flags(CLI::App* cmd, InputFlags& f, bool required = true) {
    auto* opt = cmd->add_option("--input", f.path, "Input matrix file");
    if (required) opt->required();
    cmd->add_option("--format", f.format, "Matrix file format")
        ->check(CLI::IsMember({"csv", "bin"}));
    cmd->add_flag("--skip-header", f.skip_header, "Skip one CSV header line on read");
}

twsp::DenseMatrix load_matrix(const InputFlags& f) {
    return twsp::io::read_matrix(f.path, twsp::io::format_from_string(f.format), f.skip_header);
}

std::unique_ptr<std::ostream> open_output(const std::string& path) {
    if (path == "-") return std::make_unique<std::ostream>(std::cout.rdbuf());
    auto out = std::make_unique<std::ofstream>(path);
    if (!*out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

std::size_t resolved_leverage_rank(const SolverFlags& f, const twsp::DenseMatrix& x) {
    const std::size_t cap = std::min(x.rows(), x.cols());
    if (f.leverage_rank > 0) return std::min(f.leverage_rank, cap);
    return std::min(std::max(f.k1, f.k2), cap);
}

struct RunOutcome {
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
    std::size_t iterations = 0;
    std::string termination = "completed";
    const twsp::ConvergenceTrace* trace = nullptr;  // twsp only
};

// Dispatches one selection method; the caller owns timing and reporting.
RunOutcome run_method(const std::string& method, const twsp::DenseMatrix& x, const SolverFlags& f,
                      twsp::SolveResult& twsp_result) {
    RunOutcome out;
    if (method == "twsp") {
        twsp_result = twsp::solve(x, f.config());
        out.cols = twsp_result.decomposition.col_indices;
        out.rows = twsp_result.decomposition.row_indices;
        out.iterations = twsp_result.trace.iterations;
        out.termination = twsp::to_cstring(twsp_result.trace.termination);
        out.trace = &twsp_result.trace;
    } else if (method == "sp") {
        const twsp::MatchingTarget target = f.config().matching_target == twsp::MatchingTarget::data
                                                ? twsp::MatchingTarget::data
                                                : twsp::MatchingTarget::residual;
        const auto col_run = twsp::sp_select_traced(x, f.k1, f.seed, f.max_iter, target, f.tol,
                                                    f.window);
        const auto row_run = twsp::sp_select_traced(x.transposed(), f.k2, f.seed + 1, f.max_iter,
                                                    target, f.tol, f.window);
        out.cols = col_run.indices;
        out.rows = row_run.indices;
        out.iterations = col_run.iterations + row_run.iterations;
        out.termination = (col_run.termination == twsp::Termination::saturated &&
                           row_run.termination == twsp::Termination::saturated)
                              ? "saturated"
                              : "max_iter";
    } else if (method == "leverage") {
        const auto dec = twsp::leverage_cur(x, f.k1, f.k2, resolved_leverage_rank(f, x), f.seed);
        out.cols = dec.col_indices;
        out.rows = dec.row_indices;
    } else if (method == "random") {
        const auto dec = twsp::random_cur(x, f.k1, f.k2, f.seed);
        out.cols = dec.col_indices;
        out.rows = dec.row_indices;
    } else if (method == "brute") {
        const auto res = twsp::brute_force_cur(x, f.k1, f.k2);
        out.cols = res.decomposition.col_indices;
        out.rows = res.decomposition.row_indices;
    } else {
        throw std::invalid_argument("unknown method: " + method);
    }
    return out;
}

json core_to_json(const twsp::DenseMatrix& core) {
    json rows = json::array();
    for (std::size_t i = 0; i < core.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < core.cols(); ++j) row.push_back(core(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// decompose
// ---------------------------------------------------------------------------

int cmd_decompose(const InputFlags& input, const SolverFlags& flags, const std::string& method,
                  const std::string& output) {
    const twsp::DenseMatrix x = load_matrix(input);

    const auto start = Clock::now();
    twsp::SolveResult twsp_result;
    const RunOutcome run = run_method(method, x, flags, twsp_result);
    const double ms = elapsed_ms(start);

    const double frob = twsp::reconstruction_error(x, run.cols, run.rows);
    const double normalized = twsp::normalized_error(x, run.cols, run.rows);
    const twsp::DenseMatrix core = twsp::core_matrix(x, run.cols, run.rows);

    json result;
    result["method"] = method;
    result["k1"] = flags.k1;
    result["k2"] = flags.k2;
    result["seed"] = flags.seed;
    result["col_indices"] = run.cols;
    result["row_indices"] = run.rows;
    result["core"] = core_to_json(core);
    result["normalized_error"] = normalized;
    result["frobenius_error"] = frob;
    result["ms"] = ms;
    result["iterations"] = run.iterations;
    result["termination"] = run.termination;
    if (run.trace != nullptr) {
        result["initial_error"] = run.trace->initial_error;
        json entries = json::array();
        for (const auto& e : run.trace->entries) {
            entries.push_back({{"iteration", e.iteration},
                               {"e_c", e.e_col},
                               {"e_r", e.e_row},
                               {"accepted", twsp::to_cstring(e.accepted)},
                               {"current_error", e.current_error},
                               {"best_error", e.best_error}});
        }
        result["trace"] = std::move(entries);
    }

    auto out = open_output(output);
    *out << result.dump(2) << '\n';
    if (!*out) throw std::runtime_error("failed writing " + output);
    return 0;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchmarkRow {
    std::string method;
    std::size_t k = 0;
    std::uint64_t seed = 0;
    double normalized_error = 0.0;
    double ms = 0.0;
    std::size_t iterations = 0;
    std::vector<std::size_t> cols;
    std::vector<std::size_t> rows;
};

std::string join_indices(const std::vector<std::size_t>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i > 0) s += ';';
        s += std::to_string(idx[i]);
    }
    return s;
}

int cmd_benchmark(std::size_t n, std::size_t m, std::size_t rank, double noise_ratio,
                  double noise_sigma, std::size_t k_min, std::size_t k_max, std::size_t k_step,
                  std::size_t seeds, const std::vector<std::string>& methods,
                  const SolverFlags& base_flags, const std::string& output,
                  const std::string& emit_indices, std::size_t threads) {
    if (k_min < 1 || k_max < k_min || k_step < 1 || k_max > std::min(n, m))
        throw std::invalid_argument("invalid sweep bounds: need 1 <= k-min <= k-max <= min(n, m)");
    if (seeds < 1) throw std::invalid_argument("invalid sweep bounds: need at least one seed");
    const double sigma = noise_sigma >= 0.0 ? noise_sigma : twsp::noise_sigma_for_ratio(rank, noise_ratio);

    std::vector<std::size_t> ks;
    for (std::size_t k = k_min; k <= k_max; k += k_step) ks.push_back(k);

    std::vector<BenchmarkRow> results;
    results.reserve(seeds * ks.size() * methods.size());

    const std::size_t workers = std::max<std::size_t>(1, threads);
    for (std::uint64_t seed = 0; seed < seeds; ++seed) {
        const twsp::DenseMatrix x = twsp::low_rank_plus_noise({n, m, rank, sigma, seed});

        struct Cell {
            std::string method;
            std::size_t k;
        };
        std::vector<Cell> cells;
        for (const auto& method : methods)
            for (std::size_t k : ks) cells.push_back({method, k});

        std::vector<BenchmarkRow> seed_rows(cells.size());
        std::atomic<std::size_t> next{0};
        std::vector<std::string> failures(cells.size());
        auto worker = [&]() {
            for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
                SolverFlags f = base_flags;
                f.k1 = f.k2 = cells[i].k;
                f.seed = seed;
                try {
                    const auto start = Clock::now();
                    twsp::SolveResult twsp_result;
                    const RunOutcome run = run_method(cells[i].method, x, f, twsp_result);
                    const double ms = elapsed_ms(start);
                    seed_rows[i] = {cells[i].method,
                                    cells[i].k,
                                    seed,
                                    twsp::normalized_error(x, run.cols, run.rows),
                                    ms,
                                    run.iterations,
                                    run.cols,
                                    run.rows};
                } catch (const std::exception& e) {
                    failures[i] = e.what();
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
        worker();
        for (auto& t : pool) t.join();
        for (const auto& failure : failures)
            if (!failure.empty()) throw std::runtime_error(failure);
        results.insert(results.end(), seed_rows.begin(), seed_rows.end());
    }

    std::sort(results.begin(), results.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
        if (a.method != b.method) return a.method < b.method;
        if (a.k != b.k) return a.k < b.k;
        return a.seed < b.seed;
    });

    {
        auto out = open_output(output);
        *out << "method,k1,k2,seed,normalized_error,ms,iterations\n";
        for (const auto& r : results) {
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof(buf), r.normalized_error);
            *out << r.method << ',' << r.k << ',' << r.k << ',' << r.seed << ','
                 << std::string_view(buf, res.ptr - buf) << ',' << r.ms << ',' << r.iterations
                 << '\n';
        }
        if (!*out) throw std::runtime_error("failed writing " + output);
    }
    if (!emit_indices.empty()) {
        auto out = open_output(emit_indices);
        *out << "method,k1,k2,seed,col_indices,row_indices\n";
        for (const auto& r : results) {
            *out << r.method << ',' << r.k << ',' << r.k << ',' << r.seed << ','
                 << join_indices(r.cols) << ',' << join_indices(r.rows) << '\n';
        }
        if (!*out) throw std::runtime_error("failed writing " + emit_indices);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// convergence
// ---------------------------------------------------------------------------

int cmd_convergence(const InputFlags& input, std::size_t n, std::size_t m, std::size_t rank,
                    double noise_ratio, std::uint64_t data_seed, const SolverFlags& flags,
                    std::size_t seeds, const std::string& output, std::size_t threads) {
    twsp::DenseMatrix x;
    if (!input.path.empty()) {
        x = load_matrix(input);
    } else {
        x = twsp::low_rank_plus_noise(
            {n, m, rank, twsp::noise_sigma_for_ratio(rank, noise_ratio), data_seed});
    }
    if (seeds < 1) throw std::invalid_argument("need at least one seed");

    std::vector<twsp::ConvergenceTrace> traces(seeds);
    std::atomic<std::size_t> next{0};
    std::vector<std::string> failures(seeds);
    auto worker = [&]() {
        for (std::size_t s = next.fetch_add(1); s < seeds; s = next.fetch_add(1)) {
            SolverFlags f = flags;
            f.seed = s;
            try {
                traces[s] = twsp::solve(x, f.config()).trace;
            } catch (const std::exception& e) {
                failures[s] = e.what();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, threads);
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (const auto& failure : failures)
        if (!failure.empty()) throw std::runtime_error(failure);

    auto out = open_output(output);
    *out << "seed,iteration,e_c,e_r,accepted,current_error,best_error\n";
    for (std::size_t s = 0; s < seeds; ++s) {
        for (const auto& e : traces[s].entries) {
            *out << s << ',' << e.iteration << ',' << e.e_col << ',' << e.e_row << ','
                 << twsp::to_cstring(e.accepted) << ',' << e.current_error << ',' << e.best_error
                 << '\n';
        }
    }
    if (!*out) throw std::runtime_error("failed writing " + output);
    return 0;
}

// ---------------------------------------------------------------------------
// assign-channels
// ---------------------------------------------------------------------------

int cmd_assign_channels(const InputFlags& input, const SolverFlags& flags, std::size_t f,
                        const std::string& output) {
    const twsp::DenseMatrix x = load_matrix(input);
    const twsp::SolveResult res = twsp::solve(x, flags.config());

    // The core couples selected columns (its rows) with selected rows (its
    // columns); transposing aligns assignment rows with selected matrix rows,
    // i.e. one output group per sensing location.
    const twsp::ChannelAssignment assignment =
        twsp::assign_top_f(res.decomposition.core.transposed(), f, res.decomposition.row_indices,
                           res.decomposition.col_indices);

    auto out = open_output(output);
    *out << "sensor_row_index,channel_col_index,u_value,rank\n";
    for (const auto& row : assignment.rows) {
        for (std::size_t t = 0; t < row.picks.size(); ++t) {
            char buf[64];
            const auto conv = std::to_chars(buf, buf + sizeof(buf), row.picks[t].value);
            *out << row.row << ',' << row.picks[t].channel << ','
                 << std::string_view(buf, conv.ptr - buf) << ',' << t << '\n';
        }
    }
    if (!*out) throw std::runtime_error("failed writing " + output);
    return 0;
}

// ---------------------------------------------------------------------------
// kernel
// ---------------------------------------------------------------------------

int cmd_kernel(const std::string& class1, const std::string& class2, const std::string& output,
               const std::string& format, bool skip_header) {
    const auto fmt = twsp::io::format_from_string(format);
    const twsp::DenseMatrix x1 = twsp::io::read_matrix(class1, fmt, skip_header);
    const twsp::DenseMatrix x2 = twsp::io::read_matrix(class2, fmt, skip_header);
    const twsp::DenseMatrix k = twsp::cross_class_kernel(x1, x2);
    twsp::io::write_matrix(output, k, fmt);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint column/row subset selection (CUR decomposition) via two-way spectrum "
                 "pursuit, with baselines and a benchmark harness"};
    app.require_subcommand(1);

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Decompose one matrix and write the result");
    InputFlags dec_input;
    SolverFlags dec_flags;
    std::string dec_method = "twsp";
    std::string dec_output = "-";
    add_input_flags(decompose, dec_input);
    add_solver_flags(decompose, dec_flags, /*require_k=*/true);
    decompose->add_option("--method", dec_method, "Selection method")
        ->check(CLI::IsMember({"twsp", "sp", "leverage", "random", "brute"}));
    decompose->add_option("--output", dec_output, "Result file (JSON); '-' for stdout");

    // benchmark
    auto* benchmark = app.add_subcommand("benchmark", "Sweep methods and k over seeded synthetic data");
    std::size_t b_n = 200, b_m = 400, b_rank = 10;
    double b_noise_ratio = 0.1, b_noise_sigma = -1.0;
    std::size_t b_kmin = 2, b_kmax = 20, b_kstep = 2, b_seeds = 10;
    std::vector<std::string> b_methods{"twsp", "sp", "leverage", "random"};
    SolverFlags b_flags;
    std::string b_output = "-";
    std::string b_emit_indices;
    std::size_t b_threads = std::max(1u, std::thread::hardware_concurrency());
    benchmark->add_option("--n", b_n, "Synthetic rows");
    benchmark->add_option("--m", b_m, "Synthetic columns");
    benchmark->add_option("--rank", b_rank, "Synthetic intrinsic rank");
    benchmark->add_option("--noise-ratio", b_noise_ratio,
                          "Noise-to-signal Frobenius ratio (default 0.1)");
    benchmark->add_option("--noise-sigma", b_noise_sigma,
                          "Absolute noise level; overrides --noise-ratio when >= 0");
    benchmark->add_option("--k-min", b_kmin, "Smallest k (k1 = k2 = k)");
    benchmark->add_option("--k-max", b_kmax, "Largest k");
    benchmark->add_option("--k-step", b_kstep, "k increment");
    benchmark->add_option("--seeds", b_seeds, "Seeds 0..N-1; each seeds both data and solver");
    benchmark->add_option("--methods", b_methods, "Methods to sweep")->delimiter(',');
    add_solver_flags(benchmark, b_flags, /*require_k=*/false);
    benchmark->add_option("--output", b_output, "Benchmark CSV; '-' for stdout");
    benchmark->add_option("--emit-indices", b_emit_indices,
                          "Also write selected indices per run to this CSV");
    benchmark->add_option("--threads", b_threads, "Worker threads for sweep cells");

    // convergence
    auto* convergence = app.add_subcommand("convergence", "Per-iteration traces over many seeds");
    InputFlags c_input;
    std::size_t c_n = 200, c_m = 400, c_rank = 10;
    double c_noise_ratio = 0.1;
    std::uint64_t c_data_seed = 0;
    SolverFlags c_flags;
    c_flags.k1 = c_flags.k2 = 20;
    std::size_t c_seeds = 100;
    std::string c_output = "-";
    std::size_t c_threads = std::max(1u, std::thread::hardware_concurrency());
    add_input_flags(convergence, c_input, /*required=*/false);
    convergence->add_option("--n", c_n, "Synthetic rows (when no --input)");
    convergence->add_option("--m", c_m, "Synthetic columns");
    convergence->add_option("--rank", c_rank, "Synthetic intrinsic rank");
    convergence->add_option("--noise-ratio", c_noise_ratio, "Noise-to-signal ratio");
    convergence->add_option("--data-seed", c_data_seed, "Seed for the synthetic matrix");
    add_solver_flags(convergence, c_flags, /*require_k=*/false);
    convergence->add_option("--seeds", c_seeds, "Solver seeds 0..N-1 on the same matrix");
    convergence->add_option("--output", c_output, "Trace CSV; '-' for stdout");
    convergence->add_option("--threads", c_threads, "Worker threads across seeds");

    // assign-channels
    auto* assign = app.add_subcommand("assign-channels",
                                      "Select rows/columns, then pick top-F channels per row");
    InputFlags a_input;
    SolverFlags a_flags;
    std::size_t a_f = 8;
    std::string a_output = "-";
    add_input_flags(assign, a_input);
    add_solver_flags(assign, a_flags, /*require_k=*/true);
    assign->add_option("--f", a_f, "Channels to keep per selected row");
    assign->add_option("--output", a_output, "Assignment CSV; '-' for stdout");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "Write the cross-class kernel X2^T X1");
    std::string k_class1, k_class2, k_output;
    std::string k_format = "csv";
    bool k_skip_header = false;
    kernel->add_option("--class1", k_class1, "Class-1 sample matrix (columns are samples)")
        ->required();
    kernel->add_option("--class2", k_class2, "Class-2 sample matrix")->required();
    kernel->add_option("--output", k_output, "Kernel matrix file")->required();
    kernel->add_option("--format", k_format, "Matrix format for inputs and output")
        ->check(CLI::IsMember({"csv", "bin"}));
    kernel->add_flag("--skip-header", k_skip_header, "Skip one CSV header line on read");

    CLI11_PARSE(app, argc, argv);

    try {
        if (decompose->parsed())
            return cmd_decompose(dec_input, dec_flags, dec_method, dec_output);
        if (benchmark->parsed())
            return cmd_benchmark(b_n, b_m, b_rank, b_noise_ratio, b_noise_sigma, b_kmin, b_kmax,
                                 b_kstep, b_seeds, b_methods, b_flags, b_output, b_emit_indices,
                                 b_threads);
        if (convergence->parsed())
            return cmd_convergence(c_input, c_n, c_m, c_rank, c_noise_ratio, c_data_seed, c_flags,
                                   c_seeds, c_output, c_threads);
        if (assign->parsed()) return cmd_assign_channels(a_input, a_flags, a_f, a_output);
        if (kernel->parsed())
            return cmd_kernel(k_class1, k_class2, k_output, k_format, k_skip_header);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
