#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigker/csv.hpp"
#include "sigker/datagen.hpp"
#include "sigker/errors.hpp"
#include "sigker/gram.hpp"
#include "sigker/oracles.hpp"
#include "sigker/validate.hpp"
#include "sigker/wavefront.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitValidation = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw UsageError("config file " + path + " must hold a JSON object");
  return j;
}

// Flags given on the command line override config-file values.
template <typename T>
void apply_config(const CLI::App* sub, const json& cfg, const char* name, T& target) {
  if (!cfg.contains(name)) return;
  if (sub->count(std::string("--") + name) > 0) return;
  try {
    target = cfg.at(name).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key '") + name + "': " + e.what());
  }
}

sigker::TruncationPolicy make_policy(const CLI::App* sub, const json& cfg, int order,
                                     double tol) {
  const bool order_set = sub->count("--order") > 0 || cfg.contains("order");
  const bool tol_set = sub->count("--tol") > 0 || cfg.contains("tol");
  if (order_set && tol_set) throw UsageError("--order and --tol are mutually exclusive");
  if (tol_set) return sigker::TruncationPolicy::adaptive(tol);
  if (order_set) return sigker::TruncationPolicy::fixed(order);
  return sigker::TruncationPolicy{};  // fixed at the default order 7
}

fs::path metadata_path(const fs::path& out) {
  fs::path meta = out;
  if (meta.extension() == ".json") meta += ".meta.json";
  else meta.replace_extension(".json");
  return meta;
}

int cmd_kernel(const std::string& x_path, const std::string& y_path, const CLI::App* sub,
               const json& cfg, int order, double tol, const std::string& grid_out,
               bool emit_json, unsigned threads) {
  apply_config(sub, cfg, "threads", threads);
  apply_config(sub, cfg, "order", order);
  apply_config(sub, cfg, "tol", tol);
  const auto policy = make_policy(sub, cfg, order, tol);

  sigker::TimeSeries x = sigker::load_csv(x_path);
  sigker::TimeSeries y = sigker::load_csv(y_path);
  if (x.dim() != y.dim())
    throw std::invalid_argument("kernel: input dimensions differ (" + std::to_string(x.dim()) +
                                " vs " + std::to_string(y.dim()) + ")");
  const std::size_t len = std::max({x.length(), y.length(), std::size_t{2}});
  x = sigker::pad_to_length(x, len);
  y = sigker::pad_to_length(y, len);

  sigker::PropagateOptions opts;
  opts.threads = threads;
  const auto t0 = std::chrono::steady_clock::now();
  sigker::KernelResult result;
  if (grid_out.empty()) {
    result = sigker::propagate_with_policy(x, y, policy, opts);
  } else {
    int n = policy.order;
    bool converged = true;
    if (policy.mode == sigker::TruncationPolicy::Mode::kAdaptive) {
      const sigker::IncrementTable table(x, y);
      const auto est = sigker::estimate_order(table.max_abs_rho(), len, policy.tol);
      n = est.order;
      converged = est.converged;
    }
    result = sigker::propagate_grid(x, y, n, opts);
    result.order_converged = converged;
    sigker::save_matrix_csv(result.grid, result.grid_rows, result.grid_cols, grid_out);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!result.order_converged)
    std::cerr << "warning: adaptive search saturated at order 64 without meeting the tolerance\n";
  std::cout << "K=" << fmt(result.value) << "\n";
  if (emit_json) {
    json meta{{"schema", 1},
              {"value", result.value},
              {"order", result.order},
              {"order_converged", result.order_converged},
              {"tiles", result.tiles_processed},
              {"peak_live_series", result.peak_live_series},
              {"threads", threads},
              {"wall_seconds", seconds}};
    std::cout << meta.dump() << "\n";
  }
  return kExitOk;
}

std::vector<fs::path> collect_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
          found.push_back(entry.path());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  if (files.empty()) throw UsageError("gram: no input CSV files");
  return files;
}

int cmd_gram(const std::vector<std::string>& inputs, const CLI::App* sub, const json& cfg,
             int order, double tol, const std::string& out, bool with_bound, unsigned threads) {
  apply_config(sub, cfg, "threads", threads);
  apply_config(sub, cfg, "order", order);
  apply_config(sub, cfg, "tol", tol);
  sigker::GramOptions opts;
  opts.policy = make_policy(sub, cfg, order, tol);
  opts.threads = threads;
  opts.compute_bound = with_bound;

  const auto files = collect_inputs(inputs);
  std::vector<sigker::TimeSeries> family;
  family.reserve(files.size());
  for (const auto& f : files) family.push_back(sigker::load_csv(f));

  const auto result = sigker::gram_matrix(family, opts);
  sigker::save_matrix_csv(result.values, result.size, result.size, out);

  json meta{{"schema", 1},
            {"size", result.size},
            {"policy", result.adaptive ? "adaptive" : "fixed"},
            {"order_min", result.min_order},
            {"order_max", result.max_order},
            {"orders_converged", result.orders_converged},
            {"wall_seconds", result.wall_seconds},
            {"peak_live_series", result.peak_live_series}};
  json input_names = json::array();
  for (const auto& f : files) input_names.push_back(f.string());
  meta["inputs"] = input_names;
  if (with_bound) {
    meta["bound"] = result.bound;
    meta["max_abs_increment_product"] = result.max_abs_increment_product;
  }
  json failures = json::array();
  for (const auto& f : result.failures)
    failures.push_back({{"row", f.row}, {"col", f.col}, {"message", f.message}});
  meta["failures"] = failures;
  std::ofstream meta_out(metadata_path(out));
  meta_out << meta.dump(2) << "\n";

  std::cout << "gram " << result.size << "x" << result.size << " -> " << out << "\n";
  if (!result.failures.empty()) {
    for (const auto& f : result.failures)
      std::cerr << "entry (" << f.row << ", " << f.col << ") failed: " << f.message << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_validate(const std::string& suite, const sigker::validate::SuiteOptions& opts) {
  std::vector<std::string> suites;
  if (suite == "all") suites = sigker::validate::suite_names();
  else suites.push_back(suite);

  bool all_passed = true;
  for (const auto& name : suites) {
    const auto report = sigker::validate::run_suite(name, opts);
    std::printf("%-16s cases=%-4zu failures=%-3zu max_error=%.3e %s\n", report.name.c_str(),
                report.cases, report.failures, report.max_error,
                report.passed() ? "PASS" : "FAIL");
    for (const auto& msg : report.messages) std::printf("  %s\n", msg.c_str());
    all_passed = all_passed && report.passed();
  }
  return all_passed ? kExitOk : kExitValidation;
}

int cmd_bench(std::vector<std::size_t> lengths, std::vector<std::size_t> dims,
              std::size_t repeats, int order, std::uint64_t seed, unsigned threads,
              std::size_t oracle_max_len, int oracle_depth, const std::string& out) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw UsageError("cannot write " + out);
    os = &file;
  }
  *os << "length,dim,order,mean_seconds,stdev_seconds,peak_live_series,mape\n";
  for (std::size_t len : lengths) {
    for (std::size_t dim : dims) {
      const auto x = sigker::datagen::brownian(len, dim, seed);
      const auto y = sigker::datagen::brownian(len, dim, seed + 1);
      sigker::PropagateOptions opts;
      opts.threads = threads;
      std::vector<double> times;
      sigker::KernelResult result;
      for (std::size_t r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        result = sigker::propagate(x, y, order, opts);
        times.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      }
      double mean = 0.0;
      for (double t : times) mean += t;
      mean /= static_cast<double>(times.size());
      double var = 0.0;
      for (double t : times) var += (t - mean) * (t - mean);
      const double stdev = times.size() > 1 ? std::sqrt(var / (times.size() - 1)) : 0.0;

      std::string mape_cell;
      if (len <= oracle_max_len) {
        const double ref = sigker::oracle::truncated_kernel_levelwise(x, y, oracle_depth);
        if (ref != 0.0) mape_cell = fmt(std::abs(result.value - ref) / std::abs(ref));
      }
      *os << len << ',' << dim << ',' << order << ',' << fmt(mean) << ',' << fmt(stdev) << ','
          << result.peak_live_series << ',' << mape_cell << "\n";
    }
  }
  return kExitOk;
}

int cmd_gen(const std::string& kind, std::size_t len, std::size_t dim, std::uint64_t seed,
            double hurst, double period, double amplitude, double noise,
            const std::string& out) {
  sigker::TimeSeries ts = [&] {
    if (kind == "brownian") return sigker::datagen::brownian(len, dim, seed);
    if (kind == "fbm") return sigker::datagen::fbm(len, dim, hurst, seed);
    if (kind == "near-periodic")
      return sigker::datagen::near_periodic(len, dim, period, amplitude, noise, seed);
    throw UsageError("unknown generator kind: " + kind);
  }();
  if (out.empty()) {
    sigker::write_csv(ts, std::cout);
  } else {
    sigker::save_csv(ts, out);
    std::cout << kind << " length=" << len << " dim=" << dim << " -> " << out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"signature-kernel engine: tile-local power series with a diagonal sweep"};
  app.require_subcommand(1);

  std::string config_path;

  // kernel
  auto* kernel = app.add_subcommand("kernel", "evaluate K(1,1) for a pair of CSV series");
  std::string kx, ky, kgrid;
  int korder = 7;
  double ktol = 1e-12;
  bool kjson = false;
  unsigned kthreads = 1;
  kernel->add_option("x", kx, "first series CSV")->required();
  kernel->add_option("y", ky, "second series CSV")->required();
  kernel->add_option("--order", korder, "fixed truncation order (1..64)");
  kernel->add_option("--tol", ktol, "adaptive truncation tolerance");
  kernel->add_option("--grid", kgrid, "write the full knot grid K(sigma_k, tau_l) to this CSV");
  kernel->add_flag("--json", kjson, "print a JSON metadata line after the value");
  kernel->add_option("--threads", kthreads, "worker threads within each diagonal");
  kernel->add_option("--config", config_path, "JSON config file (flags override it)");

  // gram
  auto* gram = app.add_subcommand("gram", "pairwise kernel matrix over a family of CSVs");
  std::vector<std::string> ginputs;
  std::string gout = "gram.csv";
  int gorder = 7;
  double gtol = 1e-12;
  bool gbound = false;
  unsigned gthreads = 1;
  gram->add_option("inputs", ginputs, "CSV files or a directory of *.csv")->required();
  gram->add_option("--out", gout, "output CSV path (metadata lands next to it)");
  gram->add_option("--order", gorder, "fixed truncation order (1..64)");
  gram->add_option("--tol", gtol, "adaptive truncation tolerance");
  gram->add_flag("--bound", gbound, "report the a-priori truncation bound in the metadata");
  gram->add_option("--threads", gthreads, "worker threads over Gram entries");
  gram->add_option("--config", config_path, "JSON config file (flags override it)");

  // validate
  auto* validate = app.add_subcommand("validate", "run a built-in verification suite");
  std::string vsuite;
  sigker::validate::SuiteOptions vopts;
  validate
      ->add_option("--suite", vsuite,
                   "closed-form | oracle-triangle | bound | invariance | all")
      ->required();
  validate->add_option("--seed", vopts.seed, "RNG seed (default 12345)");
  validate->add_option("--cases", vopts.cases, "random cases per suite (0: suite default)");
  validate->add_option("--tolerance", vopts.tolerance, "override the suite tolerances");
  validate->add_flag("--inject-fault", vopts.inject_fault,
                     "negative control: corrupt a factorial weight, the suite must fail");

  // bench
  auto* bench = app.add_subcommand("bench", "timing/memory/accuracy table as CSV");
  std::vector<std::size_t> blengths{129, 257, 513};
  std::vector<std::size_t> bdims{2};
  std::size_t brepeats = 10;
  int border = 7;
  std::uint64_t bseed = 42;
  unsigned bthreads = 1;
  std::size_t boracle_max = 64;
  int bdepth = 20;
  std::string bout;
  bench->add_option("--lengths", blengths, "series lengths to benchmark");
  bench->add_option("--dims", bdims, "dimensions to benchmark");
  bench->add_option("--repeats", brepeats, "timing repetitions per point");
  bench->add_option("--order", border, "truncation order");
  bench->add_option("--seed", bseed, "seed for the Brownian inputs (default 42)");
  bench->add_option("--threads", bthreads, "worker threads within each diagonal");
  bench->add_option("--oracle-max-len", boracle_max,
                    "compute the accuracy column only up to this length");
  bench->add_option("--oracle-depth", bdepth, "truncation depth of the signature oracle");
  bench->add_option("--out", bout, "output CSV path (default: stdout)");

  // gen
  auto* gen = app.add_subcommand("gen", "emit a synthetic series as CSV");
  std::string gkind = "brownian";
  std::size_t glen = 33, gdim = 2;
  std::uint64_t gseed = 1;
  double ghurst = 0.5, gperiod = 0.25, gamp = 1.0, gnoise = 0.0;
  std::string genout;
  gen->add_option("--kind", gkind, "brownian | fbm | near-periodic");
  gen->add_option("--len", glen, "number of samples");
  gen->add_option("--dim", gdim, "dimension");
  gen->add_option("--seed", gseed, "RNG seed (default 1)");
  gen->add_option("--hurst", ghurst, "Hurst index for fbm");
  gen->add_option("--period", gperiod, "period for near-periodic, in [0,1] time units");
  gen->add_option("--amplitude", gamp, "amplitude for near-periodic");
  gen->add_option("--noise", gnoise, "noise standard deviation for near-periodic");
  gen->add_option("--out", genout, "output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    const json cfg = load_config(config_path);
    if (kernel->parsed())
      return cmd_kernel(kx, ky, kernel, cfg, korder, ktol, kgrid, kjson, kthreads);
    if (gram->parsed())
      return cmd_gram(ginputs, gram, cfg, gorder, gtol, gout, gbound, gthreads);
    if (validate->parsed()) return cmd_validate(vsuite, vopts);
    if (bench->parsed())
      return cmd_bench(blengths, bdims, brepeats, border, bseed, bthreads, boracle_max, bdepth,
                       bout);
    if (gen->parsed())
      return cmd_gen(gkind, glen, gdim, gseed, ghurst, gperiod, gamp, gnoise, genout);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sigker::NumericOverflowError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const sigker::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const sigker::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
