#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "masspcf/masspcf.hpp"
#include "pcf_io.hpp"

namespace mpcf::cli {

namespace {

struct MatrixArgs {
  std::vector<std::string> inputs;
  double p = 1.0;
  std::vector<std::string> bounds;
  unsigned threads = 0;
  std::string output;
  std::string format = "csv";
  bool quiet = false;
};

struct MeanArgs {
  std::vector<std::string> inputs;
  std::string output;
  unsigned threads = 0;
};

struct GenerateArgs {
  std::string kind = "synthetic";
  std::size_t count = 1;
  std::size_t n_points = 100;
  double sigma = 0.1;
  std::uint64_t seed = 0;
  std::string dtype = "f64";
  std::string output;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
  case ErrorCode::DivergentIntegral:
    return kDivergent;
  case ErrorCode::Cancelled:
    return kInterrupted;
  case ErrorCode::Empty:
  case ErrorCode::NonZeroStart:
  case ErrorCode::NonIncreasingTimes:
  case ErrorCode::NonFinite:
  case ErrorCode::MixedPrecision:
  case ErrorCode::EmptyCollection:
  case ErrorCode::InvalidBounds:
  case ErrorCode::InvalidArgument:
  case ErrorCode::BadShape:
  case ErrorCode::Parse:
    return kInputError;
  default:
    return kFailure;
  }
}

// Loads every input and concatenates them into one single-kind collection.
std::pair<AnyCollection, io::FileKind> load_inputs(const std::vector<std::string>& inputs) {
  std::vector<AnyPcf> all;
  io::FileKind kind = io::FileKind::Json;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    io::LoadedCollection loaded = io::load(inputs[i]);
    if (i == 0) {
      kind = loaded.kind;
    }
    all.insert(all.end(), loaded.pcfs.begin(), loaded.pcfs.end());
  }
  return {make_collection(all), kind};
}

void emit(const std::string& payload, const std::string& output, std::ostream& out) {
  if (output.empty() || output == "-") {
    out << payload;
    return;
  }
  std::ofstream file(output, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw std::runtime_error("cannot open '" + output + "' for writing");
  }
  file << payload;
  if (!file) {
    throw std::runtime_error("failed writing '" + output + "'");
  }
}

double parse_bound(const std::string& text) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::InvalidBounds, "bound '" + text + "' is not a number");
  }
  return x;
}

template <Scalar T, class Functional>
DenseMatrix<T> run_matrix_job(const std::vector<Pcf<T>>& pcfs, Functional functional, const MatrixArgs& args,
                              std::ostream& err, const std::atomic<bool>* interrupt) {
  PairwiseOptions options;
  options.workers = args.threads;
  PairwiseJob<T> job(pcfs, std::move(functional), options);
  if (!args.quiet) {
    job.subscribe([&err, last = -1](double fraction) mutable {
      const int percent = static_cast<int>(fraction * 100.0);
      if (percent > last) {
        last = percent;
        err << "progress: " << percent << "%\n" << std::flush;
      }
    });
  }
  auto interrupted = [interrupt] { return interrupt != nullptr && interrupt->load(); };
  if (interrupted()) {
    job.cancel();
  }
  job.start();
  while (!job.wait_for(std::chrono::milliseconds(50))) {
    if (interrupted()) {
      job.cancel();
    }
  }
  return job.get();
}

int cmd_matrix(const MatrixArgs& args, bool kernel, std::ostream& out, std::ostream& err,
               const std::atomic<bool>* interrupt) {
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();
  if (!args.bounds.empty()) {
    a = parse_bound(args.bounds.at(0));
    b = parse_bound(args.bounds.at(1));
    check_bounds(a, b);
  }
  if (!kernel) {
    detail::check_exponent(args.p);
  }
  const auto format = args.format == "json" ? io::MatrixFormat::Json : io::MatrixFormat::Csv;
  auto [collection, kind] = load_inputs(args.inputs);
  (void)kind;

  std::ostringstream payload;
  std::visit(
      [&](const auto& pcfs) {
        using T = typename std::decay_t<decltype(pcfs)>::value_type::value_type;
        DenseMatrix<T> m = kernel ? run_matrix_job(pcfs, L2Inner{a, b}, args, err, interrupt)
                                  : run_matrix_job(pcfs, LpDistance{args.p, a, b}, args, err, interrupt);
        io::write_matrix(payload, m, format);
      },
      collection);
  emit(payload.str(), args.output, out);
  return kOk;
}

int cmd_mean(const MeanArgs& args, std::ostream& out) {
  auto [collection, kind] = load_inputs(args.inputs);
  std::ostringstream payload;
  std::visit(
      [&](const auto& pcfs) {
        const auto avg = mean(pcfs, args.threads);
        if (kind == io::FileKind::Csv) {
          io::write_csv(payload, avg);
        } else {
          io::write_json(payload, std::vector{avg});
        }
      },
      collection);
  emit(payload.str(), args.output, out);
  return kOk;
}

template <Scalar T>
std::vector<Pcf<T>> generate(const GenerateArgs& args) {
  const RngSpec rng{args.seed};
  if (args.kind == "synthetic") {
    return synthetic_benchmark<T>(args.count, rng);
  }
  const TrigKind trig = args.kind == "sin" ? TrigKind::Sin : TrigKind::Cos;
  return noisy_trig<T>(Shape{args.count}, args.n_points, trig, args.sigma, rng).elements();
}

int cmd_generate(const GenerateArgs& args, std::ostream& out) {
  std::ostringstream payload;
  if (args.dtype == "f32") {
    io::write_json(payload, generate<float>(args));
  } else {
    io::write_json(payload, generate<double>(args));
  }
  emit(payload.str(), args.output, out);
  return kOk;
}

void add_matrix_options(CLI::App& sub, MatrixArgs& args, bool with_p) {
  sub.add_option("input", args.inputs, "PCF collection(s): JSON file, CSV file, or directory of CSV files")
      ->required();
  if (with_p) {
    sub.add_option("--p", args.p, "exponent of the L_p distance (>= 1)")->capture_default_str();
    sub.add_option("--bounds", args.bounds, "integration bounds a b (b may be inf)")->expected(2);
  }
  sub.add_option("--threads", args.threads, "worker count (0 = MASSPCF_THREADS or all cores)");
  sub.add_option("-o,--output", args.output, "output path (default: stdout)");
  sub.add_option("--format", args.format, "matrix format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub.add_flag("-q,--quiet", args.quiet, "no progress output");
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
        const std::atomic<bool>* interrupt) {
  CLI::App app{"Distances, kernels and reductions over piecewise constant functions", "mpcf"};
  app.require_subcommand(1);

  MatrixArgs pdist_args;
  auto* pdist_cmd = app.add_subcommand("pdist", "pairwise L_p distance matrix");
  add_matrix_options(*pdist_cmd, pdist_args, true);

  MatrixArgs kernel_args;
  auto* kernel_cmd = app.add_subcommand("kernel", "L_2 inner product (Gram) matrix");
  add_matrix_options(*kernel_cmd, kernel_args, false);

  MeanArgs mean_args;
  auto* mean_cmd = app.add_subcommand("mean", "pointwise mean PCF of a collection");
  mean_cmd->add_option("input", mean_args.inputs, "PCF collection(s)")->required();
  mean_cmd->add_option("-o,--output", mean_args.output, "output path (default: stdout)");
  mean_cmd->add_option("--threads", mean_args.threads, "worker count (0 = auto)");

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "write a random PCF collection as JSON");
  gen_cmd->add_option("--kind", gen_args.kind)
      ->check(CLI::IsMember({"synthetic", "sin", "cos"}))
      ->capture_default_str();
  gen_cmd->add_option("--count", gen_args.count, "number of PCFs")->capture_default_str();
  gen_cmd->add_option("--n-points", gen_args.n_points, "sample times per sin/cos PCF")->capture_default_str();
  gen_cmd->add_option("--sigma", gen_args.sigma, "noise standard deviation for sin/cos")->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed)->capture_default_str();
  gen_cmd->add_option("--dtype", gen_args.dtype)->check(CLI::IsMember({"f32", "f64"}))->capture_default_str();
  gen_cmd->add_option("-o,--output", gen_args.output, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out;
    std::ostringstream cli_err;
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*pdist_cmd) {
      return cmd_matrix(pdist_args, false, out, err, interrupt);
    }
    if (*kernel_cmd) {
      return cmd_matrix(kernel_args, true, out, err, interrupt);
    }
    if (*mean_cmd) {
      return cmd_mean(mean_args, out);
    }
    return cmd_generate(gen_args, out);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Cancelled) {
      err << "mpcf: interrupted; partial results discarded\n";
    } else {
      err << "mpcf: error: " << e.what() << '\n';
    }
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "mpcf: error: " << e.what() << '\n';
    return kFailure;
  }
}

} // namespace mpcf::cli
