// Front-end implementation: flag parsing with JSON config-file defaults,
// domain re-validation that surfaces every constraint as a structured
// usage error, and the subcommand report emitters.  All numerical work is
// delegated to the library; this file only arranges inputs and formats
// outputs.

#include "wishrisk/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wishrisk/io.hpp"
#include "wishrisk/priors.hpp"
#include "wishrisk/risk.hpp"
#include "wishrisk/specfun.hpp"

namespace wishrisk {

namespace {

using nlohmann::ordered_json;

// Shortest decimal form that parses back to the same double; shared by all
// CSV emitters so outputs are byte-stable.
std::string fmt_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double_text(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || std::isnan(v)) {
    throw UsageError(what + ": '" + text + "' is not a number");
  }
  return v;
}

int parse_int_text(const std::string& text, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw UsageError(what + ": '" + text + "' is not an integer");
  }
  return static_cast<int>(v);
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    out.push_back(parse_double_text(item, what));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what) {
  std::vector<int> out;
  for (const std::string& item : split(text, ',')) {
    out.push_back(parse_int_text(item, what));
  }
  return out;
}

struct AxisSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
};

AxisSpec parse_axis(const std::string& text, const std::string& what) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3) {
    throw UsageError(what + ": '" + text + "' must look like min:max:points");
  }
  AxisSpec axis;
  axis.min = parse_double_text(parts[0], what);
  axis.max = parse_double_text(parts[1], what);
  axis.points = parse_int_text(parts[2], what);
  return axis;
}

// Library validation failures become usage errors at parse time so they
// reach the user with exit code 2 and the violated constraint named.
template <typename Fn>
void rethrow_as_usage(Fn&& fn) {
  try {
    fn();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// Turns a JSON config object into an argument list: each key becomes a
// long option, arrays become comma lists.
std::vector<std::string> config_to_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw UsageError("cannot open config file: " + path);
  }
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) {
    throw UsageError("config file " + path +
                     " must hold a JSON object of option names");
  }
  std::vector<std::string> out;
  for (const auto& [key, value] : j.items()) {
    out.push_back("--" + key);
    if (value.is_string()) {
      out.push_back(value.get<std::string>());
    } else if (value.is_number() || value.is_boolean()) {
      out.push_back(value.dump());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& item : value) {
        if (!item.is_number()) {
          throw UsageError("config option " + key +
                           ": array entries must be numbers");
        }
        if (!joined.empty()) joined += ",";
        joined += item.dump();
      }
      out.push_back(joined);
    } else {
      throw UsageError("config option " + key + " has an unsupported type");
    }
  }
  return out;
}

// Splices config-file defaults into the argument list directly after the
// subcommand name, so explicitly passed options (which come later) win
// under the take-last policy.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::vector<std::string> cleaned;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--config") {
      if (i + 1 >= args.size()) {
        throw UsageError("--config expects a file path");
      }
      path = args[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      path = a.substr(9);
    } else {
      cleaned.push_back(a);
    }
  }
  if (path.empty()) return cleaned;
  const std::vector<std::string> defaults = config_to_args(path);
  std::vector<std::string> out;
  std::size_t pos = 0;
  if (!cleaned.empty()) {
    out.push_back(cleaned[0]);
    pos = 1;
  }
  out.insert(out.end(), defaults.begin(), defaults.end());
  out.insert(out.end(), cleaned.begin() + static_cast<std::ptrdiff_t>(pos),
             cleaned.end());
  return out;
}

HyperT resolve_t(const std::string& text, const Partition& p) {
  if (text == "jeffreys") {
    return canonical_hyperparams(p, PriorKind::kJeffreys);
  }
  if (text == "reference" || text == "conjugate") {
    return canonical_hyperparams(p, PriorKind::kReference);
  }
  if (text == "right-invariant" || text == "right_invariant") {
    return canonical_hyperparams(p, PriorKind::kRightInvariant);
  }
  if (text.find_first_not_of("0123456789+-.,eE") != std::string::npos) {
    throw UsageError("unknown hyperparameter kind '" + text +
                     "'; use jeffreys, reference, right-invariant, or an "
                     "explicit list a,b,...");
  }
  HyperT t;
  t.t = parse_double_list(text, "--t");
  if (static_cast<int>(t.t.size()) != p.h()) {
    throw UsageError("--t: expected " + std::to_string(p.h()) +
                     " exponents for this partition, got " +
                     std::to_string(t.t.size()));
  }
  return t;
}

// Reads the scale matrix in the shared JSON encoding (array of rows,
// complex entries as [re, im]) and checks it against the declared rank.
void load_xi_file(RunConfig& cfg) {
  std::ifstream in(cfg.xi_path);
  if (!in) {
    throw UsageError("cannot open scale matrix file: " + cfg.xi_path);
  }
  const std::string what = "scale matrix file " + cfg.xi_path;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
  Eigen::Index rows = 0, cols = 0;
  try {
    if (cfg.d == 1) {
      cfg.xi_real = matrix_from_json<double>(j);
      rows = cfg.xi_real.rows();
      cols = cfg.xi_real.cols();
    } else {
      cfg.xi_complex = matrix_from_json<std::complex<double>>(j);
      rows = cfg.xi_complex.rows();
      cols = cfg.xi_complex.cols();
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(what + ": " + e.what());
  }
  if (rows != cfg.r || cols != cfg.r) {
    throw UsageError(what + ": expected a " + std::to_string(cfg.r) + " x " +
                     std::to_string(cfg.r) + " matrix");
  }
}

Partition build_partition(const RunConfig& cfg) {
  return make_partition(make_cone_spec(cfg.d, cfg.r), cfg.partition);
}

std::string joined_numbers(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ",";
    out += fmt_number(v);
  }
  return out;
}

std::string joined_ints(const std::vector<int>& values) {
  std::string out;
  for (int v : values) {
    if (!out.empty()) out += ",";
    out += std::to_string(v);
  }
  return out;
}

void emit_json(std::ostream& out, const ordered_json& j) {
  out << j.dump(2) << "\n";
}

ordered_json cone_echo(const RunConfig& cfg, const char* name) {
  ordered_json j;
  j["command"] = name;
  j["d"] = cfg.d;
  j["r"] = cfg.r;
  return j;
}

int run_priors(const RunConfig& cfg, std::ostream& out) {
  const Partition p = build_partition(cfg);
  ordered_json j = cone_echo(cfg, "priors");
  j["partition"] = cfg.partition;
  ordered_json dims;
  dims["n"] = p.cone.n;
  dims["h"] = p.h();
  std::vector<int> sizes, ranks, cum_dims;
  for (int i = 1; i <= p.h(); ++i) {
    sizes.push_back(p.k_of(i));
    ranks.push_back(p.r_of(i));
    cum_dims.push_back(p.n_of(i));
  }
  dims["block_sizes"] = sizes;
  dims["block_ranks"] = ranks;
  dims["block_dims"] = cum_dims;
  j["dimensions"] = dims;
  j["t_jeffreys"] = canonical_hyperparams(p, PriorKind::kJeffreys).t;
  j["t_reference"] = canonical_hyperparams(p, PriorKind::kReference).t;
  j["t_right_invariant"] =
      canonical_hyperparams(p, PriorKind::kRightInvariant).t;
  emit_json(out, j);
  return 0;
}

int run_risk(const RunConfig& cfg, std::ostream& out) {
  const Partition p = build_partition(cfg);
  const RiskReport report = exact_risk(p, cfg.t, cfg.mu, cfg.nu);
  ordered_json j = cone_echo(cfg, "risk");
  j["partition"] = cfg.partition;
  j["mu"] = cfg.mu;
  j["nu"] = cfg.nu;
  j["t_source"] = cfg.t_source;
  j["t"] = cfg.t.t;
  j["parts"] = report.parts;
  j["total"] = report.total;
  j["nr"] = report.nr;
  j["nrd"] = report.nrd;
  j["grad"] = report.grad;
  j["hess_diag"] = report.hess_diag;
  emit_json(out, j);
  return 0;
}

int run_scan(const RunConfig& cfg, std::ostream& out) {
  const ConeSpec cone = make_cone_spec(cfg.d, cfg.r);
  const std::string grid_echo =
      fmt_number(cfg.grid.t1_min) + ":" + fmt_number(cfg.grid.t1_max) + ":" +
      std::to_string(cfg.grid.resolution) + "," +
      fmt_number(cfg.grid.t2_min) + ":" + fmt_number(cfg.grid.t2_max) + ":" +
      std::to_string(cfg.grid.resolution);
  std::vector<std::string> comments{
      "command=scan",
      "d=" + std::to_string(cfg.d) + " r=" + std::to_string(cfg.r) +
          " k=" + std::to_string(cfg.k),
      "nu=" + fmt_number(cfg.nu)};
  RegionGrid region;
  if (cfg.mu_list.empty()) {
    comments.push_back("mu=" + fmt_number(cfg.mu));
    region = scan_nrd(cone, cfg.k, cfg.mu, cfg.nu, cfg.grid, cfg.threads);
  } else {
    comments.push_back("mu_list=" + joined_numbers(cfg.mu_list));
    region = v_estimate(cone, cfg.k, cfg.nu, cfg.mu_list, cfg.grid,
                        cfg.threads);
  }
  comments.push_back("grid=" + grid_echo);
  write_region_csv(out, region, comments);
  return 0;
}

template <typename Scalar>
void mc_estimate_into(const RunConfig& cfg, ordered_json& j) {
  const Partition p = build_partition(cfg);
  DenseMatrix<Scalar> xi_mat;
  if (cfg.xi_path.empty()) {
    xi_mat = DenseMatrix<Scalar>::Identity(cfg.r, cfg.r);
  } else if constexpr (std::is_same_v<Scalar, double>) {
    xi_mat = cfg.xi_real;
  } else {
    xi_mat = cfg.xi_complex;
  }
  const ConeElement<Scalar> xi(xi_mat);
  const HyperS<Scalar> s = HyperS<Scalar>::zero(p);
  const McEstimate est =
      mc_risk(p, s, cfg.t, cfg.mu, cfg.nu, xi, cfg.mc, cfg.threads);
  const double exact = exact_risk(p, cfg.t, cfg.mu, cfg.nu).total;
  j["estimate"] = est.mean;
  j["std_error"] = est.std_error;
  j["n_total"] = est.n_total;
  j["exact"] = exact;
  if (est.std_error > 0.0) {
    j["z_score"] = (est.mean - exact) / est.std_error;
  } else {
    j["z_score"] = nullptr;
  }
}

int run_mc(const RunConfig& cfg, std::ostream& out) {
  ordered_json j = cone_echo(cfg, "mc");
  j["partition"] = cfg.partition;
  j["mu"] = cfg.mu;
  j["nu"] = cfg.nu;
  j["t_source"] = cfg.t_source;
  j["t"] = cfg.t.t;
  j["xi"] = cfg.xi_path.empty() ? "identity" : cfg.xi_path;
  j["seed"] = cfg.mc.seed;
  j["n_outer"] = cfg.mc.n_outer;
  j["n_inner"] = cfg.mc.n_inner;
  j["threads"] = cfg.threads;
  if (cfg.d == 1) {
    mc_estimate_into<double>(cfg, j);
  } else {
    mc_estimate_into<std::complex<double>>(cfg, j);
  }
  emit_json(out, j);
  return 0;
}

int run_asympt(const RunConfig& cfg, std::ostream& out) {
  const Partition p = build_partition(cfg);
  out << "# command=asympt\n";
  out << "# d=" << cfg.d << " r=" << cfg.r
      << " partition=" << joined_ints(cfg.partition) << "\n";
  out << "# nu=" << fmt_number(cfg.nu) << " t=" << joined_numbers(cfg.t.t)
      << "\n";
  out << "# sweep=" << fmt_number(cfg.sweep.min) << ":"
      << fmt_number(cfg.sweep.max) << ":" << cfg.sweep.points
      << " (geometric)\n";
  out << "mu,exact,asympt,abs_diff\n";
  const int last = cfg.sweep.points - 1;
  for (int step = 0; step <= last; ++step) {
    double mu = cfg.sweep.min;
    if (step == last) {
      mu = cfg.sweep.max;
    } else if (step > 0) {
      const double frac = static_cast<double>(step) / last;
      mu = std::exp(std::log(cfg.sweep.min) * (1.0 - frac) +
                    std::log(cfg.sweep.max) * frac);
    }
    const double exact = exact_risk(p, cfg.t, mu, cfg.nu).total;
    double asympt = 0.0;
    for (int i = 1; i <= p.h(); ++i) {
      asympt += asympt_part_risk(p, i, cfg.t.t[static_cast<std::size_t>(i) - 1],
                                 mu, cfg.nu);
    }
    out << fmt_number(mu) << ',' << fmt_number(exact) << ','
        << fmt_number(asympt) << ',' << fmt_number(std::abs(exact - asympt))
        << '\n';
  }
  return 0;
}

template <typename Scalar>
void sample_rows(const RunConfig& cfg, std::ostream& out) {
  const ConeSpec cone = make_cone_spec(cfg.d, cfg.r);
  DenseMatrix<Scalar> xi_mat;
  if (cfg.xi_path.empty()) {
    xi_mat = DenseMatrix<Scalar>::Identity(cfg.r, cfg.r);
  } else if constexpr (std::is_same_v<Scalar, double>) {
    xi_mat = cfg.xi_real;
  } else {
    xi_mat = cfg.xi_complex;
  }
  const ConeElement<Scalar> xi(xi_mat);
  out << "sample";
  for (int a = 0; a < cfg.r; ++a) {
    for (int b = 0; b < cfg.r; ++b) {
      const std::string cell =
          "x_" + std::to_string(a) + "_" + std::to_string(b);
      if (cfg.d == 1) {
        out << ',' << cell;
      } else {
        out << ',' << cell << "_re," << cell << "_im";
      }
    }
  }
  out << '\n';
  for (std::int64_t n = 0; n < cfg.count; ++n) {
    // One substream per draw: row n is independent of the total count.
    RngStream stream(cfg.mc.seed, n);
    const ConeElement<Scalar> x = sample_wishart(cone, cfg.mu, xi, stream);
    out << n;
    for (int a = 0; a < cfg.r; ++a) {
      for (int b = 0; b < cfg.r; ++b) {
        out << ',' << fmt_number(std::real(x.mat()(a, b)));
        if (cfg.d == 2) {
          out << ',' << fmt_number(std::imag(x.mat()(a, b)));
        }
      }
    }
    out << '\n';
  }
}

int run_sample(const RunConfig& cfg, std::ostream& out) {
  out << "# command=sample\n";
  out << "# d=" << cfg.d << " r=" << cfg.r << " mu=" << fmt_number(cfg.mu)
      << "\n";
  out << "# xi=" << (cfg.xi_path.empty() ? "identity" : cfg.xi_path) << "\n";
  out << "# seed=" << cfg.mc.seed << " count=" << cfg.count << "\n";
  if (cfg.d == 1) {
    sample_rows<double>(cfg, out);
  } else {
    sample_rows<std::complex<double>>(cfg, out);
  }
  return 0;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.subcommand) {
    case Subcommand::kPriors:
      return run_priors(cfg, out);
    case Subcommand::kRisk:
      return run_risk(cfg, out);
    case Subcommand::kScan:
      return run_scan(cfg, out);
    case Subcommand::kMc:
      return run_mc(cfg, out);
    case Subcommand::kAsympt:
      return run_asympt(cfg, out);
    case Subcommand::kSample:
      return run_sample(cfg, out);
  }
  throw std::invalid_argument("dispatch: unknown subcommand");
}

}  // namespace

RunConfig parse_and_validate(const std::vector<std::string>& args) {
  const std::vector<std::string> expanded = expand_config(args);

  CLI::App app{
      "Exact and Monte Carlo prediction risks for Wishart scale matrices "
      "under the conjugate prior family.\n"
      "Every subcommand also accepts --config file.json: a JSON object of "
      "long option names used as defaults."};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string partition_text, t_text, mu_list_text, grid_text, sweep_text;

  // Later occurrences win, so config-file defaults (spliced in early) lose
  // to explicitly passed options.
  const auto tl = [](CLI::Option* o) {
    o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    return o;
  };
  const auto add_cone = [&](CLI::App* sub) {
    tl(sub->add_option("--d", cfg.d,
                       "matrix kind: 1 real symmetric, 2 complex Hermitian"))
        ->required();
    tl(sub->add_option("--r", cfg.r, "matrix rank"))->required();
  };
  const auto add_partition = [&](CLI::App* sub) {
    tl(sub->add_option(
        "--partition", partition_text,
        "comma-separated block sizes (default: a single block of rank r)"));
  };
  const auto add_shapes = [&](CLI::App* sub) {
    tl(sub->add_option("--mu", cfg.mu, "observation shape"))->required();
    tl(sub->add_option("--nu", cfg.nu, "prediction shape"))->required();
  };
  const auto add_t = [&](CLI::App* sub) {
    tl(sub->add_option("--t", t_text,
                       "exponents: jeffreys, reference, right-invariant, "
                       "or an explicit list a,b,..."))
        ->required();
  };
  const auto add_output = [&](CLI::App* sub) {
    tl(sub->add_option("--output", cfg.output_path,
                       "write the report to this file instead of stdout"));
  };
  const auto add_threads = [&](CLI::App* sub) {
    tl(sub->add_option("--threads", cfg.threads,
                       "worker cap; 0 uses WISHRISK_THREADS or the "
                       "hardware default"));
  };
  const auto add_xi = [&](CLI::App* sub) {
    tl(sub->add_option("--xi-file", cfg.xi_path,
                       "scale matrix as a JSON array of rows, complex "
                       "entries as [re, im] (default: identity)"));
  };
  const auto add_seed = [&](CLI::App* sub) {
    tl(sub->add_option("--seed", cfg.mc.seed, "stream seed (default 0)"));
  };

  CLI::App* sc_priors = app.add_subcommand(
      "priors", "canonical exponent vectors and partition dimensions (JSON)");
  add_cone(sc_priors);
  add_partition(sc_priors);
  add_output(sc_priors);

  CLI::App* sc_risk = app.add_subcommand(
      "risk", "exact risk report at an exponent vector (JSON)");
  add_cone(sc_risk);
  add_partition(sc_risk);
  add_shapes(sc_risk);
  add_t(sc_risk);
  add_output(sc_risk);

  CLI::App* sc_scan = app.add_subcommand(
      "scan",
      "normalized-risk-difference grid for a two-block partition (CSV)");
  add_cone(sc_scan);
  tl(sc_scan->add_option("--k", cfg.k, "rank of the leading block"))
      ->required();
  tl(sc_scan->add_option("--mu", cfg.mu, "observation shape"));
  tl(sc_scan->add_option("--mu-list", mu_list_text,
                         "comma-separated observation shapes; the scan "
                         "reports the pointwise dominance intersection"));
  tl(sc_scan->add_option("--nu", cfg.nu, "prediction shape"))->required();
  tl(sc_scan->add_option("--grid", grid_text,
                         "min:max:points,min:max:points with equal point "
                         "counts"))
      ->required();
  add_threads(sc_scan);
  add_output(sc_scan);

  CLI::App* sc_mc = app.add_subcommand(
      "mc", "Monte Carlo risk estimate with exact target and z-score "
            "(JSON)");
  add_cone(sc_mc);
  add_partition(sc_mc);
  add_shapes(sc_mc);
  add_t(sc_mc);
  add_xi(sc_mc);
  add_seed(sc_mc);
  tl(sc_mc->add_option("--n-outer", cfg.mc.n_outer,
                       "observation draws (default 10000)"));
  tl(sc_mc->add_option("--n-inner", cfg.mc.n_inner,
                       "prediction draws per observation (default 1)"));
  add_threads(sc_mc);
  add_output(sc_mc);

  CLI::App* sc_asympt = app.add_subcommand(
      "asympt",
      "exact vs asymptotic risk over a geometric shape sweep (CSV)");
  add_cone(sc_asympt);
  add_partition(sc_asympt);
  tl(sc_asympt->add_option("--nu", cfg.nu, "prediction shape"))->required();
  add_t(sc_asympt);
  tl(sc_asympt->add_option("--mu-sweep", sweep_text,
                           "min:max:points, geometrically spaced"))
      ->required();
  add_output(sc_asympt);

  CLI::App* sc_sample = app.add_subcommand(
      "sample", "Wishart draws for external checks (CSV)");
  add_cone(sc_sample);
  tl(sc_sample->add_option("--mu", cfg.mu, "shape parameter"))->required();
  add_xi(sc_sample);
  add_seed(sc_sample);
  tl(sc_sample->add_option("--count", cfg.count,
                           "number of draws (default 100)"));
  add_output(sc_sample);

  cfg.mc.n_outer = 10000;
  cfg.mc.n_inner = 1;
  cfg.count = 100;

  std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cfg.show_help = true;
    const auto seen = app.get_subcommands();
    cfg.help_text = seen.empty() ? app.help() : seen.front()->help();
    return cfg;
  } catch (const CLI::CallForAllHelp&) {
    cfg.show_help = true;
    cfg.help_text = app.help("", CLI::AppFormatMode::All);
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (sc_priors->parsed()) cfg.subcommand = Subcommand::kPriors;
  if (sc_risk->parsed()) cfg.subcommand = Subcommand::kRisk;
  if (sc_scan->parsed()) cfg.subcommand = Subcommand::kScan;
  if (sc_mc->parsed()) cfg.subcommand = Subcommand::kMc;
  if (sc_asympt->parsed()) cfg.subcommand = Subcommand::kAsympt;
  if (sc_sample->parsed()) cfg.subcommand = Subcommand::kSample;

  if (cfg.d != 1 && cfg.d != 2) {
    throw UsageError("d must be 1 or 2, got " + std::to_string(cfg.d));
  }
  // Rank and partition are re-validated through the library so the usage
  // error names the same constraint the library would.
  rethrow_as_usage([&] { validate_cone_spec(make_cone_spec(cfg.d, cfg.r)); });
  if (partition_text.empty()) {
    cfg.partition = {cfg.r};
  } else {
    cfg.partition = parse_int_list(partition_text, "--partition");
  }
  if (cfg.subcommand == Subcommand::kScan) {
    if (cfg.r < 2 || cfg.k <= 0 || cfg.k >= cfg.r) {
      throw UsageError("--k: split must lie strictly between 0 and r = " +
                       std::to_string(cfg.r));
    }
    cfg.partition = {cfg.k, cfg.r - cfg.k};
  }
  Partition p = make_partition(make_cone_spec(1, 1), {1});
  rethrow_as_usage([&] { p = build_partition(cfg); });

  if (cfg.threads < 0) {
    throw UsageError("--threads must be non-negative");
  }

  switch (cfg.subcommand) {
    case Subcommand::kPriors:
      break;
    case Subcommand::kRisk: {
      cfg.t_source = t_text;
      cfg.t = resolve_t(t_text, p);
      rethrow_as_usage([&] { exact_risk(p, cfg.t, cfg.mu, cfg.nu); });
      break;
    }
    case Subcommand::kScan: {
      const bool has_mu = sc_scan->count("--mu") > 0;
      const bool has_list = sc_scan->count("--mu-list") > 0;
      if (has_mu == has_list) {
        throw UsageError("scan needs exactly one of --mu and --mu-list");
      }
      if (has_list) {
        cfg.mu_list = parse_double_list(mu_list_text, "--mu-list");
        if (cfg.mu_list.empty()) {
          throw UsageError("--mu-list must not be empty");
        }
        for (double mu : cfg.mu_list) {
          rethrow_as_usage([&] {
            check_mu_domain(p.cone, mu, "scan (observation shape)");
          });
        }
      } else {
        rethrow_as_usage([&] {
          check_mu_domain(p.cone, cfg.mu, "scan (observation shape)");
        });
      }
      rethrow_as_usage(
          [&] { check_mu_domain(p.cone, cfg.nu, "scan (prediction shape)"); });
      const std::vector<std::string> axes = split(grid_text, ',');
      if (axes.size() != 2) {
        throw UsageError("--grid: expected two axes min:max:points,"
                         "min:max:points");
      }
      const AxisSpec a1 = parse_axis(axes[0], "--grid");
      const AxisSpec a2 = parse_axis(axes[1], "--grid");
      if (a1.points != a2.points) {
        throw UsageError("--grid: axes must use the same number of points, "
                         "got " + std::to_string(a1.points) + " and " +
                         std::to_string(a2.points));
      }
      cfg.grid = GridSpec{a1.min, a1.max, a2.min, a2.max, a1.points};
      rethrow_as_usage([&] { validate_grid_spec(cfg.grid); });
      break;
    }
    case Subcommand::kMc: {
      cfg.t_source = t_text;
      cfg.t = resolve_t(t_text, p);
      if (cfg.mc.n_outer < 1 || cfg.mc.n_inner < 1) {
        throw UsageError("--n-outer and --n-inner must be at least 1");
      }
      rethrow_as_usage([&] { exact_risk(p, cfg.t, cfg.mu, cfg.nu); });
      if (!cfg.xi_path.empty()) load_xi_file(cfg);
      break;
    }
    case Subcommand::kAsympt: {
      cfg.t_source = t_text;
      cfg.t = resolve_t(t_text, p);
      const AxisSpec sweep = parse_axis(sweep_text, "--mu-sweep");
      if (sweep.points < 2) {
        throw UsageError("--mu-sweep: needs at least 2 points");
      }
      if (!(sweep.max > sweep.min)) {
        throw UsageError("--mu-sweep: max must exceed min");
      }
      cfg.sweep = SweepSpec{sweep.min, sweep.max, sweep.points};
      // The exponent window is tightest at the smallest shape; validity
      // there implies validity across the sweep.
      rethrow_as_usage([&] { exact_risk(p, cfg.t, cfg.sweep.min, cfg.nu); });
      break;
    }
    case Subcommand::kSample: {
      rethrow_as_usage(
          [&] { check_mu_domain(p.cone, cfg.mu, "sample (shape)"); });
      if (cfg.count < 1) {
        throw UsageError("--count must be at least 1");
      }
      if (!cfg.xi_path.empty()) load_xi_file(cfg);
      break;
    }
  }
  return cfg;
}

int execute(const RunConfig& cfg, std::ostream& out) {
  if (cfg.show_help) {
    out << cfg.help_text;
    return 0;
  }
  if (!cfg.output_path.empty()) {
    std::ofstream file(cfg.output_path);
    if (!file) {
      throw UsageError("cannot open output path: " + cfg.output_path);
    }
    return dispatch(cfg, file);
  }
  return dispatch(cfg, out);
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_and_validate(args);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  try {
    return execute(cfg, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace wishrisk
