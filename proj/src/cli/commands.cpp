#include "bogo/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fmt/format.h>
#include <ostream>

#include "bogo/channels.hpp"
#include "bogo/error.hpp"
#include "bogo/grid.hpp"
#include "bogo/invariant.hpp"
#include "bogo/protocol.hpp"
#include "bogo/rindler.hpp"

#ifndef BOGO_VERSION
#define BOGO_VERSION "0.0.0"
#endif

namespace bogo::cli {

namespace {

std::vector<double> mode_labels(std::int64_t count) {
  std::vector<double> labels;
  for (std::int64_t i = 1; i <= count; ++i) labels.push_back(static_cast<double>(i));
  return labels;
}

int to_int(std::int64_t v, std::string_view key, std::int64_t lo, std::int64_t hi) {
  if (v < lo || v > hi) throw ValidationError(fmt::format("key '{}': {} is outside [{}, {}]", key, v, lo, hi));
  return static_cast<int>(v);
}

Window window_from(const std::vector<double>& v, std::string_view key, Window::Spacing spacing) {
  if (v.size() != 3) throw ValidationError(fmt::format("key '{}': expected min,max,count", key));
  if (v[2] < 2 || v[2] != std::floor(v[2])) throw ValidationError(fmt::format("key '{}': count must be an integer >= 2", key));
  Window w{v[0], v[1], static_cast<std::size_t>(v[2]), spacing};
  w.validate();
  return w;
}

unsigned thread_count(const RunConfig& cfg) {
  return static_cast<unsigned>(to_int(cfg.integer("threads"), "threads", 0, 4096));
}

CommandOutput verify_commutators(const RunConfig& cfg) {
  const int modes = to_int(cfg.integer("modes"), "modes", 1, 8);
  const int trials = to_int(cfg.integer("trials"), "trials", 0, 1'000'000);
  const double strength = cfg.real("strength");
  const double tolerance = cfg.real("tolerance");
  const std::vector<double> labels = mode_labels(modes);
  const ModeSet shape(labels, 1);
  const CoefficientMatrix l = invariant_coeff(labels, uniform_weights(labels.size()));

  CommandOutput out;
  out.table.columns = {"trial", "seed", "symmetric_residual", "asymmetric_residual"};
  double worst = 0.0, weakest_control = trials > 0 ? INFINITY : 0.0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = channel_seed(cfg.seed(), static_cast<std::size_t>(t));
    const double sym = commutation_residual(l, *random_symmetric_channel(seed, strength, shape).generator);
    const double asym = commutation_residual(l, *random_asymmetric_channel(seed, strength, shape).generator);
    worst = std::max(worst, sym);
    weakest_control = std::min(weakest_control, asym);
    out.table.rows.push_back({static_cast<std::int64_t>(t), seed, sym, asym});
  }

  const int pairs = to_int(cfg.integer("fock-pairs"), "fock-pairs", 0, 100'000);
  double fock_worst = 0.0;
  if (pairs > 0) {
    const ModeSet fock_modes(labels, to_int(cfg.integer("fock-cutoff"), "fock-cutoff", 2, 64));
    std::mt19937_64 rng(cfg.seed());
    for (int p = 0; p < pairs; ++p) {
      const CoefficientMatrix k1 = random_quadratic(rng, labels, 1.0);
      const CoefficientMatrix k2 = random_quadratic(rng, labels, 1.0);
      fock_worst = std::max(fock_worst, fock_bracket_residual(k1, k2, fock_modes));
    }
  }
  out.passed = worst <= tolerance && fock_worst <= cfg.real("fock-tolerance");
  out.table.summary = {{"max_symmetric_residual", worst},
                       {"min_asymmetric_residual", weakest_control},
                       {"max_fock_residual", fock_worst},
                       {"passed", out.passed}};
  if (!out.passed)
    out.message = fmt::format("commutator check failed: symmetric {:.3e}, Fock {:.3e}", worst, fock_worst);
  return out;
}

CommandOutput protocol_run(const RunConfig& cfg) {
  ProtocolConfig pc;
  pc.alphabet.clear();
  for (std::int64_t v : cfg.int_list("alphabet")) pc.alphabet.push_back(to_int(v, "alphabet", -1'000'000, 1'000'000));
  pc.labels = cfg.real_list("labels");
  pc.weights = cfg.real_list("weights");
  pc.family = parse_family(cfg.text("family"));
  pc.ensemble = static_cast<std::size_t>(to_int(cfg.integer("ensemble"), "ensemble", 1, 10'000'000));
  pc.strength = cfg.real("strength");
  pc.cutoff = to_int(cfg.integer("cutoff"), "cutoff", 0, 100'000);
  pc.leakage_budget = cfg.real("leakage-budget");
  pc.seed = cfg.seed();
  pc.threads = thread_count(cfg);
  pc.profile.extra_pairs = to_int(cfg.integer("extra-pairs"), "extra-pairs", 0, 1000);
  pc.profile.decay = cfg.real("decay");
  pc.krylov_tolerance = cfg.real("tolerance");
  pc.expanding.k = cfg.real("k");
  pc.expanding.mass = cfg.real("mass");
  pc.expanding.epsilon = cfg.real("epsilon");
  pc.expanding.sigma = cfg.real("sigma");
  const ProtocolResult result = run_experiment(pc);
  return {protocol_table(result), true, {}};
}

CommandOutput channel_expanding(const RunConfig& cfg) {
  const double sigma = cfg.real("sigma");
  const double ode_tol = cfg.real("ode-tolerance");
  const double agreement = cfg.real("agreement");
  const double canonical_tol = cfg.real("canonical-tolerance");
  CommandOutput out;
  out.table.columns = {"k",           "mass",         "epsilon",            "sigma",
                       "omega_in",    "omega_out",    "alpha",              "beta",
                       "oracle_alpha", "oracle_beta", "canonical_residual", "oracle_difference",
                       "xi",          "channel_difference"};
  double worst_canonical = 0.0, worst_oracle = 0.0, worst_channel = 0.0;
  for (double k : cfg.real_list("k"))
    for (double m : cfg.real_list("mass"))
      for (double eps : cfg.real_list("epsilon")) {
        const auto [w_in, w_out] = rw_frequencies(k, m, eps);
        const SectorCoefficients closed = rw_coefficients(k, m, eps, sigma);
        const ModeOracle oracle = rw_mode_oracle(k, m, eps, sigma, ode_tol);
        const double oa = std::abs(oracle.alpha), ob = std::abs(oracle.beta);
        const double canonical = std::abs(oa * oa - ob * ob - 1.0);
        const double oracle_diff = std::max(std::abs(oa - closed.alpha), std::abs(ob - closed.beta));
        const ChannelSpec channel = rw_channel(k, m, eps, sigma);
        const BogolyubovMap built = bogoliubov_of(*channel.generator);
        const BogolyubovMap expected = two_field_map(*channel.bogomap);
        const double channel_diff = std::max((built.alpha - expected.alpha).cwiseAbs().maxCoeff(),
                                             (built.beta - expected.beta).cwiseAbs().maxCoeff());
        const double xi = channel.generator->block_c()(0, 1).imag();
        worst_canonical = std::max(worst_canonical, canonical);
        worst_oracle = std::max(worst_oracle, oracle_diff);
        worst_channel = std::max(worst_channel, channel_diff);
        out.table.rows.push_back({k, m, eps, sigma, w_in, w_out, closed.alpha, closed.beta, oa, ob, canonical,
                                  oracle_diff, xi, channel_diff});
      }
  out.passed = worst_canonical <= canonical_tol && worst_oracle <= agreement && worst_channel <= agreement;
  out.table.summary = {{"max_canonical_residual", worst_canonical},
                       {"max_oracle_difference", worst_oracle},
                       {"max_channel_difference", worst_channel},
                       {"passed", out.passed}};
  if (!out.passed)
    out.message = fmt::format("expanding-universe check failed: canonical {:.3e}, oracle {:.3e}, channel {:.3e}",
                              worst_canonical, worst_oracle, worst_channel);
  return out;
}

CommandOutput channel_rindler(const RunConfig& cfg) {
  const double a = cfg.real("acceleration");
  const std::string spacing_name = cfg.text("k-spacing");
  if (spacing_name != "linear" && spacing_name != "log")
    throw ValidationError(fmt::format("key 'k-spacing': expected linear or log, got '{}'", spacing_name));
  const Window::Spacing spacing = spacing_name == "log" ? Window::Spacing::logarithmic : Window::Spacing::linear;
  const Window split_l = window_from(cfg.real_list("split-l-window"), "split-l-window", Window::Spacing::logarithmic);
  const RindlerKernel kernel{a, window_from(cfg.real_list("k-window"), "k-window", spacing), split_l};
  const std::vector<double> samples = cfg.real_list("l-samples");

  const ConstraintReport report = rindler_constraints(kernel, samples);
  CommandOutput out;
  out.table.columns = {"l", "p", "first_re", "first_im", "first_relative", "second_re", "second_im", "second_relative"};
  const auto n = static_cast<Eigen::Index>(samples.size());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double scale = std::sqrt(report.diagonal[static_cast<std::size_t>(i)] * report.diagonal[static_cast<std::size_t>(j)]);
      out.table.rows.push_back({samples[static_cast<std::size_t>(i)], samples[static_cast<std::size_t>(j)],
                                report.first(i, j).real(), report.first(i, j).imag(),
                                std::abs(report.first(i, j)) / scale, report.second(i, j).real(),
                                report.second(i, j).imag(), std::abs(report.second(i, j)) / scale});
    }

  const RindlerKernel split_kernel{a, window_from(cfg.real_list("split-k-window"), "split-k-window", Window::Spacing::linear),
                                   split_l};
  const MinkowskiModes mink = minkowski_modes(split_kernel);
  const RegionalSplit split =
      regional_split(invariant_coeff(mink.labels, uniform_weights(mink.labels.size())), split_kernel);
  const double width = cfg.real("grid-width");
  const GridSpec grid{1, cfg.real("grid-spacing"), 6.0 * width};

  out.table.summary = {{"off_diagonal_max", report.off_diagonal_max},
                       {"second_max", report.second_max},
                       {"refinement_change", report.refinement_change},
                       {"window_weight_I", split.first.window_weight},
                       {"window_weight_II", split.second.window_weight},
                       {"vacuum_expectation_I", split.first.form.scalar_part().real()}};
  double worst_split = 0.0;
  for (std::int64_t lam64 : cfg.int_list("lambda")) {
    const int lambda = to_int(lam64, "lambda", -1000, 1000);
    const SlotMoments moments =
        replicate_moments(grid_pair_moments(eigenfunction_grid(lambda, width, grid)), mink.labels.size());
    const double one = expectation_from_moments(split.first.form, moments).real();
    const double two = expectation_from_moments(split.second.form, moments).real();
    const double expected = lambda * split.first.window_weight;
    const double rel = expected == 0.0 ? std::abs(one) : std::abs(one - expected) / std::abs(expected);
    worst_split = std::max(worst_split, rel);
    out.table.summary.emplace_back(fmt::format("lambda_{}_expectation_I", lambda), one);
    out.table.summary.emplace_back(fmt::format("lambda_{}_expectation_II", lambda), two);
    out.table.summary.emplace_back(fmt::format("lambda_{}_relative_error_I", lambda), rel);
  }
  out.passed = report.off_diagonal_max <= cfg.real("off-diagonal-tolerance") &&
               report.second_max <= cfg.real("second-tolerance") && worst_split <= cfg.real("split-tolerance");
  out.table.summary.emplace_back("passed", out.passed);
  if (!out.passed)
    out.message = fmt::format("Rindler check failed: off-diagonal {:.3e}, second {:.3e}, split {:.3e}",
                              report.off_diagonal_max, report.second_max, worst_split);
  return out;
}

CommandOutput eigenstate_grid_check(const RunConfig& cfg) {
  const double width = cfg.real("width");
  const double h = cfg.real("spacing");
  const GridSpec coarse{1, h, cfg.real("extent-widths") * width};
  const GridSpec fine{1, 0.5 * h, coarse.extent};
  const double r0 = cfg.real("exclusion") * width;
  const bool refine = cfg.boolean("refine");
  const double tolerance = cfg.real("tolerance");
  const std::vector<double> w = {1.0};
  CommandOutput out;
  out.table.columns = {"lambda", "spacing", "residual", "refined_residual", "ratio"};
  double worst = 0.0, lo = INFINITY, hi = 0.0;
  for (std::int64_t lam64 : cfg.int_list("lambda")) {
    const int lambda = to_int(lam64, "lambda", -1000, 1000);
    const double r = eigen_residual(eigenfunction_grid(lambda, width, coarse), lambda, w, r0);
    double rf = NAN, ratio = NAN;
    if (refine) {
      rf = eigen_residual(eigenfunction_grid(lambda, width, fine), lambda, w, r0);
      ratio = r / rf;
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    worst = std::max(worst, r);
    out.table.rows.push_back({static_cast<std::int64_t>(lambda), h, r, rf, ratio});
  }
  out.passed = worst <= tolerance && (!refine || (lo >= 3.5 && hi <= 4.5));
  out.table.summary = {{"max_residual", worst}, {"min_ratio", refine ? lo : NAN}, {"max_ratio", refine ? hi : NAN},
                       {"passed", out.passed}};
  if (!out.passed)
    out.message = fmt::format("grid eigenfunction check failed: residual {:.3e}, ratios [{:.3f}, {:.3f}]", worst, lo, hi);
  return out;
}

CommandOutput spectrum_check_command(const RunConfig& cfg) {
  const int channels = to_int(cfg.integer("channels"), "channels", 0, 100'000);
  const ChannelFamily family = parse_family(cfg.text("family"));
  if (family == ChannelFamily::expanding)
    throw ValidationError("key 'family': spectrum-check uses identity, symmetric or asymmetric channels");
  const double strength = cfg.real("strength");
  const ModeSet modes(cfg.real_list("labels"), to_int(cfg.integer("cutoff"), "cutoff", 1, 1000));
  const int working = to_int(cfg.integer("working-cutoff"), "working-cutoff", modes.cutoff(), 100'000);
  const double tolerance = cfg.real("tolerance");
  const double ktol = cfg.real("krylov-tolerance");
  const std::vector<double> weights = uniform_weights(modes.mode_count());

  CommandOutput out;
  out.table.columns = {"channel_id", "seed", "evolved_difference", "transformed_difference", "leakage"};
  double worst_evolved = 0.0, worst_transformed = 0.0;
  for (int c = 0; c < channels; ++c) {
    const std::uint64_t seed = channel_seed(cfg.seed(), static_cast<std::size_t>(c));
    const ChannelSpec channel = family == ChannelFamily::asymmetric
                                    ? random_asymmetric_channel(seed, strength, modes)
                                    : random_symmetric_channel(seed, family == ChannelFamily::identity ? 0.0 : strength, modes);
    const SpectrumComparison cmp = spectrum_check(channel, modes, weights, working, ktol);
    worst_evolved = std::max(worst_evolved, cmp.evolved_difference);
    worst_transformed = std::max(worst_transformed, cmp.transformed_difference);
    out.table.rows.push_back({static_cast<std::int64_t>(c), seed, cmp.evolved_difference, cmp.transformed_difference,
                              cmp.max_leakage});
  }
  out.passed = worst_evolved <= tolerance && worst_transformed <= tolerance;
  out.table.summary = {{"max_evolved_difference", worst_evolved},
                       {"max_transformed_difference", worst_transformed},
                       {"passed", out.passed}};
  if (!out.passed)
    out.message = fmt::format("spectrum check failed: evolved {:.3e}, transformed {:.3e}", worst_evolved, worst_transformed);
  return out;
}

}  // namespace

CommandOutput run_subcommand(const RunConfig& config) {
  const std::string& s = config.subcommand;
  if (s == "verify-commutators") return verify_commutators(config);
  if (s == "protocol-run") return protocol_run(config);
  if (s == "channel-expanding") return channel_expanding(config);
  if (s == "channel-rindler") return channel_rindler(config);
  if (s == "eigenstate-grid-check") return eigenstate_grid_check(config);
  if (s == "spectrum-check") return spectrum_check_command(config);
  throw ValidationError(fmt::format("unknown subcommand '{}'", s));
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Encode integers in cross-field correlations and decode them after Bogolyubov channels.", "bogochannel"};
  app.set_version_flag("--version", BOGO_VERSION);
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file with [subcommand] sections");

  // Every schema key becomes a --key option; only options actually given
  // override the file and defaults.
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> global_opts;
  for (const OptionSpec& o : global_options())
    global_opts[o.key] = app.add_option("--" + o.key, storage["/" + o.key], o.help + " [" + o.default_value + "]");
  std::map<std::string, std::map<std::string, CLI::Option*>> sub_opts;
  const std::map<std::string, std::string> about = {
      {"verify-commutators", "check [L, H] = 0 for random symmetric generators and its failure for asymmetric ones"},
      {"protocol-run", "send eigenvalues through an ensemble of channels and decode them"},
      {"channel-expanding", "expanding-universe channel: closed form, ODE oracle and two-field map"},
      {"channel-rindler", "Minkowski-Rindler kernel: canonical constraints and the regional split of L"},
      {"eigenstate-grid-check", "finite-difference residual of grid eigenfunctions of L"},
      {"spectrum-check", "closed-sector spectrum of L before and after a channel"},
  };
  for (const std::string& name : subcommand_names()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    for (const OptionSpec& o : subcommand_options(name))
      sub_opts[name][o.key] = sub->add_option("--" + o.key, storage[name + "/" + o.key], o.help + " [" + o.default_value + "]");
  }

  if (argc <= 1) {
    err << app.help();
    return 1;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  std::string subcommand;
  for (const std::string& name : subcommand_names())
    if (app.got_subcommand(name)) subcommand = name;

  try {
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : global_opts)
      if (opt->count() > 0) flags[key] = storage["/" + key];
    for (const auto& [key, opt] : sub_opts[subcommand])
      if (opt->count() > 0) flags[key] = storage[subcommand + "/" + key];

    std::optional<ConfigFile> file;
    if (!config_path.empty()) file = load_config(config_path);
    // The environment is the fallback for the thread cap: below flags and file.
    const bool file_sets_threads = file && (file->sections[""].contains("threads") ||
                                            (file->sections.contains(subcommand) && file->sections[subcommand].contains("threads")));
    if (const char* env = std::getenv("BOGOCHANNEL_THREADS"); env && !flags.contains("threads") && !file_sets_threads)
      flags["threads"] = env;

    const RunConfig config = resolve_config(subcommand, file ? &*file : nullptr, flags);
    const CommandOutput result = run_subcommand(config);
    emit(result.table, config, out);
    if (!result.passed) {
      err << "check failed: " << result.message << "\n";
      return 2;
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bogo::cli
