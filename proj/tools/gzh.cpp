// gzh: command-line front end. Exit codes: 0 ok, 2 bad input, 3 numerical
// failure, 1 internal error.

#include <cstdlib>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gzh/cli.hpp"

namespace {

using namespace gzh;
using namespace gzh::cli;

struct Common {
  std::string format = "json";
  bool no_meta = false;
  unsigned threads = 0;
};

struct Spectral {
  std::vector<double> s_grid{1.5, 1.25, 1.125};
  i64 truncation = 100000;
  int extrap_degree = 2;
  bool fast = false;
  std::string tail_model = "residue-mean";
  std::string convention = "residue-consistent";
  double max_tail_error = std::numeric_limits<double>::infinity();
  std::string cache_path;
  bool no_cache = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--no-meta", c.no_meta, "Omit timings and cache statistics");
  sub->add_option("--threads", c.threads, "Worker threads (default: all cores)");
}

void add_spectral(CLI::App* sub, Spectral& s) {
  sub->add_option("--s-grid", s.s_grid, "Evaluation points s > 1, decreasing")->delimiter(',');
  sub->add_option("--truncation", s.truncation, "Series truncation M");
  sub->add_option("--extrap-degree", s.extrap_degree, "Extrapolation polynomial degree");
  sub->add_flag("--fast", s.fast, "Halve the truncation M");
  sub->add_option("--tail-model", s.tail_model, "none | empirical-mean | residue-mean");
  sub->add_option("--convention", s.convention, "Sign convention: residue-consistent | literal");
  sub->add_option("--max-tail-error", s.max_tail_error, "Fail when a series error estimate exceeds this");
  sub->add_option("--cache", s.cache_path, "JSON-lines result cache")->envname("GZH_CACHE");
  sub->add_flag("--no-cache", s.no_cache, "Bypass cache reads and writes");
}

SpectralEvalConfig make_config(const Spectral& s, const Common& c) {
  SpectralEvalConfig cfg;
  cfg.s_grid = s.s_grid;
  cfg.truncation = s.fast ? s.truncation / 2 : s.truncation;
  cfg.extrapolation_degree = s.extrap_degree;
  cfg.tail_model = parse_tail_model(s.tail_model);
  cfg.convention = parse_convention(s.convention);
  cfg.max_tail_error = s.max_tail_error;
  cfg.threads = c.threads;
  cfg.validate();
  return cfg;
}

Format format_of(const Common& c) { return c.format == "csv" ? Format::kCsv : Format::kJson; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heights of Heegner points on J0(N)"};
  app.require_subcommand(1);

  Common common;
  Spectral spectral;
  i64 D = 0, N = 0, n_max = 0, n_min = 5;
  std::size_t sample = 0;
  double base_height = 1.0, hst_base = 1.0;
  i64 g_base = 1;
  std::vector<i64> degrees;
  bool skip_direct = false;

  auto* levels = app.add_subcommand("levels", "Heegner levels N <= max");
  levels->add_option("-D", D, "Fundamental discriminant")->required();
  levels->add_option("--max", n_max, "Largest level")->required();
  add_common(levels, common);

  auto* classgroup = app.add_subcommand("classgroup", "Reduced forms of discriminant D");
  classgroup->add_option("-D", D, "Fundamental discriminant")->required();
  add_common(classgroup, common);

  auto* height_cmd = app.add_subcommand("height", "Four-term height breakdown");
  height_cmd->add_option("-D", D, "Fundamental discriminant")->required();
  height_cmd->add_option("-N", N, "Heegner level")->required();
  height_cmd->add_flag("--no-direct", skip_direct, "Skip the s = 1 cross-check of term (i)");
  add_common(height_cmd, common);
  add_spectral(height_cmd, spectral);

  auto* scan_cmd = app.add_subcommand("scan", "Heights over a range of levels");
  scan_cmd->add_option("-D", D, "Fundamental discriminant")->required();
  scan_cmd->add_option("--min", n_min, "Smallest level (>= 5)");
  scan_cmd->add_option("--max", n_max, "Largest level")->required();
  scan_cmd->add_option("--sample", sample, "Evenly sample this many levels (0 = all)");
  add_common(scan_cmd, common);
  add_spectral(scan_cmd, spectral);

  auto* genus_cmd = app.add_subcommand("genus", "Genus of X0(N)");
  genus_cmd->add_option("-N", N, "Squarefree level")->required();
  add_common(genus_cmd, common);

  auto* bound_cmd = app.add_subcommand("bound", "Lang-Silverman constant bound 3h/g");
  bound_cmd->add_option("-D", D, "Fundamental discriminant")->required();
  bound_cmd->add_option("-N", N, "Level")->required();
  add_common(bound_cmd, common);

  auto* scaling_cmd = app.add_subcommand("scaling", "Height and dimension scaling rows");
  scaling_cmd->add_option("--base-height", base_height)->required();
  scaling_cmd->add_option("--g", g_base)->required();
  scaling_cmd->add_option("--hst", hst_base)->required();
  scaling_cmd->add_option("--degrees", degrees)->delimiter(',')->required();
  add_common(scaling_cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Format fmt = format_of(common);
    RunInfo info;
    info.with_meta = !common.no_meta;
    OutputRecord rec;
    std::unique_ptr<SpectralCache> cache;

    auto config_with_cache = [&] {
      SpectralEvalConfig cfg = make_config(spectral, common);
      if (!spectral.no_cache && !spectral.cache_path.empty()) {
        cache = std::make_unique<SpectralCache>(spectral.cache_path);
        cfg.cache = cache.get();
      }
      return cfg;
    };

    if (*levels) {
      rec = cmd_levels(D, n_max);
    } else if (*classgroup) {
      rec = cmd_classgroup(D);
    } else if (*height_cmd) {
      rec = cmd_height(D, N, config_with_cache(), !skip_direct);
    } else if (*scan_cmd) {
      const SpectralEvalConfig cfg = config_with_cache();
      StreamWriter writer(std::cout, fmt);
      writer.begin(scan_record_header(D, n_min, n_max, sample, cfg));
      rec = cmd_scan(D, n_min, n_max, sample, cfg, [&](const Json& row) { writer.row(row); });
      finish_metadata(rec, info, cache.get());
      writer.end(rec.metadata);
      return 0;
    } else if (*genus_cmd) {
      rec = cmd_genus(N);
    } else if (*bound_cmd) {
      rec = cmd_bound(D, N);
    } else if (*scaling_cmd) {
      rec = cmd_scaling(base_height, g_base, hst_base, degrees);
    }
    finish_metadata(rec, info, cache.get());
    write(std::cout, rec, fmt);
    return 0;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
