#include "bps/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bps/certify.hpp"
#include "bps/errors.hpp"
#include "bps/report.hpp"
#include "bps/spectral.hpp"
#include "bps/state.hpp"
#include "bps/state_file.hpp"

namespace bps {

namespace {

constexpr std::size_t kMaxDefaultSize = 4096;
constexpr double kDefaultTailGoal = 1e-8;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::size_t> natural_len(const SequenceSpec& seq) {
  if (const auto* ex = std::get_if<ExplicitSeq>(&seq)) return ex->values.size();
  return std::nullopt;
}

struct NaturalDims {
  std::optional<std::size_t> rows, cols;  // nullopt = infinite axis
};

NaturalDims natural_dims(const CoefficientSource& src) {
  if (const auto* d = std::get_if<DenseFinite>(&src)) return {d->rows, d->cols};
  if (const auto* o = std::get_if<OuterProduct>(&src))
    return {natural_len(o->x_seq), natural_len(o->y_seq)};
  if (const auto* s = std::get_if<SchmidtDiagonal>(&src)) {
    auto n = natural_len(s->coeffs);
    return {n, n};
  }
  return {std::nullopt, std::nullopt};
}

// Smallest square window (capped) whose certified tail bound meets the goal;
// finite axes stop growing at their natural size.
std::pair<std::size_t, std::size_t> default_truncation(const CoefficientSource& src) {
  const NaturalDims nat = natural_dims(src);
  auto dims = [&](std::size_t s) {
    return std::make_pair(std::min(s, nat.rows.value_or(kMaxDefaultSize)),
                          std::min(s, nat.cols.value_or(kMaxDefaultSize)));
  };
  if (nat.rows && nat.cols)
    return {std::min(*nat.rows, kMaxDefaultSize), std::min(*nat.cols, kMaxDefaultSize)};

  std::size_t lo = 1, hi = kMaxDefaultSize;
  auto good = [&](std::size_t s) {
    auto [n, m] = dims(s);
    return analytic_tail_bound(src, n, m) <= kDefaultTailGoal;
  };
  if (!good(hi)) return dims(hi);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (good(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return dims(lo);
}

CoefficientSource load_validated(const std::string& path, double mass_tol, std::ostream& err) {
  const CoefficientSource src = parse_state_file(read_file(path));
  const ValidationReport rep = validate_source(src, mass_tol);
  if (!rep.passed)
    throw Error("normalization failure: total mass " + fmt17(rep.total_mass) +
                " is not within " + std::to_string(mass_tol) + " of 1");
  (void)err;
  return src;
}

struct AnalyzeArgs {
  std::string file;
  std::size_t rows = 0, cols = 0;  // 0 = pick automatically
  double delta = kDefaultDelta;
  double tol = kDefaultSigmaTol;
  double mass_tol = kDefaultMassTol;
  std::string format = "text";
  bool full = false;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out, std::ostream& err) {
  const CoefficientSource src = load_validated(a.file, a.mass_tol, err);
  auto [n, m] = default_truncation(src);
  if (a.rows) n = a.rows;
  if (a.cols) m = a.cols;
  const TruncatedState st = truncate(src, n, m);
  const Analysis analysis = analyze(st, a.delta, a.tol);
  out << emit_report(analysis, a.format == "json" ? ReportFormat::Json : ReportFormat::Text,
                     a.full);
  return analysis.verdict.kind == VerdictKind::Inconclusive ? 2 : 0;
}

int cmd_profile(const std::string& file, const std::vector<std::size_t>& sizes,
                double mass_tol, std::ostream& out, std::ostream& err) {
  const CoefficientSource src = load_validated(file, mass_tol, err);
  const auto profile = convergence_profile(src, sizes);
  out << "# n tail_bound sigma...\n";
  for (const auto& entry : profile) {
    out << entry.n << " " << fmt17(entry.tail_op_bound);
    const std::size_t count = std::min<std::size_t>(entry.singular_values.size(), 16);
    for (std::size_t k = 0; k < count; ++k) out << " " << fmt17(entry.singular_values[k]);
    out << "\n";
  }
  return 0;
}

int cmd_validate(const std::string& file, double mass_tol, std::ostream& out,
                 std::ostream& err) {
  const CoefficientSource src = parse_state_file(read_file(file));
  const ValidationReport rep = validate_source(src, mass_tol);
  if (!rep.passed)
    throw Error("normalization failure: total mass " + fmt17(rep.total_mass) +
                " is not within " + std::to_string(mass_tol) + " of 1");
  (void)err;
  out << "ok: " << describe_source(src) << ", total mass " << fmt17(rep.total_mass) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bipartite pure-state separability analyzer"};
  app.require_subcommand(1);

  AnalyzeArgs aa;
  CLI::App* analyze_cmd = app.add_subcommand(
      "analyze", "classify a state file as separable-within-delta or certified-entangled");
  analyze_cmd->add_option("file", aa.file, "state file (bps 1 format)")->required();
  analyze_cmd->add_option("--rows", aa.rows, "truncation rows (default: automatic)");
  analyze_cmd->add_option("--cols", aa.cols, "truncation cols (default: automatic)");
  analyze_cmd->add_option("--delta", aa.delta, "separability radius (default 1e-6)");
  analyze_cmd->add_option("--tol", aa.tol, "entanglement tolerance floor (default 1e-9)");
  analyze_cmd->add_option("--mass-tol", aa.mass_tol, "normalization tolerance (default 1e-9)");
  analyze_cmd->add_option("--format", aa.format, "report format (default text)")
      ->check(CLI::IsMember({"text", "json"}));
  analyze_cmd->add_flag("--full", aa.full, "list all singular values");

  std::string profile_file;
  std::vector<std::size_t> profile_sizes;
  double profile_mass_tol = kDefaultMassTol;
  CLI::App* profile_cmd =
      app.add_subcommand("profile", "singular spectra and tail bounds at increasing sizes");
  profile_cmd->add_option("file", profile_file, "state file")->required();
  profile_cmd->add_option("--sizes", profile_sizes, "comma-separated square sizes")
      ->required()
      ->delimiter(',');
  profile_cmd->add_option("--mass-tol", profile_mass_tol, "normalization tolerance");

  std::string validate_file;
  double validate_mass_tol = kDefaultMassTol;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "check structure and normalization of a state file");
  validate_cmd->add_option("file", validate_file, "state file")->required();
  validate_cmd->add_option("--mass-tol", validate_mass_tol, "normalization tolerance");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bps");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (analyze_cmd->parsed()) return cmd_analyze(aa, out, err);
    if (profile_cmd->parsed())
      return cmd_profile(profile_file, profile_sizes, profile_mass_tol, out, err);
    return cmd_validate(validate_file, validate_mass_tol, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace bps
