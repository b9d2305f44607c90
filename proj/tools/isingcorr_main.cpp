// Command-line front end: boundary spin correlations of the critical
// Z-invariant Ising model for polygonal regions, with an exact-enumeration
// cross-check and the regular-polygon closed forms.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isingcorr/correlate.hpp"
#include "isingcorr/curve.hpp"
#include "isingcorr/oracle.hpp"
#include "isingcorr/region.hpp"
#include "isingcorr/region_io.hpp"

namespace {

using namespace isingcorr;

const std::set<std::string> kValidationCodes = {
    "parse",          "odd-size",       "fixed-point",  "duplicate-index",
    "not-involution", "index-out-of-range", "shape-size", "theta-pair",
    "theta-interleaving", "chain-not-closed", "alternating-ambiguous",
    "lift-failed",    "unpairable-directions", "not-unit", "bad-tolerance",
    "domain",         "bad-sample-points", "matching-mismatch", "bad-n-list"};

int exit_code_for(const Error& e) {
  if (kValidationCodes.count(e.code())) return 2;
  if (e.code() == "spread" || e.code() == "disagreement") return 4;
  return 3;
}

BasisStrategy parse_basis(const std::string& name) {
  if (name == "fourier") return BasisStrategy::fourier;
  if (name == "samples") return BasisStrategy::samples;
  if (name == "derivative") return BasisStrategy::derivative;
  if (name == "recursive") return BasisStrategy::recursive;
  throw Error("parse", "unknown basis " + name);
}

struct CommonOptions {
  std::string basis = "fourier";
  std::string format = "json";
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int placements = 3;
  std::string samples;  // comma-separated t values
};

TolerancePolicy policy_from(const CommonOptions& opt) {
  TolerancePolicy p;
  p.angle_eps = opt.tol;
  p.agreement_eps = std::max(opt.tol, p.agreement_eps);
  return p;
}

std::vector<double> parse_samples(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find(',', pos);
    if (next == std::string::npos) next = csv.size();
    out.push_back(std::stod(csv.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

void print_matrix(const CorrelationMatrix& m, const std::string& format) {
  if (format == "csv")
    std::fputs(correlations_to_csv(m).c_str(), stdout);
  else
    std::printf("%s\n", correlations_to_json(m).c_str());
}

int cmd_correlations(const std::string& file, const CommonOptions& opt) {
  const Region region = load_region_file(file, opt.tol);
  const TolerancePolicy policy = policy_from(opt);
  CorrelationMatrix m;
  if (opt.basis == "samples" && !opt.samples.empty()) {
    const SpanBasis basis = sample_basis(region, parse_samples(opt.samples), policy);
    m = extract_correlations(doubled_from_span(basis, policy), policy);
  } else {
    m = correlations(region, parse_basis(opt.basis), policy);
  }
  print_matrix(m, opt.format);
  return 0;
}

int cmd_regular(int n, const std::string& mode, const CommonOptions& opt) {
  if (n < 1) throw Error("index-out-of-range", "n must be >= 1");
  std::vector<double> closed(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) closed[static_cast<std::size_t>(k - 1)] = regular_correlation(n, 1, k);
  std::vector<double> values = closed;
  if (mode == "pipeline") {
    const TolerancePolicy policy = policy_from(opt);
    const CorrelationMatrix m = correlations(regular_polygon(n), BasisStrategy::fourier, policy);
    for (int k = 1; k <= n; ++k) {
      values[static_cast<std::size_t>(k - 1)] = m(1, k);
      if (std::abs(m(1, k) - closed[static_cast<std::size_t>(k - 1)]) > policy.agreement_eps)
        throw Error("disagreement", "pipeline and closed form differ at k = " + std::to_string(k));
    }
  } else if (mode != "closed") {
    throw Error("parse", "mode must be closed or pipeline");
  }
  if (opt.format == "csv") {
    std::printf("k,correlation\n");
    for (int k = 1; k <= n; ++k)
      std::printf("%d,%s\n", k, format_double(values[static_cast<std::size_t>(k - 1)]).c_str());
  } else {
    std::string out = "{\"n\": " + std::to_string(n) + ", \"row\": [";
    for (int k = 1; k <= n; ++k) {
      if (k > 1) out += ", ";
      out += format_double(values[static_cast<std::size_t>(k - 1)]);
    }
    out += "]}";
    std::printf("%s\n", out.c_str());
  }
  return 0;
}

int cmd_oracle(const std::string& file, const CommonOptions& opt) {
  const Region region = load_region_file(file, opt.tol);
  const TolerancePolicy policy = policy_from(opt);
  const OracleResult oracle = oracle_correlations(region, opt.placements, opt.seed, policy);
  const CorrelationMatrix formula = correlations(region, BasisStrategy::automatic, policy);
  double max_diff = 0;
  int worst_j = 1, worst_k = 1;
  for (int j = 1; j <= region.n(); ++j)
    for (int k = 1; k <= region.n(); ++k)
      if (std::abs(oracle.mean(j, k) - formula(j, k)) > max_diff) {
        max_diff = std::abs(oracle.mean(j, k) - formula(j, k));
        worst_j = j;
        worst_k = k;
      }
  std::printf("oracle: %s\n", correlations_to_json(oracle.mean).c_str());
  std::printf("formula: %s\n", correlations_to_json(formula).c_str());
  std::printf("max_abs_difference: %s\n", format_double(max_diff).c_str());
  std::printf("placement_spread: %s\n", format_double(oracle.spread).c_str());
  if (max_diff > policy.agreement_eps) {
    std::printf("disagreement at (%d,%d): oracle %s vs formula %s\n", worst_j, worst_k,
                format_double(oracle.mean(worst_j, worst_k)).c_str(),
                format_double(formula(worst_j, worst_k)).c_str());
    throw Error("disagreement", "oracle and formula differ");
  }
  return 0;
}

int cmd_limit(double x, std::vector<int> n_list, const CommonOptions&) {
  if (!(x > 0.0 && x < 1.0)) throw Error("domain", "x must lie in (0, 1)");
  if (n_list.empty()) n_list = {64, 128, 256, 512};
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1]) throw Error("bad-n-list", "n values must be ascending");
  const double limit = scaling_limit(x);
  std::printf("n,scaled_correlation,limit,abs_error\n");
  for (int n : n_list) {
    const int q = std::max(1, static_cast<int>(std::floor(n * x)));
    if (q > n) throw Error("domain", "floor(n x) exceeds n");
    const double scaled = n * regular_correlation(n, 1, q);
    std::printf("%d,%s,%s,%s\n", n, format_double(scaled).c_str(), format_double(limit).c_str(),
                format_double(std::abs(scaled - limit)).c_str());
  }
  return 0;
}

int cmd_check(const std::string& file, const CommonOptions& opt) {
  const Region region = load_region_file(file, opt.tol);
  const TolerancePolicy policy = policy_from(opt);
  const int two_n = region.size();
  bool all_pass = true;
  std::string first_failure;
  auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::printf("%s: %s%s%s\n", name.c_str(), ok ? "pass" : "FAIL", detail.empty() ? "" : " ",
                detail.c_str());
    if (!ok && all_pass) first_failure = name;
    all_pass = all_pass && ok;
  };

  {  // the curve annihilates the alternating-sign bilinear form
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> dist(0.0, 3.141592653589793);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto g1 = gamma(region, dist(rng));
      const auto g2 = gamma(region, dist(rng));
      double acc = 0, scale = 0;
      for (int k = 0; k < two_n; ++k) {
        acc += (k % 2 == 0 ? 1.0 : -1.0) * g1[static_cast<std::size_t>(k)] * g2[static_cast<std::size_t>(k)];
        scale = std::max({scale, std::abs(g1[static_cast<std::size_t>(k)]), std::abs(g2[static_cast<std::size_t>(k)])});
      }
      worst = std::max(worst, std::abs(acc) / std::max(scale * scale, 1e-30));
    }
    report("orthogonality", worst <= 1e-10, format_double(worst));
  }

  const bool alternating = is_alternating(region);
  const SpanBasis basis = alternating ? derivative_basis(region) : fourier_basis(region);
  const DoubledMatrix b = doubled_from_span(basis, policy);
  {  // B K = identity
    const RealMatrix prod = multiply(b.entries, k_matrix(region.n()));
    double worst = 0;
    for (std::size_t i = 0; i < prod.rows(); ++i)
      for (std::size_t j = 0; j < prod.cols(); ++j)
        worst = std::max(worst, std::abs(prod(i, j) - (i == j ? 1.0 : 0.0)));
    report("doubled-times-k-identity", worst <= 1e-10, format_double(worst));
  }
  {  // all bases span the same subspace
    double worst = 0;
    if (!alternating) {
      const auto f = fourier_basis(region);
      const auto s = sample_basis(region, default_sample_points(region.n()), policy);
      const auto d = derivative_basis(region);
      worst = std::max(span_residual(f.rows, s.rows), span_residual(f.rows, d.rows));
    } else {
      // the curve itself must lie inside the derivative-basis span
      std::mt19937_64 rng(opt.seed + 7);
      std::uniform_real_distribution<double> dist(0.0, 3.141592653589793);
      ComplexMatrix pts(4, static_cast<std::size_t>(two_n));
      for (std::size_t i = 0; i < 4; ++i) {
        const auto g = gamma(region, dist(rng));
        for (std::size_t j = 0; j < g.size(); ++j) pts(i, j) = g[j];
      }
      ComplexMatrix joint(basis.rows.rows() + 4, static_cast<std::size_t>(two_n));
      for (std::size_t i = 0; i < basis.rows.rows(); ++i)
        for (std::size_t j = 0; j < basis.rows.cols(); ++j) joint(i, j) = basis.rows(i, j);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < pts.cols(); ++j) joint(basis.rows.rows() + i, j) = pts(i, j);
      worst = span_residual(basis.rows, joint);
    }
    report("basis-equivalence", worst <= policy.residual_eps, format_double(worst));
  }
  {  // crossing removal identity on the curve
    const auto ds = descents(region);
    if (ds.empty()) {
      report("crossing-removal-identity", true, "(no crossings)");
    } else {
      const int k = ds.front();
      const GMatrix g = g_matrix(region, k);
      const Region reduced = remove_crossing(region, k);
      std::mt19937_64 rng(opt.seed + 13);
      std::uniform_real_distribution<double> dist(0.0, 3.141592653589793);
      double worst = 0;
      for (int trial = 0; trial < 10; ++trial) {
        const double t = dist(rng);
        const auto lhs = gamma(region, t);
        const auto base = gamma(reduced, t);
        for (int col = 0; col < two_n; ++col) {
          double acc = 0;
          for (int row = 0; row < two_n; ++row)
            acc += base[static_cast<std::size_t>(row)] *
                   g.entries(static_cast<std::size_t>(row), static_cast<std::size_t>(col));
          worst = std::max(worst, std::abs(acc - lhs[static_cast<std::size_t>(col)]));
        }
      }
      report("crossing-removal-identity", worst <= 1e-10, format_double(worst));
    }
  }
  {  // enumeration oracle, when the graph is small enough
    try {
      const OracleResult oracle = oracle_correlations(region, opt.placements, opt.seed, policy);
      const CorrelationMatrix formula = extract_correlations(b, policy);
      double worst = 0;
      for (int j = 1; j <= region.n(); ++j)
        for (int k = 1; k <= region.n(); ++k)
          worst = std::max(worst, std::abs(oracle.mean(j, k) - formula(j, k)));
      report("oracle-agreement", worst <= policy.agreement_eps, format_double(worst));
      report("placement-spread", oracle.spread <= policy.agreement_eps, format_double(oracle.spread));
    } catch (const Error& e) {
      if (e.code() == "too-large")
        report("oracle-agreement", true, "(skipped: region above enumeration bound)");
      else
        throw;
    }
  }

  if (!all_pass) throw Error("disagreement", "invariant failed: " + first_failure);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Boundary spin correlations of the critical Z-invariant Ising model "
      "computed from the region shape, with exact-enumeration cross-checks"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string region_file;
  int regular_n = 2;
  std::string regular_mode = "closed";
  double limit_x = 0.5;
  std::vector<int> n_list;

  auto add_common = [&](CLI::App* cmd, bool with_basis) {
    cmd->add_option("--tol", opt.tol, "angle/agreement tolerance");
    cmd->add_option("--seed", opt.seed, "random seed for placements");
    cmd->add_option("--placements", opt.placements, "number of oracle placements");
    cmd->add_option("--format", opt.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_basis) {
      cmd->add_option("--basis", opt.basis, "span basis: fourier, samples, derivative, recursive")
          ->check(CLI::IsMember({"fourier", "samples", "derivative", "recursive"}));
      cmd->add_option("--samples", opt.samples, "comma-separated sample points in [0, pi)");
    }
  };

  auto* c_corr = app.add_subcommand("correlations",
                                    "correlation matrix of a region file (JSON: tau+theta, "
                                    "vectors, tau+vectors, or theta; 1-based tau)");
  c_corr->add_option("region-file", region_file)->required();
  add_common(c_corr, true);

  auto* c_reg = app.add_subcommand("regular", "first correlation row of the regular 2n-gon");
  c_reg->add_option("n", regular_n)->required();
  c_reg->add_option("--mode", regular_mode, "closed or pipeline")
      ->check(CLI::IsMember({"closed", "pipeline"}));
  add_common(c_reg, false);

  auto* c_oracle = app.add_subcommand("oracle", "compare the formula against exact enumeration");
  c_oracle->add_option("region-file", region_file)->required();
  add_common(c_oracle, false);

  auto* c_limit = app.add_subcommand("limit", "scaled correlations against 1/sin(pi x)");
  c_limit->add_option("x", limit_x)->required();
  c_limit->add_option("--n-list", n_list, "ascending polygon sizes (default 64 128 256 512)");
  add_common(c_limit, false);

  auto* c_check = app.add_subcommand("check", "run the invariant suite on a region file");
  c_check->add_option("region-file", region_file)->required();
  add_common(c_check, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_corr->parsed()) return cmd_correlations(region_file, opt);
    if (c_reg->parsed()) return cmd_regular(regular_n, regular_mode, opt);
    if (c_oracle->parsed()) return cmd_oracle(region_file, opt);
    if (c_limit->parsed()) return cmd_limit(limit_x, n_list, opt);
    if (c_check->parsed()) return cmd_check(region_file, opt);
  } catch (const isingcorr::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
