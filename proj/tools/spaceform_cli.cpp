// Command-line front end for the space-form geometry kernel.
//
// Exit codes: 0 on success, 1 when a requested check fails or a projection
// has no unique answer, 2 on usage errors or malformed input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <spaceform/spaceform.hpp>

namespace {

using spaceform::Err;
using spaceform::json;

spaceform::json read_json_input(const std::string& path) {
  std::string text;
  if (path.empty()) {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) spaceform::raise(Err::BadParameter, "cannot open input file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    spaceform::raise(Err::BadParameter, std::string("malformed JSON input: ") + e.what());
  }
}

void write_text_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) spaceform::raise(Err::BadParameter, "cannot open output file " + path);
  out << text;
}

int exit_code_for(const spaceform::Error& e) {
  // A projection that exists but is not unique is a negative geometric
  // answer, not an input mistake.
  return e.code() == Err::NonUniqueProjection ? 1 : 2;
}

struct VerifyOptions {
  std::string model = "S";
  int n = 3;
  int p = 2;
  int q = 1;
  int trials = 1000;
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  int n_probe = 32;
  int parallelism = 0;
  std::string output;
};

int run_verify(const VerifyOptions& opt) {
  spaceform::SuiteParams sp;
  sp.model = {spaceform::model_from_code(opt.model), opt.n};
  sp.p = opt.p;
  sp.q = opt.q;
  sp.trials = opt.trials;
  sp.seed = opt.seed;
  sp.tolerance = opt.tolerance;
  sp.n_probe = opt.n_probe;
  sp.parallelism = opt.parallelism;

  const std::vector<spaceform::TrialReport> reports = spaceform::run_suite(sp);
  std::ostringstream buf;
  spaceform::write_report_lines(buf, spaceform::suite_header(sp), reports);
  write_text_output(opt.output, buf.str());

  int passed = 0;
  double worst = 0.0;
  for (const auto& r : reports) {
    passed += r.pass ? 1 : 0;
    worst = std::max(worst, r.residual);
  }
  std::cerr << "verify: " << passed << "/" << reports.size()
            << " trials passed, worst residual " << worst << "\n";
  return passed == static_cast<int>(reports.size()) ? 0 : 1;
}

int run_project(const std::string& input, const std::string& output) {
  const json in = read_json_input(input);
  const spaceform::PSpace ps =
      spaceform::pspace_from_json(spaceform::detail::require_field(in, "pspace"));
  const spaceform::ModelPoint x =
      spaceform::point_from_json(spaceform::detail::require_field(in, "point"));
  const spaceform::ProjectionResult res = spaceform::metrical_project(ps, x);
  write_text_output(output, spaceform::to_json(res).dump() + "\n");
  return 0;
}

int run_distance(const std::string& input, const std::string& output) {
  const json in = read_json_input(input);
  const spaceform::ModelPoint x =
      spaceform::point_from_json(spaceform::detail::require_field(in, "x"));
  const spaceform::ModelPoint y =
      spaceform::point_from_json(spaceform::detail::require_field(in, "y"));
  write_text_output(output, json(spaceform::distance(x, y)).dump() + "\n");
  return 0;
}

struct CounterexampleOptions {
  int trials = 1000;
  std::uint64_t seed = 7;
  double band = 0.01;
  double min_fraction = 0.99;
  std::string output;
};

int run_counterexample(const CounterexampleOptions& opt) {
  const spaceform::CounterexampleOutcome out =
      spaceform::counterexample_trials(opt.trials, opt.seed, opt.band);

  std::ostringstream buf;
  buf << json{{"version", 1},       {"model", "S"},          {"n", 3},
              {"trials", opt.trials}, {"seed", opt.seed},      {"band", opt.band}}
             .dump()
      << '\n';
  for (const auto& r : out.reports) buf << spaceform::to_json(r).dump() << '\n';
  buf << json{{"non_right_count", out.non_right_count},
              {"non_right_fraction", out.non_right_fraction},
              {"max_hyp_residual", out.max_hyp_residual}}
             .dump()
      << '\n';
  write_text_output(opt.output, buf.str());

  std::cerr << "counterexample: " << out.non_right_count << "/" << opt.trials
            << " triangles non-right (fraction " << out.non_right_fraction
            << "), worst hypothesis residual " << out.max_hyp_residual << "\n";
  const bool ok =
      out.max_hyp_residual <= 1e-7 && out.non_right_fraction >= opt.min_fraction;
  return ok ? 0 : 1;
}

int run_gupta(const std::string& input, const std::string& output, double tolerance) {
  const json in = read_json_input(input);
  const spaceform::ModelPoint x =
      spaceform::point_from_json(spaceform::detail::require_field(in, "x"));
  const spaceform::ModelPoint y =
      spaceform::point_from_json(spaceform::detail::require_field(in, "y"));
  const spaceform::ModelPoint z =
      spaceform::point_from_json(spaceform::detail::require_field(in, "z"));
  const spaceform::ModelPoint u =
      spaceform::point_from_json(spaceform::detail::require_field(in, "u"));
  const spaceform::TrialReport rep = spaceform::verify_quadruple(x, y, z, u, tolerance);
  write_text_output(output, spaceform::to_json(rep).dump() + "\n");
  return rep.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geometry kernel for the three constant-curvature model spaces"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  CLI::App* verify =
      app.add_subcommand("verify", "run seeded perpendicularity trials, write a report");
  verify->add_option("--model", vopt.model, "model kind: S, E or H")
      ->check(CLI::IsMember({"S", "E", "H"}));
  verify->add_option("--n", vopt.n, "model dimension");
  verify->add_option("--p", vopt.p, "dimension of the enclosing subspace");
  verify->add_option("--q", vopt.q, "dimension of the nested subspace");
  verify->add_option("--trials", vopt.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", vopt.seed, "base seed");
  verify->add_option("--tol", vopt.tolerance, "pass/fail residual threshold")
      ->check(CLI::PositiveNumber);
  verify->add_option("--n-probe", vopt.n_probe, "random probe geodesics per trial")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--parallelism", vopt.parallelism, "worker threads (0 = auto)")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--output", vopt.output, "report file (default: stdout)");

  std::string project_input, project_output;
  CLI::App* project =
      app.add_subcommand("project", "nearest-point projection of a point onto a p-space");
  project->add_option("--input", project_input, "JSON input file (default: stdin)");
  project->add_option("--output", project_output, "output file (default: stdout)");

  std::string distance_input, distance_output;
  CLI::App* distance = app.add_subcommand("distance", "geodesic distance between two points");
  distance->add_option("--input", distance_input, "JSON input file (default: stdin)");
  distance->add_option("--output", distance_output, "output file (default: stdout)");

  CounterexampleOptions copt;
  CLI::App* counterexample = app.add_subcommand(
      "counterexample", "spherical trials showing the right angles do not exchange");
  counterexample->add_option("--trials", copt.trials, "number of trials")
      ->check(CLI::PositiveNumber);
  counterexample->add_option("--seed", copt.seed, "base seed");
  counterexample->add_option("--band", copt.band, "right-angle guard band, radians")
      ->check(CLI::PositiveNumber);
  counterexample->add_option("--min-fraction", copt.min_fraction,
                             "required fraction of non-right triangles");
  counterexample->add_option("--output", copt.output, "report file (default: stdout)");

  std::string gupta_input, gupta_output;
  double gupta_tol = 1e-7;
  CLI::App* gupta = app.add_subcommand(
      "gupta", "four-point right-angle check: three right triangles force the fourth");
  gupta->add_option("--input", gupta_input, "JSON input file (default: stdin)");
  gupta->add_option("--output", gupta_output, "output file (default: stdout)");
  gupta->add_option("--tol", gupta_tol, "angle tolerance, radians")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed()) return run_verify(vopt);
    if (project->parsed()) return run_project(project_input, project_output);
    if (distance->parsed()) return run_distance(distance_input, distance_output);
    if (counterexample->parsed()) return run_counterexample(copt);
    if (gupta->parsed()) return run_gupta(gupta_input, gupta_output, gupta_tol);
  } catch (const spaceform::Error& e) {
    std::cout << json{{"error", spaceform::err_name(e.code())}, {"detail", e.what()}}.dump()
              << "\n";
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
