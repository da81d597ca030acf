// Command-line front end: verification suites, chain evaluation, JSON export,
// and SVG frame rendering.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "scv/json_io.hpp"
#include "scv/svg.hpp"

using namespace scv;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

ParamPoint parse_point(const std::string& text) {
  ParamPoint point;
  std::string token;
  for (char c : text + ",") {
    if (c == ',') {
      if (!token.empty()) point.push_back(Rational::from_string(token));
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token += c;
    }
  }
  return point;
}

uint64_t seed_with_env(uint64_t seed) {
  if (const char* env = std::getenv("SCV_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return seed;
}

int cmd_verify(int dim, const std::string& checks_arg, int grid_den, int random_count,
               uint64_t seed, bool long_running, const std::string& report_path, bool timings) {
  if (dim < 1) {
    std::fprintf(stderr, "error: --dim must be at least 1\n");
    return kExitUsage;
  }
  std::vector<std::string> only;
  if (checks_arg != "all") {
    std::string token;
    for (char c : checks_arg + ",") {
      if (c == ',') {
        if (!token.empty()) only.push_back(token);
        token.clear();
      } else {
        token += c;
      }
    }
    for (const auto& name : only) {
      const auto& names = check_names();
      if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::fprintf(stderr, "error: unknown check '%s'\n", name.c_str());
        return kExitUsage;
      }
    }
  }
  CheckSpec defaults;
  defaults.grid_denominator = grid_den;
  defaults.random_count = random_count;
  defaults.seed = seed;
  defaults.long_running = long_running;
  std::vector<CheckReport> reports;
  try {
    reports = run_all(dim, defaults, only);
  } catch (const ScvError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  bool all_pass = true;
  for (const auto& report : reports) {
    all_pass = all_pass && report.status != "fail";
    std::printf("%-22s n=%d  %-7s %s", report.name.c_str(), report.n, report.status.c_str(),
                report.status == "skipped" ? "" : (report.exact ? "exact" : "sampled"));
    if (report.points > 0 && !report.exact) std::printf(" (%ld points)", report.points);
    if (timings && report.status != "skipped") std::printf("  %.1f ms", report.ms);
    std::printf("\n");
    for (const auto& witness : report.witnesses) {
      std::printf("    witness: %s\n", witness.c_str());
    }
  }
  std::printf("%s\n", all_pass ? "ALL CHECKS PASS" : "FAILURES PRESENT");
  if (!report_path.empty()) {
    ordered_json j = suite_to_json(reports, defaults, dim, timings);
    write_file_atomic(report_path, j.dump(2) + "\n");
  }
  return all_pass ? kExitPass : kExitFail;
}

int cmd_eval(const std::string& id, const std::string& point_text, const std::string& format) {
  Chain chain = resolve_chain(id);
  ParamPoint point = parse_point(point_text);
  if (static_cast<int>(point.size()) != chain.arity) {
    throw ArityMismatch("chain " + id + " has arity " + std::to_string(chain.arity) +
                        ", got a point of arity " + std::to_string(point.size()));
  }
  if (format == "json") {
    ordered_json out = ordered_json::array();
    for (const auto& term : chain.terms) {
      ordered_json entry;
      entry["coeff"] = term.coeff.to_string();
      entry["configuration"] = config_to_json(instantiate(term.cube, point));
      out.push_back(std::move(entry));
    }
    std::printf("%s\n", out.dump(2).c_str());
  } else {
    for (const auto& term : chain.terms) {
      std::printf("%s * %s\n", term.coeff.to_string().c_str(),
                  instantiate(term.cube, point).to_string().c_str());
    }
  }
  return kExitPass;
}

int cmd_export(const std::string& id, const std::string& out_path) {
  Chain chain = resolve_chain(id);
  ordered_json j = chain_to_json(chain);
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::printf("%s", text.c_str());
  } else {
    write_file_atomic(out_path, text);
  }
  return kExitPass;
}

int cmd_render(const std::string& id, int frames, const std::string& out_dir,
               const std::string& project) {
  Chain chain = resolve_chain(id);
  if (chain.arity > 2) {
    throw UnsupportedDim("rendering supports chains of at most two parameters; " + id + " has " +
                         std::to_string(chain.arity));
  }
  if (chain.dim > 2) {
    throw UnsupportedDim("rendering projects at most three ambient coordinates");
  }
  if (frames < 2 && chain.arity > 0) {
    throw ScvError("--frames must be at least 2");
  }
  int cx = 0, cy = 1;
  if (!project.empty()) {
    if (project.size() != 3 || project[1] != ',') throw ScvError("--project expects \"i,j\"");
    cx = project[0] - '0';
    cy = project[2] - '0';
    if (cx < 0 || cy < 0 || cx > chain.dim || cy > chain.dim || cx == cy) {
      throw ScvError("--project coordinates out of range");
    }
  }
  std::filesystem::create_directories(out_dir);
  auto frame_point = [&](int k, int count) {
    return Rational(-1) + Rational(2 * k, count - 1);
  };
  auto render_at = [&](const ParamPoint& t, const std::string& name) {
    std::string caption = id + " at " + detail::point_text(t);
    std::vector<std::pair<std::string, Configuration>> panels;
    for (const auto& term : chain.terms) {
      panels.emplace_back(term.coeff.to_string() + " x", instantiate(term.cube, t));
    }
    write_file_atomic(out_dir + "/" + name + ".svg", render_frame(panels, cx, cy, caption));
  };
  if (chain.arity == 0) {
    render_at({}, "frame000");
  } else if (chain.arity == 1) {
    for (int k = 0; k < frames; ++k) {
      char name[32];
      std::snprintf(name, sizeof(name), "frame%03d", k);
      render_at({frame_point(k, frames)}, name);
    }
  } else {
    int side = 1;
    while (side * side < frames) ++side;
    if (side * side != frames) {
      throw ScvError("--frames must be a perfect square for two-parameter chains");
    }
    for (int a = 0; a < side; ++a) {
      for (int b = 0; b < side; ++b) {
        char name[32];
        std::snprintf(name, sizeof(name), "frame%03d_%03d", a, b);
        render_at({frame_point(a, side), frame_point(b, side)}, name);
      }
    }
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact cubical chains in the little-cubes and Swiss-Cheese operads"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  int dim = 1;
  std::string checks_arg = "all";
  int grid_den = 12;
  int random_count = 200;
  uint64_t seed = 0;
  bool long_running = false;
  bool timings = false;
  std::string report_path;
  verify->add_option("--dim", dim, "largest dimension to verify");
  verify->add_option("--checks", checks_arg, "comma-separated check names, or 'all'");
  verify->add_option("--grid-den", grid_den, "grid denominator");
  verify->add_option("--random", random_count, "random sample count");
  verify->add_option("--seed", seed, "random seed (SCV_SEED overrides)");
  verify->add_flag("--long", long_running, "include long-running dimensions");
  verify->add_flag("--timings", timings, "include timings in output and report");
  verify->add_option("--report", report_path, "write the JSON report here");

  auto* eval = app.add_subcommand("eval", "evaluate a chain at a parameter point");
  std::string eval_id, eval_point, eval_format = "pretty";
  eval->add_option("--chain", eval_id, "chain id")->required();
  eval->add_option("--t", eval_point, "comma-separated rational coordinates");
  eval->add_option("--format", eval_format, "json or pretty")
      ->check(CLI::IsMember({"json", "pretty"}));

  auto* do_export = app.add_subcommand("export", "write a chain as JSON");
  std::string export_id, export_out;
  do_export->add_option("--chain", export_id, "chain id")->required();
  do_export->add_option("--out", export_out, "output path (stdout if omitted)");

  auto* render = app.add_subcommand("render", "render SVG frames of a chain");
  std::string render_id, render_dir = "frames", render_project;
  int render_frames = 8;
  render->add_option("--chain", render_id, "chain id")->required();
  render->add_option("--frames", render_frames, "number of frames");
  render->add_option("--out", render_dir, "output directory");
  render->add_option("--project", render_project, "two ambient coordinates, e.g. 0,1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (verify->parsed()) {
      return cmd_verify(dim, checks_arg, grid_den, random_count, seed_with_env(seed),
                        long_running, report_path, timings);
    }
    if (eval->parsed()) return cmd_eval(eval_id, eval_point, eval_format);
    if (do_export->parsed()) return cmd_export(export_id, export_out);
    if (render->parsed()) return cmd_render(render_id, render_frames, render_dir, render_project);
  } catch (const UnknownChain& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  } catch (const UnknownCheck& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const ScvError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFail;
  }
  return kExitUsage;
}
