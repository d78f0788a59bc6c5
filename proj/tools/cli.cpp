#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "dadcert/asdim.hpp"
#include "dadcert/chains.hpp"
#include "dadcert/covers.hpp"
#include "dadcert/oracle.hpp"

namespace dadcert::cli {

namespace fs = std::filesystem;

namespace {

struct Context {
  Config cfg;
  fs::path dir;  // paths in the config are relative to its directory
  bool as_json = false;
  std::ostream& out;
};

fs::path resolve(const Context& ctx, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : ctx.dir / path;
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream o(path);
  if (!o) throw ConfigError("cannot write " + path.string());
  o << j.dump(2) << "\n";
}

void write_output(const Context& ctx, const std::string& key, const json& j) {
  if (ctx.cfg.has("output", key)) write_json(resolve(ctx, ctx.cfg.str("output", key)), j);
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

int report(const Context& ctx, const Certificate& cert, const std::string& summary) {
  write_output(ctx, "certificate", cert.to_json());
  if (ctx.as_json) {
    ctx.out << cert.to_json().dump(2) << "\n";
  } else {
    ctx.out << cert.kind << ": " << verdict(cert.pass);
    if (!summary.empty()) ctx.out << " (" << summary << ")";
    ctx.out << "\n";
    if (!cert.pass) ctx.out << "counterexample: " << cert.witness.dump() << "\n";
    if (!cert.note.empty()) ctx.out << "note: " << cert.note << "\n";
  }
  return cert.pass ? kPass : kFail;
}

Cover load_cover(const Context& ctx, const std::string& key) {
  const auto j = read_json(resolve(ctx, ctx.cfg.str("task", key)));
  try {
    return Cover::from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError("malformed cover: " + std::string(e.what()));
  }
}

std::string cover_summary(const Cover& c) {
  return std::to_string(c.colors.size()) + " colors, F=" + c.f.str() + ", S=" + c.s.str();
}

int cmd_verify(Context& ctx) {
  Cover cover = load_cover(ctx, "cover");
  const int dim = cover.system.dim();
  if (ctx.cfg.has("task", "F")) cover.f = ctx.cfg.subset("task", "F", dim);
  if (ctx.cfg.has("task", "S")) cover.s = ctx.cfg.subset("task", "S", dim);
  return report(ctx, verify_dad_cover(cover), cover_summary(cover));
}

int task_dim(const Context& ctx) {
  return static_cast<int>(ctx.cfg.integer_or("task", "dim", ctx.cfg.integer_or("system", "d", 1)));
}

// Refuses to write a cover whose certificate failed.
int emit_cover(const Context& ctx, const json& cover, const Certificate& cert, const std::string& summary) {
  if (cert.pass) write_output(ctx, "cover", cover);
  return report(ctx, cert, summary);
}

int build_dad_cover(const Context& ctx) {
  const System sys = ctx.cfg.system();
  const FiniteSubset f0 = ctx.cfg.has("task", "F0") ? ctx.cfg.subset("task", "F0", sys.dim()) : ball(sys.dim(), 1);
  Cover input;
  if (ctx.cfg.has("task", "input")) {
    input = load_cover(ctx, "input");
  } else {
    const int colors = static_cast<int>(ctx.cfg.integer_or("task", "colors", sys.dim() + 1));
    if (colors < 1) throw ConfigError("config: colors must be positive");
    const auto sched = scale_schedule(colors - 1, ball(sys.dim(), std::max<int64_t>(f0.radius(), 1)));
    const FiniteSubset& fd = sched.f.back();
    if (sys.model() == Model::odometer && sys.dim() == 1) {
      const int64_t depth = ctx.cfg.integer_or("task", "depth", 0);
      input = odometer_arc_cover(sys, colors, fd, depth);
      if (ctx.cfg.has("task", "depth") && input.colors.front().level > depth) {
        throw ConfigError("a " + std::to_string(colors) + "-color input at F_" + std::to_string(colors - 1) + " = " +
                          fd.str() + " needs depth >= " + std::to_string(input.colors.front().level));
      }
    } else if (sys.model() == Model::sturmian) {
      input = sturmian_marker_cover(sys, colors, fd);
    } else {
      throw ConfigError("no artificial input builder for this system; give [task] input = cover file");
    }
  }
  auto [out, cert] = reduce_cover(input, f0);
  return emit_cover(ctx, out.to_json(), cert, cover_summary(out));
}

int cmd_build(Context& ctx) {
  const auto kind = ctx.cfg.str("task", "kind");
  if (kind == "group-cover") {
    const int dim = task_dim(ctx);
    const int64_t r = ctx.cfg.integer("task", "r");
    const auto cover = grid_cover(dim, r);
    const int64_t bound = control_function(dim, r);
    return emit_cover(ctx, cover.to_json(), verify_group_cover(cover, r, bound),
                      "d=" + std::to_string(dim) + ", r=" + std::to_string(r) + ", R=" + std::to_string(bound));
  }
  if (kind == "gamma-cover") {
    const int dim = task_dim(ctx);
    const auto g = gamma_action_cover(dim, ctx.cfg.subset("task", "F", dim));
    const json cover = {{"group_cover", g.cover.to_json()}, {"F", to_json(g.f)}, {"S", to_json(g.s)}};
    return emit_cover(ctx, cover, verify_gamma_cover(g.cover, g.f, g.s), "F=" + g.f.str() + ", S=" + g.s.str());
  }
  if (kind == "dad-cover") return build_dad_cover(ctx);
  if (kind == "combine") {
    const Cover a = load_cover(ctx, "a"), b = load_cover(ctx, "b");
    const FiniteSubset f =
        ctx.cfg.has("task", "F") ? ctx.cfg.subset("task", "F", a.system.dim()) : ball(a.system.dim(), 1);
    auto [out, cert] = combine_union(a, b, f, ctx.cfg.integer("task", "rA"), ctx.cfg.integer("task", "RA"),
                                     ctx.cfg.integer("task", "rB"), ctx.cfg.integer("task", "RB"));
    return emit_cover(ctx, out.to_json(), cert, cover_summary(out));
  }
  throw ConfigError("config: unknown build kind " + kind);
}

int cmd_components(Context& ctx) {
  const System sys = ctx.cfg.system();
  const auto set = ctx.cfg.clopen(sys, "task");
  if (!set) throw ConfigError("config: [task] needs a set (set, cells or words)");
  const auto f = ctx.cfg.subset("task", "F", sys.dim());
  const auto comp = f_components(sys, *set, f);
  if (ctx.as_json) {
    ctx.out << to_json(sys, comp).dump(2) << "\n";
    return kPass;
  }
  ctx.out << "F-components of " << comp.cell_count() << " cells, F=" << f.str() << "\n";
  const auto names = comp.cell_count() ? describe(sys, comp.cells) : std::vector<std::string>{};
  const char* unbounded = sys.model() == Model::odometer ? "unbounded (wrap)" : "unbounded (no cut)";
  for (size_t i = 0; i < comp.cell_count(); ++i) {
    ctx.out << names[i] << ": component " << comp.component[i] << ", ";
    if (comp.unbounded(i)) {
      ctx.out << unbounded << "\n";
      continue;
    }
    ctx.out << "labels {";
    const auto labels = comp.labels(i);
    for (size_t k = 0; k < labels.size(); ++k) ctx.out << (k ? ", " : "") << labels[k].str();
    ctx.out << "}\n";
  }
  return kPass;
}

// Exhaustive sweeps enumerate 2^cells sets.
constexpr int64_t kSweepMaxCells = 16;
constexpr int64_t kSweepSegment = 6000;

int cmd_oracle(Context& ctx) {
  const System sys = ctx.cfg.system();
  const auto mode = ctx.cfg.str("task", "mode");
  if (mode == "min-colors") {
    const auto model = FiniteQuotientModel::odometer(sys, ctx.cfg.integer("task", "depth"));
    const auto f = ctx.cfg.subset("task", "F", sys.dim()), s = ctx.cfg.subset("task", "S", sys.dim());
    const int cap = static_cast<int>(ctx.cfg.integer_or("task", "cap", 4));
    const auto c = exhaustive_min_colors(model, f, s, cap);
    const json result = {{"mode", mode}, {"points", model.point_count()}, {"F", to_json(f)},
                         {"S", to_json(s)}, {"min_colors", c ? json(*c) : json(nullptr)}};
    write_output(ctx, "certificate", result);
    if (ctx.as_json) ctx.out << result.dump(2) << "\n";
    else ctx.out << "min colors: " << (c ? std::to_string(*c) : "none up to " + std::to_string(cap)) << "\n";
    return c ? kPass : kFail;
  }
  if (mode != "agreement") throw ConfigError("config: oracle mode must be min-colors or agreement");
  const auto f = ctx.cfg.subset("task", "F", sys.dim());
  const int64_t max_level = ctx.cfg.integer("task", "max_level");
  json rows = json::array();
  bool all = true;
  if (!ctx.as_json) ctx.out << "level | sets | agree\n";
  for (int64_t level = 1; level <= max_level; ++level) {
    const int64_t cells = sys.cell_count(level);
    if (cells > kSweepMaxCells) {
      throw GuardError("oracle: sweep at level " + std::to_string(level) + " has " + std::to_string(cells) +
                       " cells (limit " + std::to_string(kSweepMaxCells) + ")");
    }
    const auto model = sys.model() == Model::odometer ? FiniteQuotientModel::odometer(sys, level)
                                                      : FiniteQuotientModel::sturmian(sys, kSweepSegment);
    const auto idx = sys.model() == Model::sturmian ? sys.language().index(level) : nullptr;
    int64_t agree = 0;
    const int64_t sets = int64_t{1} << cells;
    for (int64_t mask = 0; mask < sets; ++mask) {
      ClopenSet b{sys.model(), 0, level, {}};
      for (int64_t c = 0; c < cells; ++c) {
        if (!((mask >> c) & 1)) continue;
        b.codes.push_back(idx ? idx->codes[static_cast<size_t>(c)] : c);
      }
      std::sort(b.codes.begin(), b.codes.end());
      if (compare_components(model, b, f).pass) ++agree;
    }
    all = all && agree == sets;
    rows.push_back({{"level", level}, {"sets", sets}, {"agree", agree}});
    if (!ctx.as_json) ctx.out << level << " | " << sets << " | " << agree << "\n";
  }
  const json result = {{"mode", mode}, {"F", to_json(f)}, {"rows", rows}, {"all_agree", all}};
  write_output(ctx, "certificate", result);
  if (ctx.as_json) ctx.out << result.dump(2) << "\n";
  else ctx.out << (all ? "all agree" : "disagreement found") << "\n";
  return all ? kPass : kFail;
}

int cmd_replay(Context& ctx, const std::string& path) {
  const auto cert = replay(read_json(path));
  if (ctx.as_json) {
    ctx.out << cert.to_json().dump(2) << "\n";
  } else {
    ctx.out << "replay " << cert.params["kind"].get<std::string>() << ": " << verdict(cert.pass) << "\n";
    if (!cert.note.empty()) ctx.out << "note: " << cert.note << "\n";
  }
  return cert.pass ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"dadcert: verified (d, F, S)-covers for odometers and Sturmian shifts"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "print JSON instead of a summary");
  app.fallthrough();
  std::string path;
  auto* verify = app.add_subcommand("verify", "verify a cover file named in the config");
  auto* build = app.add_subcommand("build", "group-cover | gamma-cover | dad-cover | combine");
  auto* components = app.add_subcommand("components", "F-components of a set");
  auto* oracle = app.add_subcommand("oracle", "oracle agreement sweep or minimal-color search");
  auto* replay_cmd = app.add_subcommand("replay", "re-run a certificate and compare");
  for (auto* sub : {verify, build, components, oracle}) sub->add_option("config", path, "config file")->required();
  replay_cmd->add_option("certificate", path, "certificate JSON")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kMalformed;
  }
  try {
    if (replay_cmd->parsed()) {
      Context ctx{Config{}, {}, as_json, out};
      return cmd_replay(ctx, path);
    }
    Context ctx{Config::load(path), fs::path(path).parent_path(), as_json, out};
    if (verify->parsed()) return cmd_verify(ctx);
    if (build->parsed()) return cmd_build(ctx);
    if (components->parsed()) return cmd_components(ctx);
    return cmd_oracle(ctx);
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  }
}

}  // namespace dadcert::cli
