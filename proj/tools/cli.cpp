#include "cli.hpp"

#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "mcvt/config.hpp"
#include "mcvt/error.hpp"
#include "mcvt/imageio.hpp"
#include "mcvt/mgbi.hpp"
#include "mcvt/mgpg.hpp"
#include "mcvt/pipeline.hpp"
#include "mcvt/warp.hpp"

namespace fs = std::filesystem;

namespace mcvt::cli {
namespace {

std::string http_url(const std::string& rest) {
  if (rest.rfind("//", 0) == 0) return "http:" + rest;
  return "http://" + rest;
}

// PipelineConfig flags for one subcommand; layered as defaults < --config < flags.
struct ConfigFlags {
  std::string config_file;
  PipelineConfig flags;
  std::vector<CLI::Option*> opts;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
    opts = {
        app->add_option("--gop_size,--gop", flags.gop_size, "GoP size"),
        app->add_option("--alpha", flags.alpha, "residual weight in the inpaint mask"),
        app->add_option("--beta", flags.beta, "residual weight in B-frame match scores"),
        app->add_option("--mask_threshold", flags.mask_threshold, "inpaint mask threshold"),
        app->add_option("--temperature,--tau", flags.temperature, "match-score temperature"),
        app->add_option("--blur_sigma", flags.blur_sigma, "mask expansion blur sigma (px)"),
        app->add_option("--blur_kernel_radius", flags.blur_kernel_radius, "blur radius (px)"),
        app->add_option("--latent_factor", flags.latent_factor, "latent downscale factor"),
        app->add_option("--blur_binarize_threshold", flags.blur_binarize_threshold,
                        "re-binarization threshold after blur"),
    };
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : load_config(config_file);
    const PipelineConfig& f = flags;
    if (opts[0]->count()) cfg.gop_size = f.gop_size;
    if (opts[1]->count()) cfg.alpha = f.alpha;
    if (opts[2]->count()) cfg.beta = f.beta;
    if (opts[3]->count()) cfg.mask_threshold = f.mask_threshold;
    if (opts[4]->count()) cfg.temperature = f.temperature;
    if (opts[5]->count()) cfg.blur_sigma = f.blur_sigma;
    if (opts[6]->count()) cfg.blur_kernel_radius = f.blur_kernel_radius;
    if (opts[7]->count()) cfg.latent_factor = f.latent_factor;
    if (opts[8]->count()) cfg.blur_binarize_threshold = f.blur_binarize_threshold;
    return validate_config(cfg);
  }
};

// --flows <dir> is shorthand for --flow flo:<dir>.
struct FlowFlags {
  std::string dir;
  std::string selector;

  void attach(CLI::App* app, const char* default_sel) {
    selector = default_sel;
    app->add_option("--flows", dir, "directory of flow_%04d_%04d.flo files");
    app->add_option("--flow", selector, "flow source: flo:<dir> | block:<size>,<radius> | http:<url>")
        ->capture_default_str();
  }

  FlowSource resolve() const {
    return dir.empty() ? parse_flow_selector(selector) : FlowSource{FileStore{dir}};
  }
};

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::io_failure, dir.string() + ": " + ec.message());
}

}  // namespace

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_config:
    case Errc::invalid_argument:
    case Errc::index_order:
      return kUsage;
    case Errc::missing_directory:
    case Errc::missing_frames:
    case Errc::decode_failure:
    case Errc::io_failure:
    case Errc::file_missing:
    case Errc::bad_magic:
    case Errc::truncated_file:
    case Errc::dimension_mismatch:
      return kIo;
    case Errc::service_unreachable:
    case Errc::timeout:
    case Errc::service_failure:
    case Errc::malformed_response:
      return kService;
    case Errc::invalid_field:
      return kInternal;
  }
  return kInternal;
}

FlowSource parse_flow_selector(const std::string& sel) {
  const auto colon = sel.find(':');
  const std::string kind = sel.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : sel.substr(colon + 1);
  if (kind == "flo" && !rest.empty()) return FileStore{rest};
  if (kind == "block") {
    BlockMatcher bm;
    if (!rest.empty()) {
      const auto comma = rest.find(',');
      try {
        bm.block = std::stoi(rest.substr(0, comma));
        if (comma != std::string::npos) bm.radius = std::stoi(rest.substr(comma + 1));
      } catch (const std::exception&) {
        throw Error(Errc::invalid_argument, "bad block selector '" + sel + "'");
      }
    }
    if (bm.block < 1 || bm.radius < 0) {
      throw Error(Errc::invalid_argument, "block size must be >= 1 and radius >= 0");
    }
    return bm;
  }
  if (kind == "http" && !rest.empty()) return RemoteEstimator(http_url(rest));
  throw Error(Errc::invalid_argument, "bad flow selector '" + sel + "'");
}

GeneratorBackend parse_backend_selector(const std::string& sel) {
  const auto colon = sel.find(':');
  const std::string kind = sel.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : sel.substr(colon + 1);
  if (kind == "mock") {
    return MockStylizer{rest.empty() ? MockTransform::identity : parse_mock_transform(rest)};
  }
  if (kind == "http" && !rest.empty()) return RemoteService{http_url(rest)};
  throw Error(Errc::invalid_argument, "bad backend selector '" + sel + "'");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Motion-guided video-to-video translation"};
  app.require_subcommand(1);
  std::string pattern = kDefaultFramePattern;
  app.add_option("--pattern", pattern, "frame file name pattern")->capture_default_str();

  // translate
  auto* translate = app.add_subcommand("translate", "run the full I/P/B pipeline");
  std::string t_input, t_cond, t_out, t_backend = "mock:identity", t_prompt, t_report, t_diag;
  std::uint64_t t_seed = 0;
  int t_jobs = 1;
  ConfigFlags t_cfg;
  FlowFlags t_flow;
  translate->add_option("--input", t_input, "input frame directory")->required();
  translate->add_option("--conditions", t_cond, "condition frame directory (default: --input)");
  translate->add_option("--out", t_out, "output frame directory")->required();
  translate->add_option("--backend", t_backend, "mock:<transform> | http:<url>")->capture_default_str();
  translate->add_option("--prompt", t_prompt, "text prompt");
  translate->add_option("--seed", t_seed, "generator seed, reused for every call")->capture_default_str();
  translate->add_option("--jobs", t_jobs, "B-frame workers")->capture_default_str()->check(CLI::PositiveNumber);
  translate->add_option("--report", t_report, "run report path (default: <out>.report.json)");
  translate->add_option("--diagnostics", t_diag, "per-frame diagnostic PNG directory");
  t_cfg.attach(translate);
  t_flow.attach(translate, "block:8,4");

  // mask-debug
  auto* mask_debug = app.add_subcommand("mask-debug", "dump P-frame mask diagnostics for one frame");
  std::string m_input, m_out, m_prev;
  int m_frame = 0, m_ref = -1;
  ConfigFlags m_cfg;
  FlowFlags m_flow;
  mask_debug->add_option("--input", m_input, "input frame directory")->required();
  mask_debug->add_option("--frame", m_frame, "P-frame index")->required();
  mask_debug->add_option("--ref", m_ref, "reference index (default: frame - gop_size)");
  mask_debug->add_option("--prev-output", m_prev, "previous output key frame PNG to warp");
  mask_debug->add_option("--out", m_out, "output directory")->required();
  m_cfg.attach(mask_debug);
  m_flow.attach(mask_debug, "block:8,4");

  // interp-debug
  auto* interp_debug = app.add_subcommand("interp-debug", "dump B-frame match-score diagnostics");
  std::string i_input, i_outputs, i_out;
  int i_frame = 0;
  ConfigFlags i_cfg;
  FlowFlags i_flow;
  interp_debug->add_option("--input", i_input, "input frame directory")->required();
  interp_debug->add_option("--frame", i_frame, "B-frame index")->required();
  interp_debug->add_option("--outputs", i_outputs, "directory with generated key frames (default: --input)");
  interp_debug->add_option("--out", i_out, "output directory")->required();
  i_cfg.attach(interp_debug);
  i_flow.attach(interp_debug, "block:8,4");

  // flow
  auto* flow = app.add_subcommand("flow", "estimate flows to .flo files or round-trip a .flo");
  std::string f_input, f_out, f_method = "block:8,4", f_convert;
  std::vector<std::string> f_pairs;
  bool f_all = false;
  ConfigFlags f_cfg;
  flow->add_option("--input", f_input, "input frame directory");
  flow->add_option("--method", f_method, "block:<size>,<radius> | http:<url>")->capture_default_str();
  flow->add_option("--pairs", f_pairs, "source:target pairs")->delimiter(',');
  flow->add_flag("--all", f_all, "every pair the pipeline needs for --gop_size");
  flow->add_option("--convert", f_convert, "read this .flo and rewrite it to --out");
  flow->add_option("--out", f_out, "output directory (or file with --convert)")->required();
  f_cfg.attach(flow);

  // metrics
  auto* metrics = app.add_subcommand("metrics", "optical-flow error between two sequences");
  std::string x_ref, x_cand, x_flow = "block:8,4";
  metrics->add_option("--reference", x_ref, "input sequence directory")->required();
  metrics->add_option("--candidate", x_cand, "generated sequence directory")->required();
  metrics->add_option("--flow", x_flow, "flow source")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*translate) {
      const PipelineConfig cfg = t_cfg.resolve();
      const FrameSequence frames = read_sequence(t_input, pattern);
      const FrameSequence conds = t_cond.empty() ? frames : read_sequence(t_cond, pattern);
      RunOptions opts;
      opts.jobs = t_jobs;
      if (!t_diag.empty()) opts.diagnostics_dir = t_diag;
      PipelineResult r = run_pipeline(frames, conds, t_flow.resolve(),
                                      parse_backend_selector(t_backend), cfg, t_prompt, t_seed, opts);
      write_sequence(r.output, t_out);
      const fs::path report =
          t_report.empty() ? fs::path(fs::path(t_out).lexically_normal().string() + ".report.json")
                           : fs::path(t_report);
      if (report.has_parent_path()) ensure_dir(report.parent_path());
      save_report(r.report, report);
      out << "wrote " << r.output.size() << " frames to " << t_out << " ("
          << r.report.generator_calls() << " generator calls)\n";
    } else if (*mask_debug) {
      const PipelineConfig cfg = m_cfg.resolve();
      const FrameSequence frames = read_sequence(m_input, pattern);
      const int ref = m_ref >= 0 ? m_ref : std::max(0, m_frame - cfg.gop_size);
      const InpaintMaskResult m = build_inpaint_mask(frames, ref, m_frame, m_flow.resolve(), cfg);
      const fs::path dir = m_out;
      ensure_dir(dir);
      write_scalar_field_png(m.residual, dir / "residual.png", 0.0, 1.0);
      write_scalar_field_png(m.occlusion, dir / "occlusion.png", 0.0, 1.0);
      write_mask_png(m.raw_mask, dir / "mask_raw.png");
      write_mask_png(m.mask, dir / "mask.png");
      write_mask_png(m.latent_mask, dir / "mask_latent.png");
      write_png(m.predicted_input, dir / "predicted_input.png");
      const Frame warped = m_prev.empty() ? m.predicted_input
                                          : backward_warp(read_png(m_prev), m.flow_to_current);
      write_png(warped, dir / "warped.png");
      out << "frame " << m_frame << " (ref " << ref << "): " << m.mask.count_zeros()
          << " inpaint pixels\n";
    } else if (*interp_debug) {
      const PipelineConfig cfg = i_cfg.resolve();
      const FrameSequence frames = read_sequence(i_input, pattern);
      const GopPlan plan = plan_gop(static_cast<int>(frames.size()), cfg.gop_size);
      if (i_frame < 0 || i_frame >= plan.n_frames || plan.roles[i_frame] != FrameRole::B) {
        throw Error(Errc::invalid_argument,
                    "frame " + std::to_string(i_frame) + " is not a B-frame for this GoP size");
      }
      const int front = plan.deps[i_frame][0];
      const int back = plan.deps[i_frame][1];
      const FrameSequence refs = i_outputs.empty() ? frames : read_sequence(i_outputs, pattern);
      const BFrameResult b = interpolate_bframe(refs[front], refs[back], frames, front, back,
                                                i_frame, i_flow.resolve(), cfg);
      const fs::path dir = i_out;
      ensure_dir(dir);
      const auto& d = b.diagnostics;
      write_scalar_field_png(d.scores.front, dir / "score_front.png", 0.0, 1.0);
      write_scalar_field_png(d.scores.back, dir / "score_back.png", 0.0, 1.0);
      write_scalar_field_png(d.occlusion_front, dir / "occlusion_front.png", 0.0, 1.0);
      write_scalar_field_png(d.occlusion_back, dir / "occlusion_back.png", 0.0, 1.0);
      write_scalar_field_png(d.residual_front, dir / "residual_front.png", 0.0, 1.0);
      write_scalar_field_png(d.residual_back, dir / "residual_back.png", 0.0, 1.0);
      write_png(d.warped_front, dir / "warped_front.png");
      write_png(d.warped_back, dir / "warped_back.png");
      write_png(b.frame, dir / "blended.png");
      out << "frame " << i_frame << " between " << front << " and " << back << "\n";
    } else if (*flow) {
      if (!f_convert.empty()) {
        write_flo(read_flo(f_convert), f_out);
        out << "wrote " << f_out << "\n";
        return kOk;
      }
      if (f_input.empty()) throw Error(Errc::invalid_argument, "flow needs --input or --convert");
      const FrameSequence frames = read_sequence(f_input, pattern);
      const FlowSource src = parse_flow_selector(f_method);
      std::vector<std::pair<int, int>> pairs;
      if (f_all) {
        pairs = required_flow_pairs(plan_gop(static_cast<int>(frames.size()), f_cfg.resolve().gop_size));
      }
      for (const std::string& p : f_pairs) {
        const auto colon = p.find(':');
        if (colon == std::string::npos) throw Error(Errc::invalid_argument, "bad pair '" + p + "'");
        try {
          pairs.emplace_back(std::stoi(p.substr(0, colon)), std::stoi(p.substr(colon + 1)));
        } catch (const std::exception&) {
          throw Error(Errc::invalid_argument, "bad pair '" + p + "'");
        }
      }
      if (pairs.empty()) throw Error(Errc::invalid_argument, "no pairs: pass --pairs or --all");
      ensure_dir(f_out);
      for (const auto& [a, b] : pairs) {
        write_flo(get_flow(src, frames, a, b), fs::path(f_out) / flow_file_name(kDefaultFlowPattern, a, b));
      }
      out << "wrote " << pairs.size() << " flow files to " << f_out << "\n";
    } else if (*metrics) {
      const FrameSequence a = read_sequence(x_ref, pattern);
      const FrameSequence b = read_sequence(x_cand, pattern);
      out << "flow_error " << flow_error(a, b, parse_flow_selector(x_flow)) << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace mcvt::cli
