#include "mcvt/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "mcvt/error.hpp"
#include "mcvt/mgbi.hpp"
#include "mcvt/mgpg.hpp"

namespace fs = std::filesystem;

namespace mcvt {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Re-throws with the frame index prepended, keeping the error code.
template <class F>
auto at_frame(int index, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), "frame " + std::to_string(index) + ": " + e.detail());
  }
}

fs::path frame_dir(const fs::path& root, int index) {
  fs::path d = root / format_index("frame_%04d", index);
  fs::create_directories(d);
  return d;
}

void dump_pframe(const fs::path& root, int index, const PFrameDiagnostics& d) {
  const fs::path dir = frame_dir(root, index);
  write_scalar_field_png(d.residual, dir / "residual.png", 0.0, 1.0);
  write_scalar_field_png(d.occlusion, dir / "occlusion.png", 0.0, 1.0);
  write_mask_png(d.raw_mask, dir / "mask_raw.png");
  write_mask_png(d.mask, dir / "mask.png");
  write_mask_png(d.latent_mask, dir / "mask_latent.png");
  write_png(d.predicted_input, dir / "predicted_input.png");
  write_png(d.warped, dir / "warped.png");
}

void dump_bframe(const fs::path& root, int index, const BFrameDiagnostics& d) {
  const fs::path dir = frame_dir(root, index);
  write_scalar_field_png(d.scores.front, dir / "score_front.png", 0.0, 1.0);
  write_scalar_field_png(d.occlusion_front, dir / "occlusion_front.png", 0.0, 1.0);
  write_scalar_field_png(d.occlusion_back, dir / "occlusion_back.png", 0.0, 1.0);
  write_scalar_field_png(d.residual_front, dir / "residual_front.png", 0.0, 1.0);
  write_scalar_field_png(d.residual_back, dir / "residual_back.png", 0.0, 1.0);
  write_png(d.warped_front, dir / "warped_front.png");
  write_png(d.warped_back, dir / "warped_back.png");
}

}  // namespace

const char* to_string(FrameRole role) {
  switch (role) {
    case FrameRole::I: return "I";
    case FrameRole::P: return "P";
    case FrameRole::B: return "B";
  }
  return "?";
}

std::vector<int> GopPlan::key_frames() const {
  std::vector<int> out;
  for (int i = 0; i < n_frames; ++i) {
    if (roles[i] != FrameRole::B) out.push_back(i);
  }
  return out;
}

GopPlan plan_gop(int n_frames, int gop_size) {
  if (n_frames < 1) throw Error(Errc::invalid_argument, "plan_gop: n_frames must be >= 1");
  if (gop_size < 1) throw Error(Errc::invalid_argument, "plan_gop: gop_size must be >= 1");

  GopPlan plan;
  plan.n_frames = n_frames;
  plan.gop_size = gop_size;
  plan.roles.assign(n_frames, FrameRole::B);
  plan.deps.assign(n_frames, {});
  plan.roles[0] = FrameRole::I;
  plan.schedule.push_back(0);

  int prev = 0;
  while (prev < n_frames - 1) {
    const int key = std::min(prev + gop_size, n_frames - 1);
    plan.roles[key] = FrameRole::P;
    plan.deps[key] = {prev};
    plan.schedule.push_back(key);
    for (int j = prev + 1; j < key; ++j) {
      plan.deps[j] = {prev, key};
      plan.schedule.push_back(j);
    }
    prev = key;
  }
  return plan;
}

std::vector<std::pair<int, int>> required_flow_pairs(const GopPlan& plan) {
  std::set<std::pair<int, int>> pairs;
  for (int i = 0; i < plan.n_frames; ++i) {
    if (plan.roles[i] == FrameRole::P) {
      const int ref = plan.deps[i][0];
      pairs.insert({ref, i});
      pairs.insert({i, ref});
    } else if (plan.roles[i] == FrameRole::B) {
      for (int key : plan.deps[i]) {
        pairs.insert({key, i});
        pairs.insert({i, key});
      }
    }
  }
  return {pairs.begin(), pairs.end()};
}

std::string report_to_string(const RunReport& r) {
  nlohmann::ordered_json trace = nlohmann::ordered_json::array();
  for (const auto& [index, role] : r.trace) trace.push_back({{"index", index}, {"role", to_string(role)}});
  auto role = [](const RoleTiming& t) {
    return nlohmann::ordered_json{{"calls", t.calls}, {"seconds", t.seconds}};
  };
  nlohmann::ordered_json j = {
      {"n_frames", r.n_frames},
      {"gop_size", r.gop_size},
      {"generate_full", role(r.generate_full)},
      {"generate_pframe", role(r.generate_pframe)},
      {"interpolate_bframe", role(r.interpolate_bframe)},
      {"backend_inpaint_calls", r.backend_inpaint_calls},
      {"generator_calls", r.generator_calls()},
      {"generator_calls_per_frame", r.generator_calls_per_frame()},
      {"total_seconds", r.total_seconds},
      {"trace", trace},
  };
  return j.dump(2) + "\n";
}

void save_report(const RunReport& report, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::io_failure, "cannot write " + path.string());
  out << report_to_string(report);
}

PipelineResult run_pipeline(const FrameSequence& frames, const FrameSequence& conditions,
                            const FlowSource& flow_src, const GeneratorBackend& backend,
                            const PipelineConfig& cfg, const std::string& prompt,
                            std::uint64_t seed, const RunOptions& options) {
  validate_config(cfg);
  if (conditions.size() != frames.size()) {
    throw Error(Errc::dimension_mismatch, "have " + std::to_string(conditions.size()) +
                                              " conditions for " + std::to_string(frames.size()) +
                                              " frames");
  }
  require_same_size(conditions[0], frames[0], "conditions vs frames");
  if (options.jobs < 1) throw Error(Errc::invalid_argument, "jobs must be >= 1");

  const auto t_start = Clock::now();
  const int n = static_cast<int>(frames.size());
  const GopPlan plan = plan_gop(n, cfg.gop_size);

  RunReport report;
  report.n_frames = n;
  report.gop_size = cfg.gop_size;
  std::vector<std::optional<Frame>> out(n);
  std::mutex trace_mutex;
  auto record = [&](int index) {
    std::lock_guard lock(trace_mutex);
    report.trace.emplace_back(index, plan.roles[index]);
  };

  {
    const auto t0 = Clock::now();
    GenerationRequest req;
    req.mode = GenerationMode::full;
    req.condition = conditions[0];
    req.prompt = prompt;
    req.seed = seed;
    out[0] = at_frame(0, [&] { return generate_full(backend, req); });
    report.generate_full.calls++;
    report.generate_full.seconds += seconds_since(t0);
    record(0);
  }

  std::size_t pos = 1;
  while (pos < plan.schedule.size()) {
    const int key = plan.schedule[pos++];
    const int ref = plan.deps[key][0];

    const auto tp = Clock::now();
    PFrameResult p = at_frame(key, [&] {
      return generate_pframe(*out[ref], frames, conditions[key], ref, key, flow_src, backend, cfg,
                             prompt, seed);
    });
    report.generate_pframe.calls++;
    report.generate_pframe.seconds += seconds_since(tp);
    if (!p.diagnostics.latent_mask.all_ones()) report.backend_inpaint_calls++;
    if (options.diagnostics_dir) dump_pframe(*options.diagnostics_dir, key, p.diagnostics);
    out[key] = std::move(p.frame);
    record(key);

    std::vector<int> bframes;
    while (pos < plan.schedule.size() && plan.roles[plan.schedule[pos]] == FrameRole::B) {
      bframes.push_back(plan.schedule[pos++]);
    }
    if (bframes.empty()) continue;

    const auto tb = Clock::now();
    auto run_one = [&](int j) {
      BFrameResult b = at_frame(j, [&] {
        return interpolate_bframe(*out[ref], *out[key], frames, ref, key, j, flow_src, cfg);
      });
      if (options.diagnostics_dir) dump_bframe(*options.diagnostics_dir, j, b.diagnostics);
      out[j] = std::move(b.frame);
      record(j);
    };

    if (options.jobs == 1 || bframes.size() == 1) {
      for (int j : bframes) run_one(j);
    } else {
      // Each worker pulls the next unclaimed B-frame; every B-frame writes
      // its own slot, so results match sequential execution.
      std::atomic<std::size_t> next{0};
      const int workers = std::min<int>(options.jobs, static_cast<int>(bframes.size()));
      std::vector<std::future<void>> pool;
      for (int w = 0; w < workers; ++w) {
        pool.push_back(std::async(std::launch::async, [&] {
          for (std::size_t k = next++; k < bframes.size(); k = next++) run_one(bframes[k]);
        }));
      }
      for (auto& f : pool) f.wait();
      for (auto& f : pool) f.get();
    }
    report.interpolate_bframe.calls += static_cast<int>(bframes.size());
    report.interpolate_bframe.seconds += seconds_since(tb);
  }

  std::vector<Frame> result;
  result.reserve(n);
  for (int i = 0; i < n; ++i) {
    if (!out[i]) throw Error(Errc::index_order, "frame " + std::to_string(i) + " never produced");
    result.push_back(std::move(*out[i]));
  }
  report.total_seconds = seconds_since(t_start);
  return {FrameSequence(std::move(result), frames.pattern()), std::move(report)};
}

double flow_error(const FrameSequence& input, const FrameSequence& output,
                  const FlowSource& flow_src) {
  if (input.size() != output.size()) {
    throw Error(Errc::dimension_mismatch, "flow_error: sequence lengths " +
                                              std::to_string(input.size()) + " vs " +
                                              std::to_string(output.size()));
  }
  require_same_size(input[0], output[0], "flow_error");
  if (input.size() < 2) return 0.0;

  double total = 0.0;
  for (std::size_t t = 0; t + 1 < input.size(); ++t) {
    const int a = static_cast<int>(t);
    const FlowField fi = get_flow(flow_src, input, a, a + 1);
    const FlowField fo = get_flow(flow_src, output, a, a + 1);
    double sum = 0.0;
    for (int y = 0; y < fi.height(); ++y) {
      for (int x = 0; x < fi.width(); ++x) {
        sum += std::hypot(static_cast<double>(fi.u(x, y)) - fo.u(x, y),
                          static_cast<double>(fi.v(x, y)) - fo.v(x, y));
      }
    }
    total += sum / (static_cast<double>(fi.width()) * fi.height());
  }
  return total / static_cast<double>(input.size() - 1);
}

}  // namespace mcvt
