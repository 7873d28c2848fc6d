#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcvt/config.hpp"
#include "mcvt/flow.hpp"
#include "mcvt/generator.hpp"
#include "mcvt/imageio.hpp"

namespace mcvt {

enum class FrameRole { I, P, B };

const char* to_string(FrameRole role);

struct GopPlan {
  int n_frames = 0;
  int gop_size = 0;
  std::vector<FrameRole> roles;
  std::vector<std::vector<int>> deps;  // I: {}, P: {ref}, B: {front, back}
  std::vector<int> schedule;           // I, then per GoP its P, then its Bs

  // Key frames (I and P) in index order.
  std::vector<int> key_frames() const;
};

// Frame 0 is I; P at g, 2g, ...; when (n-1) % g != 0 the last frame is an
// extra P closing a short GoP. Everything else is B.
GopPlan plan_gop(int n_frames, int gop_size);

// Every directed (source, target) flow pair the pipeline will request,
// sorted and de-duplicated.
std::vector<std::pair<int, int>> required_flow_pairs(const GopPlan& plan);

struct RoleTiming {
  int calls = 0;
  double seconds = 0.0;
};

struct RunReport {
  int n_frames = 0;
  int gop_size = 0;
  RoleTiming generate_full;       // I
  RoleTiming generate_pframe;     // P
  RoleTiming interpolate_bframe;  // B
  int backend_inpaint_calls = 0;  // P-frames whose mask had anything to inpaint
  double total_seconds = 0.0;
  // Completion order of (index, role); dependencies always come first.
  std::vector<std::pair<int, FrameRole>> trace;

  // Diffusion-model invocations: one per I-frame and one per P-frame.
  int generator_calls() const { return generate_full.calls + generate_pframe.calls; }
  double generator_calls_per_frame() const {
    return n_frames > 0 ? static_cast<double>(generator_calls()) / n_frames : 0.0;
  }
};

std::string report_to_string(const RunReport& report);
void save_report(const RunReport& report, const std::filesystem::path& path);

struct RunOptions {
  int jobs = 1;  // B-frame worker count
  // When set, per-frame PNG diagnostics go to <dir>/frame_XXXX/.
  std::optional<std::filesystem::path> diagnostics_dir;
};

struct PipelineResult {
  FrameSequence output;
  RunReport report;
};

PipelineResult run_pipeline(const FrameSequence& frames, const FrameSequence& conditions,
                            const FlowSource& flow_src, const GeneratorBackend& backend,
                            const PipelineConfig& cfg, const std::string& prompt,
                            std::uint64_t seed, const RunOptions& options = {});

// Mean over consecutive pairs of the mean per-pixel Euclidean distance
// between the input flow and the output flow, in pixels.
double flow_error(const FrameSequence& input, const FrameSequence& output,
                  const FlowSource& flow_src);

}  // namespace mcvt
