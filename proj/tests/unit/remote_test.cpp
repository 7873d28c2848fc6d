// Wire-level tests of the HTTP clients against an in-process fake service.

#include <atomic>
#include <chrono>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "base64.hpp"
#include "mcvt/error.hpp"
#include "mcvt/flow.hpp"
#include "mcvt/generator.hpp"
#include "mcvt/imageio.hpp"
#include "synthetic.hpp"

namespace mcvt {
namespace {

using nlohmann::json;

class FakeService {
 public:
  FakeService() {
    server_.Post("/v1/generate", [this](const httplib::Request& req, httplib::Response& res) {
      ++generate_calls;
      last_request = json::parse(req.body);
      if (!last_request.contains("condition_png_b64")) {
        res.status = 400;
        res.set_content(R"({"error":"missing condition_png_b64"})", "application/json");
        return;
      }
      if (mode == Mode::garbage) {
        res.set_content("<html>", "text/html");
        return;
      }
      if (mode == Mode::slow) std::this_thread::sleep_for(std::chrono::milliseconds(600));
      const auto png = *detail::base64_decode(last_request["condition_png_b64"].get<std::string>());
      Frame cond = decode_png(png);
      if (mode == Mode::wrong_size) cond = Frame::filled(3, 3, 0.f);
      std::vector<float> inv(cond.data().begin(), cond.data().end());
      for (float& v : inv) v = 1.f - v;
      const Frame out(cond.width(), cond.height(), inv);
      res.set_content(json{{"frame_png_b64", detail::base64_encode(encode_png(out))}}.dump(),
                      "application/json");
    });
    server_.Post("/v1/flow", [this](const httplib::Request& req, httplib::Response& res) {
      const int now = ++in_flight;
      int seen = max_in_flight.load();
      while (now > seen && !max_in_flight.compare_exchange_weak(seen, now)) {
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(30));
      const json body = json::parse(req.body);
      const FlowField f = FlowField::constant(body["width"], body["height"], 1.5f, -2.f);
      res.set_content(json{{"flow_b64", detail::base64_encode(flow_to_le_bytes(f))}}.dump(),
                      "application/json");
      --in_flight;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  enum class Mode { invert, garbage, slow, wrong_size };
  Mode mode = Mode::invert;
  std::atomic<int> generate_calls{0};
  std::atomic<int> in_flight{0};
  std::atomic<int> max_in_flight{0};
  json last_request;

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

GenerationRequest request(const Frame& cond) {
  GenerationRequest r;
  r.condition = cond;
  r.prompt = "x";
  r.seed = 7;
  return r;
}

TEST(Base64, KnownVectors) {
  const std::string s = "foobar";
  const std::vector<std::uint8_t> b(s.begin(), s.end());
  for (std::size_t n = 0; n <= b.size(); ++n) {
    const std::span<const std::uint8_t> part(b.data(), n);
    const std::string enc = detail::base64_encode(part);
    static const char* const kExpect[] = {"", "Zg==", "Zm8=", "Zm9v", "Zm9vYg==", "Zm9vYmE=", "Zm9vYmFy"};
    EXPECT_EQ(enc, kExpect[n]);
    EXPECT_EQ(*detail::base64_decode(enc), std::vector<std::uint8_t>(part.begin(), part.end()));
  }
  EXPECT_FALSE(detail::base64_decode("abc").has_value());
  EXPECT_FALSE(detail::base64_decode("a!c=").has_value());
}

TEST(RemoteGenerator, FullRequestFollowsWireContract) {
  FakeService svc;
  const Frame cond = test::textured_frame(12, 10, 0);
  const RemoteService backend{svc.url()};
  const Frame a = generate_full(backend, request(cond));
  const Frame b = generate_full(backend, request(cond));
  EXPECT_EQ(a, b);
  EXPECT_FLOAT_EQ(a.at(2, 3, 1), (255 - quantize_unit(cond.at(2, 3, 1))) / 255.f);
  const json& r = svc.last_request;
  EXPECT_EQ(r["mode"], "full");
  EXPECT_EQ(r["seed"], 7);
  EXPECT_EQ(r["steps"], 20);
  EXPECT_EQ(r["width"], 12);
  EXPECT_EQ(r["height"], 10);
  EXPECT_FALSE(r.contains("mask_b64"));
}

TEST(RemoteGenerator, InpaintCarriesLatentMaskAndKeepsPixels) {
  FakeService svc;
  const Frame cond = test::textured_frame(16, 16, 0);
  const Frame base = test::textured_frame(16, 16, 40);
  GenerationRequest req = request(cond);
  req.mode = GenerationMode::inpaint;
  req.base = base;
  req.latent_mask = BinaryMask(2, 2, {1, 0, 1, 1});
  req.latent_factor = 8;
  const Frame out = generate_inpaint(RemoteService{svc.url()}, req);
  const json& r = svc.last_request;
  EXPECT_EQ(r["mode"], "inpaint");
  EXPECT_EQ(r["latent_factor"], 8);
  EXPECT_EQ(*detail::base64_decode(r["mask_b64"].get<std::string>()), (std::vector<std::uint8_t>{1, 0, 1, 1}));
  EXPECT_TRUE(r.contains("base_png_b64"));
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      if (!(x >= 8 && y < 8)) ASSERT_EQ(out.at(x, y, 0), base.at(x, y, 0));

  req.latent_mask = BinaryMask::filled(2, 2, 1);
  const int before = svc.generate_calls;
  EXPECT_EQ(generate_inpaint(RemoteService{svc.url()}, req), base);
  EXPECT_EQ(svc.generate_calls, before);
}

TEST(RemoteGenerator, ErrorMapping) {
  const Frame cond = Frame::filled(8, 8, 0.5f);
  auto code = [&](const RemoteService& s) {
    try {
      generate_full(s, request(cond));
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::invalid_argument;
  };
  {
    FakeService svc;
    svc.mode = FakeService::Mode::garbage;
    EXPECT_EQ(code(RemoteService{svc.url()}), Errc::malformed_response);
    svc.mode = FakeService::Mode::wrong_size;
    EXPECT_EQ(code(RemoteService{svc.url()}), Errc::malformed_response);
    svc.mode = FakeService::Mode::slow;
    EXPECT_EQ(code(RemoteService{svc.url(), std::chrono::milliseconds(150)}), Errc::timeout);
  }
  EXPECT_EQ(code(RemoteService{"http://127.0.0.1:1", std::chrono::milliseconds(300)}), Errc::service_unreachable);
}

TEST(RemoteFlow, DecodesFlowAndLimitsConcurrency) {
  FakeService svc;
  const RemoteEstimator est(svc.url(), std::chrono::seconds(5), 2);
  const FrameSequence seq({test::textured_frame(6, 4, 0), test::textured_frame(6, 4, 1)});
  EXPECT_EQ(get_flow(est, seq, 0, 1), FlowField::constant(6, 4, 1.5f, -2.f));

  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) threads.emplace_back([&] { get_flow(est, seq, 1, 0); });
  for (auto& t : threads) t.join();
  EXPECT_LE(svc.max_in_flight.load(), 2);
}

TEST(RemoteFlow, UnreachableService) {
  const RemoteEstimator est("http://127.0.0.1:1", std::chrono::milliseconds(300));
  const FrameSequence seq({Frame::filled(4, 4, 0.f), Frame::filled(4, 4, 0.f)});
  try {
    get_flow(est, seq, 0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::service_unreachable);
  }
}

}  // namespace
}  // namespace mcvt
