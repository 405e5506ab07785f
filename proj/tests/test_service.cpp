#include <doctest.h>

#include <httplib.h>

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "fractal/paths.hpp"
#include "fractal/service.hpp"

using fractal::ComplexValue;
using nlohmann::json;

namespace {

// The HTTP API on an ephemeral localhost port.
struct LiveService {
    fractal::RenderService service{fractal::ServiceOptions{4, {}}};
    httplib::Server http;
    std::thread loop;
    int port = 0;

    LiveService() {
        fractal::mount_routes(http, service);
        port = http.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        loop = std::thread([this] { http.listen_after_bind(); });
        http.wait_until_ready();
    }
    ~LiveService() {
        http.stop();
        loop.join();
    }

    httplib::Client client() const { return httplib::Client("127.0.0.1", port); }

    json post(const std::string& path, const json& body, int expected_status = 200) const {
        auto cli = client();
        auto res = cli.Post(path, body.dump(), "application/json");
        REQUIRE(res);
        CHECK(res->status == expected_status);
        return json::parse(res->body);
    }

    json get(const std::string& path, int expected_status = 200) const {
        auto cli = client();
        auto res = cli.Get(path);
        REQUIRE(res);
        CHECK(res->status == expected_status);
        return json::parse(res->body);
    }

    std::string create() const { return post("/session", json::object())["session_id"]; }

    // Returns the X-Grid-Hash header of a successful frame.
    std::string frame_hash(const std::string& id, const std::string& query) const {
        auto cli = client();
        auto res = cli.Get("/session/" + id + "/frame?" + query);
        REQUIRE(res);
        REQUIRE(res->status == 200);
        CHECK(res->get_header_value("Content-Type") == "image/png");
        CHECK(res->body.substr(1, 3) == "PNG");
        const std::string hash = res->get_header_value("X-Grid-Hash");
        CHECK(hash.size() == 16);
        CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
        return hash;
    }

    int frame_status(const std::string& id, const std::string& query) const {
        auto cli = client();
        auto res = cli.Get("/session/" + id + "/frame?" + query);
        REQUIRE(res);
        return res->status;
    }
};

ComplexValue c_of(const json& state) { return {state["c_re"].get<double>(), state["c_im"].get<double>()}; }

}  // namespace

TEST_CASE_FIXTURE(LiveService, "session creation echoes defaults") {
    const json s = post("/session", json::object());
    CHECK(s["session_id"].get<std::string>().size() == 32);
    CHECK(s["c_re"].get<double>() == doctest::Approx(0.25641026).epsilon(1e-8));
    CHECK(s["c_im"].get<double>() == 0.0);
    CHECK(s["max_iter"] == 100);
    CHECK(s["palette"] == "classic");
    CHECK(s["function"] == "quadratic");
    CHECK(s["path"]["kind"] == "fixed");
    CHECK(s["julia_viewport"]["center_re"] == 0.0);
    CHECK(s["julia_viewport"]["span_re"] == 4.0);
    CHECK(s["mandel_viewport"]["center_re"] == -0.5);
    CHECK(s["mandel_viewport"]["span_re"] == 3.0);
    CHECK(s["mandel_viewport"]["width_px"] == 300);
    CHECK(s["precision_warning"] == false);

    const json again = post("/session", json::object());
    CHECK(again["session_id"] != s["session_id"]);
    CHECK(get("/session/" + s["session_id"].get<std::string>()) == s);
    CHECK(service.session_count() == 2);
}

TEST_CASE_FIXTURE(LiveService, "parameter updates") {
    const std::string id = create();
    const std::string url = "/session/" + id + "/param";

    json s = post(url, {{"c_re", 0.177078}, {"c_im", 0.577384}});
    CHECK(c_of(s) == ComplexValue{0.177078, 0.577384});
    CHECK(c_of(get("/session/" + id)) == ComplexValue{0.177078, 0.577384});

    s = post(url, {{"delta_px", 0}, {"delta_py", 0}});
    CHECK(c_of(s) == ComplexValue{0.177078, 0.577384});

    // one minimap pixel on a span-3, 300 px wide view is 0.01
    s = post(url, {{"delta_px", 1}, {"delta_py", 0}});
    CHECK(s["c_re"].get<double>() == doctest::Approx(0.187078).epsilon(1e-14));
    CHECK(s["c_im"].get<double>() == 0.577384);

    // up arrow: negative screen delta, positive imaginary
    s = post(url, {{"delta_px", 0}, {"delta_py", -1}});
    CHECK(s["c_im"].get<double>() == doctest::Approx(0.587384).epsilon(1e-14));
}

TEST_CASE_FIXTURE(LiveService, "manual parameter change cancels a running path") {
    const std::string id = create();
    post("/session/" + id + "/path", {{"kind", "cardioid"}, {"a", 3.9}});
    post("/session/" + id + "/path/step", {{"n", 10}});
    const json s = post("/session/" + id + "/param", {{"c_re", 0.1}, {"c_im", 0.2}});
    CHECK(s["path"]["kind"] == "fixed");
    const json after = post("/session/" + id + "/path/step", {{"n", 50}});
    CHECK(c_of(after) == ComplexValue{0.1, 0.2});
}

TEST_CASE_FIXTURE(LiveService, "bad parameter requests") {
    const std::string id = create();
    post("/session/ffff/param", {{"c_re", 0.0}, {"c_im", 0.0}}, 404);
    post("/session/" + id + "/param", {{"c_re", "zero"}, {"c_im", 0.0}}, 400);
    post("/session/" + id + "/param", {{"c_re", 0.0}}, 400);
    post("/session/" + id + "/param", json::object(), 400);
    post("/session/" + id + "/param", {{"delta_px", "1"}, {"delta_py", 0}}, 400);

    auto cli = client();
    auto res = cli.Post("/session/" + id + "/param", R"({"c_re": 1e999, "c_im": 0})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    res = cli.Post("/session/" + id + "/param", R"({"c_re": NaN, "c_im": 0})", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    res = cli.Post("/session/" + id + "/param", "[1,2]", "application/json");
    REQUIRE(res);
    CHECK(res->status == 400);
    // rejected requests leave the state alone
    CHECK(get("/session/" + id)["seq"] == 0);
    get("/session/abc123", 404);
}

TEST_CASE_FIXTURE(LiveService, "cardioid path install and stepping") {
    const std::string id = create();
    json s = post("/session/" + id + "/path", {{"kind", "cardioid"}, {"a", 3.9}});
    CHECK(s["path"]["kind"] == "cardioid");
    CHECK(s["path"]["dt"].get<double>() == doctest::Approx(2.0 * std::numbers::pi / 600));

    s = post("/session/" + id + "/path/step", {{"n", 0}});
    CHECK(s["c_re"].get<double>() == doctest::Approx(0.25641026).epsilon(1e-8));
    CHECK(s["c_im"].get<double>() == 0.0);

    s = post("/session/" + id + "/path/step", {{"n", 150}});
    CHECK(s["path"]["t"].get<double>() == doctest::Approx(-std::numbers::pi / 2).epsilon(1e-12));
    const ComplexValue quarter = fractal::cardioid_point(-std::numbers::pi / 2, 3.9);
    CHECK(s["c_re"].get<double>() == doctest::Approx(quarter.re).epsilon(1e-12));
    CHECK(s["c_im"].get<double>() == doctest::Approx(quarter.im).epsilon(1e-12));

    s = post("/session/" + id + "/path/step", {{"n", 450}});
    CHECK(s["path"]["a"].get<double>() == 3.85);
}

TEST_CASE_FIXTURE(LiveService, "line and fixed paths") {
    const std::string id = create();
    json s = post("/session/" + id + "/path", {{"kind", "line"},
                                                {"start_re", 0.177078},
                                                {"start_im", 0.577384},
                                                {"end_re", 0.185723},
                                                {"end_im", 0.588104},
                                                {"dt", 0.5}});
    CHECK(c_of(s) == ComplexValue{0.177078, 0.577384});
    s = post("/session/" + id + "/path/step", {{"n", 1}});
    CHECK(s["c_re"].get<double>() == doctest::Approx(0.1814005));
    CHECK(s["c_im"].get<double>() == doctest::Approx(0.582744));

    s = post("/session/" + id + "/path", {{"kind", "fixed"}});
    const ComplexValue held = c_of(s);
    s = post("/session/" + id + "/path/step", {{"n", 7}});
    CHECK(c_of(s) == held);
}

TEST_CASE_FIXTURE(LiveService, "bad path requests") {
    const std::string id = create();
    post("/session/" + id + "/path", {{"kind", "spiral"}}, 400);
    post("/session/" + id + "/path", {{"kind", "cardioid"}, {"a", -1.0}}, 400);
    post("/session/" + id + "/path", {{"kind", "cardioid"}, {"a", 3.9}, {"a_floor", 4.0}}, 400);
    post("/session/" + id + "/path", {{"kind", "cardioid"}, {"da_per_rev", -0.1}}, 400);
    post("/session/" + id + "/path", {{"kind", "line"}, {"start_re", 0.0}}, 400);
    post("/session/" + id + "/path/step", {{"n", -1}}, 400);
    post("/session/" + id + "/path/step", {{"n", 1.5}}, 400);
    post("/session/" + id + "/path/step", json::object(), 400);
    post("/session/0000/path/step", {{"n", 1}}, 404);
}

TEST_CASE_FIXTURE(LiveService, "viewport zoom and pan") {
    const std::string id = create();
    const std::string url = "/session/" + id + "/viewport";
    const json start = get("/session/" + id);

    json s = post(url, {{"view", "julia"}, {"zoom_factor", 1.0}, {"anchor_re", 0.3}, {"anchor_im", -0.2}});
    CHECK(s["julia_viewport"] == start["julia_viewport"]);

    post(url, {{"view", "mandelbrot"}, {"zoom_factor", 2.0}});
    s = post(url, {{"view", "mandelbrot"}, {"zoom_factor", 2.0}});
    CHECK(s["mandel_viewport"]["span_re"].get<double>() == 0.75);
    CHECK(s["mandel_viewport"]["center_re"].get<double>() == -0.5);

    const json before = s["julia_viewport"];
    post(url, {{"view", "julia"}, {"pan_px", 40}, {"pan_py", -30}});
    s = post(url, {{"view", "julia"}, {"pan_px", -40}, {"pan_py", 30}});
    CHECK(s["julia_viewport"] == before);

    s = post(url, {{"view", "julia"}, {"width_px", 640}, {"height_px", 480}});
    CHECK(s["julia_viewport"]["width_px"] == 640);
    CHECK(s["julia_viewport"]["height_px"] == 480);

    s = post(url, {{"view", "mandelbrot"}, {"zoom_factor", 1e14}, {"anchor_re", -0.75}, {"anchor_im", 0.1}});
    CHECK(s["precision_warning"] == true);
    CHECK(s["mandel_viewport"]["precision_warning"] == true);
    CHECK(s["julia_viewport"]["precision_warning"] == false);

    post(url, {{"view", "sideways"}, {"zoom_factor", 2.0}}, 400);
    post(url, {{"view", "julia"}, {"zoom_factor", 0.0}}, 400);
    post(url, {{"view", "julia"}, {"zoom_factor", -2.0}}, 400);
    post(url, {{"view", "julia"}}, 400);
    post(url, {{"view", "julia"}, {"width_px", 0}}, 400);
    post(url, {{"view", "julia"}, {"width_px", 5000}}, 400);
    post("/session/0/viewport", {{"view", "julia"}, {"zoom_factor", 2.0}}, 404);
}

TEST_CASE_FIXTURE(LiveService, "settings") {
    const std::string id = create();
    json s = post("/session/" + id + "/settings", {{"function", "quartic"}, {"palette", "fire"}, {"max_iter", 250}});
    CHECK(s["function"] == "quartic");
    CHECK(s["palette"] == "fire");
    CHECK(s["max_iter"] == 250);
    post("/session/" + id + "/settings", {{"function", "cubic"}}, 400);
    post("/session/" + id + "/settings", {{"palette", "plasma"}}, 400);
    post("/session/" + id + "/settings", {{"max_iter", 0}}, 400);
}

TEST_CASE_FIXTURE(LiveService, "frames are deterministic and depend only on state") {
    const std::string a = create();
    const std::string b = create();
    const std::string h1 = frame_hash(a, "view=julia&w=96&h=72");
    CHECK(frame_hash(a, "view=julia&w=96&h=72") == h1);
    // another session in the same state renders the same grid
    CHECK(frame_hash(b, "view=julia&w=96&h=72") == h1);
    // default dimensions come from the viewport
    CHECK(frame_hash(a, "view=julia") == frame_hash(a, "view=julia&w=800&h=600"));

    const std::string m1 = frame_hash(a, "view=mandelbrot&w=120&h=80");
    post("/session/" + a + "/param", {{"c_re", -0.763667}, {"c_im", 0.0870413}});
    CHECK(frame_hash(a, "view=julia&w=96&h=72") != h1);
    CHECK(frame_hash(a, "view=mandelbrot&w=120&h=80") == m1);

    post("/session/" + a + "/settings", {{"max_iter", 50}});
    CHECK(frame_hash(a, "view=mandelbrot&w=120&h=80") != m1);
}

TEST_CASE_FIXTURE(LiveService, "Figure 4 parameter renders with the quartic variants") {
    const std::string id = create();
    post("/session/" + id + "/param", {{"c_re", 0.862085}, {"c_im", 0.64695}});
    for (const char* fn : {"quartic", "quartic_rational"}) {
        post("/session/" + id + "/settings", {{"function", fn}, {"palette", "fire"}});
        frame_hash(id, "view=julia&w=64&h=48");
        frame_hash(id, "view=mandelbrot&w=64&h=48");
    }
}

TEST_CASE_FIXTURE(LiveService, "bad frame requests") {
    const std::string id = create();
    CHECK(frame_status(id, "view=julia&w=0&h=10") == 400);
    CHECK(frame_status(id, "view=julia&w=4097&h=10") == 400);
    CHECK(frame_status(id, "view=julia&w=abc&h=10") == 400);
    CHECK(frame_status(id, "view=side&w=10&h=10") == 400);
    CHECK(frame_status("00ff", "view=julia&w=10&h=10") == 404);
    CHECK(frame_status(id, "view=julia&w=4096&h=1") == 200);
}

TEST_CASE_FIXTURE(LiveService, "concurrent mutations on one session serialize") {
    const std::string id = create();
    const ComplexValue start = c_of(get("/session/" + id));
    constexpr int kThreads = 8;
    constexpr int kEach = 25;
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t) {
        threads.emplace_back([this, &id] {
            auto cli = client();
            for (int i = 0; i < kEach; ++i) {
                auto res = cli.Post("/session/" + id + "/param", R"({"delta_px": 1, "delta_py": 0})",
                                    "application/json");
                if (!res || res->status != 200) {
                    return;
                }
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    const json s = get("/session/" + id);
    CHECK(s["seq"] == kThreads * kEach);
    CHECK(s["c_re"].get<double>() == doctest::Approx(start.re + kThreads * kEach * 0.01).epsilon(1e-12));
}

TEST_CASE("in-process handlers report status codes") {
    fractal::RenderService svc{fractal::ServiceOptions{1, {}}};
    try {
        svc.get_state("nope");
        FAIL("expected ServiceError");
    } catch (const fractal::ServiceError& e) {
        CHECK(e.status() == 404);
    }
    const std::string id = svc.create_session()["session_id"];
    try {
        svc.step_path(id, {{"n", "ten"}});
        FAIL("expected ServiceError");
    } catch (const fractal::ServiceError& e) {
        CHECK(e.status() == 400);
    }
    std::vector<std::string> log;
    fractal::RenderService logged{fractal::ServiceOptions{2, [&log](const std::string& l) { log.push_back(l); }}};
    const std::string lid = logged.create_session()["session_id"];
    const fractal::Frame f = logged.render_frame(lid, "julia", 32, 24);
    CHECK(f.render_ms >= 0.0);
    REQUIRE(log.size() == 1);
    CHECK(log[0].find("render_ms=") != std::string::npos);
}
