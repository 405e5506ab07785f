#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fractal/complex.hpp"
#include "fractal/dynamics.hpp"
#include "fractal/paths.hpp"
#include "fractal/render.hpp"
#include "fractal/viewport.hpp"

namespace httplib {
class Server;
}

namespace fractal {

// Carries the HTTP status a handler failure maps to.
class ServiceError : public std::runtime_error {
public:
    ServiceError(int status, const std::string& message) : std::runtime_error(message), status_(status) {}
    int status() const { return status_; }

private:
    int status_;
};

inline constexpr int kMaxFrameDim = 4096;
inline constexpr long long kMaxStepsPerRequest = 1'000'000;

struct Session {
    std::string id;
    std::uint64_t seq = 0;  // bumped on every accepted mutation
    Viewport julia_viewport = default_julia_viewport(800, 600);
    Viewport mandel_viewport = default_mandelbrot_viewport(300, 200);
    PathState path = fixed_path(cardioid_point(0.0, kNearBoundaryDivisor));
    ComplexValue c = cardioid_point(0.0, kNearBoundaryDivisor);
    FractalFunction function = FractalFunction::QuadraticJulia;
    std::string palette = "classic";
    int max_iter = kDefaultMaxIter;
};

nlohmann::json session_to_json(const Session& s);

struct Frame {
    std::vector<std::uint8_t> png;
    std::uint64_t grid_hash = 0;
    double render_ms = 0.0;
};

struct ServiceOptions {
    int workers = 1;
    // Called once per rendered frame; empty disables logging.
    std::function<void(const std::string&)> log;
};

// Session store plus the request handlers. Handlers take and return JSON and
// throw ServiceError (404 unknown session, 400 malformed input).
class RenderService {
public:
    explicit RenderService(ServiceOptions options);

    nlohmann::json create_session();
    nlohmann::json get_state(const std::string& id) const;

    // {c_re, c_im} sets C; {delta_px, delta_py} moves it by minimap pixels.
    // Either form cancels a running path.
    nlohmann::json set_param(const std::string& id, const nlohmann::json& body);

    // {kind, a, dt, da_per_rev, a_floor}; "line" also takes start_re,
    // start_im, end_re, end_im. Missing numeric fields take the defaults.
    nlohmann::json set_path(const std::string& id, const nlohmann::json& body);
    // {n}
    nlohmann::json step_path(const std::string& id, const nlohmann::json& body);

    // {view, zoom_factor, anchor_re, anchor_im} | {view, pan_px, pan_py} |
    // {view, width_px, height_px}
    nlohmann::json set_viewport(const std::string& id, const nlohmann::json& body);

    // Any subset of {function, palette, max_iter}.
    nlohmann::json set_settings(const std::string& id, const nlohmann::json& body);

    // Renders from a snapshot of the session taken on entry. w and h default
    // to the view's own viewport dimensions when zero.
    Frame render_frame(const std::string& id, const std::string& view, int w, int h) const;

    std::size_t session_count() const;

private:
    struct Slot {
        mutable std::mutex mu;
        Session state;
    };

    std::shared_ptr<Slot> find(const std::string& id) const;
    template <typename Mutator>
    nlohmann::json mutate(const std::string& id, Mutator&& fn);

    ServiceOptions options_;
    mutable std::shared_mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

// Registers the JSON/PNG API on `server`.
void mount_routes(httplib::Server& server, RenderService& service);

struct ServeOptions {
    std::string host = "127.0.0.1";
    int port = 8750;
    int workers = 1;
    std::string static_dir;  // served at "/" when non-empty
};

// Blocks until the server stops. Returns false if binding fails.
bool serve(const ServeOptions& options);

}  // namespace fractal
