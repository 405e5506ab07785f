#include "fractal/service.hpp"

#include <httplib.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "fractal/coloring.hpp"
#include "fractal/image_io.hpp"

namespace fractal {

using nlohmann::json;

namespace {

ServiceError bad_request(const std::string& msg) { return ServiceError(400, msg); }

double require_number(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end()) {
        throw bad_request(std::string("missing field: ") + key);
    }
    if (!it->is_number()) {
        throw bad_request(std::string("field must be a number: ") + key);
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
        throw bad_request(std::string("field must be finite: ") + key);
    }
    return v;
}

double number_or(const json& body, const char* key, double fallback) {
    return body.contains(key) ? require_number(body, key) : fallback;
}

long long require_integer(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end()) {
        throw bad_request(std::string("missing field: ") + key);
    }
    if (!it->is_number_integer()) {
        throw bad_request(std::string("field must be an integer: ") + key);
    }
    return it->get<long long>();
}

std::string require_string(const json& body, const char* key) {
    const auto it = body.find(key);
    if (it == body.end() || !it->is_string()) {
        throw bad_request(std::string("missing string field: ") + key);
    }
    return it->get<std::string>();
}

void require_object(const json& body) {
    if (!body.is_object()) {
        throw bad_request("request body must be a JSON object");
    }
}

json viewport_to_json(const Viewport& v) {
    return {{"center_re", v.center.re},
            {"center_im", v.center.im},
            {"span_re", v.span_re},
            {"width_px", v.width_px},
            {"height_px", v.height_px},
            {"precision_warning", v.below_precision_floor()}};
}

json path_to_json(const PathState& p) {
    return {{"kind", path_kind_name(p.kind)},
            {"t", p.t},
            {"a", p.a},
            {"dt", p.dt},
            {"da_per_rev", p.da_per_rev},
            {"a_floor", p.a_floor},
            {"start_re", p.start.re},
            {"start_im", p.start.im},
            {"end_re", p.end.re},
            {"end_im", p.end.im}};
}

Viewport& view_of(Session& s, const std::string& view) {
    if (view == "julia") {
        return s.julia_viewport;
    }
    if (view == "mandelbrot") {
        return s.mandel_viewport;
    }
    throw bad_request("view must be 'julia' or 'mandelbrot'");
}

std::string new_session_id() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    return hash_hex(rng()) + hash_hex(rng());
}

}  // namespace

json session_to_json(const Session& s) {
    return {{"session_id", s.id},
            {"seq", s.seq},
            {"c_re", s.c.re},
            {"c_im", s.c.im},
            {"function", function_name(s.function)},
            {"palette", s.palette},
            {"max_iter", s.max_iter},
            {"julia_viewport", viewport_to_json(s.julia_viewport)},
            {"mandel_viewport", viewport_to_json(s.mandel_viewport)},
            {"path", path_to_json(s.path)},
            {"precision_warning",
             s.julia_viewport.below_precision_floor() || s.mandel_viewport.below_precision_floor()}};
}

RenderService::RenderService(ServiceOptions options) : options_(std::move(options)) {
    if (options_.workers < 1) {
        options_.workers = 1;
    }
}

std::shared_ptr<RenderService::Slot> RenderService::find(const std::string& id) const {
    std::shared_lock lock(sessions_mu_);
    const auto it = sessions_.find(id);
    if (it == sessions_.end()) {
        throw ServiceError(404, "unknown session: " + id);
    }
    return it->second;
}

template <typename Mutator>
json RenderService::mutate(const std::string& id, Mutator&& fn) {
    const auto slot = find(id);
    std::lock_guard lock(slot->mu);
    // Work on a copy so a rejected request leaves the session untouched.
    Session next = slot->state;
    fn(next);
    ++next.seq;
    slot->state = std::move(next);
    return session_to_json(slot->state);
}

json RenderService::create_session() {
    auto slot = std::make_shared<Slot>();
    slot->state.id = new_session_id();
    const json state = session_to_json(slot->state);
    std::unique_lock lock(sessions_mu_);
    sessions_.emplace(slot->state.id, std::move(slot));
    return state;
}

json RenderService::get_state(const std::string& id) const {
    const auto slot = find(id);
    std::lock_guard lock(slot->mu);
    return session_to_json(slot->state);
}

json RenderService::set_param(const std::string& id, const json& body) {
    require_object(body);
    return mutate(id, [&](Session& s) {
        if (body.contains("c_re") || body.contains("c_im")) {
            s.c = {require_number(body, "c_re"), require_number(body, "c_im")};
        } else if (body.contains("delta_px") || body.contains("delta_py")) {
            const double dx = number_or(body, "delta_px", 0.0);
            const double dy = number_or(body, "delta_py", 0.0);
            // Same arithmetic as panning a minimap-sized view centered on C.
            Viewport around_c = s.mandel_viewport;
            around_c.center = s.c;
            s.c = pan(around_c, dx, dy).center;
            if (!s.c.is_finite()) {
                throw bad_request("parameter delta overflows");
            }
        } else {
            throw bad_request("expected {c_re, c_im} or {delta_px, delta_py}");
        }
        s.path = fixed_path(s.c);
    });
}

json RenderService::set_path(const std::string& id, const json& body) {
    require_object(body);
    return mutate(id, [&](Session& s) {
        PathKind kind;
        try {
            kind = parse_path_kind(require_string(body, "kind"));
        } catch (const std::invalid_argument& e) {
            throw bad_request(e.what());
        }
        PathState p;
        switch (kind) {
            case PathKind::Fixed:
                p = fixed_path(s.c);
                break;
            case PathKind::Cardioid:
                p = cardioid_path(number_or(body, "a", kNearBoundaryDivisor),
                                  number_or(body, "dt", kDefaultPathDt),
                                  number_or(body, "da_per_rev", kDefaultDaPerRev),
                                  number_or(body, "a_floor", kDefaultAFloor));
                break;
            case PathKind::LineSegment:
                p = line_path({require_number(body, "start_re"), require_number(body, "start_im")},
                              {require_number(body, "end_re"), require_number(body, "end_im")},
                              number_or(body, "dt", 0.01));
                break;
        }
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw bad_request(e.what());
        }
        s.path = p;
        s.c = current_c(p);
    });
}

json RenderService::step_path(const std::string& id, const json& body) {
    require_object(body);
    const long long n = require_integer(body, "n");
    if (n < 0 || n > kMaxStepsPerRequest) {
        throw bad_request("n must be in [0, " + std::to_string(kMaxStepsPerRequest) + "]");
    }
    return mutate(id, [&](Session& s) {
        s.path = step(s.path, n);
        s.c = current_c(s.path);
    });
}

json RenderService::set_viewport(const std::string& id, const json& body) {
    require_object(body);
    const std::string view = require_string(body, "view");
    return mutate(id, [&](Session& s) {
        Viewport& v = view_of(s, view);
        if (body.contains("zoom_factor")) {
            const double factor = require_number(body, "zoom_factor");
            if (!(factor > 0.0)) {
                throw bad_request("zoom_factor must be positive");
            }
            const ComplexValue anchor{number_or(body, "anchor_re", v.center.re),
                                      number_or(body, "anchor_im", v.center.im)};
            const ZoomResult z = zoom(v, anchor, factor);
            if (!(z.viewport.span_re > 0.0) || !std::isfinite(z.viewport.span_re)) {
                throw bad_request("zoom leaves a degenerate span");
            }
            v = z.viewport;
        } else if (body.contains("pan_px") || body.contains("pan_py")) {
            const Viewport moved = pan(v, number_or(body, "pan_px", 0.0), number_or(body, "pan_py", 0.0));
            if (!moved.center.is_finite()) {
                throw bad_request("pan overflows");
            }
            v = moved;
        } else if (body.contains("width_px") || body.contains("height_px")) {
            const long long w = body.contains("width_px") ? require_integer(body, "width_px") : v.width_px;
            const long long h = body.contains("height_px") ? require_integer(body, "height_px") : v.height_px;
            if (w < 1 || h < 1 || w > kMaxFrameDim || h > kMaxFrameDim) {
                throw bad_request("viewport dimensions must be in [1, " + std::to_string(kMaxFrameDim) + "]");
            }
            v.width_px = static_cast<int>(w);
            v.height_px = static_cast<int>(h);
        } else {
            throw bad_request("expected zoom_factor, pan_px/pan_py or width_px/height_px");
        }
    });
}

json RenderService::set_settings(const std::string& id, const json& body) {
    require_object(body);
    return mutate(id, [&](Session& s) {
        if (body.contains("function")) {
            try {
                s.function = parse_function(require_string(body, "function"));
            } catch (const std::invalid_argument& e) {
                throw bad_request(e.what());
            }
        }
        if (body.contains("palette")) {
            const std::string name = require_string(body, "palette");
            try {
                find_palette(name);
            } catch (const std::out_of_range& e) {
                throw bad_request(e.what());
            }
            s.palette = name;
        }
        if (body.contains("max_iter")) {
            const long long m = require_integer(body, "max_iter");
            if (m < 1 || m > 1'000'000) {
                throw bad_request("max_iter must be in [1, 1000000]");
            }
            s.max_iter = static_cast<int>(m);
        }
    });
}

Frame RenderService::render_frame(const std::string& id, const std::string& view, int w, int h) const {
    Session snapshot;
    {
        const auto slot = find(id);
        std::lock_guard lock(slot->mu);
        snapshot = slot->state;
    }
    RenderRequest req;
    req.viewport = view_of(snapshot, view);
    req.set_kind = view == "julia" ? SetKind::Julia : SetKind::Mandelbrot;
    if (w != 0) {
        req.viewport.width_px = w;
    }
    if (h != 0) {
        req.viewport.height_px = h;
    }
    if (req.viewport.width_px < 1 || req.viewport.height_px < 1 || req.viewport.width_px > kMaxFrameDim ||
        req.viewport.height_px > kMaxFrameDim) {
        throw bad_request("frame dimensions must be in [1, " + std::to_string(kMaxFrameDim) + "]");
    }
    req.params.function = snapshot.function;
    req.params.c = snapshot.c;
    req.params.max_iter = snapshot.max_iter;

    const auto t0 = std::chrono::steady_clock::now();
    const IterationGrid grid = render_parallel(req, options_.workers);
    const auto t1 = std::chrono::steady_clock::now();

    Frame frame;
    frame.grid_hash = grid_hash(grid);
    frame.render_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    frame.png = encode_png(colorize(grid, find_palette(snapshot.palette)));
    if (options_.log) {
        std::ostringstream line;
        line << "frame session=" << snapshot.id << " view=" << view << ' ' << grid.width_px << 'x'
             << grid.height_px << " render_ms=" << frame.render_ms << " hash=" << hash_hex(frame.grid_hash);
        options_.log(line.str());
    }
    return frame;
}

std::size_t RenderService::session_count() const {
    std::shared_lock lock(sessions_mu_);
    return sessions_.size();
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) {
        return json::object();
    }
    try {
        return json::parse(req.body);
    } catch (const json::exception& e) {
        throw bad_request(std::string("malformed JSON: ") + e.what());
    }
}

int parse_dim(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) {
        return 0;
    }
    const std::string text = req.get_param_value(key);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1 || value > kMaxFrameDim) {
        throw bad_request(std::string("query parameter ") + key + " must be an integer in [1, " +
                          std::to_string(kMaxFrameDim) + "]");
    }
    return value;
}

template <typename Handler>
httplib::Server::Handler guarded(Handler&& h) {
    return [h = std::forward<Handler>(h)](const httplib::Request& req, httplib::Response& res) {
        try {
            h(req, res);
        } catch (const ServiceError& e) {
            send_json(res, {{"error", e.what()}}, e.status());
        } catch (const std::exception& e) {
            send_json(res, {{"error", e.what()}}, 500);
        }
    };
}

}  // namespace

void mount_routes(httplib::Server& server, RenderService& service) {
    server.Post("/session", guarded([&service](const httplib::Request&, httplib::Response& res) {
                    send_json(res, service.create_session());
                }));
    server.Get(R"(/session/([0-9a-f]+))", guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   send_json(res, service.get_state(req.matches[1]));
               }));
    server.Post(R"(/session/([0-9a-f]+)/param)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, service.set_param(req.matches[1], parse_body(req)));
                }));
    server.Post(R"(/session/([0-9a-f]+)/path)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, service.set_path(req.matches[1], parse_body(req)));
                }));
    server.Post(R"(/session/([0-9a-f]+)/path/step)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, service.step_path(req.matches[1], parse_body(req)));
                }));
    server.Post(R"(/session/([0-9a-f]+)/viewport)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, service.set_viewport(req.matches[1], parse_body(req)));
                }));
    server.Post(R"(/session/([0-9a-f]+)/settings)",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                    send_json(res, service.set_settings(req.matches[1], parse_body(req)));
                }));
    server.Get(R"(/session/([0-9a-f]+)/frame)",
               guarded([&service](const httplib::Request& req, httplib::Response& res) {
                   const std::string view = req.has_param("view") ? req.get_param_value("view") : "julia";
                   const Frame frame =
                       service.render_frame(req.matches[1], view, parse_dim(req, "w"), parse_dim(req, "h"));
                   res.set_header("X-Grid-Hash", hash_hex(frame.grid_hash));
                   res.set_header("X-Render-Ms", std::to_string(frame.render_ms));
                   res.set_content(std::string(frame.png.begin(), frame.png.end()), "image/png");
               }));
}

bool serve(const ServeOptions& options) {
    ServiceOptions service_options;
    service_options.workers = options.workers;
    service_options.log = [](const std::string& line) { std::clog << line << '\n'; };
    RenderService service(std::move(service_options));

    httplib::Server server;
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Expose-Headers", "X-Grid-Hash, X-Render-Ms"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });
    mount_routes(server, service);
    if (!options.static_dir.empty() && !server.set_mount_point("/", options.static_dir)) {
        std::clog << "static directory not found: " << options.static_dir << '\n';
        return false;
    }
    std::clog << "listening on http://" << options.host << ':' << options.port << '\n';
    return server.listen(options.host, options.port);
}

}  // namespace fractal
