#include "fractal/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fractal/bench.hpp"
#include "fractal/coloring.hpp"
#include "fractal/image_io.hpp"
#include "fractal/paths.hpp"
#include "fractal/render.hpp"
#include "fractal/service.hpp"

namespace fractal {

namespace {

// Raised while turning flags into requests; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

int default_workers() {
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::vector<std::string> palette_names() {
    std::vector<std::string> names;
    for (const Palette& p : builtin_palettes()) {
        names.push_back(p.name);
    }
    return names;
}

std::vector<std::string> function_names() {
    std::vector<std::string> names;
    for (FractalFunction f : all_functions()) {
        names.emplace_back(function_name(f));
    }
    return names;
}

std::string shortest(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

struct ImageFlags {
    int width = 800;
    int height = 600;
    int max_iter = kDefaultMaxIter;
    std::string palette = "classic";
    std::string function = "quadratic";
    std::optional<double> center_re;
    std::optional<double> center_im;
    std::optional<double> span;
    bool sequential = false;
    int workers = default_workers();
};

void add_image_flags(CLI::App* cmd, ImageFlags& f) {
    cmd->add_option("--width", f.width, "Image width in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--height", f.height, "Image height in pixels")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--max-iter", f.max_iter, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--palette", f.palette, "Color palette")->check(CLI::IsMember(palette_names()))->capture_default_str();
    cmd->add_option("--function", f.function, "Iteration function")
        ->check(CLI::IsMember(function_names()))
        ->capture_default_str();
    cmd->add_option("--center-re", f.center_re, "Viewport center, real part");
    cmd->add_option("--center-im", f.center_im, "Viewport center, imaginary part");
    cmd->add_option("--span", f.span, "Plane units covered by the image width");
    cmd->add_flag("--seq", f.sequential, "Use the sequential renderer");
    cmd->add_option("--workers", f.workers, "Parallel renderer threads")->check(CLI::PositiveNumber)->capture_default_str();
}

RenderRequest build_request(SetKind kind, const ImageFlags& f, ComplexValue c) {
    RenderRequest r;
    r.set_kind = kind;
    r.viewport = kind == SetKind::Julia ? default_julia_viewport(f.width, f.height)
                                        : default_mandelbrot_viewport(f.width, f.height);
    if (f.center_re) {
        r.viewport.center.re = *f.center_re;
    }
    if (f.center_im) {
        r.viewport.center.im = *f.center_im;
    }
    if (f.span) {
        r.viewport.span_re = *f.span;
    }
    r.params.function = parse_function(f.function);
    r.params.c = c;
    r.params.max_iter = f.max_iter;
    try {
        r.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return r;
}

IterationGrid render_with(const RenderRequest& r, const ImageFlags& f) {
    return f.sequential ? render_sequential(r) : render_parallel(r, f.workers);
}

void check_image_path(const std::string& out) {
    try {
        format_for_path(out);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void render_still(SetKind kind, const ImageFlags& f, ComplexValue c, const std::string& out_path,
                  std::ostream& out) {
    check_image_path(out_path);
    const RenderRequest r = build_request(kind, f, c);
    const IterationGrid grid = render_with(r, f);
    write_image(out_path, colorize(grid, find_palette(f.palette)));
    out << hash_hex(grid_hash(grid)) << '\n';
}

struct AnimateFlags {
    std::string path = "cardioid";
    double a = kNearBoundaryDivisor;
    double da_per_rev = kDefaultDaPerRev;
    double a_floor = kDefaultAFloor;
    std::optional<int> frames_per_rev;
    std::optional<double> dt;
    int frames = 600;
    std::vector<double> from;
    std::vector<double> to;
    std::string out_dir;
};

PathState build_path(const AnimateFlags& f) {
    PathState p;
    if (f.path == "cardioid") {
        double dt = kDefaultPathDt;
        if (f.frames_per_rev) {
            dt = 2.0 * std::numbers::pi / *f.frames_per_rev;
        } else if (f.dt) {
            dt = *f.dt;
        }
        p = cardioid_path(f.a, dt, f.da_per_rev, f.a_floor);
    } else {
        if (f.from.size() != 2 || f.to.size() != 2) {
            throw UsageError("--path line needs --from RE IM and --to RE IM");
        }
        const double dt = f.dt ? *f.dt : (f.frames > 1 ? 1.0 / (f.frames - 1) : 0.0);
        p = line_path({f.from[0], f.from[1]}, {f.to[0], f.to[1]}, dt);
    }
    try {
        p.validate();
        current_c(p);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return p;
}

void animate(const AnimateFlags& af, const ImageFlags& f, std::ostream& out) {
    PathState path = build_path(af);
    build_request(SetKind::Julia, f, current_c(path));

    std::error_code ec;
    std::filesystem::create_directories(af.out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create " + af.out_dir + ": " + ec.message());
    }
    const std::filesystem::path manifest_path = std::filesystem::path(af.out_dir) / "manifest.csv";
    std::ofstream manifest(manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) {
        throw std::runtime_error("cannot open " + manifest_path.string() + " for writing");
    }
    manifest << "frame,t,a,c_re,c_im\n";

    const Palette& palette = find_palette(f.palette);
    for (int k = 0; k < af.frames; ++k) {
        const ComplexValue c = current_c(path);
        const IterationGrid grid = render_with(build_request(SetKind::Julia, f, c), f);
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.ppm", k);
        write_image(std::filesystem::path(af.out_dir) / name, colorize(grid, palette));
        manifest << k << ',' << shortest(path.t) << ',' << shortest(path.a) << ',' << shortest(c.re) << ','
                 << shortest(c.im) << '\n';
        path = step(path);
    }
    manifest.flush();
    if (!manifest) {
        throw std::runtime_error("write failed: " + manifest_path.string());
    }
    out << af.frames << " frames written to " << af.out_dir << '\n';
}

struct BenchFlags {
    std::vector<int> sizes{10, 32, 100, 316, 1000, 2048};
    int reps = 5;
    int workers = default_workers();
    double c_re = 0.320564;
    double c_im = -0.0391827;
    int max_iter = kDefaultMaxIter;
    std::string out;
};

void bench(const BenchFlags& f, std::ostream& out) {
    BenchConfig cfg;
    cfg.sizes = f.sizes;
    cfg.repetitions = f.reps;
    cfg.workers = f.workers;
    cfg.request = default_bench_request();
    cfg.request.params.c = {f.c_re, f.c_im};
    cfg.request.params.max_iter = f.max_iter;
    try {
        cfg.validate();
        cfg.request.params.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const std::vector<BenchRecord> records = run_bench(cfg);
    write_csv(records, std::filesystem::path(f.out));
    write_csv(records, out);
}

void parse_addr(const std::string& addr, ServeOptions& opts) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos || colon == 0) {
        throw UsageError("--addr must look like HOST:PORT");
    }
    int port = 0;
    const std::string port_text = addr.substr(colon + 1);
    const auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 1 || port > 65535) {
        throw UsageError("invalid port in --addr: " + addr);
    }
    opts.host = addr.substr(0, colon);
    opts.port = port;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Escape-time Julia and Mandelbrot renderer, path animator, benchmark and explorer service",
                 "fractal"};
    app.require_subcommand(1);

    ImageFlags julia_flags;
    double c_re = 0.0;
    double c_im = 0.0;
    std::string julia_out;
    CLI::App* julia = app.add_subcommand("julia", "Render a Julia set to .ppm or .png");
    julia->add_option("--c-re", c_re, "Parameter C, real part")->required();
    julia->add_option("--c-im", c_im, "Parameter C, imaginary part")->required();
    julia->add_option("--out", julia_out, "Output image (.ppm or .png)")->required();
    add_image_flags(julia, julia_flags);

    ImageFlags mandel_flags;
    std::string mandel_out;
    CLI::App* mandel = app.add_subcommand("mandelbrot", "Render the Mandelbrot set to .ppm or .png");
    mandel->add_option("--out", mandel_out, "Output image (.ppm or .png)")->required();
    add_image_flags(mandel, mandel_flags);

    ImageFlags anim_flags;
    AnimateFlags anim;
    CLI::App* animate_cmd = app.add_subcommand("animate", "Render Julia frames along a parameter path");
    animate_cmd->add_option("--path", anim.path, "Path kind")
        ->check(CLI::IsMember({"cardioid", "line"}))
        ->capture_default_str();
    animate_cmd->add_option("--a", anim.a, "Cardioid divisor")->capture_default_str();
    animate_cmd->add_option("--da-per-rev", anim.da_per_rev, "Divisor decrease per revolution")->capture_default_str();
    animate_cmd->add_option("--a-floor", anim.a_floor, "Lowest divisor reached by the sweep")->capture_default_str();
    auto* fpr = animate_cmd->add_option("--frames-per-rev", anim.frames_per_rev, "Steps per cardioid revolution (default 600)")
                    ->check(CLI::PositiveNumber);
    animate_cmd->add_option("--dt", anim.dt, "Step size: radians for cardioid, fraction for line")->excludes(fpr);
    animate_cmd->add_option("--frames", anim.frames, "Number of frames")->check(CLI::NonNegativeNumber)->capture_default_str();
    animate_cmd->add_option("--from", anim.from, "Line start RE IM")->expected(2);
    animate_cmd->add_option("--to", anim.to, "Line end RE IM")->expected(2);
    animate_cmd->add_option("--out-dir", anim.out_dir, "Directory for frames and manifest.csv")->required();
    add_image_flags(animate_cmd, anim_flags);

    BenchFlags bench_flags;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time sequential against parallel rendering");
    bench_cmd->add_option("--sizes", bench_flags.sizes, "Square image sides")->delimiter(',')->check(CLI::PositiveNumber);
    bench_cmd->add_option("--reps", bench_flags.reps, "Timed repetitions per size and method")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--workers", bench_flags.workers, "Parallel renderer threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench_cmd->add_option("--c-re", bench_flags.c_re, "Parameter C, real part")->capture_default_str();
    bench_cmd->add_option("--c-im", bench_flags.c_im, "Parameter C, imaginary part")->capture_default_str();
    bench_cmd->add_option("--max-iter", bench_flags.max_iter, "Iteration cap")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--out", bench_flags.out, "CSV destination")->required();

    std::string addr = "127.0.0.1:8750";
    ServeOptions serve_opts;
    serve_opts.workers = default_workers();
    CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP render service");
    serve_cmd->add_option("--addr", addr, "Bind address HOST:PORT")->capture_default_str();
    serve_cmd->add_option("--workers", serve_opts.workers, "Parallel renderer threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    serve_cmd->add_option("--static-dir", serve_opts.static_dir, "Directory of UI assets served at /");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (julia->parsed()) {
            render_still(SetKind::Julia, julia_flags, {c_re, c_im}, julia_out, out);
        } else if (mandel->parsed()) {
            render_still(SetKind::Mandelbrot, mandel_flags, {}, mandel_out, out);
        } else if (animate_cmd->parsed()) {
            animate(anim, anim_flags, out);
        } else if (bench_cmd->parsed()) {
            bench(bench_flags, out);
        } else if (serve_cmd->parsed()) {
            parse_addr(addr, serve_opts);
            if (!serve(serve_opts)) {
                err << "error: could not listen on " << addr << '\n';
                return kExitRuntime;
            }
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for more information.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace fractal
