#include "xdc/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include "xdc/bridge_client.hpp"
#include "xdc/diagnostics.hpp"
#include "xdc/error.hpp"
#include "xdc/filter.hpp"
#include "xdc/paste.hpp"
#include "xdc/png_io.hpp"
#include "xdc/sampler.hpp"

namespace xdc::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << v;
    return os.str();
}

std::string short_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<unsigned char> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot read " + p.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Block average of the mask down to h x w; the grid must divide evenly.
Mask area_downsample(const Mask& m, int h, int w) {
    if (m.height() % h != 0 || m.width() % w != 0) {
        throw ShapeError("mask " + std::to_string(m.height()) + "x" + std::to_string(m.width()) +
                         " does not divide into latent " + std::to_string(h) + "x" + std::to_string(w));
    }
    const int fy = m.height() / h;
    const int fx = m.width() / w;
    Mask out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = 0; dy < fy; ++dy) {
                for (int dx = 0; dx < fx; ++dx) sum += m.at(y * fy + dy, x * fx + dx);
            }
            out.at(y, x) = sum / (fy * fx);
        }
    }
    return out;
}

struct Backend {
    std::unique_ptr<Denoiser> denoiser;
    BridgeDenoiser* bridge = nullptr;
    bool latent = false;
};

Backend make_backend(const RunConfig& cfg, const ImageGrid& reference) {
    Backend b;
    if (cfg.backend == "oracle") {
        b.denoiser = std::make_unique<OracleDenoiser>(oracle_mixture(cfg, reference),
                                                      NoiseSchedule::linear(cfg.guidance.steps));
        return b;
    }
    auto bridge = std::make_unique<BridgeDenoiser>(BridgeClient::connect(BridgeAddress::parse(cfg.bridge_addr)));
    b.bridge = bridge.get();
    const auto& hello = bridge->client().hello();
    if (!(hello.shape == reference.shape())) {
        if (!hello.supports_encode_decode) {
            throw ProtocolError("bridge grid " + hello.shape.to_string() + " differs from reference " +
                                reference.shape().to_string() + " and the bridge cannot encode");
        }
        b.latent = true;
    }
    b.denoiser = std::move(bridge);
    return b;
}

std::optional<std::string> condition_of(const RunConfig& cfg) {
    if (cfg.prompt.empty()) return std::nullopt;
    return cfg.prompt;
}

void check_schedule(const RunConfig& cfg, const NoiseSchedule& sched) {
    if (cfg.recorded_schedule_digest && *cfg.recorded_schedule_digest != hex64(sched.digest())) {
        throw ConfigError("recorded schedule digest " + *cfg.recorded_schedule_digest +
                          " does not match this build's " + hex64(sched.digest()));
    }
}

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are the caller's to catch inside fn.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const InputError*>(&e) || dynamic_cast<const DiagnosticError*>(&e)) return kExitInput;
    if (dynamic_cast<const BackendError*>(&e)) return kExitBackend;
    return kExitInternal;
}

Scene load_scene(const RunConfig& cfg) {
    if (cfg.reference.empty()) throw ConfigError("no reference image given");
    ImageGrid background = io::read_rgb(cfg.reference);
    if (!cfg.object.empty()) {
        const RgbaObject object = io::read_rgba(cfg.object);
        PasteResult pasted = paste(object, background, {cfg.position_row, cfg.position_col}, cfg.scale);
        Mask mask = cfg.mask.empty() ? std::move(pasted.mask) : io::read_mask(cfg.mask).binarized(0.5);
        require_same_plane(pasted.reference.shape(), mask, "mask");
        return {std::move(pasted.reference), std::move(mask)};
    }
    if (cfg.mask.empty()) throw ConfigError("a mask is required when no object is pasted");
    Mask mask = io::read_mask(cfg.mask).binarized(0.5);
    require_same_plane(background.shape(), mask, "mask");
    return {std::move(background), std::move(mask)};
}

GaussianMixture oracle_mixture(const RunConfig& cfg, const ImageGrid& reference) {
    std::vector<MixtureComponent> components;
    if (cfg.oracle_means.empty()) {
        const int factor = std::min(4, std::max(reference.height(), reference.width()));
        components.push_back({1.0, low_pass(reference, factor), cfg.oracle_std});
        return GaussianMixture(std::move(components));
    }
    const double w = 1.0 / static_cast<double>(cfg.oracle_means.size());
    for (const auto& path : cfg.oracle_means) {
        ImageGrid mean = io::read_rgb(path);
        require_same_shape(mean.shape(), reference.shape(), "oracle mean");
        components.push_back({w, std::move(mean), cfg.oracle_std});
    }
    return GaussianMixture(std::move(components));
}

GaussianMixture toy_mixture(double stddev) {
    ImageGrid mu({16, 16, 1});
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) mu.at(y, x, 0) = (y + x) % 2 == 0 ? 0.5 : -0.5;
    }
    return GaussianMixture({{0.5, mu, stddev}, {0.5, -1.0 * mu, stddev}});
}

RunOutput run_once(const RunConfig& cfg, const Scene& scene, TraceLog& log, int cell) {
    cfg.validate();
    const NoiseSchedule sched = NoiseSchedule::linear(cfg.guidance.steps);
    check_schedule(cfg, sched);

    Backend backend = make_backend(cfg, scene.reference);
    ImageGrid reference = scene.reference;
    Mask mask = scene.mask;
    if (backend.latent) {
        const GridShape latent = backend.bridge->client().hello().shape;
        reference = backend.bridge->client().encode(reference);
        if (!(reference.shape() == latent)) {
            throw ProtocolError("bridge encoded to " + reference.shape().to_string() + ", declared " + latent.to_string());
        }
        mask = area_downsample(mask, latent.height, latent.width).binarized(0.5);
    }

    json base = {{"event", "step"}};
    if (cell >= 0) base["cell"] = cell;
    StepObserver observer;
    if (log.enabled(LogLevel::trace)) {
        observer = [&](const StepRecord& r, const ImageGrid& state) {
            json rec = base;
            rec["t"] = r.action.step;
            rec["direction"] = r.action.direction == Direction::denoise ? "denoise" : "renoise";
            rec["guided_pixels"] = r.guided_pixels;
            rec["evaluations"] = r.evaluations;
            try {
                rec["boundary_energy"] = boundary_energy(state, mask, cfg.band);
            } catch (const DiagnosticError&) {
                rec["boundary_energy"] = nullptr;
            }
            log.emit(LogLevel::trace, rec);
        };
    }

    CompositeResult result = run_composite(reference, mask, cfg.guidance, *backend.denoiser, condition_of(cfg), observer);
    ImageGrid image = std::move(result.image);
    if (backend.latent) {
        image = backend.bridge->client().decode(image);
        if (!(image.shape() == scene.reference.shape())) {
            throw ProtocolError("bridge decoded to " + image.shape().to_string() + ", expected " +
                                scene.reference.shape().to_string());
        }
    }
    return {std::move(image), result.evaluations, sched.to_config_block()};
}

void write_result(const RunConfig& cfg, const fs::path& output, const RunOutput& result) {
    if (output.has_parent_path()) fs::create_directories(output.parent_path());
    io::write_image(output, result.image);
    const auto bytes = read_bytes(output);

    RunConfig record = cfg;
    record.output = output.string();
    std::ofstream side(sidecar_path(output));
    if (!side) throw IoError("cannot write sidecar for " + output.string());
    side << "# xdc reproducibility record: replay with `xdc composite --config <this file>`\n";
    side << "xdc.version = " << kVersion << "\n";
    side << record.serialize();
    side << result.schedule_block;
    side << "output.evaluations = " << result.evaluations << "\n";
    side << "output.digest = " << hex64(fnv1a(bytes)) << "\n";
    if (!side) throw IoError("cannot write sidecar for " + output.string());
}

SweepPlan plan_sweep(const RunConfig& cfg) {
    const std::vector<double> t_in = cfg.sweep_t_in.empty() ? std::vector<double>{cfg.guidance.t_in} : cfg.sweep_t_in;
    const std::vector<int> n_in = cfg.sweep_n_in.empty() ? std::vector<int>{cfg.guidance.n_in} : cfg.sweep_n_in;
    const std::vector<double> r = cfg.sweep_r.empty() ? std::vector<double>{cfg.guidance.r} : cfg.sweep_r;

    SweepPlan plan;
    for (double a : t_in) {
        for (int b : n_in) {
            for (double c : r) plan.cells.push_back({plan.cells.size(), a, b, c});
        }
    }

    // Axis 0 = t_in, 1 = n_in, 2 = r.
    const std::size_t sizes[3] = {t_in.size(), n_in.size(), r.size()};
    auto label = [&](int axis, const SweepCell& cell) {
        switch (axis) {
            case 0: return "t_in=" + short_number(cell.t_in);
            case 1: return "n_in=" + std::to_string(cell.n_in);
            default: return "r=" + short_number(cell.r);
        }
    };
    int column_axis = -1;
    for (int axis = 0; axis < 3; ++axis) {
        if (sizes[axis] > 1) column_axis = axis;
    }
    if (column_axis < 0) return plan;  // one cell, unlabelled

    plan.layout.cols = static_cast<int>(sizes[column_axis]);
    plan.layout.rows = static_cast<int>(plan.cells.size()) / plan.layout.cols;
    for (int c = 0; c < plan.layout.cols; ++c) {
        plan.layout.col_labels.push_back(label(column_axis, plan.cells[static_cast<std::size_t>(c)]));
    }
    for (int row = 0; row < plan.layout.rows; ++row) {
        const SweepCell& first = plan.cells[static_cast<std::size_t>(row * plan.layout.cols)];
        std::string text;
        for (int axis = 0; axis < column_axis; ++axis) {
            if (sizes[axis] < 2) continue;
            if (!text.empty()) text += " ";
            text += label(axis, first);
        }
        plan.layout.row_labels.push_back(text);
    }
    return plan;
}

fs::path cell_path(const fs::path& output, std::size_t index) {
    fs::path p = output;
    p.replace_filename(output.stem().string() + ".cell" + std::to_string(index) + output.extension().string());
    return p;
}

void cmd_composite(const RunConfig& cfg, TraceLog& log) {
    if (cfg.output.empty()) throw ConfigError("no output path given");
    cfg.validate();
    const Scene scene = load_scene(cfg);
    log.emit(LogLevel::info, {{"event", "start"}, {"command", "composite"}, {"seed", cfg.guidance.seed}});
    const RunOutput out = run_once(cfg, scene, log);
    write_result(cfg, cfg.output, out);
    log.emit(LogLevel::info, {{"event", "done"}, {"output", cfg.output}, {"evaluations", out.evaluations}});
}

int cmd_sweep(const RunConfig& cfg, TraceLog& log, std::ostream& report) {
    if (cfg.output.empty()) throw ConfigError("no output path given");
    if (cfg.sweep_t_in.empty() && cfg.sweep_n_in.empty() && cfg.sweep_r.empty()) {
        throw ConfigError("sweep needs at least one axis (--sweep-t-in, --sweep-n-in, --sweep-r)");
    }
    cfg.validate();
    const Scene scene = load_scene(cfg);
    const SweepPlan plan = plan_sweep(cfg);
    const std::size_t n = plan.cells.size();

    std::vector<std::optional<ImageGrid>> images(n);
    std::vector<json> records(n);
    std::vector<int> codes(n, kExitOk);
    parallel_for(n, cfg.workers, [&](std::size_t i) {
        const SweepCell& cell = plan.cells[i];
        RunConfig one = cfg;
        one.guidance.t_in = cell.t_in;
        one.guidance.n_in = cell.n_in;
        one.guidance.r = cell.r;
        one.sweep_t_in.clear();
        one.sweep_n_in.clear();
        one.sweep_r.clear();
        one.workers = 1;
        const fs::path path = cell_path(cfg.output, i);
        json rec = {{"cell", i}, {"t_in", cell.t_in}, {"n_in", cell.n_in}, {"r", cell.r}};
        try {
            RunOutput out = run_once(one, scene, log, static_cast<int>(i));
            write_result(one, path, out);
            rec["status"] = "ok";
            rec["output"] = path.string();
            rec["evaluations"] = out.evaluations;
            images[i] = std::move(out.image);
        } catch (const std::exception& e) {
            codes[i] = exit_code_for(e);
            rec["status"] = "error";
            rec["exit_code"] = codes[i];
            rec["message"] = e.what();
        }
        log.emit(LogLevel::info, rec);
        records[i] = std::move(rec);
    });

    const ImageGrid grid = tile_grid(images, plan.layout, scene.reference.shape());
    io::write_image(cfg.output, grid);
    {
        std::ofstream side(sidecar_path(cfg.output));
        side << "# xdc sweep record: replay with `xdc sweep --config <this file>`\n";
        side << "xdc.version = " << kVersion << "\n" << cfg.serialize();
    }
    for (const auto& rec : records) report << rec.dump() << '\n';
    for (int code : codes) {
        if (code != kExitOk) return code;
    }
    return kExitOk;
}

void cmd_toy_sample(const RunConfig& cfg, TraceLog& log, std::ostream& report) {
    cfg.validate();
    GaussianMixture mixture = toy_mixture(cfg.oracle_std);
    if (!cfg.oracle_means.empty()) mixture = oracle_mixture(cfg, io::read_rgb(cfg.oracle_means.front()));
    const GridShape shape = mixture.shape();
    GuidanceConfig g = cfg.guidance;
    g.t_in = 0.0;
    g.t_out = 0.0;
    g.p_blend = 0;
    const ImageGrid reference(shape);
    const Mask mask(shape.height, shape.width);

    const auto count = static_cast<std::size_t>(cfg.count);
    std::vector<std::optional<ImageGrid>> samples(count);
    parallel_for(count, cfg.workers, [&](std::size_t k) {
        OracleDenoiser model(mixture, NoiseSchedule::linear(g.steps));
        GuidanceConfig mine = g;
        mine.seed = g.seed + k;
        samples[k] = run_composite(reference, mask, mine, model).image;
    });

    // Assign each sample to its nearest component mean.
    const auto& comps = mixture.components();
    std::vector<std::size_t> hits(comps.size(), 0);
    std::vector<ImageGrid> sums(comps.size(), ImageGrid(shape));
    for (const auto& s : samples) {
        std::size_t best = 0;
        double best_d = INFINITY;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            double d = 0.0;
            for (std::size_t i = 0; i < s->size(); ++i) d += std::pow(s->values()[i] - comps[c].mean.values()[i], 2);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        ++hits[best];
        sums[best] += *s;
    }
    json freq = json::array();
    json mean_err = json::array();
    for (std::size_t c = 0; c < comps.size(); ++c) {
        freq.push_back(static_cast<double>(hits[c]) / static_cast<double>(count));
        if (hits[c] == 0) {
            mean_err.push_back(nullptr);
            continue;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            worst = std::max(worst, std::abs(sums[c].values()[i] / hits[c] - comps[c].mean.values()[i]));
        }
        mean_err.push_back(worst);
    }
    const json summary = {{"event", "toy-sample"}, {"count", count}, {"steps", g.steps}, {"seed", g.seed},
                          {"frequencies", freq}, {"mean_max_abs_error", mean_err}};
    report << summary.dump() << '\n';
    log.emit(LogLevel::info, summary);

    if (!cfg.output.empty()) {
        TileLayout layout;
        layout.cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
        layout.rows = static_cast<int>((count + static_cast<std::size_t>(layout.cols) - 1) / static_cast<std::size_t>(layout.cols));
        std::vector<std::optional<ImageGrid>> cells(static_cast<std::size_t>(layout.rows * layout.cols), ImageGrid(shape, 1.0));
        for (std::size_t k = 0; k < count; ++k) cells[k] = samples[k];
        io::write_image(cfg.output, tile_grid(cells, layout, shape));
    }
}

void cmd_diagnose(const RunConfig& cfg, TraceLog& log, std::ostream& report) {
    cfg.validate();
    const Scene scene = load_scene(cfg);
    const NoiseSchedule sched = NoiseSchedule::linear(cfg.guidance.steps);
    check_schedule(cfg, sched);
    Backend backend = make_backend(cfg, scene.reference);
    if (backend.latent) throw ConfigError("diagnose measures pixel grids; the bridge runs in a latent space");
    const auto variants = diagnose(scene.reference, scene.mask, cfg.guidance, *backend.denoiser, condition_of(cfg), cfg.band);
    for (const auto& v : variants) {
        const json rec = {{"p_blend", v.p_blend},
                          {"blend_space", to_string(v.blend_space)},
                          {"boundary_energy", v.boundary_energy},
                          {"band", cfg.band},
                          {"seed", cfg.guidance.seed},
                          {"n_in", cfg.guidance.n_in},
                          {"n_out", cfg.guidance.n_out}};
        report << rec.dump() << '\n';
        log.emit(LogLevel::info, rec);
    }
}

}  // namespace xdc::app
