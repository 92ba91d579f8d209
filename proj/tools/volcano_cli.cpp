// volcano: isogeny graph atlas, audits and inverse-volcano certificates.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "volcano/inverse.hpp"

namespace fs = std::filesystem;
using namespace volcano;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kFailure = 2;
constexpr int kExhausted = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    std::string p_text;
    int ell = 0;
    std::string format = "text";
    std::string out;
    std::uint64_t graph_cap = 200'000;
    std::uint64_t verify_cap = 200'000;
    std::string search_bound = "1000000000000000";
    std::size_t count = 1;
    std::string strategy = "family";
    std::string crater;
    int depth = 0;
    std::string disc;
    unsigned threads = 1;
    bool no_meta = false;
    std::string data_dir;
};

std::uint64_t checked_p(const CliConfig& cfg) {
    Integer p;
    try {
        p = parse_integer(cfg.p_text);
    } catch (const std::exception&) {
        throw UsageError("--p must be a decimal integer");
    }
    if (p < 5 || p >= (Integer{1} << 31) || !is_prime(p)) throw UsageError("--p must be a prime with 5 <= p < 2^31");
    if (static_cast<std::uint64_t>(p) > cfg.graph_cap) {
        throw UsageError("p exceeds --graph-cap " + std::to_string(cfg.graph_cap));
    }
    return static_cast<std::uint64_t>(p);
}

void checked_ell(const CliConfig& cfg) {
    if (!is_supported_ell(cfg.ell)) throw UsageError("--ell must be one of 2, 3, 5, 7, 11, 13");
}

std::string meta_line(const CliConfig& cfg, const std::string& cmd) {
    if (cfg.no_meta) return "";
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return "volcano " + cmd + " generated " + buf;
}

// Writes to a sibling temp file, then renames, so failed runs leave nothing behind.
void emit(const CliConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text << std::flush;
        return;
    }
    fs::path target(cfg.out);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
        f << text;
        if (!f.flush()) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

BuildOptions build_options(const CliConfig& cfg) {
    BuildOptions o;
    o.graph_cap = cfg.graph_cap;
    o.threads = cfg.threads;
    if (!cfg.data_dir.empty()) o.data_dir = cfg.data_dir;
    return o;
}

LabelOptions label_options(const CliConfig& cfg) {
    LabelOptions o;
    if (!cfg.data_dir.empty()) o.data_dir = cfg.data_dir;
    return o;
}

int cmd_graph(const CliConfig& cfg) {
    std::uint64_t p = checked_p(cfg);
    checked_ell(cfg);
    if (cfg.format != "json" && cfg.format != "dot" && cfg.format != "text") {
        throw UsageError("--format must be json, dot or text");
    }
    IsogenyGraph g = build_graph(p, cfg.ell, build_options(cfg));
    Atlas atlas = build_atlas(g, label_options(cfg));
    std::string meta = meta_line(cfg, "graph");
    if (cfg.format == "json") {
        emit(cfg, export_json(g, &atlas, nullptr, meta));
    } else if (cfg.format == "dot") {
        emit(cfg, export_dot(g, &atlas, meta));
    } else {
        emit(cfg, (meta.empty() ? "" : "# " + meta + "\n") + render_atlas(g, atlas));
    }
    return kOk;
}

int cmd_atlas(const CliConfig& cfg) {
    std::uint64_t p = checked_p(cfg);
    checked_ell(cfg);
    IsogenyGraph g = build_graph(p, cfg.ell, build_options(cfg));
    Atlas atlas = build_atlas(g, label_options(cfg));
    std::string meta = meta_line(cfg, "atlas");
    if (cfg.format == "json") {
        AuditReport report = audit(g, atlas);
        emit(cfg, export_json(g, &atlas, &report, meta));
    } else {
        emit(cfg, (meta.empty() ? "" : "# " + meta + "\n") + render_atlas(g, atlas));
    }
    return kOk;
}

int cmd_audit(const CliConfig& cfg) {
    std::uint64_t p = checked_p(cfg);
    checked_ell(cfg);
    IsogenyGraph g = build_graph(p, cfg.ell, build_options(cfg));
    AuditReport report = audit(g, label_options(cfg));
    emit(cfg, render_audit(g, report));
    return report.ok() ? kOk : kFailure;
}

int cmd_order(const CliConfig& cfg) {
    Integer d;
    try {
        d = parse_integer(cfg.disc);
    } catch (const std::exception&) {
        throw UsageError("--disc must be a decimal integer");
    }
    if (!is_discriminant(d) || d >= 0) throw UsageError("--disc must be a negative discriminant (0 or 1 mod 4)");
    if (cfg.ell < 2 || !is_prime(cfg.ell)) throw UsageError("--ell must be prime");
    Discriminant disc(d);
    std::string line;
    if (divides_conductor(disc, cfg.ell)) {
        line = "non-invertible (ell divides the conductor)";
    } else {
        line = to_string(splitting_type(disc, cfg.ell));
    }
    emit(cfg, line + "\n");
    return kOk;
}

int cmd_inverse(const CliConfig& cfg, bool ell_given) {
    AbstractVolcano target;
    try {
        target.crater = CraterShape::parse(cfg.crater);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    target.depth = cfg.depth;
    if (cfg.depth < 0) throw UsageError("--depth must be non-negative");
    if (ell_given) target.ell = cfg.ell;
    SolveOptions opt;
    try {
        opt.strategy = parse_strategy(cfg.strategy);
        opt.max_p = parse_integer(cfg.search_bound);
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    if (cfg.count == 0) throw UsageError("--count must be positive");
    opt.count = cfg.count;
    opt.verify.verify_cap = cfg.verify_cap;
    opt.verify.threads = cfg.threads;
    if (!cfg.data_dir.empty()) opt.verify.data_dir = cfg.data_dir;
    std::ostringstream buffer;
    opt.on_certificate = [&](const RealizationCertificate& c) {
        if (cfg.out.empty()) {
            std::cout << c.to_json() << "\n" << std::flush;
        } else {
            buffer << c.to_json() << "\n";
        }
    };
    try {
        solve_inverse(target, opt);
    } catch (const VerificationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cout << e.certificate.to_json() << "\n";
        return kFailure;
    }
    if (!cfg.out.empty()) emit(cfg, buffer.str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig cfg;
    CLI::App app{"Ordinary isogeny graphs over F_p: atlas, audits and inverse volcanoes"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--data-dir", cfg.data_dir, "modular polynomial directory (overrides VOLCANO_DATA_DIR)");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1u, 256u));

    auto* graph = app.add_subcommand("graph", "build G_ell(F_p) and export it");
    auto* atlas = app.add_subcommand("atlas", "cordillera, belt and volcano tables");
    auto* aud = app.add_subcommand("audit", "counting audits");
    for (auto* sub : {graph, atlas, aud}) {
        sub->add_option("--p", cfg.p_text, "prime p >= 5")->required();
        sub->add_option("--ell", cfg.ell, "isogeny degree")->required();
        sub->add_option("--out", cfg.out, "output file");
        sub->add_option("--graph-cap", cfg.graph_cap, "largest p for a full build");
        sub->add_flag("--no-meta", cfg.no_meta, "omit the timestamp header");
    }
    graph->add_option("--format", cfg.format, "json | dot | text");
    atlas->add_option("--format", cfg.format, "text | json");

    auto* inv = app.add_subcommand("inverse", "realize an abstract volcano");
    auto* inv_ell = inv->add_option("--ell", cfg.ell, "isogeny degree (required when depth > 0)");
    inv->add_option("--crater", cfg.crater, "point | selfloop | doubleselfloop | edge2 | doubleedge2 | cycle:<n>")
        ->required();
    inv->add_option("--depth", cfg.depth, "volcano depth");
    inv->add_option("--strategy", cfg.strategy, "family | minimal");
    inv->add_option("--count", cfg.count, "number of certificates");
    inv->add_option("--verify-cap", cfg.verify_cap, "largest p verified by a graph build");
    inv->add_option("--search-bound", cfg.search_bound, "largest p tried by the prime search");
    inv->add_option("--out", cfg.out, "output file");

    auto* order = app.add_subcommand("order", "splitting type and order of the prime class above ell");
    order->add_option("--disc", cfg.disc, "negative discriminant")->required();
    order->add_option("--ell", cfg.ell, "prime")->required();
    order->add_option("--out", cfg.out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kInvalid;
    }

    try {
        if (graph->parsed()) return cmd_graph(cfg);
        if (atlas->parsed()) return cmd_atlas(cfg);
        if (aud->parsed()) return cmd_audit(cfg);
        if (order->parsed()) return cmd_order(cfg);
        return cmd_inverse(cfg, inv_ell->count() > 0);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInvalid;
    } catch (const SearchExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExhausted;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
