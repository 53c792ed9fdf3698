#include "vstates/cli.hpp"

#include "vstates/continuation.hpp"
#include "vstates/errors.hpp"
#include "vstates/io.hpp"
#include "vstates/spectrum.hpp"
#include "vstates/verify.hpp"

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/core.h>
#include "CLI11.hpp"

namespace vstates::cli {

namespace {

struct RunConfig {
    double b = 0.0;
    std::optional<int> m;
    std::optional<int> m_min;
    std::optional<int> m_max;
    std::string sign = "plus";
    int modes = 32;
    std::optional<int> quad;
    int steps = 10;
    double ds = 1e-3;
    double tol = 1e-10;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string in;
    std::string format;
    std::string select = "all";
    bool boundaries = false;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

const CLI::Validator kOpenUnit(
    [](std::string& s) -> std::string {
        double v = 0.0;
        try {
            std::size_t used = 0;
            v = std::stod(s, &used);
            if (used != s.size()) return "not a number: " + s;
        } catch (const std::exception&) {
            return "not a number: " + s;
        }
        if (!(v > 0.0 && v < 1.0)) return "b must lie in (0, 1), got " + s;
        return {};
    },
    "in (0,1)");

std::optional<int> nmax_override() {
    const char* env = std::getenv("VSTATES_NMAX");
    if (env == nullptr || *env == '\0') return std::nullopt;
    try {
        std::size_t used = 0;
        const int v = std::stoi(env, &used);
        if (used != std::string(env).size() || v < 1) throw std::invalid_argument(env);
        return v;
    } catch (const std::exception&) {
        throw UsageError(fmt::format("VSTATES_NMAX must be a positive integer, got '{}'", env));
    }
}

int table_size(int wanted) { return nmax_override().value_or(wanted); }

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out.empty()) {
        out << text;
    } else {
        write_file(cfg.out, text);
    }
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
    if (cfg.m && (cfg.m_min || cfg.m_max)) {
        throw UsageError("--m cannot be combined with --m-min/--m-max");
    }
    const int requested_hi = cfg.m ? *cfg.m : cfg.m_max.value_or(0);
    const AnnulusConstants consts(cfg.b, table_size(std::max(200, requested_hi)));
    const int threshold = threshold_N(cfg.b, consts);
    const int lo = cfg.m ? *cfg.m : cfg.m_min.value_or(threshold);
    const int hi = cfg.m ? *cfg.m : cfg.m_max.value_or(lo + 20);
    if (lo < threshold) {
        throw NotSimple(fmt::format("m = {} is below threshold N({}) = {}", lo, cfg.b, threshold));
    }
    if (hi < lo) {
        throw UsageError(fmt::format("empty range: m-max {} < m-min {}", hi, lo));
    }
    std::vector<SpectrumRow> rows;
    for (int m = lo; m <= hi; ++m) rows.push_back(bifurcation_row(m, cfg.b, consts));
    emit(cfg, cfg.format == "json" ? spectrum_json(rows) : spectrum_csv(rows), out);
    return kOk;
}

int cmd_threshold(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const AnnulusConstants consts(cfg.b, table_size(200));
    int n = 0;
    try {
        n = threshold_N(cfg.b, consts);
    } catch (const TableExhausted&) {
        err << "hint: raise the table size with VSTATES_NMAX\n";
        throw;
    }
    out << fmt::format("b={} N={} E_{}={} E_{}={}\n", format_real(cfg.b), n, n - 1,
                       format_real(discriminant(n - 1, cfg.b, consts).E), n,
                       format_real(discriminant(n, cfg.b, consts).E));
    return kOk;
}

int cmd_branch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.m) throw UsageError("branch needs --m");
    if (cfg.out.empty()) throw UsageError("branch needs --out");
    const int m = *cfg.m;
    if (m < 2) throw UsageError("--m must be at least 2");
    const int P = cfg.quad.value_or(default_quadrature(cfg.modes, m));
    const AnnulusConstants consts(cfg.b, table_size(AnnulusConstants::default_n_max(cfg.modes, m)));
    const auto branch =
        branch_continue(m, cfg.b, branch_from_string(cfg.sign), cfg.steps, cfg.ds, cfg.modes, P, consts, cfg.tol);
    write_file(cfg.out, branch_to_json(branch));
    if (cfg.boundaries) {
        for (std::size_t i = 0; i < branch.points.size(); ++i) {
            write_file(boundary_path(cfg.out, static_cast<int>(i)), boundary_csv(sample_boundaries(branch.points[i].patch)));
        }
    }
    out << fmt::format("wrote {} points to {}\n", branch.points.size(), cfg.out);
    if (!branch.stopped_reason.empty()) {
        err << "warning: branch stopped early: " << branch.stopped_reason << "\n";
    }
    return kOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
    const auto reports = default_suite(cfg.seed);
    emit(cfg, cfg.format == "json" ? format_json(reports) : format_table(reports), out);
    for (const auto& r : reports) {
        if (!r.passed) return kNumerical;
    }
    return kOk;
}

std::vector<int> parse_selection(const std::string& text, int count) {
    std::vector<int> out;
    if (text == "all") {
        for (int i = 0; i < count; ++i) out.push_back(i);
        return out;
    }
    if (text.empty() || text == "none") return out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(fmt::format("--select expects comma-separated indices, got '{}'", item));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int cmd_render(const RunConfig& cfg, std::ostream& out) {
    if (cfg.in.empty()) throw UsageError("render needs --in");
    const auto branch = branch_from_json(read_file(cfg.in));
    const auto selection = parse_selection(cfg.select, static_cast<int>(branch.points.size()));
    emit(cfg, render_svg(branch, selection), out);
    return kOk;
}

} // namespace

int default_quadrature(int K, int m) {
    const int block = 4 * K * m;
    return ((4096 + block - 1) / block) * block;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Doubly connected rotating patches of the SQG equation"};
    app.name("vstates");
    app.require_subcommand(1);
    RunConfig cfg;

    auto* spectrum = app.add_subcommand("spectrum", "Bifurcation angular velocities for a range of m");
    spectrum->add_option("--b", cfg.b, "Inner radius")->required()->check(kOpenUnit);
    spectrum->add_option("--m", cfg.m, "Single fold number");
    spectrum->add_option("--m-min", cfg.m_min, "First m (default N(b))");
    spectrum->add_option("--m-max", cfg.m_max, "Last m (default m-min + 20)");
    spectrum->add_option("--out", cfg.out, "Output file (default stdout)");
    spectrum->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto* threshold = app.add_subcommand("threshold", "Smallest m with simple real eigenvalues");
    threshold->add_option("--b", cfg.b, "Inner radius")->required()->check(kOpenUnit);

    auto* branch = app.add_subcommand("branch", "Continue a branch of V-states from the annulus");
    branch->add_option("--b", cfg.b, "Inner radius")->required()->check(kOpenUnit);
    branch->add_option("--m", cfg.m, "Fold symmetry")->required();
    branch->add_option("--sign", cfg.sign, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    branch->add_option("--modes", cfg.modes, "Retained modes K")->check(CLI::PositiveNumber);
    branch->add_option("--quad", cfg.quad, "Quadrature size P (default: multiple of 4Km, at least 4096)");
    branch->add_option("--steps", cfg.steps, "Continuation steps")->check(CLI::NonNegativeNumber);
    branch->add_option("--ds", cfg.ds, "Amplitude step")->check(CLI::PositiveNumber);
    branch->add_option("--tol", cfg.tol, "Newton tolerance")->check(CLI::PositiveNumber);
    branch->add_option("--out", cfg.out, "Branch JSON file")->required();
    branch->add_option("--format", cfg.format, "json")->check(CLI::IsMember({"json"}));
    branch->add_flag("--boundaries", cfg.boundaries, "Also write boundary samples per point");

    auto* check = app.add_subcommand("check", "Run the verification suite");
    check->add_option("--seed", cfg.seed, "Seed for random sample points");
    check->add_option("--format", cfg.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    check->add_option("--out", cfg.out, "Output file (default stdout)");

    auto* render = app.add_subcommand("render", "Draw branch points as SVG");
    render->add_option("--in", cfg.in, "Branch JSON file")->required();
    render->add_option("--out", cfg.out, "SVG file (default stdout)");
    render->add_option("--select", cfg.select, "Point indices, comma separated, 'all' or 'none'");
    render->add_option("--format", cfg.format, "svg")->check(CLI::IsMember({"svg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (spectrum->parsed()) return cmd_spectrum(cfg, out);
        if (threshold->parsed()) return cmd_threshold(cfg, out, err);
        if (branch->parsed()) return cmd_branch(cfg, out, err);
        if (check->parsed()) return cmd_check(cfg, out);
        if (render->parsed()) return cmd_render(cfg, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const SchemaError& e) {
        err << "invalid branch file at '" << e.path() << "': " << e.what() << "\n";
        return kUsage;
    } catch (const GuardError& e) {
        err << "guard violation: " << e.what() << "\n";
        return kGuard;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}

} // namespace vstates::cli
