#include "feelab/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "feelab/analysis.hpp"
#include "feelab/engine.hpp"
#include "feelab/errors.hpp"
#include "json.hpp"

namespace feelab::cli {

namespace {

/// Flag in a user-facing message, used to name the offending option.
class FlagError : public std::runtime_error {
public:
    FlagError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

struct CliConfig {
    std::string subcommand;
    std::string config_path;

    double x0 = 100.0;
    double y0 = 100.0;
    double dx = 10.0;
    std::string fee = "constant:0.003";
    std::string engine = "continuous";
    std::string split = "balanced";
    std::vector<std::int64_t> n_values{1, 2, 5, 10, 100, 1000};
    std::string format;
    std::string out_path;

    double alpha_max = 0.5;
    std::int64_t points = 50;

    double x_min = 50.0;
    double x_max = 200.0;
    double y_min = 50.0;
    double y_max = 200.0;
    std::int64_t resolution = 41;

    double k0_ref = 1e4;
    double t_max = 1.00001;
    double baseline = 0.003;

    double k_star = 10100.0;
    std::vector<double> k0_list{10000.0, 9000.0};

    bool fee_given = false;
    bool engine_given = false;
};

enum class Format { csv, json, table };

Format parse_format(const std::string& text, const std::string& source = "--format") {
    if (text == "csv") return Format::csv;
    if (text == "json") return Format::json;
    if (text == "table") return Format::table;
    throw FlagError(source, "unknown format '" + text + "' (expected csv, json or table)");
}

template <class F>
auto with_flag(const std::string& flag, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const DomainError& e) {
        throw FlagError(flag, e.what());
    } catch (const RangeError& e) {
        throw FlagError(flag, e.what());
    }
}

struct Validated {
    PoolState pool{1.0, 1.0};
    EngineConfig engine;
    Format format = Format::csv;
};

Validated validate(const CliConfig& cfg, Format default_format, bool runs_engine) {
    Validated v;
    v.pool = with_flag("--x0/--y0", [&] { return PoolState(cfg.x0, cfg.y0); });
    if (!std::isfinite(cfg.dx) || cfg.dx < 0.0) {
        throw FlagError("--dx", "trade size must be finite and >= 0");
    }
    v.engine.fee_rule = with_flag("--fee", [&] { return parse_fee_rule(cfg.fee); });
    v.engine.mode = with_flag("--engine", [&] { return parse_engine_mode(cfg.engine); });
    v.engine.split_mode = with_flag("--split", [&] { return parse_split_mode(cfg.split); });
    if (runs_engine && v.engine.mode == EngineMode::continuous && !is_path_independent(v.engine.fee_rule)) {
        throw FlagError("--engine", "continuous engine needs a path-independent fee; use --engine discrete with " +
                                        cfg.fee);
    }
    for (const auto n : cfg.n_values) {
        if (n < 1) throw FlagError("--n", "split counts must be >= 1");
    }
    v.format = cfg.format.empty() ? default_format : parse_format(cfg.format);
    return v;
}

void write_table(const SeriesTable& table, std::ostream& out) {
    out << "# " << table.name() << '\n';
    for (const auto& [k, val] : table.meta()) out << "# " << k << " = " << val << '\n';
    if (table.rows().size() == 1) {
        std::size_t width = 0;
        for (const auto& c : table.columns()) width = std::max(width, c.size());
        for (std::size_t c = 0; c < table.columns().size(); ++c) {
            out << std::left << std::setw(static_cast<int>(width)) << table.columns()[c] << std::right << "  "
                << format_number(table.rows()[0][c]) << '\n';
        }
        return;
    }
    std::vector<std::vector<std::string>> cells;
    cells.push_back(table.columns());
    for (const auto& row : table.rows()) {
        std::vector<std::string> line;
        for (const double v : row) line.push_back(format_number(v));
        cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(table.columns().size(), 0);
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    }
    for (const auto& line : cells) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << line[c];
        }
        out << '\n';
    }
}

void emit(const SeriesTable& table, Format format, std::ostream& out) {
    switch (format) {
        case Format::csv: write_csv(table, out); break;
        case Format::json: write_json(table, out); break;
        case Format::table: write_table(table, out); break;
    }
}

// Merges single-series results that share their first column.
SeriesTable merge_columns(std::string name, const std::string& key, const std::vector<std::string>& labels,
                          const std::vector<SeriesTable>& parts) {
    std::vector<std::string> cols{key};
    cols.insert(cols.end(), labels.begin(), labels.end());
    SeriesTable merged(std::move(name), std::move(cols));
    for (std::size_t r = 0; r < parts.front().rows().size(); ++r) {
        std::vector<double> row{parts.front().rows()[r][0]};
        for (const auto& p : parts) row.push_back(p.rows()[r][1]);
        merged.add_row(std::move(row));
    }
    return merged;
}

EngineConfig design(EngineMode mode, FeeRule rule, SplitMode split) {
    EngineConfig c;
    c.mode = mode;
    c.fee_rule = std::move(rule);
    c.split_mode = split;
    return c;
}

struct Output {
    SeriesTable series;
    std::vector<std::string> summary;
};

Output cmd_swap(const CliConfig& cfg, const Validated& v) {
    const auto outcome = execute(v.pool, v.engine, TradeSpec(cfg.dx, 1));
    const auto il = impermanent_loss(v.pool, outcome);
    SeriesTable t("swap", {"x_f", "y_f", "k_f", "dy_out", "p_marginal_f", "p_effective", "v_hold", "v_pool",
                           "il_abs", "il_rel"});
    t.set_meta("fee", describe(v.engine.fee_rule));
    t.set_meta("engine", std::string(to_string(v.engine.mode)));
    t.set_meta("split", std::string(to_string(v.engine.split_mode)));
    t.set_meta("x0", format_number(cfg.x0));
    t.set_meta("y0", format_number(cfg.y0));
    t.set_meta("dx", format_number(cfg.dx));
    t.add_row({outcome.x_f, outcome.y_f, outcome.k_f, outcome.dy_out, outcome.p_marginal_f, outcome.p_effective,
               il.v_hold, il.v_pool, il.il_abs, il.il_rel});
    return {std::move(t), {}};
}

Output cmd_split_test(const CliConfig& cfg, const Validated& v) {
    if (cfg.fee_given || cfg.engine_given) {
        return {splitting_error(v.pool, v.engine, cfg.dx, cfg.n_values), {}};
    }
    const double k0 = invariant(v.pool);
    const std::vector<std::string> labels{"continuous_constant", "continuous_linear", "discrete_univ2"};
    const std::vector<EngineConfig> configs{
        design(EngineMode::continuous, ConstantFee(0.003), SplitMode::balanced),
        design(EngineMode::continuous, LinearFee(0.003, k0), SplitMode::balanced),
        design(EngineMode::discrete, ConstantFee(0.003), SplitMode::input_only),
    };
    std::vector<SeriesTable> parts;
    for (const auto& c : configs) parts.push_back(splitting_error(v.pool, c, cfg.dx, cfg.n_values));
    auto merged = merge_columns("splitting_error", "N", labels, parts);
    merged.set_meta("x0", format_number(cfg.x0));
    merged.set_meta("y0", format_number(cfg.y0));
    merged.set_meta("dx", format_number(cfg.dx));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        merged.set_meta(labels[i], describe(configs[i].fee_rule) + " " + std::string(to_string(configs[i].mode)) +
                                       " " + std::string(to_string(configs[i].split_mode)));
    }
    return {std::move(merged), {}};
}

Output cmd_price_curve(const CliConfig& cfg, const Validated& v) {
    const auto alphas = with_flag("--alpha-max/--points", [&] { return alpha_grid(cfg.alpha_max, cfg.points); });
    std::vector<Design> designs;
    if (cfg.fee_given || cfg.engine_given) {
        designs.push_back({"p_rel", v.engine});
    } else {
        const double k0 = invariant(v.pool);
        designs.push_back({"univ2", design(EngineMode::discrete, ConstantFee(0.003), SplitMode::input_only)});
        designs.push_back({"constant_phi", design(EngineMode::continuous, ConstantFee(0.003), SplitMode::balanced)});
        designs.push_back({"linear_phi", design(EngineMode::continuous, LinearFee(0.003, k0), SplitMode::balanced)});
    }
    return {relative_price_curve(v.pool, designs, alphas), {}};
}

Output cmd_il_curve(const CliConfig& cfg, const Validated& v) {
    const auto alphas = with_flag("--alpha-max/--points", [&] { return alpha_grid(cfg.alpha_max, cfg.points); });
    return {impermanent_loss_curve(v.pool, v.engine, alphas), {}};
}

Output cmd_fee_field(const CliConfig& cfg, const Validated& v) {
    const FeeRule rule = cfg.fee_given ? v.engine.fee_rule : FeeRule(LinearFee(0.003, invariant(v.pool)));
    return {with_flag("--xmin/--xmax/--ymin/--ymax/--res",
                      [&] {
                          return fee_field_grid(rule, {cfg.x_min, cfg.x_max, cfg.resolution},
                                                {cfg.y_min, cfg.y_max, cfg.resolution});
                      }),
            {}};
}

Output cmd_zeroil_curve(const CliConfig& cfg) {
    const auto ts = with_flag("--tmax/--points", [&] { return uniform_grid(1.0, cfg.t_max, cfg.points); });
    auto table = with_flag("--k0", [&] { return zero_il_fee_curve(cfg.k0_ref, ts); });
    const double cross = with_flag("--baseline", [&] { return zero_il_crossover(cfg.baseline); });
    table.set_meta("baseline", format_number(cfg.baseline));
    table.set_meta("crossover_t", format_number(cross));
    return {std::move(table),
            {"zero-IL fee exceeds constant fee " + format_number(cfg.baseline) + " for t > " + format_number(cross)}};
}

Output cmd_no_universal(const CliConfig& cfg) {
    if (cfg.k0_list.size() < 2) {
        throw FlagError("--k0", "need at least two reference invariants");
    }
    SeriesTable table("no_universal", {"k0", "alpha", "phi_required"});
    table.set_meta("k_star", format_number(cfg.k_star));
    std::vector<double> phis;
    for (const double k0 : cfg.k0_list) {
        const auto r = with_flag("--k0", [&] { return zero_il_required_fee(cfg.k_star, k0); });
        table.add_row({r.k0, r.alpha, r.phi});
        phis.push_back(r.phi);
    }
    const bool conflict = std::adjacent_find(phis.begin(), phis.end(), std::not_equal_to<>()) != phis.end();
    table.set_meta("verdict", conflict ? "CONFLICT" : "CONSISTENT");
    std::string line = conflict ? "CONFLICT: required Phi(k*) differs across reference states:"
                                : "CONSISTENT: identical reference states give identical Phi(k*):";
    for (std::size_t i = 0; i < phis.size(); ++i) {
        line += (i == 0 ? " k0=" : "; k0=") + format_number(cfg.k0_list[i]) + " -> " + format_number(phis[i]);
    }
    return {std::move(table), {line}};
}

// Flags from a --config JSON file are appended unless given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    const auto it = std::find(args.begin(), args.end(), std::string("--config"));
    if (it == args.end()) return args;
    if (std::next(it) == args.end()) throw FlagError("--config", "missing path");
    const std::string path = *std::next(it);
    std::ifstream in(path);
    if (!in) throw FlagError("--config", "cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw FlagError("--config", e.what());
    }
    if (!doc.is_object()) throw FlagError("--config", "top level must be an object");

    std::vector<std::string> out;
    for (auto a = args.begin(); a != args.end(); ++a) {
        if (a == it) {
            ++a;
            continue;
        }
        out.push_back(*a);
    }
    const auto scalar = [](const nlohmann::json& j) -> std::string {
        if (j.is_string()) return j.get<std::string>();
        if (j.is_number_integer()) return std::to_string(j.get<std::int64_t>());
        if (j.is_number()) return format_number(j.get<double>());
        throw FlagError("--config", "unsupported value " + j.dump());
    };
    for (const auto& [key, value] : doc.items()) {
        const std::string flag = "--" + key;
        if (std::find(out.begin(), out.end(), flag) != out.end()) continue;
        std::string text;
        if (value.is_array()) {
            for (std::size_t i = 0; i < value.size(); ++i) text += (i ? "," : "") + scalar(value[i]);
        } else {
            text = scalar(value);
        }
        out.push_back(flag);
        out.push_back(text);
    }
    return out;
}

}  // namespace

Environment Environment::from_process() {
    Environment env;
    if (const char* f = std::getenv("FEELAB_FORMAT"); f && *f) env.format = f;
    return env;
}

int run(std::span<const std::string> args_in, std::ostream& out, std::ostream& err, const Environment& env) {
    CliConfig cfg;
    CLI::App app{"feelab: constant-product pools with state-dependent fees"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");

    CLI::App* swap = app.add_subcommand("swap", "Execute one trade; print the outcome and impermanent loss");
    CLI::App* split = app.add_subcommand("split-test", "Splitting error Error(N) against the atomic trade");
    CLI::App* price = app.add_subcommand("price-curve", "Relative effective price over a trade-size grid");
    CLI::App* il = app.add_subcommand("il-curve", "Impermanent loss over a trade-size grid");
    CLI::App* field = app.add_subcommand("fee-field", "Fee factor alpha(x, y) on a reserve grid");
    CLI::App* zeroil = app.add_subcommand("zeroil-curve", "Zero-IL fee Phi_k0 against t = k / k0");
    CLI::App* nouni = app.add_subcommand("no-universal", "Conflicting zero-IL requirements at a common k*");

    std::vector<CLI::Option*> fee_opts;
    std::vector<CLI::Option*> engine_opts;

    for (CLI::App* sub : {swap, split, price, il, field, zeroil, nouni}) {
        sub->add_option("--format", cfg.format, "csv, json or table (default from FEELAB_FORMAT)");
        sub->add_option("--out", cfg.out_path, "Write the series to this file instead of standard output");
        sub->add_option("--config", cfg.config_path, "JSON file with default flag values");
    }
    for (CLI::App* sub : {swap, split, price, il, field}) {
        sub->add_option("--x0", cfg.x0, "Initial reserve of token A");
        sub->add_option("--y0", cfg.y0, "Initial reserve of token B");
    }
    for (CLI::App* sub : {swap, split, price, il, field}) {
        fee_opts.push_back(sub->add_option("--fee", cfg.fee, "constant:PHI | linear:SLOPE:KREF | zeroil:KREF | priceratio:BASE"));
    }
    for (CLI::App* sub : {swap, split, price, il}) {
        engine_opts.push_back(sub->add_option("--engine", cfg.engine, "continuous or discrete"));
        sub->add_option("--split", cfg.split, "input_only, balanced or output_only");
    }
    for (CLI::App* sub : {swap, split}) {
        sub->add_option("--dx", cfg.dx, "Total input of token A");
    }
    split->add_option("--n", cfg.n_values, "Comma-separated split counts")->delimiter(',');
    for (CLI::App* sub : {price, il}) {
        sub->add_option("--alpha-max", cfg.alpha_max, "Largest relative trade size dx / x0");
        sub->add_option("--points", cfg.points, "Grid points in (0, alpha-max]");
    }
    field->add_option("--xmin", cfg.x_min);
    field->add_option("--xmax", cfg.x_max);
    field->add_option("--ymin", cfg.y_min);
    field->add_option("--ymax", cfg.y_max);
    field->add_option("--res", cfg.resolution, "Grid points per axis");
    zeroil->add_option("--k0", cfg.k0_ref, "Reference invariant");
    zeroil->add_option("--tmax", cfg.t_max, "Largest t = k / k0");
    zeroil->add_option("--points", cfg.points, "Grid points in [1, tmax]");
    zeroil->add_option("--baseline", cfg.baseline, "Constant fee to compare against");
    nouni->add_option("--kstar", cfg.k_star, "Common target invariant");
    nouni->add_option("--k0", cfg.k0_list, "Comma-separated reference invariants")->delimiter(',');

    // Defaults differ for the zero-IL curve.
    zeroil->preparse_callback([&cfg](std::size_t) { cfg.points = 101; });

    try {
        std::vector<std::string> args = expand_config(std::vector<std::string>(args_in.begin(), args_in.end()));
        std::vector<std::string> storage{"feelab"};
        storage.insert(storage.end(), args.begin(), args.end());
        std::vector<char*> argv;
        for (auto& s : storage) argv.push_back(s.data());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kValidation;
        }
        for (auto* o : fee_opts) cfg.fee_given = cfg.fee_given || o->count() > 0;
        for (auto* o : engine_opts) cfg.engine_given = cfg.engine_given || o->count() > 0;

        CLI::App* chosen = app.get_subcommands().front();
        const Format default_format = chosen == swap ? Format::table : Format::csv;
        // A bad FEELAB_FORMAT only matters when --format does not override it.
        const Format env_default =
            cfg.format.empty() && env.format ? parse_format(*env.format, "FEELAB_FORMAT") : default_format;
        const bool runs_engine = chosen == swap || chosen == split || chosen == price || chosen == il;
        const Validated v = validate(cfg, env_default, runs_engine);

        Output result = [&]() -> Output {
            if (chosen == swap) return cmd_swap(cfg, v);
            if (chosen == split) return cmd_split_test(cfg, v);
            if (chosen == price) return cmd_price_curve(cfg, v);
            if (chosen == il) return cmd_il_curve(cfg, v);
            if (chosen == field) return cmd_fee_field(cfg, v);
            if (chosen == zeroil) return cmd_zeroil_curve(cfg);
            return cmd_no_universal(cfg);
        }();

        if (!cfg.out_path.empty()) {
            std::ofstream file(cfg.out_path, std::ios::binary);
            if (!file) throw FlagError("--out", "cannot write '" + cfg.out_path + "'");
            emit(result.series, v.format, file);
            for (const auto& line : result.summary) out << line << '\n';
        } else {
            emit(result.series, v.format, out);
            // Keep machine-readable stdout clean.
            std::ostream& summary = v.format == Format::table ? out : err;
            for (const auto& line : result.summary) summary << line << '\n';
        }
        return kOk;
    } catch (const FlagError& e) {
        err << "feelab: error: " << e.what() << '\n';
        return kValidation;
    } catch (const Error& e) {
        err << "feelab: error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
}

ExitCode exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::domain:
        case ErrorKind::range:
            return kValidation;
        case ErrorKind::no_bracket:
        case ErrorKind::non_convergence:
        case ErrorKind::non_finite:
            return kNumerical;
    }
    return kNumerical;
}

}  // namespace feelab::cli
