#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include "ofi/errors.hpp"
#include "ofi/flow.hpp"
#include "ofi/pipeline.hpp"
#include "ofi/text.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace ofi {
namespace {

std::string num(double v) {
    return text::format_double(v);
}

std::string num(std::optional<double> v) {
    return v ? text::format_double(*v) : std::string();
}

std::string count(std::size_t v) {
    return std::to_string(v);
}

std::string pct(double share) {
    return text::format_double(100.0 * share);
}

template <class T, class F>
std::string mean_of(const std::vector<T>& items, F&& get) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& item : items) {
        if (std::optional<double> v = get(item)) {
            sum += *v;
            ++n;
        }
    }
    return n == 0 ? std::string() : num(sum / static_cast<double>(n));
}

std::optional<double> parse_cell(const std::string& cell) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        return std::nullopt;
    }
    return v;
}

/// Appends an "Average" row: column-wise mean of the numeric cells.
void append_average(Table& t) {
    if (t.rows.empty()) {
        return;
    }
    std::vector<std::string> avg{"Average"};
    for (std::size_t c = 1; c < t.columns.size(); ++c) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& row : t.rows) {
            if (auto v = parse_cell(row[c])) {
                sum += *v;
                ++n;
            }
        }
        avg.push_back(n == 0 ? std::string() : num(sum / static_cast<double>(n)));
    }
    t.rows.push_back(std::move(avg));
}

void add_spec_columns(std::vector<std::string>& cols, const std::string& prefix) {
    for (const char* c : {"_r2", "_t", "_sig_pct", "_f", "_windows"}) {
        cols.push_back(prefix + c);
    }
}

void add_spec_cells(std::vector<std::string>& row, const SpecSummary& s) {
    if (s.windows == 0) {
        row.insert(row.end(), {"", "", "", "", "0"});
        return;
    }
    row.push_back(num(s.mean_r_squared));
    row.push_back(num(s.mean_t.at(0)));
    row.push_back(pct(s.share_significant.at(0)));
    row.push_back(num(s.mean_f));
    row.push_back(count(s.windows));
}

void add_both_columns(std::vector<std::string>& cols, const std::string& first, const std::string& second) {
    cols.insert(cols.end(), {"both_r2", "both_t_" + first, "both_t_" + second, "both_" + first + "_sig_pct",
                             "both_" + second + "_sig_pct", "both_f", "both_windows"});
}

void add_both_cells(std::vector<std::string>& row, const SpecSummary& s) {
    if (s.windows == 0) {
        row.insert(row.end(), {"", "", "", "", "", "", "0"});
        return;
    }
    row.push_back(num(s.mean_r_squared));
    row.push_back(num(s.mean_t.at(0)));
    row.push_back(num(s.mean_t.at(1)));
    row.push_back(pct(s.share_significant.at(0)));
    row.push_back(pct(s.share_significant.at(1)));
    row.push_back(num(s.mean_f));
    row.push_back(count(s.windows));
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + '"';
}

ordered_json json_cell(const std::string& s) {
    if (s.empty()) {
        return nullptr;
    }
    if (auto v = parse_cell(s); v && std::isfinite(*v)) {
        return *v;
    }
    return s;
}

void write_table_json(std::ostream& out, const Table& t, std::string_view version) {
    ordered_json j;
    j["table"] = t.name;
    j["tool_version"] = version;
    j["columns"] = t.columns;
    auto rows = ordered_json::array();
    for (const auto& r : t.rows) {
        ordered_json obj = ordered_json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            obj[t.columns[c]] = json_cell(r[c]);
        }
        rows.push_back(std::move(obj));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write " + path.string());
    }
    writer(out);
    out.flush();
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

using WindowKey = std::tuple<TradingDay, std::size_t>;

}  // namespace

Table impact_summary(const RunReport& report) {
    Table t{"impact_summary",
            {"ticker", "alpha", "t_alpha", "beta", "t_beta", "gamma_q", "t_gamma_q", "r2", "alpha_sig_pct",
             "beta_sig_pct", "gamma_q_sig_pct", "windows"},
            {}};
    for (const auto& s : report.symbols) {
        if (!s.ok || s.impact.empty()) {
            continue;
        }
        const auto& w = s.impact;
        const auto& q = s.impact_quadratic;
        auto share = [](const std::vector<ImpactWindowResult>& v, bool ImpactWindowResult::*flag) {
            std::size_t hits = 0;
            for (const auto& r : v) {
                hits += (r.*flag) ? 1 : 0;
            }
            return v.empty() ? std::string() : pct(static_cast<double>(hits) / static_cast<double>(v.size()));
        };
        t.rows.push_back({s.symbol,
                          mean_of(w, [](const auto& r) { return std::optional<double>(r.alpha); }),
                          mean_of(w, [](const auto& r) { return std::optional<double>(r.t_alpha); }),
                          mean_of(w, [](const auto& r) { return std::optional<double>(r.beta); }),
                          mean_of(w, [](const auto& r) { return std::optional<double>(r.t_beta); }),
                          mean_of(q, [](const auto& r) { return r.gamma; }),
                          mean_of(q, [](const auto& r) { return r.t_gamma; }),
                          mean_of(w, [](const auto& r) { return std::optional<double>(r.r_squared); }),
                          share(w, &ImpactWindowResult::alpha_significant),
                          share(w, &ImpactWindowResult::beta_significant),
                          share(q, &ImpactWindowResult::gamma_significant),
                          count(w.size())});
    }
    append_average(t);
    return t;
}

Table depth_fit(const RunReport& report) {
    Table t{"depth_fit",
            {"ticker", "c", "lambda", "t_c", "t_lambda", "c_lo", "c_hi", "lambda_lo", "lambda_hi", "r2",
             "corr2_fitted", "corr2_restricted", "windows_used", "windows_excluded_nonpositive", "nw_lags"},
            {}};
    for (const auto& s : report.symbols) {
        if (!s.ok || !s.depth) {
            continue;
        }
        const auto& d = *s.depth;
        t.rows.push_back({s.symbol, num(d.c), num(d.lambda), num(d.c_t), num(d.lambda_t), num(d.c_lo), num(d.c_hi),
                          num(d.lambda_lo), num(d.lambda_hi), num(d.r_squared_log), num(d.corr2_fitted),
                          num(d.corr2_restricted), count(d.windows_used), count(d.windows_nonpositive),
                          std::to_string(d.nw_lags)});
    }
    append_average(t);
    return t;
}

Table trade_imbalance(const RunReport& report) {
    Table t{"trade_imbalance", {"ticker"}, {}};
    add_spec_columns(t.columns, "ofi");
    add_spec_columns(t.columns, "ti");
    add_both_columns(t.columns, "ofi", "ti");
    for (const auto& s : report.symbols) {
        if (!s.ok || s.levels.empty()) {
            continue;
        }
        std::vector<std::string> row{s.symbol};
        add_spec_cells(row, s.levels_summary.flow);
        add_spec_cells(row, s.levels_summary.trades);
        add_both_cells(row, s.levels_summary.both);
        t.rows.push_back(std::move(row));
    }
    append_average(t);
    return t;
}

Table volume_scaling(const RunReport& report) {
    Table t{"volume_scaling", {"ticker", "h_mean", "h_sd", "h_windows"}, {}};
    add_spec_columns(t.columns, "ofi");
    add_spec_columns(t.columns, "vol");
    add_both_columns(t.columns, "ofi", "vol");
    for (const auto& s : report.symbols) {
        if (!s.ok || s.exponent_stats.count == 0) {
            continue;
        }
        const auto& h = s.exponent_stats;
        std::vector<std::string> row{s.symbol, num(h.mean), h.count > 1 ? num(h.sd) : std::string(),
                                     count(h.count)};
        add_spec_cells(row, s.magnitudes_summary.flow);
        add_spec_cells(row, s.magnitudes_summary.trades);
        add_both_cells(row, s.magnitudes_summary.both);
        t.rows.push_back(std::move(row));
    }
    append_average(t);
    return t;
}

Table window_detail(const RunReport& report) {
    Table t{"window_detail",
            {"ticker", "day", "window", "observations", "alpha", "t_alpha", "beta", "t_beta", "r2",
             "residual_excess_kurtosis", "gamma_q", "t_gamma_q", "depth", "h", "var_dp", "var_ofi", "beta2_var_ofi",
             "variance_degenerate"},
            {}};
    for (const auto& s : report.symbols) {
        if (!s.ok) {
            continue;
        }
        std::map<WindowKey, const ImpactWindowResult*> quad;
        for (const auto& q : s.impact_quadratic) {
            quad[{q.day, q.window}] = &q;
        }
        std::map<WindowKey, const VarianceWindow*> var;
        for (const auto& v : s.variance) {
            var[{v.day, v.window}] = &v;
        }
        std::map<WindowKey, double> exps;
        for (std::size_t d = 0; d < s.exponents.size() && d < s.series.size(); ++d) {
            for (std::size_t i = 0; i < s.exponents[d].size(); ++i) {
                if (s.exponents[d][i]) {
                    exps[{s.series[d].day, i}] = *s.exponents[d][i];
                }
            }
        }
        for (const auto& w : s.impact) {
            const WindowKey key{w.day, w.window};
            const auto q = quad.find(key);
            const auto v = var.find(key);
            const auto h = exps.find(key);
            t.rows.push_back({s.symbol, text::format_date(w.day), count(w.window), count(w.observations),
                              num(w.alpha), num(w.t_alpha), num(w.beta), num(w.t_beta), num(w.r_squared),
                              num(w.residual_excess_kurtosis), q == quad.end() ? "" : num(q->second->gamma),
                              q == quad.end() ? "" : num(q->second->t_gamma), num(w.depth),
                              h == exps.end() ? "" : num(h->second), v == var.end() ? "" : num(v->second->var_dp),
                              v == var.end() ? "" : num(v->second->var_ofi),
                              v == var.end() ? "" : num(v->second->beta2_var_ofi),
                              v == var.end() ? "" : (v->second->degenerate ? "1" : "0")});
        }
    }
    return t;
}

Table rejection_counts(const RunReport& report) {
    Table t{"rejection_counts",
            {"ticker", "file", "kind", "parsed", "accepted", "rejected", "malformed", "wrong_date", "out_of_session",
             "non_positive", "excluded_code", "balanced"},
            {}};
    for (const auto& s : report.symbols) {
        for (const auto& f : s.files) {
            const auto& st = f.stats;
            t.rows.push_back({s.symbol, f.file, f.kind, count(st.parsed), count(st.accepted), count(st.rejected),
                              count(st.malformed), count(st.wrong_date), count(st.out_of_session),
                              count(st.non_positive), count(st.excluded_code),
                              st.parsed == st.accepted + st.rejected ? "1" : "0"});
        }
    }
    return t;
}

Table day_counts(const RunReport& report) {
    Table t{"day_counts",
            {"ticker", "day", "snapshots", "crossed", "spread_removed", "spread_threshold", "events", "trades",
             "trades_unmatched"},
            {}};
    for (const auto& s : report.symbols) {
        for (const auto& d : s.days) {
            t.rows.push_back({s.symbol, text::format_date(d.day), count(d.snapshots), count(d.crossed),
                              count(d.spread_removed), text::format_price(s.spread_threshold), count(d.events),
                              count(d.trades), count(d.trades_unmatched)});
        }
    }
    return t;
}

Table skipped_windows(const RunReport& report) {
    Table t{"skipped_windows", {"ticker", "stage", "day", "window", "reason"}, {}};
    for (const auto& s : report.symbols) {
        for (const auto& k : s.skipped) {
            t.rows.push_back(
                {s.symbol, k.stage, text::format_date(k.window.day), count(k.window.window), k.window.reason});
        }
        for (const auto& w : s.levels) {
            if (!w.note.empty()) {
                t.rows.push_back({s.symbol, "trade_imbalance", text::format_date(w.day), count(w.window), w.note});
            }
        }
        for (const auto& w : s.magnitudes) {
            if (!w.note.empty()) {
                t.rows.push_back({s.symbol, "volume", text::format_date(w.day), count(w.window), w.note});
            }
        }
    }
    return t;
}

Table symbol_errors(const RunReport& report) {
    Table t{"symbol_errors", {"ticker", "stage", "error"}, {}};
    for (const auto& s : report.symbols) {
        if (!s.ok) {
            t.rows.push_back({s.symbol, "symbol", s.error});
        } else if (!s.depth_error.empty()) {
            t.rows.push_back({s.symbol, "depth", s.depth_error});
        }
    }
    return t;
}

std::vector<Table> profile_tables(const RunReport& report) {
    const std::pair<const char*, const SeasonalityProfile*> profiles[] = {
        {"profile_beta", &report.beta_profile},
        {"profile_depth", &report.depth_profile},
        {"profile_var_dp", &report.var_dp_profile},
        {"profile_var_ofi", &report.var_ofi_profile},
        {"profile_beta2_var_ofi", &report.beta2_var_ofi_profile},
    };
    std::vector<Table> out;
    for (const auto& [name, p] : profiles) {
        Table t{name, {"slot", "value"}, {}};
        for (std::size_t i = 0; i < p->values.size(); ++i) {
            t.rows.push_back({count(i), num(p->values[i])});
        }
        out.push_back(std::move(t));
    }
    return out;
}

Table run_config(const RunReport& report) {
    Table t{"run_config", {"key", "value"}, {}};
    t.rows.push_back({"tool_version", report.tool_version});
    const auto j = ordered_json::parse(config_to_json(report.config));
    for (const auto& [key, v] : j.items()) {
        std::string value;
        if (v.is_string()) {
            value = v.get<std::string>();
        } else if (v.is_array()) {
            for (const auto& item : v) {
                value += (value.empty() ? "" : ";") + (item.is_string() ? item.get<std::string>() : item.dump());
            }
        } else if (!v.is_null()) {
            value = v.dump();
        }
        t.rows.push_back({key, value});
    }
    return t;
}

void write_table_csv(std::ostream& out, const Table& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        out << (c ? "," : "") << csv_cell(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << csv_cell(row[c]);
        }
        out << '\n';
    }
}

void emit_reports(const RunReport& report, const fs::path& out_dir, const std::set<ReportFormat>& formats) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory " + out_dir.string());
    }
    std::vector<Table> tables{run_config(report),      impact_summary(report),   depth_fit(report),
                              trade_imbalance(report), volume_scaling(report), window_detail(report),
                              rejection_counts(report), day_counts(report),     skipped_windows(report),
                              symbol_errors(report)};
    for (auto& p : profile_tables(report)) {
        tables.push_back(std::move(p));
    }
    for (const auto& t : tables) {
        if (formats.contains(ReportFormat::csv)) {
            write_file(out_dir / (t.name + ".csv"), [&](std::ostream& o) { write_table_csv(o, t); });
        }
        if (formats.contains(ReportFormat::json)) {
            write_file(out_dir / (t.name + ".json"),
                       [&](std::ostream& o) { write_table_json(o, t, report.tool_version); });
        }
    }
    for (const auto& s : report.symbols) {
        if (s.ok) {
            write_file(out_dir / ("buckets_" + s.symbol + ".csv"),
                       [&](std::ostream& o) { write_bucket_csv(o, s.series); });
        }
    }
}

}  // namespace ofi
