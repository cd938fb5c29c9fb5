#include "bwe/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "bwe/error.hpp"
#include "bwe/format.hpp"

namespace bwe {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        out.push_back(trim(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_number(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::MalformedRow, "invalid number '" + std::string(s) + "'");
    }
    return v;
}

Error at_line(const Error& e, std::size_t line) {
    return Error(e.code(), "line " + std::to_string(line) + ": " + e.what());
}

struct Row {
    YearMonth period;
    double value;
    std::size_t line;
};

template <class Fn>
void for_each_data_line(std::string_view text, std::string_view header, Fn&& fn) {
    std::size_t line_no = 0;
    bool seen_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto next = text.find('\n', pos);
        const auto line = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        pos = next == std::string_view::npos ? text.size() + 1 : next + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!seen_header) {
            std::string h(line);
            if (h.size() >= 3 && static_cast<unsigned char>(h[0]) == 0xEF) h.erase(0, 3);  // UTF-8 BOM
            if (h != header) {
                throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected header '" +
                                                         std::string(header) + "'");
            }
            seen_header = true;
            continue;
        }
        fn(line, line_no);
    }
    if (!seen_header) throw Error(ErrorCode::MalformedRow, "missing header '" + std::string(header) + "'");
}

// Sorts, rejects duplicates and fills short gaps.
std::vector<double> contiguous_values(std::vector<Row>& rows, const std::string& label, int max_gap,
                                      std::vector<std::string>& warnings) {
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.period < b.period; });
    std::vector<double> values{rows.front().value};
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const long gap = months_between(rows[k - 1].period, rows[k].period) - 1;
        if (gap < 0) {
            throw Error(ErrorCode::DuplicatePeriod, "line " + std::to_string(rows[k].line) + ": duplicate period " +
                                                        rows[k].period.str() + " for " + label);
        }
        if (gap > max_gap) {
            throw Error(ErrorCode::GapTooLong, label + ": " + std::to_string(gap) + " missing months after " +
                                                   rows[k - 1].period.str());
        }
        for (long g = 1; g <= gap; ++g) {
            const double t = static_cast<double>(g) / static_cast<double>(gap + 1);
            values.push_back(rows[k - 1].value + t * (rows[k].value - rows[k - 1].value));
        }
        if (gap > 0) {
            warnings.push_back(label + ": interpolated " + std::to_string(gap) + " missing month(s) after " +
                               rows[k - 1].period.str());
        }
        values.push_back(rows[k].value);
    }
    return values;
}

}  // namespace

RawSeriesSet parse_panel_csv(std::string_view text, int max_gap) {
    struct Pending {
        Stage stage;
        std::vector<Row> rows;
    };
    std::map<std::pair<std::string, Kind>, Pending> pending;
    std::map<std::string, Stage> stages;

    for_each_data_line(text, "industry_id,stage,kind,period,value", [&](std::string_view line, std::size_t n) {
        const auto f = split(line, ',');
        if (f.size() != 5 || f[0].empty()) {
            throw Error(ErrorCode::MalformedRow, "line " + std::to_string(n) + ": expected 5 fields");
        }
        try {
            const Stage stage = parse_stage(f[1]);
            const Kind kind = parse_kind(f[2]);
            if (kind == Kind::Production) throw Error(ErrorCode::UnknownKind, "production is derived, not ingested");
            const YearMonth period = YearMonth::parse(f[3]);
            const double value = parse_number(f[4]);
            std::string id(f[0]);
            auto [it, inserted] = stages.emplace(id, stage);
            if (!inserted && it->second != stage) {
                throw Error(ErrorCode::MalformedRow, "industry '" + id + "' listed under two stages");
            }
            auto& p = pending.try_emplace({id, kind}, Pending{stage, {}}).first->second;
            p.rows.push_back({period, value, n});
        } catch (const Error& e) {
            if (std::string_view(e.what()).starts_with("line ")) throw;
            throw at_line(e, n);
        }
    });

    RawSeriesSet out;
    for (auto& [key, p] : pending) {
        const std::string label = key.first + "/" + std::string(kind_name(key.second));
        auto values = contiguous_values(p.rows, label, max_gap, out.warnings);
        const YearMonth start = p.rows.front().period;
        out.series.emplace(key, MonthlySeries(key.first, p.stage, key.second, start, std::move(values)));
    }
    return out;
}

std::map<Stage, MonthlySeries> parse_deflator_csv(std::string_view text) {
    std::map<Stage, std::vector<Row>> pending;
    for_each_data_line(text, "stage,period,value", [&](std::string_view line, std::size_t n) {
        const auto f = split(line, ',');
        if (f.size() != 3) throw Error(ErrorCode::MalformedRow, "line " + std::to_string(n) + ": expected 3 fields");
        try {
            pending[parse_stage(f[0])].push_back({YearMonth::parse(f[1]), parse_number(f[2]), n});
        } catch (const Error& e) {
            throw at_line(e, n);
        }
    });
    std::map<Stage, MonthlySeries> out;
    std::vector<std::string> ignored;
    for (auto& [stage, rows] : pending) {
        auto values = contiguous_values(rows, "deflator " + std::string(stage_code(stage)), 0, ignored);
        out.emplace(stage, MonthlySeries("deflator", stage, Kind::PriceIndex, rows.front().period, std::move(values)));
    }
    return out;
}

MonthlySeries deflate(const MonthlySeries& nominal, const MonthlySeries& deflator) {
    if (!deflator.covers(nominal.start(), nominal.end())) {
        throw Error(ErrorCode::Misaligned, "deflator " + deflator.start().str() + ".." + deflator.end().str() +
                                               " does not cover " + nominal.industry_id() + " " +
                                               nominal.start().str() + ".." + nominal.end().str());
    }
    const auto offset = static_cast<std::size_t>(months_between(deflator.start(), nominal.start()));
    std::vector<double> real(nominal.size());
    for (std::size_t k = 0; k < nominal.size(); ++k) {
        const double index = deflator[offset + k];
        if (!(index > 0.0)) {
            throw Error(ErrorCode::NonPositiveDeflator, "deflator is not positive at " + nominal.start().plus(static_cast<long>(k)).str());
        }
        real[k] = nominal[k] / (index / 100.0);
    }
    return nominal.with_values(std::move(real));
}

MarginConfig MarginConfig::defaults() {
    return {{{Stage::Manufacturer, 0.0}, {Stage::Wholesaler, 0.15}, {Stage::Retailer, 0.30}}};
}

void MarginConfig::validate() const {
    for (const auto& [stage, rate] : rates) {
        if (!(rate >= 0.0 && rate < 1.0)) {
            throw Error(ErrorCode::Config, "margin rate for stage " + std::string(stage_code(stage)) + " must be in [0, 1)");
        }
    }
}

MonthlySeries margin_adjust(const MonthlySeries& sales, const MarginConfig& cfg) {
    if (sales.kind() != Kind::Demand) {
        throw Error(ErrorCode::InvalidArgument, "margin adjustment applies to demand series only");
    }
    const auto it = cfg.rates.find(sales.stage());
    if (it == cfg.rates.end()) {
        throw Error(ErrorCode::MissingRate, "no margin rate for stage " + std::string(stage_code(sales.stage())));
    }
    const double keep = 1.0 - it->second;
    std::vector<double> cost(sales.values().begin(), sales.values().end());
    for (double& v : cost) v *= keep;
    return sales.with_values(std::move(cost));
}

void IndustryPanel::validate() const {
    for (const auto& [id, rec] : industries) {
        for (const MonthlySeries* s : {&rec.demand, &rec.inventory}) {
            if (s->start() != start || s->end() != end) {
                throw Error(ErrorCode::Misaligned, id + " " + std::string(kind_name(s->kind())) + " spans " +
                                                       s->start().str() + ".." + s->end().str() + ", panel spans " +
                                                       start.str() + ".." + end.str());
            }
            if (s->industry_id() != id || s->stage() != rec.stage) {
                throw Error(ErrorCode::Misaligned, id + ": series identity does not match its record");
            }
        }
    }
}

IndustryPanel assemble_panel(const RawSeriesSet& raw) {
    IndustryPanel panel;
    bool first = true;
    for (const auto& [key, series] : raw.series) {
        if (key.second != Kind::Demand) continue;
        const auto inv = raw.series.find({key.first, Kind::Inventory});
        if (inv == raw.series.end()) throw Error(ErrorCode::Misaligned, key.first + " has demand but no inventory");
        if (first) {
            panel.start = series.start();
            panel.end = series.end();
            first = false;
        }
        panel.industries.emplace(key.first, IndustryRecord{series.stage(), series, inv->second});
    }
    for (const auto& [key, series] : raw.series) {
        if (key.second == Kind::Inventory && !panel.industries.contains(key.first)) {
            throw Error(ErrorCode::Misaligned, key.first + " has inventory but no demand");
        }
    }
    if (panel.industries.empty()) throw Error(ErrorCode::TooShort, "panel has no industries");
    panel.validate();
    return panel;
}

IndustryPanel preprocess_panel(const IndustryPanel& nominal, const std::map<Stage, MonthlySeries>* deflators,
                               const MarginConfig& margins) {
    margins.validate();
    IndustryPanel out;
    out.start = nominal.start;
    out.end = nominal.end;
    for (const auto& [id, rec] : nominal.industries) {
        MonthlySeries demand = rec.demand;
        MonthlySeries inventory = rec.inventory;
        if (deflators != nullptr) {
            const auto it = deflators->find(rec.stage);
            if (it == deflators->end()) {
                throw Error(ErrorCode::Misaligned, "no deflator for stage " + std::string(stage_code(rec.stage)));
            }
            demand = deflate(demand, it->second);
            inventory = deflate(inventory, it->second);
        }
        demand = margin_adjust(demand, margins);
        out.industries.emplace(id, IndustryRecord{rec.stage, std::move(demand), std::move(inventory)});
    }
    out.validate();
    return out;
}

IndustryPanel slice_panel(const IndustryPanel& panel, YearMonth from, YearMonth to) {
    IndustryPanel out;
    out.start = from;
    out.end = to;
    for (const auto& [id, rec] : panel.industries) {
        out.industries.emplace(id, IndustryRecord{rec.stage, rec.demand.slice(from, to), rec.inventory.slice(from, to)});
    }
    return out;
}

std::pair<IndustryPanel, IndustryPanel> split_panel(const IndustryPanel& panel, YearMonth train_end) {
    if (!(train_end >= panel.start && train_end < panel.end)) {
        throw Error(ErrorCode::OutOfRange, "split point " + train_end.str() + " must lie in " + panel.start.str() +
                                               ".." + panel.end.plus(-1).str());
    }
    if (months_between(panel.start, train_end) < 1 || months_between(train_end, panel.end) < 2) {
        throw Error(ErrorCode::OutOfRange, "split at " + train_end.str() + " leaves a side shorter than 2 months");
    }
    return {slice_panel(panel, panel.start, train_end), slice_panel(panel, train_end.plus(1), panel.end)};
}

std::string write_panel_csv(const IndustryPanel& panel) {
    std::ostringstream os;
    os << "industry_id,stage,kind,period,value\n";
    for (const auto& [id, rec] : panel.industries) {
        for (const MonthlySeries* s : {&rec.demand, &rec.inventory}) {
            for (std::size_t k = 0; k < s->size(); ++k) {
                os << id << ',' << stage_code(rec.stage) << ',' << kind_name(s->kind()) << ','
                   << s->start().plus(static_cast<long>(k)).str() << ',' << format_number((*s)[k]) << '\n';
            }
        }
    }
    return os.str();
}

}  // namespace bwe
