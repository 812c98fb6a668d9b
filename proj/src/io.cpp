#include "circacp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "circacp/error.hpp"

namespace circacp {

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    std::optional<std::size_t> column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        return std::nullopt;
    }
    std::size_t require(std::string_view name) const {
        if (auto c = column(name)) return *c;
        throw ParseError("missing column '" + std::string(name) + "'", 1);
    }
};

Table read_table(std::string_view text) {
    Table t;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() : end + 1;
        ++line_no;
        if (line_no == 1 && line.substr(0, 3) == "\xEF\xBB\xBF") line.remove_prefix(3);
        const auto fields = split_fields(line, ',');
        if (fields.size() == 1 && fields[0].empty()) continue;
        std::vector<std::string> row(fields.begin(), fields.end());
        if (t.header.empty()) {
            t.header = std::move(row);
            continue;
        }
        if (row.size() != t.header.size())
            throw ParseError("expected " + std::to_string(t.header.size()) + " fields, found " +
                                 std::to_string(row.size()),
                             line_no);
        t.rows.push_back(std::move(row));
        t.line_numbers.push_back(line_no);
    }
    if (t.header.empty()) throw ParseError("empty input: header row expected");
    return t;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError("cannot parse number '" + s + "'", line);
    return v;
}

Timestamp to_timestamp(const std::string& s, std::size_t line) {
    try {
        return parse_timestamp(s);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error("write to '" + path + "' failed");
}

void write_series_csv(std::ostream& os, const EpochSeries& s) {
    os << "timestamp,count,marker\n";
    std::size_t m = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool marked = m < s.markers.size() && s.markers[m] == i;
        if (marked) ++m;
        os << format_timestamp(s.time_at(i)) << ',' << format_double(s.counts[i]) << ',' << (marked ? 1 : 0) << '\n';
    }
}

void write_truth_csv(std::ostream& os, const EpochSeries& s, const GroundTruth& truth) {
    os << "index,wall_time,label,is_marker\n";
    for (const auto& e : truth.events)
        os << e.index << ',' << format_timestamp(s.time_at(e.index)) << ',' << to_string(e.label) << ",0\n";
    for (const auto& e : truth.markers)
        os << e.index << ',' << format_timestamp(s.time_at(e.index)) << ',' << to_string(e.label) << ",1\n";
}

void write_events_csv(std::ostream& os, const std::string& subject_id, std::span<const ChangePointEvent> events) {
    os << "subject_id,wall_time,label,index,provenance\n";
    for (const auto& e : events)
        os << subject_id << ',' << format_timestamp(e.wall_time) << ',' << to_string(e.label) << ',' << e.index << ','
           << to_string(e.provenance) << '\n';
}

void write_pairs_csv(std::ostream& os, std::span<const ValidationPair> pairs) {
    os << "subject_id,day_index,label,estimated_time,marker_time,estimated_min,marker_min,diff\n";
    for (const auto& p : pairs)
        os << p.subject_id << ',' << p.day_index << ',' << to_string(p.label) << ',' << format_timestamp(p.estimated_time)
           << ',' << format_timestamp(p.marker_time) << ',' << format_double(p.estimated_min) << ','
           << format_double(p.marker_min) << ',' << format_double(p.diff) << '\n';
}

std::vector<SubjectEvent> read_events_csv(std::string_view text) {
    const Table t = read_table(text);
    const auto subject = t.require("subject_id");
    const auto time = t.require("wall_time");
    const auto label = t.require("label");
    const auto index = t.column("index");
    const auto provenance = t.column("provenance");

    std::vector<SubjectEvent> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line = t.line_numbers[r];
        SubjectEvent se;
        se.subject_id = row[subject];
        se.event.wall_time = to_timestamp(row[time], line);
        try {
            se.event.label = parse_transition(row[label]);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line);
        }
        if (index) se.event.index = static_cast<std::size_t>(to_double(row[*index], line));
        if (provenance) {
            const std::string& p = row[*provenance];
            if (p.rfind("cp-pass", 0) == 0) se.event.provenance.pass = static_cast<int>(to_double(p.substr(7), line));
        }
        out.push_back(std::move(se));
    }
    return out;
}

std::vector<MarkerRecord> read_marker_csv(std::string_view text) {
    const Table t = read_table(text);
    const auto subject = t.column("subject_id");
    std::optional<std::size_t> time = t.column("wall_time");
    if (!time) time = t.column("timestamp");
    if (!time) throw ParseError("marker file needs a wall_time or timestamp column", 1);
    std::optional<std::size_t> flag = t.column("is_marker");
    if (!flag) flag = t.column("marker");

    std::vector<MarkerRecord> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::size_t line = t.line_numbers[r];
        if (flag && to_double(row[*flag], line) == 0.0) continue;
        MarkerRecord m;
        if (subject) m.subject_id = row[*subject];
        m.time = to_timestamp(row[*time], line);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace circacp
