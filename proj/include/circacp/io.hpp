#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "circacp/detector.hpp"
#include "circacp/ingest.hpp"
#include "circacp/synth.hpp"
#include "circacp/validate.hpp"

namespace circacp {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

/// timestamp,count,marker
void write_series_csv(std::ostream& os, const EpochSeries& s);
/// index,wall_time,label,is_marker; true events first, then markers.
void write_truth_csv(std::ostream& os, const EpochSeries& s, const GroundTruth& truth);
/// subject_id,wall_time,label,index,provenance
void write_events_csv(std::ostream& os, const std::string& subject_id, std::span<const ChangePointEvent> events);
/// subject_id,day_index,label,estimated_time,marker_time,estimated_min,marker_min,diff
void write_pairs_csv(std::ostream& os, std::span<const ValidationPair> pairs);

struct SubjectEvent {
    std::string subject_id;
    ChangePointEvent event;
};

/// Reads an events CSV; subject_id, wall_time and label are required, index and
/// provenance optional.
std::vector<SubjectEvent> read_events_csv(std::string_view text);

struct MarkerRecord {
    std::optional<std::string> subject_id;
    Timestamp time{};
};

/// Marker times from any of:
///   - a ground-truth CSV (wall_time + is_marker): rows with is_marker != 0
///   - an actigraphy CSV (timestamp + marker): rows with marker != 0
///   - a plain list with a wall_time or timestamp column: every row
/// A subject_id column, when present, scopes markers to that subject.
std::vector<MarkerRecord> read_marker_csv(std::string_view text);

}  // namespace circacp
