#pragma once

#include <span>
#include <string>

#include "circacp/detector.hpp"
#include "circacp/ingest.hpp"
#include "circacp/validate.hpp"

namespace circacp {

/// Activity counts (per-pixel maxima) over shaded detected sleep, with the
/// cosinor states as a strip underneath.
std::string svg_overlay(const EpochSeries& s, const DetectionResult& result);

/// Difference against mean of the two timings, one marker colour per label,
/// with bias and limits of agreement drawn as horizontal lines.
std::string svg_bland_altman(std::span<const ValidationPair> pairs, const AgreementReport& report);

}  // namespace circacp
