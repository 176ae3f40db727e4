#pragma once

#include "stumpcover/learners.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace stumpcover {

/// Plain-text model format: a tag line
///   model <kind> <target> n=<attributes> stumps=<count>
/// followed by one stump per line (`k d t` deterministic, `k d a b`
/// interval), then `meta key=value` lines. Reals use 17 significant digits,
/// so emit/parse round-trips bit-exactly.
std::string write_model(const LearnedModel& model);
void write_model_file(const std::filesystem::path& path, const LearnedModel& model);

LearnedModel read_model(std::istream& in, const std::string& origin = "<stream>");
LearnedModel read_model_file(const std::filesystem::path& path);

}  // namespace stumpcover
