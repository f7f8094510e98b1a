#pragma once

#include <filesystem>
#include <string>

#include "dcqaoa/metalearn.hpp"
#include "dcqaoa/problems.hpp"

namespace dcqaoa::io {

/// {"kind": str, "n": int, "seed": int, "edges": [[i, j, w], ...]}, floats
/// with 17 significant digits so files round-trip bit-exactly.
std::string graph_to_json(const problems::ProblemInstance& instance);
problems::ProblemInstance graph_from_json(const std::string& text);

/// Trained cell: kind, d, algorithm, p, named row-major blocks and the
/// training log. Same 17-digit float convention.
std::string weights_to_json(const metalearn::TrainedCell& cell);
metalearn::TrainedCell weights_from_json(const std::string& text);

/// File helpers. Reading a missing file raises ArtifactError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

void save_weights(const std::filesystem::path& path,
                  const metalearn::TrainedCell& cell);
metalearn::TrainedCell load_weights(const std::filesystem::path& path);

/// Shortest form is not used; always 17 significant digits.
std::string format_double(double v);

}  // namespace dcqaoa::io
