#pragma once

// MNT v1 text templates and dataset directory scanning.
//
//   MNT 1
//   <width> <height>
//   <count>
//   <x> <y> <direction> <E|B> <quality>     (count lines)
//
// Lines starting with '#' are comments.

#include "fpmatch/core_model.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fpmatch {

/// Throws FormatError on malformed text and RangeError on values that break
/// a Minutia invariant or fall outside the image box.
MinutiaTemplate parse_template(std::string_view text, std::string id = {});

/// Numbers are written with six decimals.
std::string write_template(const MinutiaTemplate& t);

/// Reads and parses a file; the template id is the file stem.
MinutiaTemplate load_template(const std::filesystem::path& path);

void save_template(const std::filesystem::path& path, const MinutiaTemplate& t);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

struct ManifestEntry {
    int subject = 0;
    int impression = 0;
    std::filesystem::path path;
};

struct DatasetManifest {
    std::string name;
    std::vector<ManifestEntry> entries;  // sorted by (subject, impression)
};

inline constexpr std::string_view kDefaultDatasetPattern = R"((\d+)_(\d+)\.mnt)";

/// Collects the regular files in `root` (non-recursive) whose names fully
/// match `pattern`; its first two capture groups are subject and impression.
/// Throws IoError if `root` is not a readable directory and DuplicateEntry if
/// two files map to the same (subject, impression).
DatasetManifest scan_dataset(const std::filesystem::path& root,
                             std::string_view pattern = kDefaultDatasetPattern);

}  // namespace fpmatch
