#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "cmp/core.hpp"

namespace cmp {

struct ArchiveEntry {
  std::string instance;
  int makespan = 0;
  std::int64_t distance_sum = 0;
  std::string solver;
  std::int64_t timestamp = 0;
  std::filesystem::path file;
};

struct QuarantinedFile {
  std::filesystem::path file;
  std::string reason;
};

struct ArchiveListing {
  std::vector<ArchiveEntry> entries;  // sorted by instance, makespan, distance, time
  std::vector<QuarantinedFile> quarantined;
};

/// Instance for a name, or nullptr when unknown.
using InstanceLookup = std::function<const Instance*(const std::string&)>;

/// "<instance>.<makespan>.<timestamp>.json", with unsafe characters of the
/// instance name replaced by '_'.
std::string archive_file_name(const std::string& instance, int makespan, std::int64_t timestamp);

/// Writes `s` with solver tag and timestamp into `dir` (created if needed)
/// by atomic rename. A clashing name gets a ".<k>" counter before ".json".
std::filesystem::path archive_store(const std::filesystem::path& dir, const Solution& s,
                                    const std::string& solver, std::int64_t timestamp);

/// Reads every *.json file in `dir`. Files that do not parse, lack the
/// metadata, or (when `lookup` knows the instance) fail to validate or
/// disagree with their metadata are quarantined.
ArchiveListing archive_scan(const std::filesystem::path& dir, const InstanceLookup& lookup = {});

/// Minimum-makespan entry per instance (ties: smaller distance sum, then older).
std::vector<ArchiveEntry> archive_best(const ArchiveListing& listing);

/// Entries dominated in (makespan, distance sum) by another entry of the
/// same instance. Of identical pairs the oldest survives.
std::vector<ArchiveEntry> archive_dominated(const ArchiveListing& listing);

/// Deletes the dominated entries and returns them. Quarantined files stay.
std::vector<ArchiveEntry> archive_gc(const std::filesystem::path& dir,
                                     const InstanceLookup& lookup = {});

}  // namespace cmp
