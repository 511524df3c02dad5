#include "cmp/archive.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "cmp/errors.hpp"
#include "cmp/io.hpp"
#include "cmp/validate.hpp"

namespace cmp {

namespace fs = std::filesystem;

namespace {

std::string safe_name(const std::string& s) {
  std::string out = s.empty() ? "unnamed" : s;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return out;
}

auto order_key(const ArchiveEntry& e) {
  return std::tie(e.instance, e.makespan, e.distance_sum, e.timestamp, e.file);
}

}  // namespace

std::string archive_file_name(const std::string& instance, int makespan, std::int64_t timestamp) {
  return safe_name(instance) + "." + std::to_string(makespan) + "." + std::to_string(timestamp) +
         ".json";
}

fs::path archive_store(const fs::path& dir, const Solution& s, const std::string& solver,
                       std::int64_t timestamp) {
  fs::create_directories(dir);
  const std::string base = archive_file_name(s.instance_name, s.makespan(), timestamp);
  fs::path target = dir / base;
  for (int k = 1; fs::exists(target); ++k) {
    target = dir / (base.substr(0, base.size() - 5) + "." + std::to_string(k) + ".json");
  }
  write_file_atomic(target.string(), write_solution(s, {solver, timestamp}));
  return target;
}

ArchiveListing archive_scan(const fs::path& dir, const InstanceLookup& lookup) {
  ArchiveListing out;
  if (!fs::is_directory(dir)) return out;
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(dir)) {
    if (de.is_regular_file() && de.path().extension() == ".json") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  for (const fs::path& f : files) {
    try {
      const std::string text = read_file(f.string());
      const SolutionHeader h = read_solution_header(text);
      if (!h.makespan || !h.distance_sum || !h.timestamp) {
        out.quarantined.push_back({f, "missing makespan, distance sum or timestamp"});
        continue;
      }
      if (const Instance* inst = lookup ? lookup(h.instance) : nullptr) {
        const Solution s = read_solution(text, *inst);
        const ValidationReport rep = validate(*inst, s);
        if (!rep.feasible) {
          out.quarantined.push_back({f, "infeasible: " + describe(rep.violations.front())});
          continue;
        }
        if (rep.makespan != *h.makespan || rep.distance_sum != *h.distance_sum) {
          out.quarantined.push_back({f, "metadata disagrees with the solution"});
          continue;
        }
      }
      out.entries.push_back({h.instance, *h.makespan, *h.distance_sum, h.solver, *h.timestamp, f});
    } catch (const std::exception& e) {
      out.quarantined.push_back({f, e.what()});
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const ArchiveEntry& a, const ArchiveEntry& b) { return order_key(a) < order_key(b); });
  return out;
}

std::vector<ArchiveEntry> archive_best(const ArchiveListing& listing) {
  std::vector<ArchiveEntry> out;
  for (const ArchiveEntry& e : listing.entries) {
    if (out.empty() || out.back().instance != e.instance) out.push_back(e);
  }
  return out;
}

std::vector<ArchiveEntry> archive_dominated(const ArchiveListing& listing) {
  // Entries are sorted by (makespan, distance, time) within an instance, so
  // an entry survives iff its distance beats every earlier survivor's.
  std::vector<ArchiveEntry> out;
  std::map<std::string, std::int64_t> best_distance;
  for (const ArchiveEntry& e : listing.entries) {
    auto it = best_distance.find(e.instance);
    if (it != best_distance.end() && it->second <= e.distance_sum) {
      out.push_back(e);
      continue;
    }
    best_distance[e.instance] = e.distance_sum;
  }
  return out;
}

std::vector<ArchiveEntry> archive_gc(const fs::path& dir, const InstanceLookup& lookup) {
  const std::vector<ArchiveEntry> doomed = archive_dominated(archive_scan(dir, lookup));
  for (const ArchiveEntry& e : doomed) fs::remove(e.file);
  return doomed;
}

}  // namespace cmp
