#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "cmp/core.hpp"

namespace cmp {

/// Instance document: {"name", "obstacles", "starts", "targets"}, cells as [x, y].
Instance read_instance(std::string_view json);
std::string write_instance(const Instance& inst);

/// Optional bookkeeping carried in a solution file's "meta" object.
struct SolutionMeta {
  std::string solver;
  std::optional<std::int64_t> timestamp;  // unix seconds; omitted when unset
};

/// Solution document: {"instance", "steps": [{"<robot>": "N|E|S|W"}...], "meta"}.
/// Waiting robots are omitted from a step. The meta object always carries
/// makespan and distance sum.
std::string write_solution(const Solution& s, const SolutionMeta& meta = {});

/// Rebuilds dense paths from the robots' starts. Throws ParseError on bad
/// letters, out-of-range robot indices or malformed JSON.
Solution read_solution(std::string_view json, const Instance& inst);

/// Metadata of a solution document without replaying it.
struct SolutionHeader {
  std::string instance;
  std::optional<int> makespan;
  std::optional<std::int64_t> distance_sum;
  std::string solver;
  std::optional<std::int64_t> timestamp;
};
SolutionHeader read_solution_header(std::string_view json);

char direction_letter(Move mv);
Move move_from_letter(char c);

/// Random instance inside [0, w)^2. Obstacles are drawn first, then starts
/// and targets among free cells connected to the outside, so every
/// generated instance is solvable. Deterministic for a given seed.
Instance generate_instance(int n, int w, double density, std::uint64_t seed);

std::string read_file(const std::string& path);
/// Writes via a temporary sibling and rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, std::string_view contents);

}  // namespace cmp
