#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cmp/astar.hpp"
#include "cmp/core.hpp"
#include "cmp/distance.hpp"

namespace cmp {

enum class StorageKind { Cross, Cootie, Dichotomy, Escape };

std::string to_string(StorageKind kind);
/// Accepts "cross", "cootie", "dichotomy", "escape"; throws std::invalid_argument.
StorageKind parse_storage_kind(const std::string& name);
/// Default depth parameter b per strategy.
int default_depth(StorageKind kind);

/// Storage cells outside the box and the robot -> cell assignment.
struct StorageNetwork {
  StorageKind kind = StorageKind::Cross;
  std::vector<Cell> cells;
  std::vector<Cell> assignment;  // indexed by robot id
};

/// Robot orders for both phases. `scripted`, when non-empty, holds
/// collision-free start -> storage paths of equal length that replace the
/// phase-1 searches.
struct PhasePlan {
  std::vector<int> phase1;
  std::vector<int> phase2;
  std::vector<Path> scripted;
};

struct StoragePlan {
  StorageNetwork network;
  PhasePlan plan;
};

enum class Matching { Greedy, Exact };

struct StorageOptions {
  Matching matching = Matching::Greedy;
  /// Shuffle depth ties with `seed` instead of breaking them by robot id.
  bool shuffle_ties = false;
  std::uint64_t seed = 0;
};

/// Cell of `cells` that cannot reach the box while avoiding the other
/// cells, if any. The search stays within the search region of the network.
std::optional<Cell> trapped_storage_cell(const Instance& inst, const Rect& box,
                                         const std::vector<Cell>& cells);

/// Robot ids by increasing start depth / decreasing target depth.
std::vector<int> start_depth_order(const Instance& inst, const DepthField& depth,
                                   const StorageOptions& opt);
std::vector<int> target_depth_order(const Instance& inst, const DepthField& depth,
                                    const StorageOptions& opt);

/// Even columns above/below the box and even rows left/right of it, as many
/// rings deep as needed for n robots. Assignment by greedy (or exact)
/// matching on dist(start, s) + dist(s, target).
StoragePlan build_cross(const Instance& inst, const BoundingBox& box, const OracleCache& oracles,
                        const StorageOptions& opt = {});

/// Each robot leaves through its nearest box side along its row or column
/// and parks on a two-of-three column (or row) lattice beyond that side.
/// Obstacle-free instances get the scripted parallel sweep.
StoragePlan build_cootie(const Instance& inst, const BoundingBox& box,
                         const StorageOptions& opt = {});

/// Obstacle-free only: rows are spread apart vertically, then robots leave
/// horizontally towards the side of their target. Fully scripted.
StoragePlan build_dichotomy(const Instance& inst, const BoundingBox& box,
                            const StorageOptions& opt = {});

/// Rectangular block of robots that leaves in one straight direction.
struct EscapeBlock {
  Rect cells;
  Move direction = Move::North;
  int layer = 0;
};

struct EscapeLayering {
  std::vector<EscapeBlock> blocks;
  std::vector<int> layer_of;  // per robot, 0 when stranded
  int layers = 0;
  std::vector<Cell> stranded;
};

/// Greedy layering: layer 1 holds the largest blocks that leave the box in
/// a straight line; layer k blocks move straight into cells cleared by
/// earlier layers. Ties go to the block closer to the exterior.
EscapeLayering decompose_escape(const Instance& inst, const BoundingBox& box);

/// Layered evacuation onto a two-of-three lattice outside the box. Robots
/// the layering cannot place, or a deadlocked scripted run, fall back to
/// depth-ordered searches to the same storage cells. With `strict`,
/// stranded robots raise DecompositionError instead.
StoragePlan build_escape(const Instance& inst, const BoundingBox& box,
                         const StorageOptions& opt = {}, bool strict = false);

struct TwoPhaseResult {
  Solution solution;
  /// Start -> storage solution (targets replaced by storage cells).
  Solution phase1;
  int phase1_makespan = 0;
};

/// Phase 1 moves everyone to storage (scripted, or A* in phase-1 order);
/// phase 2 replaces each robot's path by a direct start -> target path in
/// phase-2 order. Throws InternalError when a guaranteed search fails.
TwoPhaseResult run_two_phase(const Instance& inst, const BoundingBox& box, const StoragePlan& plan,
                             const OracleCache& oracles, const SearchConfig& search = {});

/// Builds the network for `kind` with depth parameter `b` (0 selects the
/// strategy default) and runs both phases.
TwoPhaseResult solve_with_storage(const Instance& inst, StorageKind kind, int b = 0,
                                  const StorageOptions& opt = {}, const SearchConfig& search = {});

}  // namespace cmp
