#include "cmp/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cmp/distance.hpp"
#include "cmp/validate.hpp"

namespace cmp {

using nlohmann::json;

namespace {

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<Cell> read_cells(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw ParseError(std::string("field '") + key + "' is not an array");
  std::vector<Cell> out;
  out.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& c = arr[i];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer()) {
      throw ParseError(std::string(key) + "[" + std::to_string(i) + "] is not an [x, y] pair");
    }
    out.push_back({c[0].get<int>(), c[1].get<int>()});
  }
  return out;
}

json cells_json(const std::vector<Cell>& cells) {
  json arr = json::array();
  for (Cell c : cells) arr.push_back({c.x, c.y});
  return arr;
}

}  // namespace

Instance read_instance(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object()) throw ParseError("instance document is not an object");
  if (!doc.contains("name") || !doc["name"].is_string()) {
    throw ParseError("missing string field 'name'");
  }
  return make_instance(doc["name"].get<std::string>(), read_cells(doc, "obstacles"),
                       read_cells(doc, "starts"), read_cells(doc, "targets"));
}

std::string write_instance(const Instance& inst) {
  std::vector<Cell> starts;
  std::vector<Cell> targets;
  for (const Robot& r : inst.robots()) {
    starts.push_back(r.start);
    targets.push_back(r.target);
  }
  json doc;
  doc["name"] = inst.name();
  doc["obstacles"] = cells_json(inst.obstacles());
  doc["starts"] = cells_json(starts);
  doc["targets"] = cells_json(targets);
  return doc.dump() + "\n";
}

char direction_letter(Move mv) {
  switch (mv) {
    case Move::North: return 'N';
    case Move::South: return 'S';
    case Move::East: return 'E';
    case Move::West: return 'W';
    case Move::Wait: break;
  }
  throw std::invalid_argument("wait has no direction letter");
}

Move move_from_letter(char c) {
  switch (c) {
    case 'N': return Move::North;
    case 'S': return Move::South;
    case 'E': return Move::East;
    case 'W': return Move::West;
    default: break;
  }
  throw ParseError(std::string("unknown direction letter '") + c + "'");
}

std::string write_solution(const Solution& s, const SolutionMeta& meta) {
  const int m = s.makespan();
  json steps = json::array();
  for (int t = 1; t <= m; ++t) {
    json step = json::object();
    for (std::size_t i = 0; i < s.paths.size(); ++i) {
      const Path& p = s.paths[i];
      const Move mv = move_between(p[static_cast<std::size_t>(t) - 1], p[static_cast<std::size_t>(t)]);
      if (mv != Move::Wait) step[std::to_string(i)] = std::string(1, direction_letter(mv));
    }
    steps.push_back(std::move(step));
  }
  json doc;
  doc["instance"] = s.instance_name;
  doc["steps"] = std::move(steps);
  json m_json;
  m_json["makespan"] = m;
  m_json["distance_sum"] = distance_sum(s);
  if (!meta.solver.empty()) m_json["solver"] = meta.solver;
  if (meta.timestamp) m_json["timestamp"] = *meta.timestamp;
  doc["meta"] = std::move(m_json);
  return doc.dump() + "\n";
}

Solution read_solution(std::string_view text, const Instance& inst) {
  const json doc = parse(text);
  if (!doc.is_object() || !doc.contains("steps") || !doc["steps"].is_array()) {
    throw ParseError("solution document needs a 'steps' array");
  }
  Solution s;
  s.instance_name = doc.value("instance", std::string{});
  const std::size_t n = inst.size();
  const json& steps = doc["steps"];
  s.paths.assign(n, Path{});
  for (std::size_t i = 0; i < n; ++i) {
    s.paths[i].reserve(steps.size() + 1);
    s.paths[i].push_back(inst.robot(i).start);
  }
  std::vector<Cell> moves(n);
  for (std::size_t t = 0; t < steps.size(); ++t) {
    const json& step = steps[t];
    if (!step.is_object()) throw ParseError("step " + std::to_string(t) + " is not an object");
    std::fill(moves.begin(), moves.end(), Cell{0, 0});
    for (const auto& [key, value] : step.items()) {
      std::size_t idx = 0;
      std::size_t used = 0;
      try {
        idx = std::stoul(key, &used);
      } catch (const std::exception&) {
        throw ParseError("step " + std::to_string(t) + ": robot key '" + key + "' is not an index");
      }
      if (used != key.size() || idx >= n) {
        throw ParseError("step " + std::to_string(t) + ": robot index '" + key + "' out of range");
      }
      if (!value.is_string() || value.get<std::string>().size() != 1) {
        throw ParseError("step " + std::to_string(t) + ": direction for robot " + key +
                         " is not a single letter");
      }
      moves[idx] = delta(move_from_letter(value.get<std::string>()[0]));
    }
    for (std::size_t i = 0; i < n; ++i) s.paths[i].push_back(s.paths[i].back() + moves[i]);
  }
  return s;
}

SolutionHeader read_solution_header(std::string_view text) {
  const json doc = parse(text);
  if (!doc.is_object()) throw ParseError("solution document is not an object");
  SolutionHeader h;
  h.instance = doc.value("instance", std::string{});
  if (doc.contains("meta") && doc["meta"].is_object()) {
    const json& meta = doc["meta"];
    if (meta.contains("makespan")) h.makespan = meta["makespan"].get<int>();
    if (meta.contains("distance_sum")) h.distance_sum = meta["distance_sum"].get<std::int64_t>();
    h.solver = meta.value("solver", std::string{});
    if (meta.contains("timestamp")) h.timestamp = meta["timestamp"].get<std::int64_t>();
  }
  return h;
}

namespace {

// Unbiased bounded draw; std::uniform_int_distribution is not portable
// across standard libraries and generated instances must be reproducible.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v = rng();
  while (v >= limit) v = rng();
  return v % bound;
}

template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[bounded(rng, i)]);
  }
}

std::string format_density(double density) {
  std::ostringstream os;
  os << density;
  return os.str();
}

}  // namespace

Instance generate_instance(int n, int w, double density, std::uint64_t seed) {
  if (n < 1 || w < 1) throw std::invalid_argument("need n >= 1 and w >= 1");
  if (density < 0.0 || density >= 1.0) throw std::invalid_argument("density must be in [0, 1)");
  const long cells = static_cast<long>(w) * w;
  const long n_obstacles = static_cast<long>(std::ceil(density * static_cast<double>(cells)));
  if (n + n_obstacles > cells) {
    throw CapacityError(std::to_string(n) + " robots and " + std::to_string(n_obstacles) +
                        " obstacles do not fit in a " + std::to_string(w) + "x" +
                        std::to_string(w) + " grid");
  }
  std::mt19937_64 rng(seed);
  std::vector<Cell> all;
  all.reserve(static_cast<std::size_t>(cells));
  for (int y = 0; y < w; ++y) {
    for (int x = 0; x < w; ++x) all.push_back({x, y});
  }
  shuffle(all, rng);
  std::vector<Cell> obstacles(all.begin(), all.begin() + n_obstacles);

  // Keep only free cells that can reach the unbounded region.
  const Instance probe("probe", obstacles, {});
  const Rect area{{-1, -1}, {w, w}};
  std::vector<Cell> free_cells;
  {
    std::vector<int> reach(area.area(), kInfDistance);
    std::vector<Cell> stack{area.lo};
    reach[area.index(area.lo)] = 0;
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      for (Move mv : {Move::North, Move::South, Move::East, Move::West}) {
        const Cell nb = apply_move(c, mv);
        if (!area.contains(nb) || probe.is_obstacle(nb) || reach[area.index(nb)] == 0) continue;
        reach[area.index(nb)] = 0;
        stack.push_back(nb);
      }
    }
    for (auto it = all.begin() + n_obstacles; it != all.end(); ++it) {
      if (reach[area.index(*it)] == 0) free_cells.push_back(*it);
    }
  }
  if (static_cast<long>(free_cells.size()) < n) {
    throw CapacityError("only " + std::to_string(free_cells.size()) +
                        " reachable free cells for " + std::to_string(n) + " robots");
  }
  std::vector<Cell> starts(free_cells.begin(), free_cells.begin() + n);
  shuffle(free_cells, rng);
  std::vector<Cell> targets(free_cells.begin(), free_cells.begin() + n);
  std::string name = "gen_n" + std::to_string(n) + "_w" + std::to_string(w) + "_d" +
                     format_density(density) + "_s" + std::to_string(seed);
  return make_instance(std::move(name), std::move(obstacles), starts, targets);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, std::string_view contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(std::hash<std::string>{}(path) ^
                                 static_cast<std::size_t>(std::random_device{}()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace cmp
