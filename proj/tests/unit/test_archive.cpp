#include <doctest.h>

#include <filesystem>
#include <random>
#include <regex>

#include <unistd.h>

#include "cmp/archive.hpp"
#include "cmp/errors.hpp"
#include "cmp/io.hpp"
#include "cmp/storage.hpp"
#include "cmp/svg.hpp"

using namespace cmp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("cmp_archive_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void put(const fs::path& file, int m, std::int64_t d, std::int64_t ts, const std::string& inst = "a") {
  write_file_atomic(file.string(), "{\"instance\":\"" + inst +
                                       "\",\"steps\":[],\"meta\":{\"makespan\":" + std::to_string(m) +
                                       ",\"distance_sum\":" + std::to_string(d) +
                                       ",\"timestamp\":" + std::to_string(ts) + "}}");
}

Solution straight(const std::string& name, int len, int pad) {
  Path p;
  for (int x = 0; x <= len; ++x) p.push_back({x, 0});
  for (int k = 0; k < pad; ++k) p.insert(p.begin(), Cell{0, 0});
  return {name, {p}};
}

}  // namespace

TEST_CASE("archive file names") {
  CHECK(archive_file_name("small_free_002", 18, 1700000000) == "small_free_002.18.1700000000.json");
  CHECK(archive_file_name("a/b c", 3, 5) == "a_b_c.3.5.json");
}

TEST_CASE("empty archive") {
  TempDir dir;
  const ArchiveListing l = archive_scan(dir.path);
  CHECK(l.entries.empty());
  CHECK(l.quarantined.empty());
  CHECK(archive_best(l).empty());
  CHECK(archive_scan(dir.path / "missing").entries.empty());
}

TEST_CASE("best entry per instance") {
  TempDir dir;
  const Instance inst = make_instance("line", {}, {{0, 0}}, {{18, 0}});
  const auto f20 = archive_store(dir.path, straight("line", 18, 2), "cross", 100);
  const auto f18 = archive_store(dir.path, straight("line", 18, 0), "conflict", 200);
  CHECK(f20.filename() == "line.20.100.json");
  CHECK(f18.filename() == "line.18.200.json");
  const auto clash = archive_store(dir.path, straight("line", 18, 0), "conflict", 200);
  CHECK(clash.filename() == "line.18.200.1.json");
  auto lookup = [&](const std::string& name) { return name == "line" ? &inst : nullptr; };
  const ArchiveListing l = archive_scan(dir.path, lookup);
  CHECK(l.quarantined.empty());
  REQUIRE(l.entries.size() == 3);
  const auto best = archive_best(l);
  REQUIRE(best.size() == 1);
  CHECK(best[0].makespan == 18);
  CHECK(best[0].solver == "conflict");
  CHECK(best[0].timestamp == 200);
}

TEST_CASE("gc keeps the Pareto set") {
  TempDir dir;
  put(dir.path / "a.18.1.json", 18, 500, 1);
  put(dir.path / "a.20.2.json", 20, 400, 2);
  put(dir.path / "a.21.3.json", 21, 450, 3);
  put(dir.path / "a.18.4.json", 18, 500, 4);
  put(dir.path / "b.30.5.json", 30, 900, 5, "b");
  write_file_atomic((dir.path / "broken.json").string(), "{not json");
  const auto removed = archive_gc(dir.path);
  REQUIRE(removed.size() == 2);
  CHECK(!fs::exists(dir.path / "a.21.3.json"));
  CHECK(!fs::exists(dir.path / "a.18.4.json"));
  CHECK(fs::exists(dir.path / "a.18.1.json"));
  CHECK(fs::exists(dir.path / "a.20.2.json"));
  CHECK(fs::exists(dir.path / "b.30.5.json"));
  CHECK(fs::exists(dir.path / "broken.json"));
  const ArchiveListing l = archive_scan(dir.path);
  CHECK(l.entries.size() == 3);
  REQUIRE(l.quarantined.size() == 1);
  CHECK(l.quarantined[0].file.filename() == "broken.json");
}

TEST_CASE("entries that fail validation are quarantined") {
  TempDir dir;
  const Instance inst = make_instance("line", {}, {{0, 0}}, {{18, 0}});
  archive_store(dir.path, straight("line", 18, 0), "ok", 1);
  // Header claims a better makespan than the steps deliver.
  put(dir.path / "line.10.2.json", 10, 10, 2, "line");
  auto lookup = [&](const std::string& name) { return name == "line" ? &inst : nullptr; };
  const ArchiveListing l = archive_scan(dir.path, lookup);
  CHECK(l.entries.size() == 1);
  CHECK(l.quarantined.size() == 1);
  CHECK(archive_scan(dir.path).entries.size() == 2);
}

TEST_CASE("svg export") {
  const Instance inst = make_instance("s", {{1, 1}, {2, 2}}, {{0, 0}, {3, 0}}, {{0, 2}, {3, 3}});
  const Solution sol = solve_with_storage(inst, StorageKind::Cross).solution;
  auto count = [](const std::string& text, const std::string& what) {
    std::size_t k = 0;
    for (std::size_t pos = text.find(what); pos != std::string::npos; pos = text.find(what, pos + 1)) ++k;
    return k;
  };
  const std::string svg = render_svg(inst, sol);
  CHECK(count(svg, "class=\"robot\"") == 2);
  CHECK(count(svg, "class=\"obstacle\"") == 2);
  CHECK(count(svg, "<animate ") == 4);

  SvgOptions by_target;
  by_target.color_by = ColorBy::Target;
  const std::string other = render_svg(inst, sol, by_target);
  const std::regex fill("fill=\"hsl\\([^\"]*\"");
  CHECK(other != svg);
  CHECK(std::regex_replace(other, fill, "") == std::regex_replace(svg, fill, ""));

  const Instance still = make_instance("z", {}, {{0, 0}}, {{0, 0}});
  const std::string frame = render_svg(still, Solution{"z", {{{0, 0}}}});
  CHECK(count(frame, "<animate") == 0);
  CHECK(count(frame, "class=\"robot\"") == 1);

  const Solution jump{"s", {{{0, 0}, {0, 2}}, {{3, 0}, {3, 3}}}};
  CHECK_THROWS_AS(render_svg(inst, jump), ValidationError);
}
