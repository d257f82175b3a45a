#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "icue/export.hpp"
#include "icue/families.hpp"
#include "icue/game_io.hpp"
#include "icue/scenarios.hpp"
#include "support.hpp"

using namespace icue;
using nlohmann::json;

TEST_CASE("every builtin scenario round-trips") {
  for (const auto& id : scenario_ids()) {
    const Scenario sc = builtin_scenario(id);
    CAPTURE(id);
    CHECK(parse_game(dump_game(sc.instance.game)) == sc.instance.game);
    const InstanceDocument doc = instance_from_json(instance_to_json(sc.kind, sc.instance));
    CHECK(doc.kind == sc.kind);
    CHECK(doc.instance.game == sc.instance.game);
    CHECK(doc.instance.expansion == sc.instance.expansion);
    CHECK(doc.instance.modified == sc.instance.modified);
  }
  CHECK(parse_game(dump_game(stadium_game(true))) == stadium_game(true));
  CHECK_THROWS_AS(builtin_scenario("atlantis"), std::invalid_argument);
}

TEST_CASE("random games round-trip through files") {
  const auto dir = std::filesystem::temp_directory_path() / "icue_io_test";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testing_support::RandomGameOptions opt;
    opt.strictly_increasing = seed % 2 == 0;
    opt.max_total_paths = 1000;
    GameSpec g = testing_support::random_game(seed, opt);
    g.set_name("random " + std::to_string(seed)).set_description("a \"quoted\" description");
    const auto path = dir / "game.json";
    save_game(g, path);
    CHECK(load_game(path) == g);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("format errors name the offending field") {
  const json base = game_to_json(builtin_scenario("pigou_ibpsc").instance.game);

  SUBCASE("negative demand") {
    json doc = base;
    doc["types"][0]["demand"] = -1;
    try {
      game_from_json(doc);
      FAIL("expected an error");
    } catch (const GameFormatError& e) {
      CHECK(std::string(e.what()).find("negative demand") != std::string::npos);
      CHECK(e.where() == "/types/0/demand");
    }
  }
  SUBCASE("unknown edge in a known set") {
    json doc = base;
    doc["types"][1]["known_edges"].push_back("e9");
    try {
      game_from_json(doc);
      FAIL("expected an error");
    } catch (const GameFormatError& e) {
      CHECK(std::string(e.what()).find("unknown edge") != std::string::npos);
      CHECK(e.where() == "/types/1/known_edges/2");
    }
  }
  SUBCASE("missing field and wrong type") {
    json doc = base;
    doc["edges"][0].erase("cost");
    CHECK_THROWS_WITH_AS(game_from_json(doc), doctest::Contains("missing field 'cost'"), GameFormatError);
    doc = base;
    doc["edges"][1]["cost"]["coefficients"][0] = "two";
    CHECK_THROWS_WITH_AS(game_from_json(doc), doctest::Contains("/edges/1/cost/coefficients/0"),
                         GameFormatError);
    doc = base;
    doc["edges"][0]["cost"]["kind"] = "exponential";
    CHECK_THROWS_WITH_AS(game_from_json(doc), doctest::Contains("unknown cost kind"), GameFormatError);
  }
  SUBCASE("schema version") {
    json doc = base;
    doc["schema_version"] = 7;
    CHECK_THROWS_WITH_AS(game_from_json(doc), doctest::Contains("schema version"), GameFormatError);
  }
  SUBCASE("syntax errors carry a line") {
    try {
      parse_game("{\n  \"schema_version\": 1,\n  oops\n}");
      FAIL("expected an error");
    } catch (const GameFormatError& e) {
      CHECK(e.where().find("line 3") != std::string::npos);
    }
  }
  SUBCASE("validation problems") {
    json doc = base;
    doc["types"][0]["known_edges"] = json::array();
    CHECK_THROWS_WITH_AS(game_from_json(doc), doctest::Contains("empty strategy set"), GameFormatError);
  }
}

TEST_CASE("DOT export") {
  const GameSpec ring4 = builtin_scenario("two_pop_ring").instance.game;
  const std::string dot = export_dot(ring4);
  CHECK(dot.rfind("graph \"two_pop_ring\" {", 0) == 0);
  std::size_t node_lines = 0, edge_lines = 0;
  std::istringstream in(dot);
  for (std::string line; std::getline(in, line);) {
    if (line.find(" -- ") != std::string::npos) ++edge_lines;
    else if (line.size() > 2 && line.back() == ';') ++node_lines;
  }
  CHECK(node_lines == 4);
  CHECK(edge_lines == 4);
  CHECK(export_dot(ring4) == dot);
  CHECK(dot.find("\"O1\";") < dot.find("\"O2\";"));

  const GameSpec w = builtin_scenario("wheatstone_bp").instance.game;
  const EquilibriumResult r = solve_icue(w);
  const std::string loaded = export_dot(w, r.loads);
  for (const char* label : {"O1 (0.5)", "1D (0.5)", "O2 (0.5)", "2D (0.5)", "12 (0)"}) {
    CAPTURE(label);
    CHECK(loaded.find(label) != std::string::npos);
  }
}

TEST_CASE("CSV export") {
  CHECK(export_csv({"a", "b"}, {}) == "a,b\n");
  CHECK(export_csv({"a", "b"}, {{"1", "x,y"}, {"say \"hi\"", ""}}) == "a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",\n");
  const SearchReport empty;
  const std::string header_only = export_csv(search_csv_header(), search_csv_rows(empty));
  CHECK(std::count(header_only.begin(), header_only.end(), '\n') == 1);

  const GameSpec w = builtin_scenario("wheatstone_bp").instance.game;
  const std::string csv = equilibrium_csv(w, solve_icue(w));
  CHECK(csv.rfind("edge,load,cost\n", 0) == 0);
  CHECK(csv.find("O1,0.5,") != std::string::npos);
}

TEST_CASE("family files") {
  const auto path = std::filesystem::temp_directory_path() / "icue_family.json";
  {
    std::ofstream out(path);
    out << R"({"name": "tiny rings", "template": "circuit", "min_size": 3, "max_size": 4,
              "max_populations": 1, "max_degree": 1})";
  }
  const FamilySpec f = resolve_family(path.string());
  CHECK(f.name == "tiny rings");
  CHECK(f.tmpl == FamilyTemplate::circuit);
  CHECK(f.max_size == 4);
  const auto inst = sample_instance(f, ParadoxKind::ibp, 1, 0);
  REQUIRE(inst.has_value());
  CHECK(inst->game.network().edge_count() <= 4);
  {
    std::ofstream out(path);
    out << R"({"template": "circuit", "min_size": 9, "max_size": 4})";
  }
  CHECK_THROWS_AS(resolve_family(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
  CHECK(resolve_family("sli").tmpl == FamilyTemplate::sli_chain);
}
