#include <doctest.h>

#include "htlrc/errors.hpp"
#include "htlrc/serialize.hpp"
#include "support.hpp"

using namespace htlrc;

TEST_CASE("code spec JSON round trip is exact") {
  for (const CodeSpec& spec : {golden_9_6_code(), make_code(8, 4, 4, Field::gf256(), 3),
                               make_code(12, 8, 16, Field::gf65536(), 1)}) {
    const Json j = to_json(spec);
    CHECK(j["version"] == kSpecVersion);
    const CodeSpec back = code_spec_from_json(Json::parse(j.dump()));
    CHECK(back == spec);
    CHECK(canonical(to_json(back)) == canonical(j));
  }
}

TEST_CASE("code spec JSON layout") {
  const Json j = to_json(golden_9_6_code());
  std::vector<std::string> keys;
  for (const auto& item : j.items()) keys.push_back(item.key());
  CHECK(keys == std::vector<std::string>{"version", "n", "k", "alpha", "field", "arrays",
                                         "coeffs", "seed"});
  CHECK(j["field"]["w"] == 5);
  CHECK(j["field"]["poly"] == 0b101001);
  // Row 1 of the second parity: (1,1)..(1,6), then x(4,1) and x(2,4) appended.
  CHECK(j["arrays"][1][0][0] == Json::array({1, 1}));
  CHECK(j["arrays"][1][0][6] == Json::array({4, 1}));
  CHECK(j["arrays"][1][0][7] == Json::array({2, 4}));
  CHECK(j["coeffs"][1][0][6] == 8);
}

TEST_CASE("split and global-efficient specs round trip") {
  const LrcSpec lrc = split_parities(golden_9_6_code(), {3, 2});
  const Json lj = to_json(lrc);
  CHECK(lj.contains("locality"));
  CHECK(lrc_spec_from_json(lj) == lrc);
  CHECK(std::get<LrcSpec>(any_spec_from_json(lj)) == lrc);

  const auto g = build_global_efficient_lrc(6, 2, 3, Field::gf256(), 4);
  const Json gj = to_json(g);
  CHECK(gj["mix"].size() == 3);
  CHECK(gj["mix"][0][0] == 1);
  CHECK(gj["mix"][0][1] == 2);
  CHECK(global_lrc_spec_from_json(Json::parse(gj.dump())) == g);
  CHECK(std::get<GlobalLrcSpec>(any_spec_from_json(gj)) == g);
  CHECK(std::holds_alternative<CodeSpec>(any_spec_from_json(to_json(g.lrc.base))));
}

TEST_CASE("malformed spec documents are rejected") {
  Json j = to_json(golden_9_6_code());
  auto rejects = [](const Json& doc) {
    try {
      code_spec_from_json(doc);
    } catch (const Error& e) {
      return e.kind() == ErrorKind::validation;
    }
    return false;
  };
  Json bad = j;
  bad["version"] = 99;
  CHECK(rejects(bad));
  bad = j;
  bad.erase("coeffs");
  CHECK(rejects(bad));
  bad = j;
  bad["coeffs"][0][0][0] = 40;  // outside GF(32)
  CHECK(rejects(bad));
  bad = j;
  bad["field"]["poly"] = 0b100001;  // reducible
  CHECK(rejects(bad));
  bad = j;
  bad["arrays"][1][0].back() = Json::array({1, 1});  // duplicate element
  CHECK(rejects(bad));
  bad = j;
  bad["k"] = "six";
  CHECK(rejects(bad));

  Json lj = to_json(split_parities(golden_9_6_code(), {2, 2}));
  lj["groups"][0][0] = 4;
  CHECK_THROWS_AS(lrc_spec_from_json(lj), Error);

  Json gj = to_json(build_global_efficient_lrc(4, 2, 2, Field::gf256(), 1));
  gj["mix"][0] = Json::array({1, 2, 1, 1, 1, 1});
  CHECK_THROWS_AS(global_lrc_spec_from_json(gj), Error);
}

TEST_CASE("repair plan dump uses 1-based indices") {
  const auto plan = plan_systematic_repair(golden_9_6_code(), 1);
  const Json j = to_json(plan);
  CHECK(j["lost_node"] == 1);
  CHECK(j["kind"] == "row_set");
  CHECK(j["metrics"]["substripes"] == 24);
  CHECK(j["metrics"]["read_ops"] == 8);
  CHECK(j["metrics"]["gamma"] == "8/3");
  CHECK(j["reads"].size() == 8);
  for (const auto& r : j["reads"]) {
    CHECK(r["node"] != 1);
    for (const auto& row : r["substripes"]) CHECK((row >= 1 && row <= 9));
  }
  CHECK(j["steps"].size() == 9);
}

TEST_CASE("spec files") {
  test::TempDir tmp("serialize");
  const auto path = tmp.path() / "spec.json";
  write_json_file(path, to_json(golden_9_6_code()));
  CHECK(code_spec_from_json(read_json_file(path)) == golden_9_6_code());
  try {
    read_json_file(tmp.path() / "absent.json");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io);
  }
}
