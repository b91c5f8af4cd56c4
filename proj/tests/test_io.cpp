#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "segalkit/groupoid.hpp"
#include "segalkit/io.hpp"

using namespace segalkit;

namespace {

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
  for (const auto& e : errs)
    if (e.find(what) != std::string::npos) return true;
  return false;
}

Json delta2_json() { return to_json(*standard_simplex(2)); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("objects round trip byte for byte") {
    std::vector<Json> files{delta2_json(), to_json(*boundary(3)), to_json(*nerve(walking_iso(), 3)),
                            to_json(*theta(standard_simplex(2), boundary(1)).obj), to_json(*build_jpre(2))};
    for (const auto& j : files) {
      std::string once = canonical_dump(j);
      Json back = j["kind"] == "sset" ? to_json(*object_from_json<1>(Json::parse(once)))
                                     : to_json(*object_from_json<2>(Json::parse(once)));
      CHECK(canonical_dump(back) == once);
    }
  }

  TEST_CASE("read objects are isomorphic to the originals") {
    auto x = theta(standard_simplex(2), standard_simplex(1)).obj;
    auto y = object_from_json<2>(to_json(*x));
    CHECK(find_iso<2>(x, y).has_value());
    auto n = nerve(cyclic_group(2), 3);
    CHECK(profiles_equal(homology(*object_from_json<1>(to_json(*n))), homology(*n)));
  }

  TEST_CASE("degenerate elements") {
    auto x = standard_simplex(1);
    SElem e = x->degeneracy(0, 1, x->gen_elem(x->index_of("01")));
    Json j = elem_to_json(*x, e);
    CHECK(j.is_object());
    CHECK(j["s"] == Json::parse("[[0,1,1]]"));
    CHECK(elem_from_json(*x, j, "$") == e);
    CHECK_THROWS_AS(elem_from_json(*x, Json::parse(R"({"gen":"01","s":[[0,0,0]]})"), "$"), IoError);
    CHECK_THROWS_AS(elem_from_json(*x, Json::parse(R"("nope")"), "$"), IoError);
  }

  TEST_CASE("maps and plans round trip") {
    auto b = boit(2, boundary_inclusion(0)).map;
    std::string once = canonical_dump(map_to_json(b));
    CHECK(canonical_dump(map_to_json(map_from_json<2>(Json::parse(once)))) == once);
    auto f = boundary_inclusion(2);
    once = canonical_dump(map_to_json(f));
    CHECK(canonical_dump(map_to_json(map_from_json<1>(Json::parse(once)))) == once);

    auto up = internally_discrete(*upsilon(2));
    Json plan = Json::parse(R"J({"kind":"plan","family":["Boit_2(g0)"],"steps":[[{"arrow":"Boit_2(g0)","mult":1,
      "attach":{"0":"0","1":"1","2":"2","(01|0)":"01","(12|0)":"12"}}]]})J");
    CHECK(validate(plan).empty());
    auto p = run_plan_file(up, plan_from_json(plan));
    CHECK(find_iso<2>(p.result(), internally_discrete(*standard_simplex(2))).has_value());
    Json out = plan_to_json(p);
    CHECK(validate(out).empty());
    auto again = run_plan_file(object_from_json<2>(out["source"]), plan_from_json(out));
    CHECK(canonical_dump(plan_to_json(again)) == canonical_dump(out));
  }

  TEST_CASE("arrow ids") {
    for (const auto& a : generating_families(3, 1).fg1) CHECK(arrow_from_id(a.id).id == a.id);
    CHECK(arrow_from_id("Attach_2(g1)").tag == ArrowTag::Attach);
    CHECK(arrow_from_id("ObjInclusion").tag == ArrowTag::ObjInclusion);
    CHECK_THROWS_AS(arrow_from_id("Boit_2(x)"), IoError);
  }

  TEST_CASE("validate") {
    CHECK(validate(delta2_json()).empty());

    Json bad = to_json(*discrete_precat({"a"}));
    bad["generators"].push_back(Json{{"id", "w"}, {"deg", {0, 1}}, {"faces", Json::array({Json::array(), {"a", "a"}})}});
    auto errs = validate(bad);
    CHECK(mentions(errs, "generator w"));
    CHECK(mentions(errs, "discreteness"));

    // A triangle whose edges do not meet: d0 d0 differs from d0 d1.
    Json tri = delta2_json();
    for (auto& g : tri["generators"])
      if (g["id"] == "012") g["faces"][0][1] = "01";
    errs = validate(tri);
    CHECK(mentions(errs, "generator 012"));
    CHECK(mentions(errs, "simplicial identity"));

    Json unknown = delta2_json();
    unknown["generators"][0]["faces"][0] = Json::array({"zz"});
    CHECK(mentions(validate(unknown), "unknown generator \"zz\""));
    CHECK_FALSE(validate(Json::parse(R"({"kind":"plan","family":["Nope"]})")).empty());
    CHECK_FALSE(validate(Json::parse(R"({"generators":[]})")).empty());
  }

  TEST_CASE("malformed files report a position") {
    std::string path = "segalkit_io_bad.json";
    {
      std::ofstream out(path);
      out << "{\"kind\": \"sset\", \"generators\": [ }";
    }
    try {
      read_json_file(path);
      FAIL("expected a parse error");
    } catch (const IoError& e) {
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
    std::remove(path.c_str());
  }
}
