#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "densor/io.hpp"

using namespace densor;

TEST_CASE("tensor json round trip") {
  Rng rng(6);
  for (auto F : {Field::make(5), Field::make(2, 2), Field::make(7, 2), Field::make(3, 3)}) {
    const Tensor t = Tensor::random(make_frame(F, {2, 3, 2}), rng);
    const Json j = tensor_to_json(t);
    CHECK(tensor_from_json(Json::parse(j.dump())) == t);
    // Key order is fixed.
    auto it = j.begin();
    CHECK(it.key() == "field");
    CHECK((++it).key() == "dims");
    CHECK((++it).key() == "entries");
    CHECK(field_from_json(j["field"]) == F);
  }
}

TEST_CASE("field encoding") {
  CHECK(field_to_json(Field::make(5)).dump() == R"({"p":5,"k":1})");
  CHECK(field_to_json(Field::make(2, 2)).dump() == R"({"p":2,"k":2,"modulus":[1,1,1]})");
  CHECK(field_from_json(Json::parse(R"({"p":7})")) == Field::make(7));
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"p":6})")), ParseError);
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"p":2,"k":2,"modulus":[1,0,1]})")), ParseError);
  CHECK_THROWS_AS(field_from_json(Json::parse(R"({"k":2})")), ParseError);
}

TEST_CASE("operator tuples and modules round trip") {
  Rng rng(2);
  const Field F = Field::make(3, 2);
  const Frame fr = make_frame(F, {2, 3});
  const OperatorTuple o = OperatorTuple::random_invertible(fr, rng);
  CHECK(tuple_from_json(fr, Json::parse(tuple_to_json(o).dump()), "t") == o);
  LieModule m{F, 3, {Matrix::random(F, 3, 3, rng), Matrix::random(F, 3, 3, rng)}};
  const LieModule back = module_from_json(Json::parse(module_to_json(m).dump()));
  CHECK(back.dim == 3);
  CHECK(back.action == m.action);
}

TEST_CASE("malformed inputs name the field") {
  auto fails_with = [](const char* text, const char* needle) {
    try {
      tensor_from_json(Json::parse(text));
    } catch (const ParseError& e) {
      return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
  };
  CHECK(fails_with(R"({"field":{"p":5},"dims":[2,2],"entries":[1,2,3]})", "entries"));
  CHECK(fails_with(R"({"field":{"p":5},"dims":[2,2],"entries":[1,2,3,9]})", "entries[3]"));
  CHECK(fails_with(R"({"field":{"p":5},"dims":[2,0],"entries":[]})", "dims[1]"));
  CHECK(fails_with(R"({"field":{"p":5},"entries":[]})", "dims"));
  CHECK(fails_with(R"({"field":{"p":4,"k":2,"modulus":[1,1,1]},"dims":[1,1],"entries":[[1,0]]})", "field"));
  CHECK(fails_with(R"({"field":{"p":2,"k":2},"dims":[1,1],"entries":[1]})", "entries[0]"));
  const auto dir = std::filesystem::temp_directory_path();
  const auto path = (dir / "densor_io_bad.json").string();
  std::ofstream(path) << "{\n\"field\": {\"p\": 5},\n\"dims\": [2, 2,\n";
  try {
    read_json_file(path);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(":4:") != std::string::npos);
  }
  std::filesystem::remove(path);
}
