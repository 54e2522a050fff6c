#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "commlab/batch.hpp"
#include "commlab/instance_io.hpp"

using namespace commlab;
using nlohmann::json;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "commlab_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

Instance windmill_instance() {
  Instance inst;
  inst.protocol = Protocol(windmill_cover(), MinIndexSelector{});
  return inst;
}

std::string expect_error(const json& j) {
  try {
    instance_from_json(j);
  } catch (const InstanceError& e) {
    return e.what();
  }
  ADD_FAILURE() << "no error for " << j.dump();
  return {};
}

}  // namespace

TEST(InstanceIO, WindmillRoundTrip) {
  const auto path = temp_dir() / "windmill.json";
  save_instance(path, windmill_instance());
  EXPECT_EQ(load_instance(path), windmill_instance());
}

TEST(InstanceIO, OverlappingBoxesWithMinIndex) {
  const json j = to_json(Instance{Protocol(double_full_box_cover(), MinIndexSelector{})});
  const Instance inst = instance_from_json(j);
  EXPECT_FALSE(validate_cover(inst.protocol.cover()).is_partition);
}

TEST(InstanceIO, ExplicitSelectorNamesCell) {
  json j = to_json(windmill_instance());
  // Cell (0,0) is in box A (index 0) only.
  std::vector<std::uint32_t> table(16, 0);
  for (std::size_t c = 0; c < 16; ++c) table[c] = transcript_table(windmill_instance().protocol)[c];
  table[0] = 2;
  j["selector"] = {{"kind", "explicit"}, {"table", table}};
  const auto msg = expect_error(j);
  EXPECT_NE(msg.find("$.selector"), std::string::npos);
  EXPECT_NE(msg.find("(0,0)"), std::string::npos);
}

TEST(InstanceIO, StrictParsing) {
  const json good = to_json(windmill_instance());
  {
    json j = good;
    j["extra"] = 1;
    EXPECT_NE(expect_error(j).find("$.extra"), std::string::npos);
  }
  {
    json j = good;
    j["schema"] = "commlab-instance-v0";
    EXPECT_NE(expect_error(j).find("$.schema"), std::string::npos);
  }
  {
    json j = good;
    j["rectangles"][1][0] = json::array({0, 9});
    EXPECT_NE(expect_error(j).find("$.rectangles[1]"), std::string::npos);
  }
  {
    json j = good;
    j["rectangles"].erase(4);
    EXPECT_NE(expect_error(j).find("not covered"), std::string::npos);
  }
  {
    json j = good;
    j["sizes"][0] = 4.0;
    EXPECT_NE(expect_error(j).find("$.sizes[0]"), std::string::npos);
  }
  {
    json j = good;
    j["distribution"] = {{"kind", "table"}, {"p", std::vector<double>(16, 0.1)}};
    EXPECT_NE(expect_error(j).find("$.distribution.p"), std::string::npos);
  }
  {
    json j = good;
    j["arity"] = 3;
    EXPECT_NE(expect_error(j).find("$.arity"), std::string::npos);
  }
  {
    json j = good;
    j["selector"]["seed"] = 3;
    EXPECT_NE(expect_error(j).find("$.selector.seed"), std::string::npos);
  }
}

TEST(InstanceIO, SaveIsByteDeterministic) {
  InstanceParams p;
  const Instance inst = generate_instance(p, 17);
  const auto a = canonical_dump(to_json(inst));
  const auto b = canonical_dump(to_json(generate_instance(p, 17)));
  EXPECT_EQ(a, b);
  EXPECT_EQ(canonical_dump(to_json(instance_from_json(json::parse(a)))), a);
  EXPECT_EQ(fingerprint(inst).size(), 16u);
  EXPECT_LT(a.find("\"arity\""), a.find("\"distribution\""));
}

TEST(InstanceIO, RoundTripOverGenerators) {
  for (auto gen : {Generator::tree, Generator::random_bounded, Generator::windmill, Generator::trivial_merlin}) {
    for (std::size_t parties : {2u, 3u}) {
      for (std::uint64_t seed = 0; seed < 30; ++seed) {
        InstanceParams p;
        p.generator = gen;
        p.parties = gen == Generator::windmill ? 2 : parties;
        p.max_side = parties == 3 ? 4 : 9;
        p.rho_max = 1 + seed % 4;
        Instance inst;
        try {
          inst = generate_instance(p, seed);
        } catch (const GenerationFailure&) {
          continue;
        }
        const auto text = canonical_dump(to_json(inst));
        const Instance back = instance_from_json(json::parse(text));
        EXPECT_EQ(back, inst);
        EXPECT_EQ(canonical_dump(to_json(back)), text);
      }
    }
  }
}

TEST(InstanceIO, FunctionsRelationsAndOutputs) {
  FunctionSpec xor2;
  xor2.kind = FunctionSpec::Kind::xor_fn;
  xor2.n = 2;
  const AMInstance am = trivial_merlin_am(xor2);
  const auto path = temp_dir() / "am.json";
  save_am(path, am);
  const AMInstance back = load_am(path);
  EXPECT_EQ(back, am);
  EXPECT_EQ(back.am_protocol(), am.am_protocol());

  Instance rel = singleton_partition_instance(xor2);
  rel.function.reset();
  RelationSpec r;
  r.kind = RelationSpec::Kind::approx_xor;
  r.n = 2;
  r.delta = 0.5;
  rel.relation = r;
  EXPECT_EQ(instance_from_json(to_json(rel)), rel);

  FunctionSpec rnd;
  rnd.kind = FunctionSpec::Kind::random;
  rnd.sizes = {4, 4};
  rnd.colors = 3;
  rnd.seed = 5;
  Instance ri = singleton_partition_instance(rnd);
  EXPECT_EQ(instance_from_json(to_json(ri)), ri);

  json bad = to_json(am);
  bad["branches"][0]["gA"][0][2] = 3;  // wrong color is allowed; wrong box is not
  EXPECT_NO_THROW(am_from_json(bad));
  bad["branches"][0]["gA"][0][1] = 5;
  EXPECT_THROW(am_from_json(bad), InstanceError);
}

TEST(InstanceIO, MissingFile) {
  EXPECT_THROW(load_instance(temp_dir() / "does-not-exist.json"), InvalidInput);
  const auto path = temp_dir() / "garbage.json";
  std::ofstream(path) << "{ not json";
  EXPECT_THROW(load_instance(path), InvalidInput);
}

TEST(FormatDouble, SeventeenDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1.0");
  EXPECT_EQ(format_double(-0.0), "-0.0");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}
