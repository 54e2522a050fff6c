#include "commlab/instance_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace commlab {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep a float marker so integral doubles read back as doubles.
  if (std::isfinite(v) && s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

void dump(const json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys sorted
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 2);
      }
      out += "\n" + close + "}";
      return;
    }
    case json::value_t::array: {
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (j.empty()) {
        out += "[]";
        return;
      }
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent + 2);
      }
      out += "\n" + close + "]";
      return;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

// Strict reader over one JSON node.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const { throw InstanceError(path_, what); }

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!ok.count(it.key())) Node(it.value(), path_ + "." + it.key()).fail("unknown field");
  }

  bool has(const char* key) const { return j_.contains(key); }
  Node at(const char* key) const {
    if (!j_.contains(key)) fail(std::string("missing field '") + key + "'");
    return Node(j_.at(key), path_ + "." + key);
  }
  Node at(std::size_t i) const { return Node(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }

  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  std::uint64_t as_uint() const {
    if (!j_.is_number_unsigned() && !(j_.is_number_integer() && j_.get<std::int64_t>() >= 0)) fail("expected a non-negative integer");
    return j_.get<std::uint64_t>();
  }
  std::int64_t as_int() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<std::int64_t>();
  }
  double as_double() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  std::string as_string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  std::vector<std::size_t> as_index_list() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) out.push_back(static_cast<std::size_t>(at(i).as_uint()));
    return out;
  }

 private:
  const json& j_;
  std::string path_;
};

json selector_json(const TranscriptSelector& sel) {
  if (std::holds_alternative<MinIndexSelector>(sel)) return {{"kind", "min-index"}};
  if (const auto* s = std::get_if<SeededRandomSelector>(&sel)) return {{"kind", "seeded-random"}, {"seed", s->seed}};
  return {{"kind", "explicit"}, {"table", std::get<ExplicitSelector>(sel).table}};
}

TranscriptSelector selector_from(const Node& n) {
  n.expect_object({"kind", "seed", "table"});
  const auto kind = n.at("kind").as_string();
  if (kind == "min-index") {
    n.expect_object({"kind"});
    return MinIndexSelector{};
  }
  if (kind == "seeded-random") {
    n.expect_object({"kind", "seed"});
    return SeededRandomSelector{n.at("seed").as_uint()};
  }
  if (kind == "explicit") {
    n.expect_object({"kind", "table"});
    ExplicitSelector e;
    const auto t = n.at("table");
    for (std::size_t i = 0; i < t.size(); ++i) e.table.push_back(static_cast<std::uint32_t>(t.at(i).as_uint()));
    return e;
  }
  n.at("kind").fail("unknown selector kind '" + kind + "'");
}

json function_json(const FunctionSpec& f) {
  json j{{"kind", function_kind_name(f.kind)}};
  switch (f.kind) {
    case FunctionSpec::Kind::xor_fn:
    case FunctionSpec::Kind::eq:
      j["n"] = f.n;
      break;
    case FunctionSpec::Kind::matvec:
      j["n"] = f.n;
      j["ell"] = f.ell;
      break;
    case FunctionSpec::Kind::constant:
      break;
    case FunctionSpec::Kind::random:
      j["colors"] = f.colors;
      j["seed"] = f.seed;
      break;
    case FunctionSpec::Kind::table:
      j["colors"] = f.table;
      break;
  }
  return j;
}

FunctionSpec function_from(const Node& n, const std::vector<std::size_t>& sizes) {
  n.expect_object({"kind", "n", "ell", "colors", "seed"});
  FunctionSpec f;
  const auto kind = n.at("kind").as_string();
  if (kind == "xor" || kind == "eq") {
    n.expect_object({"kind", "n"});
    f.kind = kind == "xor" ? FunctionSpec::Kind::xor_fn : FunctionSpec::Kind::eq;
    f.n = static_cast<unsigned>(n.at("n").as_uint());
  } else if (kind == "matvec") {
    n.expect_object({"kind", "n", "ell"});
    f.kind = FunctionSpec::Kind::matvec;
    f.n = static_cast<unsigned>(n.at("n").as_uint());
    f.ell = static_cast<unsigned>(n.at("ell").as_uint());
  } else if (kind == "constant") {
    n.expect_object({"kind"});
    f.kind = FunctionSpec::Kind::constant;
    f.sizes = sizes;
  } else if (kind == "random") {
    n.expect_object({"kind", "colors", "seed"});
    f.kind = FunctionSpec::Kind::random;
    f.sizes = sizes;
    f.colors = static_cast<std::size_t>(n.at("colors").as_uint());
    f.seed = n.at("seed").as_uint();
  } else if (kind == "table") {
    n.expect_object({"kind", "colors"});
    f.kind = FunctionSpec::Kind::table;
    f.sizes = sizes;
    const auto t = n.at("colors");
    for (std::size_t i = 0; i < t.size(); ++i) f.table.push_back(static_cast<ColorId>(t.at(i).as_uint()));
  } else {
    n.at("kind").fail("unknown function kind '" + kind + "'");
  }
  return f;
}

json relation_json(const RelationSpec& r) {
  if (r.kind == RelationSpec::Kind::approx_xor) return {{"kind", "approx-xor"}, {"n", r.n}, {"delta", r.delta}};
  return {{"kind", "table"}, {"colors", r.colors}, {"admissible", r.admissible}};
}

RelationSpec relation_from(const Node& n, const std::vector<std::size_t>& sizes) {
  n.expect_object({"kind", "n", "delta", "colors", "admissible"});
  RelationSpec r;
  const auto kind = n.at("kind").as_string();
  if (kind == "approx-xor") {
    n.expect_object({"kind", "n", "delta"});
    r.kind = RelationSpec::Kind::approx_xor;
    r.n = static_cast<unsigned>(n.at("n").as_uint());
    r.delta = n.at("delta").as_double();
  } else if (kind == "table") {
    n.expect_object({"kind", "colors", "admissible"});
    r.kind = RelationSpec::Kind::table;
    r.sizes = sizes;
    r.colors = static_cast<std::size_t>(n.at("colors").as_uint());
    const auto a = n.at("admissible");
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::vector<ColorId> cell;
      for (auto z : a.at(i).as_index_list()) cell.push_back(static_cast<ColorId>(z));
      r.admissible.push_back(std::move(cell));
    }
  } else {
    n.at("kind").fail("unknown relation kind '" + kind + "'");
  }
  return r;
}

json outputs_json(const std::vector<std::int32_t>& g, std::size_t boxes) {
  json arr = json::array();
  for (std::size_t k = 0; k < g.size(); ++k)
    if (g[k] != ErrorProtocol::kUndefined) arr.push_back(json::array({k / boxes, k % boxes, g[k]}));
  return arr;
}

std::vector<std::int32_t> outputs_from(const Node& n, std::size_t inputs, std::size_t boxes) {
  std::vector<std::int32_t> g(inputs * boxes, ErrorProtocol::kUndefined);
  for (std::size_t i = 0; i < n.size(); ++i) {
    const auto e = n.at(i);
    if (e.size() != 3) e.fail("expected [input, box, color]");
    const auto input = e.at(std::size_t{0}).as_uint();
    const auto box = e.at(std::size_t{1}).as_uint();
    const auto color = e.at(std::size_t{2}).as_uint();
    if (input >= inputs) e.at(std::size_t{0}).fail("input out of range");
    if (box >= boxes) e.at(std::size_t{1}).fail("box out of range");
    if (color > INT32_MAX) e.at(std::size_t{2}).fail("color out of range");
    auto& slot = g[input * boxes + box];
    if (slot != ErrorProtocol::kUndefined) e.fail("duplicate entry");
    slot = static_cast<std::int32_t>(color);
  }
  return g;
}

std::string cell_text(const DomainShape& shape, std::size_t c) {
  std::string s = "(";
  for (std::size_t d = 0; d < shape.arity(); ++d) s += (d ? "," : "") + std::to_string(shape.coord(c, d));
  return s + ")";
}

}  // namespace

std::string canonical_dump(const json& j) {
  std::string out;
  dump(j, out, 0);
  out += "\n";
  return out;
}

JointDistribution Instance::joint_distribution() const {
  if (!distribution || distribution->kind == DistributionSpec::Kind::uniform)
    return JointDistribution::uniform(shape());
  return JointDistribution(shape(), distribution->p);
}

std::optional<Target> Instance::target() const {
  if (function) return Target(gen_function(*function));
  if (relation) return Target(gen_relation(*relation));
  return std::nullopt;
}

ErrorProtocol Instance::error_protocol() const {
  if (!outputs) throw InvalidInput("instance has no gA/gB tables");
  return ErrorProtocol(protocol, outputs->ga, outputs->gb);
}

AMProtocol AMInstance::am_protocol() const {
  std::vector<ErrorProtocol> eps;
  for (const auto& b : branches) eps.push_back(b.error_protocol());
  return AMProtocol(std::move(eps));
}

Target AMInstance::target() const {
  if (function) return Target(gen_function(*function));
  if (relation) return Target(gen_relation(*relation));
  throw InvalidInput("AM instance has no function or relation");
}

json to_json(const Instance& inst) {
  const auto& shape = inst.shape();
  json j;
  j["schema"] = kInstanceSchema;
  j["arity"] = shape.arity();
  j["sizes"] = shape.sizes();
  json rects = json::array();
  for (const auto& b : inst.protocol.cover().boxes()) {
    json factors = json::array();
    for (const auto& f : b.factors()) factors.push_back(f.members());
    rects.push_back(std::move(factors));
  }
  j["rectangles"] = std::move(rects);
  j["selector"] = selector_json(inst.protocol.selector());
  if (inst.function) j["function"] = function_json(*inst.function);
  if (inst.relation) j["relation"] = relation_json(*inst.relation);
  if (inst.distribution) {
    if (inst.distribution->kind == DistributionSpec::Kind::uniform) j["distribution"] = {{"kind", "uniform"}};
    else j["distribution"] = {{"kind", "table"}, {"p", inst.distribution->p}};
  }
  if (inst.outputs) {
    j["gA"] = outputs_json(inst.outputs->ga, inst.protocol.cover().size());
    j["gB"] = outputs_json(inst.outputs->gb, inst.protocol.cover().size());
  }
  return j;
}

Instance instance_from_json(const json& j, const std::string& path) {
  Node root(j, path);
  root.expect_object({"schema", "arity", "sizes", "rectangles", "selector", "function", "relation",
                      "distribution", "gA", "gB"});
  if (root.at("schema").as_string() != kInstanceSchema)
    root.at("schema").fail(std::string("expected schema '") + kInstanceSchema + "'");

  const auto sizes = root.at("sizes").as_index_list();
  if (root.at("arity").as_uint() != sizes.size()) root.at("arity").fail("arity does not match sizes");
  DomainShape shape;
  try {
    shape = DomainShape(sizes);
  } catch (const InvalidInput& e) {
    root.at("sizes").fail(e.what());
  }

  const auto rects = root.at("rectangles");
  std::vector<Box> boxes;
  for (std::size_t i = 0; i < rects.size(); ++i) {
    const auto r = rects.at(i);
    std::vector<std::vector<std::size_t>> lists;
    for (std::size_t d = 0; d < r.size(); ++d) lists.push_back(r.at(d).as_index_list());
    try {
      boxes.push_back(Box::from_lists(shape, lists));
    } catch (const InvalidInput& e) {
      r.fail(e.what());
    }
  }
  if (boxes.empty()) rects.fail("cover has no rectangles");
  Cover cover(shape, std::move(boxes));
  const auto coverage = validate_cover(cover);
  if (!coverage.covers_domain)
    rects.fail("cell " + cell_text(shape, coverage.uncovered.front()) + " is not covered");

  Instance inst;
  const auto selnode = root.at("selector");
  try {
    inst.protocol = Protocol(std::move(cover), selector_from(selnode));
  } catch (const InvalidSelector& e) {
    selnode.fail(e.what());
  }

  if (root.has("function")) {
    const auto n = root.at("function");
    inst.function = function_from(n, sizes);
    try {
      if (!(gen_function(*inst.function).shape() == shape)) n.fail("function shape does not match sizes");
    } catch (const InvalidInput& e) {
      if (dynamic_cast<const InstanceError*>(&e)) throw;
      n.fail(e.what());
    }
  }
  if (root.has("relation")) {
    const auto n = root.at("relation");
    inst.relation = relation_from(n, sizes);
    try {
      if (!(gen_relation(*inst.relation).shape() == shape)) n.fail("relation shape does not match sizes");
    } catch (const InvalidInput& e) {
      if (dynamic_cast<const InstanceError*>(&e)) throw;
      n.fail(e.what());
    }
  }
  if (root.has("distribution")) {
    const auto n = root.at("distribution");
    n.expect_object({"kind", "p"});
    DistributionSpec d;
    const auto kind = n.at("kind").as_string();
    if (kind == "uniform") {
      n.expect_object({"kind"});
    } else if (kind == "table") {
      d.kind = DistributionSpec::Kind::table;
      const auto p = n.at("p");
      for (std::size_t i = 0; i < p.size(); ++i) d.p.push_back(p.at(i).as_double());
      try {
        JointDistribution(shape, d.p);
      } catch (const InvalidInput& e) {
        p.fail(e.what());
      }
    } else {
      n.at("kind").fail("unknown distribution kind '" + kind + "'");
    }
    inst.distribution = std::move(d);
  }
  if (root.has("gA") || root.has("gB")) {
    if (shape.arity() != 2) root.fail("gA/gB tables need a two-party domain");
    const std::size_t nb = inst.protocol.cover().size();
    OutputMaps g;
    g.ga = outputs_from(root.at("gA"), shape.size(0), nb);
    g.gb = outputs_from(root.at("gB"), shape.size(1), nb);
    try {
      ErrorProtocol(inst.protocol, g.ga, g.gb);
    } catch (const InvalidInput& e) {
      root.at("gA").fail(e.what());
    }
    inst.outputs = std::move(g);
  }
  return inst;
}

json to_json(const AMInstance& am) {
  json j;
  j["schema"] = kAMSchema;
  if (am.function) j["function"] = function_json(*am.function);
  if (am.relation) j["relation"] = relation_json(*am.relation);
  json branches = json::array();
  for (const auto& b : am.branches) branches.push_back(to_json(b));
  j["branches"] = std::move(branches);
  return j;
}

AMInstance am_from_json(const json& j, const std::string& path) {
  Node root(j, path);
  root.expect_object({"schema", "function", "relation", "branches"});
  if (root.at("schema").as_string() != kAMSchema)
    root.at("schema").fail(std::string("expected schema '") + kAMSchema + "'");
  AMInstance am;
  const auto br = root.at("branches");
  if (br.size() == 0) br.fail("AM file needs at least one branch");
  for (std::size_t i = 0; i < br.size(); ++i) {
    am.branches.push_back(instance_from_json(br.at(i).raw(), br.at(i).path()));
    if (!am.branches.back().outputs) br.at(i).fail("AM branch needs gA/gB tables");
    if (!(am.branches.back().shape() == am.branches.front().shape())) br.at(i).fail("branch shapes differ");
  }
  const auto& sizes = am.branches.front().shape().sizes();
  if (root.has("function")) am.function = function_from(root.at("function"), sizes);
  if (root.has("relation")) am.relation = relation_from(root.at("relation"), sizes);
  if (!am.function && !am.relation) root.fail("AM file needs a function or a relation");
  try {
    if (!(target_shape(am.target()) == am.branches.front().shape())) root.fail("target shape does not match branches");
  } catch (const InvalidInput& e) {
    if (dynamic_cast<const InstanceError*>(&e)) throw;
    root.fail(e.what());
  }
  return am;
}

namespace {

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError(path.string(), "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InstanceError(path.string(), std::string("parse error: ") + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(path.string() + ": cannot write file");
  out << text;
  if (!out) throw InvalidInput(path.string() + ": write failed");
}

}  // namespace

void save_instance(const std::filesystem::path& path, const Instance& inst) {
  write_text(path, canonical_dump(to_json(inst)));
}

void save_am(const std::filesystem::path& path, const AMInstance& am) {
  write_text(path, canonical_dump(to_json(am)));
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json(path)); }

AMInstance load_am(const std::filesystem::path& path) { return am_from_json(read_json(path)); }

std::string fingerprint(const Instance& inst) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : canonical_dump(to_json(inst))) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace commlab
