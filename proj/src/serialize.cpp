#include "htlrc/serialize.hpp"

#include <fstream>

#include <fmt/format.h>

#include "htlrc/errors.hpp"

namespace htlrc {

namespace {

void put_base(Json& j, const CodeSpec& spec) {
  j["version"] = kSpecVersion;
  j["n"] = spec.n;
  j["k"] = spec.k;
  j["alpha"] = spec.alpha;
  j["field"] = {{"w", spec.field.w()}, {"poly", spec.field.poly()}};
  Json arrays = Json::array();
  for (const auto& arr : spec.arrays) {
    Json rows = Json::array();
    for (const auto& row : arr) {
      Json pairs = Json::array();
      for (const auto& p : row) pairs.push_back({p.row, p.node});
      rows.push_back(std::move(pairs));
    }
    arrays.push_back(std::move(rows));
  }
  j["arrays"] = std::move(arrays);
  j["coeffs"] = spec.coeffs;
  j["seed"] = spec.seed;
}

void put_lrc(Json& j, const LrcSpec& spec) {
  put_base(j, spec.base);
  j["locality"] = {{"l", spec.config.l}, {"delta", spec.config.delta}};
  j["groups"] = spec.groups;
  Json locals = Json::array();
  for (const auto& p : spec.locals) locals.push_back({p.source, p.group});
  j["local_parities"] = std::move(locals);
  j["global_parities"] = spec.globals;
}

// Wraps library parse errors so callers only see htlrc::Error.
template <typename F>
auto parsing(const char* what, F&& body) {
  try {
    return body();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::validation, fmt::format("malformed {} document: {}", what, e.what()));
  }
}

CodeSpec read_base(const Json& j) {
  const int version = j.at("version").get<int>();
  require(version == kSpecVersion, fmt::format("unsupported spec version {}", version));
  CodeSpec spec;
  spec.n = j.at("n").get<std::uint32_t>();
  spec.k = j.at("k").get<std::uint32_t>();
  spec.alpha = j.at("alpha").get<std::uint32_t>();
  const auto& field = j.at("field");
  spec.field = Field(field.at("w").get<unsigned>(), field.at("poly").get<std::uint32_t>());
  for (const auto& rows : j.at("arrays")) {
    IndexArray arr;
    for (const auto& row : rows) {
      std::vector<IndexPair> pairs;
      for (const auto& p : row) {
        require(p.size() == 2, "index pair must have two entries");
        pairs.push_back({p[0].get<std::uint32_t>(), p[1].get<std::uint32_t>()});
      }
      arr.push_back(std::move(pairs));
    }
    spec.arrays.push_back(std::move(arr));
  }
  spec.coeffs = j.at("coeffs").get<std::vector<std::vector<std::vector<Element>>>>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  validate(spec);
  return spec;
}

LrcSpec read_lrc(const Json& j) {
  LrcSpec spec;
  spec.base = read_base(j);
  spec.config.l = j.at("locality").at("l").get<std::uint32_t>();
  spec.config.delta = j.at("locality").at("delta").get<std::uint32_t>();
  spec.groups = j.at("groups").get<std::vector<std::vector<std::uint32_t>>>();
  for (const auto& p : j.at("local_parities")) {
    require(p.size() == 2, "local parity must be [source, group]");
    spec.locals.push_back({p[0].get<std::uint32_t>(), p[1].get<std::uint32_t>()});
  }
  spec.globals = j.at("global_parities").get<std::vector<std::uint32_t>>();
  validate(spec);
  // Anything but the canonical split of this base would be a different code.
  require(spec == split_parities(spec.base, spec.config),
          "groups/parities do not match the split of the base code");
  return spec;
}

}  // namespace

Json to_json(const CodeSpec& spec) {
  Json j;
  put_base(j, spec);
  return j;
}

Json to_json(const LrcSpec& spec) {
  Json j;
  put_lrc(j, spec);
  return j;
}

Json to_json(const GlobalLrcSpec& spec) {
  Json j;
  put_lrc(j, spec.lrc);
  Json mix = Json::array();
  for (const auto& m : spec.mix) mix.push_back({m.a, m.b, m.f1, m.f2, m.f3, m.f4});
  j["mix"] = std::move(mix);
  return j;
}

Json to_json(const RepairPlan& plan) {
  Json j;
  j["lost_node"] = plan.lost_node;
  j["alpha"] = plan.alpha;
  j["kind"] = to_string(plan.kind);
  j["fallback"] = plan.fallback;
  Json reads = Json::array();
  for (const auto& r : plan.reads) reads.push_back({{"node", r.node}, {"substripes", r.rows}});
  j["reads"] = std::move(reads);
  auto terms_json = [](const std::vector<ReadTerm>& terms) {
    Json out = Json::array();
    for (const auto& t : terms) out.push_back({t.node, t.row, t.coef});
    return out;
  };
  Json steps = Json::array();
  for (const auto& s : plan.steps)
    steps.push_back({{"substripe", s.target_row}, {"terms", terms_json(s.terms)}});
  j["steps"] = std::move(steps);
  Json checks = Json::array();
  for (const auto& c : plan.checks) checks.push_back(terms_json(c));
  j["checks"] = std::move(checks);
  j["metrics"] = {{"substripes", plan.metrics.substripes},
                  {"read_ops", plan.metrics.read_ops},
                  {"gamma", fmt::format("{}/{}", plan.metrics.gamma.numerator(),
                                        plan.metrics.gamma.denominator())}};
  return j;
}

CodeSpec code_spec_from_json(const Json& j) {
  return parsing("code spec", [&] { return read_base(j); });
}

LrcSpec lrc_spec_from_json(const Json& j) {
  return parsing("split spec", [&] { return read_lrc(j); });
}

GlobalLrcSpec global_lrc_spec_from_json(const Json& j) {
  return parsing("global-efficient spec", [&] {
    GlobalLrcSpec spec;
    spec.lrc = read_lrc(j);
    for (const auto& m : j.at("mix")) {
      require(m.size() == 6, "mix entry must be [i, j, f1, f2, f3, f4]");
      spec.mix.push_back({m[0].get<std::uint32_t>(), m[1].get<std::uint32_t>(),
                          m[2].get<Element>(), m[3].get<Element>(), m[4].get<Element>(),
                          m[5].get<Element>()});
    }
    validate(spec);
    return spec;
  });
}

AnySpec any_spec_from_json(const Json& j) {
  require(j.is_object(), "spec document must be a JSON object");
  if (j.contains("mix")) return global_lrc_spec_from_json(j);
  if (j.contains("locality")) return lrc_spec_from_json(j);
  return code_spec_from_json(j);
}

Json to_json(const AnySpec& spec) {
  return std::visit([](const auto& s) { return to_json(s); }, spec);
}

LinearCode to_linear_code(const AnySpec& spec) {
  return std::visit([](const auto& s) { return to_linear_code(s); }, spec);
}

const CodeSpec& base_of(const AnySpec& spec) {
  if (const auto* c = std::get_if<CodeSpec>(&spec)) return *c;
  if (const auto* l = std::get_if<LrcSpec>(&spec)) return l->base;
  return std::get<GlobalLrcSpec>(spec).lrc.base;
}

std::string canonical(const Json& j) { return j.dump(); }

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open {}", path.string()));
  try {
    return Json::parse(in);
  } catch (const std::exception& e) {
    fail(ErrorKind::validation, fmt::format("{} is not valid JSON: {}", path.string(), e.what()));
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  out << j.dump(2) << '\n';
  if (!out) fail(ErrorKind::io, fmt::format("write to {} failed", path.string()));
}

}  // namespace htlrc
