// htlrc: build codes, store stripes, repair nodes, and print bandwidth tables.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "htlrc/duality.hpp"
#include "htlrc/errors.hpp"
#include "htlrc/globalfix.hpp"
#include "htlrc/paths.hpp"
#include "htlrc/serialize.hpp"
#include "htlrc/store.hpp"

namespace fs = std::filesystem;
using namespace htlrc;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::exhausted:
      return 2;
    case ErrorKind::io:
    case ErrorKind::missing_read:
      return 3;
    case ErrorKind::verification:
    case ErrorKind::singular:
    case ErrorKind::inconsistent:
      return 4;
  }
  return 1;
}

void report_error(const char* kind, const std::string& msg) {
  std::string escaped;
  for (char c : msg) {
    if (c == '"' || c == '\\') escaped += '\\';
    escaped += c == '\n' ? ' ' : c;
  }
  std::cerr << fmt::format("error kind={} msg=\"{}\"\n", kind, escaped);
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HTLRC_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      fail(ErrorKind::validation, fmt::format("HTLRC_SEED is not a number: '{}'", env));
    }
  }
  return 1;
}

Field field_for(unsigned w) {
  switch (w) {
    case 5: return Field::gf32();
    case 8: return Field::gf256();
    case 16: return Field::gf65536();
  }
  fail(ErrorKind::validation, fmt::format("unsupported field width {} (5, 8 or 16)", w));
}

void emit(const Json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json_file(out, j);
  }
}

AnySpec load_spec(const std::string& path) { return any_spec_from_json(read_json_file(path)); }

StripeStore open_store(const std::string& dir) {
  fs::path p = fs::path(dir).lexically_normal();
  if (p.filename().empty()) p = p.parent_path();
  require(!p.filename().empty(), fmt::format("'{}' does not name a stripe directory", dir));
  return StripeStore(p.parent_path().empty() ? fs::path(".") : p.parent_path(),
                     p.filename().string());
}

std::vector<std::uint32_t> parse_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    try {
      out.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
    } catch (const std::exception&) {
      fail(ErrorKind::validation, fmt::format("'{}' is not a number in list '{}'", cur, text));
    }
    cur.clear();
  };
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '(' || c == ')') flush();
    else cur += c;
  }
  flush();
  return out;
}

// "9..16" or a single value.
std::pair<std::uint32_t, std::uint32_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = parse_list(text);
    require(v.size() == 1, fmt::format("bad range '{}'", text));
    return {v[0], v[0]};
  }
  const auto lo = parse_list(text.substr(0, dots));
  const auto hi = parse_list(text.substr(dots + 2));
  require(lo.size() == 1 && hi.size() == 1, fmt::format("bad range '{}'", text));
  return {lo[0], hi[0]};
}

std::string rational(const Rational& r) {
  return fmt::format("{}", static_cast<double>(r.numerator()) / static_cast<double>(r.denominator()));
}

std::string gamma_text(const Rational& r) {
  if (r.denominator() == 1) return fmt::format("{}", r.numerator());
  return fmt::format("{}/{}", r.numerator(), r.denominator());
}

CostModel cost_model(std::uint64_t substripe_size, double rate, std::optional<double> seek) {
  CostModel m = CostModel::calibrated(substripe_size, rate);
  if (seek) m.seek_time = *seek;
  validate(m);
  return m;
}

std::string summary(const PlannedRepair& p, std::uint64_t substripe_size) {
  const auto& m = p.plan.metrics;
  std::string line = fmt::format(
      "lost={} strategy={} kind={} substripes={} bytes={} read_ops={} gamma={} helpers={}",
      p.plan.lost_node, to_string(p.strategy), to_string(p.plan.kind), m.substripes,
      m.bytes(substripe_size), m.read_ops, gamma_text(m.gamma), p.plan.helpers());
  if (p.plan.fallback) line += " fallback=1";
  if (p.decision)
    line += fmt::format(" local_cost={:.6g} global_cost={:.6g}", p.decision->local_cost,
                        p.decision->global_cost);
  return line;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, fmt::format("cannot open {}", path));
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, fmt::format("cannot write {}", path));
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, fmt::format("write to {} failed", path));
}

// Local parities of each source must add up to the base parity they split.
bool split_identity_holds(const LrcSpec& lrc, const Stripe& split, const Stripe& plain) {
  const Field& f = lrc.base.field;
  for (std::uint32_t s = 1; s < lrc.config.delta; ++s) {
    NodeVector sum(lrc.alpha(), split[0].payload_len());
    for (std::uint32_t g = 1; g <= lrc.config.l; ++g)
      for (std::uint32_t row = 1; row <= lrc.alpha(); ++row)
        f.axpy(sum.substripe(row), 1, split[lrc.local_node(s, g) - 1].substripe(row));
    if (sum != plain[lrc.k() + s - 1]) return false;
  }
  return true;
}

int verify_spec(const AnySpec& spec, const std::string& mode, std::uint32_t samples,
                std::uint64_t seed) {
  const CodeSpec& base = base_of(spec);
  VerifyMode vm = default_verify_mode(base.n, base.k, base.alpha);
  if (mode == "exhaustive") vm = VerifyMode::exhaustive();
  else if (mode == "sampled") vm = VerifyMode::sampled(samples, seed);
  else require(mode == "auto", fmt::format("unknown mode '{}'", mode));

  bool ok = true;
  const MdsReport r = verify_mds(base, vm);
  fmt::print("mds: checked={} failing={}\n", r.checked, r.failing.size());
  for (const auto& s : r.failing) fmt::print("  undecodable subset {{{}}}\n", fmt::join(s, ","));
  ok &= r.ok();

  const LrcSpec* lrc = nullptr;
  if (const auto* l = std::get_if<LrcSpec>(&spec)) lrc = l;
  if (const auto* g = std::get_if<GlobalLrcSpec>(&spec)) lrc = &g->lrc;
  if (lrc) {
    std::mt19937_64 rng(seed);
    std::vector<NodeVector> data;
    for (std::uint32_t u = 0; u < base.k; ++u) {
      NodeVector nv(base.alpha, 4);
      for (auto& e : nv.raw()) e = static_cast<Element>(rng() % base.field.size());
      data.push_back(std::move(nv));
    }
    const Stripe plain = encode(base, data);
    Stripe split = encode(to_linear_code(spec), data);
    if (const auto* g = std::get_if<GlobalLrcSpec>(&spec)) {
      Stripe back = split;
      unmix(*g, back);
      const bool unmix_ok = back == encode_lrc(g->lrc, data);
      fmt::print("unmix: {}\n", unmix_ok ? "ok" : "FAILED");
      ok &= unmix_ok;
      split = back;
    }
    const bool identity = split_identity_holds(*lrc, split, plain);
    fmt::print("split identity: {}\n", identity ? "ok" : "FAILED");
    ok &= identity;

    const auto expected = lrc_min_distance(lrc->n_prime(), lrc->k(), lrc->config.l, lrc->config.delta);
    const auto cert = certify_min_distance(to_linear_code(spec), lrc->n_prime() - lrc->k());
    fmt::print("distance: measured={} formula={} patterns={}", cert.d_min, expected.d_min,
               cert.patterns_checked);
    if (!cert.witness.empty()) fmt::print(" witness={{{}}}", fmt::join(cert.witness, ","));
    fmt::print("\n");
    ok &= cert.d_min >= expected.d_min;
  }
  fmt::print("verify: {}\n", ok ? "ok" : "FAILED");
  return ok ? 0 : exit_code(ErrorKind::verification);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HashTag codes with locality: construction, storage and repair"};
  app.require_subcommand(1);
  int status = 0;

  // gen-code
  auto* gen = app.add_subcommand("gen-code", "Generate a code spec");
  std::uint32_t n = 0, k = 0, alpha = 0;
  unsigned w = 8;
  std::optional<std::uint64_t> seed;
  bool golden = false;
  std::string out;
  gen->add_option("--n", n, "Code length");
  gen->add_option("--k", k, "Data nodes");
  gen->add_option("--alpha", alpha, "Sub-packetization");
  gen->add_option("--field", w, "Field width in bits: 5, 8 or 16");
  gen->add_option("--seed", seed, "Coefficient seed (default HTLRC_SEED or 1)");
  gen->add_flag("--golden-9-6", golden, "Emit the published (9,6) alpha=9 code");
  gen->add_option("--out,-o", out, "Output file (default stdout)");
  gen->callback([&] {
    if (golden) return emit(to_json(golden_9_6_code()), out);
    require(n && k && alpha, "gen-code needs --n, --k and --alpha (or --golden-9-6)");
    const bool strict = (n - k) > 1 && alpha % (n - k) == 0 && k % (n - k) == 0;
    emit(to_json(make_code(n, k, alpha, field_for(w), seed.value_or(default_seed()),
                           strict || alpha == 1 ? Schedule::strict : Schedule::relaxed)),
         out);
  });

  // split
  auto* split = app.add_subcommand("split", "Split parities of a code spec into local parities");
  std::string spec_path, shape;
  std::uint32_t l = 0, delta = 2;
  split->add_option("--spec", spec_path, "Code spec")->required();
  split->add_option("--l", l, "Number of groups");
  split->add_option("--delta", delta, "Local distance");
  split->add_option("--shape", shape, "(k, l, delta), e.g. \"(6,2,2)\"");
  split->add_option("--out,-o", out, "Output file");
  split->callback([&] {
    const AnySpec spec = load_spec(spec_path);
    const auto* base = std::get_if<CodeSpec>(&spec);
    require(base != nullptr, "split needs a plain code spec");
    if (!shape.empty()) {
      const auto v = parse_list(shape);
      require(v.size() == 3, fmt::format("shape '{}' must be (k, l, delta)", shape));
      require(v[0] == base->k, fmt::format("shape has k={}, spec has k={}", v[0], base->k));
      l = v[1];
      delta = v[2];
    }
    require(l > 0, "split needs --l or --shape");
    emit(to_json(split_parities(*base, {l, delta})), out);
  });

  // gen-global-lrc
  auto* ggl = app.add_subcommand("gen-global-lrc", "Generate a split code with mixed globals");
  std::uint32_t g = 0;
  ggl->add_option("--k", k, "Data nodes")->required();
  ggl->add_option("--l", l, "Number of groups")->required();
  ggl->add_option("--g", g, "Global parities (= sub-packetization)")->required();
  ggl->add_option("--field", w, "Field width in bits: 5, 8 or 16");
  ggl->add_option("--seed", seed, "Seed (default HTLRC_SEED or 1)");
  ggl->add_option("--out,-o", out, "Output file");
  ggl->callback([&] {
    emit(to_json(build_global_efficient_lrc(k, l, g, field_for(w), seed.value_or(default_seed()))),
         out);
  });

  // encode
  auto* enc = app.add_subcommand("encode", "Encode a file into a stripe directory");
  std::string in_path, dir;
  enc->add_option("--spec", spec_path, "Code spec")->required();
  enc->add_option("--in", in_path, "Input file")->required();
  enc->add_option("--out-dir", dir, "Stripe directory")->required();
  enc->callback([&] {
    const AnySpec spec = load_spec(spec_path);
    const CodeSpec& base = base_of(spec);
    const auto bytes = read_bytes(in_path);
    const auto data = split_file(bytes, base.k, base.alpha, base.field.w());
    auto store = open_store(dir);
    const Manifest m = store.write_stripe(spec, encode(to_linear_code(spec), data), bytes.size());
    fmt::print("nodes={} alpha={} substripe_size={} original_size={} spec={}\n", m.n_prime,
               m.alpha, m.substripe_size, m.original_size, m.spec_hash.substr(0, 12));
  });

  // decode
  auto* dec = app.add_subcommand("decode", "Recover the file from surviving nodes");
  std::string nodes_text;
  dec->add_option("--spec", spec_path, "Code spec")->required();
  dec->add_option("--dir", dir, "Stripe directory")->required();
  dec->add_option("--nodes", nodes_text, "Nodes to read, e.g. 1,2,7 (default: all present)");
  dec->add_option("--out,-o", out, "Output file")->required();
  dec->callback([&] {
    const AnySpec spec = load_spec(spec_path);
    auto store = open_store(dir);
    const Manifest m = store.check_spec(spec);
    std::vector<std::uint32_t> nodes = parse_list(nodes_text);
    if (nodes.empty())
      for (std::uint32_t j = 1; j <= m.n_prime; ++j)
        if (store.node_present(j)) nodes.push_back(j);
    std::vector<NodeVector> contents;
    for (auto j : nodes) {
      require(j >= 1 && j <= m.n_prime, fmt::format("node {} out of range 1..{}", j, m.n_prime));
      contents.push_back(store.read_node(spec, j));
    }
    const auto data = decode(to_linear_code(spec), nodes, contents);
    write_bytes(out, join_file(data, base_of(spec).field.w(), m.original_size));
    fmt::print("decoded {} bytes from nodes {{{}}}\n", m.original_size, fmt::join(nodes, ","));
  });

  // repair and plan-repair share their flags
  std::uint32_t lost = 0;
  std::string strategy = "auto";
  std::optional<double> seek;
  double rate = 100e6;
  std::uint64_t substripe_size = 1024;
  bool check = false, dump = false;

  auto* rep = app.add_subcommand("repair", "Rebuild a lost node in place");
  rep->add_option("--spec", spec_path, "Code spec")->required();
  rep->add_option("--dir", dir, "Stripe directory")->required();
  rep->add_option("--lost", lost, "Lost node")->required();
  rep->add_option("--strategy", strategy, "local | global | auto");
  rep->add_option("--seek", seek, "Seek time per read op in seconds (default: 9 KiB of transfer)");
  rep->add_option("--rate", rate, "Transfer rate in bytes per second");
  rep->add_flag("--check", check, "Cross-check redundant reads");
  rep->callback([&] {
    const AnySpec spec = load_spec(spec_path);
    auto store = open_store(dir);
    const Manifest m = store.check_spec(spec);
    const auto planned = plan_path(spec, lost, parse_path_request(strategy),
                                   cost_model(m.substripe_size, rate, seek));
    const ReadResult reads = store.read_substripes(spec, planned.plan.reads, lost);
    const NodeVector rebuilt = execute_repair(base_of(spec).field, planned.plan, reads.provider(), check);
    store.write_node(spec, lost, rebuilt);
    fmt::print("{} observed_read_ops={} observed_bytes={}\n", summary(planned, m.substripe_size),
               reads.read_ops, reads.substripes * m.substripe_size);
  });

  auto* plan = app.add_subcommand("plan-repair", "Print the repair plan for a node");
  plan->add_option("--spec", spec_path, "Code spec")->required();
  plan->add_option("--lost", lost, "Lost node")->required();
  plan->add_option("--strategy", strategy, "local | global | auto");
  plan->add_option("--substripe-size", substripe_size, "Bytes per substripe");
  plan->add_option("--seek", seek, "Seek time per read op in seconds");
  plan->add_option("--rate", rate, "Transfer rate in bytes per second");
  plan->add_flag("--dump", dump, "Print the plan as JSON");
  plan->callback([&] {
    const AnySpec spec = load_spec(spec_path);
    const auto planned = plan_path(spec, lost, parse_path_request(strategy),
                                   cost_model(substripe_size, rate, seek));
    if (dump) return emit(to_json(planned.plan), "");
    fmt::print("{}\n", summary(planned, substripe_size));
    for (const auto& r : planned.plan.reads)
      fmt::print("  node {}: substripes {}\n", r.node, fmt::join(r.rows, ","));
  });

  // simulate
  auto* sim = app.add_subcommand("simulate", "Price both repair paths of every data node");
  std::string sizes_text = "1024,10485760";
  sim->add_option("--spec", spec_path, "Split code spec")->required();
  sim->add_option("--sizes", sizes_text, "Substripe sizes in bytes, comma separated");
  sim->add_option("--seek", seek, "Seek time per read op in seconds (default: 9 KiB of transfer)");
  sim->add_option("--rate", rate, "Transfer rate in bytes per second");
  sim->callback([&] {
    const AnySpec spec = load_spec(spec_path);
    require(!std::holds_alternative<CodeSpec>(spec), "simulate needs a split code spec");
    fmt::print("node,substripe_size,chosen,local_bytes,local_read_ops,local_cost,"
               "global_bytes,global_read_ops,global_cost\n");
    for (std::uint64_t size : parse_list(sizes_text))
      for (std::uint32_t u = 1; u <= base_of(spec).k; ++u) {
        const auto p = plan_path(spec, u, PathRequest::automatic, cost_model(size, rate, seek));
        const auto& d = *p.decision;
        fmt::print("{},{},{},{},{},{:.9g},{},{},{:.9g}\n", u, size, to_string(d.chosen),
                   d.local_plan.metrics.bytes(size), d.local_plan.metrics.read_ops, d.local_cost,
                   d.global_plan.metrics.bytes(size), d.global_plan.metrics.read_ops,
                   d.global_cost);
      }
  });

  // curves
  auto* cur = app.add_subcommand("curves", "Repair bandwidth per node, in file units");
  std::string l_text = "2,4", n_text = "9..16";
  cur->add_option("--k", k, "Data nodes")->required();
  cur->add_option("--delta", delta, "Local distance");
  cur->add_option("--l", l_text, "Group counts, comma separated");
  cur->add_option("--n", n_text, "Length range, e.g. 9..16");
  cur->callback([&] {
    const auto ls = parse_list(l_text);
    const auto [lo, hi] = parse_range(n_text);
    fmt::print("n,k,l,delta,gamma_local_branch,gamma_global_branch,gamma\n");
    for (const auto& row : bandwidth_curves(k, ls, delta, lo, hi))
      fmt::print("{},{},{},{},{},{},{}\n", row.n, row.k, row.l, row.delta,
                 rational(row.gamma.local), rational(row.gamma.global), rational(row.gamma.min()));
  });

  // verify
  auto* ver = app.add_subcommand("verify", "Check decodability and split-code identities");
  std::string mode = "auto";
  std::uint32_t samples = 64;
  ver->add_option("--spec", spec_path, "Spec")->required();
  ver->add_option("--mode", mode, "auto | exhaustive | sampled");
  ver->add_option("--samples", samples, "Subsets to sample in sampled mode");
  ver->add_option("--seed", seed, "Sampling seed");
  ver->callback([&] {
    status = verify_spec(load_spec(spec_path), mode, samples, seed.value_or(default_seed()));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("validation", e.what());
    return exit_code(ErrorKind::validation);
  } catch (const Error& e) {
    report_error(to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    report_error("io", e.what());
    return exit_code(ErrorKind::io);
  }
  return status;
}
