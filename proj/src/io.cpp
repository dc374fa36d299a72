#include "hypercover/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "hypercover/errors.hpp"

namespace hypercover::io {

namespace {

json integer_json(const BigInt& x) {
  if (x.fits_slong_p()) return json(static_cast<std::int64_t>(x.get_si()));
  return json(x.get_str());
}

BigInt integer_from_json(const json& j, const char* what) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? BigInt(std::to_string(j.get<std::uint64_t>()))
                                  : BigInt(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  throw Error(ErrorCode::BadInput, std::string(what) + " must be an integer");
}

json rational_json(const Rational& q) { return to_fraction_string(q); }

std::string node_name(congest::NodeId node) {
  return (node.side == congest::Side::Vertex ? "v" : "e") + std::to_string(node.index);
}

congest::NodeId node_from(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'v' && s[0] != 'e')) throw Error(ErrorCode::BadInput, "bad node name '" + s + "'");
  const auto index = static_cast<std::uint32_t>(std::stoul(s.substr(1)));
  return s[0] == 'v' ? congest::vertex_node(index) : congest::edge_node(index);
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::BadInput, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::BadInput, std::string("field '") + key + "': " + ex.what());
  }
}

json ids_json(const Hypergraph& h, std::span<const VertexIndex> set) {
  json out = json::array();
  for (VertexIndex v : set) out.push_back(h.vertex_id(v));
  return out;
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(integer_from_json(j, "number"));
  if (j.is_number_float()) {
    const double d = j.get<double>();
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), d);
    return parse_rational(std::string_view(buffer, static_cast<std::size_t>(result.ptr - buffer)));
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorCode::BadInput, "expected a number or a rational string");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadInput, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// ---------------------------------------------------------------------------
// Instances

RawInstance instance_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges")) {
    throw Error(ErrorCode::BadInput, "instance needs 'vertices' and 'edges'");
  }
  RawInstance raw;
  for (const auto& vx : j.at("vertices")) {
    if (!vx.is_object()) throw Error(ErrorCode::BadInput, "vertex entries must be objects");
    const BigInt id = integer_from_json(vx.at("id"), "vertex id");
    if (!id.fits_slong_p()) throw Error(ErrorCode::BadInput, "vertex id out of range");
    const BigInt weight = vx.contains("weight") ? integer_from_json(vx.at("weight"), "weight") : BigInt(1);
    raw.vertices.push_back({static_cast<VertexId>(id.get_si()), weight});
  }
  for (const auto& e : j.at("edges")) {
    if (!e.is_array()) throw Error(ErrorCode::BadInput, "edges must be arrays of vertex ids");
    std::vector<VertexId> members;
    for (const auto& id : e) {
      const BigInt value = integer_from_json(id, "vertex id");
      if (!value.fits_slong_p()) throw Error(ErrorCode::BadInput, "vertex id out of range");
      members.push_back(static_cast<VertexId>(value.get_si()));
    }
    raw.edges.push_back(std::move(members));
  }
  return raw;
}

json instance_to_json(const Hypergraph& h) {
  json vertices = json::array();
  for (VertexIndex v = 0; v < h.num_vertices(); ++v) {
    vertices.push_back(json{{"id", h.vertex_id(v)}, {"weight", integer_json(h.weight(v))}});
  }
  json edges = json::array();
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) edges.push_back(ids_json(h, h.edge(e)));
  return json{{"vertices", vertices}, {"edges", edges}};
}

RawInstance instance_from_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  RawInstance raw;
  std::optional<std::int64_t> n;
  std::size_t expected_edges = 0;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::BadInput, "line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string tag;
    if (!(fields >> tag) || tag == "c") continue;
    if (tag == "p") {
      std::string kind;
      std::int64_t count = 0;
      std::int64_t m = 0;
      if (n || !(fields >> kind >> count >> m) || kind != "hvc" || count < 0 || m < 0) throw bad("bad header");
      n = count;
      expected_edges = static_cast<std::size_t>(m);
      for (std::int64_t v = 1; v <= count; ++v) raw.vertices.push_back({v, 1});
    } else if (tag == "w") {
      std::int64_t v = 0;
      std::string weight;
      if (!n || !(fields >> v >> weight) || v < 1 || v > *n) throw bad("bad weight line");
      raw.vertices[static_cast<std::size_t>(v - 1)].weight = parse_bigint(weight);
    } else if (tag == "e") {
      if (!n) throw bad("edge before header");
      std::vector<VertexId> members;
      std::string token;
      while (fields >> token) {
        const BigInt id = parse_bigint(token);
        if (!id.fits_slong_p()) throw bad("vertex id out of range");
        members.push_back(static_cast<VertexId>(id.get_si()));
      }
      raw.edges.push_back(std::move(members));
    } else {
      throw bad("unknown line tag '" + tag + "'");
    }
  }
  if (!n) throw Error(ErrorCode::BadInput, "missing 'p hvc n m' header");
  if (raw.edges.size() != expected_edges) {
    throw Error(ErrorCode::BadInput, "header announces " + std::to_string(expected_edges) + " edges, found " +
                                         std::to_string(raw.edges.size()));
  }
  return raw;
}

std::string instance_to_text(const Hypergraph& h) {
  // Text ids are positions 1..n.
  std::ostringstream out;
  out << "p hvc " << h.num_vertices() << ' ' << h.num_edges() << '\n';
  for (VertexIndex v = 0; v < h.num_vertices(); ++v) out << "w " << v + 1 << ' ' << h.weight(v).get_str() << '\n';
  for (EdgeIndex e = 0; e < h.num_edges(); ++e) {
    out << 'e';
    for (VertexIndex v : h.edge(e)) out << ' ' << v + 1;
    out << '\n';
  }
  return out.str();
}

Hypergraph parse_instance(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::BadInput, std::string("malformed JSON: ") + ex.what());
    }
    try {
      return Hypergraph::validate(instance_from_json(j));
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::BadInput, std::string("malformed instance: ") + ex.what());
    }
  }
  return Hypergraph::validate(instance_from_text(text));
}

Hypergraph load_instance(const std::string& path) { return parse_instance(read_file(path)); }

// ---------------------------------------------------------------------------
// Results

json params_to_json(const ProtocolParams& p) {
  return json{{"epsilon", rational_json(p.epsilon)},
              {"f", p.f},
              {"beta", rational_json(p.beta)},
              {"z", p.z},
              {"alpha", rational_json(p.alpha)},
              {"gamma", rational_json(p.gamma)},
              {"delta", integer_json(p.delta)},
              {"alpha_mode", std::string(to_string(p.alpha_mode))},
              {"variant", std::string(to_string(p.variant))},
              {"alpha_branch", std::string(to_string(p.alpha_branch))}};
}

ProtocolParams params_from_json(const json& j) {
  ProtocolParams p;
  p.epsilon = parse_rational(field<std::string>(j, "epsilon"));
  p.f = field<std::uint32_t>(j, "f");
  p.beta = parse_rational(field<std::string>(j, "beta"));
  p.z = field<std::uint32_t>(j, "z");
  p.alpha = parse_rational(field<std::string>(j, "alpha"));
  p.gamma = parse_rational(field<std::string>(j, "gamma"));
  p.delta = integer_from_json(j.at("delta"), "delta");
  p.alpha_mode = alpha_mode_from_string(field<std::string>(j, "alpha_mode"));
  p.variant = variant_from_string(field<std::string>(j, "variant"));
  const std::string branch = field<std::string>(j, "alpha_branch");
  for (auto b : {AlphaBranch::Scaled, AlphaBranch::Clamped, AlphaBranch::Otherwise}) {
    if (to_string(b) == branch) p.alpha_branch = b;
  }
  return p;
}

json run_result_to_json(const Hypergraph& h, const RunResult& r) {
  json dual = json::array();
  for (const auto& d : r.dual) dual.push_back(rational_json(d));
  json levels = json::array();
  for (auto l : r.levels) levels.push_back(l);
  json stuck = json::array();
  for (const auto& [key, count] : r.trace.stuck_count) {
    stuck.push_back(json{{"vertex", h.vertex_id(key.first)}, {"level", key.second}, {"count", count}});
  }
  const auto& t = r.trace;
  return json{{"params", params_to_json(r.params)},
              {"cover", ids_json(h, r.cover)},
              {"cover_weight", integer_json(r.cover_weight(h))},
              {"dual_total", rational_json(r.dual_total())},
              {"dual", dual},
              {"levels", levels},
              {"iterations", t.termination_iteration},
              {"rounds", t.rounds_executed()},
              {"iteration_cap", t.iteration_cap},
              {"capped", t.capped},
              {"all_terminated", t.all_terminated},
              {"cover_complete_iteration", t.cover_complete_iteration ? json(*t.cover_complete_iteration) : json()},
              {"max_message_bits", t.max_message_bits},
              {"bit_budget", congest::bit_budget(h.num_vertices())},
              {"message_count", t.message_count},
              {"raise_count", t.raise_count},
              {"covered_iteration", t.covered_iteration},
              {"stuck_count", stuck}};
}

json certificate_to_json(const Hypergraph& h, const certify::Certificate& c) {
  json out{{"cover", ids_json(h, c.cover)},
           {"cover_weight", integer_json(c.cover_weight)},
           {"dual_total", rational_json(c.dual_total)},
           {"ratio", c.ratio ? json(to_fraction_string(*c.ratio)) : json()},
           {"ratio_bound", rational_json(c.ratio_bound)},
           {"tight", ids_json(h, c.tight)},
           {"is_cover", c.is_cover},
           {"dual_feasible", c.feasibility.feasible},
           {"cover_within_tight", c.cover_within_tight},
           {"min_packing_slack", c.feasibility.min_slack ? json(to_fraction_string(*c.feasibility.min_slack)) : json()},
           {"valid", c.valid}};
  return out;
}

json audit_to_json(const certify::AuditReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back(json{{"name", c.name},
                          {"verdict", std::string(certify::to_string(c.verdict))},
                          {"checked", c.checked},
                          {"violations", c.violations},
                          {"min_slack", c.min_slack ? json(to_fraction_string(*c.min_slack)) : json()},
                          {"details", c.details}});
  }
  json raises = json::object();
  for (const auto& [k, v] : report.raise_histogram) raises[std::to_string(k)] = v;
  json stucks = json::object();
  for (const auto& [k, v] : report.stuck_histogram) stucks[std::to_string(k)] = v;
  return json{{"passed", report.passed()},
              {"checks", checks},
              {"raise_histogram", raises},
              {"stuck_histogram", stucks},
              {"max_level_delta", report.max_level_delta},
              {"max_message_bits", report.max_message_bits},
              {"snapshots_checked", report.snapshots_checked}};
}

// ---------------------------------------------------------------------------
// Traces

void write_trace(std::ostream& out, const Hypergraph& h, const ProtocolParams& params, const RunTrace& trace) {
  out << json{{"type", "header"},
              {"params", params_to_json(params)},
              {"n", h.num_vertices()},
              {"m", h.num_edges()},
              {"iteration_cap", trace.iteration_cap}}
             .dump()
      << '\n';
  for (const auto& record : trace.rounds) {
    json messages = json::array();
    for (const auto& m : record.messages) {
      messages.push_back(json::array({node_name(m.from), node_name(m.to), std::string(congest::to_string(m.msg.kind)),
                                      m.msg.first.get_str(), m.msg.second.get_str(), m.bits, m.delivered}));
    }
    json line{{"type", "round"},
              {"round", record.round},
              {"iteration", record.iteration},
              {"phase", std::string(to_string(record.phase))},
              {"messages", messages}};
    if (record.snapshot) {
      const Snapshot& s = *record.snapshot;
      json vertices = json::array();
      for (const auto& v : s.vertices) {
        vertices.push_back(json::array({v.level, v.in_cover, v.terminated, to_fraction_string(v.dual_sum), v.uncovered}));
      }
      json edges = json::array();
      for (const auto& e : s.edges) {
        edges.push_back(json::array({to_fraction_string(e.deal), to_fraction_string(e.dual), e.covered, e.terminated}));
      }
      line["snapshot"] = json{{"stage", s.stage == SnapshotStage::Mid ? "mid" : "end"},
                              {"vertices", vertices},
                              {"edges", edges}};
    }
    out << line.dump() << '\n';
  }
  json stuck = json::array();
  for (const auto& [key, count] : trace.stuck_count) stuck.push_back(json::array({key.first, key.second, count}));
  auto optional = [](const std::optional<std::uint32_t>& x) { return x ? json(*x) : json(); };
  out << json{{"type", "summary"},
              {"termination_iteration", trace.termination_iteration},
              {"capped", trace.capped},
              {"all_terminated", trace.all_terminated},
              {"cover_complete_iteration", optional(trace.cover_complete_iteration)},
              {"local_termination_iteration", optional(trace.local_termination_iteration)},
              {"max_message_bits", trace.max_message_bits},
              {"message_count", trace.message_count},
              {"locality_violations", trace.locality_violations},
              {"raise_count", trace.raise_count},
              {"covered_iteration", trace.covered_iteration},
              {"stuck_count", stuck}}
             .dump()
      << '\n';
}

ParsedTrace read_trace(std::istream& in) {
  ParsedTrace parsed;
  bool header = false;
  bool summary = false;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const json j = json::parse(line);
      const std::string type = field<std::string>(j, "type");
      if (type == "header") {
        parsed.params = params_from_json(j.at("params"));
        parsed.trace.iteration_cap = field<std::uint32_t>(j, "iteration_cap");
        header = true;
      } else if (type == "round") {
        RoundRecord record;
        record.round = field<std::uint32_t>(j, "round");
        record.iteration = field<std::uint32_t>(j, "iteration");
        record.phase = phase_from_string(field<std::string>(j, "phase"));
        for (const auto& m : j.at("messages")) {
          congest::LoggedMessage msg;
          msg.from = node_from(m.at(0).get<std::string>());
          msg.to = node_from(m.at(1).get<std::string>());
          msg.msg.kind = congest::message_kind_from_string(m.at(2).get<std::string>());
          msg.msg.first = parse_bigint(m.at(3).get<std::string>());
          msg.msg.second = parse_bigint(m.at(4).get<std::string>());
          msg.bits = m.at(5).get<std::uint32_t>();
          msg.delivered = m.at(6).get<bool>();
          record.messages.push_back(std::move(msg));
        }
        if (j.contains("snapshot")) {
          const json& s = j.at("snapshot");
          Snapshot snap;
          snap.stage = field<std::string>(s, "stage") == "mid" ? SnapshotStage::Mid : SnapshotStage::End;
          for (const auto& v : s.at("vertices")) {
            VertexSnapshot vs;
            vs.level = v.at(0).get<std::uint32_t>();
            vs.in_cover = v.at(1).get<bool>();
            vs.terminated = v.at(2).get<bool>();
            vs.dual_sum = parse_rational(v.at(3).get<std::string>());
            vs.uncovered = v.at(4).get<std::vector<std::uint32_t>>();
            snap.vertices.push_back(std::move(vs));
          }
          for (const auto& e : s.at("edges")) {
            snap.edges.push_back(EdgeSnapshot{parse_rational(e.at(0).get<std::string>()),
                                              parse_rational(e.at(1).get<std::string>()), e.at(2).get<bool>(),
                                              e.at(3).get<bool>()});
          }
          record.snapshot = std::move(snap);
        }
        parsed.trace.max_message_bits = std::max(parsed.trace.max_message_bits, [&] {
          std::uint32_t b = 0;
          for (const auto& m : record.messages) b = std::max(b, m.bits);
          return b;
        }());
        parsed.trace.rounds.push_back(std::move(record));
      } else if (type == "summary") {
        RunTrace& t = parsed.trace;
        t.termination_iteration = field<std::uint32_t>(j, "termination_iteration");
        t.capped = field<bool>(j, "capped");
        t.all_terminated = field<bool>(j, "all_terminated");
        if (!j.at("cover_complete_iteration").is_null()) {
          t.cover_complete_iteration = j.at("cover_complete_iteration").get<std::uint32_t>();
        }
        if (!j.at("local_termination_iteration").is_null()) {
          t.local_termination_iteration = j.at("local_termination_iteration").get<std::uint32_t>();
        }
        t.max_message_bits = field<std::uint32_t>(j, "max_message_bits");
        t.message_count = field<std::size_t>(j, "message_count");
        t.locality_violations = field<std::size_t>(j, "locality_violations");
        t.raise_count = field<std::vector<std::uint32_t>>(j, "raise_count");
        t.covered_iteration = field<std::vector<std::uint32_t>>(j, "covered_iteration");
        for (const auto& s : j.at("stuck_count")) {
          t.stuck_count[{s.at(0).get<std::uint32_t>(), s.at(1).get<std::uint32_t>()}] = s.at(2).get<std::uint32_t>();
        }
        summary = true;
      } else {
        throw Error(ErrorCode::BadInput, "unknown record type '" + type + "'");
      }
    }
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::BadInput, "trace line " + std::to_string(line_no) + ": " + ex.what());
  }
  if (!header || !summary) throw Error(ErrorCode::BadInput, "trace lacks a header or summary line");
  return parsed;
}

// ---------------------------------------------------------------------------
// Covering programs

ilp::CoveringILP ilp_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("weights")) {
    throw Error(ErrorCode::BadInput, "program needs 'rows' and 'weights'");
  }
  ilp::CoveringILP p;
  std::map<std::string, std::uint32_t> index;
  std::vector<std::optional<Rational>> weights;
  auto var = [&](const std::string& name) {
    auto [it, inserted] = index.emplace(name, static_cast<std::uint32_t>(p.names.size()));
    if (inserted) {
      p.names.push_back(name);
      weights.emplace_back();
    }
    return it->second;
  };
  if (!j.at("weights").is_object()) throw Error(ErrorCode::BadInput, "'weights' must map variable names to numbers");
  for (const auto& [name, value] : j.at("weights").items()) weights[var(name)] = rational_from_json(value);
  for (const auto& row : j.at("rows")) {
    if (!row.is_object() || !row.contains("coeffs") || !row.contains("b")) {
      throw Error(ErrorCode::BadInput, "rows need 'coeffs' and 'b'");
    }
    std::vector<ilp::Term> terms;
    for (const auto& [name, value] : row.at("coeffs").items()) terms.push_back(ilp::Term{var(name), rational_from_json(value)});
    p.rows.push_back(std::move(terms));
    p.b.push_back(rational_from_json(row.at("b")));
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!weights[k]) throw Error(ErrorCode::BadInput, "variable '" + p.names[k] + "' has no weight");
    p.w.push_back(*weights[k]);
  }
  return p;
}

json ilp_to_json(const ilp::CoveringILP& p) {
  auto name = [&](std::uint32_t j) { return j < p.names.size() ? p.names[j] : "x" + std::to_string(j); };
  json weights = json::object();
  for (std::uint32_t j = 0; j < p.num_vars(); ++j) weights[name(j)] = to_fraction_string(p.w[j]);
  json rows = json::array();
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    json coeffs = json::object();
    for (const auto& t : p.rows[i]) coeffs[name(t.var)] = to_fraction_string(t.coeff);
    rows.push_back(json{{"coeffs", coeffs}, {"b", to_fraction_string(p.b[i])}});
  }
  return json{{"rows", rows}, {"weights", weights}};
}

ilp::CoveringILP load_ilp(const std::string& path) {
  try {
    return ilp_from_json(json::parse(read_file(path)));
  } catch (const json::exception& ex) {
    throw Error(ErrorCode::BadInput, std::string("malformed program: ") + ex.what());
  }
}

json ilp_solution_to_json(const ilp::CoveringILP& p, const ilp::IlpSolution& s) {
  json x = json::object();
  for (std::uint32_t j = 0; j < s.x.size(); ++j) x[j < p.names.size() ? p.names[j] : "x" + std::to_string(j)] = integer_json(s.x[j]);
  json fixed = json::array();
  for (auto j : s.fixed_vars) fixed.push_back(p.names.at(j));
  const auto& os = s.original_stats;
  json out{{"feasible", s.feasible},
           {"value", to_fraction_string(s.value)},
           {"x", x},
           {"fixed_zero_weight", fixed},
           {"program", json{{"f", os.f},
                            {"delta", os.delta},
                            {"M", os.M ? json(to_fraction_string(*os.M)) : json()},
                            {"box", integer_json(os.box)}}},
           {"zero_one", json{{"variables", s.zo.program.num_vars()},
                             {"rows", s.zo.program.num_rows()},
                             {"bits", s.zo.bits},
                             {"rank_within_bound", s.zo_rank_within_bound},
                             {"degree_preserved", s.zo_degree_preserved}}},
           {"hypergraph", json{{"rank", s.hyper_rank},
                               {"max_degree", s.hyper_max_degree},
                               {"weight_scale", integer_json(s.weight_scale)},
                               {"edges_enumerated", s.reduction.edges_enumerated},
                               {"edges_kept", s.reduction.edges_kept},
                               {"zo_f", s.reduction.zo_f},
                               {"zo_delta", s.reduction.zo_delta},
                               {"rank_within_bound", s.reduction.rank_within_bound},
                               {"rank_strict", s.reduction.rank_strict},
                               {"degree_within_bound", s.reduction.degree_within_bound}}}};
  if (s.run && s.hypergraph) {
    out["run"] = json{{"iterations", s.run->iterations()},
                      {"rounds", s.run->trace.rounds_executed()},
                      {"max_message_bits", s.run->trace.max_message_bits},
                      {"params", params_to_json(s.run->params)}};
  }
  if (s.certificate && s.hypergraph) out["certificate"] = certificate_to_json(*s.hypergraph, *s.certificate);
  return out;
}

}  // namespace hypercover::io
