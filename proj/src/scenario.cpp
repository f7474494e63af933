#include "vsl/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "vsl/errors.hpp"
#include "vsl/integrator.hpp"

namespace vsl {
namespace {

std::string location_of(const YAML::Node& node, const std::string& source) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return source;
  std::ostringstream out;
  out << source << ":" << m.line + 1 << ":" << m.column + 1;
  return out.str();
}

[[noreturn]] void schema_fail(const std::string& field, const YAML::Node& node,
                              const std::string& source, const std::string& problem) {
  const std::string where = location_of(node, source);
  throw SchemaError(field, where, where + ": field '" + field + "': " + problem);
}

// Walks one mapping, remembers which keys were consumed and rejects the rest.
class MapReader {
 public:
  MapReader(const YAML::Node& node, std::string path, const std::string& source)
      : node_(node), path_(std::move(path)), source_(source) {
    if (!node_.IsMap()) schema_fail(path_.empty() ? "<root>" : path_, node_, source_, "expected a mapping");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    const YAML::Node& view = node_;
    return view[key];
  }

  YAML::Node required(const std::string& key) {
    YAML::Node n = child(key);
    if (!n || n.IsNull()) schema_fail(field(key), node_, source_, "required field missing");
    return n;
  }

  double number(const std::string& key, double fallback) {
    YAML::Node n = child(key);
    if (!n) return fallback;
    return as_number(n, key);
  }

  double required_number(const std::string& key) { return as_number(required(key), key); }

  double as_number(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) schema_fail(field(key), n, source_, "expected a number");
    try {
      const double v = n.as<double>();
      if (!std::isfinite(v)) schema_fail(field(key), n, source_, "expected a finite number");
      return v;
    } catch (const YAML::Exception&) {
      schema_fail(field(key), n, source_, "expected a number, got '" + n.Scalar() + "'");
    }
  }

  std::string string(const std::string& key, const std::string& fallback) {
    YAML::Node n = child(key);
    if (!n) return fallback;
    if (!n.IsScalar()) schema_fail(field(key), n, source_, "expected a string");
    return n.Scalar();
  }

  const YAML::Node& node() const { return node_; }

  void finish() const {
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.contains(key)) schema_fail(field(key), kv.first, source_, "unknown field");
    }
  }

 private:
  YAML::Node node_;
  std::string path_;
  const std::string& source_;
  std::set<std::string> seen_;
};

template <typename Fn>
void for_each_item(MapReader& parent, const std::string& key, const std::string& source, Fn&& fn) {
  YAML::Node list = parent.child(key);
  if (!list || list.IsNull()) return;
  if (!list.IsSequence()) schema_fail(parent.field(key), list, source, "expected a list");
  for (std::size_t i = 0; i < list.size(); ++i) {
    MapReader item(list[i], parent.field(key) + "[" + std::to_string(i) + "]", source);
    fn(item, i);
    item.finish();
  }
}

Axis parse_axis(MapReader& r, const std::string& source) {
  YAML::Node n = r.child("axis");
  if (!n) return Axis::x;
  const std::string v = n.IsScalar() ? n.Scalar() : "";
  if (v == "x" || v == "roll") return Axis::x;
  if (v == "y" || v == "pitch") return Axis::y;
  schema_fail(r.field("axis"), n, source, "expected x|y");
}

TorqueTarget parse_target(MapReader& r, const std::string& source) {
  YAML::Node n = r.child("target");
  if (!n) return TorqueTarget::tip;
  const std::string v = n.IsScalar() ? n.Scalar() : "";
  if (v == "tip") return TorqueTarget::tip;
  if (v == "body") return TorqueTarget::body;
  schema_fail(r.field("target"), n, source, "expected tip|body");
}

[[noreturn]] void invalid(const std::string& field, const std::string& problem) {
  throw ValidationError(field + ": " + problem);
}

void check_time(const std::string& field, double t, double duration) {
  if (t < 0.0 || t > duration) {
    std::ostringstream msg;
    msg << "event time " << t << " outside [0, " << duration << "]";
    invalid(field, msg.str());
  }
}

void check_sigma(const std::string& field, double sigma) {
  try {
    validate_sigma(sigma);
  } catch (const DomainError& e) {
    invalid(field, e.what());
  }
}

double remap_mass(const std::string& field, double m) {
  try {
    validate_payload_mass(m);
  } catch (const DomainError& e) {
    invalid(field, e.what());
  }
  return m == 0.0 ? kResidualTipMass : m;
}

std::vector<AnalysisWindow> derive_windows(const Scenario& s) {
  std::vector<AnalysisWindow> out;
  if (s.stiffness_schedule.empty()) {
    out.push_back({"full", 0.0, s.duration});
    return out;
  }
  std::vector<double> edges{0.0};
  for (const auto& c : s.stiffness_schedule) {
    if (c.t > edges.back()) edges.push_back(c.t);
  }
  if (s.duration > edges.back()) edges.push_back(s.duration);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double sigma = s.initial_sigma;
    for (const auto& c : s.stiffness_schedule) {
      if (c.t <= edges[i]) sigma = c.sigma_target;
    }
    std::ostringstream label;
    label << "segment_" << i << "_sigma_" << sigma;
    out.push_back({label.str(), edges[i], edges[i + 1]});
  }
  return out;
}

void read_axis_state(MapReader& r, AxisState& a) {
  a.theta = r.number("theta", a.theta);
  a.theta_dot = r.number("theta_dot", a.theta_dot);
  a.alpha = r.number("alpha", a.alpha);
  a.alpha_dot = r.number("alpha_dot", a.alpha_dot);
}

}  // namespace

std::string to_string(PayloadLabel label) {
  switch (label) {
    case PayloadLabel::pickup: return "pickup";
    case PayloadLabel::release: return "release";
    case PayloadLabel::none: break;
  }
  return "none";
}

std::string to_string(Axis axis) { return axis == Axis::x ? "x" : "y"; }

std::string to_string(TorqueTarget target) { return target == TorqueTarget::tip ? "tip" : "body"; }

YAML::Node parse_document(std::string_view document, const std::string& source) {
  try {
    return YAML::Load(std::string(document));
  } catch (const YAML::ParserException& e) {
    std::ostringstream where;
    where << source << ":" << e.mark.line + 1 << ":" << e.mark.column + 1;
    throw SchemaError("<document>", where.str(), where.str() + ": malformed document: " + e.msg);
  }
}

YAML::Node read_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str(), path.string());
}

Scenario scenario_from_node(const YAML::Node& root, const std::string& source) {
  if (!root || root.IsNull()) {
    throw SchemaError("<root>", source, source + ": empty document");
  }
  MapReader r(root, "", source);
  Scenario s;

  const YAML::Node version = r.required("schema_version");
  if (!version.IsScalar() || version.Scalar() != std::to_string(kScenarioSchemaVersion)) {
    schema_fail("schema_version", version, source,
                "unsupported version '" + (version.IsScalar() ? version.Scalar() : std::string("?")) +
                    "', expected 1");
  }
  {
    YAML::Node n = r.required("name");
    if (!n.IsScalar()) schema_fail("name", n, source, "expected a string");
    s.name = n.Scalar();
  }
  s.duration = r.required_number("duration");
  s.dt = r.required_number("dt");
  {
    YAML::Node n = r.child("decimate");
    if (n) {
      try {
        s.decimate = n.as<int>();
      } catch (const YAML::Exception&) {
        schema_fail("decimate", n, source, "expected an integer");
      }
    }
  }
  s.initial_sigma = r.number("initial_sigma", 0.0);
  s.position_tau = r.number("position_tau", s.position_tau);

  if (YAML::Node n = r.child("initial_state"); n && !n.IsNull()) {
    MapReader st(n, "initial_state", source);
    for (const char* key : {"x", "y"}) {
      if (YAML::Node a = st.child(key); a && !a.IsNull()) {
        MapReader ar(a, st.field(key), source);
        read_axis_state(ar, s.initial_state[key[0] == 'x' ? 0 : 1]);
        ar.finish();
      }
    }
    st.finish();
  }

  if (YAML::Node n = r.child("params"); n && !n.IsNull()) {
    MapReader p(n, "params", source);
    ModelParams& m = s.params;
    m.J_att = p.number("J_att", m.J_att);
    m.K_c = p.number("K_c", m.K_c);
    m.D_c = p.number("D_c", m.D_c);
    m.m_p = p.number("m_p", m.m_p);
    m.l = p.number("l", m.l);
    m.g = p.number("g", m.g);
    m.c_p = p.number("c_p", m.c_p);
    m.k_max = p.number("k_max", m.k_max);
    m.c_max = p.number("c_max", m.c_max);
    p.finish();
  }

  if (YAML::Node n = r.child("actuator"); n && !n.IsNull()) {
    MapReader p(n, "actuator", source);
    ActuatorParams& a = s.actuator;
    a.pos_rigid = p.number("pos_rigid", a.pos_rigid);
    a.kp = p.number("kp", a.kp);
    a.ki = p.number("ki", a.ki);
    a.kd = p.number("kd", a.kd);
    a.v_max = p.number("v_max", a.v_max);
    a.tau = p.number("tau", a.tau);
    a.deadband = p.number("deadband", a.deadband);
    a.f_hold = p.number("f_hold", a.f_hold);
    p.finish();
  }

  for_each_item(r, "stiffness_schedule", source, [&](MapReader& it, std::size_t) {
    s.stiffness_schedule.push_back({it.required_number("t"), it.required_number("sigma")});
  });
  for_each_item(r, "payload_events", source, [&](MapReader& it, std::size_t) {
    PayloadEvent ev;
    ev.t = it.required_number("t");
    ev.new_m_p = it.required_number("m_p");
    const std::string label = it.string("label", "none");
    if (label == "pickup") ev.label = PayloadLabel::pickup;
    else if (label == "release") ev.label = PayloadLabel::release;
    else if (label == "none") ev.label = PayloadLabel::none;
    else schema_fail(it.field("label"), it.node()["label"], source, "expected pickup|release|none");
    s.payload_events.push_back(ev);
  });
  for_each_item(r, "position_setpoints", source, [&](MapReader& it, std::size_t) {
    s.position_setpoints.push_back({it.required_number("t"), it.number("x", 0.0), it.number("y", 0.0)});
  });

  std::vector<ImpulseEvent> impulses;
  std::vector<SustainedEvent> sustained;
  std::uint64_t seed = 0;
  if (YAML::Node n = r.child("disturbances"); n && !n.IsNull()) {
    MapReader d(n, "disturbances", source);
    if (YAML::Node sn = d.child("seed"); sn) {
      try {
        seed = sn.as<std::uint64_t>();
      } catch (const YAML::Exception&) {
        schema_fail("disturbances.seed", sn, source, "expected a non-negative integer");
      }
    }
    for_each_item(d, "impulses", source, [&](MapReader& it, std::size_t) {
      ImpulseEvent ev;
      ev.t_start = it.required_number("t");
      ev.duration = it.number("duration", ev.duration);
      ev.magnitude = it.required_number("magnitude");
      ev.axis = parse_axis(it, source);
      ev.target = parse_target(it, source);
      impulses.push_back(ev);
    });
    for_each_item(d, "sustained", source, [&](MapReader& it, std::size_t) {
      SustainedEvent ev;
      ev.t_start = it.required_number("t_start");
      ev.t_end = it.required_number("t_end");
      ev.mean = it.number("mean", 0.0);
      ev.gust_amplitude = it.number("gust_amplitude", 0.0);
      ev.gust_period = it.number("gust_period", 1.0);
      ev.axis = parse_axis(it, source);
      ev.target = parse_target(it, source);
      sustained.push_back(ev);
    });
    d.finish();
  }

  bool explicit_windows = false;
  for_each_item(r, "windows", source, [&](MapReader& it, std::size_t) {
    explicit_windows = true;
    AnalysisWindow w;
    YAML::Node label = it.required("label");
    w.label = label.Scalar();
    w.t0 = it.required_number("t0");
    w.t1 = it.required_number("t1");
    s.windows.push_back(w);
  });
  r.finish();

  // Semantic validation.
  if (!(s.duration > 0.0)) invalid("duration", "must be > 0");
  try {
    validate_dt(s.dt);
  } catch (const DomainError& e) {
    invalid("dt", e.what());
  }
  if (s.decimate < 1) invalid("decimate", "must be >= 1");
  if (!(s.position_tau > 0.0)) invalid("position_tau", "must be > 0");
  check_sigma("initial_sigma", s.initial_sigma);
  s.params.m_p = remap_mass("params.m_p", s.params.m_p);
  try {
    validate(s.params);
    validate(s.actuator);
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }

  auto ordered = [](const auto& list, const std::string& name, auto time_of, double duration) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string field = name + "[" + std::to_string(i) + "].t";
      check_time(field, time_of(list[i]), duration);
      if (i > 0 && time_of(list[i]) < time_of(list[i - 1])) invalid(field, "events not time-ordered");
    }
  };
  ordered(s.stiffness_schedule, "stiffness_schedule", [](const auto& e) { return e.t; }, s.duration);
  ordered(s.payload_events, "payload_events", [](const auto& e) { return e.t; }, s.duration);
  ordered(s.position_setpoints, "position_setpoints", [](const auto& e) { return e.t; }, s.duration);
  ordered(impulses, "disturbances.impulses", [](const auto& e) { return e.t_start; }, s.duration);
  for (std::size_t i = 0; i < s.stiffness_schedule.size(); ++i) {
    check_sigma("stiffness_schedule[" + std::to_string(i) + "].sigma", s.stiffness_schedule[i].sigma_target);
  }
  for (std::size_t i = 0; i < s.payload_events.size(); ++i) {
    s.payload_events[i].new_m_p =
        remap_mass("payload_events[" + std::to_string(i) + "].m_p", s.payload_events[i].new_m_p);
  }
  for (std::size_t i = 0; i < sustained.size(); ++i) {
    const std::string field = "disturbances.sustained[" + std::to_string(i) + "]";
    check_time(field + ".t_start", sustained[i].t_start, s.duration);
    check_time(field + ".t_end", sustained[i].t_end, s.duration);
  }
  s.disturbances = DisturbanceSignal(std::move(impulses), std::move(sustained), seed);

  if (!explicit_windows) {
    s.windows = derive_windows(s);
  }
  for (std::size_t i = 0; i < s.windows.size(); ++i) {
    const auto& w = s.windows[i];
    const std::string field = "windows[" + std::to_string(i) + "]";
    if (!(w.t1 > w.t0)) invalid(field, "needs t1 > t0");
    check_time(field + ".t0", w.t0, s.duration);
    check_time(field + ".t1", w.t1, s.duration);
    if (i > 0 && w.t0 < s.windows[i - 1].t1) invalid(field, "windows overlap or are unordered");
    for (std::size_t j = 0; j < i; ++j) {
      if (s.windows[j].label == w.label) invalid(field, "duplicate window label '" + w.label + "'");
    }
  }
  return s;
}

Scenario load_scenario(std::string_view document, const std::string& source) {
  return scenario_from_node(parse_document(document, source), source);
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  return scenario_from_node(read_document(path), path.string());
}

void set_path(YAML::Node& root, std::string_view path, const YAML::Node& value) {
  if (path.empty()) throw SchemaError("<override>", "<override>", "empty override path");
  if (path == "sigma") {
    try {
      set_constant_sigma(root, value.as<double>());
    } catch (const YAML::Exception&) {
      throw SchemaError("sigma", "<override>", "override 'sigma' expects a number");
    }
    return;
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const std::size_t dot = path.find('.', start);
    const std::size_t end = dot == std::string_view::npos ? path.size() : dot;
    parts.emplace_back(path.substr(start, end - start));
    if (parts.back().empty()) {
      throw SchemaError(std::string(path), "<override>", "malformed override path '" + std::string(path) + "'");
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }

  YAML::Node cur = root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    const bool last = i + 1 == parts.size();
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), index);
    const bool numeric = ec == std::errc{} && ptr == part.data() + part.size();
    if (cur.IsSequence()) {
      if (!numeric || index >= cur.size()) {
        throw SchemaError(std::string(path), "<override>",
                          "override path '" + std::string(path) + "': no list element '" + part + "'");
      }
      if (last) {
        cur[index] = value;
        return;
      }
      YAML::Node next = cur[index];
      cur.reset(next);
      continue;
    }
    if (cur.IsScalar()) {
      throw SchemaError(std::string(path), "<override>",
                        "override path '" + std::string(path) + "' descends into a scalar at '" + part + "'");
    }
    if (last) {
      cur[part] = value;
      return;
    }
    YAML::Node next = cur[part];
    if (!next || next.IsNull()) {
      cur[part] = YAML::Node(YAML::NodeType::Map);
      next = cur[part];
    }
    cur.reset(next);
  }
}

void apply_override(YAML::Node& root, std::string_view assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw SchemaError("<override>", "<override>",
                      "override must be key=value (got '" + std::string(assignment) + "')");
  }
  const std::string_view key = assignment.substr(0, eq);
  const std::string value(assignment.substr(eq + 1));
  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception&) {
    parsed = YAML::Node(value);
  }
  set_path(root, key, parsed);
}

void set_constant_sigma(YAML::Node& root, double sigma) {
  root["initial_sigma"] = sigma;
  YAML::Node schedule(YAML::NodeType::Sequence);
  YAML::Node entry(YAML::NodeType::Map);
  entry["t"] = 0.0;
  entry["sigma"] = sigma;
  schedule.push_back(entry);
  root["stiffness_schedule"] = schedule;
}

}  // namespace vsl
