// Copyright 2026 The Basinsep Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "basinsep/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "basinsep/csv.hpp"

namespace basinsep {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("config key " + key + ": bad real value '" +
                                value + "'");
  }
  return out;
}

long parse_long(const std::string& key, const std::string& value) {
  long out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("config key " + key + ": bad integer '" +
                                value + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("config key " + key + ": bad unsigned '" +
                                value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config key " + key + ": bad boolean '" + value +
                              "'");
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> parts;
  std::string current;
  std::stringstream ss(value);
  while (std::getline(ss, current, ',')) {
    current = trim(current);
    if (!current.empty()) parts.push_back(current);
  }
  return parts;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += format_double(xs[i]);
  }
  return out;
}

std::string join_longs(const std::vector<long>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out;
}

// Commands a key applies to, as a bitmask.
enum : unsigned {
  kSep = 1u << 0,
  kQuad = 1u << 1,
  kSched = 1u << 2,
  kLand = 1u << 3,
  kCal = 1u << 4,
  kSelf = 1u << 5,
};

unsigned command_bit(Command command) {
  switch (command) {
    case Command::separation: return kSep;
    case Command::quadratic: return kQuad;
    case Command::schedule: return kSched;
    case Command::landscape: return kLand;
    case Command::calibrate: return kCal;
    case Command::selftest: return kSelf;
  }
  return 0;
}

struct KeyHandler {
  const char* name;
  unsigned commands;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

// The spec struct a command reads its loss constants from.
BasinLossSpec& spec_of(RunConfig& c) {
  switch (c.command) {
    case Command::schedule: return c.sched.spec;
    case Command::landscape: return c.land.spec;
    case Command::calibrate: return c.cal.spec;
    default: return c.sep.spec;
  }
}

const BasinLossSpec& spec_of(const RunConfig& c) {
  return spec_of(const_cast<RunConfig&>(c));
}

DpSgdConfig& dp_of(RunConfig& c) {
  return c.command == Command::schedule ? c.sched.dp : c.sep.dp;
}

const DpSgdConfig& dp_of(const RunConfig& c) {
  return dp_of(const_cast<RunConfig&>(c));
}

const std::vector<KeyHandler>& registry() {
  static const std::vector<KeyHandler> handlers = [] {
    std::vector<KeyHandler> h;
    const unsigned all = kSep | kQuad | kSched | kLand | kCal | kSelf;
    const unsigned arms = kSep | kQuad;
    const unsigned dpruns = kSep | kQuad | kSched;
    const unsigned specful = kSep | kQuad | kSched | kLand | kCal;

    h.push_back({"run.root_seed", all,
                 [](RunConfig& c, const std::string& v) {
                   c.root_seed = parse_u64("run.root_seed", v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.root_seed); }});
    h.push_back({"run.seeds", dpruns,
                 [](RunConfig& c, const std::string& v) {
                   const long n = parse_long("run.seeds", v);
                   if (c.command == Command::schedule)
                     c.sched.seeds = static_cast<int>(n);
                   else
                     c.sep.seeds = static_cast<int>(n);
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.command == Command::schedule
                                             ? c.sched.seeds
                                             : c.sep.seeds);
                 }});
    h.push_back({"run.n_mc", dpruns,
                 [](RunConfig& c, const std::string& v) {
                   const long n = parse_long("run.n_mc", v);
                   if (c.command == Command::schedule)
                     c.sched.n_mc = n;
                   else
                     c.sep.n_mc = n;
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.command == Command::schedule
                                             ? c.sched.n_mc
                                             : c.sep.n_mc);
                 }});
    h.push_back({"run.evaluator", dpruns,
                 [](RunConfig& c, const std::string& v) {
                   EvaluatorPreference pref;
                   if (v == "auto")
                     pref = EvaluatorPreference::closed_form_when_valid;
                   else if (v == "mc")
                     pref = EvaluatorPreference::monte_carlo;
                   else
                     throw std::invalid_argument(
                         "config key run.evaluator: expected auto or mc");
                   if (c.command == Command::schedule)
                     c.sched.evaluator = pref;
                   else
                     c.sep.evaluator = pref;
                 },
                 [](const RunConfig& c) {
                   const EvaluatorPreference pref =
                       c.command == Command::schedule ? c.sched.evaluator
                                                      : c.sep.evaluator;
                   return std::string(
                       pref == EvaluatorPreference::monte_carlo ? "mc"
                                                                : "auto");
                 }});
    h.push_back({"run.scaling", arms,
                 [](RunConfig& c, const std::string& v) {
                   if (v == "desk")
                     c.sep.scaling = ScalingMode::desk;
                   else if (v == "theorem")
                     c.sep.scaling = ScalingMode::theorem;
                   else
                     throw std::invalid_argument(
                         "config key run.scaling: expected desk or theorem");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.sep.scaling == ScalingMode::desk
                                          ? "desk"
                                          : "theorem");
                 }});
    h.push_back({"run.dump_data", arms,
                 [](RunConfig& c, const std::string& v) {
                   c.dump_data = parse_bool("run.dump_data", v);
                 },
                 [](const RunConfig& c) {
                   return std::string(c.dump_data ? "true" : "false");
                 }});

    h.push_back({"task.mode", arms,
                 [](RunConfig& c, const std::string& v) {
                   if (v == "id")
                     c.sep.mode = TaskMode::id;
                   else if (v == "ood")
                     c.sep.mode = TaskMode::ood;
                   else
                     throw std::invalid_argument(
                         "config key task.mode: expected id or ood");
                 },
                 [](const RunConfig& c) {
                   return std::string(task_mode_name(c.sep.mode));
                 }});
    h.push_back({"task.rho", arms | kSched | kCal,
                 [](RunConfig& c, const std::string& v) {
                   const double rho = parse_double("task.rho", v);
                   if (c.command == Command::schedule)
                     c.sched.rho = rho;
                   else if (c.command == Command::calibrate)
                     c.cal.rho = rho;
                   else
                     c.sep.rho = rho;
                 },
                 [](const RunConfig& c) {
                   double rho = c.sep.rho;
                   if (c.command == Command::schedule) rho = c.sched.rho;
                   if (c.command == Command::calibrate) rho = c.cal.rho;
                   return format_double(rho);
                 }});

    auto spec_key = [&h, specful](const char* name, auto member) {
      h.push_back({name, specful,
                   [name, member](RunConfig& c, const std::string& v) {
                     spec_of(c).*member = parse_double(name, v);
                   },
                   [member](const RunConfig& c) {
                     return format_double(spec_of(c).*member);
                   }});
    };
    h.push_back({"spec.p", specful,
                 [](RunConfig& c, const std::string& v) {
                   spec_of(c).p = static_cast<int>(parse_long("spec.p", v));
                 },
                 [](const RunConfig& c) {
                   return std::to_string(spec_of(c).p);
                 }});
    h.push_back({"spec.dim1", specful,
                 [](RunConfig& c, const std::string& v) {
                   spec_of(c).dim1 =
                       static_cast<std::size_t>(parse_long("spec.dim1", v));
                 },
                 [](const RunConfig& c) {
                   return std::to_string(spec_of(c).dim1);
                 }});
    h.push_back({"spec.dim2", specful,
                 [](RunConfig& c, const std::string& v) {
                   spec_of(c).dim2 =
                       static_cast<std::size_t>(parse_long("spec.dim2", v));
                 },
                 [](const RunConfig& c) {
                   return std::to_string(spec_of(c).dim2);
                 }});
    spec_key("spec.M", &BasinLossSpec::M);
    spec_key("spec.R1", &BasinLossSpec::R1);
    spec_key("spec.R2", &BasinLossSpec::R2);
    spec_key("spec.r", &BasinLossSpec::r);
    h.push_back({"spec.hard_gate", specful,
                 [](RunConfig& c, const std::string& v) {
                   spec_of(c).hard_gate = parse_bool("spec.hard_gate", v);
                 },
                 [](const RunConfig& c) {
                   return std::string(spec_of(c).hard_gate ? "true" : "false");
                 }});

    h.push_back({"data.n_pub", arms,
                 [](RunConfig& c, const std::string& v) {
                   c.sep.n_pub = parse_long("data.n_pub", v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.sep.n_pub); }});
    h.push_back({"data.n_priv", arms | kSched,
                 [](RunConfig& c, const std::string& v) {
                   const long n = parse_long("data.n_priv", v);
                   if (c.command == Command::schedule)
                     c.sched.n_priv = n;
                   else
                     c.sep.n_priv = n;
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.command == Command::schedule
                                             ? c.sched.n_priv
                                             : c.sep.n_priv);
                 }});

    auto dp_key = [&h, dpruns](const char* name, auto member) {
      h.push_back({name, dpruns,
                   [name, member](RunConfig& c, const std::string& v) {
                     dp_of(c).*member = parse_double(name, v);
                   },
                   [member](const RunConfig& c) {
                     return format_double(dp_of(c).*member);
                   }});
    };
    dp_key("dp.epsilon", &DpSgdConfig::epsilon);
    dp_key("dp.delta", &DpSgdConfig::delta);
    dp_key("dp.m", &DpSgdConfig::m);
    dp_key("dp.L", &DpSgdConfig::L);
    dp_key("dp.sigma", &DpSgdConfig::sigma);
    dp_key("dp.c_sigma", &DpSgdConfig::c_sigma);
    h.push_back({"dp.T", dpruns,
                 [](RunConfig& c, const std::string& v) {
                   dp_of(c).T = parse_long("dp.T", v);
                 },
                 [](const RunConfig& c) { return std::to_string(dp_of(c).T); }});
    h.push_back({"dp.suffix_avg", dpruns,
                 [](RunConfig& c, const std::string& v) {
                   dp_of(c).suffix_averaging = parse_bool("dp.suffix_avg", v);
                 },
                 [](const RunConfig& c) {
                   return std::string(dp_of(c).suffix_averaging ? "true"
                                                                : "false");
                 }});

    auto sched_key = [&h](const char* name, auto member) {
      h.push_back({name, kSched,
                   [name, member](RunConfig& c, const std::string& v) {
                     c.sched.*member = parse_double(name, v);
                   },
                   [member](const RunConfig& c) {
                     return format_double(c.sched.*member);
                   }});
    };
    sched_key("schedule.low_mult", &ScheduleConfig::low_mult);
    sched_key("schedule.high_mult", &ScheduleConfig::high_mult);
    sched_key("schedule.split", &ScheduleConfig::split);

    h.push_back({"landscape.kind", kLand,
                 [](RunConfig& c, const std::string& v) {
                   for (const std::string& part : split_list(v)) {
                     if (part != "slice" && part != "heatmap" &&
                         part != "plane") {
                       throw std::invalid_argument(
                           "config key landscape.kind: expected a subset of "
                           "slice,heatmap,plane");
                     }
                   }
                   c.land.kinds = v;
                 },
                 [](const RunConfig& c) { return c.land.kinds; }});
    auto land_key = [&h](const char* name, auto member) {
      h.push_back({name, kLand,
                   [name, member](RunConfig& c, const std::string& v) {
                     c.land.*member = parse_double(name, v);
                   },
                   [member](const RunConfig& c) {
                     return format_double(c.land.*member);
                   }});
    };
    land_key("landscape.d1", &LandscapeConfig::d1);
    land_key("landscape.d2", &LandscapeConfig::d2);
    land_key("landscape.plane_margin", &LandscapeConfig::plane_margin);
    h.push_back({"landscape.lo1", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.range1.lo = parse_double("landscape.lo1", v);
                 },
                 [](const RunConfig& c) {
                   return format_double(c.land.range1.lo);
                 }});
    h.push_back({"landscape.hi1", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.range1.hi = parse_double("landscape.hi1", v);
                 },
                 [](const RunConfig& c) {
                   return format_double(c.land.range1.hi);
                 }});
    h.push_back({"landscape.n1", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.range1.n = parse_long("landscape.n1", v);
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.land.range1.n);
                 }});
    h.push_back({"landscape.lo2", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.range2.lo = parse_double("landscape.lo2", v);
                 },
                 [](const RunConfig& c) {
                   return format_double(c.land.range2.lo);
                 }});
    h.push_back({"landscape.hi2", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.range2.hi = parse_double("landscape.hi2", v);
                 },
                 [](const RunConfig& c) {
                   return format_double(c.land.range2.hi);
                 }});
    h.push_back({"landscape.n2", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.range2.n = parse_long("landscape.n2", v);
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.land.range2.n);
                 }});
    h.push_back({"landscape.plane_res", kLand,
                 [](RunConfig& c, const std::string& v) {
                   c.land.plane_res = parse_long("landscape.plane_res", v);
                 },
                 [](const RunConfig& c) {
                   return std::to_string(c.land.plane_res);
                 }});
    h.push_back({"landscape.theta2_slices", kLand,
                 [](RunConfig& c, const std::string& v) {
                   std::vector<double> xs;
                   for (const std::string& part : split_list(v)) {
                     xs.push_back(parse_double("landscape.theta2_slices", part));
                   }
                   if (xs.empty()) {
                     throw std::invalid_argument(
                         "config key landscape.theta2_slices: empty list");
                   }
                   c.land.theta2_slices = std::move(xs);
                 },
                 [](const RunConfig& c) {
                   return join_doubles(c.land.theta2_slices);
                 }});

    h.push_back({"calibrate.n_pub_grid", kCal,
                 [](RunConfig& c, const std::string& v) {
                   std::vector<long> xs;
                   for (const std::string& part : split_list(v)) {
                     xs.push_back(parse_long("calibrate.n_pub_grid", part));
                   }
                   if (xs.empty()) {
                     throw std::invalid_argument(
                         "config key calibrate.n_pub_grid: empty list");
                   }
                   c.cal.n_pub_grid = std::move(xs);
                 },
                 [](const RunConfig& c) { return join_longs(c.cal.n_pub_grid); }});
    h.push_back({"calibrate.trials", kCal,
                 [](RunConfig& c, const std::string& v) {
                   c.cal.trials = parse_long("calibrate.trials", v);
                 },
                 [](const RunConfig& c) { return std::to_string(c.cal.trials); }});
    h.push_back({"calibrate.margin_frac", kCal,
                 [](RunConfig& c, const std::string& v) {
                   c.cal.margin_frac = parse_double("calibrate.margin_frac", v);
                 },
                 [](const RunConfig& c) {
                   return format_double(c.cal.margin_frac);
                 }});
    return h;
  }();
  return handlers;
}

const KeyHandler* find_handler(const std::string& key) {
  for (const KeyHandler& h : registry()) {
    if (key == h.name) return &h;
  }
  return nullptr;
}

void apply_key(RunConfig& config, const std::string& key,
               const std::string& value, const std::string& source) {
  const KeyHandler* handler = find_handler(key);
  if (handler == nullptr) {
    throw std::invalid_argument(source + ": unknown config key '" + key + "'");
  }
  if ((handler->commands & command_bit(config.command)) == 0) {
    throw std::invalid_argument(source + ": key '" + key +
                                "' does not apply to command " +
                                command_name(config.command));
  }
  handler->set(config, value);
}

}  // namespace

const char* command_name(Command command) {
  switch (command) {
    case Command::separation: return "separation";
    case Command::quadratic: return "quadratic";
    case Command::schedule: return "schedule";
    case Command::landscape: return "landscape";
    case Command::calibrate: return "calibrate";
    case Command::selftest: return "selftest";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  if (name == "separation") return Command::separation;
  if (name == "quadratic") return Command::quadratic;
  if (name == "schedule") return Command::schedule;
  if (name == "landscape") return Command::landscape;
  if (name == "calibrate") return Command::calibrate;
  if (name == "selftest") return Command::selftest;
  throw std::invalid_argument("unknown command: " + name);
}

RunConfig RunConfig::defaults(Command command) {
  RunConfig config;
  config.command = command;
  switch (command) {
    case Command::separation:
    case Command::quadratic:
      config.sep = SeparationConfig::desk_default();
      break;
    case Command::schedule:
      config.sched = ScheduleConfig::default_config();
      break;
    case Command::landscape:
      config.land.spec = BasinLossSpec::toy();
      break;
    case Command::calibrate:
      config.cal.spec = BasinLossSpec::desk_default();
      break;
    case Command::selftest:
      break;
  }
  return config;
}

void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& source_name) {
  std::stringstream ss(text);
  std::string line;
  long line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(source_name + ":" + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    apply_key(config, key, value,
              source_name + ":" + std::to_string(line_no));
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  std::stringstream buffer;
  buffer << f.rdbuf();
  apply_config_text(config, buffer.str(), path);
}

void apply_override(RunConfig& config, const std::string& key_equals_value) {
  const std::size_t eq = key_equals_value.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("override must look like key=value: " +
                                key_equals_value);
  }
  apply_key(config, trim(key_equals_value.substr(0, eq)),
            trim(key_equals_value.substr(eq + 1)), "--set");
}

std::string manifest_text(const RunConfig& config) {
  std::string out = "# command: ";
  out += command_name(config.command);
  out += '\n';
  const unsigned bit = command_bit(config.command);
  for (const KeyHandler& h : registry()) {
    if ((h.commands & bit) == 0) continue;
    out += h.name;
    out += " = ";
    out += h.get(config);
    out += '\n';
  }
  return out;
}

}  // namespace basinsep
